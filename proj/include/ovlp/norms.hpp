// Copyright 2026 The ovlp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OVLP_NORMS_HPP
#define OVLP_NORMS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ovlp/optimize.hpp"

namespace ovlp {

/// ess sup ||f(x)|| over atoms of positive mass.
inline double inf_norm(const QRV& f, const MeasureContext& ctx) {
  detail::require_compatible(f, ctx);
  double m = 0.0;
  for (std::size_t i = 0; i < f.atoms(); ++i)
    if (!ctx.null_atom(i)) m = std::max(m, operator_norm(f[i]));
  return m;
}

/// ||∫ ||f(x)||^p I dν||^{1/p}.
inline double naive_norm(const QRV& f, double p, const MeasureContext& ctx) {
  if (std::isinf(p)) return inf_norm(f, ctx);
  require_exponent(p, "naive_norm");
  detail::require_compatible(f, ctx);
  Matrix acc = Matrix::Zero(f.dim(), f.dim());
  for (std::size_t i = 0; i < f.atoms(); ++i)
    if (!ctx.null_atom(i)) acc += std::pow(operator_norm(f[i]), p) * ctx.effect(i);
  return std::pow(std::max(0.0, max_eigenvalue(acc)), 1.0 / p);
}

namespace detail {

/// f = c·h with c ∈ {1, −1, i, −i} and h positive, if any.
inline std::optional<QRV> unit_positive_factor(const QRV& f) {
  for (Complex c : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
    const QRV h = scale(f, std::conj(c));
    if (h.is_positive()) return h.map([](const Matrix& v) { return hermitian_part(v); });
  }
  return std::nullopt;
}

/// (Σ_x w_x (D_x·a_x)^p)^{1/p} at dimension one; `a` maps a scalar value to a magnitude.
template <typename Fn>
double scalar_lp(const QRV& f, double p, const MeasureContext& ctx, Fn&& a) {
  RealVector h(static_cast<Eigen::Index>(f.atoms()));
  for (std::size_t i = 0; i < f.atoms(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (ctx.null_atom(i)) {
      h(k) = 0.0;
      continue;
    }
    const double c = std::isinf(p) ? 1.0 : std::pow(ctx.weight(i), 1.0 / p);
    h(k) = c * ctx.derivative(i)(0, 0).real() * a(f[i](0, 0));
  }
  return lp_norm(h, p);
}

inline double re_im_modulus(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

}  // namespace detail

/// ||f||_p: inf over Pos_f of the state supremum of ||(f1+f2+f3+f4)_s||_p.
inline NormEstimate p_norm(const QRV& f, double p, const MeasureContext& ctx, const SolverConfig& cfg = {}) {
  if (std::isinf(p)) return NormEstimate::exact(inf_norm(f, ctx), "inf");
  require_exponent(p, "p_norm");
  detail::require_compatible(f, ctx);
  cfg.validate();
  if (f.dim() == 1) return NormEstimate::exact(detail::scalar_lp(f, p, ctx, detail::re_im_modulus), "scalar");
  if (auto h = detail::unit_positive_factor(f)) {
    NormEstimate e = sup_state_lp(*h, p, ctx, cfg);
    e.method = "positive:" + e.method;
    return e;
  }
  return inf_decomposition_pnorm(f, p, ctx, cfg);
}

namespace detail {

/// One solver route for ||f||_1: the LMI form, or state cuts when `cuts`.
inline NormEstimate one_norm_route(const QRV& f, const MeasureContext& ctx, const SolverConfig& cfg, bool cuts) {
  const minimax::Problem prob = decomposition_problem(f, 1.0, ctx, {});
  if (prob.re.empty()) return NormEstimate::exact(0.0, "zero");
  minimax::Options opt = options_from(cfg);
  opt.force_cuts = cuts;
  return estimate_from(minimax::solve(prob, opt), cuts ? "cuts" : "lmi");
}

}  // namespace detail

/// ||f||_1 = inf ||∫ f1+f2+f3+f4 dν||, solved in LMI form and cross-checked
/// against the state-cut form; the returned bracket is their intersection.
inline NormEstimate one_norm(const QRV& f, const MeasureContext& ctx, const SolverConfig& cfg = {}) {
  detail::require_compatible(f, ctx);
  cfg.validate();
  if (f.dim() == 1) return NormEstimate::exact(detail::scalar_lp(f, 1.0, ctx, detail::re_im_modulus), "scalar");
  if (auto h = detail::unit_positive_factor(f))
    return NormEstimate::exact(std::max(0.0, max_eigenvalue(integrate(*h, ctx))), "positive:integral");
  const NormEstimate lmi = detail::one_norm_route(f, ctx, cfg, false);
  if (lmi.method == "zero") return lmi;
  const NormEstimate cuts = detail::one_norm_route(f, ctx, cfg, true);
  NormEstimate e;
  e.lower = std::max(lmi.lower, cuts.lower);
  e.upper = std::min(lmi.upper, cuts.upper);
  e.method = "lmi+cuts";
  e.iterations = lmi.iterations + cuts.iterations;
  e.warning = lmi.warning || cuts.warning;
  if (e.lower > e.upper) {
    // The two certified brackets disagree: report the hull and flag it.
    e.warning = true;
    e.lower = std::min(lmi.lower, cuts.lower);
    e.upper = std::max(lmi.upper, cuts.upper);
  }
  return e;
}

/// ||f||_{p,dec}: inf max(||S1||_p, ||S2||_p) over [[S1, f], [f*, S2]] ⪰ 0.
inline NormEstimate dec_p_norm(const QRV& f, double p, const MeasureContext& ctx, const SolverConfig& cfg = {}) {
  if (std::isinf(p)) return NormEstimate::exact(inf_norm(f, ctx), "inf");
  require_exponent(p, "dec_p_norm");
  detail::require_compatible(f, ctx);
  cfg.validate();
  if (f.dim() == 1)
    return NormEstimate::exact(detail::scalar_lp(f, p, ctx, [](Complex z) { return std::abs(z); }), "scalar");
  if (f.is_hermitian()) {
    NormEstimate e = p_norm(f.map([](const Matrix& v) { return hermitian_part(v); }), p, ctx, cfg);
    e.method = "self-adjoint:" + e.method;
    return e;
  }
  return inf_block_dec(f, p, ctx, cfg);
}

/// ||f||_{S^p, L^q} = sup over states s of the L^q norm of
/// x ↦ ||s^{1/2} D^{1/2} f D^{1/2} s^{1/2}||_{S^p}.
///
/// The supremum runs over mixed states. Lower bound: local search over
/// s = BB*/tr(BB*). Upper bound: ||X||_{S^p} ≤ ||X||_{S^1} ≤ tr(sT) for any
/// T with [[T, F], [F*, T]] ⪰ 0, and ||X||_{S^p} ≤ ||F||.
inline NormEstimate schatten_mixed(const QRV& f, double p, double q, const MeasureContext& ctx,
                                   const SolverConfig& cfg = {}) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("schatten_mixed: exponents must be >= 1");
  detail::require_compatible(f, ctx);
  cfg.validate();
  if (f.dim() == 1)
    return NormEstimate::exact(detail::scalar_lp(f, q, ctx, [](Complex z) { return std::abs(z); }), "scalar");
  const std::vector<Matrix> data = detail::scaled(f.values(), ctx, q);
  if (data.empty() || detail::all_zero(data, 0.0)) return NormEstimate::exact(0.0, "zero");
  const Eigen::Index d = f.dim();
  const auto na = static_cast<Eigen::Index>(data.size());

  auto value_at = [&](const Matrix& sigma) {
    const Matrix r = clamped_sqrt(sigma);
    RealVector h(na);
    for (Eigen::Index i = 0; i < na; ++i) h(i) = schatten_norm(r * data[i] * r, p);
    return lp_norm(h, q);
  };

  // Upper bounds.
  std::vector<Matrix> t_polar, t_parts;
  RealVector opn(na);
  for (Eigen::Index i = 0; i < na; ++i) {
    const PolarParts pp = polar_parts(data[i]);
    t_polar.push_back(0.5 * (pp.abs + pp.abs_star));
    const HermitianParts hp = hermitian_parts(data[i]);
    t_parts.push_back(hermitian_abs(hp.re) + hermitian_abs(hp.im));
    opn(i) = operator_norm(data[i]);
  }
  const SupUpper u1 = sup_state_upper(t_polar, q);
  const SupUpper u2 = sup_state_upper(t_parts, q);
  const double upper = std::min({u1.upper, u2.upper, lp_norm(opn, q)});

  // Lower bound: pure starts from the trace bound, the maximally mixed
  // state and random states, each refined by Nelder–Mead.
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Matrix> starts;
  starts.push_back(Matrix::Identity(d, d) / double(d));
  for (const auto& c : sup_state_ascent(t_polar, q, cfg.restarts, rng)) starts.push_back(c.psi * c.psi.adjoint());
  for (Eigen::Index i = 0; i < na; ++i) {
    const Vector v = top_eigenvector(t_polar[i]);
    starts.push_back(v * v.adjoint());
  }
  for (int r = 0; r < cfg.restarts; ++r) {
    std::normal_distribution<double> gauss;
    RealVector x(2 * d * d);
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = gauss(rng);
    starts.push_back(detail::state_from_params(x, d));
  }
  double lower = 0.0;
  std::vector<std::pair<double, Matrix>> scored;
  for (const auto& s : starts) scored.emplace_back(value_at(s), s);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  int evals = 0;
  const int budget = 400 * static_cast<int>(2 * d * d);
  for (std::size_t k = 0; k < scored.size() && k < 4; ++k) {
    double fb = 0.0;
    auto obj = [&](const RealVector& x) { return -value_at(detail::state_from_params(x, d)); };
    RealVector x = detail::params_from_state(scored[k].second);
    for (int round = 0; round < 3; ++round) {
      x = detail::nelder_mead(obj, x, 0.1 / (1 << round), budget, &fb);
      evals += budget;
    }
    lower = std::max({lower, scored[k].first, -fb});
  }
  NormEstimate e;
  e.lower = lower;
  e.upper = std::max(lower, upper);
  e.method = "mixed-search/trace-bound";
  e.iterations = evals;
  e.warning = !(u1.converged && u2.converged);
  return e;
}

namespace detail {

/// Bound evaluators for the candidate norm on the non-null atoms of f.
///
/// For a state σ and N_x = D^{1/2} σ D^{1/2}, every feasible G = Y + Z obeys
/// tr(N G^p) ≥ tr(N)^{1−p} tr(N G)^p and tr(N G) ≥ ||N^{1/2} Re f N^{1/2}||_1
/// + ||N^{1/2} Im f N^{1/2}||_1, which gives the lower bound. Feasible points
/// N^{-1/2}|N^{1/2} A N^{1/2}|N^{-1/2} give the upper bound.
struct CandidateModel {
  Eigen::Index d = 0;
  double p = 1.0;
  std::vector<Matrix> re_v, im_v, rt;
  std::vector<double> w;
  bool diagonal = true;

  CandidateModel(const QRV& f, double exponent, const MeasureContext& ctx) : d(f.dim()), p(exponent) {
    for (std::size_t i = 0; i < f.atoms(); ++i) {
      if (ctx.null_atom(i)) continue;
      const HermitianParts hp = hermitian_parts(f[i]);
      re_v.push_back(hp.re);
      im_v.push_back(hp.im);
      rt.push_back(ctx.sqrt_derivative(i));
      w.push_back(ctx.weight(i));
      for (const Matrix* m : {&f[i], &ctx.derivative(i)}) {
        Matrix off = *m;
        off.diagonal().setZero();
        if (off.cwiseAbs().maxCoeff() > 1e-14 * (1.0 + m->cwiseAbs().maxCoeff())) diagonal = false;
      }
    }
  }

  std::size_t atoms() const { return re_v.size(); }

  /// Closed form for jointly diagonal f and D.
  double diagonal_value() const {
    double best = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < atoms(); ++i) {
        const double g = std::abs(re_v[i](k, k).real()) + std::abs(im_v[i](k, k).real());
        acc += w[i] * std::norm(rt[i](k, k)) * std::pow(g, p);
      }
      best = std::max(best, acc);
    }
    return std::pow(best, 1.0 / p);
  }

  Matrix integral(const std::vector<Matrix>& g) const {
    Matrix acc = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < atoms(); ++i) acc += w[i] * rt[i] * matrix_power(hermitian_part(g[i]), p) * rt[i];
    return acc;
  }

  double objective(const std::vector<Matrix>& g) const {
    return std::pow(std::max(0.0, max_eigenvalue(integral(g))), 1.0 / p);
  }

  double lower_at(const Matrix& sigma) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms(); ++i) {
      const Matrix n = hermitian_part(rt[i] * sigma * rt[i]);
      const double tn = n.trace().real();
      if (!(tn > 0.0)) continue;
      const Matrix r = clamped_sqrt(n);
      const double a = hermitian_trace_norm(hermitian_part(r * re_v[i] * r)) +
                       hermitian_trace_norm(hermitian_part(r * im_v[i] * r));
      acc += w[i] * std::pow(tn, 1.0 - p) * std::pow(a, p);
    }
    return std::pow(acc, 1.0 / p);
  }

  std::vector<Matrix> point_at(const Matrix& sigma) const {
    std::vector<Matrix> g(atoms());
    for (std::size_t i = 0; i < atoms(); ++i) {
      Matrix n = hermitian_part(rt[i] * sigma * rt[i]);
      const double eps = 1e-7 * (1.0 + n.trace().real());
      n += eps * Matrix::Identity(d, d);
      const Matrix r = psd_sqrt(n);
      const Matrix ri = r.inverse();
      g[i] = hermitian_part(ri * hermitian_abs(hermitian_part(r * re_v[i] * r)) * ri) +
             hermitian_part(ri * hermitian_abs(hermitian_part(r * im_v[i] * r)) * ri);
    }
    return g;
  }

  /// |Re f| + |Im f|.
  std::vector<Matrix> canonical() const {
    std::vector<Matrix> g(atoms());
    for (std::size_t i = 0; i < atoms(); ++i) g[i] = hermitian_abs(re_v[i]) + hermitian_abs(im_v[i]);
    return g;
  }

  /// I/d and the eigenprojections of the canonical integral.
  std::vector<Matrix> seed_states() const {
    std::vector<Matrix> out{Matrix::Identity(d, d) / double(d)};
    const SpectralDecomposition sd = eigh(integral(canonical()));
    for (Eigen::Index k = 0; k < d; ++k) out.push_back(sd.vectors.col(k) * sd.vectors.col(k).adjoint());
    return out;
  }
};

}  // namespace detail

/// Certified but loose bracket for candidate_norm without any search: the
/// canonical point |Re f| + |Im f| above and the seed-state bounds below.
inline NormEstimate candidate_quick_bracket(const QRV& f, double p, const MeasureContext& ctx) {
  if (std::isinf(p)) throw DomainError("candidate_norm: finite exponent required");
  require_exponent(p, "candidate_norm");
  detail::require_compatible(f, ctx);
  const detail::CandidateModel model(f, p, ctx);
  if (model.atoms() == 0) return NormEstimate::exact(0.0, "zero");
  if (model.diagonal) return NormEstimate::exact(model.diagonal_value(), "diagonal");
  double lower = 0.0;
  for (const auto& s : model.seed_states()) lower = std::max(lower, model.lower_at(s));
  NormEstimate e;
  e.lower = lower;
  e.upper = std::max(lower, model.objective(model.canonical()));
  e.method = "quick";
  return e;
}

/// inf over Pos_f of ||∫ (f1+f2+f3+f4)^p dν||^{1/p}. Bracket from the state
/// bound (below) and minimal feasible points (above), each optimised over σ.
inline NormEstimate candidate_norm(const QRV& f, double p, const MeasureContext& ctx, const SolverConfig& cfg = {}) {
  if (std::isinf(p)) throw DomainError("candidate_norm: finite exponent required");
  require_exponent(p, "candidate_norm");
  detail::require_compatible(f, ctx);
  cfg.validate();
  if (p == 1.0) {
    NormEstimate e = one_norm(f, ctx, cfg);
    e.method = "one:" + e.method;
    return e;
  }
  const detail::CandidateModel model(f, p, ctx);
  if (model.atoms() == 0) return NormEstimate::exact(0.0, "zero");
  if (model.diagonal) return NormEstimate::exact(model.diagonal_value(), "diagonal");
  const Eigen::Index d = model.d;
  auto objective = [&](const std::vector<Matrix>& g) { return model.objective(g); };
  auto lower_at = [&](const Matrix& sigma) { return model.lower_at(sigma); };
  auto point_at = [&](const Matrix& sigma) { return model.point_at(sigma); };

  double upper = objective(model.canonical());
  double lower = 0.0;

  std::mt19937_64 rng(cfg.seed ^ 0xc2b2ae3d27d4eb4fULL);
  std::vector<Matrix> starts = model.seed_states();
  std::normal_distribution<double> gauss;
  for (int r = 0; r < cfg.restarts; ++r) {
    RealVector x(2 * d * d);
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = gauss(rng);
    starts.push_back(detail::state_from_params(x, d));
  }
  std::vector<std::pair<double, Matrix>> scored;
  for (const auto& s : starts) scored.emplace_back(lower_at(s), s);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const int budget = 300 * static_cast<int>(2 * d * d);
  int evals = 0;
  std::vector<Matrix> best_point = model.canonical();
  for (std::size_t k = 0; k < scored.size() && k < 3; ++k) {
    double fl = 0.0, fu = 0.0;
    auto lo = [&](const RealVector& x) { return -lower_at(detail::state_from_params(x, d)); };
    auto up = [&](const RealVector& x) { return objective(point_at(detail::state_from_params(x, d))); };
    RealVector xl = detail::params_from_state(scored[k].second), xu = xl;
    for (int round = 0; round < 2; ++round) {
      xl = detail::nelder_mead(lo, xl, 0.1 / (1 << round), budget, &fl);
      xu = detail::nelder_mead(up, xu, 0.1 / (1 << round), budget, &fu);
      evals += 2 * budget;
    }
    lower = std::max({lower, scored[k].first, -fl});
    if (fu < upper) {
      upper = fu;
      best_point = point_at(detail::state_from_params(xu, d));
    }
  }

  // Adding B_x B_x* to a feasible point keeps it feasible, and since t^p is
  // not operator monotone for p > 1 it can lower the objective.
  if (lower < upper * (1.0 - 1e-9)) {
    const auto na = static_cast<Eigen::Index>(model.atoms());
    const Eigen::Index block = 2 * d * d;
    auto perturbed = [&](const RealVector& x) {
      std::vector<Matrix> g = best_point;
      for (Eigen::Index i = 0; i < na; ++i) {
        Matrix b(d, d);
        for (Eigen::Index k = 0; k < d * d; ++k) b(k / d, k % d) = Complex(x(i * block + k), x(i * block + d * d + k));
        g[static_cast<std::size_t>(i)] += b * b.adjoint();
      }
      return g;
    };
    double scale = 0.0;
    for (const auto& g : best_point) scale = std::max(scale, std::sqrt(operator_norm(g)));
    RealVector x = RealVector::Zero(na * block);
    const int pbudget = 200 * static_cast<int>(na * block);
    for (int round = 0; round < 3; ++round) {
      double fp = 0.0;
      x = detail::nelder_mead([&](const RealVector& y) { return objective(perturbed(y)); }, x,
                              0.3 * (1.0 + scale) / (1 << round), pbudget, &fp);
      evals += pbudget;
      upper = std::min(upper, fp);
    }
  }
  NormEstimate e;
  e.lower = lower;
  e.upper = std::max(lower, upper);
  e.method = "state-bound/minimal-points";
  e.iterations = evals;
  e.warning = e.width() > 1e-3 * (1.0 + e.upper);
  return e;
}

/// Norm selector with the CLI grammar `p:2`, `one`, `dec:2`, `smixed:1:2`,
/// `inf`, `naive:2`, `cand:2`. Exponents accept `inf`.
struct NormId {
  enum class Kind { kP, kOne, kInf, kDec, kSchattenMixed, kNaive, kCandidate };
  Kind kind = Kind::kP;
  double p = 1.0;
  double q = 1.0;

  static NormId parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
    if (parts.empty()) throw DomainError("norm id: empty");
    auto num = [&](std::size_t k) {
      const std::string& s = parts[k];
      if (s == "inf") return kInf;
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || !(v >= 1.0)) throw DomainError("norm id '" + text + "': exponent must be a number >= 1");
      return v;
    };
    auto arity = [&](std::size_t n) {
      if (parts.size() != n + 1) throw DomainError("norm id '" + text + "': expected " + std::to_string(n) + " parameter(s)");
    };
    NormId id;
    const std::string& head = parts[0];
    if (head == "p") {
      arity(1);
      id = {Kind::kP, num(1), 1.0};
    } else if (head == "one") {
      arity(0);
      id = {Kind::kOne, 1.0, 1.0};
    } else if (head == "inf") {
      arity(0);
      id = {Kind::kInf, kInf, 1.0};
    } else if (head == "dec") {
      arity(1);
      id = {Kind::kDec, num(1), 1.0};
    } else if (head == "smixed") {
      arity(2);
      id = {Kind::kSchattenMixed, num(1), num(2)};
    } else if (head == "naive") {
      arity(1);
      id = {Kind::kNaive, num(1), 1.0};
    } else if (head == "cand") {
      arity(1);
      id = {Kind::kCandidate, num(1), 1.0};
      if (std::isinf(id.p)) throw DomainError("norm id '" + text + "': candidate needs a finite exponent");
    } else {
      throw DomainError("norm id '" + text + "': unknown norm");
    }
    return id;
  }

  std::string str() const {
    auto fmt = [](double v) {
      if (std::isinf(v)) return std::string("inf");
      std::ostringstream os;
      os << v;
      return os.str();
    };
    switch (kind) {
      case Kind::kP: return "p:" + fmt(p);
      case Kind::kOne: return "one";
      case Kind::kInf: return "inf";
      case Kind::kDec: return "dec:" + fmt(p);
      case Kind::kSchattenMixed: return "smixed:" + fmt(p) + ":" + fmt(q);
      case Kind::kNaive: return "naive:" + fmt(p);
      case Kind::kCandidate: return "cand:" + fmt(p);
    }
    return "";
  }

  /// Scalar-formula norms are reported as exact brackets.
  bool exact_formula() const { return kind == Kind::kInf || kind == Kind::kNaive; }
};

inline NormEstimate evaluate(const NormId& id, const QRV& f, const MeasureContext& ctx, const SolverConfig& cfg = {}) {
  switch (id.kind) {
    case NormId::Kind::kP: return p_norm(f, id.p, ctx, cfg);
    case NormId::Kind::kOne: return one_norm(f, ctx, cfg);
    case NormId::Kind::kInf: return NormEstimate::exact(inf_norm(f, ctx), "inf");
    case NormId::Kind::kDec: return dec_p_norm(f, id.p, ctx, cfg);
    case NormId::Kind::kSchattenMixed: return schatten_mixed(f, id.p, id.q, ctx, cfg);
    case NormId::Kind::kNaive: return NormEstimate::exact(naive_norm(f, id.p, ctx), "naive");
    case NormId::Kind::kCandidate: return candidate_norm(f, id.p, ctx, cfg);
  }
  throw DomainError("norm id: unknown kind");
}

}  // namespace ovlp

#endif  // OVLP_NORMS_HPP
