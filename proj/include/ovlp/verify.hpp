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

#ifndef OVLP_VERIFY_HPP
#define OVLP_VERIFY_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ovlp/json_io.hpp"
#include "ovlp/norms.hpp"
#include "ovlp/oracle.hpp"
#include "ovlp/random.hpp"
#include "ovlp/tensor.hpp"

namespace ovlp {

enum class SuiteId {
  kSeminormP,
  kSeminormDec,
  kSandwich,
  kReIm,
  kPolarBound,
  kSchattenChain,
  kHolderCommuting,
  kHolderSandwichCorollary,
  kMinkowskiCommuting,
  kMinkowskiCorollary,
  kTensorHolder,
  kTensorHolderDec,
  kMultiplier,
  kSchattenHolder,
  kCauchySanity,
};

inline const std::vector<std::pair<SuiteId, std::string>>& suite_names() {
  static const std::vector<std::pair<SuiteId, std::string>> names = {
      {SuiteId::kSeminormP, "seminorm_p"},
      {SuiteId::kSeminormDec, "seminorm_dec"},
      {SuiteId::kSandwich, "sandwich"},
      {SuiteId::kReIm, "reim"},
      {SuiteId::kPolarBound, "polar_bound"},
      {SuiteId::kSchattenChain, "schatten_chain"},
      {SuiteId::kHolderCommuting, "holder_commuting"},
      {SuiteId::kHolderSandwichCorollary, "holder_sandwich_corollary"},
      {SuiteId::kMinkowskiCommuting, "minkowski_commuting"},
      {SuiteId::kMinkowskiCorollary, "minkowski_corollary"},
      {SuiteId::kTensorHolder, "tensor_holder"},
      {SuiteId::kTensorHolderDec, "tensor_holder_dec"},
      {SuiteId::kMultiplier, "multiplier"},
      {SuiteId::kSchattenHolder, "schatten_holder"},
      {SuiteId::kCauchySanity, "cauchy_sanity"},
  };
  return names;
}

inline std::string to_string(SuiteId id) {
  for (const auto& [k, name] : suite_names())
    if (k == id) return name;
  return "";
}

inline SuiteId parse_suite(const std::string& name) {
  for (const auto& [k, n] : suite_names())
    if (n == name) return k;
  throw DomainError("unknown suite '" + name + "'");
}

struct SuiteParams {
  int max_dim = 3;
  int max_atoms = 4;
  std::vector<double> exponents = {1.0, 1.5, 2.0, 3.0};
  double tol = 1e-2 * tolerance_scale();
  SolverConfig solver;
  bool oracle_check = true;
  double oracle_tol = 5e-3 * tolerance_scale();
  int oracle_resolution = 24;
  int workers = 1;

  void validate() const {
    if (max_dim < 1 || max_atoms < 1) throw DomainError("suite parameters: dims and atoms must be >= 1");
    if (exponents.empty()) throw DomainError("suite parameters: at least one exponent required");
    for (double p : exponents)
      if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("suite parameters: exponents must be finite and >= 1");
    // A negative tol demands that much slack from every check.
    if (!std::isfinite(tol)) throw DomainError("suite parameters: tol must be finite");
    if (!(oracle_tol >= 0.0)) throw DomainError("suite parameters: oracle tolerance must be nonnegative");
    if (workers < 1) throw DomainError("suite parameters: workers must be >= 1");
    solver.validate();
  }

  Json to_json() const {
    return {{"dims", max_dim},     {"atoms", max_atoms},         {"exponents", exponents},
            {"tol", tol},          {"solver", config_to_json(solver)}, {"oracle_check", oracle_check},
            {"oracle_tol", oracle_tol}};
  }
};

/// One randomized trial: the data every check reads.
struct Instance {
  SuiteId suite = SuiteId::kSandwich;
  std::uint64_t trial = 0;
  DiscretePOVM povm;
  DensityOperator rho;
  std::vector<QRV> fs;
  std::vector<double> exponents;
  std::vector<Complex> scalars;
};

inline Json instance_to_json(const Instance& in) {
  Json fs = Json::array();
  for (const auto& f : in.fs) fs.push_back(qrv_to_json(f));
  Json sc = Json::array();
  for (const auto& z : in.scalars) sc.push_back({z.real(), z.imag()});
  return {{"suite", to_string(in.suite)}, {"trial", in.trial},       {"povm", povm_to_json(in.povm)},
          {"rho", state_to_json(in.rho)},  {"fs", std::move(fs)},      {"exponents", in.exponents},
          {"scalars", std::move(sc)}};
}

inline Instance instance_from_json(const Json& j, const std::string& path = "") {
  Instance in;
  const Json& s = detail::field(j, "suite", path);
  if (!s.is_string()) throw JsonError(detail::child(path, "suite"), "expected a suite name");
  try {
    in.suite = parse_suite(s.get<std::string>());
  } catch (const DomainError& e) {
    throw JsonError(detail::child(path, "suite"), e.what());
  }
  if (j.contains("trial")) {
    if (!j["trial"].is_number_unsigned()) throw JsonError(detail::child(path, "trial"), "expected a nonnegative integer");
    in.trial = j["trial"].get<std::uint64_t>();
  }
  in.povm = povm_from_json(detail::field(j, "povm", path), detail::child(path, "povm"));
  in.rho = state_from_json(detail::field(j, "rho", path), detail::child(path, "rho"));
  if (in.rho.dim() != in.povm.dim()) throw JsonError(detail::child(path, "rho"), "state dimension does not match the POVM");
  const std::string fpath = detail::child(path, "fs");
  const Json& fs = detail::field(j, "fs", path);
  if (!fs.is_array()) throw JsonError(fpath, "expected an array of QRVs");
  for (std::size_t i = 0; i < fs.size(); ++i) {
    QRV f = qrv_from_json(fs[i], detail::child(fpath, i));
    if (!(f.space() == in.povm.space()) || f.dim() != in.povm.dim())
      throw JsonError(detail::child(fpath, i), "QRV does not match the POVM's sample space and dimension");
    in.fs.push_back(std::move(f));
  }
  const std::string epath = detail::child(path, "exponents");
  const Json& ex = detail::field(j, "exponents", path);
  if (!ex.is_array()) throw JsonError(epath, "expected an array");
  for (std::size_t i = 0; i < ex.size(); ++i) in.exponents.push_back(detail::number(ex[i], detail::child(epath, i)));
  if (j.contains("scalars")) {
    const std::string spath = detail::child(path, "scalars");
    const Json& sc = j["scalars"];
    if (!sc.is_array()) throw JsonError(spath, "expected an array");
    for (std::size_t i = 0; i < sc.size(); ++i) {
      const std::string zp = detail::child(spath, i);
      if (!sc[i].is_array() || sc[i].size() != 2) throw JsonError(zp, "expected [re, im]");
      in.scalars.emplace_back(detail::number(sc[i][0], detail::child(zp, std::size_t{0})),
                              detail::number(sc[i][1], detail::child(zp, std::size_t{1})));
    }
  }
  return in;
}

/// One inequality: violated when lhs_lower − rhs_upper exceeds the tolerance.
struct Check {
  std::string name;
  double lhs_lower = 0.0;
  double lhs_upper = 0.0;
  double rhs_lower = 0.0;
  double rhs_upper = 0.0;

  double margin() const { return lhs_lower - rhs_upper; }

  Json to_json() const {
    return {{"name", name},           {"lhs", {lhs_lower, lhs_upper}}, {"rhs", {rhs_lower, rhs_upper}},
            {"margin", margin()}};
  }
};

struct OracleDisagreement {
  std::string norm;
  double oracle = 0.0;
  NormEstimate estimate;

  Json to_json() const { return {{"norm", norm}, {"oracle", oracle}, {"estimate", estimate_to_json(estimate)}}; }
};

struct TrialOutcome {
  std::uint64_t trial = 0;
  std::vector<Check> checks;
  double margin = -kInf;
  bool violated = false;
  int oracle_checks = 0;
  std::vector<OracleDisagreement> disagreements;
};

namespace detail {

/// Norm evaluations of one trial, remembered for the oracle cross-check.
class Evaluator {
 public:
  Evaluator(const MeasureContext& ctx, const SolverConfig& cfg) : ctx_(ctx), cfg_(cfg) {}

  NormEstimate p(const QRV& f, double e) { return remember(OracleProblem::kPNorm, f, e, 1.0, p_norm(f, e, ctx_, cfg_)); }
  NormEstimate dec(const QRV& f, double e) {
    return remember(OracleProblem::kDec, f, e, 1.0, dec_p_norm(f, e, ctx_, cfg_));
  }
  NormEstimate smixed(const QRV& f, double e, double q) {
    return remember(OracleProblem::kSchattenMixed, f, e, q, schatten_mixed(f, e, q, ctx_, cfg_));
  }
  NormEstimate remember(OracleProblem kind, const QRV& f, double e, double q, NormEstimate est) {
    if (!std::isinf(e) && !std::isinf(q)) items_.push_back({kind, f, e, q, est});
    return est;
  }

  const MeasureContext& ctx() const { return ctx_; }
  const SolverConfig& cfg() const { return cfg_; }

  void cross_check(const SuiteParams& params, TrialOutcome& out) const {
    if (ctx_.dim() > 2) return;
    for (const auto& it : items_) {
      if (it.f.dim() > 2 || it.f.atoms() > 3) continue;
      const double v = brute_force_oracle({it.kind, it.p, it.q, params.oracle_resolution}, it.f, ctx_);
      ++out.oracle_checks;
      if (v < it.est.lower - params.oracle_tol || v > it.est.upper + params.oracle_tol) {
        std::string name = it.kind == OracleProblem::kPNorm ? "p:" : it.kind == OracleProblem::kDec ? "dec:" : "smixed:";
        name += std::to_string(it.p);
        if (it.kind == OracleProblem::kSchattenMixed) name += ":" + std::to_string(it.q);
        out.disagreements.push_back({name, v, it.est});
      }
    }
  }

 private:
  struct Item {
    OracleProblem kind;
    QRV f;
    double p;
    double q;
    NormEstimate est;
  };
  const MeasureContext& ctx_;
  const SolverConfig& cfg_;
  std::vector<Item> items_;
};

inline Check leq(std::string name, const NormEstimate& lhs, const NormEstimate& rhs) {
  return {std::move(name), lhs.lower, lhs.upper, rhs.lower, rhs.upper};
}

inline Check leq(std::string name, double lhs_lower, double lhs_upper, double rhs_lower, double rhs_upper) {
  return {std::move(name), lhs_lower, lhs_upper, rhs_lower, rhs_upper};
}

inline NormEstimate scaled_estimate(const NormEstimate& e, double c) {
  NormEstimate out = e;
  out.lower *= c;
  out.upper *= c;
  return out;
}

/// Interval equality as two inequalities.
inline void overlap(std::vector<Check>& out, const std::string& name, const NormEstimate& a, const NormEstimate& b) {
  out.push_back(leq(name + " (<=)", a, b));
  out.push_back(leq(name + " (>=)", b, a));
}

inline double conjugate(double p) { return p / (p - 1.0); }

/// f ↦ ||f(x)||^p I atomwise.
inline QRV norm_power_identity(const QRV& f, double p) {
  return f.map([p](const Matrix& v) { return Matrix(std::pow(operator_norm(v), p) * identity(v.rows())); });
}

/// ||h||_1^{1/t} for positive h, which one_norm evaluates in closed form.
inline NormEstimate one_root(const QRV& h, const MeasureContext& ctx, const SolverConfig& cfg, double t) {
  NormEstimate e = one_norm(h.map([](const Matrix& v) { return hermitian_part(v); }), ctx, cfg);
  e.lower = std::pow(std::max(0.0, e.lower), 1.0 / t);
  e.upper = std::pow(std::max(0.0, e.upper), 1.0 / t);
  return e;
}

/// Σ_x weight(x) ||s^{1/2} F s G s^{1/2}||_1 with F = D^{1/2} f D^{1/2}.
inline double holder_pp_integrand(const QRV& f, const QRV& g, const MeasureContext& ctx, const Matrix& s) {
  const Matrix r = clamped_sqrt(s);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.atoms(); ++i) {
    if (ctx.null_atom(i)) continue;
    acc += ctx.weight(i) * trace_norm(r * ctx.compress(i, f[i]) * s * ctx.compress(i, g[i]) * r);
  }
  return acc;
}

/// Lower bound on the supremum over mixed states by local search.
inline double holder_pp_lhs(const QRV& f, const QRV& g, const MeasureContext& ctx, const SolverConfig& cfg) {
  const Eigen::Index d = f.dim();
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss;
  std::vector<Matrix> starts{Matrix::Identity(d, d) / double(d)};
  for (int r = 0; r < std::max(2, cfg.restarts / 2); ++r) {
    RealVector x(2 * d * d);
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = gauss(rng);
    starts.push_back(state_from_params(x, d));
  }
  double best = 0.0;
  auto neg = [&](const RealVector& x) { return -holder_pp_integrand(f, g, ctx, state_from_params(x, d)); };
  for (const auto& s : starts) {
    double fb = 0.0;
    nelder_mead(neg, params_from_state(s), 0.2, 200 * static_cast<int>(2 * d * d), &fb);
    best = std::max({best, -fb, holder_pp_integrand(f, g, ctx, s)});
  }
  return best;
}

inline double pick(const std::vector<double>& v, Rng& rng) {
  std::uniform_int_distribution<std::size_t> u(0, v.size() - 1);
  return v[u(rng)];
}

inline std::vector<double> holder_exponents(const std::vector<double>& v) {
  std::vector<double> out;
  for (double p : v)
    if (p > 1.0) out.push_back(p);
  if (out.empty()) out.push_back(2.0);
  return out;
}

constexpr int kCauchyTerms = 10;

}  // namespace detail

/// Draws the instance for trial `trial`; generator hypotheses hold by
/// construction (commuting pairs share eigenvectors, Hölder pairs are
/// conjugate, tensor suites use factor dimension ≤ 2).
inline Instance generate(SuiteId suite, const SuiteParams& params, std::uint64_t seed, std::uint64_t trial) {
  params.validate();
  Rng rng = trial_rng(seed, trial);
  const bool tensor_suite =
      suite == SuiteId::kTensorHolder || suite == SuiteId::kTensorHolderDec || suite == SuiteId::kMultiplier;
  const int max_dim = tensor_suite ? std::min(params.max_dim, 2) : params.max_dim;
  const int lo = std::min(2, max_dim);
  const Eigen::Index dim = std::uniform_int_distribution<int>(lo, max_dim)(rng);
  const std::size_t atoms = std::uniform_int_distribution<int>(1, params.max_atoms)(rng);
  const SampleSpace space = SampleSpace::numbered(atoms);

  Instance in;
  in.suite = suite;
  in.trial = trial;
  const bool scalar_povm = !tensor_suite && std::uniform_int_distribution<int>(0, 3)(rng) == 0;
  in.povm = scalar_povm ? random_scalar_povm(space, dim, rng) : random_povm(space, dim, rng);
  in.rho = random_state(dim, rng);
  const auto& ex = params.exponents;

  switch (suite) {
    case SuiteId::kSeminormP:
    case SuiteId::kSeminormDec:
      in.fs = {random_qrv(space, dim, rng), random_qrv(space, dim, rng)};
      in.exponents = {detail::pick(ex, rng)};
      in.scalars = {random_complex(rng), random_complex(rng)};
      // The second scalar lies on an axis, where 1-norm homogeneity is exact.
      if (std::uniform_int_distribution<int>(0, 1)(rng) == 0)
        in.scalars[1] = in.scalars[1].real();
      else
        in.scalars[1] = Complex(0.0, in.scalars[1].imag());
      break;
    case SuiteId::kSandwich:
    case SuiteId::kReIm:
    case SuiteId::kPolarBound:
      in.fs = {random_qrv(space, dim, rng)};
      in.exponents = {detail::pick(ex, rng)};
      break;
    case SuiteId::kSchattenChain: {
      double a = detail::pick(ex, rng), b = detail::pick(ex, rng);
      in.fs = {random_qrv(space, dim, rng)};
      in.exponents = {std::max(a, b), std::min(a, b), detail::pick(ex, rng)};
      break;
    }
    case SuiteId::kHolderCommuting:
    case SuiteId::kMinkowskiCommuting: {
      auto [f, g] = random_commuting_positive_pair(space, dim, rng);
      in.fs = {std::move(f), std::move(g)};
      const double p = suite == SuiteId::kHolderCommuting ? detail::pick(detail::holder_exponents(ex), rng)
                                                          : detail::pick(ex, rng);
      in.exponents = {p};
      break;
    }
    case SuiteId::kHolderSandwichCorollary:
    case SuiteId::kMinkowskiCorollary: {
      in.fs = {random_positive_qrv(space, dim, rng), random_positive_qrv(space, dim, rng)};
      const double p = suite == SuiteId::kHolderSandwichCorollary ? detail::pick(detail::holder_exponents(ex), rng)
                                                                  : detail::pick(ex, rng);
      in.exponents = {p};
      break;
    }
    case SuiteId::kTensorHolder:
    case SuiteId::kTensorHolderDec:
    case SuiteId::kSchattenHolder:
      in.fs = {random_qrv(space, dim, rng), random_qrv(space, dim, rng)};
      in.exponents = {detail::pick(detail::holder_exponents(ex), rng)};
      break;
    case SuiteId::kMultiplier:
      in.fs = {random_qrv(space, dim, rng), random_qrv(space, dim, rng)};
      in.exponents = {1.0};
      break;
    case SuiteId::kCauchySanity: {
      // f_1 followed by increments d_n with ||d_n||_p ≤ 0.99·2^{-n}.
      const double p = detail::pick(ex, rng);
      const MeasureContext ctx(in.povm, in.rho);
      in.fs = {random_qrv(space, dim, rng)};
      for (int n = 1; n <= detail::kCauchyTerms; ++n) {
        const QRV h = random_qrv(space, dim, rng);
        const NormEstimate e = p_norm(h, p, ctx, params.solver);
        const double c = e.upper > 0.0 ? 0.99 * std::ldexp(1.0, -n) / e.upper : 0.0;
        in.fs.push_back(scale(h, c));
      }
      in.exponents = {p};
      break;
    }
  }
  return in;
}

/// Evaluates every inequality of the suite on one instance.
inline TrialOutcome check(const Instance& in, const SuiteParams& params) {
  const MeasureContext ctx(in.povm, in.rho);
  const SolverConfig& cfg = params.solver;
  detail::Evaluator ev(ctx, cfg);
  TrialOutcome out;
  out.trial = in.trial;
  auto& c = out.checks;
  auto need = [&](std::size_t nf, std::size_t ne) {
    if (in.fs.size() < nf || in.exponents.size() < ne)
      throw DomainError("instance for suite '" + to_string(in.suite) + "' needs " + std::to_string(nf) +
                        " QRV(s) and " + std::to_string(ne) + " exponent(s)");
  };

  switch (in.suite) {
    case SuiteId::kSeminormP:
    case SuiteId::kSeminormDec: {
      need(2, 1);
      const bool dec = in.suite == SuiteId::kSeminormDec;
      if (in.scalars.size() < (dec ? 1u : 2u)) throw DomainError("instance needs more scalars");
      const double p = in.exponents[0];
      const Complex lam = in.scalars[0];
      auto norm = [&](const QRV& h) { return dec ? ev.dec(h, p) : ev.p(h, p); };
      auto one = [](Complex z) { return std::abs(z.real()) + std::abs(z.imag()); };
      const QRV& f = in.fs[0];
      const QRV& g = in.fs[1];
      const NormEstimate nf = norm(f), ng = norm(g), nsum = norm(add(f, g)), nscaled = norm(scale(f, lam));
      NormEstimate rhs = nf;
      rhs.lower += ng.lower;
      rhs.upper += ng.upper;
      c.push_back(detail::leq("triangle", nsum, rhs));
      if (dec) {
        detail::overlap(c, "homogeneity", nscaled, detail::scaled_estimate(nf, std::abs(lam)));
        detail::overlap(c, "adjoint", norm(adjoint(f)), nf);
      } else {
        // |λ|_1 bounds ||λf|| from above, |1/λ|_1 from below; equality on the axes.
        c.push_back(detail::leq("homogeneity (<=)", nscaled, detail::scaled_estimate(nf, one(lam))));
        c.push_back(detail::leq("inverse homogeneity", nf, detail::scaled_estimate(nscaled, one(1.0 / lam))));
        const Complex mu = in.scalars[1];
        detail::overlap(c, "axis homogeneity", norm(scale(f, mu)), detail::scaled_estimate(nf, std::abs(mu)));
      }
      break;
    }
    case SuiteId::kSandwich: {
      need(1, 1);
      const double p = in.exponents[0];
      const NormEstimate np = ev.p(in.fs[0], p), nd = ev.dec(in.fs[0], p);
      c.push_back(detail::leq("half p-norm <= dec", detail::scaled_estimate(np, 0.5), nd));
      c.push_back(detail::leq("dec <= twice p-norm", nd, detail::scaled_estimate(np, 2.0)));
      break;
    }
    case SuiteId::kReIm: {
      need(1, 1);
      const double p = in.exponents[0];
      const QRV& f = in.fs[0];
      const NormEstimate np = ev.p(f, p), nd = ev.dec(f, p);
      const NormEstimate pr = ev.p(re(f), p), pi = ev.p(im(f), p);
      const NormEstimate dr = ev.dec(re(f), p), di = ev.dec(im(f), p);
      c.push_back(detail::leq("p: Re f <= f", pr, np));
      c.push_back(detail::leq("p: Im f <= f", pi, np));
      c.push_back(detail::leq("dec: Re f <= f", dr, nd));
      c.push_back(detail::leq("dec: Im f <= f", di, nd));
      break;
    }
    case SuiteId::kPolarBound: {
      need(1, 1);
      const double p = in.exponents[0];
      const NormEstimate nd = ev.dec(in.fs[0], p);
      const NormEstimate a = ev.p(abs(in.fs[0]), p), b = ev.p(abs_star(in.fs[0]), p);
      c.push_back(detail::leq("dec <= max(|f|, |f*|)", nd.lower, nd.upper, std::max(a.lower, b.lower),
                              std::max(a.upper, b.upper)));
      break;
    }
    case SuiteId::kSchattenChain: {
      need(1, 3);
      const double p = in.exponents[0], r = in.exponents[1], q = in.exponents[2];
      if (p < r) throw DomainError("schatten_chain instance needs exponents p >= r");
      const QRV& f = in.fs[0];
      c.push_back(detail::leq("S^p,L^q <= S^r,L^q", ev.smixed(f, p, q), ev.smixed(f, r, q)));
      c.push_back(detail::leq("S^1,L^q <= q-norm", ev.smixed(f, 1.0, q), ev.p(f, q)));
      break;
    }
    case SuiteId::kHolderCommuting: {
      need(2, 1);
      const double p = in.exponents[0], q = detail::conjugate(p);
      const QRV& f = in.fs[0];
      const QRV& g = in.fs[1];
      if (!f.is_positive() || !g.is_positive() || !commute(f, g))
        throw DomainError("holder_commuting instance needs commuting positive f, g");
      const NormEstimate lhs = detail::one_root(pointwise_mul(f, g), ctx, cfg, 1.0);
      const NormEstimate a = detail::one_root(pointwise_power(f, p), ctx, cfg, p);
      const NormEstimate b = detail::one_root(pointwise_power(g, q), ctx, cfg, q);
      c.push_back(detail::leq("||fg||_1 <= ||f^p||^{1/p} ||g^q||^{1/q}", lhs.lower, lhs.upper, a.lower * b.lower,
                              a.upper * b.upper));
      break;
    }
    case SuiteId::kHolderSandwichCorollary: {
      need(2, 1);
      const double p = in.exponents[0], q = detail::conjugate(p);
      const QRV& f = in.fs[0];
      const QRV& g = in.fs[1];
      if (!f.is_positive() || !g.is_positive()) throw DomainError("instance needs positive f, g");
      const QRV gh = pointwise_power(g, 0.5);
      const NormEstimate lhs = detail::one_root(pointwise_mul(pointwise_mul(gh, f), gh), ctx, cfg, 1.0);
      const NormEstimate a = detail::one_root(detail::norm_power_identity(f, p), ctx, cfg, p);
      const NormEstimate b = detail::one_root(pointwise_power(g, q), ctx, cfg, q);
      c.push_back(detail::leq("||g^1/2 f g^1/2||_1 <= ||(||f||^p I)||^{1/p} ||g^q||^{1/q}", lhs.lower, lhs.upper,
                              a.lower * b.lower, a.upper * b.upper));
      break;
    }
    case SuiteId::kMinkowskiCommuting:
    case SuiteId::kMinkowskiCorollary: {
      need(2, 1);
      const double p = in.exponents[0];
      const QRV& f = in.fs[0];
      const QRV& g = in.fs[1];
      const bool commuting = in.suite == SuiteId::kMinkowskiCommuting;
      if (!f.is_positive() || !g.is_positive() || (commuting && !commute(f, g)))
        throw DomainError("instance needs positive f, g (commuting for minkowski_commuting)");
      const NormEstimate lhs = detail::one_root(pointwise_power(add(f, g), p), ctx, cfg, p);
      const NormEstimate a = detail::one_root(commuting ? pointwise_power(f, p) : detail::norm_power_identity(f, p), ctx, cfg, p);
      const NormEstimate b = detail::one_root(commuting ? pointwise_power(g, p) : detail::norm_power_identity(g, p), ctx, cfg, p);
      c.push_back(detail::leq("||(f+g)^p||^{1/p} <= sum", lhs.lower, lhs.upper, a.lower + b.lower, a.upper + b.upper));
      break;
    }
    case SuiteId::kTensorHolder:
    case SuiteId::kTensorHolderDec: {
      need(2, 1);
      const double p = in.exponents[0], q = detail::conjugate(p);
      const bool dec = in.suite == SuiteId::kTensorHolderDec;
      const SepResult r = sep_norms(in.fs[0], in.fs[1], p, q, dec ? SepMode::kSepDec : SepMode::kSep1, ctx, cfg, params.tol);
      c.push_back(detail::leq(dec ? "||f(x)g||_{1,sep,dec} <= ||f||_{p,dec} ||g||_{q,dec}" : "||f(x)g||_{1,sep} <= ||f||_p ||g||_q",
                              r.lhs.lower, r.lhs.upper, r.rhs_lower, r.rhs_upper));
      const OracleProblem kind = dec ? OracleProblem::kDec : OracleProblem::kPNorm;
      ev.remember(kind, in.fs[0], p, 1.0, r.f_norm);
      ev.remember(kind, in.fs[1], q, 1.0, r.g_norm);
      break;
    }
    case SuiteId::kMultiplier: {
      need(2, 0);
      const SepResult a = sep_norms(in.fs[0], in.fs[1], 1.0, kInf, SepMode::kMultiplier, ctx, cfg, params.tol);
      const SepResult b = sep_norms(in.fs[0], in.fs[1], 1.0, kInf, SepMode::kMultiplierDec, ctx, cfg, params.tol);
      c.push_back(detail::leq("||f(x)g||_1 <= 2 ||D|| ||f||_1 ||g||_inf", a.lhs.lower, a.lhs.upper, a.rhs_lower, a.rhs_upper));
      c.push_back(detail::leq("||f(x)g||_{1,dec} <= ||D|| ||f||_{1,dec} ||g||_inf", b.lhs.lower, b.lhs.upper, b.rhs_lower,
                              b.rhs_upper));
      ev.remember(OracleProblem::kPNorm, in.fs[0], 1.0, 1.0, a.f_norm);
      ev.remember(OracleProblem::kDec, in.fs[0], 1.0, 1.0, b.f_norm);
      break;
    }
    case SuiteId::kSchattenHolder: {
      need(2, 1);
      const double p = in.exponents[0], q = detail::conjugate(p);
      const double lhs = detail::holder_pp_lhs(in.fs[0], in.fs[1], ctx, cfg);
      const NormEstimate a = ev.smixed(in.fs[0], p, p), b = ev.smixed(in.fs[1], q, q);
      c.push_back(detail::leq("sup_s ||s^1/2 F s G s^1/2||_{S^1,L^1} <= S^p,L^p * S^q,L^q", lhs, lhs, a.lower * b.lower,
                              a.upper * b.upper));
      break;
    }
    case SuiteId::kCauchySanity: {
      need(2, 1);
      const double p = in.exponents[0];
      // f_m = f_1 + d_1 + ... + d_{m-1}; g is the full telescoped sum.
      std::vector<QRV> seq{in.fs[0]};
      for (std::size_t n = 1; n < in.fs.size(); ++n) seq.push_back(add(seq.back(), in.fs[n]));
      const QRV& g = seq.back();
      const int terms = static_cast<int>(std::min<std::size_t>(8, seq.size() - 1));
      for (int m = 1; m <= terms; ++m) {
        const NormEstimate e = ev.p(subtract(g, seq[m - 1]), p);
        const double bound = std::ldexp(1.0, 1 - m);
        c.push_back(detail::leq("||g - f_" + std::to_string(m) + "||_p <= 2^(1-" + std::to_string(m) + ")", e.lower, e.upper,
                                bound, bound));
      }
      break;
    }
  }
  for (const auto& ch : c) out.margin = std::max(out.margin, ch.margin());
  out.violated = out.margin > params.tol;
  if (params.oracle_check) ev.cross_check(params, out);
  return out;
}

/// Machine-readable summary of a suite run.
struct VerifyReport {
  std::string suite;
  int trials = 0;
  int violations = 0;
  double worst_margin = -kInf;
  Json witnesses = Json::array();
  std::uint64_t seed = 0;
  Json config;
  int oracle_checks = 0;
  Json oracle_disagreements = Json::array();

  bool passed() const { return violations == 0 && oracle_disagreements.empty(); }

  Json to_json() const {
    Json j = {{"suite", suite},
              {"trials", trials},
              {"violations", violations},
              {"worst_margin", std::isfinite(worst_margin) ? Json(worst_margin) : Json(nullptr)},
              {"witnesses", witnesses},
              {"seed", seed},
              {"config", config},
              {"passed", passed()}};
    if (config.value("oracle_check", false))
      j["oracle"] = {{"checks", oracle_checks}, {"disagreements", oracle_disagreements}};
    return j;
  }
};

/// Runs fn(i) for i in [0, n) on `workers` threads; the first exception wins.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min<int>(workers, static_cast<int>(n)); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline VerifyReport run_suite(SuiteId suite, int trials, const SuiteParams& params, std::uint64_t seed) {
  params.validate();
  if (trials < 0) throw DomainError("run_suite: trials must be >= 0");
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  std::vector<Json> instances(static_cast<std::size_t>(trials));
  parallel_for(outcomes.size(), params.workers, [&](std::size_t t) {
    const Instance in = generate(suite, params, seed, t);
    outcomes[t] = check(in, params);
    if (outcomes[t].violated || !outcomes[t].disagreements.empty()) instances[t] = instance_to_json(in);
  });
  VerifyReport rep;
  rep.suite = to_string(suite);
  rep.trials = trials;
  rep.seed = seed;
  rep.config = params.to_json();
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const TrialOutcome& o = outcomes[t];
    rep.worst_margin = std::max(rep.worst_margin, o.margin);
    rep.oracle_checks += o.oracle_checks;
    Json checks = Json::array();
    for (const auto& ch : o.checks) checks.push_back(ch.to_json());
    if (o.violated) {
      ++rep.violations;
      rep.witnesses.push_back({{"trial", t}, {"margin", o.margin}, {"checks", checks}, {"instance", instances[t]}});
    }
    for (const auto& d : o.disagreements) {
      Json j = d.to_json();
      j["trial"] = t;
      j["instance"] = instances[t];
      rep.oracle_disagreements.push_back(std::move(j));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Counterexample search for the two open questions.

struct ConjectureId {
  enum class Kind { kCandidateTriangle, kComparability };
  Kind kind = Kind::kCandidateTriangle;
  double p = 3.0;

  /// `candidate_triangle:3`, `candidate_triangle(3)`, and the same forms for
  /// `pnorm_vs_s1lp_comparability`.
  static ConjectureId parse(const std::string& text) {
    std::string name = text, arg;
    const auto colon = text.find(':');
    const auto paren = text.find('(');
    if (colon != std::string::npos) {
      name = text.substr(0, colon);
      arg = text.substr(colon + 1);
    } else if (paren != std::string::npos && text.back() == ')') {
      name = text.substr(0, paren);
      arg = text.substr(paren + 1, text.size() - paren - 2);
    }
    ConjectureId id;
    if (name == "candidate_triangle")
      id.kind = Kind::kCandidateTriangle;
    else if (name == "pnorm_vs_s1lp_comparability")
      id.kind = Kind::kComparability;
    else
      throw DomainError("unknown conjecture '" + text + "'");
    if (arg.empty()) throw DomainError("conjecture '" + text + "' needs an exponent, e.g. " + name + ":3");
    std::size_t used = 0;
    try {
      id.p = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || !(id.p >= 1.0) || !std::isfinite(id.p))
      throw DomainError("conjecture '" + text + "': exponent must be a finite number >= 1");
    return id;
  }

  std::string str() const {
    std::ostringstream os;
    os << (kind == Kind::kCandidateTriangle ? "candidate_triangle:" : "pnorm_vs_s1lp_comparability:") << p;
    return os.str();
  }

  /// The triangle inequality is proved at p = 1 and p = 2.
  bool proved() const { return kind == Kind::kCandidateTriangle && (p == 1.0 || p == 2.0); }
};

struct SearchParams {
  int max_dim = 2;
  int max_atoms = 3;
  SolverConfig solver;
  double certify_factor = 10.0;
  int refine_steps = 4;
  double refine_threshold = 0.95;
  bool control = false;  // allow a proved exponent as an integrity run
  int workers = 1;

  void validate() const {
    if (max_dim < 1 || max_atoms < 1) throw DomainError("search parameters: dims and atoms must be >= 1");
    if (!(certify_factor >= 0.0) || refine_steps < 0 || workers < 1)
      throw DomainError("search parameters: factors and budgets must be nonnegative");
    solver.validate();
  }

  Json to_json() const {
    return {{"dims", max_dim},
            {"atoms", max_atoms},
            {"certify_factor", certify_factor},
            {"refine_steps", refine_steps},
            {"refine_threshold", refine_threshold},
            {"control", control},
            {"solver", config_to_json(solver)}};
  }
};

/// A candidate-triangle evaluation on (f, g).
struct TriangleEval {
  NormEstimate f, g, sum;
  double margin = 0.0;  // lower(f+g) − upper(f) − upper(g)
  double width = 0.0;   // total bracket width
  double ratio = 0.0;   // mid(f+g) / (mid(f) + mid(g))
  bool certified = false;
};

namespace detail {

/// candidate_norm; at p = 1 a single LMI route of one_norm.
inline NormEstimate candidate_bracket(const QRV& f, double p, const MeasureContext& ctx, const SolverConfig& cfg) {
  if (p == 1.0) {
    if (f.dim() == 1 || unit_positive_factor(f)) return one_norm(f, ctx, cfg);
    return one_norm_route(f, ctx, cfg, false);
  }
  return candidate_norm(f, p, ctx, cfg);
}

}  // namespace detail

inline TriangleEval evaluate_triangle(const QRV& f, const QRV& g, double p, const MeasureContext& ctx,
                                      const SolverConfig& cfg, double certify_factor) {
  TriangleEval t;
  t.f = detail::candidate_bracket(f, p, ctx, cfg);
  t.g = detail::candidate_bracket(g, p, ctx, cfg);
  t.sum = detail::candidate_bracket(add(f, g), p, ctx, cfg);
  t.margin = t.sum.lower - t.f.upper - t.g.upper;
  t.width = t.f.width() + t.g.width() + t.sum.width();
  const double den = t.f.mid() + t.g.mid();
  t.ratio = den > 0.0 ? t.sum.mid() / den : 0.0;
  t.certified = t.margin > 0.0 && t.margin >= certify_factor * t.width;
  return t;
}

inline Json triangle_to_json(const TriangleEval& t) {
  return {{"f", estimate_to_json(t.f)},     {"g", estimate_to_json(t.g)}, {"sum", estimate_to_json(t.sum)},
          {"margin", t.margin},             {"width", t.width},           {"ratio", t.ratio},
          {"certified", t.certified}};
}

struct SearchOutcome {
  ConjectureId id;
  int budget = 0;
  std::uint64_t seed = 0;
  int trials_run = 0;
  int prefiltered = 0;
  bool found = false;
  Json witness;
  double best_ratio = 0.0;
  double best_margin = -kInf;
  Json trajectory = Json::array();
  Json best_candidate;  // the evaluated trial with the largest margin
  Json config;

  Json to_json() const {
    Json j = {{"conjecture", id.str()},
              {"budget", budget},
              {"seed", seed},
              {"trials_run", trials_run},
              {"outcome", found ? "found" : "exhausted"},
              {"best_ratio", best_ratio},
              {"config", config}};
    if (id.kind == ConjectureId::Kind::kCandidateTriangle) {
      j["prefiltered"] = prefiltered;
      j["best_margin"] = std::isfinite(best_margin) ? Json(best_margin) : Json(nullptr);
      if (!best_candidate.is_null()) j["best_candidate"] = best_candidate;
    } else {
      j["trajectory"] = trajectory;
    }
    if (found) j["witness"] = witness;
    return j;
  }
};

namespace detail {

struct TriangleTrial {
  bool skipped = false;
  TriangleEval eval;
  QRV f, g;
  DiscretePOVM povm;
  DensityOperator rho;
  Eigen::Index dim = 0;
  std::size_t atoms = 0;
};

inline TriangleTrial triangle_trial(const ConjectureId& id, const SearchParams& sp, std::uint64_t seed, std::uint64_t trial) {
  Rng rng = trial_rng(seed, trial);
  TriangleTrial t;
  t.dim = std::uniform_int_distribution<int>(std::min(2, sp.max_dim), sp.max_dim)(rng);
  t.atoms = std::uniform_int_distribution<int>(1, sp.max_atoms)(rng);
  const SampleSpace space = SampleSpace::numbered(t.atoms);
  t.povm = random_povm(space, t.dim, rng);
  t.rho = random_state(t.dim, rng);
  t.f = random_qrv(space, t.dim, rng);
  t.g = random_qrv(space, t.dim, rng);
  const MeasureContext ctx(t.povm, t.rho);
  // Skip when even the loose brackets rule a violation out.
  const NormEstimate qf = candidate_quick_bracket(t.f, id.p, ctx);
  const NormEstimate qg = candidate_quick_bracket(t.g, id.p, ctx);
  const NormEstimate qs = candidate_quick_bracket(add(t.f, t.g), id.p, ctx);
  if (qs.upper <= qf.lower + qg.lower) {
    t.skipped = true;
    return t;
  }
  t.eval = evaluate_triangle(t.f, t.g, id.p, ctx, sp.solver, sp.certify_factor);
  std::normal_distribution<double> gauss;
  for (int step = 0; step < sp.refine_steps && !t.eval.certified && t.eval.ratio > sp.refine_threshold; ++step) {
    auto perturb = [&](const QRV& h) {
      return h.map([&](const Matrix& v) {
        Matrix n(v.rows(), v.cols());
        for (Eigen::Index i = 0; i < n.size(); ++i) n(i) = Complex(gauss(rng), gauss(rng));
        return Matrix(v + 0.1 * v.norm() / std::max<double>(1.0, n.norm()) * n);
      });
    };
    QRV f2 = perturb(t.f), g2 = perturb(t.g);
    const TriangleEval e = evaluate_triangle(f2, g2, id.p, ctx, sp.solver, sp.certify_factor);
    if (e.certified || e.ratio > t.eval.ratio) {
      t.f = std::move(f2);
      t.g = std::move(g2);
      t.eval = e;
    }
  }
  return t;
}

inline Json witness_json(const ConjectureId& id, const SearchParams& sp, std::uint64_t seed, std::uint64_t trial,
                         const TriangleTrial& t) {
  return {{"conjecture", id.str()},         {"p", id.p},
          {"seed", seed},                   {"trial", trial},
          {"povm", povm_to_json(t.povm)},    {"rho", state_to_json(t.rho)},
          {"f", qrv_to_json(t.f)},           {"g", qrv_to_json(t.g)},
          {"certify_factor", sp.certify_factor}, {"solver", config_to_json(sp.solver)},
          {"evaluation", triangle_to_json(t.eval)}};
}

}  // namespace detail

/// Re-evaluates a serialized witness from scratch.
inline TriangleEval reverify_witness(const Json& w) {
  const ConjectureId id = ConjectureId::parse(detail::field(w, "conjecture", "").get<std::string>());
  if (id.kind != ConjectureId::Kind::kCandidateTriangle) throw JsonError("/conjecture", "only triangle witnesses carry instances");
  const DiscretePOVM povm = povm_from_json(detail::field(w, "povm", ""), "/povm");
  const DensityOperator rho = state_from_json(detail::field(w, "rho", ""), "/rho");
  const QRV f = qrv_from_json(detail::field(w, "f", ""), "/f");
  const QRV g = qrv_from_json(detail::field(w, "g", ""), "/g");
  const SolverConfig cfg = w.contains("solver") ? config_from_json(w["solver"], "/solver") : SolverConfig{};
  const double factor = w.contains("certify_factor") ? detail::number(w["certify_factor"], "/certify_factor") : 10.0;
  return evaluate_triangle(f, g, id.p, MeasureContext(povm, rho), cfg, factor);
}

inline SearchOutcome search_counterexample(const ConjectureId& id, int budget, std::uint64_t seed, const SearchParams& sp = {}) {
  sp.validate();
  if (budget < 0) throw DomainError("search: budget must be >= 0");
  if (id.proved() && !sp.control)
    throw DomainError("conjecture " + id.str() +
                      ": the triangle inequality is proved at p = 1 and p = 2; pass the control option to run an "
                      "integrity check there");
  SearchOutcome out;
  out.id = id;
  out.budget = budget;
  out.seed = seed;
  out.config = sp.to_json();

  if (id.kind == ConjectureId::Kind::kCandidateTriangle) {
    const std::size_t chunk = static_cast<std::size_t>(std::max(1, sp.workers)) * 4;
    for (std::size_t start = 0; start < static_cast<std::size_t>(budget) && !out.found; start += chunk) {
      const std::size_t n = std::min(chunk, static_cast<std::size_t>(budget) - start);
      std::vector<detail::TriangleTrial> res(n);
      parallel_for(n, sp.workers, [&](std::size_t k) { res[k] = detail::triangle_trial(id, sp, seed, start + k); });
      for (std::size_t k = 0; k < n; ++k) {
        const auto& t = res[k];
        ++out.trials_run;
        if (t.skipped) {
          ++out.prefiltered;
          continue;
        }
        out.best_ratio = std::max(out.best_ratio, t.eval.ratio);
        if (t.eval.margin > out.best_margin) {
          out.best_margin = t.eval.margin;
          out.best_candidate = detail::witness_json(id, sp, seed, start + k, t);
        }
        if (t.eval.certified) {
          out.found = true;
          out.witness = detail::witness_json(id, sp, seed, start + k, t);
          break;
        }
      }
    }
    return out;
  }

  // Comparability: the largest certified ratio ||f||_p / ||f||_{S^1,L^p}
  // per (dim, atoms) cell of the sweep grid.
  struct Cell {
    int dim, atoms, trials = 0;
    double best_lower = 0.0, best_mid = 0.0;
  };
  std::vector<Cell> cells;
  for (int d = 1; d <= sp.max_dim; ++d)
    for (int a = 1; a <= sp.max_atoms; ++a) cells.push_back({d, a});
  struct Sample {
    double lower = 0.0, mid = 0.0;
  };
  std::vector<Sample> samples(static_cast<std::size_t>(budget));
  parallel_for(samples.size(), sp.workers, [&](std::size_t t) {
    const Cell& cell = cells[t % cells.size()];
    Rng rng = trial_rng(seed, t);
    const SampleSpace space = SampleSpace::numbered(cell.atoms);
    const MeasureContext ctx(random_povm(space, cell.dim, rng), random_state(cell.dim, rng));
    const QRV f = random_qrv(space, cell.dim, rng);
    const NormEstimate a = p_norm(f, id.p, ctx, sp.solver);
    const NormEstimate b = schatten_mixed(f, 1.0, id.p, ctx, sp.solver);
    samples[t].lower = b.upper > 0.0 ? a.lower / b.upper : 0.0;
    samples[t].mid = b.mid() > 0.0 ? a.mid() / b.mid() : 0.0;
  });
  for (std::size_t t = 0; t < samples.size(); ++t) {
    Cell& cell = cells[t % cells.size()];
    ++cell.trials;
    cell.best_lower = std::max(cell.best_lower, samples[t].lower);
    cell.best_mid = std::max(cell.best_mid, samples[t].mid);
    out.best_ratio = std::max(out.best_ratio, samples[t].lower);
  }
  out.trials_run = budget;
  for (const auto& c : cells)
    out.trajectory.push_back(
        {{"dim", c.dim}, {"atoms", c.atoms}, {"trials", c.trials}, {"max_ratio_lower", c.best_lower}, {"max_ratio_mid", c.best_mid}});
  return out;
}

}  // namespace ovlp

#endif  // OVLP_VERIFY_HPP
