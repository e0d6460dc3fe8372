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

#ifndef OVLP_OPTIMIZE_HPP
#define OVLP_OPTIMIZE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ovlp/minimax.hpp"
#include "ovlp/qrv.hpp"
#include "ovlp/state_sup.hpp"

namespace ovlp {

/// Certified interval [lower, upper] around a variational value.
struct NormEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::string method;
  int iterations = 0;
  bool warning = false;  // budget ran out before the gap closed

  double mid() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
  bool contains(double v, double tol) const { return v >= lower - tol && v <= upper + tol; }

  static NormEstimate exact(double v, std::string method) { return {v, v, std::move(method), 0, false}; }
};

struct SolverConfig {
  int max_iters = 500;
  std::string step_rule = "barrier";
  int restarts = 8;
  int grid_resolution = 64;
  std::uint64_t seed = 0;
  double tol = 1e-6 * tolerance_scale();

  void validate() const {
    if (max_iters <= 0 || restarts < 0 || grid_resolution <= 0 || !(tol > 0.0))
      throw DomainError("solver config: budgets and tolerance must be positive");
    if (step_rule != "barrier") throw DomainError("solver config: unknown step_rule '" + step_rule + "'");
  }
};

inline void require_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw DomainError(std::string(what) + ": exponent must be >= 1");
}

namespace detail {

/// Per-atom data with the weight and derivative folded in:
/// w^{1/p} D^{1/2} X D^{1/2}, non-null atoms only.
inline std::vector<Matrix> scaled(const std::vector<Matrix>& values, const MeasureContext& ctx, double p) {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (ctx.null_atom(i)) continue;
    const double c = std::isinf(p) ? 1.0 : std::pow(ctx.weight(i), 1.0 / p);
    out.push_back(c * ctx.compress(i, values[i]));
  }
  return out;
}

inline bool all_zero(const std::vector<Matrix>& m, double tol) {
  for (const auto& x : m)
    if (x.cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

inline minimax::Options options_from(const SolverConfig& cfg) {
  minimax::Options opt;
  opt.max_rounds = cfg.max_iters;
  opt.restarts = cfg.restarts;
  opt.tol = cfg.tol;
  opt.seed = cfg.seed;
  return opt;
}

/// Separable suprema come from local ascent, so the cut loop stops at a
/// coarser gap; the certified upper bound does not depend on it.
inline minimax::Options product_options(const SolverConfig& cfg, ProductShape shape) {
  minimax::Options opt = options_from(cfg);
  if (shape.product()) {
    opt.tol = std::max(opt.tol, 1e-3);
    opt.max_rounds = std::min(opt.max_rounds, 120);
  }
  return opt;
}

inline NormEstimate estimate_from(const minimax::Result& r, const char* method) {
  NormEstimate e;
  e.lower = std::max(0.0, r.lower);
  e.upper = std::max(e.lower, r.upper);
  e.method = method;
  e.iterations = r.rounds;
  e.warning = !r.converged;
  return e;
}

/// sup over states (or product states) of the unweighted ℓ^p functional.
inline NormEstimate sup_scaled(const std::vector<Matrix>& g, double p, const SolverConfig& cfg, ProductShape shape = {}) {
  if (g.empty()) return NormEstimate::exact(0.0, "empty");
  if (all_zero(g, 0.0)) return NormEstimate::exact(0.0, "zero");
  if (g.front().rows() == 1) {
    RealVector h(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) h(static_cast<Eigen::Index>(i)) = g[i](0, 0).real();
    return NormEstimate::exact(lp_norm(h, p), "scalar");
  }
  std::mt19937_64 rng(cfg.seed ^ 0x5bd1e995ULL);
  const auto cuts = sup_state_ascent(g, p, cfg.restarts, rng, {}, shape);
  const double lower = cuts.empty() ? 0.0 : cuts.front().value;
  const SupUpper up = sup_state_upper(g, p, lower);
  NormEstimate e;
  e.lower = lower;
  e.upper = std::max(lower, up.upper);
  e.method = shape.product() ? "product-ascent/bnb" : "ascent/bnb";
  e.iterations = up.patches;
  e.warning = !up.converged;
  return e;
}

}  // namespace detail

/// sup_s ( Σ_x weight(x) h_s(x)^p )^{1/p} for positive h.
inline NormEstimate sup_state_lp(const QRV& h, double p, const MeasureContext& ctx, const SolverConfig& cfg = {}) {
  require_exponent(p, "sup_state_lp");
  if (!h.is_positive()) throw DomainError("sup_state_lp: integrand must be positive");
  ovlp::detail::require_compatible(h, ctx);
  std::vector<Matrix> vals;
  for (const auto& v : h.values()) vals.push_back(hermitian_part(v));
  return detail::sup_scaled(detail::scaled(vals, ctx, p), p, cfg);
}

namespace detail {

/// Decomposition data for f; empty `re` means f vanishes a.e.
inline minimax::Problem decomposition_problem(const QRV& f, double p, const MeasureContext& ctx, ProductShape shape) {
  minimax::Problem prob;
  prob.shape = minimax::Shape::kDecomposition;
  prob.dim = f.dim();
  prob.p = p;
  prob.states = shape;
  prob.re = scaled(ovlp::re(f).values(), ctx, p);
  prob.im = scaled(ovlp::im(f).values(), ctx, p);
  double scale = 0.0;
  for (const auto& m : prob.re) scale = std::max(scale, m.cwiseAbs().maxCoeff());
  for (const auto& m : prob.im) scale = std::max(scale, m.cwiseAbs().maxCoeff());
  if (all_zero(prob.im, 1e-14 * (1.0 + scale))) prob.im.clear();
  if (scale == 0.0) prob.re.clear();
  return prob;
}

/// Minimise F over R^n from x0 (Nelder–Mead with initial edge `step`).
template <typename Fn>
RealVector nelder_mead(Fn&& fn, RealVector x0, double step, int max_evals, double* fbest = nullptr) {
  const Eigen::Index n = x0.size();
  std::vector<RealVector> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) pts[i + 1](i) += step;
  for (Eigen::Index i = 0; i <= n; ++i) val[i] = fn(pts[i]);
  int evals = static_cast<int>(n + 1);
  std::vector<Eigen::Index> order(n + 1);
  while (evals < max_evals) {
    for (Eigen::Index i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return val[a] < val[b]; });
    const Eigen::Index lo = order[0], hi = order[n], nh = order[n - 1];
    if (std::abs(val[hi] - val[lo]) <= 1e-13 * (1.0 + std::abs(val[lo]))) break;
    RealVector c = RealVector::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i)
      if (i != hi) c += pts[i];
    c /= double(n);
    const RealVector xr = c + (c - pts[hi]);
    const double fr = fn(xr);
    ++evals;
    if (fr < val[lo]) {
      const RealVector xe = c + 2.0 * (c - pts[hi]);
      const double fe = fn(xe);
      ++evals;
      if (fe < fr) {
        pts[hi] = xe;
        val[hi] = fe;
      } else {
        pts[hi] = xr;
        val[hi] = fr;
      }
    } else if (fr < val[nh]) {
      pts[hi] = xr;
      val[hi] = fr;
    } else {
      const RealVector xc = fr < val[hi] ? RealVector(c + 0.5 * (xr - c)) : RealVector(c + 0.5 * (pts[hi] - c));
      const double fc = fn(xc);
      ++evals;
      if (fc < std::min(fr, val[hi])) {
        pts[hi] = xc;
        val[hi] = fc;
      } else {
        for (Eigen::Index i = 0; i <= n; ++i) {
          if (i == lo) continue;
          pts[i] = pts[lo] + 0.5 * (pts[i] - pts[lo]);
          val[i] = fn(pts[i]);
          ++evals;
        }
      }
    }
  }
  const auto best = std::min_element(val.begin(), val.end()) - val.begin();
  if (fbest != nullptr) *fbest = val[best];
  return pts[best];
}

/// Density matrix BB*/tr(BB*) from the 2d² real entries of B.
inline Matrix state_from_params(const RealVector& x, Eigen::Index d) {
  Matrix b(d, d);
  for (Eigen::Index i = 0; i < d * d; ++i) b(i / d, i % d) = Complex(x(2 * i), x(2 * i + 1));
  Matrix s = b * b.adjoint();
  const double t = s.trace().real();
  return t > 0.0 ? Matrix(s / t) : Matrix(Matrix::Identity(d, d) / double(d));
}

/// Parameters of a state σ: B = σ^{1/2}.
inline RealVector params_from_state(const Matrix& sigma) {
  const Eigen::Index d = sigma.rows();
  const Matrix b = clamped_sqrt(sigma);
  RealVector x(2 * d * d);
  for (Eigen::Index i = 0; i < d * d; ++i) {
    x(2 * i) = b(i / d, i % d).real();
    x(2 * i + 1) = b(i / d, i % d).imag();
  }
  return x;
}

}  // namespace detail

/// inf over Pos_f of sup_s ||(f1+f2+f3+f4)_s||_p.
///
/// With Y = f1 + f2 and Z = f3 + f4 the feasible set is exactly
/// {Y ⪰ ±Re f, Z ⪰ ±Im f} and the objective is the state supremum of Y + Z.
inline NormEstimate inf_decomposition_pnorm(const QRV& f, double p, const MeasureContext& ctx, const SolverConfig& cfg = {},
                                            ProductShape shape = {}) {
  require_exponent(p, "inf_decomposition_pnorm");
  ovlp::detail::require_compatible(f, ctx);
  cfg.validate();
  const minimax::Problem prob = detail::decomposition_problem(f, p, ctx, shape);
  if (prob.re.empty()) return NormEstimate::exact(0.0, "zero");
  return detail::estimate_from(minimax::solve(prob, detail::product_options(cfg, shape)),
                               shape.product() ? "product-cuts/barrier" : "cuts/barrier");
}

/// inf max(sup-norm(S1), sup-norm(S2)) over [[S1, f], [f*, S2]] ⪰ 0.
inline NormEstimate inf_block_dec(const QRV& f, double p, const MeasureContext& ctx, const SolverConfig& cfg = {},
                                  ProductShape shape = {}) {
  require_exponent(p, "inf_block_dec");
  ovlp::detail::require_compatible(f, ctx);
  cfg.validate();
  minimax::Problem prob;
  prob.shape = minimax::Shape::kBlock;
  prob.dim = f.dim();
  prob.p = p;
  prob.states = shape;
  prob.offdiag = detail::scaled(f.values(), ctx, p);
  if (prob.offdiag.empty() || detail::all_zero(prob.offdiag, 0.0)) return NormEstimate::exact(0.0, "zero");
  return detail::estimate_from(minimax::solve(prob, detail::product_options(cfg, shape)),
                               shape.product() ? "product-block-cuts/barrier" : "block-cuts/barrier");
}

}  // namespace ovlp

#endif  // OVLP_OPTIMIZE_HPP
