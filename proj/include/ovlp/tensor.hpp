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

#ifndef OVLP_TENSOR_HPP
#define OVLP_TENSOR_HPP

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ovlp/norms.hpp"

namespace ovlp {

enum class TensorDefinition {
  kProduct,  // μ(x)·(dν1/dμ ⊗ dν2/dμ)
  kSqrt,     // ν1({x})^{1/2} ⊗ ν2({x})^{1/2}, independent of μ
};

namespace detail {

inline void require_tensor_inputs(const DiscretePOVM& n1, const DiscretePOVM& n2, const ScalarMeasure& mu) {
  if (!(n1.space() == n2.space()) || !(n1.space() == mu.space))
    throw DomainError("tensor_povm: factors and base measure must share the sample space");
  for (double w : mu.weights)
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("tensor_povm: base weights must be finite and nonnegative");
}

/// Per-atom derivative of the tensor POVM with respect to μ (zero where μ vanishes).
inline std::vector<Matrix> tensor_derivative(const DiscretePOVM& n1, const DiscretePOVM& n2, const ScalarMeasure& mu,
                                             TensorDefinition def) {
  require_tensor_inputs(n1, n2, mu);
  const Eigen::Index d = n1.dim() * n2.dim();
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < mu.weights.size(); ++i) {
    const double m = mu.weights[i];
    const Matrix& e1 = n1.effect(i);
    const Matrix& e2 = n2.effect(i);
    if (m == 0.0) {
      const double tol = Tolerances::defaults().psd;
      if (operator_norm(e1) > tol || operator_norm(e2) > tol)
        throw DomainError("tensor_povm: factor not absolutely continuous with respect to the base measure at atom '" +
                          mu.space.label(i) + "'");
      out.push_back(Matrix::Zero(d, d));
      continue;
    }
    if (def == TensorDefinition::kProduct)
      out.push_back(kron(e1 / m, e2 / m));
    else
      out.push_back(kron(clamped_sqrt(e1), clamped_sqrt(e2)) / m);
  }
  return out;
}

}  // namespace detail

/// ν1 ⊗_μ ν2 on the product space of dimension dim1·dim2.
inline DiscretePOVM tensor_povm(const DiscretePOVM& n1, const DiscretePOVM& n2, const ScalarMeasure& mu,
                                TensorDefinition def = TensorDefinition::kProduct) {
  const std::vector<Matrix> d = detail::tensor_derivative(n1, n2, mu, def);
  std::vector<Matrix> effects;
  for (std::size_t i = 0; i < d.size(); ++i) effects.push_back(hermitian_part(mu.weights[i] * d[i]));
  return DiscretePOVM(mu.space, n1.dim() * n2.dim(), std::move(effects));
}

/// Context pairing functions against ν1 ⊗_μ ν2 with μ as the scalar measure.
inline MeasureContext tensor_context(const DiscretePOVM& n1, const DiscretePOVM& n2, const ScalarMeasure& mu,
                                     TensorDefinition def = TensorDefinition::kProduct) {
  return MeasureContext::from_derivative(mu.space, mu.weights, detail::tensor_derivative(n1, n2, mu, def));
}

/// ν ⊗_{ν_ρ} ν for the POVM and reference state behind `ctx`.
inline MeasureContext self_tensor_context(const MeasureContext& ctx) {
  std::vector<Matrix> d;
  for (std::size_t i = 0; i < ctx.atoms(); ++i) d.push_back(kron(ctx.derivative(i), ctx.derivative(i)));
  return MeasureContext::from_derivative(ctx.space(), ctx.weights(), d);
}

/// (f ⊗ g)(x) = f(x) ⊗ g(x).
inline QRV tensor(const QRV& f, const QRV& g) {
  if (f.atoms() != g.atoms()) throw DomainError("tensor: sample spaces differ");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < f.atoms(); ++i) out.push_back(kron(f[i], g[i]));
  return QRV(f.space(), std::move(out));
}

/// Finite convex combination of product states s1 ⊗ s2.
class ProductState {
 public:
  ProductState(std::vector<std::pair<DensityOperator, DensityOperator>> factors, std::vector<double> weights)
      : factors_(std::move(factors)), weights_(std::move(weights)) {
    if (factors_.empty() || factors_.size() != weights_.size())
      throw DomainError("ProductState: one weight per factor pair required");
    double total = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) throw DomainError("ProductState: weights must be nonnegative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) throw DomainError("ProductState: weights must sum to 1");
    for (const auto& [a, b] : factors_)
      if (a.dim() != factors_.front().first.dim() || b.dim() != factors_.front().second.dim())
        throw DomainError("ProductState: inconsistent factor dimensions");
  }

  static ProductState product(DensityOperator s1, DensityOperator s2) {
    return ProductState({{std::move(s1), std::move(s2)}}, {1.0});
  }

  Matrix matrix() const {
    Matrix out = Matrix::Zero(factors_.front().first.dim() * factors_.front().second.dim(),
                              factors_.front().first.dim() * factors_.front().second.dim());
    for (std::size_t k = 0; k < factors_.size(); ++k)
      out += weights_[k] * kron(factors_[k].first.matrix(), factors_[k].second.matrix());
    return out;
  }

  const std::vector<std::pair<DensityOperator, DensityOperator>>& factors() const { return factors_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<std::pair<DensityOperator, DensityOperator>> factors_;
  std::vector<double> weights_;
};

/// Supremum over separable states of (Σ_x μ(x) h_s(x)^p)^{1/p} for positive h.
/// Lower bound from product-state ascent, upper bound from the full state space.
inline NormEstimate sep_sup_state_lp(const QRV& h, double p, const MeasureContext& ctx, ProductShape shape,
                                     const SolverConfig& cfg = {}) {
  require_exponent(p, "sep_sup_state_lp");
  if (!h.is_positive()) throw DomainError("sep_sup_state_lp: integrand must be positive");
  detail::require_compatible(h, ctx);
  if (shape.d1 * shape.d2 != h.dim()) throw DomainError("sep_sup_state_lp: factor shape does not match the dimension");
  std::vector<Matrix> vals;
  for (const auto& v : h.values()) vals.push_back(hermitian_part(v));
  NormEstimate e = detail::sup_scaled(detail::scaled(vals, ctx, p), p, cfg, shape);
  e.method = "product-ascent/full-bound";
  return e;
}

namespace detail {

/// Ascent for sup over product vectors of ||(|⟨ψ, M_x ψ⟩|)_x||_p, linearising
/// the phase and the Hölder weights at each step.
inline double product_abs_ascent(const std::vector<Matrix>& m, double p, ProductShape shape, Vector psi, int max_steps = 300) {
  auto profile = [&](const Vector& v, std::vector<Complex>& z) {
    RealVector h(static_cast<Eigen::Index>(m.size()));
    z.resize(m.size());
    for (std::size_t x = 0; x < m.size(); ++x) {
      z[x] = v.dot(m[x] * v);
      h(static_cast<Eigen::Index>(x)) = std::abs(z[x]);
    }
    return h;
  };
  auto [u, v] = split_product(psi / psi.norm(), shape.d1, shape.d2);
  psi = kron_vec(u, v);
  std::vector<Complex> z;
  RealVector h = profile(psi, z);
  double value = lp_norm(h, p);
  for (int step = 0; step < max_steps; ++step) {
    const RealVector phi = holder_dual(h, p);
    Matrix k = Matrix::Zero(m.front().rows(), m.front().cols());
    for (std::size_t x = 0; x < m.size(); ++x) {
      const Complex phase = std::abs(z[x]) > 0.0 ? std::conj(z[x]) / std::abs(z[x]) : Complex(1.0, 0.0);
      k += phi(static_cast<Eigen::Index>(x)) * hermitian_part(phase * m[x]);
    }
    u = top_eigenvector(partial_first(k, v, shape.d1, shape.d2));
    v = top_eigenvector(partial_second(k, u, shape.d1, shape.d2));
    const Vector next = kron_vec(u, v);
    std::vector<Complex> zn;
    const RealVector hn = profile(next, zn);
    const double vn = lp_norm(hn, p);
    if (vn <= value * (1.0 + 1e-14)) {
      if (vn > value) value = vn;
      break;
    }
    psi = next;
    h = hn;
    z = zn;
    value = vn;
  }
  return value;
}

}  // namespace detail

/// ||h||_{p,sep} = sup over separable s of ||h_s||_{L^p(μ)} for any h on the
/// product space. The objective is convex in s, so pure product states
/// suffice for the lower bound; the upper bound uses |⟨ψ, Mψ⟩| ≤ ⟨ψ, Tψ⟩ for
/// T = (|M| + |M*|)/2 over all states.
inline NormEstimate sep_p_norm(const QRV& h, double p, const MeasureContext& ctx, ProductShape shape,
                               const SolverConfig& cfg = {}) {
  require_exponent(p, "sep_p_norm");
  detail::require_compatible(h, ctx);
  cfg.validate();
  if (shape.d1 * shape.d2 != h.dim()) throw DomainError("sep_p_norm: factor shape does not match the dimension");
  if (h.is_positive()) return sep_sup_state_lp(h, p, ctx, shape, cfg);
  const std::vector<Matrix> m = detail::scaled(h.values(), ctx, p);
  if (m.empty() || detail::all_zero(m, 0.0)) return NormEstimate::exact(0.0, "zero");
  std::mt19937_64 rng(cfg.seed ^ 0x165667b19e3779f9ULL);
  std::vector<Vector> starts;
  for (Eigen::Index a = 0; a < shape.d1; ++a)
    for (Eigen::Index b = 0; b < shape.d2; ++b)
      starts.push_back(detail::kron_vec(Vector::Unit(shape.d1, a), Vector::Unit(shape.d2, b)));
  std::vector<Matrix> t;
  for (const auto& x : m) {
    const PolarParts pp = polar_parts(x);
    t.push_back(0.5 * (pp.abs + pp.abs_star));
    starts.push_back(top_eigenvector(t.back()));
  }
  for (int r = 0; r < cfg.restarts; ++r)
    starts.push_back(detail::kron_vec(random_unit_vector(shape.d1, rng), random_unit_vector(shape.d2, rng)));
  double lower = 0.0;
  for (const Vector& s : starts) lower = std::max(lower, detail::product_abs_ascent(m, p, shape, s));
  const SupUpper up = sup_state_upper(t, p, lower);
  NormEstimate e;
  e.lower = lower;
  e.upper = std::max(lower, up.upper);
  e.method = "product-ascent/trace-bound";
  e.iterations = static_cast<int>(starts.size());
  e.warning = !up.converged;
  return e;
}

/// ||h||_{p,sep,dec}: the block problem with separable-state suprema.
inline NormEstimate sep_dec_norm(const QRV& h, double p, const MeasureContext& ctx, ProductShape shape,
                                 const SolverConfig& cfg = {}) {
  if (shape.d1 * shape.d2 != h.dim()) throw DomainError("sep_dec_norm: factor shape does not match the dimension");
  return inf_block_dec(h, p, ctx, cfg, shape);
}

enum class SepMode {
  kSep1,          // ||f⊗g||_{1,sep} ≤ ||f||_p ||g||_q
  kSepDec,        // ||f⊗g||_{1,sep,dec} ≤ ||f||_{p,dec} ||g||_{q,dec}
  kMultiplier,    // ||f⊗g||_1 ≤ 2 ||D||_∞ ||f||_1 ||g||_∞
  kMultiplierDec  // ||f⊗g||_{1,dec} ≤ ||D||_∞ ||f||_{1,dec} ||g||_∞
};

inline std::string to_string(SepMode m) {
  switch (m) {
    case SepMode::kSep1: return "sep_1";
    case SepMode::kSepDec: return "sep_dec";
    case SepMode::kMultiplier: return "multiplier";
    case SepMode::kMultiplierDec: return "multiplier_dec";
  }
  return "";
}

/// Both sides of a tensor inequality. The verdict compares the lower end of
/// the left side with the upper end of the right side.
struct SepResult {
  NormEstimate lhs;
  NormEstimate f_norm;
  NormEstimate g_norm;
  double factor = 1.0;  // constant in front of the product on the right
  double rhs_lower = 0.0;
  double rhs_upper = 0.0;
  bool holds = true;
  double margin = 0.0;  // lhs.lower − rhs_upper; positive means violated
};

inline bool holder_pair(double p, double q) {
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  return p >= 1.0 && q >= 1.0 && std::abs(ip + iq - 1.0) <= 1e-12;
}

/// Tensor Hölder and multiplier inequalities for f, g on the POVM behind
/// `ctx`, with f ⊗ g measured against ν ⊗_{ν_ρ} ν.
inline SepResult sep_norms(const QRV& f, const QRV& g, double p, double q, SepMode mode, const MeasureContext& ctx,
                           const SolverConfig& cfg = {}, double tol = 1e-2) {
  detail::require_compatible(f, ctx);
  detail::require_compatible(g, ctx);
  const MeasureContext tctx = self_tensor_context(ctx);
  const QRV fg = tensor(f, g);
  const ProductShape shape{f.dim(), g.dim()};
  SepResult r;
  switch (mode) {
    case SepMode::kSep1:
    case SepMode::kSepDec: {
      if (!holder_pair(p, q)) throw DomainError("sep_norms: exponents must satisfy 1/p + 1/q = 1");
      // At an infinite exponent the essential bound ignores the derivative D,
      // so the pairing estimate ||g_s||_q ≤ ||g||_q is not available.
      if (std::isinf(p) || std::isinf(q)) throw DomainError("sep_norms: Hölder modes need finite exponents 1 < p, q < ∞");
      const bool dec = mode == SepMode::kSepDec;
      r.lhs = dec ? sep_dec_norm(fg, 1.0, tctx, shape, cfg) : sep_p_norm(fg, 1.0, tctx, shape, cfg);
      r.f_norm = dec ? dec_p_norm(f, p, ctx, cfg) : p_norm(f, p, ctx, cfg);
      r.g_norm = dec ? dec_p_norm(g, q, ctx, cfg) : p_norm(g, q, ctx, cfg);
      break;
    }
    case SepMode::kMultiplier:
    case SepMode::kMultiplierDec: {
      if (!ctx.derivative_invertible())
        throw DomainError("sep_norms: multiplier bound needs an invertible derivative on every atom of positive mass");
      const bool dec = mode == SepMode::kMultiplierDec;
      r.factor = (dec ? 1.0 : 2.0) * ctx.derivative_sup_norm();
      r.lhs = dec ? dec_p_norm(fg, 1.0, tctx, cfg) : one_norm(fg, tctx, cfg);
      r.f_norm = dec ? dec_p_norm(f, 1.0, ctx, cfg) : one_norm(f, ctx, cfg);
      r.g_norm = NormEstimate::exact(inf_norm(g, ctx), "inf");
      break;
    }
  }
  r.rhs_lower = r.factor * r.f_norm.lower * r.g_norm.lower;
  r.rhs_upper = r.factor * r.f_norm.upper * r.g_norm.upper;
  r.margin = r.lhs.lower - r.rhs_upper;
  r.holds = r.margin <= tol;
  return r;
}

}  // namespace ovlp

#endif  // OVLP_TENSOR_HPP
