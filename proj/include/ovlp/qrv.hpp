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

#ifndef OVLP_QRV_HPP
#define OVLP_QRV_HPP

#include <functional>
#include <utility>
#include <vector>

#include "ovlp/povm_measure.hpp"

namespace ovlp {

/// Quantum random variable on a finite atomic space: one matrix per atom.
class QRV {
 public:
  QRV() = default;

  QRV(SampleSpace space, std::vector<Matrix> values) : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_.size()) throw DomainError("QRV: one value per atom required");
    dim_ = values_.front().rows();
    for (const auto& v : values_) {
      if (v.rows() != dim_ || v.cols() != dim_) throw DomainError("QRV: inconsistent value dimensions");
      if (!v.allFinite()) throw DomainError("QRV: non-finite entries");
    }
  }

  static QRV constant(const SampleSpace& space, const Matrix& value) {
    return QRV(space, std::vector<Matrix>(space.size(), value));
  }

  const SampleSpace& space() const { return space_; }
  Eigen::Index dim() const { return dim_; }
  std::size_t atoms() const { return values_.size(); }
  const std::vector<Matrix>& values() const { return values_; }
  const Matrix& operator[](std::size_t i) const { return values_[i]; }

  bool is_hermitian(double tol = Tolerances::defaults().herm) const {
    for (const auto& v : values_)
      if (!ovlp::is_hermitian(v, tol)) return false;
    return true;
  }

  bool is_positive(double tol = Tolerances::defaults().psd) const {
    for (const auto& v : values_)
      if (!ovlp::is_hermitian(v, tol) || !psd_check(v, tol)) return false;
    return true;
  }

  /// Atomwise map.
  QRV map(const std::function<Matrix(const Matrix&)>& fn) const {
    std::vector<Matrix> out;
    out.reserve(values_.size());
    for (const auto& v : values_) out.push_back(fn(v));
    return QRV(space_, std::move(out));
  }

 private:
  SampleSpace space_;
  Eigen::Index dim_ = 0;
  std::vector<Matrix> values_;
};

namespace detail {
inline void require_same_shape(const QRV& f, const QRV& g) {
  if (f.atoms() != g.atoms() || f.dim() != g.dim()) throw DomainError("QRV shape mismatch");
}
inline void require_compatible(const QRV& f, const MeasureContext& ctx) {
  if (f.atoms() != ctx.atoms() || f.dim() != ctx.dim()) throw DomainError("QRV does not match the measure context");
}
}  // namespace detail

inline QRV add(const QRV& f, const QRV& g) {
  detail::require_same_shape(f, g);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < f.atoms(); ++i) out.push_back(f[i] + g[i]);
  return QRV(f.space(), std::move(out));
}

inline QRV subtract(const QRV& f, const QRV& g) {
  detail::require_same_shape(f, g);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < f.atoms(); ++i) out.push_back(f[i] - g[i]);
  return QRV(f.space(), std::move(out));
}

inline QRV scale(const QRV& f, Complex lambda) {
  return f.map([lambda](const Matrix& v) { return Matrix(lambda * v); });
}

inline QRV adjoint(const QRV& f) {
  return f.map([](const Matrix& v) { return Matrix(v.adjoint()); });
}
inline QRV re(const QRV& f) {
  return f.map([](const Matrix& v) { return hermitian_parts(v).re; });
}
inline QRV im(const QRV& f) {
  return f.map([](const Matrix& v) { return hermitian_parts(v).im; });
}
/// |f| = (f*f)^{1/2} atomwise.
inline QRV abs(const QRV& f) {
  return f.map([](const Matrix& v) { return polar_parts(v).abs; });
}
/// |f*| = (ff*)^{1/2} atomwise.
inline QRV abs_star(const QRV& f) {
  return f.map([](const Matrix& v) { return polar_parts(v).abs_star; });
}

/// Atomwise product. Products of positive QRVs are positive only when the
/// factors commute; see commute().
inline QRV pointwise_mul(const QRV& f, const QRV& g) {
  detail::require_same_shape(f, g);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < f.atoms(); ++i) out.push_back(f[i] * g[i]);
  return QRV(f.space(), std::move(out));
}

inline QRV pointwise_power(const QRV& f, double t) {
  return f.map([t](const Matrix& v) { return matrix_power(v, t); });
}

/// max_x ||[f(x), g(x)]||_F ≤ tol.
inline bool commute(const QRV& f, const QRV& g, double tol = 1e-9) {
  detail::require_same_shape(f, g);
  for (std::size_t i = 0; i < f.atoms(); ++i)
    if (commutator_norm(f[i], g[i]) > tol * (1.0 + f[i].norm() * g[i].norm())) return false;
  return true;
}

/// f_s(x) = tr(s D(x)^{1/2} f(x) D(x)^{1/2}).
inline std::vector<Complex> pairing(const QRV& f, const Matrix& s, const MeasureContext& ctx) {
  detail::require_compatible(f, ctx);
  if (s.rows() != f.dim()) throw DomainError("pairing: state dimension mismatch");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < f.atoms(); ++i) out.push_back((s * ctx.compress(i, f[i])).trace());
  return out;
}

inline std::vector<Complex> pairing(const QRV& f, const DensityOperator& s, const RNDerivative& d) {
  if (d.values.size() != f.atoms()) throw DomainError("pairing: derivative does not match the QRV");
  if (s.dim() != f.dim()) throw DomainError("pairing: state dimension mismatch");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < f.atoms(); ++i) {
    const Matrix r = clamped_sqrt(d.values[i]);
    out.push_back((s.matrix() * r * f[i] * r).trace());
  }
  return out;
}

/// Σ_x weight(x) D(x)^{1/2} f(x) D(x)^{1/2}, the unique matrix whose state
/// pairings are the ν_ρ-integrals of f_s.
inline Matrix integrate(const QRV& f, const MeasureContext& ctx) {
  detail::require_compatible(f, ctx);
  Matrix out = Matrix::Zero(f.dim(), f.dim());
  for (std::size_t i = 0; i < f.atoms(); ++i)
    if (!ctx.null_atom(i)) out += ctx.weight(i) * ctx.compress(i, f[i]);
  return out;
}

inline Matrix integrate(const QRV& f, const DiscretePOVM& nu, const DensityOperator& rho) {
  return integrate(f, MeasureContext(nu, rho));
}

}  // namespace ovlp

#endif  // OVLP_QRV_HPP
