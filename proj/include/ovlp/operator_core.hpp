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

#ifndef OVLP_OPERATOR_CORE_HPP
#define OVLP_OPERATOR_CORE_HPP

//
// Dense complex-matrix calculus on B(H) for finite-dimensional H: Hermitian
// structure, Loewner order, spectral functions, Schatten norms, polar parts
// and Kronecker products. Every spectral function routes through eigh().
//

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <string>

#include "ovlp/errors.hpp"

namespace ovlp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Multiplier applied to every default tolerance, read once from
/// OVLP_TOL_SCALE (unset or unparsable means 1).
inline double tolerance_scale() {
  static const double scale = [] {
    const char* env = std::getenv("OVLP_TOL_SCALE");
    if (env == nullptr) return 1.0;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    return (end != env && v > 0.0 && std::isfinite(v)) ? v : 1.0;
  }();
  return scale;
}

/// Absolute tolerances; checks scale them by (1 + ||A||).
struct Tolerances {
  double herm = 1e-9;
  double psd = 1e-9;
  double rank = 1e-10;

  static Tolerances defaults() {
    const double s = tolerance_scale();
    return {1e-9 * s, 1e-9 * s, 1e-10 * s};
  }
};

/// Eigenvalues ascending, eigenvectors as unitary columns.
struct SpectralDecomposition {
  RealVector values;
  Matrix vectors;

  Matrix reconstruct() const { return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint(); }
};

struct PolarParts {
  Matrix abs;       // (A*A)^{1/2}
  Matrix abs_star;  // (AA*)^{1/2}
  Matrix u;         // partial isometry with A = u * abs
};

struct HermitianParts {
  Matrix re;
  Matrix im;
};

struct PosNegParts {
  Matrix pos;
  Matrix neg;
};

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

inline double frobenius(const Matrix& a) { return a.norm(); }

inline Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

inline void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) throw DomainError(std::string(what) + ": matrix is not square");
}

inline bool is_hermitian(const Matrix& a, double tol = Tolerances::defaults().herm) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * (1.0 + a.norm());
}

inline void require_hermitian(const Matrix& a, const char* what, double tol = Tolerances::defaults().herm) {
  require_square(a, what);
  if (!is_hermitian(a, tol)) throw DomainError(std::string(what) + ": matrix is not Hermitian");
}

/// Symmetric eigensolver on the Hermitian part of `a`.
inline SpectralDecomposition eigh(const Matrix& a) {
  require_square(a, "eigh");
  if (a.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double min_eigenvalue(const Matrix& a) { return eigh(a).values(0); }
inline double max_eigenvalue(const Matrix& a) { return eigh(a).values(a.rows() - 1); }

inline RealVector singular_values(const Matrix& a) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

inline double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

/// Loewner positivity: λ_min(A) ≥ −tol·(1 + ||A||).
inline bool psd_check(const Matrix& a, double tol = Tolerances::defaults().psd) {
  require_hermitian(a, "psd_check");
  if (a.rows() == 0) return true;
  const SpectralDecomposition sd = eigh(a);
  const double scale = 1.0 + std::max(std::abs(sd.values(0)), std::abs(sd.values(sd.values.size() - 1)));
  return sd.values(0) >= -tol * scale;
}

inline bool loewner_geq(const Matrix& a, const Matrix& b, double tol = Tolerances::defaults().psd) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("loewner_geq: dimension mismatch");
  require_hermitian(a, "loewner_geq");
  require_hermitian(b, "loewner_geq");
  return psd_check(a - b, tol);
}

/// Spectral function applied to a Hermitian matrix.
template <typename Fn>
Matrix spectral_apply(const SpectralDecomposition& sd, Fn&& fn) {
  RealVector mapped(sd.values.size());
  for (Eigen::Index i = 0; i < sd.values.size(); ++i) mapped(i) = fn(sd.values(i));
  return sd.vectors * mapped.cast<Complex>().asDiagonal() * sd.vectors.adjoint();
}

/// A^t for PSD A and t ≥ 0. Eigenvalues in [−psd_tol·(1+||A||), 0] are
/// clamped to zero and zero maps to zero for every t.
inline Matrix matrix_power(const Matrix& a, double t, double tol = Tolerances::defaults().psd) {
  require_hermitian(a, "matrix_power");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("matrix_power: exponent must be finite and >= 0");
  if (a.rows() == 0) return a;
  const SpectralDecomposition sd = eigh(a);
  const double scale = 1.0 + std::max(std::abs(sd.values(0)), std::abs(sd.values(sd.values.size() - 1)));
  if (sd.values(0) < -tol * scale) throw DomainError("matrix_power: matrix is not positive semidefinite");
  return spectral_apply(sd, [t](double lam) { return lam > 0.0 ? std::pow(lam, t) : 0.0; });
}

inline Matrix psd_sqrt(const Matrix& a, double tol = Tolerances::defaults().psd) { return matrix_power(a, 0.5, tol); }

/// Square root of the PSD part; never throws on slightly indefinite input.
inline Matrix clamped_sqrt(const Matrix& a) {
  return spectral_apply(eigh(a), [](double lam) { return lam > 0.0 ? std::sqrt(lam) : 0.0; });
}

/// (Σ σ_i^p)^{1/p}; p = ∞ gives σ_max.
inline double schatten_norm(const Matrix& a, double p) {
  if (!(p >= 1.0)) throw DomainError("schatten_norm: p must be >= 1");
  const RealVector s = singular_values(a);
  if (s.size() == 0) return 0.0;
  if (std::isinf(p)) return s(0);
  if (p == 1.0) return s.sum();
  const double smax = s(0);
  if (smax == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i) / smax, p);
  return smax * std::pow(acc, 1.0 / p);
}

inline double trace_norm(const Matrix& a) { return schatten_norm(a, 1.0); }

/// Trace norm of a Hermitian matrix (sum of |eigenvalues|).
inline double hermitian_trace_norm(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  return eigh(a).values.cwiseAbs().sum();
}

inline PolarParts polar_parts(const Matrix& a, double rank_tol = 1e-12) {
  require_square(a, "polar_parts");
  const Eigen::Index n = a.rows();
  if (n == 0) return {a, a, a};
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const Matrix& uu = svd.matrixU();
  const Matrix& vv = svd.matrixV();
  const auto sigma = s.cast<Complex>().asDiagonal();
  PolarParts out;
  out.abs = vv * sigma * vv.adjoint();
  out.abs_star = uu * sigma * uu.adjoint();
  out.u = Matrix::Zero(n, n);
  const double cutoff = rank_tol * (1.0 + s(0));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s(i) > cutoff) out.u += uu.col(i) * vv.col(i).adjoint();
  }
  return out;
}

/// A = re + i·im with re, im Hermitian.
inline HermitianParts hermitian_parts(const Matrix& a) {
  require_square(a, "hermitian_parts");
  return {0.5 * (a + a.adjoint()), Complex(0.0, -0.5) * (a - a.adjoint())};
}

/// H = pos − neg with pos·neg = 0.
inline PosNegParts pos_neg_parts(const Matrix& h, double tol = Tolerances::defaults().herm) {
  require_hermitian(h, "pos_neg_parts", tol);
  if (h.rows() == 0) return {h, h};
  const SpectralDecomposition sd = eigh(h);
  return {spectral_apply(sd, [](double l) { return l > 0.0 ? l : 0.0; }),
          spectral_apply(sd, [](double l) { return l < 0.0 ? -l : 0.0; })};
}

/// |H| for Hermitian H.
inline Matrix hermitian_abs(const Matrix& h) {
  return spectral_apply(eigh(h), [](double l) { return std::abs(l); });
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double commutator_norm(const Matrix& a, const Matrix& b) { return (a * b - b * a).norm(); }

inline Eigen::Index numerical_rank(const Matrix& a, double rel_tol = 1e-10) {
  const RealVector s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

inline double real_trace(const Matrix& a) { return a.trace().real(); }

}  // namespace ovlp

#endif  // OVLP_OPERATOR_CORE_HPP
