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

#ifndef OVLP_POVM_MEASURE_HPP
#define OVLP_POVM_MEASURE_HPP

//
// Discrete POVMs over finite atomic sample spaces, the scalar measure
// ν_ρ(E) = tr(ρ ν(E)) they induce, and the Radon–Nikodým derivative
// dν/dν_ρ, which on an atom is the entrywise ratio ν({x}) / ν_ρ({x}).
//

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ovlp/operator_core.hpp"

namespace ovlp {

class SampleSpace {
 public:
  SampleSpace() = default;

  explicit SampleSpace(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw DomainError("sample space must have at least one atom");
    std::set<std::string> seen(atoms_.begin(), atoms_.end());
    if (seen.size() != atoms_.size()) throw DomainError("sample space atom labels must be unique");
  }

  /// Labels "x0", "x1", ...
  static SampleSpace numbered(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    return SampleSpace(std::move(labels));
  }

  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::string& label(std::size_t i) const { return atoms_.at(i); }

  std::optional<std::size_t> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i] == label) return i;
    return std::nullopt;
  }

  friend bool operator==(const SampleSpace&, const SampleSpace&) = default;

 private:
  std::vector<std::string> atoms_;
};

struct PovmViolation {
  std::string atom;  // empty for global violations
  std::string message;
};

/// Violations of the POVM invariants, empty when the data is a valid POVM.
inline std::vector<PovmViolation> validate_povm(const SampleSpace& space, Eigen::Index dim,
                                                const std::vector<Matrix>& effects,
                                                const Tolerances& tol = Tolerances::defaults()) {
  std::vector<PovmViolation> out;
  if (dim < 1) out.push_back({"", "dimension must be positive"});
  if (effects.size() != space.size()) {
    out.push_back({"", "expected " + std::to_string(space.size()) + " effects, got " + std::to_string(effects.size())});
    return out;
  }
  for (std::size_t i = 0; i < effects.size(); ++i) {
    const Matrix& e = effects[i];
    const std::string& atom = space.label(i);
    if (e.rows() != dim || e.cols() != dim) {
      out.push_back({atom, "dimension mismatch: effect is " + std::to_string(e.rows()) + "x" +
                               std::to_string(e.cols()) + ", POVM dimension is " + std::to_string(dim)});
      continue;
    }
    if (!e.allFinite()) {
      out.push_back({atom, "effect has non-finite entries"});
      continue;
    }
    if (!is_hermitian(e, tol.herm)) {
      out.push_back({atom, "effect is not Hermitian"});
      continue;
    }
    if (!psd_check(e, tol.psd)) {
      out.push_back({atom, "effect is not positive semidefinite (min eigenvalue " +
                               std::to_string(min_eigenvalue(e)) + ")"});
    }
  }
  return out;
}

/// A POVM on a finite atomic space: one PSD effect ν({x}) per atom.
class DiscretePOVM {
 public:
  DiscretePOVM() = default;

  DiscretePOVM(SampleSpace space, Eigen::Index dim, std::vector<Matrix> effects)
      : space_(std::move(space)), dim_(dim), effects_(std::move(effects)) {
    const auto violations = validate_povm(space_, dim_, effects_);
    if (!violations.empty()) {
      std::string msg = "invalid POVM:";
      for (const auto& v : violations) msg += " [" + (v.atom.empty() ? std::string("*") : v.atom) + "] " + v.message + ";";
      throw DomainError(msg);
    }
    for (auto& e : effects_) e = hermitian_part(e);
  }

  /// ν = μ·I for a scalar measure given by its atom masses.
  static DiscretePOVM scalar_times_identity(const SampleSpace& space, Eigen::Index dim, const std::vector<double>& mass) {
    std::vector<Matrix> effects;
    for (double m : mass) effects.push_back(m * identity(dim));
    return DiscretePOVM(space, dim, std::move(effects));
  }

  const SampleSpace& space() const { return space_; }
  Eigen::Index dim() const { return dim_; }
  std::size_t atoms() const { return effects_.size(); }
  const std::vector<Matrix>& effects() const { return effects_; }
  const Matrix& effect(std::size_t i) const { return effects_.at(i); }

  Matrix total() const {
    Matrix t = Matrix::Zero(dim_, dim_);
    for (const auto& e : effects_) t += e;
    return t;
  }

 private:
  SampleSpace space_;
  Eigen::Index dim_ = 0;
  std::vector<Matrix> effects_;
};

/// Positive trace-one operator.
class DensityOperator {
 public:
  DensityOperator() = default;

  explicit DensityOperator(const Matrix& m, const Tolerances& tol = Tolerances::defaults()) {
    require_hermitian(m, "density operator", tol.herm);
    if (!psd_check(m, tol.psd)) throw DomainError("density operator is not positive semidefinite");
    if (std::abs(real_trace(m) - 1.0) > 1e-10 * tolerance_scale())
      throw DomainError("density operator must have trace 1 (got " + std::to_string(real_trace(m)) + ")");
    matrix_ = hermitian_part(m);
    min_eig_ = min_eigenvalue(matrix_);
    rank_tol_ = tol.rank;
  }

  static DensityOperator maximally_mixed(Eigen::Index dim) { return DensityOperator(identity(dim) / double(dim)); }

  static DensityOperator pure(const Vector& psi) {
    const Vector v = psi / psi.norm();
    return DensityOperator(v * v.adjoint());
  }

  const Matrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  double min_eigenvalue_value() const { return min_eig_; }
  bool full_rank() const { return min_eig_ > rank_tol_; }

 private:
  Matrix matrix_;
  double min_eig_ = 0.0;
  double rank_tol_ = 1e-10;
};

struct ScalarMeasure {
  SampleSpace space;
  std::vector<double> weights;

  double total() const {
    double t = 0.0;
    for (double w : weights) t += w;
    return t;
  }
};

struct RNDerivative {
  SampleSpace space;
  std::vector<Matrix> values;
};

namespace detail {

inline void require_full_rank(const DiscretePOVM& nu, const DensityOperator& rho) {
  if (rho.dim() != nu.dim()) throw DomainError("reference state dimension does not match the POVM");
  if (!rho.full_rank())
    throw DomainError("reference state must be full rank (min eigenvalue " + std::to_string(rho.min_eigenvalue_value()) + ")");
}

/// Atoms whose ν_ρ-mass is at most this are treated as null.
inline double null_threshold(double total_mass) { return 1e-14 * (1.0 + total_mass); }

}  // namespace detail

inline ScalarMeasure induced_measure(const DiscretePOVM& nu, const DensityOperator& rho) {
  detail::require_full_rank(nu, rho);
  ScalarMeasure out{nu.space(), {}};
  for (const auto& e : nu.effects()) out.weights.push_back(std::max(0.0, (rho.matrix() * e).trace().real()));
  return out;
}

/// D(x) = ν({x}) / ν_ρ({x}) on atoms of positive mass, 0 on null atoms.
inline RNDerivative rn_derivative(const DiscretePOVM& nu, const DensityOperator& rho) {
  const ScalarMeasure m = induced_measure(nu, rho);
  const double thr = detail::null_threshold(m.total());
  RNDerivative out{nu.space(), {}};
  for (std::size_t i = 0; i < nu.atoms(); ++i) {
    if (m.weights[i] > thr)
      out.values.push_back(nu.effect(i) / m.weights[i]);
    else
      out.values.push_back(Matrix::Zero(nu.dim(), nu.dim()));
  }
  return out;
}

/// The immutable (ν, ρ) context every pairing, integral and norm reads:
/// atom weights ν_ρ({x}), derivatives D(x) and their square roots.
class MeasureContext {
 public:
  MeasureContext() = default;

  MeasureContext(const DiscretePOVM& nu, const DensityOperator& rho) {
    const ScalarMeasure m = induced_measure(nu, rho);
    const RNDerivative d = rn_derivative(nu, rho);
    init(nu.space(), nu.dim(), m.weights, d.values);
  }

  explicit MeasureContext(const DiscretePOVM& nu) : MeasureContext(nu, DensityOperator::maximally_mixed(nu.dim())) {}

  /// Context from an explicit base measure and derivative, e.g. a tensor
  /// POVM taken against a chosen scalar measure μ.
  static MeasureContext from_derivative(const SampleSpace& space, const std::vector<double>& weights,
                                        const std::vector<Matrix>& derivative) {
    if (weights.size() != space.size() || derivative.size() != space.size())
      throw DomainError("context: one weight and one derivative per atom required");
    if (derivative.empty()) throw DomainError("context: empty sample space");
    const Eigen::Index dim = derivative.front().rows();
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] >= 0.0)) throw DomainError("context: weights must be nonnegative");
      if (derivative[i].rows() != dim || derivative[i].cols() != dim) throw DomainError("context: derivative dimension mismatch");
      if (!psd_check(derivative[i])) throw DomainError("context: derivative must be PSD");
    }
    MeasureContext ctx;
    ctx.init(space, dim, weights, derivative);
    return ctx;
  }

  const SampleSpace& space() const { return space_; }
  Eigen::Index dim() const { return dim_; }
  std::size_t atoms() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  bool null_atom(std::size_t i) const { return null_[i]; }
  const Matrix& derivative(std::size_t i) const { return derivative_[i]; }
  const Matrix& sqrt_derivative(std::size_t i) const { return sqrt_derivative_[i]; }

  /// ν({x}) reconstructed as D(x)·weight(x).
  Matrix effect(std::size_t i) const { return derivative_[i] * weights_[i]; }

  /// ||dν/dν_ρ||_∞ over atoms of positive mass.
  double derivative_sup_norm() const {
    double m = 0.0;
    for (std::size_t i = 0; i < atoms(); ++i)
      if (!null_[i]) m = std::max(m, max_eigenvalue(derivative_[i]));
    return m;
  }

  /// True when D(x) is invertible on every atom of positive mass.
  bool derivative_invertible(double tol = 1e-10) const {
    for (std::size_t i = 0; i < atoms(); ++i)
      if (!null_[i] && min_eigenvalue(derivative_[i]) <= tol * (1.0 + max_eigenvalue(derivative_[i]))) return false;
    return true;
  }

  /// D(x)^{1/2} A D(x)^{1/2}.
  Matrix compress(std::size_t i, const Matrix& a) const { return sqrt_derivative_[i] * a * sqrt_derivative_[i]; }

 private:
  void init(const SampleSpace& space, Eigen::Index dim, const std::vector<double>& w, const std::vector<Matrix>& d) {
    space_ = space;
    dim_ = dim;
    weights_ = w;
    double total = 0.0;
    for (double x : w) total += x;
    const double thr = detail::null_threshold(total);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const bool is_null = w[i] <= thr;
      null_.push_back(is_null);
      derivative_.push_back(is_null ? Matrix::Zero(dim, dim) : hermitian_part(d[i]));
      sqrt_derivative_.push_back(is_null ? Matrix::Zero(dim, dim) : clamped_sqrt(d[i]));
    }
  }

  SampleSpace space_;
  Eigen::Index dim_ = 0;
  std::vector<double> weights_;
  std::vector<bool> null_;
  std::vector<Matrix> derivative_;
  std::vector<Matrix> sqrt_derivative_;
};

}  // namespace ovlp

#endif  // OVLP_POVM_MEASURE_HPP
