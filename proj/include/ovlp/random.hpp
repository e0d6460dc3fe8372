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

#ifndef OVLP_RANDOM_HPP
#define OVLP_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ovlp/qrv.hpp"

namespace ovlp {

using Rng = std::mt19937_64;

/// Independent stream for trial `trial` of a run seeded with `seed`.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32), 0x6f766c70u};
  return Rng(seq);
}

inline Matrix random_gaussian(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = Complex(g(rng), g(rng)) / std::sqrt(2.0);
  return m;
}

/// Haar unitary: QR of a Gaussian matrix with the phases of R divided out.
inline Matrix random_unitary(Eigen::Index d, Rng& rng) {
  const Eigen::HouseholderQR<Matrix> qr(random_gaussian(d, rng));
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

inline Matrix random_hermitian(Eigen::Index d, Rng& rng) { return hermitian_part(random_gaussian(d, rng)); }

/// A·A* for Gaussian A.
inline Matrix random_psd(Eigen::Index d, Rng& rng) {
  const Matrix a = random_gaussian(d, rng);
  return hermitian_part(a * a.adjoint());
}

inline DensityOperator random_state(Eigen::Index d, Rng& rng) {
  Matrix s = random_psd(d, rng) + 1e-3 * Matrix::Identity(d, d);
  return DensityOperator(Matrix(s / s.trace().real()));
}

/// Effects T^{-1/2} P_x T^{-1/2} for random PSD P_x and T = Σ P_x, so the
/// effects sum to the identity.
inline DiscretePOVM random_povm(const SampleSpace& space, Eigen::Index d, Rng& rng) {
  std::vector<Matrix> p;
  Matrix total = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < space.size(); ++i) {
    p.push_back(random_psd(d, rng));
    total += p.back();
  }
  const Matrix t = spectral_apply(eigh(hermitian_part(total)), [](double lam) { return 1.0 / std::sqrt(lam); });
  for (auto& e : p) e = hermitian_part(t * e * t);
  return DiscretePOVM(space, d, std::move(p));
}

/// ν = μ·I with random positive masses μ(x).
inline DiscretePOVM random_scalar_povm(const SampleSpace& space, Eigen::Index d, Rng& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.5);
  std::vector<double> mass;
  for (std::size_t i = 0; i < space.size(); ++i) mass.push_back(u(rng));
  return DiscretePOVM::scalar_times_identity(space, d, mass);
}

inline QRV random_qrv(const SampleSpace& space, Eigen::Index d, Rng& rng) {
  std::vector<Matrix> v;
  for (std::size_t i = 0; i < space.size(); ++i) v.push_back(random_gaussian(d, rng));
  return QRV(space, std::move(v));
}

inline QRV random_hermitian_qrv(const SampleSpace& space, Eigen::Index d, Rng& rng) {
  std::vector<Matrix> v;
  for (std::size_t i = 0; i < space.size(); ++i) v.push_back(random_hermitian(d, rng));
  return QRV(space, std::move(v));
}

inline QRV random_positive_qrv(const SampleSpace& space, Eigen::Index d, Rng& rng) {
  std::vector<Matrix> v;
  for (std::size_t i = 0; i < space.size(); ++i) v.push_back(random_psd(d, rng));
  return QRV(space, std::move(v));
}

/// Commuting positive pair: f(x) = U a U*, g(x) = U b U* with one Haar U per
/// atom and nonnegative diagonals a, b.
inline std::pair<QRV, QRV> random_commuting_positive_pair(const SampleSpace& space, Eigen::Index d, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<Matrix> fv, gv;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Matrix u = random_unitary(d, rng);
    RealVector a(d), b(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      a(k) = e(rng);
      b(k) = e(rng);
    }
    fv.push_back(hermitian_part(u * a.cast<Complex>().asDiagonal() * u.adjoint()));
    gv.push_back(hermitian_part(u * b.cast<Complex>().asDiagonal() * u.adjoint()));
  }
  return {QRV(space, std::move(fv)), QRV(space, std::move(gv))};
}

inline Complex random_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

enum class InstanceKind { kQrv, kPositiveQrv, kCommutingPositivePair, kPovm, kState };

inline InstanceKind parse_instance_kind(const std::string& s) {
  if (s == "qrv") return InstanceKind::kQrv;
  if (s == "positive_qrv") return InstanceKind::kPositiveQrv;
  if (s == "commuting_positive_pair") return InstanceKind::kCommutingPositivePair;
  if (s == "povm") return InstanceKind::kPovm;
  if (s == "state") return InstanceKind::kState;
  throw DomainError("unknown instance kind '" + s + "'");
}

/// Everything a generator can produce; unused members stay empty.
struct RandomInstance {
  InstanceKind kind = InstanceKind::kQrv;
  std::vector<QRV> qrvs;
  std::vector<DiscretePOVM> povms;
  std::vector<DensityOperator> states;
};

inline RandomInstance random_instance(InstanceKind kind, Eigen::Index dim, std::size_t atoms, std::uint64_t seed) {
  if (dim < 1 || atoms < 1) throw DomainError("random_instance: dims and atoms must be >= 1");
  Rng rng = trial_rng(seed, 0);
  const SampleSpace space = SampleSpace::numbered(atoms);
  RandomInstance out;
  out.kind = kind;
  switch (kind) {
    case InstanceKind::kQrv: out.qrvs.push_back(random_qrv(space, dim, rng)); break;
    case InstanceKind::kPositiveQrv: out.qrvs.push_back(random_positive_qrv(space, dim, rng)); break;
    case InstanceKind::kCommutingPositivePair: {
      auto [f, g] = random_commuting_positive_pair(space, dim, rng);
      out.qrvs.push_back(std::move(f));
      out.qrvs.push_back(std::move(g));
      break;
    }
    case InstanceKind::kPovm: out.povms.push_back(random_povm(space, dim, rng)); break;
    case InstanceKind::kState: out.states.push_back(random_state(dim, rng)); break;
  }
  return out;
}

}  // namespace ovlp

#endif  // OVLP_RANDOM_HPP
