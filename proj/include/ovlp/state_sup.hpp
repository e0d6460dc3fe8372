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

#ifndef OVLP_STATE_SUP_HPP
#define OVLP_STATE_SUP_HPP

//
// Supremum over quantum states of the ℓ^p norm of x ↦ ⟨ψ, G_x ψ⟩ for a
// finite family of PSD matrices G_x (atom weights already folded in):
//
//     Φ(G) = sup_ψ ( Σ_x ⟨ψ, G_x ψ⟩^p )^{1/p}
//          = max_{φ ≥ 0, ||φ||_q ≤ 1} λ_max( Σ_x φ_x G_x ).
//
// The map s ↦ tr(s G_x) is affine, so the supremum over density operators is
// attained at pure states. Lower bounds come from alternating ascent in
// (ψ, φ); certified upper bounds from branch-and-bound over cones in the
// φ-orthant, using convexity and positive homogeneity of φ ↦ λ_max(Σ φ G).
//

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <vector>

#include "ovlp/operator_core.hpp"

namespace ovlp {

inline double lp_norm(const RealVector& h, double p) {
  if (h.size() == 0) return 0.0;
  if (std::isinf(p)) return h.cwiseAbs().maxCoeff();
  if (p == 1.0) return h.cwiseAbs().sum();
  const double m = h.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) acc += std::pow(std::abs(h(i)) / m, p);
  return m * std::pow(acc, 1.0 / p);
}

inline double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

/// Nonnegative φ with ||φ||_q ≤ 1 and ⟨φ, h⟩ = ||h||_p, for h ≥ 0.
inline RealVector holder_dual(const RealVector& h, double p) {
  const Eigen::Index n = h.size();
  if (p == 1.0) return RealVector::Ones(n);
  const double nrm = lp_norm(h, p);
  const double q = conjugate_exponent(p);
  if (nrm == 0.0) return RealVector::Constant(n, std::pow(double(n), -1.0 / q));
  RealVector phi(n);
  for (Eigen::Index i = 0; i < n; ++i) phi(i) = std::pow(std::max(h(i), 0.0) / nrm, p - 1.0);
  const double qn = lp_norm(phi, q);
  if (qn > 1.0) phi /= qn;
  return phi;
}

/// ⟨ψ, G_x ψ⟩ for every atom.
inline RealVector state_profile(const std::vector<Matrix>& g, const Vector& psi) {
  RealVector h(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) h(static_cast<Eigen::Index>(i)) = std::max(0.0, psi.dot(g[i] * psi).real());
  return h;
}

inline Matrix weighted_sum(const std::vector<Matrix>& g, const RealVector& phi) {
  Matrix k = Matrix::Zero(g.front().rows(), g.front().cols());
  for (std::size_t i = 0; i < g.size(); ++i) k += phi(static_cast<Eigen::Index>(i)) * g[i];
  return k;
}

inline Vector top_eigenvector(const Matrix& k) {
  const SpectralDecomposition sd = eigh(k);
  return sd.vectors.col(sd.vectors.cols() - 1);
}

inline Vector random_unit_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

/// One local maximiser of the state supremum.
struct StateCut {
  Vector psi;       // unit vector
  RealVector phi;   // Hölder dual weights at psi
  double value = 0.0;
};

/// Tensor-factor shape for product-state searches; {0, 0} means all states.
struct ProductShape {
  Eigen::Index d1 = 0;
  Eigen::Index d2 = 0;
  bool product() const { return d1 > 0 && d2 > 0; }
};

namespace detail {

/// (1 ⊗ v)* K (1 ⊗ v) on the first factor.
inline Matrix partial_first(const Matrix& k, const Vector& v, Eigen::Index d1, Eigen::Index d2) {
  Matrix out = Matrix::Zero(d1, d1);
  for (Eigen::Index a = 0; a < d1; ++a)
    for (Eigen::Index b = 0; b < d1; ++b) {
      Complex acc = 0.0;
      for (Eigen::Index c = 0; c < d2; ++c)
        for (Eigen::Index d = 0; d < d2; ++d) acc += std::conj(v(c)) * k(a * d2 + c, b * d2 + d) * v(d);
      out(a, b) = acc;
    }
  return out;
}

/// (u ⊗ 1)* K (u ⊗ 1) on the second factor.
inline Matrix partial_second(const Matrix& k, const Vector& u, Eigen::Index d1, Eigen::Index d2) {
  Matrix out = Matrix::Zero(d2, d2);
  for (Eigen::Index c = 0; c < d2; ++c)
    for (Eigen::Index d = 0; d < d2; ++d) {
      Complex acc = 0.0;
      for (Eigen::Index a = 0; a < d1; ++a)
        for (Eigen::Index b = 0; b < d1; ++b) acc += std::conj(u(a)) * k(a * d2 + c, b * d2 + d) * u(b);
      out(c, d) = acc;
    }
  return out;
}

inline Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Split a product vector into its factors (exact for product vectors).
inline std::pair<Vector, Vector> split_product(const Vector& psi, Eigen::Index d1, Eigen::Index d2) {
  Matrix m(d1, d2);
  for (Eigen::Index a = 0; a < d1; ++a)
    for (Eigen::Index c = 0; c < d2; ++c) m(a, c) = psi(a * d2 + c);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU().col(0), svd.matrixV().col(0).conjugate()};
}

}  // namespace detail

/// Alternating (ψ, φ) ascent from one start; monotone in the objective.
inline StateCut ascend_state(const std::vector<Matrix>& g, double p, Vector psi, ProductShape shape = {},
                             int max_steps = 300) {
  psi /= psi.norm();
  RealVector h = state_profile(g, psi);
  double value = lp_norm(h, p);
  Vector u, v;
  if (shape.product()) std::tie(u, v) = detail::split_product(psi, shape.d1, shape.d2);
  for (int step = 0; step < max_steps; ++step) {
    const RealVector phi = holder_dual(h, p);
    const Matrix k = weighted_sum(g, phi);
    Vector next;
    if (shape.product()) {
      u = top_eigenvector(detail::partial_first(k, v, shape.d1, shape.d2));
      v = top_eigenvector(detail::partial_second(k, u, shape.d1, shape.d2));
      next = detail::kron_vec(u, v);
    } else {
      next = top_eigenvector(k);
    }
    const RealVector hn = state_profile(g, next);
    const double vn = lp_norm(hn, p);
    if (vn <= value * (1.0 + 1e-14) + 1e-300) {
      if (vn >= value) {
        psi = next;
        h = hn;
        value = vn;
      }
      break;
    }
    psi = next;
    h = hn;
    value = vn;
  }
  return {psi, holder_dual(h, p), value};
}

/// Multi-start ascent. Returns distinct local maxima, best first.
inline std::vector<StateCut> sup_state_ascent(const std::vector<Matrix>& g, double p, int restarts, std::mt19937_64& rng,
                                              const std::vector<Vector>& warm = {}, ProductShape shape = {}) {
  std::vector<StateCut> found;
  if (g.empty()) return found;
  const Eigen::Index n = g.front().rows();
  std::vector<Vector> starts = warm;
  if (shape.product()) {
    for (Eigen::Index a = 0; a < shape.d1; ++a)
      for (Eigen::Index c = 0; c < shape.d2; ++c)
        starts.push_back(detail::kron_vec(Vector::Unit(shape.d1, a), Vector::Unit(shape.d2, c)));
    for (int r = 0; r < restarts; ++r)
      starts.push_back(detail::kron_vec(random_unit_vector(shape.d1, rng), random_unit_vector(shape.d2, rng)));
  } else {
    Matrix total = Matrix::Zero(n, n);
    for (const auto& m : g) {
      starts.push_back(top_eigenvector(m));
      total += m;
    }
    starts.push_back(top_eigenvector(total));
    for (Eigen::Index i = 0; i < n; ++i) starts.push_back(Vector::Unit(n, i));
    for (int r = 0; r < restarts; ++r) starts.push_back(random_unit_vector(n, rng));
  }
  for (const Vector& s : starts) {
    if (s.norm() == 0.0) continue;
    Vector start = s;
    if (shape.product()) {
      auto [a, b] = detail::split_product(s / s.norm(), shape.d1, shape.d2);
      start = detail::kron_vec(a, b);
    }
    StateCut c = ascend_state(g, p, start, shape);
    bool duplicate = false;
    for (auto& f : found) {
      if (std::abs(f.psi.dot(c.psi)) > 1.0 - 1e-9) {
        if (c.value > f.value) f = c;
        duplicate = true;
        break;
      }
    }
    if (!duplicate) found.push_back(std::move(c));
  }
  std::sort(found.begin(), found.end(), [](const StateCut& a, const StateCut& b) { return a.value > b.value; });
  return found;
}

/// Outcome of the certified upper-bound search.
struct SupUpper {
  double upper = 0.0;
  double lower = 0.0;  // best vertex value seen
  int patches = 0;
  bool converged = true;
};

/// Certified upper bound on Φ(G) by branch-and-bound over simplicial cones of
/// the nonnegative φ-orthant intersected with the unit q-sphere.
///
/// For a cone spanned by unit rays u_i, any unit φ in it is α·Σβ_i u_i with
/// β in the simplex and α = 1/||Σβu||_q ≤ 1/min_i⟨u_i, y⟩ for any y in the
/// unit p-ball; convexity and homogeneity then bound λ_max(Σφ G) by
/// α·max_i λ_max(Σ u_i G).
inline SupUpper sup_state_upper(const std::vector<Matrix>& g, double p, double lower_hint = 0.0, double rel_tol = 1e-9,
                                int max_patches = 20000) {
  SupUpper out;
  const std::size_t n = g.size();
  if (n == 0) return out;
  auto lam = [&](const RealVector& phi) { return max_eigenvalue(weighted_sum(g, phi)); };
  if (p == 1.0 || n == 1) {
    const double v = lam(RealVector::Ones(static_cast<Eigen::Index>(n)));
    // Eigenvalue error of the symmetric solver, well below 1e-12 relative here.
    out.upper = v * (1.0 + 1e-12) + 1e-300;
    out.lower = v;
    return out;
  }
  const double q = conjugate_exponent(p);
  const auto ni = static_cast<Eigen::Index>(n);

  struct Patch {
    std::vector<RealVector> rays;
    std::vector<double> values;
    double bound;
  };
  auto bound_of = [&](const std::vector<RealVector>& rays, const std::vector<double>& vals) {
    RealVector c = RealVector::Zero(ni);
    for (const auto& r : rays) c += r;
    RealVector y(ni);
    const double cn = lp_norm(c, q);
    for (Eigen::Index i = 0; i < ni; ++i) y(i) = std::pow(c(i) / cn, q - 1.0);
    const double yn = lp_norm(y, p);
    if (yn > 0.0) y /= yn;
    double mind = kInf;
    for (const auto& r : rays) mind = std::min(mind, r.dot(y));
    const double vmax = *std::max_element(vals.begin(), vals.end());
    if (!(mind > 0.0)) return kInf;
    return vmax / mind;
  };
  auto cmp = [](const Patch& a, const Patch& b) { return a.bound < b.bound; };
  std::priority_queue<Patch, std::vector<Patch>, decltype(cmp)> heap(cmp);

  Patch root;
  for (std::size_t i = 0; i < n; ++i) {
    RealVector e = RealVector::Unit(ni, static_cast<Eigen::Index>(i));
    root.values.push_back(lam(e));
    root.rays.push_back(std::move(e));
  }
  double best = std::max(lower_hint, *std::max_element(root.values.begin(), root.values.end()));
  root.bound = bound_of(root.rays, root.values);
  heap.push(std::move(root));

  int count = 0;
  while (!heap.empty()) {
    const Patch& top = heap.top();
    if (top.bound <= best * (1.0 + rel_tol) + 1e-300) break;
    if (count >= max_patches) {
      out.converged = false;
      break;
    }
    Patch cur = top;
    heap.pop();
    ++count;
    // Split the longest edge at its normalised midpoint.
    std::size_t bi = 0, bj = 1;
    double longest = -1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double len = (cur.rays[i] - cur.rays[j]).norm();
        if (len > longest) {
          longest = len;
          bi = i;
          bj = j;
        }
      }
    RealVector mid = cur.rays[bi] + cur.rays[bj];
    mid /= lp_norm(mid, q);
    const double vm = lam(mid);
    best = std::max(best, vm);
    for (std::size_t which : {bi, bj}) {
      Patch child = cur;
      child.rays[which] = mid;
      child.values[which] = vm;
      child.bound = bound_of(child.rays, child.values);
      heap.push(std::move(child));
    }
  }
  out.patches = count;
  out.lower = best;
  out.upper = heap.empty() ? best : std::max(best, heap.top().bound);
  out.upper = out.upper * (1.0 + 1e-12) + 1e-300;
  return out;
}

}  // namespace ovlp

#endif  // OVLP_STATE_SUP_HPP
