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

#ifndef OVLP_ORACLE_HPP
#define OVLP_ORACLE_HPP

//
// Reference values at dimension ≤ 2 by routes that share nothing with the
// production solvers: Pauli coordinates instead of matrices, Bloch-sphere
// and Bloch-ball grids with local pattern refinement instead of eigenvector
// ascent, and a central-cut ellipsoid method on the primal instead of the
// barrier master. Dimension 1 uses closed forms.
//

#include <array>
#include <algorithm>
#include <cmath>
#include <vector>

#include "ovlp/qrv.hpp"

namespace ovlp {

enum class OracleProblem { kSupState, kPNorm, kDec, kSchattenMixed };

struct OracleQuery {
  OracleProblem problem = OracleProblem::kPNorm;
  double p = 1.0;  // L^p exponent; Schatten exponent for kSchattenMixed
  double q = 1.0;  // L^q exponent for kSchattenMixed
  int resolution = 24;
};

struct OracleResult {
  double value = 0.0;     // best value found (a feasible primal value for the minimisations)
  double lower = 0.0;     // ellipsoid lower certificate (equals value for the suprema)
  bool converged = true;
};

namespace oracle_detail {

using Pauli = std::array<double, 4>;  // A = a0·I + a1·σx + a2·σy + a3·σz
using Bloch = std::array<double, 3>;

inline Pauli to_pauli(const Matrix& a) {
  const Matrix h = hermitian_part(a);
  return {0.5 * (h(0, 0).real() + h(1, 1).real()), h(0, 1).real(), -h(0, 1).imag(),
          0.5 * (h(0, 0).real() - h(1, 1).real())};
}

inline double expect(const Pauli& a, const Bloch& r) { return a[0] + a[1] * r[0] + a[2] * r[1] + a[3] * r[2]; }

inline Bloch sphere_point(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline double lp(const std::vector<double>& h, double p) {
  double m = 0.0;
  for (double v : h) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  if (std::isinf(p)) return m;
  double acc = 0.0;
  for (double v : h) acc += std::pow(std::abs(v) / m, p);
  return m * std::pow(acc, 1.0 / p);
}

/// Maximise a smooth function of (θ, φ) over the sphere: grid, then
/// compass search from the best few separated grid points.
template <typename Fn>
double maximise_sphere(Fn&& fn, int res, Bloch* arg = nullptr, const Bloch* hint = nullptr) {
  const double pi = std::acos(-1.0);
  struct Cand {
    double v, th, ph;
  };
  std::vector<Cand> cands;
  for (int i = 0; i <= res; ++i) {
    const double th = pi * i / res;
    const int nphi = (i == 0 || i == res) ? 1 : 2 * res;
    for (int j = 0; j < nphi; ++j) {
      const double ph = 2.0 * pi * j / (2 * res);
      cands.push_back({fn(sphere_point(th, ph)), th, ph});
    }
  }
  // Starts: the best grid points at mutual angular distance ≥ 3 cells, plus the hint.
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.v > b.v; });
  std::vector<Cand> starts;
  const double sep = 2.0 * std::sin(std::min(1.5 * pi / res, 0.5 * pi));
  for (const Cand& c : cands) {
    if (starts.size() >= 6) break;
    const Bloch u = sphere_point(c.th, c.ph);
    bool far = true;
    for (const Cand& s : starts) {
      const Bloch w = sphere_point(s.th, s.ph);
      const double d2 = (u[0] - w[0]) * (u[0] - w[0]) + (u[1] - w[1]) * (u[1] - w[1]) + (u[2] - w[2]) * (u[2] - w[2]);
      if (d2 < sep * sep) {
        far = false;
        break;
      }
    }
    if (far) starts.push_back(c);
  }
  if (hint != nullptr) {
    const double th = std::acos(std::clamp((*hint)[2], -1.0, 1.0));
    const double ph = std::atan2((*hint)[1], (*hint)[0]);
    starts.push_back({fn(*hint), th, ph});
  }
  double best = -kInf;
  Bloch best_r{0, 0, 1};
  for (std::size_t c = 0; c < starts.size(); ++c) {
    double th = starts[c].th, ph = starts[c].ph, v = starts[c].v;
    double step = pi / res;
    while (step > 1e-9) {
      bool moved = false;
      for (auto [dt, dp] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}, {1.0, 1.0}, {-1.0, -1.0},
                            {1.0, -1.0}, {-1.0, 1.0}}) {
        const double t2 = th + dt * step, p2 = ph + dp * step;
        const double v2 = fn(sphere_point(t2, p2));
        if (v2 > v) {
          th = t2;
          ph = p2;
          v = v2;
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    if (v > best) {
      best = v;
      best_r = sphere_point(th, ph);
    }
  }
  if (arg != nullptr) *arg = best_r;
  return best;
}

/// sup over pure states of ||(⟨ψ, G_x ψ⟩)_x||_p.
inline double sphere_sup(const std::vector<Pauli>& g, double p, int res, Bloch* arg = nullptr, const Bloch* hint = nullptr) {
  std::vector<double> h(g.size());
  // Below zero the search climbs the largest expectation instead of a flat 0.
  const double v = maximise_sphere(
      [&](const Bloch& r) {
        double top = -kInf;
        for (std::size_t x = 0; x < g.size(); ++x) {
          const double e = expect(g[x], r);
          top = std::max(top, e);
          h[x] = std::max(0.0, e);
        }
        return top > 0.0 ? lp(h, p) : top;
      },
      res, arg, hint);
  return std::max(0.0, v);
}

/// Singular values of a 2×2 complex matrix from its Frobenius norm and determinant.
inline std::array<double, 2> singular_values_2x2(const Matrix& x) {
  const double t = x.squaredNorm();
  const double det = std::abs(x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0));
  const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
  return {std::sqrt(std::max(0.0, 0.5 * (t + disc))), std::sqrt(std::max(0.0, 0.5 * (t - disc)))};
}

/// s^{1/2} for the Bloch vector r with |r| ≤ 1.
inline Matrix state_sqrt(const Bloch& r) {
  const double len = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  const double lp_ = std::sqrt(std::max(0.0, 0.5 * (1.0 + len)));
  const double lm = std::sqrt(std::max(0.0, 0.5 * (1.0 - len)));
  const double alpha = 0.5 * (lp_ + lm);
  const double beta = len > 0.0 ? 0.5 * (lp_ - lm) / len : 0.0;
  Matrix s(2, 2);
  s(0, 0) = alpha + beta * r[2];
  s(1, 1) = alpha - beta * r[2];
  s(0, 1) = beta * Complex(r[0], -r[1]);
  s(1, 0) = beta * Complex(r[0], r[1]);
  return s;
}

/// Central-cut ellipsoid method. `oracle(x, g)` returns the objective at x
/// (kInf when x is infeasible) and writes a cut direction: a subgradient at
/// feasible points, the normal of a violated valid inequality otherwise.
template <typename Fn>
OracleResult ellipsoid(Fn&& oracle, RealVector centre, double radius, double upper0, double rel_tol, int max_iter) {
  const Eigen::Index n = centre.size();
  Eigen::MatrixXd pm = Eigen::MatrixXd::Identity(n, n) * radius * radius;
  RealVector g(n);
  OracleResult out;
  out.value = upper0;
  out.lower = 0.0;
  out.converged = false;
  const double nn = double(n);
  for (int it = 0; it < max_iter; ++it) {
    const double f = oracle(centre, g);
    const RealVector pg = pm * g;
    const double gpg = g.dot(pg);
    if (!(gpg > 0.0)) {
      if (std::isfinite(f)) {
        out.value = std::min(out.value, f);
        out.lower = out.value;
        out.converged = true;
      }
      break;
    }
    const double width = std::sqrt(gpg);
    if (std::isfinite(f)) {
      out.value = std::min(out.value, f);
      out.lower = std::max(out.lower, f - width);
      if (out.value - out.lower <= rel_tol * (1.0 + out.value)) {
        out.converged = true;
        break;
      }
    }
    if (n == 1) {
      // Bisection on the line.
      const double r = std::sqrt(pm(0, 0));
      const double lo = g(0) > 0.0 ? centre(0) - r : centre(0);
      const double hi = g(0) > 0.0 ? centre(0) : centre(0) + r;
      centre(0) = 0.5 * (lo + hi);
      pm(0, 0) = 0.25 * (hi - lo) * (hi - lo);
      continue;
    }
    const RealVector b = pg / width;
    centre -= b / (nn + 1.0);
    pm = (nn * nn / (nn * nn - 1.0)) * (pm - (2.0 / (nn + 1.0)) * (b * b.transpose()));
    pm = 0.5 * (pm + pm.transpose());
  }
  return out;
}

}  // namespace oracle_detail

/// Reference value for dim ≤ 2 and at most 3 atoms.
inline OracleResult brute_force_oracle_detailed(const OracleQuery& query, const QRV& f, const MeasureContext& ctx) {
  using namespace oracle_detail;
  if (f.dim() > 2 || f.atoms() > 3) throw DomainError("brute_force_oracle: unsupported size (dim <= 2, atoms <= 3)");
  if (!(query.p >= 1.0) || !(query.q >= 1.0)) throw DomainError("brute_force_oracle: exponents must be >= 1");
  if (query.resolution < 2 || query.resolution > 512) throw DomainError("brute_force_oracle: resolution out of range");
  ovlp::detail::require_compatible(f, ctx);
  const double p = query.problem == OracleProblem::kSchattenMixed ? query.q : query.p;
  const int res = query.resolution;

  // Weighted, compressed data on non-null atoms.
  std::vector<Matrix> data;
  for (std::size_t i = 0; i < f.atoms(); ++i) {
    if (ctx.null_atom(i)) continue;
    data.push_back(std::pow(ctx.weight(i), 1.0 / p) * ctx.sqrt_derivative(i) * f[i] * ctx.sqrt_derivative(i));
  }
  OracleResult out;
  if (data.empty()) return out;
  const std::size_t na = data.size();

  if (f.dim() == 1) {
    std::vector<double> h;
    for (const auto& d : data) {
      const Complex c = d(0, 0);
      switch (query.problem) {
        case OracleProblem::kSupState: h.push_back(std::max(0.0, c.real())); break;
        case OracleProblem::kPNorm: h.push_back(std::abs(c.real()) + std::abs(c.imag())); break;
        case OracleProblem::kDec:
        case OracleProblem::kSchattenMixed: h.push_back(std::abs(c)); break;
      }
    }
    out.value = out.lower = lp(h, p);
    return out;
  }

  if (query.problem == OracleProblem::kSupState) {
    std::vector<Pauli> g;
    for (const auto& d : data) g.push_back(to_pauli(d));
    out.value = out.lower = sphere_sup(g, p, res);
    return out;
  }

  if (query.problem == OracleProblem::kSchattenMixed) {
    const double ps = query.p;
    auto value_at = [&](const Bloch& r) {
      const Matrix s = state_sqrt(r);
      std::vector<double> h;
      for (const auto& d : data) {
        const auto sv = singular_values_2x2(s * d * s);
        h.push_back(std::isinf(ps) ? sv[0] : std::pow(std::pow(sv[0], ps) + std::pow(sv[1], ps), 1.0 / ps));
      }
      return lp(h, query.q);
    };
    // Ball = shells of radius ρ; refine the best shell point in (ρ, θ, φ).
    double best = -kInf;
    Bloch best_r{0, 0, 0};
    double best_rho = 0.0;
    for (int k = 0; k <= res; ++k) {
      const double rho = double(k) / res;
      Bloch arg;
      const double v = maximise_sphere(
          [&](const Bloch& u) { return value_at({rho * u[0], rho * u[1], rho * u[2]}); }, std::max(4, res / 2), &arg);
      if (v > best) {
        best = v;
        best_r = arg;
        best_rho = rho;
      }
    }
    double step = 1.0 / res;
    while (step > 1e-10) {
      bool moved = false;
      for (double dr : {step, -step}) {
        const double rho = std::clamp(best_rho + dr, 0.0, 1.0);
        Bloch arg;
        const double v = maximise_sphere(
            [&](const Bloch& u) { return value_at({rho * u[0], rho * u[1], rho * u[2]}); }, 4, &arg, &best_r);
        if (v > best) {
          best = v;
          best_rho = rho;
          best_r = arg;
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    out.value = out.lower = best;
    return out;
  }

  // Minimisations in Pauli coordinates, four per block.
  const bool dec = query.problem == OracleProblem::kDec;
  std::vector<Pauli> re_p, im_p;
  for (const auto& d : data) {
    const HermitianParts hp = hermitian_parts(d);
    re_p.push_back(to_pauli(hp.re));
    im_p.push_back(to_pauli(hp.im));
  }
  const std::size_t blocks = 2 * na;
  auto block = [&](const RealVector& x, std::size_t b) -> Pauli {
    return {x(4 * b), x(4 * b + 1), x(4 * b + 2), x(4 * b + 3)};
  };
  auto objective_blocks = [&](const RealVector& x, int k) {
    std::vector<Pauli> g(na);
    for (std::size_t i = 0; i < na; ++i) {
      if (dec) {
        g[i] = block(x, k * na + i);
      } else {
        const Pauli y = block(x, i), z = block(x, na + i);
        g[i] = {y[0] + z[0], y[1] + z[1], y[2] + z[2], y[3] + z[3]};
      }
    }
    return g;
  };

  // Canonical feasible point: |Re| + |Im| or (|F*|, |F|), each block ⪯ Φ0·I.
  RealVector x0 = RealVector::Zero(4 * blocks);
  for (std::size_t i = 0; i < na; ++i) {
    Pauli a, b;
    if (dec) {
      const PolarParts pp = polar_parts(data[i]);
      a = to_pauli(pp.abs_star);
      b = to_pauli(pp.abs);
    } else {
      a = to_pauli(hermitian_abs(hermitian_parts(data[i]).re));
      b = to_pauli(hermitian_abs(hermitian_parts(data[i]).im));
    }
    for (int c = 0; c < 4; ++c) {
      x0(4 * i + c) = a[c];
      x0(4 * (na + i) + c) = b[c];
    }
  }
  double phi0 = 0.0;
  for (int k = 0; k < (dec ? 2 : 1); ++k) phi0 = std::max(phi0, sphere_sup(objective_blocks(x0, k), p, res));
  if (phi0 == 0.0) return out;

  std::vector<Bloch> hints(2, Bloch{0, 0, 1});
  auto oracle = [&](const RealVector& x, RealVector& g) -> double {
    g.setZero();
    // Feasibility cuts first.
    for (std::size_t i = 0; i < na; ++i) {
      if (dec) {
        Matrix m(4, 4);
        auto mat = [](const Pauli& a) {
          Matrix r(2, 2);
          r(0, 0) = a[0] + a[3];
          r(1, 1) = a[0] - a[3];
          r(0, 1) = Complex(a[1], -a[2]);
          r(1, 0) = Complex(a[1], a[2]);
          return r;
        };
        m.topLeftCorner(2, 2) = mat(block(x, i));
        m.bottomRightCorner(2, 2) = mat(block(x, na + i));
        m.topRightCorner(2, 2) = data[i];
        m.bottomLeftCorner(2, 2) = data[i].adjoint();
        Eigen::SelfAdjointEigenSolver<Matrix> es(m);
        if (es.eigenvalues()(0) < 0.0) {
          const Vector v = es.eigenvectors().col(0);
          // Valid inequality v*Mv ≥ 0, linear in the block coordinates.
          for (int side = 0; side < 2; ++side) {
            const Complex v0 = v(2 * side), v1 = v(2 * side + 1);
            const std::size_t b = side == 0 ? i : na + i;
            const double coef[4] = {std::norm(v0) + std::norm(v1), 2.0 * (std::conj(v0) * v1).real(),
                                    2.0 * (std::conj(v0) * v1).imag(), std::norm(v0) - std::norm(v1)};
            for (int c = 0; c < 4; ++c) g(4 * b + c) = -coef[c];
          }
          return kInf;
        }
      } else {
        for (int part = 0; part < 2; ++part) {
          const Pauli y = block(x, part == 0 ? i : na + i);
          const Pauli a = part == 0 ? re_p[i] : im_p[i];
          for (double sign : {1.0, -1.0}) {
            // y - sign·a ⪰ 0 iff d0 ≥ |d⃗|.
            const double d0 = y[0] - sign * a[0];
            const Bloch dv{y[1] - sign * a[1], y[2] - sign * a[2], y[3] - sign * a[3]};
            const double len = std::sqrt(dv[0] * dv[0] + dv[1] * dv[1] + dv[2] * dv[2]);
            if (d0 < len) {
              const std::size_t b = part == 0 ? i : na + i;
              g(4 * b) = -1.0;
              for (int c = 0; c < 3; ++c) g(4 * b + 1 + c) = len > 0.0 ? dv[c] / len : 0.0;
              return kInf;
            }
          }
        }
      }
    }
    // Objective: the larger of the (one or two) state suprema.
    double best = -1.0;
    int bk = 0;
    Bloch br{0, 0, 1};
    for (int k = 0; k < (dec ? 2 : 1); ++k) {
      Bloch r;
      const double v = sphere_sup(objective_blocks(x, k), p, std::max(6, res / 2), &r, &hints[k]);
      hints[k] = r;
      if (v > best) {
        best = v;
        bk = k;
        br = r;
      }
    }
    // Subgradient: Hölder weights at the maximising state.
    const auto gk = objective_blocks(x, bk);
    std::vector<double> h(na);
    for (std::size_t i = 0; i < na; ++i) h[i] = std::max(0.0, expect(gk[i], br));
    for (std::size_t i = 0; i < na; ++i) {
      double w = 1.0;
      if (p != 1.0) w = best > 0.0 ? std::pow(h[i] / best, p - 1.0) : 0.0;
      const double coef[4] = {w, w * br[0], w * br[1], w * br[2]};
      for (std::size_t b : dec ? std::vector<std::size_t>{bk * na + i} : std::vector<std::size_t>{i, na + i})
        for (int c = 0; c < 4; ++c) g(4 * b + c) = coef[c];
    }
    return best;
  };

  // Every near-optimal block has spectrum in [0, Φ0]: a ball of radius
  // Φ0/2 per block around (Φ0/2)·I.
  RealVector centre = RealVector::Zero(4 * blocks);
  for (std::size_t b = 0; b < blocks; ++b) centre(4 * b) = 0.5 * phi0;
  const double radius = 0.5 * phi0 * std::sqrt(double(blocks)) * 1.02;
  const int n = static_cast<int>(4 * blocks);
  out = ellipsoid(oracle, centre, radius, phi0, 1e-5, 400 * n * n);
  return out;
}

inline double brute_force_oracle(const OracleQuery& query, const QRV& f, const MeasureContext& ctx) {
  return brute_force_oracle_detailed(query, f, ctx).value;
}

}  // namespace ovlp

#endif  // OVLP_ORACLE_HPP
