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

#ifndef OVLP_MINIMAX_HPP
#define OVLP_MINIMAX_HPP

//
// Min over positive decompositions, max over states.
//
// Two problem shapes share one engine. Data are per-atom matrices with the
// atom weight and D^{1/2}(.)D^{1/2} compression already applied, so the
// outer functional is the unweighted Φ of state_sup.hpp.
//
//   decomposition:  min Φ(Y + Z)   s.t.  Y_x ⪰ ±A_x,  Z_x ⪰ ±B_x
//   block:          min max(Φ(Y1), Φ(Y2))  s.t.  [[Y1_x, F_x], [F_x*, Y2_x]] ⪰ 0
//
// The supremum inside Φ is replaced by an accumulating finite set of pure
// states (cutting planes on the sup); each restricted master problem is
// solved by a log-barrier path-following Newton method. For p = 1 over all
// states Φ(G) = λ_max(Σ G_x) and the master is a single LMI, so no cuts are
// needed.
//
// Lower bounds are certified by weak duality. With convex weights π_j on
// states ψ_j and Hölder weights φ_j, M_x = Σ_j π_j φ_{jx} ψ_j ψ_j* gives
//
//   decomposition:  value ≥ Σ_x ||M_x^{1/2} A_x M_x^{1/2}||_1 + ||M_x^{1/2} B_x M_x^{1/2}||_1
//   block:          value ≥ Σ_x 2 ||M1_x^{1/2} F_x M2_x^{1/2}||_1
//
// which are the closed-form minima of Σ tr(M_x G_x) over the feasible sets.
// Upper bounds are the certified Φ of an interior primal point.
//

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ovlp/state_sup.hpp"

namespace ovlp::minimax {

/// Real coordinates of Hermitian d×d matrices: d diagonal entries, then
/// (Re, Im) of each strictly upper entry.
struct HermBasis {
  struct Entry {
    int row;
    int col;
    Complex coef;
  };
  Eigen::Index dim = 0;
  std::vector<std::vector<Entry>> elems;

  explicit HermBasis(Eigen::Index d = 0) : dim(d) {
    const int n = static_cast<int>(d);
    for (int i = 0; i < n; ++i) elems.push_back({{i, i, 1.0}});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        elems.push_back({{i, j, 1.0}, {j, i, 1.0}});
        elems.push_back({{i, j, Complex(0, 1)}, {j, i, Complex(0, -1)}});
      }
  }
  std::size_t size() const { return elems.size(); }

  Matrix to_matrix(const double* z) const {
    Matrix m = Matrix::Zero(dim, dim);
    for (std::size_t k = 0; k < elems.size(); ++k)
      for (const auto& e : elems[k]) m(e.row, e.col) += z[k] * e.coef;
    return m;
  }

  void from_matrix(const Matrix& m, double* z) const {
    const int n = static_cast<int>(dim);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) z[k++] = m(i, i).real();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        z[k++] = 0.5 * (m(i, j).real() + m(j, i).real());
        z[k++] = 0.5 * (m(i, j).imag() - m(j, i).imag());
      }
  }

  /// Re⟨ψ, E_k ψ⟩ for every basis element.
  RealVector expectation(const Vector& psi) const {
    RealVector a(static_cast<Eigen::Index>(elems.size()));
    for (std::size_t k = 0; k < elems.size(); ++k) {
      Complex acc = 0.0;
      for (const auto& e : elems[k]) acc += e.coef * std::conj(psi(e.row)) * psi(e.col);
      a(static_cast<Eigen::Index>(k)) = acc.real();
    }
    return a;
  }
};

enum class Shape { kDecomposition, kBlock };

struct Problem {
  Shape shape = Shape::kDecomposition;
  Eigen::Index dim = 0;
  double p = 1.0;
  ProductShape states;          // restrict the sup to product states when set
  std::vector<Matrix> re;       // decomposition: A_x
  std::vector<Matrix> im;       // decomposition: B_x (empty ⇒ no Z blocks)
  std::vector<Matrix> offdiag;  // block: F_x

  std::size_t atoms() const { return shape == Shape::kDecomposition ? re.size() : offdiag.size(); }
};

struct Options {
  int max_rounds = 60;
  int restarts = 8;
  double tol = 1e-6;  // relative gap target
  std::uint64_t seed = 0;
  bool force_cuts = false;  // use state cuts even where the LMI form applies
};

struct Result {
  double lower = 0.0;
  double upper = 0.0;
  double primal_estimate = 0.0;  // ascent value of the returned primal point
  std::vector<std::vector<Matrix>> primal;  // per objective: G_x
  int rounds = 0;
  int newton_steps = 0;
  bool converged = false;
  bool lmi = false;
};

namespace detail {

struct Part {
  int block;
  int offset;
  double sign;
};

/// −log det( C + t·t_coef·I + Σ_parts sign·embed(block) ).
struct LogdetTerm {
  Matrix constant;
  std::vector<Part> parts;
  double t_coef = 0.0;
  int objective = -1;  // LMI terms: which objective they bound
};

/// Dense Newton system and barrier evaluation over z = (blocks..., t).
class Barrier {
 public:
  Barrier(const Problem& prob, const HermBasis& basis) : prob_(prob), basis_(basis) {
    const auto na = static_cast<int>(prob.atoms());
    const int nb = static_cast<int>(basis.size());
    const Eigen::Index d = prob.dim;
    if (prob.shape == Shape::kDecomposition) {
      blocks_ = prob.im.empty() ? na : 2 * na;
      objectives_ = 1;
      contrib_.assign(1, std::vector<std::vector<int>>(na));
      for (int x = 0; x < na; ++x) {
        contrib_[0][x].push_back(x);
        logdets_.push_back({-prob.re[x], {{x, 0, 1.0}}, 0.0});
        logdets_.push_back({prob.re[x], {{x, 0, 1.0}}, 0.0});
        if (!prob.im.empty()) {
          contrib_[0][x].push_back(na + x);
          logdets_.push_back({-prob.im[x], {{na + x, 0, 1.0}}, 0.0});
          logdets_.push_back({prob.im[x], {{na + x, 0, 1.0}}, 0.0});
        }
      }
    } else {
      blocks_ = 2 * na;
      objectives_ = 2;
      contrib_.assign(2, std::vector<std::vector<int>>(na));
      for (int x = 0; x < na; ++x) {
        contrib_[0][x].push_back(x);
        contrib_[1][x].push_back(na + x);
        Matrix c = Matrix::Zero(2 * d, 2 * d);
        c.topRightCorner(d, d) = prob.offdiag[x];
        c.bottomLeftCorner(d, d) = prob.offdiag[x].adjoint();
        logdets_.push_back({c, {{x, 0, 1.0}, {na + x, static_cast<int>(d), 1.0}}, 0.0});
      }
    }
    nvars_ = blocks_ * nb + 1;
  }

  int nvars() const { return nvars_; }
  int blocks() const { return blocks_; }
  int objectives() const { return objectives_; }
  int t_index() const { return nvars_ - 1; }
  const std::vector<std::vector<std::vector<int>>>& contrib() const { return contrib_; }

  void add_lmi_terms() {
    const auto na = static_cast<int>(prob_.atoms());
    for (int k = 0; k < objectives_; ++k) {
      LogdetTerm term{Matrix::Zero(prob_.dim, prob_.dim), {}, 1.0, k};
      for (int x = 0; x < na; ++x)
        for (int b : contrib_[k][x]) term.parts.push_back({b, 0, -1.0});
      logdets_.push_back(std::move(term));
    }
    lmi_ = true;
  }

  /// Y_b ⪯ r·I for every block. Near-optimal points satisfy λ_max(Y_b) ≤ Φ
  /// of any feasible point, so a large enough r is inactive at the optimum.
  void add_box(double r) {
    for (int b = 0; b < blocks_; ++b) logdets_.push_back({r * identity(prob_.dim), {{b, 0, -1.0}}, 0.0});
  }

  /// States enter as −log(t − ||h_k(ψ)||_p) for every objective k.
  /// Call again whenever the state list changes.
  void set_states(const std::vector<Vector>* states) {
    states_ = states;
    expect_.clear();
    for (const auto& psi : *states) expect_.push_back(basis_.expectation(psi));
  }

  Matrix block_matrix(const RealVector& z, int b) const {
    return basis_.to_matrix(z.data() + static_cast<std::ptrdiff_t>(b) * static_cast<std::ptrdiff_t>(basis_.size()));
  }

  std::vector<Matrix> objective_matrices(const RealVector& z, int k) const {
    std::vector<Matrix> g;
    for (const auto& bl : contrib_[k]) {
      Matrix m = Matrix::Zero(prob_.dim, prob_.dim);
      for (int b : bl) m += block_matrix(z, b);
      g.push_back(hermitian_part(m));
    }
    return g;
  }

  Matrix logdet_matrix(const LogdetTerm& term, const RealVector& z) const {
    Matrix x = term.constant;
    if (term.t_coef != 0.0) x.diagonal().array() += term.t_coef * z(t_index());
    for (const auto& part : term.parts)
      x.block(part.offset, part.offset, prob_.dim, prob_.dim) += part.sign * block_matrix(z, part.block);
    return x;
  }

  RealVector profile(const RealVector& z, int k, const RealVector& a) const {
    const auto na = static_cast<Eigen::Index>(prob_.atoms());
    const auto nb = static_cast<Eigen::Index>(basis_.size());
    RealVector h = RealVector::Zero(na);
    for (Eigen::Index x = 0; x < na; ++x)
      for (int b : contrib_[k][x]) h(x) += a.dot(z.segment(b * nb, nb));
    return h;
  }

  /// Barrier value; +inf outside the domain.
  double value(const RealVector& z, double tau) const {
    double v = tau * z(t_index());
    for (const auto& term : logdets_) {
      Eigen::LLT<Matrix> llt(hermitian_part(logdet_matrix(term, z)));
      if (llt.info() != Eigen::Success) return kInf;
      const Eigen::VectorXcd diag = llt.matrixLLT().diagonal();
      for (Eigen::Index i = 0; i < diag.size(); ++i) {
        const double di = diag(i).real();
        if (!(di > 0.0)) return kInf;
        v -= 2.0 * std::log(di);
      }
    }
    for (const RealVector& a : expect_) {
      {
        for (int k = 0; k < objectives_; ++k) {
          const RealVector h = profile(z, k, a);
          if ((h.array() < 0.0).any()) return kInf;
          const double s = z(t_index()) - lp_norm(h, prob_.p);
          if (!(s > 0.0)) return kInf;
          v -= std::log(s);
        }
      }
    }
    return v;
  }

  /// Gradient and Hessian of τ·t + barrier at a strictly feasible z.
  void derivatives(const RealVector& z, double tau, RealVector& grad, Eigen::MatrixXd& hess) const {
    const int n = nvars_;
    const auto nb = static_cast<int>(basis_.size());
    grad = RealVector::Zero(n);
    hess = Eigen::MatrixXd::Zero(n, n);
    grad(t_index()) = tau;

    struct Elem {
      int var;
      std::vector<HermBasis::Entry> entries;
    };
    for (const auto& term : logdets_) {
      const Matrix x = hermitian_part(logdet_matrix(term, z));
      const Matrix w = x.llt().solve(identity(x.rows()));
      std::vector<Elem> elems;
      for (const auto& part : term.parts)
        for (int c = 0; c < nb; ++c) {
          Elem e{part.block * nb + c, basis_.elems[c]};
          for (auto& ent : e.entries) {
            ent.row += part.offset;
            ent.col += part.offset;
            ent.coef *= part.sign;
          }
          elems.push_back(std::move(e));
        }
      if (term.t_coef != 0.0) {
        Elem e{t_index(), {}};
        for (int i = 0; i < static_cast<int>(x.rows()); ++i) e.entries.push_back({i, i, term.t_coef});
        elems.push_back(std::move(e));
      }
      for (std::size_t i = 0; i < elems.size(); ++i) {
        Complex gsum = 0.0;
        for (const auto& en : elems[i].entries) gsum += en.coef * w(en.col, en.row);
        grad(elems[i].var) -= gsum.real();
        for (std::size_t j = i; j < elems.size(); ++j) {
          Complex hsum = 0.0;
          for (const auto& e : elems[i].entries)
            for (const auto& f : elems[j].entries) hsum += e.coef * f.coef * w(f.col, e.row) * w(e.col, f.row);
          hess(elems[i].var, elems[j].var) += hsum.real();
          if (j != i) hess(elems[j].var, elems[i].var) += hsum.real();
        }
      }
    }

    const auto na = static_cast<int>(prob_.atoms());
    const double p = prob_.p;
    const int ti = t_index();
    RealVector dn(na);
    Eigen::MatrixXd coef(na, na);
    Eigen::MatrixXd aa(nb, nb);
    for (const RealVector& a : expect_) {
      aa.noalias() = a * a.transpose();
      for (int k = 0; k < objectives_; ++k) {
        const RealVector h = profile(z, k, a);
        const double nrm = lp_norm(h, p);
        const double s = z(ti) - nrm;
        // dN/dh; the Hessian of -log(t - N) is v vᵀ/s² + ∇²N/s with v = ∇(t - N).
        if (p == 1.0) {
          dn.setOnes();
        } else {
          for (int x = 0; x < na; ++x) dn(x) = std::pow(h(x) / nrm, p - 1.0);
        }
        coef.noalias() = dn * dn.transpose() / (s * s);
        if (p != 1.0) {
          coef -= (p - 1.0) / (nrm * s) * (dn * dn.transpose());
          for (int x = 0; x < na; ++x) coef(x, x) += (p - 1.0) / (nrm * s) * std::pow(h(x) / nrm, p - 2.0);
        }
        grad(ti) -= 1.0 / s;
        hess(ti, ti) += 1.0 / (s * s);
        for (int x = 0; x < na; ++x) {
          for (int bx : contrib_[k][x]) {
            grad.segment(bx * nb, nb) += (dn(x) / s) * a;
            hess.block(bx * nb, ti, nb, 1) -= (dn(x) / (s * s)) * a;
            hess.block(ti, bx * nb, 1, nb) -= (dn(x) / (s * s)) * a.transpose();
            for (int y = 0; y < na; ++y)
              for (int by : contrib_[k][y]) hess.block(bx * nb, by * nb, nb, nb) += coef(x, y) * aa;
          }
        }
      }
    }
  }

  /// Dual weights at the current centre: one per (state, objective), plus
  /// one matrix per LMI objective.
  void dual(const RealVector& z, double tau, std::vector<std::vector<double>>& state_w,
            std::vector<Matrix>& lmi_w) const {
    state_w.assign(objectives_, {});
    lmi_w.assign(objectives_, Matrix::Zero(prob_.dim, prob_.dim));
    for (const RealVector& a : expect_) {
      for (int k = 0; k < objectives_; ++k) {
        const double s = z(t_index()) - lp_norm(profile(z, k, a), prob_.p);
        state_w[k].push_back(1.0 / (tau * s));
      }
    }
    for (const auto& term : logdets_) {
      if (term.objective < 0) continue;
      const Matrix x = hermitian_part(logdet_matrix(term, z));
      lmi_w[term.objective] = hermitian_part(x.llt().solve(identity(x.rows()))) / tau;
    }
  }

  int degree() const {
    int m = 0;
    for (const auto& term : logdets_) m += static_cast<int>(term.constant.rows());
    m += static_cast<int>(expect_.size()) * objectives_;
    return m;
  }

  bool lmi() const { return lmi_; }

 private:
  const Problem& prob_;
  const HermBasis& basis_;
  int blocks_ = 0;
  int objectives_ = 1;
  int nvars_ = 0;
  bool lmi_ = false;
  std::vector<std::vector<std::vector<int>>> contrib_;  // [objective][atom] -> blocks
  std::vector<LogdetTerm> logdets_;
  const std::vector<Vector>* states_ = nullptr;
  std::vector<RealVector> expect_;
};

/// Damped Newton centring at fixed τ. Returns the step count.
inline int centre(const Barrier& bar, RealVector& z, double tau, int max_steps = 100) {
  RealVector grad;
  Eigen::MatrixXd hess;
  double f = bar.value(z, tau);
  int steps = 0;
  for (; steps < max_steps; ++steps) {
    bar.derivatives(z, tau, grad, hess);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    RealVector dz = -ldlt.solve(grad);
    if (!dz.allFinite()) break;
    const double dec = -grad.dot(dz);
    if (!(dec > 1e-12)) break;
    double alpha = 1.0;
    double fn = kInf;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      fn = bar.value(z + alpha * dz, tau);
      // Inside the quadratic region a feasible full step is taken as is;
      // |f| can be large enough that Armijo drowns in rounding there.
      if (std::isfinite(fn) && (fn <= f - 0.25 * alpha * dec || (dec < 0.1 && alpha == 1.0))) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    z += alpha * dz;
    f = fn;
    if (dec < 1e-10) break;
  }
  return steps;
}

inline double trace_norm_sandwich(const Matrix& left_sqrt, const Matrix& a, const Matrix& right_sqrt) {
  return trace_norm(left_sqrt * a * right_sqrt);
}

}  // namespace detail

/// Certified lower bound from state weights (π_j ≥ 0, Σ π ≤ 1 across
/// objectives), Hölder weights and LMI weights.
inline double dual_bound(const Problem& prob, const std::vector<Vector>& states,
                         const std::vector<std::vector<double>>& state_w,
                         const std::vector<std::vector<RealVector>>& phis, const std::vector<Matrix>& lmi_w) {
  const std::size_t na = prob.atoms();
  const int nobj = prob.shape == Shape::kDecomposition ? 1 : 2;
  std::vector<std::vector<Matrix>> m(nobj, std::vector<Matrix>(na, Matrix::Zero(prob.dim, prob.dim)));
  for (int k = 0; k < nobj; ++k) {
    for (std::size_t x = 0; x < na; ++x) {
      if (!lmi_w.empty()) m[k][x] += lmi_w[k];
      for (std::size_t j = 0; j < states.size() && j < state_w[k].size(); ++j)
        m[k][x] += state_w[k][j] * phis[k][j](static_cast<Eigen::Index>(x)) * (states[j] * states[j].adjoint());
    }
  }
  double lb = 0.0;
  for (std::size_t x = 0; x < na; ++x) {
    if (prob.shape == Shape::kDecomposition) {
      const Matrix r = clamped_sqrt(m[0][x]);
      lb += hermitian_trace_norm(hermitian_part(r * prob.re[x] * r));
      if (!prob.im.empty()) lb += hermitian_trace_norm(hermitian_part(r * prob.im[x] * r));
    } else {
      lb += 2.0 * detail::trace_norm_sandwich(clamped_sqrt(m[0][x]), prob.offdiag[x], clamped_sqrt(m[1][x]));
    }
  }
  return lb;
}

inline Result solve(const Problem& prob, const Options& opt) {
  Result res;
  const std::size_t na = prob.atoms();
  const Eigen::Index d = prob.dim;
  const HermBasis basis(d);
  detail::Barrier bar(prob, basis);
  const int nobj = bar.objectives();
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);

  // Strictly feasible start: |A| + |B| (+δ), or (|F*|, |F|) (+δ).
  double data_scale = 0.0;
  for (std::size_t x = 0; x < na; ++x) {
    if (prob.shape == Shape::kDecomposition) {
      data_scale = std::max(data_scale, operator_norm(prob.re[x]) + (prob.im.empty() ? 0.0 : operator_norm(prob.im[x])));
    } else {
      data_scale = std::max(data_scale, operator_norm(prob.offdiag[x]));
    }
  }
  res.primal.assign(nobj, std::vector<Matrix>(na, Matrix::Zero(d, d)));
  if (na == 0 || data_scale == 0.0) {
    res.converged = true;
    return res;
  }
  const auto nb = static_cast<Eigen::Index>(basis.size());
  RealVector z = RealVector::Zero(bar.nvars());
  const double delta = 0.05 * data_scale;
  for (std::size_t x = 0; x < na; ++x) {
    const auto xi = static_cast<Eigen::Index>(x);
    const auto nai = static_cast<Eigen::Index>(na);
    if (prob.shape == Shape::kDecomposition) {
      basis.from_matrix(hermitian_abs(prob.re[x]) + delta * identity(d), z.data() + xi * nb);
      if (!prob.im.empty()) basis.from_matrix(hermitian_abs(prob.im[x]) + delta * identity(d), z.data() + (nai + xi) * nb);
    } else {
      const PolarParts pp = polar_parts(prob.offdiag[x]);
      basis.from_matrix(pp.abs_star + delta * identity(d), z.data() + xi * nb);
      basis.from_matrix(pp.abs + delta * identity(d), z.data() + (nai + xi) * nb);
    }
  }

  const bool use_lmi = prob.p == 1.0 && !prob.states.product() && !opt.force_cuts;
  std::vector<Vector> states;
  auto phi_value = [&](const RealVector& zz) {
    double v = 0.0;
    for (int k = 0; k < nobj; ++k) {
      const auto cuts = sup_state_ascent(bar.objective_matrices(zz, k), prob.p, 0, rng, states, prob.states);
      if (!cuts.empty()) v = std::max(v, cuts.front().value);
    }
    return v;
  };

  if (use_lmi) {
    bar.add_lmi_terms();
    res.lmi = true;
  } else {
    for (int k = 0; k < nobj; ++k) {
      const auto cuts = sup_state_ascent(bar.objective_matrices(z, k), prob.p, opt.restarts, rng, {}, prob.states);
      for (std::size_t i = 0; i < cuts.size() && i < 4; ++i) states.push_back(cuts[i].psi);
    }
    bar.set_states(&states);
  }

  // t strictly above every constraint at the start.
  double scale = 0.0;
  for (int k = 0; k < nobj; ++k) {
    const auto g = bar.objective_matrices(z, k);
    scale = std::max(scale, sup_state_upper(g, prob.p, 0.0, 1e-3).upper);
  }
  scale = std::max(scale, 1e-300);
  if (!use_lmi) bar.add_box(2.0 * scale + 2.0 * delta);
  z(bar.t_index()) = 1.5 * scale + delta;

  double best_lower = 0.0;
  double best_primal = kInf;
  const RealVector z_start = z;
  RealVector best_z = z;
  const double target = opt.tol * scale;
  double last_gap = kInf;
  int last_progress = 0;

  for (int round = 0; round < std::max(1, opt.max_rounds); ++round) {
    res.rounds = round + 1;
    const int m = bar.degree();
    double tau = m / scale;
    if (round > 0) {
      // Pull the previous centre back into the interior and rerun the path.
      z.head(z.size() - 1) = 0.9 * z.head(z.size() - 1) + 0.1 * z_start.head(z.size() - 1);
      double need = 0.0;
      for (int k = 0; k < nobj; ++k)
        for (const auto& psi : states) need = std::max(need, lp_norm(bar.profile(z, k, basis.expectation(psi)), prob.p));
      z(bar.t_index()) = need + m / tau;
    }
    for (;;) {
      res.newton_steps += detail::centre(bar, z, tau);
      if (m / tau <= 0.05 * target) break;
      tau *= 10.0;
    }

    std::vector<std::vector<double>> state_w;
    std::vector<Matrix> lmi_w;
    bar.dual(z, tau, state_w, lmi_w);
    double total = 0.0;
    for (const auto& w : state_w)
      for (double v : w) total += v;
    for (const auto& l : lmi_w) total += real_trace(l);
    if (total > 0.0) {
      for (auto& w : state_w)
        for (double& v : w) v /= total;
      for (auto& l : lmi_w) l /= total;
    }
    std::vector<std::vector<RealVector>> phis(nobj);
    for (int k = 0; k < nobj; ++k)
      for (const auto& psi : states) phis[k].push_back(holder_dual(bar.profile(z, k, basis.expectation(psi)), prob.p));
    best_lower = std::max(best_lower, dual_bound(prob, states, state_w, phis, use_lmi ? lmi_w : std::vector<Matrix>{}));

    if (use_lmi) {
      best_z = z;
      best_primal = phi_value(z);
      res.converged = true;
      break;
    }

    // New cuts from the current primal point.
    double master = 0.0;
    for (int k = 0; k < nobj; ++k)
      for (const auto& psi : states) master = std::max(master, lp_norm(bar.profile(z, k, basis.expectation(psi)), prob.p));
    double current = 0.0;
    std::vector<Vector> fresh;
    for (int k = 0; k < nobj; ++k) {
      const auto cuts = sup_state_ascent(bar.objective_matrices(z, k), prob.p, opt.restarts, rng, states, prob.states);
      for (const auto& c : cuts) {
        current = std::max(current, c.value);
        if (c.value <= master * (1.0 + 1e-10)) continue;
        bool dup = false;
        for (const auto& s : states) dup = dup || std::abs(s.dot(c.psi)) > 1.0 - 1e-12;
        for (const auto& s : fresh) dup = dup || std::abs(s.dot(c.psi)) > 1.0 - 1e-12;
        if (!dup) fresh.push_back(c.psi);
      }
    }
    if (current < best_primal) {
      best_primal = current;
      best_z = z;
    }
    if (best_primal - best_lower <= target || fresh.empty()) {
      res.converged = best_primal - best_lower <= 10.0 * target;
      break;
    }
    // Stop once neither side has moved for a while.
    if (best_primal - best_lower < last_gap - 0.01 * target) {
      last_gap = best_primal - best_lower;
      last_progress = round;
    } else if (round - last_progress >= 20) {
      res.converged = best_primal - best_lower <= 10.0 * target;
      break;
    }
    // Drop states that carry no dual weight once the set grows large.
    if (states.size() + fresh.size() > 48) {
      std::vector<std::pair<double, std::size_t>> weight;
      for (std::size_t j = 0; j < states.size(); ++j) {
        double w = 0.0;
        for (int k = 0; k < nobj; ++k) w += state_w[k][j];
        weight.emplace_back(w, j);
      }
      std::sort(weight.begin(), weight.end(), std::greater<>());
      std::vector<Vector> kept;
      for (std::size_t i = 0; i < weight.size() && i < 32; ++i) kept.push_back(states[weight[i].second]);
      states = std::move(kept);
    }
    for (auto& f : fresh) states.push_back(std::move(f));
    bar.set_states(&states);
  }

  for (int k = 0; k < nobj; ++k) res.primal[k] = bar.objective_matrices(best_z, k);
  double upper = 0.0;
  for (int k = 0; k < nobj; ++k) upper = std::max(upper, sup_state_upper(res.primal[k], prob.p, 0.0).upper);
  res.primal_estimate = best_primal;
  res.upper = upper;
  res.lower = std::min(best_lower, upper);
  return res;
}

}  // namespace ovlp::minimax

#endif  // OVLP_MINIMAX_HPP
