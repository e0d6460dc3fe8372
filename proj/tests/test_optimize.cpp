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

#include <gtest/gtest.h>

#include <numbers>

#include "test_util.hpp"

namespace ovlp {
namespace {

using testing::diag;
using testing::scalar;
using testing::unit_context;

const SampleSpace kOne({"a"});

double lp_of(const std::vector<double>& h, const std::vector<double>& w, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) s += w[i] * std::pow(h[i], p);
  return std::pow(s, 1.0 / p);
}

TEST(SupStateLp, Examples) {
  for (double p : {1.0, 2.0, 3.5}) {
    const NormEstimate e = sup_state_lp(QRV(kOne, {1.7 * identity(3)}), p, unit_context(3, 0.4));
    EXPECT_NEAR(e.lower, 1.7 * std::pow(0.4, 1.0 / p), 1e-9);
    EXPECT_NEAR(e.upper, 1.7 * std::pow(0.4, 1.0 / p), 1e-9);
  }
  const NormEstimate d = sup_state_lp(QRV(kOne, {diag({2, 0})}), 1.0, unit_context(2));
  EXPECT_NEAR(d.lower, 2.0, 1e-9);
  EXPECT_NEAR(d.upper, 2.0, 1e-9);
  const NormEstimate z = sup_state_lp(QRV(kOne, {Matrix::Zero(2, 2)}), 2.0, unit_context(2));
  EXPECT_EQ(z.upper, 0.0);
}

TEST(SupStateLp, RejectsNonPositiveIntegrand) {
  EXPECT_THROW(sup_state_lp(QRV(kOne, {diag({1, -1})}), 2.0, unit_context(2)), DomainError);
  EXPECT_THROW(sup_state_lp(QRV(kOne, {identity(2)}), 0.5, unit_context(2)), DomainError);
}

TEST(SupStateLp, DominatesMixedStatesAndBracketIsOrdered) {
  Rng rng = trial_rng(31, 0);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index d = 2 + t % 2;
    const SampleSpace space = SampleSpace::numbered(1 + t % 3);
    const double p = 1.0 + (t % 4) * 0.5;
    const MeasureContext ctx(random_povm(space, d, rng), random_state(d, rng));
    const QRV h = random_positive_qrv(space, d, rng);
    const NormEstimate e = sup_state_lp(h, p, ctx);
    EXPECT_LE(e.lower, e.upper);
    double best_mixed = 0.0;
    for (int k = 0; k < 50; ++k) {
      const auto hs = pairing(h, random_state(d, rng).matrix(), ctx);
      std::vector<double> v;
      for (const auto& z : hs) v.push_back(std::max(0.0, z.real()));
      best_mixed = std::max(best_mixed, lp_of(v, ctx.weights(), p));
    }
    EXPECT_LE(best_mixed, e.upper * (1.0 + 1e-9));
    EXPECT_LE(best_mixed, e.lower * (1.0 + 1e-6) + 1e-9);
  }
}

TEST(InfDecomposition, PositiveFunctionHitsTheCanonicalPoint) {
  Rng rng = trial_rng(32, 0);
  for (int t = 0; t < 10; ++t) {
    const SampleSpace space = SampleSpace::numbered(2);
    const MeasureContext ctx(random_povm(space, 2, rng));
    const QRV f = random_positive_qrv(space, 2, rng);
    const NormEstimate inf = inf_decomposition_pnorm(f, 2.0, ctx);
    const NormEstimate sup = sup_state_lp(f, 2.0, ctx);
    EXPECT_LE(inf.lower, sup.upper + 1e-6);
    EXPECT_GE(inf.upper, sup.lower - 1e-6);
  }
}

TEST(InfDecomposition, ScalarClosedForm) {
  const SampleSpace space = SampleSpace::numbered(3);
  const std::vector<Complex> z = {{1.0, -2.0}, {-0.5, 0.25}, {0.0, 3.0}};
  const std::vector<double> w = {0.5, 1.0, 2.0};
  const MeasureContext ctx(DiscretePOVM::scalar_times_identity(space, 1, w));
  std::vector<double> re_im, modulus;
  std::vector<Matrix> vals;
  for (const auto& c : z) {
    vals.push_back(scalar(c));
    re_im.push_back(std::abs(c.real()) + std::abs(c.imag()));
    modulus.push_back(std::abs(c));
  }
  const QRV f(space, vals);
  for (double p : {1.0, 2.0, 3.0}) {
    const NormEstimate a = inf_decomposition_pnorm(f, p, ctx);
    EXPECT_NEAR(a.lower, lp_of(re_im, w, p), 1e-6);
    EXPECT_NEAR(a.upper, lp_of(re_im, w, p), 1e-6);
    const NormEstimate b = inf_block_dec(f, p, ctx);
    EXPECT_NEAR(b.lower, lp_of(modulus, w, p), 1e-6);
    EXPECT_NEAR(b.upper, lp_of(modulus, w, p), 1e-6);
  }
}

TEST(InfDecomposition, IndefiniteDiagonalHasValueOne) {
  for (double p : {1.0, 2.0, 3.0}) {
    const NormEstimate e = inf_decomposition_pnorm(QRV(kOne, {diag({1, -1})}), p, unit_context(2));
    EXPECT_NEAR(e.lower, 1.0, 1e-5);
    EXPECT_NEAR(e.upper, 1.0, 1e-5);
  }
}

TEST(InfBlockDec, SelfAdjointMatchesPnormAndZeroIsZero) {
  Rng rng = trial_rng(33, 0);
  for (int t = 0; t < 10; ++t) {
    const SampleSpace space = SampleSpace::numbered(2);
    const MeasureContext ctx(random_povm(space, 2, rng));
    const QRV f = random_hermitian_qrv(space, 2, rng);
    const NormEstimate a = inf_decomposition_pnorm(f, 2.0, ctx);
    const NormEstimate b = inf_block_dec(f, 2.0, ctx);
    EXPECT_LE(std::max(a.lower, b.lower) - std::min(a.upper, b.upper), 1e-2);
  }
  EXPECT_EQ(inf_block_dec(QRV(kOne, {Matrix::Zero(2, 2)}), 2.0, unit_context(2)).upper, 0.0);
}

TEST(InfDecomposition, UpperBoundIsMonotoneInTheRoundBudget) {
  Rng rng = trial_rng(34, 0);
  const SampleSpace space = SampleSpace::numbered(3);
  const MeasureContext ctx(random_povm(space, 3, rng));
  const QRV f = random_qrv(space, 3, rng);
  double prev_upper = kInf, prev_lower = 0.0;
  for (int budget : {1, 2, 4, 8, 16, 32}) {
    SolverConfig cfg;
    cfg.max_iters = budget;
    const NormEstimate e = inf_decomposition_pnorm(f, 3.0, ctx, cfg);
    EXPECT_LE(e.upper, prev_upper + 1e-12);
    EXPECT_LE(e.lower, e.upper);
    EXPECT_LE(prev_lower, e.upper + 1e-9);
    prev_upper = e.upper;
    prev_lower = std::max(prev_lower, e.lower);
  }
}

TEST(Oracle, SupStateExampleConvergesUnderRefinement) {
  const QRV h(kOne, {diag({2, 0})});
  const MeasureContext ctx = unit_context(2);
  double prev_err = kInf;
  for (int res : {6, 12, 24}) {
    const double v = brute_force_oracle({OracleProblem::kSupState, 1.0, 1.0, res}, h, ctx);
    const double err = std::abs(v - 2.0);
    EXPECT_LE(err, 2.0 * std::numbers::pi / res);
    EXPECT_LE(err, prev_err + 1e-12);
    prev_err = err;
  }
}

TEST(Oracle, ShortcutsAndSelfAdjointEquality) {
  Rng rng = trial_rng(35, 0);
  for (int t = 0; t < 5; ++t) {
    const SampleSpace space = SampleSpace::numbered(2);
    const MeasureContext ctx(random_povm(space, 2, rng));
    const QRV pos = random_positive_qrv(space, 2, rng);
    const double sup = brute_force_oracle({OracleProblem::kSupState, 2.0, 1.0, 24}, pos, ctx);
    EXPECT_NEAR(brute_force_oracle({OracleProblem::kPNorm, 2.0, 1.0, 24}, pos, ctx), sup, 2.0 * 5e-3 * (1.0 + sup));
    const QRV h = random_hermitian_qrv(space, 2, rng);
    const double pn = brute_force_oracle({OracleProblem::kPNorm, 2.0, 1.0, 24}, h, ctx);
    EXPECT_NEAR(brute_force_oracle({OracleProblem::kDec, 2.0, 1.0, 24}, h, ctx), pn, 2.0 * 5e-3 * (1.0 + pn));
  }
  EXPECT_THROW(brute_force_oracle({}, QRV(kOne, {identity(3)}), unit_context(3)), DomainError);
}

TEST(Oracle, SolverBracketsContainTheGridValue) {
  Rng rng = trial_rng(36, 0);
  for (int t = 0; t < 12; ++t) {
    const SampleSpace space = SampleSpace::numbered(1 + t % 3);
    const double p = 1.0 + t % 3;
    const MeasureContext ctx(random_povm(space, 2, rng), random_state(2, rng));
    const QRV f = random_qrv(space, 2, rng);
    const NormEstimate a = p_norm(f, p, ctx);
    EXPECT_TRUE(a.contains(brute_force_oracle({OracleProblem::kPNorm, p, 1.0, 24}, f, ctx), 5e-3)) << t;
    const NormEstimate b = dec_p_norm(f, p, ctx);
    EXPECT_TRUE(b.contains(brute_force_oracle({OracleProblem::kDec, p, 1.0, 24}, f, ctx), 5e-3)) << t;
  }
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.step_rule = "newton";
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), DomainError);
}

}  // namespace
}  // namespace ovlp
