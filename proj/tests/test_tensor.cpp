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

#include "test_util.hpp"

namespace ovlp {
namespace {

using testing::diag;
using testing::max_abs;

const SampleSpace kOne({"a"});

TEST(TensorPovm, ScalarFactorsGiveScalarProduct) {
  const SampleSpace space = SampleSpace::numbered(3);
  const std::vector<double> mu = {0.2, 0.5, 1.3};
  const DiscretePOVM nu = DiscretePOVM::scalar_times_identity(space, 2, mu);
  const DiscretePOVM t = tensor_povm(nu, nu, {space, mu});
  ASSERT_EQ(t.dim(), 4);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(max_abs(t.effect(i) - mu[i] * identity(4)), 1e-14);
}

TEST(TensorPovm, KroneckerOfEffects) {
  const DiscretePOVM a(kOne, 2, {diag({1, 0})});
  const DiscretePOVM b(kOne, 2, {diag({0, 1})});
  const DiscretePOVM t = tensor_povm(a, b, {kOne, {1.0}});
  EXPECT_LT(max_abs(t.effect(0) - diag({0, 1, 0, 0})), 1e-15);
}

TEST(TensorPovm, RescalingTheBaseMeasureScalesTheProduct) {
  Rng rng = trial_rng(61, 0);
  const SampleSpace space = SampleSpace::numbered(2);
  const DiscretePOVM n1 = random_povm(space, 2, rng);
  const DiscretePOVM n2 = random_povm(space, 2, rng);
  const std::vector<double> mu = {0.7, 1.1};
  const double c = 2.5;
  const DiscretePOVM a = tensor_povm(n1, n2, {space, mu});
  const DiscretePOVM b = tensor_povm(n1, n2, {space, {mu[0] / c, mu[1] / c}});
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LT(max_abs(b.effect(i) - c * a.effect(i)), 1e-12);
}

TEST(TensorPovm, BaseMeasureMustDominateTheFactors) {
  const SampleSpace space = SampleSpace::numbered(2);
  const DiscretePOVM nu = DiscretePOVM::scalar_times_identity(space, 2, {0.5, 0.5});
  EXPECT_THROW(tensor_povm(nu, nu, {space, {1.0, 0.0}}), DomainError);
  EXPECT_THROW(tensor_povm(nu, nu, {SampleSpace::numbered(3), {1.0, 1.0, 1.0}}), DomainError);
}

TEST(ProductState, Validation) {
  const DensityOperator m = DensityOperator::maximally_mixed(2);
  EXPECT_LT(max_abs(ProductState::product(m, m).matrix() - identity(4) / 4.0), 1e-15);
  EXPECT_THROW(ProductState({{m, m}, {m, m}}, {0.7, 0.7}), DomainError);
  EXPECT_THROW(ProductState({{m, m}}, {-1.0}), DomainError);
}

TEST(SepSupState, IdentityIsStateIndependent) {
  Rng rng = trial_rng(62, 0);
  const SampleSpace space = SampleSpace::numbered(2);
  const MeasureContext ctx = self_tensor_context(MeasureContext(random_povm(space, 2, rng)));
  const QRV h = QRV::constant(space, identity(4));
  const NormEstimate sep = sep_sup_state_lp(h, 2.0, ctx, {2, 2});
  const NormEstimate full = sup_state_lp(h, 2.0, ctx);
  EXPECT_NEAR(sep.lower, full.lower, 1e-6);
}

TEST(SepSupState, ProductIntegrandFactorizesAtOne) {
  Rng rng = trial_rng(63, 0);
  for (int t = 0; t < 10; ++t) {
    const Matrix h1 = random_psd(2, rng), h2 = random_psd(2, rng);
    const NormEstimate e = sep_sup_state_lp(QRV(kOne, {kron(h1, h2)}), 1.0, testing::unit_context(4), {2, 2});
    const double expected = max_eigenvalue(h1) * max_eigenvalue(h2);
    EXPECT_NEAR(e.lower, expected, 1e-8 * (1.0 + expected));
    EXPECT_GE(e.upper, expected - 1e-9);
  }
}

TEST(SepSupState, NeverExceedsTheFullSupremum) {
  Rng rng = trial_rng(64, 0);
  for (int t = 0; t < 100; ++t) {
    const SampleSpace space = SampleSpace::numbered(1 + t % 3);
    const MeasureContext ctx = self_tensor_context(MeasureContext(random_povm(space, 2, rng)));
    const QRV h = random_positive_qrv(space, 4, rng);
    const double p = 1.0 + t % 3;
    const NormEstimate sep = sep_sup_state_lp(h, p, ctx, {2, 2});
    const NormEstimate full = sup_state_lp(h, p, ctx);
    EXPECT_LE(sep.lower, full.upper * (1.0 + 1e-9));
  }
}

TEST(SepNorms, IdentityHoldsWithSlack) {
  Rng rng = trial_rng(65, 0);
  const SampleSpace space = SampleSpace::numbered(2);
  const MeasureContext ctx(random_povm(space, 2, rng));
  const QRV id = QRV::constant(space, identity(2));
  for (SepMode mode : {SepMode::kSep1, SepMode::kSepDec}) {
    const SepResult r = sep_norms(id, id, 2.0, 2.0, mode, ctx);
    EXPECT_TRUE(r.holds);
    EXPECT_LE(r.margin, 0.0);
  }
}

TEST(SepNorms, PositiveDiagonalReducesToScalarHolder) {
  const SampleSpace space = SampleSpace::numbered(2);
  const std::vector<double> w = {0.6, 1.4};
  const MeasureContext ctx(DiscretePOVM::scalar_times_identity(space, 2, w));
  const QRV f(space, {diag({2, 1}), diag({0.5, 3})});
  const QRV g(space, {diag({1, 0.25}), diag({2, 1})});
  const double p = 3.0, q = 1.5;
  double lhs = 0.0, nf = 0.0, ng = 0.0;
  for (int i = 0; i < 2; ++i) {
    double sf = 0.0, sg = 0.0;
    for (std::size_t x = 0; x < 2; ++x) {
      sf += w[x] * std::pow(f[x](i, i).real(), p);
      sg += w[x] * std::pow(g[x](i, i).real(), q);
    }
    nf = std::max(nf, std::pow(sf, 1.0 / p));
    ng = std::max(ng, std::pow(sg, 1.0 / q));
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (std::size_t x = 0; x < 2; ++x) s += w[x] * f[x](i, i).real() * g[x](j, j).real();
      lhs = std::max(lhs, s);
    }
  }
  const SepResult r = sep_norms(f, g, p, q, SepMode::kSep1, ctx);
  EXPECT_NEAR(r.lhs.lower, lhs, 1e-6);
  EXPECT_NEAR(r.lhs.upper, lhs, 1e-6);
  EXPECT_NEAR(r.f_norm.upper, nf, 1e-6);
  EXPECT_NEAR(r.g_norm.upper, ng, 1e-6);
  EXPECT_LE(lhs, nf * ng);
  EXPECT_TRUE(r.holds);
}

TEST(SepNorms, MultiplierFactorWithScalarMeasure) {
  Rng rng = trial_rng(66, 0);
  const SampleSpace space = SampleSpace::numbered(2);
  const MeasureContext ctx(DiscretePOVM::scalar_times_identity(space, 2, {0.5, 1.0}));
  const QRV f = random_qrv(space, 2, rng), g = random_qrv(space, 2, rng);
  const SepResult r = sep_norms(f, g, 1.0, kInf, SepMode::kMultiplier, ctx);
  EXPECT_DOUBLE_EQ(r.factor, 2.0);
  EXPECT_NEAR(r.rhs_upper, 2.0 * r.f_norm.upper * inf_norm(g, ctx), 1e-12);
  EXPECT_TRUE(r.holds);
  EXPECT_DOUBLE_EQ(sep_norms(f, g, 1.0, kInf, SepMode::kMultiplierDec, ctx).factor, 1.0);
}

TEST(SepNorms, RandomInstancesSatisfyTheBounds) {
  Rng rng = trial_rng(67, 0);
  for (int t = 0; t < 4; ++t) {
    const SampleSpace space = SampleSpace::numbered(1 + t % 2);
    const MeasureContext ctx(random_povm(space, 2, rng));
    const QRV f = random_qrv(space, 2, rng), g = random_qrv(space, 2, rng);
    EXPECT_TRUE(sep_norms(f, g, 2.0, 2.0, SepMode::kSep1, ctx).holds);
    EXPECT_TRUE(sep_norms(f, g, 3.0, 1.5, SepMode::kSepDec, ctx).holds);
    EXPECT_TRUE(sep_norms(f, g, 1.0, kInf, SepMode::kMultiplier, ctx).holds);
    EXPECT_TRUE(sep_norms(f, g, 1.0, kInf, SepMode::kMultiplierDec, ctx).holds);
  }
}

TEST(SepNorms, RejectsNonConjugateExponents) {
  const MeasureContext ctx = testing::unit_context(2);
  const QRV f(kOne, {identity(2)});
  EXPECT_THROW(sep_norms(f, f, 2.0, 3.0, SepMode::kSep1, ctx), DomainError);
  EXPECT_THROW(sep_norms(f, f, 1.0, kInf, SepMode::kSep1, ctx), DomainError);
}

}  // namespace
}  // namespace ovlp
