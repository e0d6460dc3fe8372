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
using testing::mat2;
using testing::max_abs;

const SampleSpace kOne({"a"});
const DensityOperator kMixed2 = DensityOperator::maximally_mixed(2);

DiscretePOVM single(const Matrix& effect) { return DiscretePOVM(kOne, effect.rows(), {effect}); }

TEST(InducedMeasure, Examples) {
  EXPECT_NEAR(induced_measure(single(identity(2)), kMixed2).weights[0], 1.0, 1e-15);
  EXPECT_NEAR(induced_measure(single(diag({1, 0})), kMixed2).weights[0], 0.5, 1e-15);
  EXPECT_EQ(induced_measure(single(Matrix::Zero(2, 2)), kMixed2).weights[0], 0.0);
}

TEST(InducedMeasure, RejectsRankDeficientState) {
  EXPECT_THROW(induced_measure(single(identity(2)), DensityOperator(diag({1, 0}))), DomainError);
}

TEST(RnDerivative, Examples) {
  EXPECT_LT(max_abs(rn_derivative(single(identity(2)), kMixed2).values[0] - identity(2)), 1e-15);
  EXPECT_LT(max_abs(rn_derivative(single(diag({1, 0})), kMixed2).values[0] - diag({2, 0})), 1e-15);
  EXPECT_LT(max_abs(rn_derivative(single(Matrix::Zero(2, 2)), kMixed2).values[0]), 1e-15);
}

TEST(RnDerivative, ScalarTimesIdentityHasIdentityDerivative) {
  const DiscretePOVM nu = DiscretePOVM::scalar_times_identity(SampleSpace::numbered(3), 2, {0.5, 1.0, 2.0});
  Rng rng = trial_rng(21, 0);
  for (int t = 0; t < 5; ++t) {
    const RNDerivative d = rn_derivative(nu, random_state(2, rng));
    for (const auto& v : d.values) EXPECT_LT(max_abs(v - identity(2)), 1e-12);
  }
}

TEST(ValidatePovm, Examples) {
  EXPECT_TRUE(validate_povm(kOne, 2, {identity(2)}).empty());

  const auto bad = validate_povm(SampleSpace({"a", "b"}), 2, {identity(2), diag({1, -1})});
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0].atom, "b");

  const auto mismatch = validate_povm(SampleSpace({"a", "b"}), 2, {identity(2), identity(3)});
  ASSERT_EQ(mismatch.size(), 1u);
  EXPECT_EQ(mismatch[0].atom, "b");
  EXPECT_NE(mismatch[0].message.find("dimension"), std::string::npos);

  EXPECT_THROW(DiscretePOVM(kOne, 2, {diag({1, -1})}), DomainError);
}

TEST(MeasureContext, Reconstruction) {
  Rng rng = trial_rng(22, 0);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d = 1 + t % 4;
    const DiscretePOVM nu = random_povm(SampleSpace::numbered(1 + t % 5), d, rng);
    const DensityOperator rho = random_state(d, rng);
    const ScalarMeasure m = induced_measure(nu, rho);
    const RNDerivative der = rn_derivative(nu, rho);
    for (std::size_t i = 0; i < nu.atoms(); ++i)
      EXPECT_LE(max_abs(nu.effect(i) - der.values[i] * m.weights[i]), 1e-10);
  }
}

TEST(MeasureContext, NullSetsAreStateIndependentAndMatchZeroEffects) {
  Rng rng = trial_rng(23, 0);
  for (int t = 0; t < 50; ++t) {
    const SampleSpace space = SampleSpace::numbered(4);
    const DiscretePOVM base = random_povm(space, 3, rng);
    std::vector<Matrix> eff = base.effects();
    const std::size_t z = static_cast<std::size_t>(t % 4);
    eff[(z + 1) % 4] += eff[z];
    eff[z] = Matrix::Zero(3, 3);
    const DiscretePOVM nu(space, 3, eff);
    const ScalarMeasure m1 = induced_measure(nu, random_state(3, rng));
    const ScalarMeasure m2 = induced_measure(nu, random_state(3, rng));
    for (std::size_t i = 0; i < 4; ++i) {
      const bool zero_effect = operator_norm(nu.effect(i)) == 0.0;
      EXPECT_EQ(m1.weights[i] == 0.0, zero_effect);
      EXPECT_EQ(m2.weights[i] == 0.0, zero_effect);
    }
  }
}

TEST(Pairing, Examples) {
  Rng rng = trial_rng(27, 0);
  const MeasureContext ctx(single(identity(2)));
  const auto one = pairing(QRV::constant(kOne, identity(2)), random_state(2, rng).matrix(), ctx);
  EXPECT_NEAR(std::abs(one[0] - 1.0), 0.0, 1e-12);

  const auto v = pairing(QRV(kOne, {diag({2, 0})}), kMixed2, rn_derivative(single(identity(2)), kMixed2));
  EXPECT_NEAR(std::abs(v[0] - 1.0), 0.0, 1e-15);

  const DiscretePOVM with_null(SampleSpace({"a", "b"}), 2, {identity(2), Matrix::Zero(2, 2)});
  const auto n = pairing(QRV::constant(with_null.space(), identity(2)), kMixed2, rn_derivative(with_null, kMixed2));
  EXPECT_EQ(n[1], Complex(0.0));
}

TEST(Integrate, Examples) {
  Rng rng = trial_rng(24, 0);
  const DiscretePOVM nu = random_povm(SampleSpace::numbered(3), 2, rng);
  EXPECT_LT(max_abs(integrate(QRV::constant(nu.space(), identity(2)), nu, kMixed2) - nu.total()), 1e-12);

  const Matrix ones = mat2(1, 1, 1, 1);
  EXPECT_LT(max_abs(integrate(QRV(kOne, {ones}), single(diag({1, 0})), kMixed2) - diag({1, 0})), 1e-15);

  const DiscretePOVM sc = DiscretePOVM::scalar_times_identity(SampleSpace::numbered(2), 2, {0.5, 2.0});
  const QRV f = random_qrv(sc.space(), 2, rng);
  EXPECT_LT(max_abs(integrate(f, sc, random_state(2, rng)) - (0.5 * f[0] + 2.0 * f[1])), 1e-12);
}

TEST(Integrate, ImplicitDefinitionLinearityPositivityAndStateInvariance) {
  Rng rng = trial_rng(25, 0);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d = 1 + t % 3;
    const SampleSpace space = SampleSpace::numbered(1 + t % 4);
    const DiscretePOVM nu = random_povm(space, d, rng);
    const DensityOperator rho = random_state(d, rng);
    const DensityOperator rho2 = random_state(d, rng);
    const QRV f = random_qrv(space, d, rng);
    const QRV g = random_qrv(space, d, rng);
    const MeasureContext ctx(nu, rho);
    const Matrix s = random_state(d, rng).matrix();

    const Matrix If = integrate(f, ctx);
    const auto fs = pairing(f, s, ctx);
    Complex sum = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) sum += fs[i] * ctx.weight(i);
    EXPECT_LE(std::abs((s * If).trace() - sum), 1e-9);

    const Complex a(0.3, -1.2), b(-2.0, 0.5);
    EXPECT_LE(max_abs(integrate(add(scale(f, a), scale(g, b)), ctx) - (a * If + b * integrate(g, ctx))), 1e-10);

    EXPECT_TRUE(psd_check(integrate(random_positive_qrv(space, d, rng), ctx)));
    EXPECT_LE(max_abs(If - integrate(f, nu, rho2)), 1e-9);
  }
}

TEST(QrvAlgebra, Identities) {
  Rng rng = trial_rng(26, 0);
  const QRV f = random_qrv(SampleSpace::numbered(3), 3, rng);
  const QRV back = adjoint(adjoint(f));
  const QRV recomposed = add(re(f), scale(im(f), Complex(0, 1)));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT(max_abs(back[i] - f[i]), 1e-15);
    EXPECT_LT(max_abs(recomposed[i] - f[i]), 1e-14);
  }
  EXPECT_LT(max_abs(abs(QRV(kOne, {mat2(0, 1, 0, 0)}))[0] - diag({0, 1})), 1e-12);
  EXPECT_LT(max_abs(abs_star(QRV(kOne, {mat2(0, 1, 0, 0)}))[0] - diag({1, 0})), 1e-12);
  EXPECT_LT(max_abs(pointwise_power(QRV(kOne, {diag({4, 9})}), 0.5)[0] - diag({2, 3})), 1e-12);
  EXPECT_LT(max_abs(pointwise_mul(QRV(kOne, {diag({2, 3})}), QRV(kOne, {diag({5, 7})}))[0] - diag({10, 21})), 1e-15);
}

TEST(QrvAlgebra, ShapeMismatchIsDomainError) {
  EXPECT_THROW(add(QRV(kOne, {identity(2)}), QRV(kOne, {identity(3)})), DomainError);
  EXPECT_THROW(QRV(SampleSpace({"a", "b"}), {identity(2)}), DomainError);
}

TEST(RandomInstance, DeterministicAndStructural) {
  const RandomInstance a = random_instance(InstanceKind::kQrv, 3, 4, 99);
  const RandomInstance b = random_instance(InstanceKind::kQrv, 3, 4, 99);
  EXPECT_EQ(qrv_to_json(a.qrvs[0]).dump(), qrv_to_json(b.qrvs[0]).dump());

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RandomInstance p = random_instance(InstanceKind::kPositiveQrv, 3, 4, seed);
    for (const auto& v : p.qrvs[0].values()) EXPECT_TRUE(psd_check(v));
    const RandomInstance c = random_instance(InstanceKind::kCommutingPositivePair, 3, 4, seed);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_LE(commutator_norm(c.qrvs[0][i], c.qrvs[1][i]), 1e-12);
    const RandomInstance n = random_instance(InstanceKind::kPovm, 3, 4, seed);
    EXPECT_LT(max_abs(n.povms[0].total() - identity(3)), 1e-10);
  }
  EXPECT_THROW(random_instance(InstanceKind::kQrv, 0, 1, 0), DomainError);
  EXPECT_THROW(parse_instance_kind("matrix"), DomainError);
}

}  // namespace
}  // namespace ovlp
