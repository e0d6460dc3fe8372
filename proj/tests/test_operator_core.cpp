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

const Matrix kNilpotent = mat2(0, 1, 0, 0);

TEST(PsdCheck, Examples) {
  EXPECT_TRUE(psd_check(identity(2), 1e-10));
  EXPECT_FALSE(psd_check(diag({1, -1}), 1e-10));
  EXPECT_TRUE(psd_check(mat2(2, 1, 1, 1), 1e-10));
}

TEST(PsdCheck, QuadraticFormulaEigenvalues) {
  const RealVector ev = eigh(mat2(2, 1, 1, 1)).values;
  EXPECT_NEAR(ev(0), (3.0 - std::sqrt(5.0)) / 2.0, 1e-12);
  EXPECT_NEAR(ev(1), (3.0 + std::sqrt(5.0)) / 2.0, 1e-12);
}

TEST(LoewnerGeq, Examples) {
  EXPECT_TRUE(loewner_geq(identity(2), identity(2)));
  EXPECT_TRUE(loewner_geq(2.0 * identity(2), identity(2)));
  EXPECT_FALSE(loewner_geq(diag({1, 0}), diag({0, 1})));
  EXPECT_FALSE(loewner_geq(diag({0, 1}), diag({1, 0})));
}

TEST(LoewnerGeq, PartialOrderOnSampledTriples) {
  Rng rng = trial_rng(11, 0);
  for (int t = 0; t < 100; ++t) {
    const Matrix a = random_psd(3, rng);
    const Matrix b = a + random_psd(3, rng);
    const Matrix c = b + random_psd(3, rng);
    EXPECT_TRUE(loewner_geq(a, a));
    EXPECT_TRUE(loewner_geq(c, b) && loewner_geq(b, a));
    EXPECT_TRUE(loewner_geq(c, a));
    const Matrix x = random_psd(3, rng);
    const Matrix y = random_psd(3, rng);
    if (loewner_geq(x, y) && loewner_geq(y, x)) EXPECT_LT(frobenius(x - y), 1e-6);
  }
}

TEST(MatrixPower, Examples) {
  EXPECT_LT(max_abs(matrix_power(identity(2), 0.5) - identity(2)), 1e-14);
  EXPECT_LT(max_abs(matrix_power(diag({4, 9}), 0.5) - diag({2, 3})), 1e-14);
  EXPECT_LT(max_abs(matrix_power(diag({2, 0}), 0.5) - diag({std::sqrt(2.0), 0})), 1e-14);
}

TEST(MatrixPower, SemigroupProperty) {
  Rng rng = trial_rng(12, 0);
  std::uniform_real_distribution<double> u(0.1, 2.5);
  for (int t = 0; t < 100; ++t) {
    const Matrix a = random_psd(3, rng);
    const double s = u(rng), r = u(rng);
    const Matrix lhs = matrix_power(a, s + r);
    EXPECT_LE(frobenius(lhs - matrix_power(a, s) * matrix_power(a, r)), 1e-8 * frobenius(lhs));
  }
}

TEST(MatrixPower, RejectsIndefiniteInput) { EXPECT_THROW(matrix_power(diag({1, -1}), 0.5), DomainError); }

TEST(SchattenNorm, Examples) {
  EXPECT_NEAR(schatten_norm(identity(2), 1), 2.0, 1e-14);
  EXPECT_NEAR(schatten_norm(diag({3, -4}), 2), 5.0, 1e-14);
  EXPECT_NEAR(schatten_norm(kNilpotent, 1), 1.0, 1e-14);
  EXPECT_NEAR(schatten_norm(diag({3, -4}), kInf), 4.0, 1e-14);
}

TEST(SchattenNorm, MatchesSvdOracle) {
  Rng rng = trial_rng(13, 0);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = random_gaussian(3, rng);
    const Eigen::JacobiSVD<Matrix> svd(a);
    const RealVector s = svd.singularValues();
    EXPECT_NEAR(schatten_norm(a, 3.0), std::cbrt(s.array().cube().sum()), 1e-10);
  }
}

TEST(SchattenNorm, DecreasingInP) {
  Rng rng = trial_rng(14, 0);
  const double ps[] = {1.0, 1.5, 2.0, 3.0, 5.0, kInf};
  for (int t = 0; t < 200; ++t) {
    const Matrix a = random_gaussian(3, rng);
    for (int k = 0; k + 1 < 6; ++k) EXPECT_GE(schatten_norm(a, ps[k]) + 1e-12, schatten_norm(a, ps[k + 1]));
  }
}

TEST(PolarParts, Examples) {
  const PolarParts i = polar_parts(identity(2));
  EXPECT_LT(max_abs(i.abs - identity(2)) + max_abs(i.abs_star - identity(2)) + max_abs(i.u - identity(2)), 1e-12);

  const PolarParts d = polar_parts(diag({-2, 3}));
  EXPECT_LT(max_abs(d.abs - diag({2, 3})), 1e-12);
  EXPECT_LT(max_abs(d.u - diag({-1, 1})), 1e-12);

  const PolarParts n = polar_parts(kNilpotent);
  EXPECT_LT(max_abs(n.abs - diag({0, 1})), 1e-12);
  EXPECT_LT(max_abs(n.abs_star - diag({1, 0})), 1e-12);
}

TEST(PolarParts, Reconstruction) {
  Rng rng = trial_rng(15, 0);
  for (int t = 0; t < 100; ++t) {
    Matrix a = random_gaussian(3, rng);
    if (t % 3 == 0) a.col(0) = a.col(1);  // rank deficient
    const PolarParts pp = polar_parts(a);
    EXPECT_LE(frobenius(pp.u * pp.abs - a), 1e-9 * (1.0 + frobenius(a)));
    EXPECT_LE(frobenius(pp.abs * pp.abs - a.adjoint() * a), 1e-9 * (1.0 + frobenius(a) * frobenius(a)));
  }
}

TEST(HermitianParts, Examples) {
  const HermitianParts i = hermitian_parts(identity(2));
  EXPECT_LT(max_abs(i.re - identity(2)) + max_abs(i.im), 1e-15);

  const HermitianParts n = hermitian_parts(kNilpotent);
  const Complex half(0.5, 0.0), ihalf(0.0, 0.5);
  EXPECT_LT(max_abs(n.re - mat2(0, half, half, 0)), 1e-15);
  EXPECT_LT(max_abs(n.im - mat2(0, -ihalf, ihalf, 0)), 1e-15);
  EXPECT_LT(max_abs(n.re + Complex(0, 1) * n.im - kNilpotent), 1e-15);
}

TEST(PosNegParts, Examples) {
  const PosNegParts pn = pos_neg_parts(diag({1, -1}));
  EXPECT_LT(max_abs(pn.pos - diag({1, 0})) + max_abs(pn.neg - diag({0, 1})), 1e-15);
}

TEST(PosNegParts, Properties) {
  Rng rng = trial_rng(16, 0);
  for (int t = 0; t < 100; ++t) {
    const Matrix h = random_hermitian(3, rng);
    const PosNegParts pn = pos_neg_parts(h);
    EXPECT_TRUE(psd_check(pn.pos) && psd_check(pn.neg));
    EXPECT_LT(max_abs(pn.pos * pn.neg), 1e-9);
    EXPECT_LT(max_abs(pn.pos - pn.neg - h), 1e-10);
  }
}

TEST(Kron, Examples) {
  EXPECT_LT(max_abs(kron(identity(2), identity(2)) - identity(4)), 1e-15);
  EXPECT_LT(max_abs(kron(diag({1, 2}), diag({3, 4})) - diag({3, 4, 6, 8})), 1e-15);
}

TEST(Kron, RankMultiplies) {
  Rng rng = trial_rng(17, 0);
  for (int t = 0; t < 20; ++t) {
    Matrix a = random_gaussian(2, rng);
    const Matrix b = random_gaussian(2, rng);
    if (t % 2 == 0) a.col(1) = 2.0 * a.col(0);
    const Eigen::Index ra = Eigen::FullPivLU<Matrix>(a).rank();
    const Eigen::Index rb = Eigen::FullPivLU<Matrix>(b).rank();
    EXPECT_EQ(numerical_rank(kron(a, b)), ra * rb);
  }
}

TEST(Hermitian, TaggedInputValidation) {
  EXPECT_TRUE(is_hermitian(mat2(1, Complex(0, 2), Complex(0, -2), 3)));
  EXPECT_FALSE(is_hermitian(kNilpotent));
  EXPECT_THROW(require_hermitian(kNilpotent, "test"), DomainError);
}

}  // namespace
}  // namespace ovlp
