// Copyright 2026 The qentropy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qentropy/opcore.hpp"

namespace qentropy {
namespace {

TEST(Opcore, RejectsNonHermitianAndNonPositive) {
  ComplexMatrix a(2, 2);
  a << 1.0, 0.5, 0.0, 1.0;
  EXPECT_THROW(HermitianOperator{a}, ContractError);
  ComplexMatrix b(2, 2);
  b << 1.0, 0.0, 0.0, -0.5;
  EXPECT_THROW(DensityOperator{b}, ContractError);
  EXPECT_THROW(HermitianOperator{ComplexMatrix(2, 3)}, DimensionError);
  EXPECT_THROW(PureState(ComplexVector::Ones(2)), ContractError);
}

TEST(Opcore, RoundingLevelHermitianDefectIsRemoved) {
  ComplexMatrix a = random_density(3, 3, 7).matrix();
  a(0, 1) += cplx(1e-13, 0);
  const HermitianOperator h(a);
  EXPECT_EQ(hermitian_defect(h.matrix()), 0.0);
}

TEST(Opcore, SpectralDecompositionReconstructs) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityOperator rho = random_density(5, 1 + s % 5, s);
    const SpectralDecomposition sd = spectral_decompose(rho.hermitian());
    EXPECT_LT(max_abs(sd.reconstruct() - rho.matrix()), 1e-12);
    EXPECT_EQ(sd.rank(), static_cast<Index>(1 + s % 5));
    for (Index i = 1; i < sd.eigenvalues.size(); ++i) EXPECT_GE(sd.eigenvalues(i - 1), sd.eigenvalues(i));
  }
}

TEST(Opcore, TensorMatchesIndexLoopKronecker) {
  Rng rng(3);
  const ComplexMatrix a = ginibre(2, 3, rng);
  const ComplexMatrix b = ginibre(3, 2, rng);
  EXPECT_LT(max_abs(tensor(a, b) - oracle::kron(a, b)), 1e-15);
}

TEST(Opcore, PartialTraceMatchesIndexLoops) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const DensityOperator rho = random_density(6, 4, s);
    const SubsystemSplit split({2, 3});
    EXPECT_LT(max_abs(partial_trace(rho, split, {0}).matrix() - oracle::trace_out_second(rho.matrix(), 2, 3)), 1e-14);
    EXPECT_LT(max_abs(partial_trace(rho, split, {1}).matrix() - oracle::trace_out_first(rho.matrix(), 2, 3)), 1e-14);
  }
}

TEST(Opcore, PartialTraceOfProductIsFactor) {
  const DensityOperator a = random_density(2, 2, 1), b = random_density(3, 2, 2);
  const DensityOperator ab = tensor(a, b);
  const SubsystemSplit split({2, 3});
  EXPECT_LT(max_abs(partial_trace(ab, split, {0}).matrix() - a.matrix()), 1e-14);
  EXPECT_LT(max_abs(partial_trace(ab, split, {1}).matrix() - b.matrix()), 1e-14);
}

TEST(Opcore, PurificationReducesToState) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Index d = 2 + s % 4;
    const DensityOperator rho = random_density(d, 1 + s % d, s);
    const PureState hat = purify(rho);
    const Index r = hat.dim() / d;
    EXPECT_EQ(r, static_cast<Index>(1 + s % d));
    const ComplexMatrix reduced = oracle::trace_out_second(hat.projector().matrix(), d, r);
    EXPECT_LT(max_abs(reduced - rho.matrix()), 1e-12);
  }
}

TEST(Opcore, JordanPartsAreOrthogonalAndSumToTraceNorm) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix diff = random_density(4, 2, s).matrix() - random_density(4, 3, s + 100).matrix();
    const HermitianOperator h(diff);
    const auto [plus, minus] = jordan_parts(h);
    EXPECT_LT(max_abs(plus.matrix() - minus.matrix() - diff), 1e-13);
    EXPECT_LT(max_abs(plus.matrix() * minus.matrix()), 1e-13);
    EXPECT_NEAR(trace_norm(h), plus.trace() + minus.trace(), 1e-13);
    // Equal traces: the positive and negative parts balance.
    EXPECT_NEAR(plus.trace(), minus.trace(), 1e-13);
  }
}

TEST(Opcore, RandomDensityHasRequestedRankAndIsSeeded) {
  for (Index r = 1; r <= 4; ++r) {
    const DensityOperator rho = random_density(6, r, 11);
    EXPECT_EQ(numerical_rank(rho.matrix()), r);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-14);
  }
  EXPECT_EQ(max_abs(random_density(4, 2, 5).matrix() - random_density(4, 2, 5).matrix()), 0.0);
  EXPECT_GT(max_abs(random_density(4, 2, 5).matrix() - random_density(4, 2, 6).matrix()), 1e-3);
  EXPECT_THROW(random_density(3, 4, 0), DomainError);
}

TEST(Opcore, HaarAndPolarIsometries) {
  Rng rng(9);
  const ComplexMatrix v = haar_isometry(5, 3, rng);
  EXPECT_LT(max_abs(v.adjoint() * v - ComplexMatrix::Identity(3, 3)), 1e-13);
  const ComplexMatrix u = polar_isometry(ginibre(6, 2, rng));
  EXPECT_LT(max_abs(u.adjoint() * u - ComplexMatrix::Identity(2, 2)), 1e-13);
  // The polar factor of an isometry is itself.
  EXPECT_LT(max_abs(polar_isometry(v) - v), 1e-13);
}

TEST(Opcore, MixSeedSeparatesIndices) {
  std::vector<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.push_back(mix_seed(42, i));
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
  EXPECT_NE(mix_seed(42, 0), mix_seed(43, 0));
}

}  // namespace
}  // namespace qentropy
