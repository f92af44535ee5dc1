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

#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qentropy/roof.hpp"

namespace qentropy {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// Pure-state decomposition of rho from a random m x rank isometry.
Ensemble random_pure_decomposition(const DensityOperator& rho, Index m, std::uint64_t seed) {
  Rng rng(seed);
  return ensemble_from_isometry(rho, m, ginibre(m, numerical_rank(rho.matrix()), rng));
}

TEST(Ensemble, Validation) {
  const DensityOperator a = random_density(2, 1, 1), b = random_density(2, 2, 2);
  EXPECT_THROW(Ensemble({}, {}), DimensionError);
  EXPECT_THROW(Ensemble({0.5, 0.6}, {a, b}), DomainError);
  EXPECT_THROW(Ensemble({1.5, -0.5}, {a, b}), DomainError);
  EXPECT_THROW(Ensemble({0.5, 0.5}, {a, random_density(3, 1, 0)}), DimensionError);
  EXPECT_THROW(Ensemble::for_target({0.5, 0.5}, {a, b}, a), ContractError);
  const Ensemble e({0.25, 0.75}, {a, b});
  EXPECT_LT(max_abs(e.average().matrix() - 0.25 * a.matrix() - 0.75 * b.matrix()), 1e-15);
}

TEST(Roof, IsometryEnsembleAveragesToState) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Index d = 2 + s % 4;
    const DensityOperator rho = random_density(d, 1 + s % d, s);
    const Ensemble e = random_pure_decomposition(rho, d + 2, s + 7);
    EXPECT_LT(max_abs(e.average().matrix() - rho.matrix()), 1e-12);
    for (const auto& m : e.members()) EXPECT_EQ(numerical_rank(m.matrix()), 1);
  }
  EXPECT_THROW(ensemble_from_isometry(random_density(3, 3, 0), 2, ComplexMatrix::Zero(2, 3)), DomainError);
}

TEST(Roof, DefectOfPureDecompositionIsEntropy) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Index d = 2 + s % 5;
    const DensityOperator rho = random_density(d, 1 + s % d, s);
    const Ensemble e = random_pure_decomposition(rho, d * d, s + 1);
    EXPECT_NEAR(ensemble_defect(e), oracle::entropy(rho.matrix()), 1e-9) << "seed " << s;
  }
}

TEST(Roof, DefectIsHolevoQuantity) {
  // sum pi H(rho_i || avg) = H(avg) - sum pi H(rho_i) for mixed members too.
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::vector<double> w{0.2, 0.5, 0.3};
    std::vector<DensityOperator> m;
    for (std::uint64_t i = 0; i < 3; ++i) m.push_back(random_density(3, 1 + (s + i) % 3, mix_seed(s, i)));
    const Ensemble e(w, m);
    double avg = 0.0;
    for (std::size_t i = 0; i < 3; ++i) avg += w[i] * oracle::entropy(m[i].matrix());
    EXPECT_NEAR(ensemble_defect(e), oracle::entropy(e.average().matrix()) - avg, 1e-9);
  }
}

TEST(Roof, KApproximatorReachesEntropyAtFullRank) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Index d = 2 + s % 3;
    const Index r = 1 + s % d;
    const DensityOperator rho = random_density(d, r, s);
    RoofOptions opt;
    opt.m = 2;
    opt.n_starts = 1;
    opt.seed = s;
    const RoofResult res = k_approximator(EntropyFunctional::input_entropy(), rho, r, opt);
    EXPECT_NEAR(res.value, von_neumann(rho).value, 1e-9);
    EXPECT_EQ(res.direction, Direction::lower_bound_of_sup);
    EXPECT_LT(max_abs(res.ensemble.average().matrix() - rho.matrix()), 1e-10);
    const RoofResult dk = delta_k(rho, r, opt);
    EXPECT_NEAR(dk.value, 0.0, 1e-9);
  }
}

TEST(Roof, KApproximatorIsMonotoneInK) {
  const DensityOperator rho = random_density(4, 4, 3);
  RoofOptions opt;
  opt.m = 6;
  opt.n_starts = 3;
  opt.seed = 1;
  double prev = -1.0;
  for (Index k = 1; k <= 4; ++k) {
    const RoofResult res = k_approximator(EntropyFunctional::input_entropy(), rho, k, opt);
    EXPECT_GE(res.value, prev - 1e-9);
    EXPECT_LE(res.value, von_neumann(rho).value + 1e-9);
    const RoofResult dk = delta_k(rho, k, opt);
    EXPECT_NEAR(dk.value + res.value, von_neumann(rho).value, 1e-6);
    prev = res.value;
  }
  // k = 1: pure members only.
  EXPECT_NEAR(k_approximator(EntropyFunctional::input_entropy(), rho, 1, opt).value, 0.0, 1e-12);
}

TEST(Roof, PadIsometryPreservesEnsemble) {
  const DensityOperator rho = random_density(3, 3, 5);
  Rng rng(2);
  const ComplexMatrix u = haar_isometry(4, 3, rng);
  const ComplexMatrix p = pad_isometry(u, 4, 1, 2);
  EXPECT_EQ(p.rows(), 8);
  EXPECT_LT(max_abs(p.adjoint() * p - ComplexMatrix::Identity(3, 3)), 1e-13);
  EXPECT_THROW(pad_isometry(u, 3, 1, 2), DimensionError);
}

TEST(Roof, EnsemblewiseMonotonicity) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const KrausChannel phi = random_channel(3, 3, 1 + s % 4, true, s);
    const DensityOperator rho = random_density(3, 1 + s % 3, s + 10);
    const Ensemble e = random_pure_decomposition(rho, 4, s + 20);
    const auto [lhs, rhs] = ensemblewise_monotonicity_gap(phi, e);
    EXPECT_LE(lhs, rhs + 1e-8);
  }
}

TEST(Roof, CoOutputEntropyBounds) {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const KrausChannel phi = random_channel(3, 3, 2, true, s);
    const DensityOperator rho = random_density(3, 3, s + 1);
    RoofOptions opt;
    opt.m = 6;
    opt.n_starts = 4;
    opt.seed = s;
    const RoofResult res = sigma_co_output_entropy(phi, rho, opt);
    EXPECT_EQ(res.direction, Direction::upper_bound_of_inf);
    EXPECT_GE(res.value, -1e-12);
    // Concavity: the roof never exceeds the output entropy of rho itself.
    EXPECT_LE(res.value, von_neumann(apply(phi, rho)).value + 1e-9);
    EXPECT_NEAR(ensemble_average_entropy(res.ensemble, EntropyFunctional::output_entropy(phi)), res.value, 1e-12);
  }
}

TEST(Eof, PureStatesGiveReducedEntropy) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Index da = 2 + s % 2, db = 2 + (s / 2) % 2;
    const PureState psi = random_pure(da * db, s);
    RoofOptions opt;
    opt.n_starts = 2;
    opt.seed = s;
    const RoofResult res = eof(psi.projector(), SubsystemSplit({da, db}), opt);
    EXPECT_NEAR(res.value, oracle::entropy(oracle::trace_out_second(psi.projector().matrix(), da, db)), 1e-9);
  }
}

TEST(Eof, ProductAndBellStates) {
  const DensityOperator prod = tensor(random_density(2, 2, 1), random_density(2, 2, 2));
  RoofOptions opt;
  opt.m = 16;
  opt.n_starts = 8;
  opt.seed = 3;
  EXPECT_NEAR(eof(prod, SubsystemSplit({2, 2}), opt).value, 0.0, 1e-6);
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(eof(PureState(bell).projector(), SubsystemSplit({2, 2}), opt).value, kLn2, 1e-12);
}

TEST(Eof, TwoQubitMixedStatesMatchConcurrenceFormula) {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const DensityOperator rho = random_density(4, 2 + s % 3, 700 + s);
    RoofOptions opt;
    opt.m = 16;
    opt.n_starts = 16;
    opt.seed = s;
    const RoofResult res = eof(rho, SubsystemSplit({2, 2}), opt);
    EXPECT_NEAR(res.value, oracle::wootters_eof(rho.matrix()), 1e-4) << "seed " << s;
  }
}

TEST(Eof, WernerStateFamily) {
  // p |Phi+><Phi+| + (1 - p) I/4 is separable for p <= 1/3.
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  for (double p : {0.2, 0.5, 0.8}) {
    const ComplexMatrix m = p * bell * bell.adjoint() + (1 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
    RoofOptions opt;
    opt.m = 16;
    opt.n_starts = 16;
    opt.seed = 1;
    const double v = eof(DensityOperator(m), SubsystemSplit({2, 2}), opt).value;
    EXPECT_NEAR(v, oracle::wootters_eof(m), 1e-4) << "p = " << p;
  }
}

TEST(Roof, RepeatableAcrossThreads) {
  const DensityOperator rho = random_density(4, 3, 8);
  RoofOptions a;
  a.m = 16;
  a.n_starts = 4;
  a.seed = 5;
  RoofOptions b = a;
  b.threads = 4;
  const RoofResult x = eof(rho, SubsystemSplit({2, 2}), a);
  const RoofResult y = eof(rho, SubsystemSplit({2, 2}), b);
  EXPECT_EQ(x.value, y.value);
  EXPECT_EQ(x.best_start, y.best_start);
}

}  // namespace
}  // namespace qentropy
