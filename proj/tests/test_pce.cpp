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
#include "qentropy/pce.hpp"

namespace qentropy {
namespace {

constexpr double kLn2 = std::numbers::ln2;

TEST(SupPure, IdentityChannelIsZero) {
  const SupPureEstimate e = sup_pure_output_entropy(identity_channel(3), 4, 1);
  EXPECT_NEAR(e.lower_estimate, 0.0, 1e-12);
  EXPECT_NEAR(e.upper_bound, 0.0, 1e-15);
}

TEST(SupPure, ConstantOutputChannel) {
  const DensityOperator sigma = random_density(3, 3, 2);
  const KrausChannel phi = depolarizing_channel(sigma, 4);
  const SupPureEstimate e = sup_pure_output_entropy(phi, 4, 7);
  EXPECT_NEAR(e.lower_estimate, von_neumann(sigma).value, 1e-6);
  EXPECT_NEAR(e.upper_bound, std::log(3.0), 1e-15);
}

TEST(SupPure, WitnessReproducesEstimateAndRespectsBounds) {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const Index m = 1 + static_cast<Index>(s % 4);
    const KrausChannel phi = random_channel(4, 4, m, true, s);
    SupPureOptions opt;
    opt.n_starts = 6;
    opt.seed = s;
    const SupPureEstimate e = sup_pure_output_entropy(phi, opt);
    EXPECT_NEAR(output_entropy(phi, PureState::normalized(e.witness).projector()).value, e.lower_estimate, 1e-10);
    EXPECT_LE(e.lower_estimate, std::log(static_cast<double>(m)) + 1e-10);
    EXPECT_NEAR(e.upper_bound, std::log(static_cast<double>(m)), 1e-12);
    // Never below any sampled pure input.
    for (std::uint64_t t = 0; t < 5; ++t) {
      EXPECT_LE(output_entropy(phi, random_pure(4, 1000 + t).projector()).value, e.lower_estimate + 1e-9);
    }
  }
}

TEST(SupPure, RepeatableAndThreadIndependent) {
  const KrausChannel phi = random_channel(5, 4, 3, true, 3);
  SupPureOptions a;
  a.n_starts = 5;
  a.seed = 99;
  SupPureOptions b = a;
  b.threads = 3;
  const SupPureEstimate x = sup_pure_output_entropy(phi, a);
  const SupPureEstimate y = sup_pure_output_entropy(phi, b);
  EXPECT_EQ(x.lower_estimate, y.lower_estimate);
  EXPECT_EQ(x.best_start, y.best_start);
  EXPECT_EQ(max_abs(ComplexMatrix(x.witness - y.witness)), 0.0);
}

TEST(SupPure, Example1BelowGibbsBound) {
  const KrausChannel phi = make_example1(kLn2, 256);
  SupPureOptions opt;
  opt.n_starts = 2;
  opt.seed = 1;
  const SupPureEstimate e = sup_pure_output_entropy(phi, opt);
  EXPECT_LE(e.lower_estimate, oracle::gibbs_bound_example1(kLn2, 256) + 1e-9);
  EXPECT_LE(oracle::gibbs_bound_example1(kLn2, 256), 2.0 * kLn2 + std::log(std::numbers::pi * std::numbers::pi / 6));
  EXPECT_GT(e.lower_estimate, 1.0);
}

TEST(Afw, DecompositionIdentities) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Index d = 3 + s % 4;
    const Index r1 = 1 + s % 3, r2 = 1 + (s / 3) % 3;
    const DensityOperator rho = random_density(d, r1, s);
    const DensityOperator sigma = random_density(d, r2, s + 300);
    const AFWDecomposition a = afw_decompose(rho, sigma);
    EXPECT_LT(a.residual, 1e-12);
    EXPECT_NEAR(a.epsilon, 0.5 * trace_norm(HermitianOperator(rho.matrix() - sigma.matrix())), 1e-13);
    EXPECT_NEAR(a.omega_star.trace(), 1.0, 1e-12);
    EXPECT_NEAR(a.tau_plus.trace(), 1.0, 1e-12);
    EXPECT_NEAR(a.tau_minus.trace(), 1.0, 1e-12);
    EXPECT_LE(numerical_rank(a.tau_plus.matrix()), r1 + r2 - 1);
    EXPECT_LE(numerical_rank(a.tau_minus.matrix()), r1 + r2 - 1);
    const ComplexMatrix w = (1 + a.epsilon) * a.omega_star.matrix();
    EXPECT_LT(max_abs(w - rho.matrix() - a.epsilon * a.tau_minus.matrix()), 1e-12);
    EXPECT_LT(max_abs(w - sigma.matrix() - a.epsilon * a.tau_plus.matrix()), 1e-12);
  }
}

TEST(Afw, RejectsCoincidentStates) {
  const DensityOperator rho = random_density(3, 2, 1);
  EXPECT_THROW(afw_decompose(rho, rho), DegenerateInputError);
  EXPECT_THROW(afw_decompose(rho.scaled(2.0), rho), DomainError);
}

TEST(Continuity, ClosedFormValues) {
  EXPECT_NEAR(continuity_bound(0.0, 1, 1, 1.0), 2.0 * kLn2, 1e-15);
  EXPECT_EQ(continuity_bound(3.0, 4, 4, 0.0), 0.0);
  // e (C + ln 3) + (1 + e) h2(e / (1 + e)) at e = 1/2, C = ln 2.
  const double e = 0.5;
  const double expect = e * (kLn2 + std::log(3.0)) + (1 + e) * oracle::binary_entropy(e / (1 + e));
  EXPECT_NEAR(continuity_bound(kLn2, 2, 2, e), expect, 1e-15);
  EXPECT_THROW(continuity_bound(-1.0, 1, 1, 0.1), DomainError);
  EXPECT_THROW(continuity_bound(1.0, 0, 1, 0.1), DomainError);
  EXPECT_THROW(continuity_bound(1.0, 1, 1, 1.1), DomainError);
}

TEST(Continuity, MonotoneInEveryArgument) {
  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double v = continuity_bound(1.0, 2, 3, 0.05 * i);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_LT(continuity_bound(1.0, 2, 2, 0.3), continuity_bound(1.5, 2, 2, 0.3));
  EXPECT_LT(continuity_bound(1.0, 2, 2, 0.3), continuity_bound(1.0, 2, 4, 0.3));
}

TEST(Continuity, HoldsForFiniteChoiRankChannels) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const Index m = 1 + static_cast<Index>(s % 4);
    const KrausChannel phi = random_channel(6, 6, m, true, s);
    const Index r1 = 1 + s % 4, r2 = 1 + (s / 4) % 4;
    const DensityOperator rho = random_density(6, r1, s + 1);
    const DensityOperator sigma = random_density(6, r2, s + 2);
    const double eps = 0.5 * trace_norm(HermitianOperator(rho.matrix() - sigma.matrix()));
    const double gap = std::abs(output_entropy(phi, rho).value - output_entropy(phi, sigma).value);
    EXPECT_LE(gap, continuity_bound(std::log(static_cast<double>(m)), r1, r2, eps) + 1e-8);
  }
}

TEST(CriterionA, ValueBoundedByLogCount) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Index m = 1 + static_cast<Index>(s % 4);
    const KrausChannel phi = random_channel(4, 4, m, true, s);
    const PureState psi = random_pure(4, s + 3);
    const double a = criterion_a_value(phi, psi);
    EXPECT_GE(a, -1e-15);
    EXPECT_LE(a, std::log(static_cast<double>(m)) + 1e-12);
    SupPureOptions opt;
    opt.n_starts = 3;
    opt.seed = s;
    EXPECT_GE(criterion_a_sup(phi, opt).lower_estimate, a - 1e-12);
  }
}

TEST(CriterionA, WarmStartIsNeverWorsened) {
  const KrausChannel phi = random_channel(3, 3, 3, true, 11);
  const ComplexVector x = random_pure(3, 12).amplitudes();
  SupPureOptions opt;
  opt.n_starts = 1;
  opt.seed = 0;
  opt.warm_start = x;
  EXPECT_GE(criterion_a_sup(phi, opt).lower_estimate, criterion_a_value(phi, PureState(x)));
}

TEST(CriterionA, ReportIsMonotoneAlongSchedule) {
  const CriterionReport rep = criterion_a_report(example1_family(kLn2), {16, 32, 64}, 2, 5);
  const auto& v = rep.values.at("sup_estimate");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_LE(v[0], v[1] + 1e-12);
  EXPECT_LE(v[1], v[2] + 1e-12);
  EXPECT_EQ(rep.criterion, 'a');
}

TEST(CriterionB, Example1Diverges) {
  const CriterionReport rep = criterion_b_report(example1_family(kLn2), {64, 256, 1024});
  const auto& sums = rep.values.at("norm_sq_partial_sum");
  double ref = 0.0;
  for (Index k = 1; k <= 1024; ++k) ref += example1_coefficient(kLn2, k);
  EXPECT_NEAR(sums.back(), ref, 1e-9);
  EXPECT_GT(sums.back(), 50.0);
  EXPECT_EQ(rep.verdict, Verdict::diverging_trend);
}

TEST(CriterionB, GeometricFamilyConverges) {
  const CriterionReport rep = criterion_b_report(geometric_family(2), {64, 128, 256});
  EXPECT_NEAR(rep.values.at("norm_sq_partial_sum").back(), 1.0, 1e-15);
  // -sum 2^-k ln 2^-k = 2 ln 2
  EXPECT_NEAR(rep.values.at("norm_sq_entropy").back(), 2.0 * kLn2, 1e-12);
  EXPECT_EQ(rep.verdict, Verdict::satisfied_at_truncation);
}

TEST(CriterionB, FiniteFamilySaturates) {
  const CriterionReport rep = criterion_b_report(finite_family(random_channel(3, 3, 2, true, 1)), {2, 4});
  EXPECT_EQ(rep.verdict, Verdict::satisfied_at_truncation);
}

TEST(CriterionC, Example1PinchingNormAndExpSum) {
  const std::vector<Index> schedule{64, 256, 1024};
  const CriterionReport rep = criterion_c_report(example1_family(kLn2), parse_h_sequence("2lnk"), schedule);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    EXPECT_NEAR(rep.values.at("weighted_gram_norm")[i], 2.0 * kLn2, 1e-12);
    EXPECT_NEAR(rep.values.at("exp_sum")[i], oracle::basel_partial(schedule[i]), 1e-12);
  }
  EXPECT_GE(rep.values.at("exp_sum").front(), 1.60);
  EXPECT_LE(rep.values.at("exp_sum").back(), 1.645);
  EXPECT_EQ(rep.verdict, Verdict::satisfied_at_truncation);
}

TEST(CriterionC, ConstantSequenceDoesNotCertify) {
  const CriterionReport rep = criterion_c_report(example1_family(kLn2), parse_h_sequence("const:0"), {64, 256, 1024});
  EXPECT_NEAR(rep.values.at("exp_sum").back(), 1024.0, 1e-9);
  EXPECT_NE(rep.verdict, Verdict::satisfied_at_truncation);
}

TEST(CriterionC, HSequenceParsing) {
  EXPECT_EQ(parse_h_sequence("2lnk").h(1), 0.0);
  EXPECT_NEAR(parse_h_sequence("2lnk").h(3), 2.0 * std::log(3.0), 1e-15);
  EXPECT_NEAR(parse_h_sequence("plnk:3").h(2), 3.0 * kLn2, 1e-15);
  EXPECT_EQ(parse_h_sequence("const:1.5").h(10), 1.5);
  EXPECT_THROW(parse_h_sequence("k^2"), DomainError);
  EXPECT_THROW(parse_h_sequence("plnk:abc"), DomainError);
}

TEST(Classify, KnownFamilies) {
  const std::vector<Index> schedule{8, 16};
  const ClassReport id = classify(identity_family(), schedule, 1, 1);
  EXPECT_EQ(id.tentative_class, TentativeClass::B);
  EXPECT_NEAR(id.sup_pure_entropy_trend.back(), 0.0, 1e-12);
  EXPECT_FALSE(id.caveat.empty());
  const ClassReport mx = classify(mixture_family(0.5), schedule, 1, 1);
  EXPECT_EQ(mx.tentative_class, TentativeClass::C);
  // Output entropy at the maximally mixed input grows with N for the mixture.
  EXPECT_LT(mx.output_entropy_trend.front(), mx.output_entropy_trend.back());
  const ClassReport dep = classify(depolarizing_family({0.5, 0.5}), schedule, 1, 1);
  EXPECT_EQ(dep.tentative_class, TentativeClass::A);
  EXPECT_NEAR(dep.output_entropy_trend.back(), kLn2, 1e-12);
}

TEST(Classify, ExchangeEntropyOfMaximallyMixedInput) {
  // Identity: the purification of I/d is maximally entangled, exchange entropy 0.
  EXPECT_NEAR(exchange_entropy_maximally_mixed(identity_channel(4)), 0.0, 1e-12);
  // Completely depolarizing to I/2 on a qubit: exchange entropy 2 ln 2.
  const KrausChannel dep = depolarizing_channel(DensityOperator::maximally_mixed(2), 2);
  EXPECT_NEAR(exchange_entropy_maximally_mixed(dep), 2.0 * kLn2, 1e-12);
}

}  // namespace
}  // namespace qentropy
