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

#include "qentropy/harness.hpp"

namespace qentropy {
namespace {

SuiteConfig small(const std::string& suite) {
  SuiteConfig c;
  c.suite = suite;
  c.dims = {2, 4};
  c.trials = 6;
  c.n_starts = 2;
  return c;
}

class EverySuite : public ::testing::TestWithParam<std::string> {};

TEST_P(EverySuite, PassesAndIsReproducible) {
  const SuiteConfig cfg = small(GetParam());
  const SuiteReport rep = run_suite(cfg);
  EXPECT_GT(rep.cases.size(), 0u);
  EXPECT_EQ(rep.failures, 0u) << to_text(rep);
  SuiteConfig par = cfg;
  par.threads = 3;
  EXPECT_EQ(to_json(rep).dump(), to_json(run_suite(par)).dump());
}

INSTANTIATE_TEST_SUITE_P(Harness, EverySuite, ::testing::ValuesIn(suite_names()));

TEST(Harness, ConfigValidation) {
  SuiteConfig c = small("nope");
  EXPECT_THROW(run_suite(c), UnknownSuiteError);
  c = small("inequalities");
  c.trials = 0;
  EXPECT_THROW(run_suite(c), DomainError);
  c = small("inequalities");
  c.schedule = {1};
  EXPECT_THROW(run_suite(c), DomainError);
}

TEST(Harness, CasesCarryReplayableSeeds) {
  const SuiteReport rep = run_suite(small("inequalities"));
  for (std::size_t i = 0; i < rep.cases.size(); ++i) {
    EXPECT_EQ(rep.cases[i].index, i);
    EXPECT_EQ(rep.cases[i].digest.size(), 16u);
  }
  // Trial seeds derive from the base seed and the (dimension, trial) position.
  EXPECT_EQ(rep.cases.front().seed, mix_seed(42, 0));
  EXPECT_EQ(rep.cases.back().seed, mix_seed(42, 11));
}

TEST(Harness, SeedChangesReport) {
  SuiteConfig a = small("continuity"), b = a;
  b.seed = 43;
  EXPECT_NE(to_json(run_suite(a)).dump(), to_json(run_suite(b)).dump());
}

TEST(Harness, TextReportSummarizesChecks) {
  const std::string text = to_text(run_suite(small("monotonicity")));
  EXPECT_NE(text.find("suite monotonicity"), std::string::npos);
  EXPECT_NE(text.find("monotonicity_cptp"), std::string::npos);
}

TEST(DirectSumConstruction, TracePreservingMapHasEmptyExtraBlock) {
  const KrausChannel phi = random_channel(3, 3, 2, true, 1);
  const AppendixCheck c =
      appendix_construction_check(phi, random_density(2, 2, 2), random_density(3, 3, 3), random_density(3, 3, 4));
  EXPECT_NEAR(c.lhs_sum, c.phi_term, 1e-12);
  EXPECT_NEAR(c.direct, c.phi_term, 1e-9);
  EXPECT_LE(c.direct, c.bound + 1e-8);
}

TEST(DirectSumConstruction, HalfIdentity) {
  // Phi = identity / 2 loses half the trace: Psi(rho) = tau / 2 for every rho.
  std::vector<KrausOperator> ops{KrausOperator(ComplexMatrix(ComplexMatrix::Identity(3, 3) / std::sqrt(2.0)))};
  const KrausChannel phi(3, 3, ops, TpMode::trace_non_increasing);
  const DensityOperator rho = random_density(3, 3, 5), sigma = random_density(3, 3, 6);
  const AppendixCheck c = appendix_construction_check(phi, random_density(2, 2, 7), rho, sigma);
  EXPECT_NEAR(c.lhs_sum, c.phi_term, 1e-12);
  EXPECT_NEAR(c.phi_term, 0.5 * relative_entropy(rho, sigma).value, 1e-9);
  EXPECT_NEAR(c.direct, c.lhs_sum, 1e-8);
}

TEST(DirectSumConstruction, RandomOperationsSatisfyChain) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const KrausChannel phi = random_channel(3, 3, 1 + s % 4, false, s);
    const AppendixCheck c = appendix_construction_check(phi, random_density(2, 1 + s % 2, s + 1),
                                                        random_density(3, 3, s + 2), random_density(3, 3, s + 3));
    EXPECT_NEAR(c.direct, c.lhs_sum, 1e-8);
    EXPECT_LE(c.phi_term, c.direct + 1e-8);
    EXPECT_LE(c.direct, c.bound + 1e-8);
  }
}

}  // namespace
}  // namespace qentropy
