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

#include "qentropy/json_io.hpp"

namespace qentropy {
namespace {

TEST(Json, MatrixRoundTrip) {
  Rng rng(1);
  const ComplexMatrix m = ginibre(3, 2, rng);
  const Json j = matrix_to_json(m);
  EXPECT_EQ(j.at("rows").get<int>(), 3);
  EXPECT_EQ(j.at("data").size(), 6u);
  EXPECT_EQ(max_abs(matrix_from_json(Json::parse(j.dump())) - m), 0.0);
}

TEST(Json, MatrixAcceptsRealEntries) {
  const Json j = Json::parse(R"({"rows": 2, "cols": 2, "data": [0.5, 0, 0, [0.5, 0]]})");
  const ComplexMatrix m = matrix_from_json(j);
  EXPECT_EQ(m(0, 0), cplx(0.5, 0));
  EXPECT_EQ(m(1, 1), cplx(0.5, 0));
}

TEST(Json, MalformedInputsAreRejected) {
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows": 2, "cols": 2, "data": [1, 2, 3]})")), JsonFormatError);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows": 1, "cols": 1, "data": [[1, 2, 3]]})")), JsonFormatError);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"cols": 1, "data": [1]})")), JsonFormatError);
  EXPECT_THROW(channel_from_json(Json::parse(R"({"d_in": 1})")), JsonFormatError);
  EXPECT_THROW(family_from_json(Json::parse(R"({"family": "nope"})")), JsonFormatError);
  EXPECT_THROW(family_from_json(Json::parse(R"({"family": "example1"})")), JsonFormatError);
}

TEST(Json, ChannelRoundTripPreservesAction) {
  const KrausChannel phi = random_channel(3, 2, 3, true, 4);
  const KrausChannel back = channel_from_json(Json::parse(channel_to_json(phi).dump()));
  EXPECT_EQ(back.tp_mode(), TpMode::trace_preserving);
  const DensityOperator rho = random_density(3, 2, 5);
  EXPECT_LT(max_abs(apply(back, rho).matrix() - apply(phi, rho).matrix()), 1e-15);

  Json j = channel_to_json(random_channel(2, 2, 2, false, 6));
  EXPECT_EQ(j.at("tp_mode").get<std::string>(), "trace_non_increasing");
  j.erase("tp_mode");
  EXPECT_EQ(channel_from_json(j).tp_mode(), TpMode::trace_non_increasing);
  j["tp_mode"] = "bogus";
  EXPECT_THROW(channel_from_json(j), JsonFormatError);
}

TEST(Json, DensityFromBareOrWrappedMatrix) {
  const DensityOperator rho = random_density(2, 2, 3);
  const Json bare = matrix_to_json(rho.matrix());
  EXPECT_EQ(max_abs(density_from_json(bare).matrix() - rho.matrix()), 0.0);
  EXPECT_EQ(max_abs(density_from_json(Json{{"matrix", bare}}).matrix() - rho.matrix()), 0.0);
}

TEST(Json, FamilySpecs) {
  const FamilySpec e = family_from_json(Json::parse(R"({"family": "example1", "alpha": 0.693147, "N": 1024})"));
  EXPECT_EQ(e.family.name, "example1");
  EXPECT_EQ(e.n, 1024);
  EXPECT_EQ(family_from_json(Json::parse(R"({"family": "geometric", "d": 3})")).family.input_dim(5), 3);
  EXPECT_EQ(family_from_json(Json::parse(R"({"family": "depolarizing", "spectrum": [0.5, 0.5]})")).family.output_dim(9),
            2);
  EXPECT_EQ(family_from_json(Json::parse(R"({"family": "mixture", "p": 0.2})")).family.count(4), 5);
}

TEST(Json, ReportsSerializeWithSortedKeys) {
  const CriterionReport rep = criterion_b_report(geometric_family(1), {64, 128});
  const std::string a = to_json(rep).dump();
  EXPECT_EQ(a, to_json(criterion_b_report(geometric_family(1), {64, 128})).dump());
  EXPECT_LT(a.find("\"criterion\""), a.find("\"verdict\""));
  EXPECT_NE(a.find("satisfied_at_truncation"), std::string::npos);

  RoofOptions opt;
  opt.n_starts = 1;
  const Json r = to_json(eof(random_pure(4, 1).projector(), SubsystemSplit({2, 2}), opt));
  EXPECT_TRUE(r.at("discrete_ensemble").get<bool>());
  EXPECT_EQ(r.at("direction").get<std::string>(), "upper_bound_of_inf");
}

}  // namespace
}  // namespace qentropy
