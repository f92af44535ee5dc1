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

#pragma once

// JSON encodings. Matrices are {"rows", "cols", "data": [[re, im], ...]} in
// row-major order; channels are {"d_in", "d_out", "tp_mode", "kraus": [...]}.
// Objects use sorted keys, so dumps are byte-stable.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qentropy/channels.hpp"
#include "qentropy/pce.hpp"
#include "qentropy/roof.hpp"

namespace qentropy {

using Json = nlohmann::json;

class JsonFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Json matrix_to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  try {
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    const Json& data = j.at("data");
    if (rows < 0 || cols < 0 || !data.is_array() || static_cast<Index>(data.size()) != rows * cols) {
      throw JsonFormatError("matrix: data length does not equal rows * cols");
    }
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index c = 0; c < cols; ++c) {
        const Json& e = data.at(static_cast<std::size_t>(i * cols + c));
        if (e.is_number()) {
          m(i, c) = cplx(e.get<double>(), 0.0);
        } else {
          if (!e.is_array() || e.size() != 2) throw JsonFormatError("matrix: entries must be [re, im]");
          m(i, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
      }
    }
    return m;
  } catch (const Json::exception& ex) {
    throw JsonFormatError(std::string("matrix: ") + ex.what());
  }
}

inline Json channel_to_json(const KrausChannel& phi) {
  Json kraus = Json::array();
  for (const auto& v : phi.kraus()) kraus.push_back(matrix_to_json(v.to_dense()));
  return Json{{"d_in", phi.d_in()}, {"d_out", phi.d_out()}, {"tp_mode", to_string(phi.tp_mode())},
              {"kraus", std::move(kraus)}};
}

inline KrausChannel channel_from_json(const Json& j) {
  try {
    const Index d_in = j.at("d_in").get<Index>();
    const Index d_out = j.at("d_out").get<Index>();
    std::vector<KrausOperator> ops;
    for (const Json& m : j.at("kraus")) ops.emplace_back(matrix_from_json(m));
    if (!j.contains("tp_mode")) return KrausChannel::infer(d_in, d_out, std::move(ops));
    const std::string mode = j.at("tp_mode").get<std::string>();
    if (mode == to_string(TpMode::trace_preserving)) {
      return KrausChannel(d_in, d_out, std::move(ops), TpMode::trace_preserving);
    }
    if (mode == to_string(TpMode::trace_non_increasing)) {
      return KrausChannel(d_in, d_out, std::move(ops), TpMode::trace_non_increasing);
    }
    throw JsonFormatError("channel: unknown tp_mode '" + mode + "'");
  } catch (const Json::exception& ex) {
    throw JsonFormatError(std::string("channel: ") + ex.what());
  }
}

// State given either as a bare matrix or as {"matrix": ...}.
inline DensityOperator density_from_json(const Json& j) {
  return DensityOperator(matrix_from_json(j.contains("matrix") ? j.at("matrix") : j));
}

struct FamilySpec {
  KrausFamily family;
  Index n = 0;  // truncation, 0 when absent
};

// {"family": "example1", "alpha": 0.5, "N": 256}; also identity, geometric
// ("d"), depolarizing ("spectrum") and mixture ("p").
inline FamilySpec family_from_json(const Json& j) {
  try {
    const std::string name = j.at("family").get<std::string>();
    FamilySpec out{identity_family(), j.value("N", Index{0})};
    if (name == "identity") {
      out.family = identity_family();
    } else if (name == "example1") {
      out.family = example1_family(j.at("alpha").get<double>());
    } else if (name == "geometric") {
      out.family = geometric_family(j.value("d", Index{1}));
    } else if (name == "depolarizing") {
      out.family = depolarizing_family(j.at("spectrum").get<std::vector<double>>());
    } else if (name == "mixture") {
      out.family = mixture_family(j.at("p").get<double>());
    } else {
      throw JsonFormatError("family: unknown family '" + name + "'");
    }
    if (out.n < 0) throw JsonFormatError("family: N must be positive");
    return out;
  } catch (const Json::exception& ex) {
    throw JsonFormatError(std::string("family: ") + ex.what());
  }
}

inline Json vector_to_json(const ComplexVector& v) { return matrix_to_json(ComplexMatrix(v)); }

inline Json ensemble_to_json(const Ensemble& e) {
  Json members = Json::array();
  for (const auto& m : e.members()) members.push_back(matrix_to_json(m.matrix()));
  return Json{{"weights", e.weights()}, {"members", std::move(members)}};
}

inline Json to_json(const SupPureEstimate& s) {
  return Json{{"lower_estimate", s.lower_estimate}, {"upper_bound", s.upper_bound},
              {"witness", vector_to_json(s.witness)}, {"best_start", s.best_start},
              {"n_starts", s.n_starts}, {"seed", s.seed}, {"iterations", s.iterations}};
}

inline Json to_json(const CriterionReport& r) {
  Json values = Json::object();
  for (const auto& [k, v] : r.values) values[k] = v;
  return Json{{"criterion", std::string(1, r.criterion)},
              {"family", r.family},
              {"schedule", r.schedule},
              {"values", std::move(values)},
              {"verdict", to_string(r.verdict)},
              {"threshold", r.threshold},
              {"note", r.note}};
}

inline Json to_json(const ClassReport& r) {
  return Json{{"family", r.family},
              {"schedule", r.schedule},
              {"sup_pure_entropy_trend", r.sup_pure_entropy_trend},
              {"sup_pure_upper_bound", r.sup_pure_upper_bound},
              {"output_entropy_trend", r.output_entropy_trend},
              {"exchange_entropy_trend", r.exchange_entropy_trend},
              {"tentative_class", to_string(r.tentative_class)},
              {"caveat", r.caveat},
              {"n_starts", r.n_starts},
              {"seed", r.seed}};
}

inline Json to_json(const RoofResult& r) {
  return Json{{"value", r.value},
              {"direction", to_string(r.direction)},
              {"ensemble", ensemble_to_json(r.ensemble)},
              {"ensemble_cap", r.ensemble_cap},
              {"member_rank", r.member_rank},
              {"n_starts", r.n_starts},
              {"seed", r.seed},
              {"iterations", r.iterations},
              {"best_start", r.best_start},
              {"discrete_ensemble", true}};
}

}  // namespace qentropy
