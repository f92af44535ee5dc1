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

// Command-line front end. Exit status: 0 all checks pass, 1 failures (or a
// criterion verdict other than satisfied), 2 usage or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qentropy/qentropy.hpp"

namespace {

using namespace qentropy;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

// Argument that is either a path to a JSON file or inline JSON text.
Json load_json_argument(const std::string& arg) {
  std::string text = arg;
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || (arg[first] != '{' && arg[first] != '[')) {
    std::ifstream in(arg);
    if (!in) throw JsonFormatError("cannot read '" + arg + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw JsonFormatError(std::string("invalid JSON: ") + e.what());
  }
}

std::vector<Index> to_index_list(const std::vector<long long>& v) {
  return std::vector<Index>(v.begin(), v.end());
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw JsonFormatError("cannot write '" + path + "'");
  out << text;
}

struct VerifyArgs {
  SuiteConfig cfg;
  std::vector<long long> dims{4};
  std::vector<long long> schedule{64, 256, 1024};
  std::string format = "json";
};

int run_verify(VerifyArgs& a) {
  a.cfg.dims = to_index_list(a.dims);
  a.cfg.schedule = to_index_list(a.schedule);
  const SuiteReport rep = run_suite(a.cfg);
  const std::string text = a.format == "json" ? to_json(rep).dump(2) + "\n" : to_text(rep);
  emit(text, a.cfg.output_path);
  if (!a.cfg.output_path.empty()) std::cerr << to_text(rep);
  return rep.failures == 0 ? kPass : kFail;
}

struct AnalyzeArgs {
  std::string input;
  std::string criterion;
  std::string h_seq = "2lnk";
  std::vector<long long> schedule{64, 256, 1024};
  int starts = 4;
  std::uint64_t seed = 42;
  double threshold = 10.0;
};

int run_analyze(const AnalyzeArgs& a) {
  const Json in = load_json_argument(a.input);
  KrausFamily fam = identity_family();
  std::vector<Index> schedule = to_index_list(a.schedule);
  if (in.contains("family")) {
    const FamilySpec spec = family_from_json(in);
    fam = spec.family;
    if (spec.n > 0) {
      std::vector<Index> kept;
      for (Index n : schedule) {
        if (n <= spec.n) kept.push_back(n);
      }
      if (kept.empty() || kept.back() != spec.n) kept.push_back(spec.n);
      schedule = kept;
    }
  } else {
    const KrausChannel phi = channel_from_json(in);
    fam = finite_family(phi, "channel");
    schedule = {static_cast<Index>(phi.size())};
  }
  for (Index n : schedule) {
    if (n < 2 && !fam.finite_count) throw DomainError("schedule entries must be at least 2");
  }

  Json out = Json::object();
  out["schedule"] = schedule;
  out["seed"] = a.seed;
  bool all_satisfied = true;
  auto record = [&](const CriterionReport& r) {
    out[std::string("criterion_") + r.criterion] = to_json(r);
    all_satisfied = all_satisfied && r.verdict == Verdict::satisfied_at_truncation;
  };
  if (a.criterion.empty() || a.criterion == "a") {
    if (!a.criterion.empty()) record(criterion_a_report(fam, schedule, a.starts, a.seed, a.threshold));
  }
  if (a.criterion.empty() || a.criterion == "b") record(criterion_b_report(fam, schedule, a.threshold));
  if (a.criterion.empty() || a.criterion == "c") {
    record(criterion_c_report(fam, parse_h_sequence(a.h_seq), schedule, a.threshold));
  }
  if (a.criterion.empty()) out["class"] = to_json(classify(fam, schedule, a.starts, a.seed));
  std::cout << out.dump(2) << "\n";
  return all_satisfied ? kPass : kFail;
}

struct EofArgs {
  std::string state;
  std::vector<long long> split;
  long long m = 0;
  int starts = 32;
  std::uint64_t seed = 42;
  int iterations = 64;
};

int run_eof(const EofArgs& a) {
  const DensityOperator rho = density_from_json(load_json_argument(a.state));
  if (a.split.size() != 2) throw DimensionError("--split needs two dimensions dA,dB");
  RoofOptions opt;
  opt.m = static_cast<Index>(a.m);
  opt.n_starts = a.starts;
  opt.seed = a.seed;
  opt.max_iter = a.iterations;
  const RoofResult res = eof(rho, SubsystemSplit(to_index_list(a.split)), opt);
  std::cout << to_json(res).dump(2) << "\n";
  return kPass;
}

struct BoundArgs {
  double c = 0.0;
  std::vector<long long> ranks;
  double eps = 0.0;
};

int run_bound(const BoundArgs& a) {
  if (a.ranks.size() != 2) throw DomainError("--ranks needs two values r1,r2");
  const double v = continuity_bound(a.c, static_cast<Index>(a.ranks[0]), static_cast<Index>(a.ranks[1]), a.eps);
  std::printf("%.6f\n", v);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qentropy: entropy-preservation analysis of quantum channels"};
  app.require_subcommand(1);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run a seeded property suite");
  v->add_option("--suite", verify.cfg.suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
  v->add_option("--dim", verify.dims, "Dimension(s), comma separated")->delimiter(',');
  v->add_option("--trials", verify.cfg.trials, "Trials per dimension")->check(CLI::PositiveNumber);
  v->add_option("--seed", verify.cfg.seed, "Base seed");
  v->add_option("--tol", verify.cfg.tol, "Inequality slack")->check(CLI::PositiveNumber);
  v->add_option("--opt-tol", verify.cfg.opt_tol, "Slack for optimizer-dependent equalities")
      ->check(CLI::PositiveNumber);
  v->add_option("--schedule", verify.schedule, "Truncation schedule")->delimiter(',');
  v->add_option("--starts", verify.cfg.n_starts, "Optimizer starts")->check(CLI::PositiveNumber);
  v->add_option("--threads", verify.cfg.threads, "Worker threads (0 = hardware)");
  v->add_option("--format", verify.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  v->add_option("--out", verify.cfg.output_path, "Write the report to a file");

  AnalyzeArgs analyze;
  auto* ch = app.add_subcommand("channel", "Channel and Kraus-family analysis");
  ch->require_subcommand(1);
  auto* an = ch->add_subcommand("analyze", "Criteria a/b/c and class diagnostics");
  an->add_option("input", analyze.input, "Channel JSON file, or inline family/channel JSON")->required();
  an->add_option("--criterion", analyze.criterion, "a, b or c")->check(CLI::IsMember({"a", "b", "c"}));
  an->add_option("--h-seq", analyze.h_seq, "2lnk, plnk:<p> or const:<c>");
  an->add_option("--schedule", analyze.schedule, "Truncation schedule")->delimiter(',');
  an->add_option("--starts", analyze.starts, "Optimizer starts")->check(CLI::PositiveNumber);
  an->add_option("--seed", analyze.seed, "Base seed");
  an->add_option("--threshold", analyze.threshold, "Divergence threshold in nats");

  EofArgs eof_args;
  auto* rf = app.add_subcommand("roof", "Convex-roof quantities");
  rf->require_subcommand(1);
  auto* e = rf->add_subcommand("eof", "Entanglement of formation");
  e->add_option("state", eof_args.state, "State JSON file or inline matrix JSON")->required();
  e->add_option("--split", eof_args.split, "dA,dB")->delimiter(',')->required();
  e->add_option("--m", eof_args.m, "Ensemble size cap (default dim^2)");
  e->add_option("--starts", eof_args.starts, "Optimizer starts")->check(CLI::PositiveNumber);
  e->add_option("--seed", eof_args.seed, "Base seed");
  e->add_option("--iterations", eof_args.iterations, "Iterations per start");

  BoundArgs bound;
  auto* bd = app.add_subcommand("bound", "Closed-form bounds");
  bd->require_subcommand(1);
  auto* cb = bd->add_subcommand("continuity", "Continuity bound for finite-rank states");
  cb->add_option("--C", bound.c, "Upper bound on pure-state output entropy")->required();
  cb->add_option("--ranks", bound.ranks, "r1,r2")->delimiter(',')->required();
  cb->add_option("--eps", bound.eps, "Half trace distance")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*v) return run_verify(verify);
    if (*an) return run_analyze(analyze);
    if (*e) return run_eof(eof_args);
    if (*cb) return run_bound(bound);
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
