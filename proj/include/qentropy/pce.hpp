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

// Output-entropy analysis of channels and Kraus families: pure-state suprema,
// the AFW state decomposition, continuity bounds, Kraus-family criteria and
// truncation diagnostics for the A/B/C classes.

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qentropy/channels.hpp"
#include "qentropy/detail/evaluator.hpp"
#include "qentropy/entropy.hpp"
#include "qentropy/parallel.hpp"

namespace qentropy {

class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline EntropyValue output_entropy(const KrausChannel& phi, const DensityOperator& rho) {
  if (rho.dim() != phi.d_in()) throw DimensionError("output_entropy: dimension mismatch");
  return von_neumann(apply(phi, rho));
}

namespace detail {

// Entropy of a positive matrix, skipping the eigensolver for diagonal input.
inline double entropy_of_positive(const ComplexMatrix& m) {
  const ComplexMatrix off = m - ComplexMatrix(m.diagonal().asDiagonal());
  if (max_abs(off) == 0.0) {
    const RealVector d = m.diagonal().real();
    std::vector<double> w(d.data(), d.data() + d.size());
    for (double& x : w) x = std::max(x, 0.0);
    return shannon_ext(w).value;
  }
  return EntropyValue::of(spectrum_entropy(eigvalsh(m))).value;
}

// Best of independent monotone ascents; the lowest start index wins ties.
template <class Run>
std::pair<std::size_t, SphereResult> best_of_starts(std::size_t n, unsigned threads, Run&& run) {
  std::vector<SphereResult> results(n);
  parallel_for(n, threads, [&](std::size_t s) { results[s] = run(s); });
  std::size_t best = 0;
  for (std::size_t s = 1; s < n; ++s) {
    if (results[s].value > results[best].value) best = s;
  }
  return {best, results[best]};
}

}  // namespace detail

struct SupPureOptions {
  int n_starts = 32;
  std::uint64_t seed = 0;
  int max_iter = 200;
  double grad_tol = 1e-7;
  unsigned threads = 1;
  // Extra start appended after the random ones (e.g. a witness from a smaller
  // truncation, zero padded).
  std::optional<ComplexVector> warm_start;
};

struct SupPureEstimate {
  double lower_estimate = 0.0;  // achieved by `witness`
  double upper_bound = 0.0;     // ln min(d_out, Choi rank)
  ComplexVector witness;
  int best_start = 0;
  int n_starts = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
};

inline SupPureEstimate sup_pure_output_entropy(const KrausChannel& phi, const SupPureOptions& opt = {}) {
  if (opt.n_starts < 0) throw DomainError("sup_pure_output_entropy: negative n_starts");
  const detail::OutputEntropyEvaluator ev(phi);
  const std::size_t n_random = static_cast<std::size_t>(opt.n_starts);
  const std::size_t n_total = n_random + (opt.warm_start ? 1 : 0);
  if (opt.warm_start && opt.warm_start->size() != phi.d_in()) {
    throw DimensionError("sup_pure_output_entropy: warm start has the wrong dimension");
  }
  if (n_total == 0) throw DomainError("sup_pure_output_entropy: no starts requested");
  auto [best, res] = detail::best_of_starts(n_total, opt.threads, [&](std::size_t s) {
    ComplexVector x0 = s < n_random ? random_pure(phi.d_in(), opt.seed + s).amplitudes()
                                    : *opt.warm_start;
    return detail::sphere_ascent([&](const ComplexMatrix& x) { return ev.value(x); },
                                 [&](const ComplexMatrix& x) { return ev.value_grad(x); },
                                 std::move(x0), opt.max_iter, opt.grad_tol);
  });
  SupPureEstimate out;
  out.lower_estimate = EntropyValue::of(res.value).value;
  out.upper_bound = std::log(static_cast<double>(std::min(phi.d_out(), choi_rank(phi))));
  out.witness = res.x;
  out.best_start = static_cast<int>(best);
  out.n_starts = static_cast<int>(n_total);
  out.seed = opt.seed;
  out.iterations = res.iterations;
  return out;
}

inline SupPureEstimate sup_pure_output_entropy(const KrausChannel& phi, int n_starts, std::uint64_t seed) {
  SupPureOptions opt;
  opt.n_starts = n_starts;
  opt.seed = seed;
  return sup_pure_output_entropy(phi, opt);
}

// ---------------------------------------------------------------------------

struct AFWDecomposition {
  double epsilon = 0.0;
  DensityOperator omega_star = DensityOperator::zero(1);
  DensityOperator tau_plus = DensityOperator::zero(1);
  DensityOperator tau_minus = DensityOperator::zero(1);
  // Largest entrywise defect among the identities
  // (1+e) w = rho + [sigma-rho]_+ = rho + e tau_- = sigma + e tau_+.
  double residual = 0.0;
};

inline AFWDecomposition afw_decompose(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("afw_decompose: dimension mismatch");
  if (std::abs(rho.trace() - 1.0) > 1e-9 || std::abs(sigma.trace() - 1.0) > 1e-9) {
    throw DomainError("afw_decompose: states must have unit trace");
  }
  const HermitianOperator diff(rho.matrix() - sigma.matrix());
  const double tn = trace_norm(diff);
  if (tn <= 1e-10) throw DegenerateInputError("afw_decompose: rho and sigma coincide");
  const auto [plus, minus] = jordan_parts(diff);
  AFWDecomposition out;
  out.epsilon = 0.5 * tn;
  const double e = out.epsilon;
  out.tau_plus = DensityOperator::from_trusted(plus.matrix() / plus.trace());
  out.tau_minus = DensityOperator::from_trusted(minus.matrix() / minus.trace());
  out.omega_star = DensityOperator::from_trusted((rho.matrix() + minus.matrix()) / (1.0 + e));
  const ComplexMatrix lhs = (1.0 + e) * out.omega_star.matrix();
  out.residual = std::max({max_abs(lhs - rho.matrix() - minus.matrix()),
                           max_abs(lhs - rho.matrix() - e * out.tau_minus.matrix()),
                           max_abs(lhs - sigma.matrix() - e * out.tau_plus.matrix())});
  return out;
}

// e (C + ln(r1 + r2 - 1)) + (1 + e) h2(e / (1 + e))
inline double continuity_bound(double c, Index rank_rho, Index rank_sigma, double epsilon) {
  if (!(c >= 0.0)) throw DomainError("continuity_bound: C must be nonnegative");
  if (rank_rho < 1 || rank_sigma < 1) throw DomainError("continuity_bound: ranks must be positive");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("continuity_bound: epsilon outside [0, 1]");
  if (epsilon == 0.0) return 0.0;
  return epsilon * (c + std::log(static_cast<double>(rank_rho + rank_sigma - 1))) +
         (1.0 + epsilon) * binary(epsilon / (1.0 + epsilon));
}

// ---------------------------------------------------------------------------
// Kraus-family criteria.

enum class Verdict { satisfied_at_truncation, diverging_trend, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied_at_truncation: return "satisfied_at_truncation";
    case Verdict::diverging_trend: return "diverging_trend";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct CriterionReport {
  char criterion = 'b';
  std::string family;
  std::vector<Index> schedule;
  std::map<std::string, std::vector<double>> values;
  Verdict verdict = Verdict::inconclusive;
  double threshold = 10.0;
  std::string note;
};

// S({||V_k phi||^2}_k) for the Kraus operators of a channel.
inline double criterion_a_value(const KrausChannel& phi, const PureState& psi) {
  if (psi.dim() != phi.d_in()) throw DimensionError("criterion_a_value: dimension mismatch");
  std::vector<double> q;
  q.reserve(phi.size());
  for (const auto& v : phi.kraus()) q.push_back(v.apply(psi.amplitudes()).squaredNorm());
  return shannon_ext(q).value;
}

inline double criterion_a_value(const KrausFamily& fam, const PureState& psi, Index n) {
  if (psi.dim() != fam.input_dim(n)) throw DimensionError("criterion_a_value: dimension mismatch");
  return criterion_a_value(fam.truncate(n), psi);
}

inline SupPureEstimate criterion_a_sup(const KrausChannel& phi, const SupPureOptions& opt = {}) {
  if (opt.n_starts < 1) throw DomainError("criterion_a_sup: need at least one start");
  auto value = [&](const ComplexMatrix& x) {
    std::vector<double> q;
    q.reserve(phi.size());
    for (const auto& v : phi.kraus()) q.push_back(v.apply(ComplexVector(x.col(0))).squaredNorm());
    return shannon_ext(q).value;
  };
  // d S / d conj(x) = sum_k ln(Q / q_k) V_k^dagger V_k x
  auto value_grad = [&](const ComplexMatrix& x) {
    const ComplexVector xv = x.col(0);
    std::vector<ComplexVector> vx;
    std::vector<double> q;
    double total = 0.0;
    for (const auto& v : phi.kraus()) {
      vx.push_back(v.apply(xv));
      q.push_back(vx.back().squaredNorm());
      total += q.back();
    }
    detail::ValueGrad out;
    out.value = shannon_ext(q).value;
    out.grad = ComplexMatrix::Zero(phi.d_in(), 1);
    if (!(total > 0)) return out;
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (q[k] > kClipTol * total) {
        out.grad.col(0) += std::log(total / q[k]) * phi.kraus()[k].apply_adjoint(vx[k]);
      }
    }
    return out;
  };
  const std::size_t n = static_cast<std::size_t>(opt.n_starts) + (opt.warm_start ? 1 : 0);
  auto [best, res] = detail::best_of_starts(n, opt.threads, [&](std::size_t s) {
    ComplexVector x0 = s < static_cast<std::size_t>(opt.n_starts)
                           ? random_pure(phi.d_in(), opt.seed + s).amplitudes()
                           : *opt.warm_start;
    return detail::sphere_ascent(value, value_grad, std::move(x0), opt.max_iter, opt.grad_tol);
  });
  SupPureEstimate out;
  out.lower_estimate = res.value;
  out.upper_bound = std::log(static_cast<double>(phi.size()));
  out.witness = res.x;
  out.best_start = static_cast<int>(best);
  out.n_starts = static_cast<int>(n);
  out.seed = opt.seed;
  out.iterations = res.iterations;
  return out;
}

inline double criterion_a_sup(const KrausFamily& fam, Index n, int n_starts, std::uint64_t seed) {
  SupPureOptions opt;
  opt.n_starts = n_starts;
  opt.seed = seed;
  return criterion_a_sup(fam.truncate(n), opt).lower_estimate;
}

namespace detail {
inline bool diverging(const std::vector<double>& v, double threshold);
inline bool saturated(const KrausFamily& fam, const std::vector<Index>& schedule);
}  // namespace detail

// Sup estimates of criterion a) along the schedule, warm-started from the
// zero-padded witness of the previous truncation so the sequence is monotone
// whenever the family's leading operators do not depend on N.
inline CriterionReport criterion_a_report(const KrausFamily& fam, const std::vector<Index>& schedule, int n_starts,
                                          std::uint64_t seed, double threshold = 10.0) {
  CriterionReport rep;
  rep.criterion = 'a';
  rep.family = fam.name;
  rep.schedule = schedule;
  rep.threshold = threshold;
  auto& sups = rep.values["sup_estimate"];
  auto& caps = rep.values["ln_kraus_count"];
  std::optional<ComplexVector> warm;
  for (Index n : schedule) {
    const KrausChannel phi = fam.truncate(n);
    SupPureOptions opt;
    opt.n_starts = n_starts;
    opt.seed = seed;
    if (warm && warm->size() <= phi.d_in()) {
      ComplexVector w = ComplexVector::Zero(phi.d_in());
      w.head(warm->size()) = *warm;
      opt.warm_start = w;
    }
    const SupPureEstimate est = criterion_a_sup(phi, opt);
    warm = est.witness;
    sups.push_back(est.lower_estimate);
    caps.push_back(est.upper_bound);
  }
  if (detail::saturated(fam, schedule)) {
    rep.verdict = Verdict::satisfied_at_truncation;
    rep.note = "finite Kraus set; bounded by the log of the operator count";
  } else if (detail::diverging(sups, threshold)) {
    rep.verdict = Verdict::diverging_trend;
    rep.note = "trend over the schedule, not a proof of divergence";
  } else {
    rep.note = "sup estimates are lower bounds; boundedness is not decidable from a finite schedule";
  }
  return rep;
}

namespace detail {

inline double kraus_norm_sq(const KrausFamily& fam, Index k, Index n) {
  if (fam.norm_sq) return fam.norm_sq(k);
  const double s = fam.generator(k, n).op_norm();
  return s * s;
}

inline bool stabilized(const std::vector<double>& v) {
  if (v.size() < 2) return false;
  const double a = v[v.size() - 2], b = v.back();
  return std::abs(b - a) <= 1e-12 * std::max(1.0, std::abs(b));
}

// Above the threshold with positive, nondecreasing increments.
inline bool diverging(const std::vector<double>& v, double threshold) {
  if (v.size() < 2 || !(v.back() > threshold)) return false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  for (std::size_t i = 2; i < v.size(); ++i) {
    if (v[i] - v[i - 1] < v[i - 1] - v[i - 2]) return false;
  }
  return true;
}

inline bool saturated(const KrausFamily& fam, const std::vector<Index>& schedule) {
  return fam.finite_count && !schedule.empty() && fam.count(schedule.back()) >= *fam.finite_count;
}

}  // namespace detail

inline CriterionReport criterion_b_report(const KrausFamily& fam, const std::vector<Index>& schedule,
                                          double threshold = 10.0) {
  CriterionReport rep;
  rep.criterion = 'b';
  rep.family = fam.name;
  rep.schedule = schedule;
  rep.threshold = threshold;
  auto& sums = rep.values["norm_sq_partial_sum"];
  auto& ents = rep.values["norm_sq_entropy"];
  auto& deficits = rep.values["truncation_deficit"];
  for (Index n : schedule) {
    deficits.push_back(fam.truncate(n).completeness_deficit());
    std::vector<double> w;
    const Index m = fam.count(n);
    w.reserve(static_cast<std::size_t>(m));
    for (Index k = 1; k <= m; ++k) w.push_back(detail::kraus_norm_sq(fam, k, n));
    double s = 0.0;
    for (double x : w) s += x;
    sums.push_back(s);
    ents.push_back(shannon_ext(w).value);
  }
  if (detail::saturated(fam, schedule)) {
    rep.verdict = Verdict::satisfied_at_truncation;
    rep.note = "finite Kraus set; sums are exact";
  } else if (detail::diverging(sums, threshold) || detail::diverging(ents, threshold)) {
    rep.verdict = Verdict::diverging_trend;
    rep.note = "trend over the schedule, not a proof of divergence";
  } else if (detail::stabilized(sums) && detail::stabilized(ents)) {
    rep.verdict = Verdict::satisfied_at_truncation;
    rep.note = "both sequences stable to 1e-12 over the last schedule step";
  } else {
    rep.note = "no stable or diverging trend detected";
  }
  return rep;
}

// Named weight sequences k -> h_k for criterion c.
struct HSequence {
  std::string name;
  std::function<double(Index)> h;
  // Upper bound on sum_{k > N} exp(-h_k); +inf when unknown or divergent.
  std::function<double(Index)> exp_tail;
};

inline HSequence h_power_log(double p, std::string name) {
  if (!(p >= 0.0)) throw DomainError("h-sequence: p must be nonnegative");
  HSequence s;
  s.name = std::move(name);
  s.h = [p](Index k) { return p * std::log(static_cast<double>(k)); };
  s.exp_tail = [p](Index n) {
    if (p <= 1.0) return std::numeric_limits<double>::infinity();
    return std::pow(static_cast<double>(n), 1.0 - p) / (p - 1.0);
  };
  return s;
}

inline HSequence h_constant(double c, std::string name) {
  if (!(c >= 0.0)) throw DomainError("h-sequence: constant must be nonnegative");
  HSequence s;
  s.name = std::move(name);
  s.h = [c](Index) { return c; };
  s.exp_tail = [](Index) { return std::numeric_limits<double>::infinity(); };
  return s;
}

// "2lnk", "plnk:<p>" or "const:<c>".
inline HSequence parse_h_sequence(const std::string& spec) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw DomainError("h-sequence: bad number in '" + spec + "'");
    return v;
  };
  if (spec == "2lnk") return h_power_log(2.0, spec);
  if (spec.rfind("plnk:", 0) == 0) return h_power_log(number(spec.substr(5)), spec);
  if (spec.rfind("const:", 0) == 0) return h_constant(number(spec.substr(6)), spec);
  throw DomainError("h-sequence: unknown rule '" + spec + "'");
}

namespace detail {

// Operator norm of sum_k h_k V_k^dagger V_k, accumulated sparsely when possible.
inline double weighted_gram_norm(const KrausFamily& fam, const HSequence& h, Index n) {
  const Index d = fam.input_dim(n);
  std::map<std::pair<Index, Index>, cplx> sparse;
  ComplexMatrix dense;
  for (Index k = 1; k <= fam.count(n); ++k) {
    const double hk = h.h(k);
    if (hk == 0.0) continue;
    const KrausOperator v = fam.generator(k, n);
    if (v.is_sparse()) {
      for (const auto& a : v.entries()) {
        for (const auto& b : v.entries()) {
          if (a.row == b.row) sparse[{a.col, b.col}] += hk * std::conj(a.value) * b.value;
        }
      }
    } else {
      if (dense.size() == 0) dense = ComplexMatrix::Zero(d, d);
      dense.noalias() += hk * v.dense_matrix().adjoint() * v.dense_matrix();
    }
  }
  bool diagonal = dense.size() == 0;
  for (const auto& [key, val] : sparse) {
    if (key.first != key.second && val != cplx(0.0)) diagonal = false;
  }
  if (diagonal) {
    double mx = 0.0;
    for (const auto& [key, val] : sparse) mx = std::max(mx, std::abs(val));
    return mx;
  }
  if (dense.size() == 0) dense = ComplexMatrix::Zero(d, d);
  for (const auto& [key, val] : sparse) dense(key.first, key.second) += val;
  return eigvalsh(hermitize(dense), 0.0).cwiseAbs().maxCoeff();
}

}  // namespace detail

inline CriterionReport criterion_c_report(const KrausFamily& fam, const HSequence& h,
                                          const std::vector<Index>& schedule, double threshold = 10.0) {
  CriterionReport rep;
  rep.criterion = 'c';
  rep.family = fam.name;
  rep.schedule = schedule;
  rep.threshold = threshold;
  auto& norms = rep.values["weighted_gram_norm"];
  auto& sums = rep.values["exp_sum"];
  auto& tails = rep.values["exp_tail_bound"];
  for (Index n : schedule) {
    double s = 0.0;
    for (Index k = 1; k <= fam.count(n); ++k) {
      const double hk = h.h(k);
      if (hk < 0.0) throw DomainError("criterion_c_report: h_k must be nonnegative");
      s += std::exp(-hk);
    }
    norms.push_back(detail::weighted_gram_norm(fam, h, n));
    sums.push_back(s);
    tails.push_back(detail::saturated(fam, {n}) ? 0.0 : h.exp_tail(fam.count(n)));
  }
  const bool finite = detail::saturated(fam, schedule);
  const bool tail_ok = !tails.empty() && std::isfinite(tails.back());
  if (finite) {
    rep.verdict = Verdict::satisfied_at_truncation;
    rep.note = "finite Kraus set";
  } else if (detail::stabilized(norms) && tail_ok) {
    rep.verdict = Verdict::satisfied_at_truncation;
    rep.note = "norm stable; exponential sum has a finite analytic tail";
  } else if (detail::diverging(sums, threshold) || detail::diverging(norms, threshold)) {
    rep.verdict = Verdict::diverging_trend;
    rep.note = "trend over the schedule, not a proof of divergence";
  } else {
    rep.note = "no stable or diverging trend detected";
  }
  return rep;
}

// ---------------------------------------------------------------------------

enum class TentativeClass { A, B, C, unresolved };

inline const char* to_string(TentativeClass c) {
  switch (c) {
    case TentativeClass::A: return "A";
    case TentativeClass::B: return "B";
    case TentativeClass::C: return "C";
    case TentativeClass::unresolved: return "unresolved";
  }
  return "?";
}

struct ClassReport {
  std::string family;
  std::vector<Index> schedule;
  std::vector<double> sup_pure_entropy_trend;
  std::vector<double> sup_pure_upper_bound;
  std::vector<double> output_entropy_trend;    // at the maximally mixed input
  std::vector<double> exchange_entropy_trend;  // at the maximally mixed input
  TentativeClass tentative_class = TentativeClass::unresolved;
  std::string caveat;
  int n_starts = 0;
  std::uint64_t seed = 0;
};

// Entropy of the complementary output at rho = I/d, from the Kraus Gram matrix.
inline double exchange_entropy_maximally_mixed(const KrausChannel& phi) {
  const auto m = static_cast<Index>(phi.size());
  ComplexMatrix g(m, m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = a; b < m; ++b) {
      g(a, b) = hs_inner(phi.kraus()[b], phi.kraus()[a]) / static_cast<double>(phi.d_in());
      g(b, a) = std::conj(g(a, b));
    }
  }
  return detail::entropy_of_positive(g);
}

inline ClassReport classify(const KrausFamily& fam, const std::vector<Index>& schedule, int n_starts,
                            std::uint64_t seed, unsigned threads = 1) {
  ClassReport rep;
  rep.family = fam.name;
  rep.schedule = schedule;
  rep.n_starts = n_starts;
  rep.seed = seed;
  std::optional<ComplexVector> warm;
  Index prev_dim = 0;
  for (Index n : schedule) {
    const KrausChannel phi = fam.truncate(n);
    SupPureOptions opt;
    opt.n_starts = n_starts;
    opt.seed = seed;
    opt.threads = threads;
    if (warm && prev_dim <= phi.d_in()) {
      ComplexVector w = ComplexVector::Zero(phi.d_in());
      w.head(prev_dim) = *warm;
      opt.warm_start = w;
    }
    const SupPureEstimate sp = sup_pure_output_entropy(phi, opt);
    warm = sp.witness;
    prev_dim = phi.d_in();
    rep.sup_pure_entropy_trend.push_back(sp.lower_estimate);
    rep.sup_pure_upper_bound.push_back(sp.upper_bound);
    const ComplexMatrix mixed = ComplexMatrix::Identity(phi.d_in(), phi.d_in()) / static_cast<double>(phi.d_in());
    rep.output_entropy_trend.push_back(detail::entropy_of_positive(apply_matrix(phi, mixed)));
    rep.exchange_entropy_trend.push_back(exchange_entropy_maximally_mixed(phi));
  }
  if (fam.known_class) {
    switch (*fam.known_class) {
      case ChannelClass::A: rep.tentative_class = TentativeClass::A; break;
      case ChannelClass::B: rep.tentative_class = TentativeClass::B; break;
      case ChannelClass::C: rep.tentative_class = TentativeClass::C; break;
    }
    rep.caveat =
        "label taken from the built-in family definition; every finite truncation has bounded "
        "output and exchange entropy, so the trends are diagnostics only";
  } else {
    rep.caveat =
        "class membership is a property of the infinite family and cannot be inferred from "
        "finite truncations; trends are reported without a label";
  }
  return rep;
}

}  // namespace qentropy
