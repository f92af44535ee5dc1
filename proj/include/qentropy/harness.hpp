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

// Seeded property suites. Each trial derives its seed from the suite seed and
// its position, so any case can be replayed alone; trials may run on several
// threads and are reported in index order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qentropy/channels.hpp"
#include "qentropy/entropy.hpp"
#include "qentropy/json_io.hpp"
#include "qentropy/parallel.hpp"
#include "qentropy/pce.hpp"
#include "qentropy/roof.hpp"

namespace qentropy {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"inequalities", "continuity", "monotonicity", "complementary",
                                              "criteria",     "roof",       "eof",          "appendix"};
  return names;
}

class UnknownSuiteError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SuiteConfig {
  std::string suite;
  std::vector<Index> dims{4};
  int trials = 100;
  std::uint64_t seed = 42;
  double tol = 1e-8;      // slack for inequalities
  double opt_tol = 1e-6;  // slack for optimizer-dependent equalities
  std::vector<Index> schedule{64, 256, 1024};
  int n_starts = 4;       // starts for optimizer-based cases
  std::string output_path;
  unsigned threads = 1;   // does not affect results

  void validate() const {
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
      throw UnknownSuiteError("unknown suite '" + suite + "'");
    }
    if (trials < 1) throw DomainError("SuiteConfig: trials must be at least 1");
    if (!(tol > 0.0) || !(opt_tol > 0.0)) throw DomainError("SuiteConfig: tolerances must be positive");
    if (dims.empty()) throw DomainError("SuiteConfig: no dimensions");
    for (Index d : dims) {
      if (d < 1) throw DomainError("SuiteConfig: dimensions must be positive");
    }
    for (Index n : schedule) {
      if (n < 2) throw DomainError("SuiteConfig: schedule entries must be at least 2");
    }
    if (n_starts < 1) throw DomainError("SuiteConfig: n_starts must be at least 1");
  }
};

struct SuiteCase {
  std::size_t index = 0;
  std::string check;
  Index dim = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string digest;
  std::map<std::string, double> measured;
  std::map<std::string, double> bounds;
  bool pass = false;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<SuiteCase> cases;
  std::size_t failures = 0;

  std::size_t count(std::string_view check) const {
    return static_cast<std::size_t>(
        std::count_if(cases.begin(), cases.end(), [&](const SuiteCase& c) { return c.check == check; }));
  }
  std::size_t failures_of(std::string_view check) const {
    return static_cast<std::size_t>(std::count_if(
        cases.begin(), cases.end(), [&](const SuiteCase& c) { return c.check == check && !c.pass; }));
  }
};

// FNV-1a over the raw bytes of the inputs of a case.
class Digest {
 public:
  Digest& add(double x) {
    bytes(&x, sizeof x);
    return *this;
  }
  Digest& add(const ComplexMatrix& m) {
    const Index dims[2] = {m.rows(), m.cols()};
    bytes(dims, sizeof dims);
    bytes(m.data(), sizeof(cplx) * static_cast<std::size_t>(m.size()));
    return *this;
  }
  Digest& add(const ComplexVector& v) { return add(ComplexMatrix(v)); }
  Digest& add(const DensityOperator& r) { return add(r.matrix()); }
  Digest& add(const KrausChannel& phi) {
    for (const auto& v : phi.kraus()) add(v.to_dense());
    return *this;
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

 private:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= c[i];
      h_ *= 1099511628211ULL;
    }
  }
  std::uint64_t h_ = 1469598103934665603ULL;
};

// Block-diagonal additivity check for Phi' = Phi (+) Psi with
// Psi(rho) = Tr(rho - Phi(rho)) tau.
struct AppendixCheck {
  double lhs_sum = 0.0;  // H(Phi rho || Phi sigma) + H(Psi rho || Psi sigma)
  double direct = 0.0;   // H(Phi' rho || Phi' sigma)
  double bound = 0.0;    // H(rho || sigma)
  double phi_term = 0.0; // H(Phi rho || Phi sigma)
};

inline AppendixCheck appendix_construction_check(const KrausChannel& phi, const DensityOperator& tau,
                                                 const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != phi.d_in() || sigma.dim() != phi.d_in()) {
    throw DimensionError("appendix_construction_check: dimension mismatch");
  }
  if (std::abs(tau.trace() - 1.0) > 1e-9) throw DomainError("appendix_construction_check: tau must have unit trace");
  auto extend = [&](const DensityOperator& x) {
    const ComplexMatrix out = apply_matrix(phi, x.matrix());
    const double lost = x.trace() - detail::real_trace(out);
    if (lost < -1e-9) throw DomainError("appendix_construction_check: Phi increases the trace");
    const Index a = out.rows(), c = tau.dim();
    ComplexMatrix block = ComplexMatrix::Zero(a + c, a + c);
    block.topLeftCorner(a, a) = out;
    block.bottomRightCorner(c, c) = std::max(lost, 0.0) * tau.matrix();
    return std::make_pair(DensityOperator::from_trusted(block), std::max(lost, 0.0));
  };
  const auto [rho_ext, lost_rho] = extend(rho);
  const auto [sigma_ext, lost_sigma] = extend(sigma);
  const EntropyValue phi_term = relative_entropy(apply(phi, rho), apply(phi, sigma));
  const EntropyValue psi_term =
      relative_entropy(DensityOperator::from_trusted(lost_rho * tau.matrix()),
                       DensityOperator::from_trusted(lost_sigma * tau.matrix()));
  AppendixCheck out;
  out.phi_term = phi_term.value;
  out.lhs_sum = phi_term.value + psi_term.value;
  out.direct = relative_entropy(rho_ext, sigma_ext).value;
  out.bound = relative_entropy(rho, sigma).value;
  return out;
}

namespace detail {

inline Index uniform_int(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<double> random_probability(Rng& rng, Index n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(static_cast<std::size_t>(n));
  double s = 0.0;
  for (double& x : p) s += (x = e(rng) + 1e-3);
  for (double& x : p) x /= s;
  return p;
}

inline double vn(const DensityOperator& r) { return von_neumann(r).value; }
inline double vn(const ComplexMatrix& m) { return von_neumann(DensityOperator::from_trusted(m)).value; }

struct CaseSink {
  Index dim;
  int trial;
  std::uint64_t seed;
  std::vector<SuiteCase> cases;

  void add(std::string check, const Digest& dg, std::map<std::string, double> measured,
           std::map<std::string, double> bounds, bool pass) {
    SuiteCase c;
    c.check = std::move(check);
    c.dim = dim;
    c.trial = trial;
    c.seed = seed;
    c.digest = dg.hex();
    c.measured = std::move(measured);
    c.bounds = std::move(bounds);
    c.pass = pass;
    cases.push_back(std::move(c));
  }
};

// Smallest factor a >= 2 with d = a * b and b >= 2; 0 when d has none.
inline Index bipartite_factor(Index d) {
  for (Index a = 2; a * a <= d; ++a) {
    if (d % a == 0) return a;
  }
  return 0;
}

inline void inequalities_trial(CaseSink& out, const SuiteConfig& cfg) {
  const Index d = out.dim;
  Rng rng(out.seed);
  const double tol = cfg.tol;
  {
    // Mixture of subnormalized operators in the unit ball.
    const Index k = uniform_int(rng, 2, 5);
    const std::vector<double> p = random_probability(rng, k);
    Digest dg;
    ComplexMatrix avg = ComplexMatrix::Zero(d, d);
    double rhs = shannon_ext(p).value;
    for (Index i = 0; i < k; ++i) {
      const double c = uniform_real(rng, 0.05, 1.0);
      const DensityOperator r = random_density(d, uniform_int(rng, 1, d), mix_seed(out.seed, 100 + i)).scaled(c);
      dg.add(r).add(p[i]);
      avg += p[i] * r.matrix();
      rhs += p[i] * vn(r);
    }
    const double lhs = vn(avg);
    out.add("mixture_entropy_bound", dg, {{"lhs", lhs}}, {{"rhs", rhs}}, lhs <= rhs + tol);
  }
  {
    // Sum of positive operators with arbitrary traces.
    const Index k = uniform_int(rng, 2, 5);
    Digest dg;
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    std::vector<double> traces;
    double rhs = 0.0;
    for (Index i = 0; i < k; ++i) {
      const double t = uniform_real(rng, 0.1, 3.0);
      const DensityOperator r = random_density(d, uniform_int(rng, 1, d), mix_seed(out.seed, 200 + i)).scaled(t);
      dg.add(r);
      sum += r.matrix();
      traces.push_back(r.trace());
      rhs += vn(r);
    }
    rhs += shannon_ext(traces).value;
    const double lhs = vn(sum);
    out.add("sum_entropy_bound", dg, {{"lhs", lhs}}, {{"rhs", rhs}}, lhs <= rhs + tol);
  }
  {
    // Mutually orthogonal supports: equality.
    const ComplexMatrix u = random_unitary(d, mix_seed(out.seed, 300));
    const Index k = uniform_int(rng, 1, std::min<Index>(d, 4));
    std::vector<Index> cuts{0};
    {
      std::vector<Index> pool;
      for (Index i = 1; i < d; ++i) pool.push_back(i);
      std::shuffle(pool.begin(), pool.end(), rng);
      std::vector<Index> chosen(pool.begin(), pool.begin() + (k - 1));
      std::sort(chosen.begin(), chosen.end());
      cuts.insert(cuts.end(), chosen.begin(), chosen.end());
      cuts.push_back(d);
    }
    Digest dg;
    dg.add(u);
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    std::vector<double> traces;
    double rhs = 0.0;
    for (Index i = 0; i < k; ++i) {
      const Index lo = cuts[i], bd = cuts[i + 1] - cuts[i];
      const double t = uniform_real(rng, 0.1, 3.0);
      const DensityOperator a = random_density(bd, uniform_int(rng, 1, bd), mix_seed(out.seed, 310 + i));
      const ComplexMatrix blk = u.middleCols(lo, bd);
      const ComplexMatrix r = t * blk * a.matrix() * blk.adjoint();
      dg.add(r);
      sum += r;
      traces.push_back(t);
      rhs += vn(r);
    }
    rhs += shannon_ext(traces).value;
    const double lhs = vn(sum);
    out.add("orthogonal_sum_equality", dg, {{"lhs", lhs}, {"gap", rhs - lhs}}, {{"rhs", rhs}},
            std::abs(lhs - rhs) <= tol);
  }
  {
    const double p = uniform_real(rng, 0.01, 0.99);
    const DensityOperator a = random_density(d, uniform_int(rng, 1, d), mix_seed(out.seed, 400));
    const DensityOperator b = random_density(d, uniform_int(rng, 1, d), mix_seed(out.seed, 401));
    const double mid = vn(ComplexMatrix(p * a.matrix() + (1.0 - p) * b.matrix()));
    const double lo = p * vn(a) + (1.0 - p) * vn(b);
    const double hi = lo + binary(p);
    Digest dg;
    dg.add(a).add(b).add(p);
    out.add("concavity_sandwich", dg, {{"mixture", mid}}, {{"lower", lo}, {"upper", hi}},
            lo <= mid + tol && mid <= hi + tol);
  }
  {
    const DensityOperator a =
        random_density(d, uniform_int(rng, 1, d), mix_seed(out.seed, 500)).scaled(uniform_real(rng, 0.1, 3.0));
    const DensityOperator b = random_density(d, d, mix_seed(out.seed, 501)).scaled(uniform_real(rng, 0.1, 3.0));
    const EntropyValue r = relative_entropy(a, b);
    Digest dg;
    dg.add(a).add(b);
    out.add("relative_entropy_nonnegative", dg, {{"value", r.value}}, {{"lower", 0.0}},
            r.finite && r.value >= -1e-9);
  }
  if (const Index fa = bipartite_factor(d); fa > 0) {
    const SubsystemSplit split({fa, d / fa});
    const DensityOperator r = random_density(d, uniform_int(rng, 1, d), mix_seed(out.seed, 600));
    const double hab = vn(r), ha = vn(partial_trace(r, split, {0})), hb = vn(partial_trace(r, split, {1}));
    Digest dg;
    dg.add(r);
    out.add("subadditivity", dg, {{"h_ab", hab}}, {{"h_a_plus_h_b", ha + hb}}, hab <= ha + hb + tol);
    out.add("triangle_inequality", dg, {{"abs_h_a_minus_h_b", std::abs(ha - hb)}}, {{"h_ab", hab}},
            std::abs(ha - hb) <= hab + tol);
  }
  {
    const DensityOperator r = random_density(d, uniform_int(rng, 1, d), mix_seed(out.seed, 700));
    const std::vector<double> w = random_probability(rng, d);
    double worst = 0.0;
    const double h = vn(r), s = shannon_ext(w).value;
    for (double c : {0.1, 0.5, 2.0, 10.0}) {
      worst = std::max(worst, std::abs(vn(r.scaled(c)) - c * h));
      std::vector<double> cw(w);
      for (double& x : cw) x *= c;
      worst = std::max(worst, std::abs(shannon_ext(cw).value - c * s));
    }
    Digest dg;
    dg.add(r);
    for (double x : w) dg.add(x);
    out.add("homogeneity", dg, {{"max_deviation", worst}}, {{"limit", 1e-9}}, worst <= 1e-9);
  }
}

inline void continuity_trial(CaseSink& out, const SuiteConfig& cfg) {
  const Index d = out.dim;
  Rng rng(out.seed);
  const double tol = cfg.tol;
  const Index max_rank = std::min<Index>(d, 4);
  const Index m = uniform_int(rng, 1, 4);
  const KrausChannel phi = random_channel(d, d, m, true, mix_seed(out.seed, 1));
  const double c = std::log(static_cast<double>(m));

  DensityOperator rho = random_density(d, 1, 0);
  DensityOperator sigma = rho;
  if (out.trial % 2 == 0) {
    rho = random_density(d, uniform_int(rng, 1, max_rank), mix_seed(out.seed, 2));
    sigma = random_density(d, uniform_int(rng, 1, max_rank), mix_seed(out.seed, 3));
  } else {
    // Perturbation pair; rank sigma <= rank rho + rank omega <= 4.
    const Index half = std::max<Index>(1, max_rank / 2);
    rho = random_density(d, uniform_int(rng, 1, half), mix_seed(out.seed, 2));
    const DensityOperator omega = random_density(d, uniform_int(rng, 1, half), mix_seed(out.seed, 3));
    const double t = std::pow(10.0, uniform_real(rng, -3.0, -0.3));
    sigma = DensityOperator::from_trusted((1.0 - t) * rho.matrix() + t * omega.matrix());
  }
  Digest dg;
  dg.add(phi).add(rho).add(sigma);

  const double h_rho = output_entropy(phi, rho).value;
  const double h_sigma = output_entropy(phi, sigma).value;
  const Index r1 = numerical_rank(rho.matrix()), r2 = numerical_rank(sigma.matrix());
  const AFWDecomposition afw = afw_decompose(rho, sigma);
  const double e = afw.epsilon;
  const double bound = continuity_bound(c, r1, r2, std::min(e, 1.0));
  const double diff = std::abs(h_rho - h_sigma);
  out.add("continuity_bound", dg,
          {{"abs_difference", diff}, {"epsilon", e}, {"ratio", bound > 0 ? diff / bound : 0.0}},
          {{"bound", bound}, {"C", c}, {"rank_rho", static_cast<double>(r1)}, {"rank_sigma", static_cast<double>(r2)}},
          diff <= bound + tol);

  const Index rp = numerical_rank(afw.tau_plus.matrix()), rm = numerical_rank(afw.tau_minus.matrix());
  const double tr_dev = std::max(std::abs(afw.tau_plus.trace() - 1.0), std::abs(afw.tau_minus.trace() - 1.0));
  out.add("afw_identities", dg,
          {{"residual", afw.residual}, {"trace_deviation", tr_dev}, {"rank_tau_plus", static_cast<double>(rp)},
           {"rank_tau_minus", static_cast<double>(rm)}},
          {{"residual_limit", 1e-9}, {"rank_limit", static_cast<double>(r1 + r2 - 1)}},
          afw.residual <= 1e-9 && tr_dev <= 1e-9 && rp <= r1 + r2 - 1 && rm <= r1 + r2 - 1);

  const double p = e / (1.0 + e);
  const double hp = output_entropy(phi, afw.tau_plus).value, hm = output_entropy(phi, afw.tau_minus).value;
  const double l1 = (1.0 - p) * (h_rho - h_sigma), r1v = p * (hp - hm) + binary(p);
  const double l2 = (1.0 - p) * (h_sigma - h_rho), r2v = p * (hm - hp) + binary(p);
  out.add("afw_double_inequality", dg, {{"lhs_forward", l1}, {"lhs_backward", l2}},
          {{"rhs_forward", r1v}, {"rhs_backward", r2v}}, l1 <= r1v + tol && l2 <= r2v + tol);

  // H_Phi(rho) <= sum_i p_i H_Phi(phi_i) + H(rho) <= C + H(rho) for unit trace rho.
  const SpectralDecomposition sd = spectral_decompose(rho.hermitian());
  double spectral_avg = 0.0;
  for (Index i = 0; i < sd.eigenvalues.size(); ++i) {
    if (sd.eigenvalues(i) <= 0) continue;
    const ComplexVector v = sd.eigenvectors.col(i);
    spectral_avg += sd.eigenvalues(i) * output_entropy(phi, DensityOperator::from_trusted(v * v.adjoint())).value;
  }
  const double h_in = vn(rho);
  out.add("output_entropy_upper_bound", dg, {{"output_entropy", h_rho}},
          {{"spectral_bound", spectral_avg + h_in}, {"choi_rank_bound", c * rho.trace() + h_in}},
          h_rho <= spectral_avg + h_in + tol && h_rho <= c * rho.trace() + h_in + tol);

  // Pure inputs through a channel of Choi rank m2 in {2, 3, 4}.
  const Index m2 = uniform_int(rng, 2, 4);
  const KrausChannel chi = random_channel(d, d, m2, true, mix_seed(out.seed, 4));
  const PureState psi = random_pure(d, mix_seed(out.seed, 5));
  const double hpure = output_entropy(chi, psi.projector()).value;
  Digest dg2;
  dg2.add(chi).add(psi.amplitudes());
  out.add("choi_rank_pure_bound", dg2, {{"output_entropy", hpure}},
          {{"ln_m", std::log(static_cast<double>(m2))}}, hpure <= std::log(static_cast<double>(m2)) + tol);
}

inline KrausChannel drop_last_kraus(const KrausChannel& phi) {
  std::vector<KrausOperator> ops(phi.kraus().begin(), phi.kraus().end() - 1);
  return KrausChannel(phi.d_in(), phi.d_out(), std::move(ops), TpMode::trace_non_increasing);
}

// Trace non-increasing operation: alternately a scaled channel or a channel
// with one Kraus operator removed.
inline KrausChannel random_operation(Index d, Rng& rng, std::uint64_t seed) {
  if (uniform_int(rng, 0, 1) == 0) return random_channel(d, d, uniform_int(rng, 1, 4), false, seed);
  return drop_last_kraus(random_channel(d, d, uniform_int(rng, 2, 4), true, seed));
}

inline void monotonicity_trial(CaseSink& out, const SuiteConfig& cfg) {
  const Index d = out.dim;
  Rng rng(out.seed);
  const DensityOperator rho = random_density(d, uniform_int(rng, 1, d), mix_seed(out.seed, 1));
  const DensityOperator sigma = random_density(d, d, mix_seed(out.seed, 2));
  const double bound = relative_entropy(rho, sigma).value;
  {
    const KrausChannel phi = random_channel(d, d, uniform_int(rng, 1, 4), true, mix_seed(out.seed, 3));
    const double lhs = relative_entropy(apply(phi, rho), apply(phi, sigma)).value;
    Digest dg;
    dg.add(phi).add(rho).add(sigma);
    out.add("monotonicity_cptp", dg, {{"output_relative_entropy", lhs}}, {{"input_relative_entropy", bound}},
            lhs <= bound + cfg.tol);
  }
  {
    const KrausChannel phi = random_operation(d, rng, mix_seed(out.seed, 4));
    const double lhs = relative_entropy(apply(phi, rho), apply(phi, sigma)).value;
    Digest dg;
    dg.add(phi).add(rho).add(sigma);
    out.add("monotonicity_trace_non_increasing", dg, {{"output_relative_entropy", lhs}},
            {{"input_relative_entropy", bound}}, lhs <= bound + cfg.tol);
    const DensityOperator tau =
        random_density(uniform_int(rng, 1, 3), 1, mix_seed(out.seed, 5)).normalized();
    const AppendixCheck ac = appendix_construction_check(phi, tau, rho, sigma);
    dg.add(tau);
    out.add("dilation_additivity", dg, {{"sum_of_blocks", ac.lhs_sum}}, {{"direct", ac.direct}},
            std::abs(ac.lhs_sum - ac.direct) <= cfg.tol);
  }
}

inline void appendix_trial(CaseSink& out, const SuiteConfig& cfg) {
  const Index d = out.dim;
  Rng rng(out.seed);
  const DensityOperator rho = random_density(d, uniform_int(rng, 1, d), mix_seed(out.seed, 1));
  const DensityOperator sigma = random_density(d, d, mix_seed(out.seed, 2));
  const Index dt = uniform_int(rng, 1, 3);
  const DensityOperator tau = random_density(dt, uniform_int(rng, 1, dt), mix_seed(out.seed, 3));
  std::string variant;
  KrausChannel phi = identity_channel(d);
  switch (out.trial % 3) {
    case 0:
      variant = "random_operation";
      phi = random_operation(d, rng, mix_seed(out.seed, 4));
      break;
    case 1:
      variant = "trace_preserving";
      phi = random_channel(d, d, uniform_int(rng, 1, 4), true, mix_seed(out.seed, 4));
      break;
    default:
      variant = "half_identity";
      phi = KrausChannel(d, d, {KrausOperator(ComplexMatrix(ComplexMatrix::Identity(d, d) * std::sqrt(0.5)))},
                         TpMode::trace_non_increasing);
      break;
  }
  const AppendixCheck ac = appendix_construction_check(phi, tau, rho, sigma);
  Digest dg;
  dg.add(phi).add(tau).add(rho).add(sigma);
  const bool additive = std::abs(ac.lhs_sum - ac.direct) <= cfg.tol;
  const bool chain = ac.phi_term <= ac.direct + cfg.tol && ac.direct <= ac.bound + cfg.tol;
  out.add("appendix_" + variant, dg,
          {{"sum_of_blocks", ac.lhs_sum}, {"direct", ac.direct}, {"phi_term", ac.phi_term}},
          {{"input_relative_entropy", ac.bound}}, additive && chain);
}

inline void complementary_trial(CaseSink& out, const SuiteConfig& cfg) {
  const Index d = out.dim;
  Rng rng(out.seed);
  const Index m = uniform_int(rng, 1, 4);
  // Trace preservation needs m * d_out >= d; a Choi rank of m needs d * d_out >= m.
  const Index d_out = uniform_int(rng, std::max((d + m - 1) / m, (m + d - 1) / d), d + 1);
  const KrausChannel phi = random_channel(d, d_out, m, true, mix_seed(out.seed, 1));
  const KrausChannel comp = complementary(phi);
  {
    const PureState psi = random_pure(d, mix_seed(out.seed, 2));
    const double a = output_entropy(phi, psi.projector()).value;
    const double b = output_entropy(comp, psi.projector()).value;
    const double c = output_entropy(complementary(comp), psi.projector()).value;
    Digest dg;
    dg.add(phi).add(psi.amplitudes());
    out.add("pure_state_coincidence", dg, {{"output_entropy", a}}, {{"complementary_output_entropy", b}},
            std::abs(a - b) <= cfg.tol);
    out.add("double_complement", dg, {{"output_entropy", a}}, {{"double_complement_output_entropy", c}},
            std::abs(a - c) <= cfg.tol);
  }
  {
    const DensityOperator rho = random_density(d, uniform_int(rng, 1, d), mix_seed(out.seed, 3));
    const PureState hat = purify(rho);
    const Index r = hat.dim() / d;
    const double exchange = output_entropy(comp, rho).value;
    const double joint = output_entropy(tensor_channels(phi, identity_channel(r)), hat.projector()).value;
    Digest dg;
    dg.add(phi).add(rho);
    out.add("exchange_entropy_purification", dg, {{"exchange_entropy", exchange}},
            {{"extended_output_entropy", joint}}, std::abs(exchange - joint) <= cfg.tol);
  }
}

inline std::vector<Index> schedule_up_to(const std::vector<Index>& s, Index cap) {
  std::vector<Index> out;
  for (Index n : s) {
    if (n <= cap) out.push_back(n);
  }
  if (out.empty() && !s.empty()) out.push_back(std::min(s.front(), cap));
  return out;
}

inline void criteria_fixed(CaseSink& out, const SuiteConfig& cfg) {
  const double alpha = std::numbers::ln2;
  const KrausFamily ex1 = example1_family(alpha);
  Digest dg;
  dg.add(alpha);
  {
    const CriterionReport rep = criterion_c_report(ex1, parse_h_sequence("2lnk"), cfg.schedule);
    double worst = 0.0, lo = 1e300, hi = -1e300;
    for (double v : rep.values.at("weighted_gram_norm")) worst = std::max(worst, std::abs(v - 2.0 * alpha));
    for (double v : rep.values.at("exp_sum")) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.add("example1_criterion_c", dg, {{"max_norm_deviation", worst}, {"exp_sum_min", lo}, {"exp_sum_max", hi}},
            {{"norm", 2.0 * alpha}, {"exp_sum_lower", 1.60}, {"exp_sum_upper", 1.645}},
            worst <= 1e-12 && lo >= 1.60 && hi <= 1.645 && rep.verdict == Verdict::satisfied_at_truncation);
  }
  {
    const CriterionReport rep = criterion_b_report(ex1, cfg.schedule);
    const double last = rep.values.at("norm_sq_partial_sum").back();
    // Partial sum of alpha / ln k up to the largest truncation, as the trend target.
    out.add("example1_criterion_b", dg, {{"partial_sum", last}},
            {{"threshold", rep.threshold}}, rep.verdict == Verdict::diverging_trend);
  }
  {
    const CriterionReport rep = criterion_c_report(ex1, parse_h_sequence("const:0"), cfg.schedule);
    out.add("example1_constant_h_not_satisfied", dg, {{"exp_sum", rep.values.at("exp_sum").back()}},
            {{"threshold", rep.threshold}}, rep.verdict == Verdict::diverging_trend);
  }
  {
    const CriterionReport rep = criterion_b_report(geometric_family(2), cfg.schedule);
    out.add("geometric_criterion_b", dg,
            {{"partial_sum", rep.values.at("norm_sq_partial_sum").back()},
             {"entropy", rep.values.at("norm_sq_entropy").back()}},
            {{"sum_limit", 1.0}}, rep.verdict == Verdict::satisfied_at_truncation);
  }
  {
    const std::vector<Index> small = schedule_up_to(cfg.schedule, 64);
    const ClassReport id = classify(identity_family(), small, 1, out.seed);
    const ClassReport mx = classify(mixture_family(0.5), small, 1, out.seed);
    out.add("identity_class", dg, {{"sup_pure", id.sup_pure_entropy_trend.back()}}, {{"upper", 0.0}},
            id.tentative_class == TentativeClass::B && !id.caveat.empty() &&
                id.sup_pure_entropy_trend.back() <= cfg.tol);
    out.add("mixture_class", dg, {{"sup_pure", mx.sup_pure_entropy_trend.back()}},
            {{"upper", mx.sup_pure_upper_bound.back()}},
            mx.tentative_class == TentativeClass::C && !mx.caveat.empty());
  }
}

inline void criteria_trial(CaseSink& out, const SuiteConfig& cfg) {
  if (out.trial == 0) criteria_fixed(out, cfg);
  const Index d = out.dim;
  Rng rng(out.seed);
  const Index m = uniform_int(rng, 1, 4);
  const KrausChannel phi = random_channel(d, d, m, true, mix_seed(out.seed, 1));
  const PureState psi = random_pure(d, mix_seed(out.seed, 2));
  Digest dg;
  dg.add(phi).add(psi.amplitudes());
  const double a = criterion_a_value(phi, psi);
  out.add("criterion_a_bound", dg, {{"value", a}}, {{"ln_kraus_count", std::log(static_cast<double>(m))}},
          a <= std::log(static_cast<double>(m)) + cfg.tol);
  SupPureOptions opt;
  opt.n_starts = cfg.n_starts;
  opt.seed = out.seed;
  opt.warm_start = psi.amplitudes();
  const SupPureEstimate sp = sup_pure_output_entropy(phi, opt);
  const double at_psi = output_entropy(phi, psi.projector()).value;
  out.add("sup_pure_bounds", dg, {{"lower_estimate", sp.lower_estimate}, {"value_at_sample", at_psi}},
          {{"upper_bound", sp.upper_bound}},
          sp.lower_estimate <= sp.upper_bound + cfg.tol && at_psi <= sp.lower_estimate + cfg.tol);
  const SupPureEstimate sa = criterion_a_sup(phi, opt);
  out.add("criterion_a_sup_dominates", dg, {{"sup_estimate", sa.lower_estimate}}, {{"value_at_sample", a}},
          a <= sa.lower_estimate + cfg.tol);
}

inline RoofOptions roof_options(const SuiteConfig& cfg, std::uint64_t seed, Index m) {
  RoofOptions opt;
  opt.m = m;
  opt.n_starts = cfg.n_starts;
  opt.seed = seed;
  return opt;
}

inline void roof_trial(CaseSink& out, const SuiteConfig& cfg) {
  const Index d = out.dim;
  Rng rng(out.seed);
  const Index r = uniform_int(rng, 1, d);
  const DensityOperator rho = random_density(d, r, mix_seed(out.seed, 1));
  const double h = vn(rho);
  {
    const Index m = r + uniform_int(rng, 0, 3);
    Rng prng(mix_seed(out.seed, 2));
    const ComplexMatrix params = ginibre(m, r, prng);
    const Ensemble ens = ensemble_from_isometry(rho, m, params);
    const double defect = ensemble_defect(ens);
    Digest dg;
    dg.add(rho).add(params);
    out.add("defect_pure_decomposition", dg, {{"defect", defect}}, {{"entropy", h}}, std::abs(defect - h) <= cfg.tol);
  }
  {
    RoofOptions opt = roof_options(cfg, out.seed, 2);
    opt.n_starts = 1;
    const RoofResult res = k_approximator(EntropyFunctional::input_entropy(), rho, r, opt);
    Digest dg;
    dg.add(rho);
    out.add("k_approximator_full_rank", dg, {{"value", res.value}, {"members", static_cast<double>(res.ensemble.size())}},
            {{"entropy", h}}, std::abs(res.value - h) <= 1e-9);
  }
  {
    const KrausChannel phi = out.trial % 2 == 0
                                 ? random_channel(d, d, uniform_int(rng, 1, 4), true, mix_seed(out.seed, 3))
                                 : random_operation(d, rng, mix_seed(out.seed, 3));
    const Index k = uniform_int(rng, 2, 5);
    const std::vector<double> w = random_probability(rng, k);
    std::vector<DensityOperator> members;
    Digest dg;
    dg.add(phi);
    for (Index i = 0; i < k; ++i) {
      members.push_back(random_density(d, uniform_int(rng, 1, d), mix_seed(out.seed, 10 + i)));
      dg.add(members.back()).add(w[i]);
    }
    const auto [lhs, rhs] = ensemblewise_monotonicity_gap(phi, Ensemble(w, members));
    out.add("ensemblewise_monotonicity", dg, {{"lhs", lhs}}, {{"rhs", rhs}}, lhs <= rhs + cfg.tol);
  }
}

inline void eof_trial(CaseSink& out, const SuiteConfig& cfg) {
  Rng rng(out.seed);
  {
    const Index d = out.dim;
    const Index fa = bipartite_factor(d) > 0 ? bipartite_factor(d) : 1;
    const SubsystemSplit split({fa, d / fa});
    const PureState psi = random_pure(d, mix_seed(out.seed, 1));
    const DensityOperator rho = psi.projector();
    const double expect = vn(partial_trace(rho, split, {0}));
    const RoofResult res = eof(rho, split, roof_options(cfg, out.seed, 0));
    Digest dg;
    dg.add(psi.amplitudes());
    out.add("eof_pure_state", dg, {{"eof", res.value}}, {{"reduced_entropy", expect}},
            std::abs(res.value - expect) <= 1e-9);
  }
  {
    const SubsystemSplit split({2, 2});
    const Index r = uniform_int(rng, 2, 4);
    const DensityOperator rho = random_density(4, r, mix_seed(out.seed, 2));
    const RoofResult res = eof(rho, split, roof_options(cfg, out.seed, 16));
    // The first start is the spectral ensemble and the search is monotone.
    const KrausChannel tr_b = partial_trace_channel(2, 2, true);
    const detail::SpectralFactor sf = detail::spectral_factor(rho);
    const Ensemble spectral = detail::ensemble_from_groups(sf.b, detail::spectral_start(16, sf.rank), 16, 1);
    const double spectral_value = ensemble_average_entropy(spectral, EntropyFunctional::output_entropy(tr_b));
    const double reeval = ensemble_average_entropy(res.ensemble, EntropyFunctional::output_entropy(tr_b));
    Digest dg;
    dg.add(rho);
    out.add("eof_mixed_two_qubit", dg, {{"eof", res.value}, {"reevaluated", reeval}},
            {{"lower", 0.0}, {"spectral_ensemble", spectral_value}, {"upper", std::log(2.0)}},
            res.value >= -1e-9 && res.value <= spectral_value + cfg.tol && res.value <= std::log(2.0) + cfg.tol &&
                std::abs(reeval - res.value) <= 1e-9);
  }
}

}  // namespace detail

inline SuiteReport run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  using Trial = void (*)(detail::CaseSink&, const SuiteConfig&);
  static const std::map<std::string, Trial> table{
      {"inequalities", detail::inequalities_trial}, {"continuity", detail::continuity_trial},
      {"monotonicity", detail::monotonicity_trial}, {"complementary", detail::complementary_trial},
      {"criteria", detail::criteria_trial},         {"roof", detail::roof_trial},
      {"eof", detail::eof_trial},                   {"appendix", detail::appendix_trial}};
  const Trial trial_fn = table.at(cfg.suite);

  std::vector<detail::CaseSink> sinks;
  for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
    for (int t = 0; t < cfg.trials; ++t) {
      const std::uint64_t pos = di * static_cast<std::uint64_t>(cfg.trials) + static_cast<std::uint64_t>(t);
      sinks.push_back({cfg.dims[di], t, mix_seed(cfg.seed, pos), {}});
    }
  }
  parallel_for(sinks.size(), cfg.threads, [&](std::size_t i) { trial_fn(sinks[i], cfg); });

  SuiteReport rep;
  rep.config = cfg;
  for (auto& s : sinks) {
    for (auto& c : s.cases) {
      c.index = rep.cases.size();
      if (!c.pass) ++rep.failures;
      rep.cases.push_back(std::move(c));
    }
  }
  return rep;
}

inline Json to_json(const SuiteConfig& c) {
  // Thread count and output path are omitted: they do not influence results.
  return Json{{"suite", c.suite},       {"dims", c.dims},         {"trials", c.trials},
              {"seed", c.seed},         {"tol", c.tol},           {"opt_tol", c.opt_tol},
              {"schedule", c.schedule}, {"n_starts", c.n_starts}};
}

inline Json to_json(const SuiteReport& r) {
  Json cases = Json::array();
  for (const auto& c : r.cases) {
    cases.push_back(Json{{"index", c.index},
                         {"check", c.check},
                         {"dim", c.dim},
                         {"trial", c.trial},
                         {"seed", c.seed},
                         {"digest", c.digest},
                         {"measured", c.measured},
                         {"bounds", c.bounds},
                         {"pass", c.pass}});
  }
  return Json{{"suite", r.config.suite}, {"config", to_json(r.config)}, {"cases", std::move(cases)},
              {"failures", r.failures}, {"case_count", r.cases.size()}};
}

inline std::string to_text(const SuiteReport& r) {
  std::ostringstream os;
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_check;
  for (const auto& c : r.cases) {
    auto& e = per_check[c.check];
    ++e.first;
    if (!c.pass) ++e.second;
  }
  os << "suite " << r.config.suite << ": " << r.cases.size() << " cases, " << r.failures << " failures\n";
  for (const auto& [name, e] : per_check) {
    os << "  " << name << ": " << e.first - e.second << "/" << e.first << " pass\n";
  }
  for (const auto& c : r.cases) {
    if (c.pass) continue;
    os << "  FAIL #" << c.index << " " << c.check << " dim=" << c.dim << " seed=" << c.seed << " digest=" << c.digest
       << "\n";
  }
  return os.str();
}

}  // namespace qentropy
