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

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qentropy/entropy.hpp"
#include "qentropy/kraus.hpp"
#include "qentropy/opcore.hpp"

namespace qentropy {

enum class TpMode { trace_preserving, trace_non_increasing };

inline const char* to_string(TpMode m) {
  return m == TpMode::trace_preserving ? "trace_preserving" : "trace_non_increasing";
}

inline constexpr double kChannelTol = 1e-8;

// Completely positive map rho -> sum_k V_k rho V_k^dagger with V_k : C^d_in -> C^d_out.
class KrausChannel {
 public:
  KrausChannel(Index d_in, Index d_out, std::vector<KrausOperator> kraus, TpMode mode)
      : d_in_(d_in), d_out_(d_out), kraus_(std::move(kraus)), mode_(mode) {
    if (d_in < 1 || d_out < 1) throw DimensionError("KrausChannel: dimensions must be positive");
    if (kraus_.empty()) throw DimensionError("KrausChannel: empty Kraus set");
    for (const auto& v : kraus_) {
      if (v.rows() != d_out || v.cols() != d_in) {
        throw DimensionError("KrausChannel: Kraus operator shape does not match d_out x d_in");
      }
    }
    if (mode_ == TpMode::trace_preserving) {
      const ComplexMatrix c = completeness();
      const double defect = max_abs(c - ComplexMatrix::Identity(d_in, d_in));
      if (defect > kChannelTol) {
        throw ContractError("KrausChannel: sum V^dagger V differs from identity by " +
                            std::to_string(defect));
      }
    } else if (const double excess = completeness_excess(); excess > kChannelTol) {
      throw ContractError("KrausChannel: sum V^dagger V exceeds identity by " +
                          std::to_string(excess));
    }
  }

  // Trace preserving when sum V^dagger V = I within tolerance, otherwise
  // trace non-increasing (validated).
  static KrausChannel infer(Index d_in, Index d_out, std::vector<KrausOperator> kraus) {
    ComplexMatrix c = ComplexMatrix::Zero(d_in, d_in);
    for (const auto& v : kraus) {
      if (v.rows() != d_out || v.cols() != d_in) {
        throw DimensionError("KrausChannel: Kraus operator shape does not match d_out x d_in");
      }
      v.gram_into(c);
    }
    const bool tp = max_abs(c - ComplexMatrix::Identity(d_in, d_in)) <= kChannelTol;
    return KrausChannel(d_in, d_out, std::move(kraus),
                        tp ? TpMode::trace_preserving : TpMode::trace_non_increasing);
  }

  Index d_in() const { return d_in_; }
  Index d_out() const { return d_out_; }
  TpMode tp_mode() const { return mode_; }
  const std::vector<KrausOperator>& kraus() const { return kraus_; }
  std::size_t size() const { return kraus_.size(); }

  bool all_sparse() const {
    return std::all_of(kraus_.begin(), kraus_.end(), [](const auto& v) { return v.is_sparse(); });
  }

  ComplexMatrix completeness() const {
    ComplexMatrix c = ComplexMatrix::Zero(d_in_, d_in_);
    for (const auto& v : kraus_) v.gram_into(c);
    return c;
  }

  // max(0, lambda_max(sum V^dagger V) - 1)
  double completeness_excess() const {
    const ComplexMatrix c = completeness();
    double top;
    const ComplexMatrix off = c - ComplexMatrix(c.diagonal().asDiagonal());
    if (max_abs(off) == 0.0) {
      top = c.diagonal().real().maxCoeff();
    } else {
      top = detail::eigvalsh(c, 0.0)(0);
    }
    return std::max(0.0, top - 1.0);
  }

  // Operator norm of I - sum V^dagger V.
  double completeness_deficit() const {
    const ComplexMatrix d = ComplexMatrix::Identity(d_in_, d_in_) - completeness();
    const ComplexMatrix off = d - ComplexMatrix(d.diagonal().asDiagonal());
    if (max_abs(off) == 0.0) return d.diagonal().cwiseAbs().maxCoeff();
    return detail::eigvalsh(d, 0.0).cwiseAbs().maxCoeff();
  }

 private:
  Index d_in_;
  Index d_out_;
  std::vector<KrausOperator> kraus_;
  TpMode mode_;
};

inline ComplexMatrix apply_matrix(const KrausChannel& phi, const ComplexMatrix& x) {
  if (x.rows() != phi.d_in() || x.cols() != phi.d_in()) {
    throw DimensionError("apply: input dimension does not match channel d_in");
  }
  ComplexMatrix out = ComplexMatrix::Zero(phi.d_out(), phi.d_out());
  for (const auto& v : phi.kraus()) v.sandwich_into(x, out);
  return out;
}

inline DensityOperator apply(const KrausChannel& phi, const DensityOperator& rho) {
  return DensityOperator::from_trusted(apply_matrix(phi, rho.matrix()));
}

// Heisenberg-picture dual: X -> sum V^dagger X V.
inline ComplexMatrix apply_dual(const KrausChannel& phi, const ComplexMatrix& x) {
  ComplexMatrix out = ComplexMatrix::Zero(phi.d_in(), phi.d_in());
  for (const auto& v : phi.kraus()) v.adjoint_sandwich_into(x, out);
  return out;
}

struct ChoiMatrix {
  HermitianOperator matrix;
  // (Phi (x) id)(sum_ij |ii><jj|); output factor first, index o * d_in + i.
  std::string convention = "unnormalized_output_first";
};

inline ChoiMatrix choi(const KrausChannel& phi) {
  const Index n = phi.d_in() * phi.d_out();
  ComplexMatrix c = ComplexMatrix::Zero(n, n);
  for (const auto& v : phi.kraus()) {
    const ComplexMatrix d = v.to_dense();
    ComplexVector vec(n);
    for (Index o = 0; o < phi.d_out(); ++o) {
      for (Index i = 0; i < phi.d_in(); ++i) vec(o * phi.d_in() + i) = d(o, i);
    }
    c.noalias() += vec * vec.adjoint();
  }
  return ChoiMatrix{HermitianOperator(c), "unnormalized_output_first"};
}

// Rank of the Choi matrix: eigenvalues above rank_tol * lambda_max. The Choi
// matrix and the Hilbert-Schmidt Gram matrix of the Kraus operators share
// their nonzero spectrum, so the smaller of the two is diagonalized.
inline Index choi_rank(const KrausChannel& phi, double rank_tol = 1e-9) {
  const auto m = static_cast<Index>(phi.size());
  if (m <= phi.d_in() * phi.d_out()) {
    ComplexMatrix g(m, m);
    for (Index a = 0; a < m; ++a) {
      for (Index b = a; b < m; ++b) {
        g(a, b) = hs_inner(phi.kraus()[a], phi.kraus()[b]);
        g(b, a) = std::conj(g(a, b));
      }
    }
    return numerical_rank(g, rank_tol);
  }
  return numerical_rank(choi(phi).matrix.matrix(), rank_tol);
}

// Environment output <k|Phi^(rho)|j> = Tr(V_k rho V_j^dagger), realized with
// Kraus operators (W_i)_{k,c} = (V_k)_{i,c} over the output basis.
inline KrausChannel complementary(const KrausChannel& phi) {
  const auto m = static_cast<Index>(phi.size());
  std::vector<KrausOperator> w;
  w.reserve(static_cast<std::size_t>(phi.d_out()));
  if (phi.all_sparse()) {
    std::vector<std::vector<SparseEntry>> rows(static_cast<std::size_t>(phi.d_out()));
    for (Index k = 0; k < m; ++k) {
      for (const auto& e : phi.kraus()[k].entries()) rows[e.row].push_back({k, e.col, e.value});
    }
    for (auto& r : rows) w.push_back(KrausOperator::sparse(m, phi.d_in(), std::move(r)));
  } else {
    std::vector<ComplexMatrix> dense;
    for (const auto& v : phi.kraus()) dense.push_back(v.to_dense());
    for (Index i = 0; i < phi.d_out(); ++i) {
      ComplexMatrix wi(m, phi.d_in());
      for (Index k = 0; k < m; ++k) wi.row(k) = dense[k].row(i);
      w.emplace_back(std::move(wi));
    }
  }
  return KrausChannel(phi.d_in(), m, std::move(w), phi.tp_mode());
}

// psi after phi.
inline KrausChannel compose(const KrausChannel& psi, const KrausChannel& phi) {
  if (phi.d_out() != psi.d_in()) throw DimensionError("compose: phi.d_out != psi.d_in");
  std::vector<KrausOperator> ops;
  ops.reserve(psi.size() * phi.size());
  for (const auto& w : psi.kraus()) {
    for (const auto& v : phi.kraus()) ops.push_back(product(w, v));
  }
  const bool tp = psi.tp_mode() == TpMode::trace_preserving &&
                  phi.tp_mode() == TpMode::trace_preserving;
  return KrausChannel(phi.d_in(), psi.d_out(), std::move(ops),
                      tp ? TpMode::trace_preserving : TpMode::trace_non_increasing);
}

inline KrausChannel tensor_channels(const KrausChannel& phi, const KrausChannel& psi) {
  std::vector<KrausOperator> ops;
  ops.reserve(phi.size() * psi.size());
  for (const auto& v : phi.kraus()) {
    for (const auto& w : psi.kraus()) ops.push_back(kron(v, w));
  }
  const bool tp = psi.tp_mode() == TpMode::trace_preserving &&
                  phi.tp_mode() == TpMode::trace_preserving;
  return KrausChannel(phi.d_in() * psi.d_in(), phi.d_out() * psi.d_out(), std::move(ops),
                      tp ? TpMode::trace_preserving : TpMode::trace_non_increasing);
}

inline KrausChannel mix(const std::vector<KrausChannel>& channels,
                        const std::vector<double>& weights) {
  if (channels.empty() || channels.size() != weights.size()) {
    throw DimensionError("mix: need one weight per channel");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w < 0) throw DomainError("mix: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) throw DomainError("mix: weights do not sum to 1");
  std::vector<KrausOperator> ops;
  bool tp = true;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const auto& ch = channels[c];
    if (ch.d_in() != channels[0].d_in() || ch.d_out() != channels[0].d_out()) {
      throw DimensionError("mix: channels act between different spaces");
    }
    tp = tp && ch.tp_mode() == TpMode::trace_preserving;
    if (weights[c] == 0.0) continue;
    for (const auto& v : ch.kraus()) ops.push_back(v.scaled(std::sqrt(weights[c])));
  }
  return KrausChannel(channels[0].d_in(), channels[0].d_out(), std::move(ops),
                      tp ? TpMode::trace_preserving : TpMode::trace_non_increasing);
}

// ---------------------------------------------------------------------------
// Named channels.

inline KrausChannel identity_channel(Index d) {
  return KrausChannel(d, d, {KrausOperator::diagonal(ComplexVector::Ones(d))},
                      TpMode::trace_preserving);
}

inline KrausChannel unitary_channel(const ComplexMatrix& u) {
  return KrausChannel::infer(u.cols(), u.rows(), {KrausOperator(u)});
}

// rho -> (Tr rho) sigma.
inline KrausChannel depolarizing_channel(const DensityOperator& sigma, Index d_in) {
  if (std::abs(sigma.trace() - 1.0) > 1e-9) {
    throw DomainError("depolarizing_channel: output state must have unit trace");
  }
  const SpectralDecomposition sd = detail::eigh(sigma.matrix());
  std::vector<KrausOperator> ops;
  for (Index a = 0; a < sd.eigenvalues.size(); ++a) {
    const double l = sd.eigenvalues(a);
    if (l <= 0) continue;
    for (Index j = 0; j < d_in; ++j) {
      std::vector<SparseEntry> e;
      for (Index r = 0; r < sigma.dim(); ++r) {
        const cplx v = std::sqrt(l) * sd.eigenvectors(r, a);
        if (v != cplx(0.0)) e.push_back({r, j, v});
      }
      ops.push_back(KrausOperator::sparse(sigma.dim(), d_in, std::move(e)));
    }
  }
  return KrausChannel::infer(d_in, sigma.dim(), std::move(ops));
}

// Tr_B on C^dA (x) C^dB when keep_first, Tr_A otherwise.
inline KrausChannel partial_trace_channel(Index d_a, Index d_b, bool keep_first = true) {
  std::vector<KrausOperator> ops;
  if (keep_first) {
    for (Index b = 0; b < d_b; ++b) {
      std::vector<SparseEntry> e;
      for (Index a = 0; a < d_a; ++a) e.push_back({a, a * d_b + b, 1.0});
      ops.push_back(KrausOperator::sparse(d_a, d_a * d_b, std::move(e)));
    }
    return KrausChannel(d_a * d_b, d_a, std::move(ops), TpMode::trace_preserving);
  }
  for (Index a = 0; a < d_a; ++a) {
    std::vector<SparseEntry> e;
    for (Index b = 0; b < d_b; ++b) e.push_back({b, a * d_b + b, 1.0});
    ops.push_back(KrausOperator::sparse(d_b, d_a * d_b, std::move(e)));
  }
  return KrausChannel(d_a * d_b, d_b, std::move(ops), TpMode::trace_preserving);
}

inline double example1_coefficient(double alpha, Index k) {
  return k <= 1 ? 1.0 : alpha / std::log(static_cast<double>(k));
}

// Kraus operators sqrt(c_k) |k><k| for k = 2..N (1-based) with c_k = alpha / ln k,
// plus P_1 = sqrt(I - sum_k c_k |k><k|). Index 0 of the returned set is P_1.
inline KrausChannel make_example1(double alpha, Index n) {
  if (!(alpha >= 0.0) || alpha > std::numbers::ln2 + 1e-12) {
    throw DomainError("make_example1: alpha must lie in [0, ln 2]");
  }
  if (n < 2) throw DomainError("make_example1: N must be at least 2");
  alpha = std::min(alpha, std::numbers::ln2);
  std::vector<KrausOperator> ops;
  ops.reserve(static_cast<std::size_t>(n));
  ComplexVector p1(n);
  p1(0) = 1.0;
  for (Index k = 2; k <= n; ++k) {
    const double c = example1_coefficient(alpha, k);
    p1(k - 1) = std::sqrt(std::max(0.0, 1.0 - c));
  }
  ops.push_back(KrausOperator::diagonal(p1));
  for (Index k = 2; k <= n; ++k) {
    const double c = example1_coefficient(alpha, k);
    if (c == 0.0) continue;
    ops.push_back(KrausOperator::sparse(n, n, {{k - 1, k - 1, std::sqrt(c)}}));
  }
  return KrausChannel(n, n, std::move(ops), TpMode::trace_preserving);
}

namespace detail {

inline ComplexMatrix range_basis(const ComplexMatrix& projector) {
  const SpectralDecomposition sd = eigh(projector);
  Index r = 0;
  while (r < sd.eigenvalues.size() && sd.eigenvalues(r) > 0.5) ++r;
  return sd.eigenvectors.leftCols(r);
}

// rho -> Q rho Q + Tr(Qbar rho) |s><s|, with Qbar = I - Q.
inline KrausChannel block_channel(const ComplexMatrix& q, const ComplexVector& s) {
  const Index d = q.rows();
  const ComplexMatrix qbar = ComplexMatrix::Identity(d, d) - q;
  const ComplexMatrix basis = range_basis(qbar);
  std::vector<KrausOperator> ops;
  ops.emplace_back(q);
  for (Index j = 0; j < basis.cols(); ++j) {
    ops.emplace_back(ComplexMatrix(s * basis.col(j).adjoint()));
  }
  return KrausChannel(d, d, std::move(ops), TpMode::trace_preserving);
}

}  // namespace detail

// Phi(rho) = P rho P + [Tr Pbar rho] sigma and Psi(rho) = [Tr P rho] varsigma +
// Pbar rho Pbar. Their composition Psi o Phi is the measure-and-prepare map
// rho -> Tr(P rho) varsigma + Tr(Pbar rho) sigma; this is checked on seeded
// random inputs before returning.
inline std::pair<KrausChannel, KrausChannel> make_block_pair(const ComplexMatrix& p,
                                                             const PureState& sigma,
                                                             const PureState& varsigma) {
  const Index d = p.rows();
  if (p.cols() != d || sigma.dim() != d || varsigma.dim() != d) {
    throw DimensionError("make_block_pair: dimension mismatch");
  }
  if (max_abs(p - p.adjoint()) > 1e-9 || max_abs(p * p - p) > 1e-9) {
    throw DomainError("make_block_pair: P is not an orthogonal projector");
  }
  const ComplexMatrix pbar = ComplexMatrix::Identity(d, d) - p;
  const ComplexMatrix s = sigma.projector().matrix();
  const ComplexMatrix t = varsigma.projector().matrix();
  if (max_abs(pbar * s * pbar - s) > 1e-9) {
    throw DomainError("make_block_pair: sigma is not supported in the range of I - P");
  }
  if (max_abs(p * t * p - t) > 1e-9) {
    throw DomainError("make_block_pair: varsigma is not supported in the range of P");
  }
  KrausChannel phi = detail::block_channel(p, sigma.amplitudes());
  KrausChannel psi = detail::block_channel(pbar, varsigma.amplitudes());

  const KrausChannel composite = compose(psi, phi);
  for (std::uint64_t trial = 0; trial < 4; ++trial) {
    const DensityOperator rho = random_density(d, d, mix_seed(0xB10C, trial));
    const ComplexMatrix expect = (p * rho.matrix()).trace() * t + (pbar * rho.matrix()).trace() * s;
    if (max_abs(apply(composite, rho).matrix() - expect) > 1e-9) {
      throw std::logic_error("make_block_pair: composite is not the expected measure-and-prepare map");
    }
  }
  return {std::move(phi), std::move(psi)};
}

// Stinespring isometry C^d_in -> C^d_out (x) C^m split into m Kraus blocks.
// The trace non-increasing variant multiplies the map by a factor in (0, 1).
inline KrausChannel random_channel(Index d_in, Index d_out, Index choi_rank_target,
                                   bool trace_preserving, std::uint64_t seed) {
  if (d_in < 1 || d_out < 1 || choi_rank_target < 1) {
    throw DomainError("random_channel: dimensions and Choi rank must be positive");
  }
  if (choi_rank_target > d_in * d_out) throw DomainError("random_channel: Choi rank exceeds d_in * d_out");
  if (choi_rank_target * d_out < d_in) {
    throw DomainError("random_channel: d_out * choi_rank must be at least d_in");
  }
  Rng rng(seed);
  const ComplexMatrix v = haar_isometry(d_out * choi_rank_target, d_in, rng);
  double scale = 1.0;
  if (!trace_preserving) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    do {
      scale = u(rng);
    } while (scale <= 0.0);
  }
  std::vector<KrausOperator> ops;
  for (Index k = 0; k < choi_rank_target; ++k) {
    ops.emplace_back(ComplexMatrix(std::sqrt(scale) * v.middleRows(k * d_out, d_out)));
  }
  return KrausChannel(d_in, d_out, std::move(ops),
                      trace_preserving ? TpMode::trace_preserving : TpMode::trace_non_increasing);
}

// ---------------------------------------------------------------------------
// Kraus families k -> V_k (k >= 1), evaluated at a truncation N.

enum class ChannelClass { A, B, C };

inline const char* to_string(ChannelClass c) {
  switch (c) {
    case ChannelClass::A: return "A";
    case ChannelClass::B: return "B";
    case ChannelClass::C: return "C";
  }
  return "?";
}

struct KrausFamily {
  std::string name;
  std::function<Index(Index)> input_dim;   // N -> d_in
  std::function<Index(Index)> output_dim;  // N -> d_out
  std::function<Index(Index)> count;       // N -> number of Kraus operators kept
  std::function<KrausOperator(Index, Index)> generator;  // (k, N) -> V_k, 1 <= k <= count(N)
  std::optional<Index> finite_count;       // set when the family has finitely many operators
  std::function<double(Index)> norm_sq;    // optional analytic ||V_k||^2 for all k
  std::optional<ChannelClass> known_class;

  // Dropping the tail gives a trace non-increasing operation.
  KrausChannel truncate(Index n) const {
    std::vector<KrausOperator> ops;
    const Index m = count(n);
    ops.reserve(static_cast<std::size_t>(m));
    for (Index k = 1; k <= m; ++k) ops.push_back(generator(k, n));
    return KrausChannel::infer(input_dim(n), output_dim(n), std::move(ops));
  }
};

inline KrausFamily identity_family() {
  KrausFamily f;
  f.name = "identity";
  f.input_dim = [](Index n) { return n; };
  f.output_dim = [](Index n) { return n; };
  f.count = [](Index) { return Index{1}; };
  f.generator = [](Index, Index n) { return KrausOperator::diagonal(ComplexVector::Ones(n)); };
  f.finite_count = 1;
  f.norm_sq = [](Index k) { return k == 1 ? 1.0 : 0.0; };
  f.known_class = ChannelClass::B;
  return f;
}

// The family behind make_example1: V_1 = P_1, V_k = sqrt(alpha / ln k) |k><k|.
inline KrausFamily example1_family(double alpha) {
  if (!(alpha >= 0.0) || alpha > std::numbers::ln2 + 1e-12) {
    throw DomainError("example1_family: alpha must lie in [0, ln 2]");
  }
  alpha = std::min(alpha, std::numbers::ln2);
  KrausFamily f;
  f.name = "example1";
  f.input_dim = [](Index n) { return n; };
  f.output_dim = [](Index n) { return n; };
  f.count = [](Index n) { return n; };
  f.generator = [alpha](Index k, Index n) {
    if (k == 1) {
      ComplexVector p1(n);
      p1(0) = 1.0;
      for (Index j = 2; j <= n; ++j) {
        p1(j - 1) = std::sqrt(std::max(0.0, 1.0 - example1_coefficient(alpha, j)));
      }
      return KrausOperator::diagonal(p1);
    }
    return KrausOperator::sparse(n, n, {{k - 1, k - 1, std::sqrt(example1_coefficient(alpha, k))}});
  };
  f.norm_sq = [alpha](Index k) { return example1_coefficient(alpha, k); };
  return f;
}

// V_k = 2^{-k/2} I_d: both sum ||V_k||^2 and S({||V_k||^2}) converge.
inline KrausFamily geometric_family(Index d) {
  KrausFamily f;
  f.name = "geometric";
  f.input_dim = [d](Index) { return d; };
  f.output_dim = [d](Index) { return d; };
  f.count = [](Index n) { return n; };
  f.generator = [d](Index k, Index) {
    return KrausOperator::diagonal(ComplexVector::Constant(d, std::pow(2.0, -0.5 * static_cast<double>(k))));
  };
  f.norm_sq = [](Index k) { return std::pow(2.0, -static_cast<double>(k)); };
  return f;
}

// rho -> (Tr rho) diag(spectrum) on input C^N.
inline KrausFamily depolarizing_family(std::vector<double> spectrum) {
  double total = 0.0;
  for (double s : spectrum) {
    if (s < 0) throw DomainError("depolarizing_family: negative spectrum entry");
    total += s;
  }
  if (spectrum.empty() || std::abs(total - 1.0) > 1e-9) {
    throw DomainError("depolarizing_family: spectrum must be a probability vector");
  }
  const auto r = static_cast<Index>(spectrum.size());
  KrausFamily f;
  f.name = "depolarizing";
  f.input_dim = [](Index n) { return n; };
  f.output_dim = [r](Index) { return r; };
  f.count = [r](Index n) { return r * n; };
  f.generator = [spectrum, r](Index k, Index n) {
    const Index a = (k - 1) / n;
    const Index j = (k - 1) % n;
    return KrausOperator::sparse(r, n, {{a, j, std::sqrt(spectrum[static_cast<std::size_t>(a)])}});
  };
  f.known_class = ChannelClass::A;
  return f;
}

// rho -> (1 - p) rho + p (Tr rho) |0><0| on C^N.
inline KrausFamily mixture_family(double p) {
  if (!(p > 0.0) || !(p < 1.0)) throw DomainError("mixture_family: p must lie in (0, 1)");
  KrausFamily f;
  f.name = "mixture";
  f.input_dim = [](Index n) { return n; };
  f.output_dim = [](Index n) { return n; };
  f.count = [](Index n) { return n + 1; };
  f.generator = [p](Index k, Index n) {
    if (k == 1) return KrausOperator::diagonal(ComplexVector::Constant(n, std::sqrt(1.0 - p)));
    return KrausOperator::sparse(n, n, {{0, k - 2, std::sqrt(p)}});
  };
  f.known_class = ChannelClass::C;
  return f;
}

// Finite Kraus set wrapped as a family (ignores N).
inline KrausFamily finite_family(const KrausChannel& phi, std::string name = "finite") {
  KrausFamily f;
  f.name = std::move(name);
  const Index d_in = phi.d_in(), d_out = phi.d_out();
  const auto m = static_cast<Index>(phi.size());
  auto ops = std::make_shared<std::vector<KrausOperator>>(phi.kraus());
  f.input_dim = [d_in](Index) { return d_in; };
  f.output_dim = [d_out](Index) { return d_out; };
  f.count = [m](Index n) { return std::min(m, n); };
  f.generator = [ops](Index k, Index) { return (*ops)[static_cast<std::size_t>(k - 1)]; };
  f.finite_count = m;
  return f;
}

}  // namespace qentropy
