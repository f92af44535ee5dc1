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

// Optimization over decompositions of a state into ensembles.
//
// Every decomposition rho = sum_i psi_i psi_i^dagger into m*k vectors is
// psi_i = sum_j U_ij sqrt(p_j) e_j for an (m*k) x r isometry U over the
// eigenpairs (p_j, e_j) of rho. Grouping consecutive blocks of k rows gives
// m ensemble members of rank at most k, so rank constraints hold by
// construction. Objectives are optimized by Riemannian conjugate gradients on
// the Stiefel manifold with a monotone line search.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qentropy/channels.hpp"
#include "qentropy/detail/evaluator.hpp"
#include "qentropy/entropy.hpp"
#include "qentropy/parallel.hpp"

namespace qentropy {

class Ensemble {
 public:
  Ensemble(std::vector<double> weights, std::vector<DensityOperator> members)
      : weights_(std::move(weights)), members_(std::move(members)) {
    if (weights_.empty() || weights_.size() != members_.size()) {
      throw DimensionError("Ensemble: need one weight per member and at least one member");
    }
    double total = 0.0;
    for (double w : weights_) {
      if (w < 0.0) throw DomainError("Ensemble: negative weight");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) throw DomainError("Ensemble: weights do not sum to 1");
    for (const auto& m : members_) {
      if (m.dim() != members_.front().dim()) throw DimensionError("Ensemble: members differ in dimension");
    }
  }

  // Also checks that the average reproduces `target` within 1e-9.
  static Ensemble for_target(std::vector<double> weights, std::vector<DensityOperator> members,
                             const DensityOperator& target) {
    Ensemble e(std::move(weights), std::move(members));
    if (e.dim() != target.dim() || max_abs(e.average().matrix() - target.matrix()) > 1e-9) {
      throw ContractError("Ensemble: average does not match the target state");
    }
    return e;
  }

  std::size_t size() const { return weights_.size(); }
  Index dim() const { return members_.front().dim(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<DensityOperator>& members() const { return members_; }

  DensityOperator average() const {
    ComplexMatrix acc = ComplexMatrix::Zero(dim(), dim());
    for (std::size_t i = 0; i < size(); ++i) acc += weights_[i] * members_[i].matrix();
    return DensityOperator::from_trusted(acc);
  }

 private:
  std::vector<double> weights_;
  std::vector<DensityOperator> members_;
};

enum class Direction { upper_bound_of_inf, lower_bound_of_sup };

inline const char* to_string(Direction d) {
  return d == Direction::upper_bound_of_inf ? "upper_bound_of_inf" : "lower_bound_of_sup";
}

struct RoofResult {
  double value = 0.0;
  Ensemble ensemble;
  Direction direction = Direction::upper_bound_of_inf;
  Index ensemble_cap = 0;  // number of groups m
  Index member_rank = 1;   // k
  int n_starts = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  int best_start = 0;
  ComplexMatrix isometry;  // witness parameters, (m*k) x rank
};

struct RoofOptions {
  Index m = 0;  // 0 selects dim^2
  int n_starts = 32;
  std::uint64_t seed = 0;
  int max_iter = 64;
  double grad_tol = 1e-9;
  unsigned threads = 1;
  // Appended as the last start; see pad_isometry for reuse across k.
  std::optional<ComplexMatrix> warm_start;
};

// Entropy of the members, either directly or after a channel.
struct EntropyFunctional {
  const KrausChannel* channel = nullptr;

  static EntropyFunctional input_entropy() { return {}; }
  static EntropyFunctional output_entropy(const KrausChannel& phi) { return {&phi}; }

  double operator()(const DensityOperator& rho) const {
    if (!channel) return von_neumann(rho).value;
    if (rho.dim() != channel->d_in()) throw DimensionError("EntropyFunctional: dimension mismatch");
    return von_neumann(apply(*channel, rho)).value;
  }
};

namespace detail {

struct SpectralFactor {
  ComplexMatrix b;  // d x r, columns sqrt(p_j) e_j
  Index rank = 0;
};

inline SpectralFactor spectral_factor(const DensityOperator& rho) {
  const SpectralDecomposition sd = eigh(rho.matrix());
  SpectralFactor f;
  while (f.rank < sd.eigenvalues.size() && sd.eigenvalues(f.rank) > 0) ++f.rank;
  if (f.rank == 0) throw DomainError("roof: zero state");
  f.b = sd.eigenvectors.leftCols(f.rank) *
        sd.eigenvalues.head(f.rank).cwiseSqrt().cast<cplx>().asDiagonal();
  return f;
}

inline void check_unit_trace(const DensityOperator& rho, const char* where) {
  if (std::abs(rho.trace() - 1.0) > 1e-9) throw DomainError(std::string(where) + ": state must have unit trace");
}

inline ComplexMatrix group_vectors(const ComplexMatrix& b, const ComplexMatrix& u, Index g, Index k) {
  return b * u.middleRows(g * k, k).transpose();
}

// Sum over groups of f_hom(Psi_g Psi_g^dagger); fills the Euclidean gradient
// in U when requested.
inline double roof_objective(const ComplexMatrix& b, const ComplexMatrix& u, Index groups, Index k,
                             const OutputEntropyEvaluator& ev, ComplexMatrix* grad) {
  double total = 0.0;
  if (grad) grad->setZero(u.rows(), u.cols());
  for (Index g = 0; g < groups; ++g) {
    const ComplexMatrix psi = group_vectors(b, u, g, k);
    if (psi.squaredNorm() == 0.0) continue;
    if (grad) {
      const ValueGrad vg = ev.value_grad(psi);
      total += vg.value;
      grad->middleRows(g * k, k) = (b.adjoint() * vg.grad).transpose();
    } else {
      total += ev.value(psi);
    }
  }
  return total;
}

inline ComplexMatrix tangent_part(const ComplexMatrix& u, const ComplexMatrix& z) {
  const ComplexMatrix s = u.adjoint() * z;
  return z - u * (0.5 * (s + s.adjoint()));
}

struct StiefelResult {
  ComplexMatrix u;
  double value = 0.0;
  int iterations = 0;
};

// Monotone Riemannian conjugate gradient (Polak-Ribiere+) on the Stiefel
// manifold, maximizing sign * objective. Steps are retracted by the polar
// factor; a step is taken only if it satisfies the Armijo condition.
inline StiefelResult stiefel_optimize(const ComplexMatrix& b, Index groups, Index k,
                                      const OutputEntropyEvaluator& ev, double sign, ComplexMatrix u,
                                      int max_iter, double grad_tol) {
  ComplexMatrix g;
  double f = sign * roof_objective(b, u, groups, k, ev, &g);
  ComplexMatrix z = tangent_part(u, sign * g);
  ComplexMatrix dir = z;
  double t = 1.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    const double zn2 = z.squaredNorm();
    if (std::sqrt(zn2) < grad_tol) break;
    double slope = (z.adjoint() * dir).trace().real();
    if (!(slope > 0.0)) {
      dir = z;
      slope = zn2;
    }
    const double dn = dir.norm();
    t = std::min(t, 1.0 / dn);
    bool accepted = false;
    ComplexMatrix cand;
    double fc = 0.0;
    for (int h = 0; h < 50; ++h) {
      cand = polar_isometry(u + t * dir);
      fc = sign * roof_objective(b, cand, groups, k, ev, nullptr);
      if (fc - f >= 1e-4 * t * slope && fc > f) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    u = std::move(cand);
    f = sign * roof_objective(b, u, groups, k, ev, &g);
    const ComplexMatrix z_new = tangent_part(u, sign * g);
    const ComplexMatrix z_old = tangent_part(u, z);
    const double beta = std::max(0.0, (z_new.adjoint() * (z_new - z_old)).trace().real() / zn2);
    dir = z_new + beta * tangent_part(u, dir);
    z = z_new;
    t *= 4.0;
  }
  return {std::move(u), sign * f, it};
}

inline ComplexMatrix spectral_start(Index rows, Index r) {
  ComplexMatrix u = ComplexMatrix::Zero(rows, r);
  u.topRows(r).setIdentity();
  return u;
}

struct RoofSearch {
  ComplexMatrix u;
  int best_start = 0;
  int iterations = 0;
  int n_starts = 0;
};

inline RoofSearch roof_search(const SpectralFactor& sf, Index groups, Index k, const OutputEntropyEvaluator& ev,
                              bool maximize, const RoofOptions& opt) {
  const Index rows = groups * k;
  if (rows < sf.rank) throw DomainError("roof: ensemble cap times member rank is below the rank of the state");
  if (opt.n_starts < 1) throw DomainError("roof: need at least one start");
  if (opt.warm_start && (opt.warm_start->rows() != rows || opt.warm_start->cols() != sf.rank)) {
    throw DimensionError("roof: warm start has the wrong shape");
  }
  const auto n_random = static_cast<std::size_t>(opt.n_starts);
  const std::size_t n_total = n_random + (opt.warm_start ? 1 : 0);
  std::vector<StiefelResult> results(n_total);
  const double sign = maximize ? 1.0 : -1.0;
  parallel_for(n_total, opt.threads, [&](std::size_t s) {
    ComplexMatrix u0;
    if (s == 0) {
      u0 = spectral_start(rows, sf.rank);
    } else if (s < n_random) {
      Rng rng(opt.seed + s);
      u0 = haar_isometry(rows, sf.rank, rng);
    } else {
      u0 = polar_isometry(*opt.warm_start);
    }
    results[s] = stiefel_optimize(sf.b, groups, k, ev, sign, std::move(u0), opt.max_iter, opt.grad_tol);
  });
  std::size_t best = 0;
  for (std::size_t s = 1; s < n_total; ++s) {
    if (sign * results[s].value > sign * results[best].value) best = s;
  }
  return {results[best].u, static_cast<int>(best), results[best].iterations, static_cast<int>(n_total)};
}

// Members Psi_g Psi_g^dagger / pi_g with weights pi_g; empty groups dropped.
inline Ensemble ensemble_from_groups(const ComplexMatrix& b, const ComplexMatrix& u, Index groups, Index k) {
  std::vector<double> w;
  std::vector<DensityOperator> members;
  for (Index g = 0; g < groups; ++g) {
    const ComplexMatrix psi = group_vectors(b, u, g, k);
    const double pi = psi.squaredNorm();
    if (pi <= 1e-14) continue;
    w.push_back(pi);
    members.push_back(DensityOperator::from_trusted(psi * psi.adjoint() / pi));
  }
  return Ensemble(std::move(w), std::move(members));
}

inline double average_of(const Ensemble& e, const EntropyFunctional& f) {
  double v = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) v += e.weights()[i] * f(e.members()[i]);
  return v;
}

inline RoofResult finish(const RoofSearch& rs, Index groups, Index k, Direction dir,
                         const RoofOptions& opt, double value, Ensemble ens) {
  return RoofResult{value,         std::move(ens), dir,         groups,       k, rs.n_starts,
                    opt.seed,      rs.iterations,  rs.best_start, rs.u};
}

}  // namespace detail

// Pure-state ensemble from an m x rank parameter matrix (made an isometry by
// its polar factor).
inline Ensemble ensemble_from_isometry(const DensityOperator& rho, Index m, const ComplexMatrix& params) {
  detail::check_unit_trace(rho, "ensemble_from_isometry");
  const detail::SpectralFactor sf = detail::spectral_factor(rho);
  if (m < sf.rank) throw DomainError("ensemble_from_isometry: m is below the rank of rho");
  if (params.rows() != m || params.cols() != sf.rank) {
    throw DimensionError("ensemble_from_isometry: params must be m x rank(rho)");
  }
  return detail::ensemble_from_groups(sf.b, polar_isometry(params), m, 1);
}

// Zero-pads each group of k_old rows to k_new rows; the ensemble is unchanged.
inline ComplexMatrix pad_isometry(const ComplexMatrix& u, Index groups, Index k_old, Index k_new) {
  if (k_new < k_old || u.rows() != groups * k_old) throw DimensionError("pad_isometry: bad shape");
  ComplexMatrix out = ComplexMatrix::Zero(groups * k_new, u.cols());
  for (Index g = 0; g < groups; ++g) out.middleRows(g * k_new, k_old) = u.middleRows(g * k_old, k_old);
  return out;
}

// Sum_i pi_i H(rho_i || average).
inline double ensemble_defect(const Ensemble& e) {
  const DensityOperator avg = e.average();
  double v = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const EntropyValue r = relative_entropy(e.members()[i], avg);
    if (!r.finite) return std::numeric_limits<double>::infinity();
    v += e.weights()[i] * r.value;
  }
  return v;
}

inline double ensemble_average_entropy(const Ensemble& e, const EntropyFunctional& f) {
  return detail::average_of(e, f);
}

// Minimizes sum_i pi_i H(Phi(psi_i psi_i^dagger)) over pure decompositions of rho.
inline RoofResult sigma_co_output_entropy(const KrausChannel& phi, const DensityOperator& rho,
                                          const RoofOptions& opt = {}) {
  if (rho.dim() != phi.d_in()) throw DimensionError("sigma_co_output_entropy: dimension mismatch");
  detail::check_unit_trace(rho, "sigma_co_output_entropy");
  const Index m = opt.m > 0 ? opt.m : rho.dim() * rho.dim();
  const detail::SpectralFactor sf = detail::spectral_factor(rho);
  const detail::OutputEntropyEvaluator ev(phi);
  const detail::RoofSearch rs = detail::roof_search(sf, m, 1, ev, false, opt);
  Ensemble ens = detail::ensemble_from_groups(sf.b, rs.u, m, 1);
  const double value = detail::average_of(ens, EntropyFunctional::output_entropy(phi));
  return detail::finish(rs, m, 1, Direction::upper_bound_of_inf, opt, value, std::move(ens));
}

// Maximizes sum_i pi_i f(rho_i) over decompositions with members of rank <= k.
inline RoofResult k_approximator(const EntropyFunctional& f, const DensityOperator& rho, Index k,
                                 const RoofOptions& opt = {}) {
  if (k < 1) throw DomainError("k_approximator: k must be at least 1");
  detail::check_unit_trace(rho, "k_approximator");
  const Index m = opt.m > 0 ? opt.m : rho.dim() * rho.dim();
  const KrausChannel id = identity_channel(rho.dim());
  const KrausChannel& phi = f.channel ? *f.channel : id;
  if (phi.d_in() != rho.dim()) throw DimensionError("k_approximator: dimension mismatch");
  const detail::SpectralFactor sf = detail::spectral_factor(rho);
  const detail::OutputEntropyEvaluator ev(phi);
  const detail::RoofSearch rs = detail::roof_search(sf, m, k, ev, true, opt);
  Ensemble ens = detail::ensemble_from_groups(sf.b, rs.u, m, k);
  const double value = detail::average_of(ens, f);
  return detail::finish(rs, m, k, Direction::lower_bound_of_sup, opt, value, std::move(ens));
}

// Minimizes sum_i pi_i H(rho_i || rho) over decompositions with members of
// rank <= k. On the feasible set this equals H(rho) - sum_i pi_i H(rho_i).
inline RoofResult delta_k(const DensityOperator& rho, Index k, const RoofOptions& opt = {}) {
  if (k < 1) throw DomainError("delta_k: k must be at least 1");
  detail::check_unit_trace(rho, "delta_k");
  const Index m = opt.m > 0 ? opt.m : rho.dim() * rho.dim();
  const KrausChannel id = identity_channel(rho.dim());
  const detail::SpectralFactor sf = detail::spectral_factor(rho);
  const detail::OutputEntropyEvaluator ev(id);
  const detail::RoofSearch rs = detail::roof_search(sf, m, k, ev, true, opt);
  Ensemble ens = detail::ensemble_from_groups(sf.b, rs.u, m, k);
  const double value = ensemble_defect(ens);
  return detail::finish(rs, m, k, Direction::upper_bound_of_inf, opt, value, std::move(ens));
}

// (sum_i pi_i H(Phi(rho_i) || Phi(avg)), sum_i pi_i H(rho_i || avg)).
inline std::pair<double, double> ensemblewise_monotonicity_gap(const KrausChannel& phi, const Ensemble& e) {
  if (e.dim() != phi.d_in()) throw DimensionError("ensemblewise_monotonicity_gap: dimension mismatch");
  const DensityOperator avg = e.average();
  detail::check_unit_trace(avg, "ensemblewise_monotonicity_gap");
  const DensityOperator out_avg = apply(phi, avg);
  double lhs = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const EntropyValue r = relative_entropy(apply(phi, e.members()[i]), out_avg);
    lhs += r.finite ? e.weights()[i] * r.value : std::numeric_limits<double>::infinity();
  }
  return {lhs, ensemble_defect(e)};
}

// Entanglement of formation: convex roof of H(Tr_B psi psi^dagger).
inline RoofResult eof(const DensityOperator& rho_ab, const SubsystemSplit& split, const RoofOptions& opt = {}) {
  if (split.size() != 2 || split.total() != rho_ab.dim()) throw DimensionError("eof: split does not match the state");
  const KrausChannel tr_b = partial_trace_channel(split.dims()[0], split.dims()[1], true);
  return sigma_co_output_entropy(tr_b, rho_ab, opt);
}

}  // namespace qentropy
