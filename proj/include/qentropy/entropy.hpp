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

// Entropy functionals in nats. All entropies are the degree-1 homogeneous
// extensions to the positive cone, f(x) = sum eta(x_i) - eta(sum x_i), so
// operators and weight vectors need not be normalized.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "qentropy/opcore.hpp"

namespace qentropy {

struct EntropyValue {
  double value = 0.0;
  bool finite = true;

  static EntropyValue infinite() {
    return {std::numeric_limits<double>::infinity(), false};
  }
  static EntropyValue of(double v) {
    // Rounding can leave a value a hair below zero.
    return {v < 0.0 && v > -1e-9 ? 0.0 : v, true};
  }
};

inline double eta(double x) {
  if (x < -1e-12) throw DomainError("eta: negative argument");
  if (x <= 0.0) return 0.0;
  return -x * std::log(x);
}

namespace detail {

// Homogeneous entropy of a nonnegative spectrum; negative entries count as 0.
inline double spectrum_entropy(const RealVector& ev) {
  double sum = 0.0, acc = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    const double l = ev(i);
    if (l > 0.0) {
      acc += eta(l);
      sum += l;
    }
  }
  return acc - eta(sum);
}

}  // namespace detail

inline EntropyValue von_neumann(const DensityOperator& rho, double clip_tol = kClipTol) {
  return EntropyValue::of(detail::spectrum_entropy(detail::eigvalsh(rho.matrix(), clip_tol)));
}

inline EntropyValue shannon_ext(std::span<const double> weights) {
  double sum = 0.0, acc = 0.0;
  for (double p : weights) {
    if (p < -1e-12) throw DomainError("shannon_ext: negative weight");
    if (p > 0.0) {
      acc += eta(p);
      sum += p;
    }
  }
  return EntropyValue::of(acc - eta(sum));
}

inline EntropyValue shannon_ext(const std::vector<double>& weights) {
  return shannon_ext(std::span<const double>(weights));
}

inline double binary(double p) {
  if (p < -1e-12 || p > 1.0 + 1e-12) throw DomainError("binary: argument outside [0, 1]");
  p = std::clamp(p, 0.0, 1.0);
  return eta(p) + eta(1.0 - p);
}

// Lindblad form: sum_i <i| rho log rho - rho log sigma + sigma - rho |i>, which
// is nonnegative for every pair of positive operators. Returns +inf when the
// support of rho is not contained in the support of sigma; containment is
// judged by the weighted residual p_i |(I - P_sigma)|i>|^2 > support_tol so
// that eigenvalue leakage at rounding level is not mistaken for a violation.
inline EntropyValue relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                                     double support_tol = 1e-9, double clip_tol = kClipTol) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative_entropy: dimension mismatch");
  const SpectralDecomposition sr = detail::eigh(rho.matrix(), clip_tol);
  const SpectralDecomposition ss = detail::eigh(sigma.matrix(), clip_tol);
  const Index n = rho.dim();

  Index supp = 0;
  while (supp < n && ss.eigenvalues(supp) > 0) ++supp;
  const ComplexMatrix us = ss.eigenvectors.leftCols(supp);
  const ComplexMatrix overlap = sr.eigenvectors.adjoint() * us;

  double value = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double p = sr.eigenvalues(i);
    if (p <= 0.0) continue;
    const ComplexVector v = sr.eigenvectors.col(i);
    const double residual = (v - us * (us.adjoint() * v)).squaredNorm();
    if (p * residual > support_tol) return EntropyValue::infinite();
    value += p * std::log(p);
    for (Index j = 0; j < supp; ++j) {
      value -= p * std::norm(overlap(i, j)) * std::log(ss.eigenvalues(j));
    }
  }
  value += sigma.trace() - rho.trace();
  return EntropyValue::of(value);
}

}  // namespace qentropy
