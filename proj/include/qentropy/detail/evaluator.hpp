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

// Output entropy of X -> H(Phi(X X^dagger)) together with its gradient in X.
// This is the inner loop of every optimizer in the library.
//
// With F = (ln Tr Omega) I - ln Omega and Omega = Phi(X X^dagger), the
// homogeneous entropy satisfies dH = Tr[F dOmega], so
//   dH = 2 Re Tr[G^dagger dX],  G = sum_k V_k^dagger F V_k X.
// Three evaluation routes share that formula:
//   * Gram: when (#Kraus * #columns) <= d_out, diagonalize W^dagger W with
//     W = [V_k X] instead of Omega; ln(Omega) W = W ln(W^dagger W).
//   * Dense: diagonalize Omega directly.
//   * Rank-one update: a single input vector and Kraus operators that, except
//     for at most one, have a single nonzero entry. Then Omega = D + u u^dagger
//     with D diagonal, which is solved through the secular equation in
//     O(d_out^2) instead of O(d_out^3).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "qentropy/channels.hpp"
#include "qentropy/entropy.hpp"

namespace qentropy::detail {

struct ValueGrad {
  double value = 0.0;
  ComplexMatrix grad;
};

// Spectrum of D + u u^dagger for a real diagonal D.
class RankOneUpdate {
 public:
  RankOneUpdate(const RealVector& delta, const ComplexVector& u) : n_(delta.size()) {
    std::vector<double> w(static_cast<std::size_t>(n_));
    double wsum = 0.0;
    for (Index i = 0; i < n_; ++i) {
      w[i] = std::norm(u(i));
      wsum += w[i];
    }
    const double scale = (n_ ? delta.cwiseAbs().maxCoeff() : 0.0) + wsum;
    u_ = u;
    delta_ = delta;
    pole_of_.assign(static_cast<std::size_t>(n_), -1);
    w_ = w;
    if (!(scale > 0)) {
      for (Index i = 0; i < n_; ++i) eigenvalues_.push_back(0.0);
      return;
    }
    const double deflate = (1e-16 * scale) * (1e-16 * scale) / std::max(wsum, 1e-300);

    std::vector<Index> active;
    for (Index i = 0; i < n_; ++i) {
      if (w[i] <= deflate) {
        eigenvalues_.push_back(delta(i));
      } else {
        active.push_back(i);
      }
    }
    std::stable_sort(active.begin(), active.end(),
                     [&](Index a, Index b) { return delta(a) < delta(b); });
    for (Index i : active) {
      if (poles_.empty() || delta(i) - poles_.back() > 1e-15 * scale) {
        poles_.push_back(delta(i));
        weights_.push_back(0.0);
        group_size_.push_back(0);
      }
      pole_of_[i] = static_cast<int>(poles_.size()) - 1;
      weights_.back() += w[i];
      group_size_.back() += 1;
    }
    for (std::size_t j = 0; j < poles_.size(); ++j) {
      for (int s = 1; s < group_size_[j]; ++s) eigenvalues_.push_back(poles_[j]);
    }
    solve_roots(wsum);
    for (std::size_t r = 0; r < root_origin_.size(); ++r) {
      eigenvalues_.push_back(poles_[root_origin_[r]] + root_tau_[r]);
    }
  }

  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

  // diag(f(Omega)) and f(Omega) u for a scalar function f on the spectrum.
  template <class F>
  void apply_function(F&& f, RealVector& diag, ComplexVector& fu) const {
    diag.setZero(n_);
    fu.setZero(n_);
    const std::size_t p = poles_.size();
    const std::size_t nr = root_origin_.size();
    std::vector<double> a(nr);
    for (std::size_t r = 0; r < nr; ++r) {
      const double lam = poles_[root_origin_[r]] + root_tau_[r];
      a[r] = f(lam) / root_norm_[r];
    }
    std::vector<double> s1(p, 0.0), s2(p, 0.0), fpole(p);
    for (std::size_t j = 0; j < p; ++j) {
      fpole[j] = f(poles_[j]);
      for (std::size_t r = 0; r < nr; ++r) {
        const double diff = (poles_[j] - poles_[root_origin_[r]]) - root_tau_[r];
        s1[j] += a[r] / (diff * diff);
        s2[j] += a[r] / diff;
      }
    }
    for (Index i = 0; i < n_; ++i) {
      const int j = pole_of_[i];
      if (j < 0) {
        const double fv = f(delta_(i));
        diag(i) = fv;
        fu(i) = fv * u_(i);
        continue;
      }
      diag(i) = w_[i] * s1[j];
      if (group_size_[j] > 1) diag(i) += fpole[j] * (1.0 - w_[i] / weights_[j]);
      fu(i) = -u_(i) * s2[j];
    }
  }

 private:
  double secular(std::size_t origin, double tau, double* deriv) const {
    double f = 1.0, df = 0.0;
    const double base = poles_[origin];
    for (std::size_t j = 0; j < poles_.size(); ++j) {
      const double diff = (poles_[j] - base) - tau;
      f += weights_[j] / diff;
      df += weights_[j] / (diff * diff);
    }
    if (deriv) *deriv = df;
    return f;
  }

  void solve_roots(double wsum) {
    const std::size_t p = poles_.size();
    for (std::size_t j = 0; j < p; ++j) {
      std::size_t origin = j;
      double lo, hi;
      if (j + 1 < p) {
        const double gap = poles_[j + 1] - poles_[j];
        if (secular(j, 0.5 * gap, nullptr) >= 0.0) {
          lo = 0.0;
          hi = 0.5 * gap;
        } else {
          origin = j + 1;
          lo = -0.5 * gap;
          hi = 0.0;
        }
      } else {
        lo = 0.0;
        hi = wsum;
      }
      double tau = 0.5 * (lo + hi);
      double df = 0.0;
      for (int it = 0; it < 200; ++it) {
        const double f = secular(origin, tau, &df);
        if (f == 0.0) break;
        if (f > 0.0) {
          hi = tau;
        } else {
          lo = tau;
        }
        double next = tau - f / df;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - tau);
        tau = next;
        if (step <= 2e-16 * std::abs(tau) || hi - lo <= 4e-16 * std::max(std::abs(lo), std::abs(hi))) {
          break;
        }
      }
      secular(origin, tau, &df);
      root_origin_.push_back(origin);
      root_tau_.push_back(tau);
      root_norm_.push_back(df);
    }
  }

  Index n_;
  RealVector delta_;
  ComplexVector u_;
  std::vector<double> w_;
  std::vector<int> pole_of_;
  std::vector<double> poles_;
  std::vector<double> weights_;
  std::vector<int> group_size_;
  std::vector<std::size_t> root_origin_;
  std::vector<double> root_tau_;
  std::vector<double> root_norm_;  // sum_j W_j / (d_j - lambda)^2
  std::vector<double> eigenvalues_;
};

inline double clipped_entropy(std::vector<double> ev) {
  double mx = 0.0;
  for (double l : ev) mx = std::max(mx, std::abs(l));
  RealVector v(static_cast<Index>(ev.size()));
  for (std::size_t i = 0; i < ev.size(); ++i) {
    v(static_cast<Index>(i)) = std::abs(ev[i]) < kClipTol * mx ? 0.0 : ev[i];
  }
  return spectrum_entropy(v);
}

// F(lambda) = ln t - ln lambda on the (clipped) support, 0 elsewhere.
struct LogWeight {
  double log_t;
  double threshold;
  double operator()(double lambda) const {
    return lambda > threshold ? log_t - std::log(lambda) : 0.0;
  }
};

class OutputEntropyEvaluator {
 public:
  explicit OutputEntropyEvaluator(const KrausChannel& phi) : phi_(&phi) {
    for (std::size_t k = 0; k < phi.size(); ++k) {
      const auto& v = phi.kraus()[k];
      if (v.is_sparse() && v.entries().size() <= 1) {
        if (!v.entries().empty()) single_.push_back(k);
      } else {
        other_.push_back(k);
      }
    }
    rank_one_ = other_.size() <= 1 && phi.d_out() > 24;
  }

  double value(const ComplexMatrix& x) const {
    if (x.cols() == 1 && rank_one_) return clipped_entropy(rank_one(x.col(0)).eigenvalues());
    if (use_gram(x)) {
      const ComplexMatrix w = stacked(x);
      return spectrum_entropy(eigvalsh(w.adjoint() * w));
    }
    return spectrum_entropy(eigvalsh(apply_matrix(*phi_, x * x.adjoint())));
  }

  ValueGrad value_grad(const ComplexMatrix& x) const {
    if (x.cols() == 1 && rank_one_) return rank_one_grad(x.col(0));
    return use_gram(x) ? gram_grad(x) : dense_grad(x);
  }

 private:
  bool use_gram(const ComplexMatrix& x) const {
    return static_cast<Index>(phi_->size()) * x.cols() <= phi_->d_out();
  }

  // Columns V_k x_j, grouped by Kraus index.
  ComplexMatrix stacked(const ComplexMatrix& x) const {
    const Index c = x.cols();
    ComplexMatrix w(phi_->d_out(), static_cast<Index>(phi_->size()) * c);
    for (std::size_t k = 0; k < phi_->size(); ++k) {
      w.middleCols(static_cast<Index>(k) * c, c) = phi_->kraus()[k].apply(x);
    }
    return w;
  }

  RankOneUpdate rank_one(const ComplexVector& x, ComplexVector* u_out = nullptr) const {
    RealVector delta = RealVector::Zero(phi_->d_out());
    for (std::size_t k : single_) {
      const auto& e = phi_->kraus()[k].entries().front();
      delta(e.row) += std::norm(e.value * x(e.col));
    }
    ComplexVector u = other_.empty() ? ComplexVector::Zero(phi_->d_out())
                                     : phi_->kraus()[other_.front()].apply(x);
    if (u_out) *u_out = u;
    return RankOneUpdate(delta, u);
  }

  ValueGrad rank_one_grad(const ComplexVector& x) const {
    ComplexVector u;
    const RankOneUpdate ru = rank_one(x, &u);
    const auto& ev = ru.eigenvalues();
    ValueGrad out;
    out.value = clipped_entropy(ev);
    double t = 0.0, mx = 0.0;
    for (double l : ev) {
      if (l > 0) t += l;
      mx = std::max(mx, std::abs(l));
    }
    out.grad = ComplexMatrix::Zero(phi_->d_in(), 1);
    if (!(t > 0)) return out;
    RealVector diag;
    ComplexVector fu;
    ru.apply_function(LogWeight{std::log(t), kClipTol * mx}, diag, fu);
    for (std::size_t k : single_) {
      const auto& e = phi_->kraus()[k].entries().front();
      out.grad(e.col, 0) += std::norm(e.value) * diag(e.row) * x(e.col);
    }
    if (!other_.empty()) out.grad.col(0) += phi_->kraus()[other_.front()].apply_adjoint(fu);
    return out;
  }

  ValueGrad gram_grad(const ComplexMatrix& x) const {
    const ComplexMatrix w = stacked(x);
    const SpectralDecomposition sd = eigh(w.adjoint() * w);
    ValueGrad out;
    out.value = spectrum_entropy(sd.eigenvalues);
    out.grad = ComplexMatrix::Zero(x.rows(), x.cols());
    const double t = sd.eigenvalues.cwiseMax(0.0).sum();
    if (!(t > 0)) return out;
    const LogWeight f{std::log(t), 0.0};
    RealVector coeff(sd.eigenvalues.size());
    for (Index i = 0; i < coeff.size(); ++i) coeff(i) = f(sd.eigenvalues(i));
    const ComplexMatrix y =
        w * (sd.eigenvectors * coeff.cast<cplx>().asDiagonal() * sd.eigenvectors.adjoint());
    const Index c = x.cols();
    for (std::size_t k = 0; k < phi_->size(); ++k) {
      out.grad += phi_->kraus()[k].apply_adjoint(ComplexMatrix(y.middleCols(static_cast<Index>(k) * c, c)));
    }
    return out;
  }

  ValueGrad dense_grad(const ComplexMatrix& x) const {
    const SpectralDecomposition sd = eigh(apply_matrix(*phi_, x * x.adjoint()));
    ValueGrad out;
    out.value = spectrum_entropy(sd.eigenvalues);
    out.grad = ComplexMatrix::Zero(x.rows(), x.cols());
    const double t = sd.eigenvalues.cwiseMax(0.0).sum();
    if (!(t > 0)) return out;
    const LogWeight f{std::log(t), 0.0};
    RealVector coeff(sd.eigenvalues.size());
    for (Index i = 0; i < coeff.size(); ++i) coeff(i) = f(sd.eigenvalues(i));
    const ComplexMatrix fm =
        sd.eigenvectors * coeff.cast<cplx>().asDiagonal() * sd.eigenvectors.adjoint();
    out.grad = apply_dual(*phi_, fm) * x;
    return out;
  }

  const KrausChannel* phi_;
  std::vector<std::size_t> single_;
  std::vector<std::size_t> other_;
  bool rank_one_ = false;
};

struct SphereResult {
  ComplexVector x;
  double value = 0.0;
  int iterations = 0;
};

// Monotone projected gradient ascent on the unit sphere with step doubling and
// halving. The returned value is never below the starting value.
template <class ValueFn, class GradFn>
SphereResult sphere_ascent(ValueFn&& value, GradFn&& value_grad, ComplexVector x,
                           int max_iter = 200, double grad_tol = 1e-7) {
  x.normalize();
  ValueGrad vg = value_grad(ComplexMatrix(x));
  SphereResult res{x, vg.value, 0};
  double step = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    ComplexVector g = vg.grad.col(0);
    g -= x.dot(g).real() * x;  // tangent part (x.dot conjugates x)
    const double gn = g.norm();
    if (gn < grad_tol) break;
    bool accepted = false;
    ComplexVector cand;
    for (int h = 0; h < 60; ++h) {
      cand = (x + (step / gn) * g).normalized();
      if (value(ComplexMatrix(cand)) > res.value) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    x = cand;
    vg = value_grad(ComplexMatrix(x));
    res = SphereResult{x, vg.value, it + 1};
    step = std::min(2.0 * step, 4.0);
  }
  return res;
}

}  // namespace qentropy::detail
