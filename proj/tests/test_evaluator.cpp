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

#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qentropy/detail/evaluator.hpp"

namespace qentropy::detail {
namespace {

// Output entropy of x x^dagger computed without the evaluator.
double reference_value(const KrausChannel& phi, const ComplexMatrix& x) {
  std::vector<ComplexMatrix> ops;
  for (const auto& v : phi.kraus()) ops.push_back(v.to_dense());
  return oracle::entropy(oracle::apply_kraus(ops, x * x.adjoint()));
}

struct RouteCase {
  const char* name;
  KrausChannel phi;
  Index cols;
};

std::vector<RouteCase> route_cases() {
  std::vector<RouteCase> out;
  // Kraus count * cols <= d_out selects the Gram route.
  out.push_back({"gram", random_channel(4, 8, 2, true, 1), 1});
  out.push_back({"gram_block", random_channel(3, 8, 2, true, 2), 2});
  out.push_back({"dense", random_channel(4, 4, 3, true, 3), 1});
  out.push_back({"dense_block", random_channel(4, 3, 3, true, 4), 2});
  // One non-single-entry operator and d_out > 24 selects the secular route.
  out.push_back({"rank_one", make_example1(std::numbers::ln2, 40), 1});
  out.push_back({"rank_one_mid_alpha", make_example1(0.4, 30), 1});
  return out;
}

TEST(Evaluator, ValueMatchesReferenceOnEveryRoute) {
  for (const auto& rc : route_cases()) {
    const OutputEntropyEvaluator ev(rc.phi);
    for (std::uint64_t s = 0; s < 10; ++s) {
      Rng rng(s);
      ComplexMatrix x = ginibre(rc.phi.d_in(), rc.cols, rng);
      x /= x.norm();
      EXPECT_NEAR(ev.value(x), reference_value(rc.phi, x), 1e-9) << rc.name << " seed " << s;
      EXPECT_NEAR(ev.value_grad(x).value, ev.value(x), 1e-12) << rc.name;
    }
  }
}

TEST(Evaluator, GradientMatchesFiniteDifferences) {
  for (const auto& rc : route_cases()) {
    const OutputEntropyEvaluator ev(rc.phi);
    Rng rng(17);
    ComplexMatrix x = ginibre(rc.phi.d_in(), rc.cols, rng);
    x /= x.norm();
    const ComplexMatrix g = ev.value_grad(x).grad;
    const ComplexMatrix fd = oracle::fd_gradient([&](const ComplexMatrix& y) { return reference_value(rc.phi, y); }, x);
    EXPECT_LT(max_abs(g - fd), 1e-6 * std::max(1.0, max_abs(fd))) << rc.name;
  }
}

TEST(Evaluator, SecularSpectrumMatchesDenseEigensolver) {
  Rng rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 8 + trial % 20;
    RealVector delta(n);
    for (Index i = 0; i < n; ++i) delta(i) = unif(rng);
    // Repeated poles and zero weights exercise merging and deflation.
    if (n > 4) {
      delta(1) = delta(0);
      delta(3) = delta(2);
    }
    ComplexVector u = ginibre(n, 1, rng).col(0) * 0.3;
    if (trial % 3 == 0) u(n - 1) = 0.0;
    if (trial % 5 == 0) u.head(n / 2).setZero();
    const RankOneUpdate ru(delta, u);
    const ComplexMatrix dense = ComplexMatrix(delta.cast<cplx>().asDiagonal()) + u * u.adjoint();
    std::vector<double> ref = oracle::eigenvalues(dense);
    std::vector<double> got = ru.eigenvalues();
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-12) << "trial " << trial;

    // f(Omega) through the secular representation, checked against
    // the dense spectral calculus for f = ln on a shifted spectrum.
    auto f = [](double l) { return std::log(1.0 + l); };
    RealVector diag;
    ComplexVector fu;
    ru.apply_function(f, diag, fu);
    const SpectralDecomposition sd = eigh(dense, 0.0);
    RealVector fl(sd.eigenvalues.size());
    for (Index i = 0; i < fl.size(); ++i) fl(i) = f(sd.eigenvalues(i));
    const ComplexMatrix fm = sd.eigenvectors * fl.cast<cplx>().asDiagonal() * sd.eigenvectors.adjoint();
    EXPECT_LT((diag - fm.diagonal().real()).cwiseAbs().maxCoeff(), 1e-10) << "trial " << trial;
    EXPECT_LT((fu - fm * u).cwiseAbs().maxCoeff(), 1e-10) << "trial " << trial;
  }
}

TEST(Evaluator, SphereAscentIsMonotoneAndStaysOnSphere) {
  const KrausChannel phi = random_channel(5, 5, 3, true, 2);
  const OutputEntropyEvaluator ev(phi);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexVector x0 = random_pure(5, s).amplitudes();
    const double start = ev.value(ComplexMatrix(x0));
    const SphereResult r = sphere_ascent([&](const ComplexMatrix& x) { return ev.value(x); },
                                         [&](const ComplexMatrix& x) { return ev.value_grad(x); }, x0);
    EXPECT_GE(r.value, start);
    EXPECT_NEAR(r.x.norm(), 1.0, 1e-12);
    EXPECT_NEAR(r.value, ev.value(ComplexMatrix(r.x)), 1e-12);
    EXPECT_LE(r.value, std::log(3.0) + 1e-12);
  }
}

}  // namespace
}  // namespace qentropy::detail
