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

// Dense complex linear algebra on finite-dimensional state spaces: Hermitian
// spectral decomposition, tensor products, partial traces, purification,
// Jordan decomposition and seeded random generators.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qentropy {

using Index = Eigen::Index;
using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kClipTol = 1e-12;
inline constexpr double kNormTol = 1e-12;

// Caller broke a documented precondition (e.g. a non-Hermitian operator).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double hermitian_defect(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline ComplexMatrix hermitize(const ComplexMatrix& a) {
  return (a + a.adjoint()) * 0.5;
}

class HermitianOperator {
 public:
  // Defects up to hermit_tol * max(1, |a|_max) are treated as rounding noise
  // and removed; anything larger is a caller bug.
  explicit HermitianOperator(const ComplexMatrix& a, double hermit_tol = kHermitTol) {
    if (a.rows() != a.cols()) {
      throw DimensionError("HermitianOperator: matrix is not square");
    }
    if (a.rows() == 0) throw DimensionError("HermitianOperator: empty matrix");
    const double defect = hermitian_defect(a);
    if (defect > hermit_tol * std::max(1.0, max_abs(a))) {
      throw ContractError("HermitianOperator: Hermitian defect " +
                          std::to_string(defect) + " exceeds tolerance");
    }
    m_ = hermitize(a);
  }

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;      // descending
  ComplexMatrix eigenvectors;  // orthonormal columns, matching eigenvalues
  double clip_tol = kClipTol;

  Index rank() const {
    return static_cast<Index>((eigenvalues.array() != 0.0).count());
  }

  ComplexMatrix reconstruct() const {
    return eigenvectors * eigenvalues.cast<cplx>().asDiagonal() * eigenvectors.adjoint();
  }
};

namespace detail {

// First component with modulus above 1e-10 is rotated onto the positive real
// axis, so eigenvectors are reproducible byte for byte.
inline void fix_phases(ComplexMatrix& vecs) {
  for (Index c = 0; c < vecs.cols(); ++c) {
    for (Index r = 0; r < vecs.rows(); ++r) {
      const double mod = std::abs(vecs(r, c));
      if (mod > 1e-10) {
        vecs.col(c) *= std::conj(vecs(r, c)) / mod;
        break;
      }
    }
  }
}

inline double clip_threshold(const RealVector& ev, double clip_tol) {
  const double scale = ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
  return clip_tol * scale;
}

// Eigen-decomposition of a matrix assumed Hermitian up to rounding.
inline SpectralDecomposition eigh(const ComplexMatrix& a, double clip_tol = kClipTol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(a));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigh: eigen-decomposition failed to converge");
  }
  const Index n = a.rows();
  SpectralDecomposition out;
  out.clip_tol = clip_tol;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  const double thr = clip_threshold(out.eigenvalues, clip_tol);
  for (Index i = 0; i < n; ++i) {
    if (std::abs(out.eigenvalues(i)) < thr || out.eigenvalues(i) == 0.0) {
      out.eigenvalues(i) = 0.0;
    }
  }
  fix_phases(out.eigenvectors);
  return out;
}

// Descending eigenvalues only, clipped like eigh().
inline RealVector eigvalsh(const ComplexMatrix& a, double clip_tol = kClipTol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(a), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigvalsh: eigen-decomposition failed to converge");
  }
  RealVector ev = solver.eigenvalues().reverse();
  const double thr = clip_threshold(ev, clip_tol);
  for (Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) < thr) ev(i) = 0.0;
  }
  return ev;
}

inline double real_trace(const ComplexMatrix& a) { return a.trace().real(); }

}  // namespace detail

// Positive operator of arbitrary (finite) trace.
class DensityOperator {
 public:
  explicit DensityOperator(const ComplexMatrix& m, double hermit_tol = kHermitTol,
                           double psd_tol = kPsdTol)
      : m_(HermitianOperator(m, hermit_tol).matrix()) {
    const RealVector ev = detail::eigvalsh(m_, 0.0);
    const double lo = ev(ev.size() - 1);
    if (lo < -psd_tol * std::max(1.0, ev.cwiseAbs().maxCoeff())) {
      throw ContractError("DensityOperator: smallest eigenvalue " + std::to_string(lo) +
                          " is below -psd_tol");
    }
    trace_ = std::max(0.0, detail::real_trace(m_));
  }

  // For operators that are positive by construction (CP map outputs,
  // Gram matrices). Only hermitizes.
  static DensityOperator from_trusted(const ComplexMatrix& m) {
    DensityOperator out;
    out.m_ = hermitize(m);
    out.trace_ = std::max(0.0, detail::real_trace(out.m_));
    return out;
  }

  static DensityOperator zero(Index dim) {
    return from_trusted(ComplexMatrix::Zero(dim, dim));
  }

  static DensityOperator maximally_mixed(Index dim) {
    return from_trusted(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  double trace() const { return trace_; }

  DensityOperator scaled(double c) const {
    if (c < 0) throw DomainError("DensityOperator::scaled: negative factor");
    return from_trusted(m_ * c);
  }

  DensityOperator normalized() const {
    if (!(trace_ > 0)) throw DomainError("DensityOperator::normalized: zero trace");
    return from_trusted(m_ / trace_);
  }

  HermitianOperator hermitian() const { return HermitianOperator(m_); }

 private:
  DensityOperator() = default;
  ComplexMatrix m_;
  double trace_ = 0.0;
};

class PureState {
 public:
  explicit PureState(ComplexVector amplitudes) : psi_(std::move(amplitudes)) {
    if (psi_.size() == 0) throw DimensionError("PureState: empty vector");
    if (std::abs(psi_.norm() - 1.0) > kNormTol) {
      throw ContractError("PureState: vector is not normalized");
    }
  }

  static PureState normalized(const ComplexVector& v) {
    const double n = v.norm();
    if (!(n > 0)) throw DomainError("PureState::normalized: zero vector");
    return PureState(v / n);
  }

  static PureState basis(Index dim, Index k) {
    if (k < 0 || k >= dim) throw DimensionError("PureState::basis: index out of range");
    ComplexVector v = ComplexVector::Zero(dim);
    v(k) = 1.0;
    return PureState(std::move(v));
  }

  Index dim() const { return psi_.size(); }
  const ComplexVector& amplitudes() const { return psi_; }

  DensityOperator projector() const {
    return DensityOperator::from_trusted(psi_ * psi_.adjoint());
  }

 private:
  ComplexVector psi_;
};

class SubsystemSplit {
 public:
  explicit SubsystemSplit(std::vector<Index> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("SubsystemSplit: no factors");
    for (Index d : dims_) {
      if (d < 1) throw DimensionError("SubsystemSplit: factor dimension must be positive");
    }
  }

  const std::vector<Index>& dims() const { return dims_; }
  std::size_t size() const { return dims_.size(); }

  Index total() const {
    return std::accumulate(dims_.begin(), dims_.end(), Index{1}, std::multiplies<>());
  }

 private:
  std::vector<Index> dims_;
};

inline SpectralDecomposition spectral_decompose(const HermitianOperator& a,
                                                double clip_tol = kClipTol) {
  return detail::eigh(a.matrix(), clip_tol);
}

// Kronecker product; pair (i, j) maps to i * dim_b + j.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::from_trusted(tensor(a.matrix(), b.matrix()));
}

inline PureState tensor(const PureState& a, const PureState& b) {
  return PureState::normalized(tensor(a.amplitudes(), b.amplitudes()));
}

namespace detail {

inline ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemSplit& split,
                                   const std::vector<std::size_t>& keep) {
  if (split.total() != m.rows() || m.rows() != m.cols()) {
    throw DimensionError("partial_trace: split is inconsistent with operator dimension");
  }
  const std::size_t nf = split.size();
  std::vector<bool> kept(nf, false);
  for (std::size_t k : keep) {
    if (k >= nf) throw DimensionError("partial_trace: factor index out of range");
    kept[k] = true;
  }
  // Mixed-radix digits of every full index, recombined into kept/traced parts.
  std::vector<Index> stride(nf);
  Index s = 1;
  for (std::size_t f = nf; f-- > 0;) {
    stride[f] = s;
    s *= split.dims()[f];
  }
  Index dk = 1, dt = 1;
  for (std::size_t f = 0; f < nf; ++f) (kept[f] ? dk : dt) *= split.dims()[f];

  const Index n = m.rows();
  std::vector<Index> kidx(n), tidx(n);
  for (Index full = 0; full < n; ++full) {
    Index ki = 0, ti = 0;
    for (std::size_t f = 0; f < nf; ++f) {
      const Index digit = (full / stride[f]) % split.dims()[f];
      if (kept[f]) {
        ki = ki * split.dims()[f] + digit;
      } else {
        ti = ti * split.dims()[f] + digit;
      }
    }
    kidx[full] = ki;
    tidx[full] = ti;
  }
  std::vector<Index> full_of(dk * dt);
  for (Index full = 0; full < n; ++full) full_of[kidx[full] * dt + tidx[full]] = full;

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Index a = 0; a < dk; ++a) {
    for (Index b = 0; b < dk; ++b) {
      cplx acc = 0.0;
      for (Index t = 0; t < dt; ++t) acc += m(full_of[a * dt + t], full_of[b * dt + t]);
      out(a, b) = acc;
    }
  }
  return out;
}

}  // namespace detail

inline DensityOperator partial_trace(const DensityOperator& rho, const SubsystemSplit& split,
                                     const std::vector<std::size_t>& keep) {
  return DensityOperator::from_trusted(detail::partial_trace(rho.matrix(), split, keep));
}

// Minimal purification of rho / Tr rho on system (x) reference, reference
// dimension equal to the numerical rank; amplitude index is i * rank + j.
inline PureState purify(const DensityOperator& rho, double clip_tol = kClipTol) {
  if (!(rho.trace() > 0)) throw DomainError("purify: zero operator has no purification");
  const SpectralDecomposition sd = detail::eigh(rho.matrix() / rho.trace(), clip_tol);
  Index r = 0;
  while (r < sd.eigenvalues.size() && sd.eigenvalues(r) > 0) ++r;
  if (r == 0) throw DomainError("purify: operator has no positive eigenvalue");
  ComplexVector psi = ComplexVector::Zero(rho.dim() * r);
  for (Index j = 0; j < r; ++j) {
    const double amp = std::sqrt(sd.eigenvalues(j));
    for (Index i = 0; i < rho.dim(); ++i) psi(i * r + j) += amp * sd.eigenvectors(i, j);
  }
  return PureState::normalized(psi);
}

inline double trace_norm(const HermitianOperator& a) {
  return detail::eigvalsh(a.matrix(), 0.0).cwiseAbs().sum();
}

// ([a]_+, [a]_-) with a = [a]_+ - [a]_-.
inline std::pair<DensityOperator, DensityOperator> jordan_parts(const HermitianOperator& a,
                                                                double clip_tol = kClipTol) {
  const SpectralDecomposition sd = detail::eigh(a.matrix(), clip_tol);
  const Index n = a.dim();
  ComplexMatrix plus = ComplexMatrix::Zero(n, n);
  ComplexMatrix minus = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const double l = sd.eigenvalues(i);
    const auto v = sd.eigenvectors.col(i);
    if (l > 0) {
      plus.noalias() += l * v * v.adjoint();
    } else if (l < 0) {
      minus.noalias() -= l * v * v.adjoint();
    }
  }
  return {DensityOperator::from_trusted(plus), DensityOperator::from_trusted(minus)};
}

// Numerical rank: eigenvalues above rank_tol * largest eigenvalue.
inline Index numerical_rank(const ComplexMatrix& hermitian, double rank_tol = 1e-9) {
  const RealVector ev = detail::eigvalsh(hermitian, 0.0);
  if (ev.size() == 0 || ev(0) <= 0) return 0;
  return static_cast<Index>((ev.array() > rank_tol * ev(0)).count());
}

// ---------------------------------------------------------------------------
// Seeded generators. Every function takes its seed explicitly; there is no
// global generator state.

using Rng = std::mt19937_64;

inline ComplexMatrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  }
  return g;
}

// Haar-distributed isometry (rows >= cols) from the QR of a Ginibre matrix.
inline ComplexMatrix haar_isometry(Index rows, Index cols, Rng& rng) {
  if (cols > rows) throw DomainError("haar_isometry: more columns than rows");
  const ComplexMatrix g = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  const ComplexMatrix r = qr.matrixQR();
  for (Index j = 0; j < cols; ++j) {
    const double mod = std::abs(r(j, j));
    if (mod > 0) q.col(j) *= r(j, j) / mod;
  }
  return q;
}

inline ComplexMatrix random_unitary(Index dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_isometry(dim, dim, rng);
}

// Unit-trace state of exact rank `rank` (Wishart/Ginibre construction).
inline DensityOperator random_density(Index dim, Index rank, std::uint64_t seed) {
  if (dim < 1 || rank < 1 || rank > dim) {
    throw DomainError("random_density: need 1 <= rank <= dim");
  }
  Rng rng(seed);
  const ComplexMatrix g = ginibre(dim, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= detail::real_trace(rho);
  return DensityOperator::from_trusted(rho);
}

inline PureState random_pure(Index dim, std::uint64_t seed) {
  if (dim < 1) throw DomainError("random_pure: dimension must be positive");
  Rng rng(seed);
  return PureState::normalized(ginibre(dim, 1, rng).col(0));
}

// Isometry U = A (A^dagger A)^{-1/2} (polar factor); A must have full column rank.
inline ComplexMatrix polar_isometry(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// splitmix64 step; derives independent per-case seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace qentropy
