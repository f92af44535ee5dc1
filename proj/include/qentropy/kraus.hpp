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

// A single Kraus operator, stored densely or as a list of nonzero entries.
// The sparse form keeps truncations of infinite Kraus families (thousands of
// rank-one projectors) in linear memory.

#include <algorithm>
#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "qentropy/opcore.hpp"

namespace qentropy {

struct SparseEntry {
  Index row = 0;
  Index col = 0;
  cplx value{};
};

class KrausOperator {
 public:
  KrausOperator() : rows_(0), cols_(0), data_(ComplexMatrix()) {}

  // Implicit on purpose: dense matrices are the common currency.
  KrausOperator(ComplexMatrix m) : rows_(m.rows()), cols_(m.cols()), data_(std::move(m)) {}

  static KrausOperator sparse(Index rows, Index cols, std::vector<SparseEntry> entries) {
    for (const auto& e : entries) {
      if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
        throw DimensionError("KrausOperator::sparse: entry outside the matrix");
      }
    }
    std::sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    KrausOperator op;
    op.rows_ = rows;
    op.cols_ = cols;
    op.data_ = std::move(entries);
    return op;
  }

  static KrausOperator diagonal(const ComplexVector& d) {
    std::vector<SparseEntry> entries;
    for (Index i = 0; i < d.size(); ++i) {
      if (d(i) != cplx(0.0)) entries.push_back({i, i, d(i)});
    }
    return sparse(d.size(), d.size(), std::move(entries));
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  bool is_sparse() const { return std::holds_alternative<std::vector<SparseEntry>>(data_); }
  const ComplexMatrix& dense_matrix() const { return std::get<ComplexMatrix>(data_); }
  const std::vector<SparseEntry>& entries() const {
    return std::get<std::vector<SparseEntry>>(data_);
  }

  std::size_t nonzeros() const {
    return is_sparse() ? entries().size() : static_cast<std::size_t>(rows_ * cols_);
  }

  bool is_diagonal() const {
    if (!is_sparse()) return false;
    return std::all_of(entries().begin(), entries().end(),
                       [](const SparseEntry& e) { return e.row == e.col; });
  }

  ComplexMatrix to_dense() const {
    if (!is_sparse()) return dense_matrix();
    ComplexMatrix m = ComplexMatrix::Zero(rows_, cols_);
    for (const auto& e : entries()) m(e.row, e.col) += e.value;
    return m;
  }

  ComplexVector apply(const ComplexVector& x) const {
    if (!is_sparse()) return dense_matrix() * x;
    ComplexVector y = ComplexVector::Zero(rows_);
    for (const auto& e : entries()) y(e.row) += e.value * x(e.col);
    return y;
  }

  ComplexMatrix apply(const ComplexMatrix& x) const {
    if (!is_sparse()) return dense_matrix() * x;
    ComplexMatrix y = ComplexMatrix::Zero(rows_, x.cols());
    for (const auto& e : entries()) y.row(e.row) += e.value * x.row(e.col);
    return y;
  }

  ComplexVector apply_adjoint(const ComplexVector& y) const {
    if (!is_sparse()) return dense_matrix().adjoint() * y;
    ComplexVector x = ComplexVector::Zero(cols_);
    for (const auto& e : entries()) x(e.col) += std::conj(e.value) * y(e.row);
    return x;
  }

  ComplexMatrix apply_adjoint(const ComplexMatrix& y) const {
    if (!is_sparse()) return dense_matrix().adjoint() * y;
    ComplexMatrix x = ComplexMatrix::Zero(cols_, y.cols());
    for (const auto& e : entries()) x.row(e.col) += std::conj(e.value) * y.row(e.row);
    return x;
  }

  // out += V rho V^dagger
  void sandwich_into(const ComplexMatrix& rho, ComplexMatrix& out) const {
    if (!is_sparse()) {
      const ComplexMatrix& v = dense_matrix();
      out.noalias() += v * rho * v.adjoint();
      return;
    }
    for (const auto& a : entries()) {
      for (const auto& b : entries()) {
        out(a.row, b.row) += a.value * rho(a.col, b.col) * std::conj(b.value);
      }
    }
  }

  // out += V^dagger x V
  void adjoint_sandwich_into(const ComplexMatrix& x, ComplexMatrix& out) const {
    if (!is_sparse()) {
      const ComplexMatrix& v = dense_matrix();
      out.noalias() += v.adjoint() * x * v;
      return;
    }
    for (const auto& a : entries()) {
      for (const auto& b : entries()) {
        out(a.col, b.col) += std::conj(a.value) * x(a.row, b.row) * b.value;
      }
    }
  }

  // out += V^dagger V
  void gram_into(ComplexMatrix& out) const {
    if (!is_sparse()) {
      out.noalias() += dense_matrix().adjoint() * dense_matrix();
      return;
    }
    for (const auto& a : entries()) {
      for (const auto& b : entries()) {
        if (a.row == b.row) out(a.col, b.col) += std::conj(a.value) * b.value;
      }
    }
  }

  // Tr(A^dagger B)
  friend cplx hs_inner(const KrausOperator& a, const KrausOperator& b) {
    if (!a.is_sparse() && !b.is_sparse()) {
      return (a.dense_matrix().adjoint() * b.dense_matrix()).trace();
    }
    if (a.is_sparse() && b.is_sparse()) {
      cplx acc = 0.0;
      auto ia = a.entries().begin();
      auto ib = b.entries().begin();
      while (ia != a.entries().end() && ib != b.entries().end()) {
        if (ia->row == ib->row && ia->col == ib->col) {
          acc += std::conj(ia->value) * ib->value;
          ++ia;
          ++ib;
        } else if (ia->row < ib->row || (ia->row == ib->row && ia->col < ib->col)) {
          ++ia;
        } else {
          ++ib;
        }
      }
      return acc;
    }
    if (a.is_sparse()) {
      cplx acc = 0.0;
      for (const auto& e : a.entries()) acc += std::conj(e.value) * b.dense_matrix()(e.row, e.col);
      return acc;
    }
    return std::conj(hs_inner(b, a));
  }

  // Largest singular value.
  double op_norm() const {
    if (is_sparse()) {
      // Partial permutation pattern: singular values are the entry moduli.
      std::vector<Index> rows, cols;
      double mx = 0.0;
      for (const auto& e : entries()) {
        rows.push_back(e.row);
        cols.push_back(e.col);
        mx = std::max(mx, std::abs(e.value));
      }
      std::sort(rows.begin(), rows.end());
      std::sort(cols.begin(), cols.end());
      const bool monomial = std::adjacent_find(rows.begin(), rows.end()) == rows.end() &&
                            std::adjacent_find(cols.begin(), cols.end()) == cols.end();
      if (monomial) return mx;
    }
    const ComplexMatrix d = to_dense();
    if (d.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(d);
    return svd.singularValues()(0);
  }

  KrausOperator scaled(cplx c) const {
    if (!is_sparse()) return KrausOperator(ComplexMatrix(dense_matrix() * c));
    std::vector<SparseEntry> e = entries();
    for (auto& x : e) x.value *= c;
    return sparse(rows_, cols_, std::move(e));
  }

  // a * b
  friend KrausOperator product(const KrausOperator& a, const KrausOperator& b) {
    if (a.cols() != b.rows()) throw DimensionError("KrausOperator product: inner dimension mismatch");
    if (a.is_sparse() && b.is_sparse()) {
      std::map<std::pair<Index, Index>, cplx> acc;
      for (const auto& x : a.entries()) {
        for (const auto& y : b.entries()) {
          if (x.col == y.row) acc[{x.row, y.col}] += x.value * y.value;
        }
      }
      std::vector<SparseEntry> out;
      for (const auto& [key, v] : acc) {
        if (v != cplx(0.0)) out.push_back({key.first, key.second, v});
      }
      return sparse(a.rows(), b.cols(), std::move(out));
    }
    if (b.is_sparse()) {
      return KrausOperator(ComplexMatrix(b.apply_adjoint(ComplexMatrix(a.dense_matrix().adjoint())).adjoint()));
    }
    return KrausOperator(a.apply(b.dense_matrix()));
  }

  friend KrausOperator kron(const KrausOperator& a, const KrausOperator& b) {
    if (a.is_sparse() && b.is_sparse()) {
      std::vector<SparseEntry> out;
      out.reserve(a.entries().size() * b.entries().size());
      for (const auto& x : a.entries()) {
        for (const auto& y : b.entries()) {
          out.push_back({x.row * b.rows() + y.row, x.col * b.cols() + y.col, x.value * y.value});
        }
      }
      return sparse(a.rows() * b.rows(), a.cols() * b.cols(), std::move(out));
    }
    return KrausOperator(tensor(a.to_dense(), b.to_dense()));
  }

 private:
  Index rows_;
  Index cols_;
  std::variant<ComplexMatrix, std::vector<SparseEntry>> data_;
};

}  // namespace qentropy
