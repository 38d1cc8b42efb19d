// Copyright 2026 The pdnoise Authors.
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

#include "pdnoise/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>

#include "pdnoise/error.hpp"

namespace pdnoise {
namespace {

struct Triplet {
  Index row;
  Index col;
  double value;
};

CscMatrix assemble(std::size_t n, std::vector<Triplet> entries) {
  // Stable so duplicate entries are summed in insertion order; (i, j) and
  // (j, i) then receive bit-identical sums.
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  CscMatrix m;
  m.n = n;
  m.col_ptr.assign(n + 1, 0);
  for (std::size_t k = 0; k < entries.size();) {
    const auto& t = entries[k];
    double sum = 0.0;
    std::size_t e = k;
    while (e < entries.size() && entries[e].row == t.row && entries[e].col == t.col) {
      sum += entries[e++].value;
    }
    m.row_idx.push_back(t.row);
    m.values.push_back(sum);
    ++m.col_ptr[static_cast<std::size_t>(t.col) + 1];
    k = e;
  }
  for (std::size_t j = 0; j < n; ++j) m.col_ptr[j + 1] += m.col_ptr[j];
  return m;
}

void check_indices(const PdnGrid& grid) {
  const std::size_t n = grid.node_count();
  if (n == 0) throw InvalidArgument("stamp: grid has no nodes");
  if (n > static_cast<std::size_t>(std::numeric_limits<Index>::max())) {
    throw InvalidArgument("stamp: grid too large for 32-bit indices");
  }
  if (grid.node_caps.size() != n) throw InvalidArgument("stamp: node_caps size mismatch");
  for (const auto& e : grid.edges) {
    if (e.a >= n || e.b >= n || e.a == e.b) throw InvalidArgument("stamp: invalid edge endpoints");
  }
  for (const auto& b : grid.bumps) {
    if (b.node >= n) throw InvalidArgument("stamp: bump refers to missing node");
    if (!(b.resistance > 0.0)) throw InvalidArgument("stamp: bump resistance must be positive");
    if (b.inductance < 0.0) throw InvalidArgument("stamp: bump inductance must be >= 0");
  }
}

// Elimination tree of a matrix given by its upper triangle (CSC).
std::vector<Index> etree(const CscMatrix& upper) {
  const auto n = static_cast<Index>(upper.n);
  std::vector<Index> parent(upper.n, -1);
  std::vector<Index> ancestor(upper.n, -1);
  for (Index k = 0; k < n; ++k) {
    for (Index p = upper.col_ptr[k]; p < upper.col_ptr[k + 1]; ++p) {
      Index i = upper.row_idx[p];
      while (i != -1 && i < k) {
        const Index next = ancestor[i];
        ancestor[i] = k;
        if (next == -1) parent[i] = k;
        i = next;
      }
    }
  }
  return parent;
}

// Nonzero pattern of row k of L, written to stack[top..n). Returns top.
Index ereach(const CscMatrix& upper, Index k, const std::vector<Index>& parent,
             std::vector<Index>& stack, std::vector<Index>& mark) {
  const auto n = static_cast<Index>(upper.n);
  Index top = n;
  mark[k] = k;
  for (Index p = upper.col_ptr[k]; p < upper.col_ptr[k + 1]; ++p) {
    Index i = upper.row_idx[p];
    if (i > k) continue;
    Index len = 0;
    // stack[0..len) is scratch for the path; top..n is the result.
    for (; mark[i] != k; i = parent[i]) {
      stack[len++] = i;
      mark[i] = k;
    }
    while (len > 0) stack[--top] = stack[--len];
  }
  return top;
}

}  // namespace

double CscMatrix::at(std::size_t i, std::size_t j) const {
  const auto begin = row_idx.begin() + col_ptr[j];
  const auto end = row_idx.begin() + col_ptr[j + 1];
  const auto it = std::lower_bound(begin, end, static_cast<Index>(i));
  if (it == end || *it != static_cast<Index>(i)) return 0.0;
  return values[static_cast<std::size_t>(it - row_idx.begin())];
}

std::vector<double> CscMatrix::multiply(std::span<const double> x) const {
  if (x.size() != n) throw ShapeMismatch("csc multiply: vector length mismatch");
  std::vector<double> y(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (Index p = col_ptr[j]; p < col_ptr[j + 1]; ++p) y[static_cast<std::size_t>(row_idx[p])] += values[p] * x[j];
  }
  return y;
}

std::vector<double> CscMatrix::to_dense() const {
  std::vector<double> d(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (Index p = col_ptr[j]; p < col_ptr[j + 1]; ++p) d[static_cast<std::size_t>(row_idx[p]) * n + j] = values[p];
  }
  return d;
}

CholeskyFactor::CholeskyFactor(const CscMatrix& a) : n_(a.n) {
  const auto n = static_cast<Index>(n_);

  // Fill-reducing ordering (approximate minimum degree).
  Eigen::Map<const Eigen::SparseMatrix<double, Eigen::ColMajor, Index>> view(
      n, n, static_cast<Index>(a.nnz()), a.col_ptr.data(), a.row_idx.data(), a.values.data());
  Eigen::SparseMatrix<double, Eigen::ColMajor, Index> pattern = view;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, Index> order;
  Eigen::AMDOrdering<Index>{}(pattern, order);
  perm_.assign(order.indices().data(), order.indices().data() + n);
  std::vector<Index> inv(n_);
  for (Index k = 0; k < n; ++k) inv[perm_[k]] = k;

  // Upper triangle of P A P^T.
  CscMatrix c;
  c.n = n_;
  c.col_ptr.assign(n_ + 1, 0);
  for (Index j = 0; j < n; ++j) {
    for (Index p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p) {
      const Index pi = inv[a.row_idx[p]];
      const Index pj = inv[j];
      if (pi <= pj) ++c.col_ptr[pj + 1];
    }
  }
  for (std::size_t j = 0; j < n_; ++j) c.col_ptr[j + 1] += c.col_ptr[j];
  c.row_idx.resize(c.col_ptr[n_]);
  c.values.resize(c.col_ptr[n_]);
  {
    std::vector<Index> next(c.col_ptr.begin(), c.col_ptr.end() - 1);
    for (Index j = 0; j < n; ++j) {
      for (Index p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p) {
        const Index pi = inv[a.row_idx[p]];
        const Index pj = inv[j];
        if (pi > pj) continue;
        const Index q = next[pj]++;
        c.row_idx[q] = pi;
        c.values[q] = a.values[p];
      }
    }
  }

  const auto parent = etree(c);
  std::vector<Index> stack(n_), mark(n_, -1);

  // Symbolic: column counts from the row patterns.
  std::vector<Index> counts(n_, 1);
  for (Index k = 0; k < n; ++k) {
    for (Index top = ereach(c, k, parent, stack, mark); top < n; ++top) ++counts[stack[top]];
  }
  l_.n = n_;
  l_.col_ptr.assign(n_ + 1, 0);
  for (std::size_t j = 0; j < n_; ++j) l_.col_ptr[j + 1] = l_.col_ptr[j] + counts[j];
  l_.row_idx.resize(l_.col_ptr[n_]);
  l_.values.resize(l_.col_ptr[n_]);

  // Numeric: up-looking, one row of L per step.
  std::vector<Index> fill(l_.col_ptr.begin(), l_.col_ptr.end() - 1);
  std::vector<double> x(n_, 0.0);
  std::fill(mark.begin(), mark.end(), -1);
  for (Index k = 0; k < n; ++k) {
    Index top = ereach(c, k, parent, stack, mark);
    x[k] = 0.0;
    for (Index p = c.col_ptr[k]; p < c.col_ptr[k + 1]; ++p) x[c.row_idx[p]] = c.values[p];
    double d = x[k];
    x[k] = 0.0;
    for (; top < n; ++top) {
      const Index i = stack[top];
      const double lki = x[i] / l_.values[l_.col_ptr[i]];
      x[i] = 0.0;
      for (Index p = l_.col_ptr[i] + 1; p < fill[i]; ++p) x[l_.row_idx[p]] -= l_.values[p] * lki;
      d -= lki * lki;
      const Index p = fill[i]++;
      l_.row_idx[p] = k;
      l_.values[p] = lki;
    }
    if (!(d > 0.0)) throw NotSpd(static_cast<std::size_t>(perm_[k]), d);
    const Index p = fill[k]++;
    l_.row_idx[p] = k;
    l_.values[p] = std::sqrt(d);
  }
}

void CholeskyFactor::solve_in_place(std::span<double> b, std::span<double> y) const {
  if (b.size() != n_ || y.size() < n_) throw ShapeMismatch("cholesky solve: length mismatch");
  const auto n = static_cast<Index>(n_);
  const Index* cp = l_.col_ptr.data();
  const Index* ri = l_.row_idx.data();
  const double* lv = l_.values.data();
  for (Index k = 0; k < n; ++k) y[k] = b[perm_[k]];
  for (Index j = 0; j < n; ++j) {
    const double yj = (y[j] /= lv[cp[j]]);
    for (Index p = cp[j] + 1; p < cp[j + 1]; ++p) y[ri[p]] -= lv[p] * yj;
  }
  for (Index j = n - 1; j >= 0; --j) {
    double s = y[j];
    for (Index p = cp[j] + 1; p < cp[j + 1]; ++p) s -= lv[p] * y[ri[p]];
    y[j] = s / lv[cp[j]];
  }
  for (Index k = 0; k < n; ++k) b[perm_[k]] = y[k];
}

std::vector<double> CholeskyFactor::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end()), scratch(n_);
  solve_in_place(x, scratch);
  return x;
}

std::vector<double> CholeskyFactor::reconstruct_dense() const {
  const std::size_t n = n_;
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (Index p = l_.col_ptr[j]; p < l_.col_ptr[j + 1]; ++p) l[static_cast<std::size_t>(l_.row_idx[p]) * n + j] = l_.values[p];
  }
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k <= std::min(i, j); ++k) s += l[i * n + k] * l[j * n + k];
      out[static_cast<std::size_t>(perm_[i]) * n + static_cast<std::size_t>(perm_[j])] = s;
    }
  }
  return out;
}

bool SystemMatrix::is_dc() const { return std::isinf(dt_); }

const CholeskyFactor& SystemMatrix::factor() const {
  if (!factor_) throw InvalidArgument("system matrix has not been factored");
  return *factor_;
}

SystemMatrix stamp_system(const PdnGrid& grid, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("stamp: dt must be positive");
  check_indices(grid);
  const std::size_t n = grid.node_count();
  const bool dc = std::isinf(dt);

  SystemMatrix sys;
  sys.dt_ = dt;
  sys.cap_over_dt_.assign(n, 0.0);
  if (!dc) {
    for (std::size_t i = 0; i < n; ++i) sys.cap_over_dt_[i] = grid.node_caps[i] / dt;
  }

  std::vector<Triplet> t;
  t.reserve(4 * grid.edges.size() + n + grid.bumps.size());
  for (const auto& e : grid.edges) {
    const auto a = static_cast<Index>(e.a);
    const auto b = static_cast<Index>(e.b);
    t.push_back({a, a, e.conductance});
    t.push_back({b, b, e.conductance});
    t.push_back({a, b, -e.conductance});
    t.push_back({b, a, -e.conductance});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!dc) t.push_back({static_cast<Index>(i), static_cast<Index>(i), sys.cap_over_dt_[i]});
  }
  for (const auto& bump : grid.bumps) {
    BranchCompanion br;
    br.node = bump.node;
    if (dc || bump.inductance == 0.0) {
      br.conductance = 1.0 / bump.resistance;
      br.history_gain = 0.0;
    } else {
      const double denom = bump.inductance + bump.resistance * dt;
      br.conductance = dt / denom;
      br.history_gain = bump.inductance / denom;
    }
    sys.branches_.push_back(br);
    t.push_back({static_cast<Index>(bump.node), static_cast<Index>(bump.node), br.conductance});
  }
  sys.matrix_ = assemble(n, std::move(t));

  for (std::size_t i = 0; i < n; ++i) {
    const double d = sys.matrix_.at(i, i);
    if (!(d > 0.0)) throw NotSpd(i, d);
  }
  return sys;
}

SystemMatrix stamp_conductance(const PdnGrid& grid) {
  return stamp_system(grid, std::numeric_limits<double>::infinity());
}

SystemMatrix factor(SystemMatrix sys) {
  sys.factor_ = std::make_shared<const CholeskyFactor>(sys.matrix_);
  return sys;
}

}  // namespace pdnoise
