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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "pdnoise/grid.hpp"

namespace pdnoise {

using Index = std::int32_t;

/// Compressed sparse column matrix. Row indices are sorted within a column.
struct CscMatrix {
  std::size_t n = 0;
  std::vector<Index> col_ptr;
  std::vector<Index> row_idx;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  /// Entry (i, j), zero when not stored. O(log column length).
  double at(std::size_t i, std::size_t j) const;
  std::vector<double> multiply(std::span<const double> x) const;
  /// Row-major n*n copy; only meant for small matrices in tests and tools.
  std::vector<double> to_dense() const;
};

/// Sparse Cholesky factor P A P^T = L L^T with a fill-reducing ordering.
class CholeskyFactor {
 public:
  /// Factors the symmetric matrix `a` (both triangles stored).
  /// Throws NotSpd naming the original node index of the failing pivot.
  explicit CholeskyFactor(const CscMatrix& a);

  std::size_t dimension() const { return n_; }
  std::size_t nnz() const { return l_.values.size(); }

  /// Solves A x = b in place. Safe to call concurrently.
  void solve_in_place(std::span<double> b, std::span<double> scratch) const;
  std::vector<double> solve(std::span<const double> b) const;

  /// P^T L L^T P as a dense row-major matrix, for residual checks.
  std::vector<double> reconstruct_dense() const;

  /// perm()[new] = old.
  const std::vector<Index>& perm() const { return perm_; }

 private:
  std::size_t n_ = 0;
  std::vector<Index> perm_;
  CscMatrix l_;  // diagonal entry first in every column
};

/// Backward-Euler companion data of one bump branch.
struct BranchCompanion {
  std::size_t node = 0;
  double conductance = 0.0;   // dt / (L + R dt), or 1/R without inductance
  double history_gain = 0.0;  // L / (L + R dt)
};

/// A = G + C/dt (+ bump companion conductances), assembled once per dt.
///
/// Voltages are droops relative to vdd, so the ideal supply sits at 0 and the
/// right-hand side only carries load currents and history terms.
class SystemMatrix {
 public:
  std::size_t dimension() const { return matrix_.n; }
  /// Time step in seconds; +inf for the DC (conductance-only) system.
  double dt() const { return dt_; }
  bool is_dc() const;
  const CscMatrix& matrix() const { return matrix_; }
  /// C_i / dt per node (all zero for DC).
  const std::vector<double>& cap_over_dt() const { return cap_over_dt_; }
  const std::vector<BranchCompanion>& branches() const { return branches_; }

  bool factored() const { return factor_ != nullptr; }
  /// Throws InvalidArgument if the system has not been factored.
  const CholeskyFactor& factor() const;

 private:
  friend SystemMatrix stamp_system(const PdnGrid&, double);
  friend SystemMatrix stamp_conductance(const PdnGrid&);
  friend SystemMatrix factor(SystemMatrix);

  double dt_ = 0.0;
  CscMatrix matrix_;
  std::vector<double> cap_over_dt_;
  std::vector<BranchCompanion> branches_;
  std::shared_ptr<const CholeskyFactor> factor_;
};

/// Transient system for time step dt (seconds).
/// Throws InvalidArgument for dt <= 0 or invalid indices, NotSpd for a
/// non-positive diagonal.
SystemMatrix stamp_system(const PdnGrid& grid, double dt);

/// DC system: conductances only, inductors shorted.
SystemMatrix stamp_conductance(const PdnGrid& grid);

/// Attaches a Cholesky factor; the factor is shared by copies.
SystemMatrix factor(SystemMatrix sys);

}  // namespace pdnoise
