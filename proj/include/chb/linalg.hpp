#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "chb/parallel.hpp"

namespace chb {

using DenseVector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
bool all_finite(std::span<const double> a);

// Triplet accumulator for finite-element scatter. Duplicate (row, col)
// entries are summed when the matrix is built.
class AssemblyBuffer {
public:
  AssemblyBuffer(int rows, int cols);
  void reserve(std::size_t nnz_estimate);
  void add(int row, int col, double value);
  void clear();
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return vals_.size(); }

private:
  friend class SparseMatrix;
  int rows_, cols_;
  std::vector<int> r_, c_;
  std::vector<double> vals_;
};

// Immutable CSR matrix with sorted, duplicate-free column indices per row.
class SparseMatrix {
public:
  SparseMatrix() = default;
  static SparseMatrix from_buffer(const AssemblyBuffer& buf);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return vals_.size(); }

  void matvec(std::span<const double> x, std::span<double> y,
              Exec exec = default_exec()) const;
  DenseVector matvec(std::span<const double> x) const;

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return vals_; }

  // Stored value at (r, c), or 0 if the entry is not in the pattern.
  double coeff(int r, int c) const;

private:
  int rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> vals_;
};

// Sparse LU with partial pivoting; factor once, solve many.
class LuFactorization {
public:
  explicit LuFactorization(const SparseMatrix& A);
  ~LuFactorization();
  LuFactorization(LuFactorization&&) noexcept;
  LuFactorization& operator=(LuFactorization&&) noexcept;

  // Solves A x = b. One step of iterative refinement is applied if the
  // residual misses 1e-10 * (1 + |b|_2).
  DenseVector solve(std::span<const double> b) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot direct solve with the same contract as LuFactorization::solve.
DenseVector solve_direct(const SparseMatrix& A, const DenseVector& b);

// Solves the singular Neumann-type system A x = b subject to the discrete
// zero-mean constraint sum_i w_i x_i = 0 through the bordered saddle system
// [[A, w], [w^T, 0]]. The scalar multiplier absorbs the component of b
// outside range(A), so constant right-hand sides solve the projected
// problem. Throws CompatibilityError if the projected residual check fails.
class MeanConstrainedSolver {
public:
  MeanConstrainedSolver(const SparseMatrix& A, DenseVector w);
  DenseVector solve(std::span<const double> b) const;

private:
  int n_ = 0;
  DenseVector w_;
  std::shared_ptr<const SparseMatrix> bordered_;
  std::shared_ptr<const LuFactorization> lu_;
};

DenseVector solve_with_mean_constraint(const SparseMatrix& A,
                                       const DenseVector& b,
                                       const DenseVector& lumped_mass);

}  // namespace chb
