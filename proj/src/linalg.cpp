#include "chb/linalg.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "chb/errors.hpp"

namespace chb {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

AssemblyBuffer::AssemblyBuffer(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0)
    throw std::invalid_argument("AssemblyBuffer: negative dimensions");
}

void AssemblyBuffer::reserve(std::size_t nnz_estimate) {
  r_.reserve(nnz_estimate);
  c_.reserve(nnz_estimate);
  vals_.reserve(nnz_estimate);
}

void AssemblyBuffer::add(int row, int col, double value) {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
    throw std::invalid_argument("AssemblyBuffer::add: index out of range");
  if (!std::isfinite(value))
    throw std::invalid_argument("AssemblyBuffer::add: non-finite value");
  r_.push_back(row);
  c_.push_back(col);
  vals_.push_back(value);
}

void AssemblyBuffer::clear() {
  r_.clear();
  c_.clear();
  vals_.clear();
}

SparseMatrix SparseMatrix::from_buffer(const AssemblyBuffer& buf) {
  SparseMatrix m;
  m.rows_ = buf.rows_;
  m.cols_ = buf.cols_;
  const std::size_t n = buf.vals_.size();

  // counting sort by row, then sort each row slice by column and merge
  // duplicates; deterministic regardless of insertion order
  std::vector<int> count(static_cast<std::size_t>(m.rows_) + 1, 0);
  for (std::size_t k = 0; k < n; ++k) count[buf.r_[k] + 1]++;
  for (int r = 0; r < m.rows_; ++r) count[r + 1] += count[r];
  std::vector<std::pair<int, double>> entries(n);
  {
    std::vector<int> cursor(count.begin(), count.end() - 1);
    for (std::size_t k = 0; k < n; ++k)
      entries[cursor[buf.r_[k]]++] = {buf.c_[k], buf.vals_[k]};
  }

  m.row_ptr_.assign(static_cast<std::size_t>(m.rows_) + 1, 0);
  m.col_idx_.reserve(n);
  m.vals_.reserve(n);
  for (int r = 0; r < m.rows_; ++r) {
    auto first = entries.begin() + count[r];
    auto last = entries.begin() + count[r + 1];
    std::sort(first, last,
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last;) {
      int col = it->first;
      double sum = 0.0;
      while (it != last && it->first == col) sum += (it++)->second;
      m.col_idx_.push_back(col);
      m.vals_.push_back(sum);
    }
    m.row_ptr_[r + 1] = static_cast<int>(m.col_idx_.size());
  }
  return m;
}

void SparseMatrix::matvec(std::span<const double> x, std::span<double> y,
                          Exec exec) const {
  if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_)
    throw std::invalid_argument("SparseMatrix::matvec: size mismatch");
  const int* rp = row_ptr_.data();
  const int* ci = col_idx_.data();
  const double* va = vals_.data();
  parallel_for(rows_, exec, [&](std::ptrdiff_t r) {
    double s = 0.0;
    for (int k = rp[r]; k < rp[r + 1]; ++k) s += va[k] * x[ci[k]];
    y[r] = s;
  });
}

DenseVector SparseMatrix::matvec(std::span<const double> x) const {
  DenseVector y(rows_);
  matvec(x, y);
  return y;
}

double SparseMatrix::coeff(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw std::invalid_argument("SparseMatrix::coeff: index out of range");
  for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
    if (col_idx_[k] == c) return vals_[k];
  return 0.0;
}

namespace {

using EigenSparse = Eigen::SparseMatrix<double>;

EigenSparse to_eigen(const SparseMatrix& A) {
  EigenSparse out(A.rows(), A.cols());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A.nnz());
  auto rp = A.row_ptr();
  auto ci = A.col_idx();
  auto va = A.values();
  for (int r = 0; r < A.rows(); ++r)
    for (int k = rp[r]; k < rp[r + 1]; ++k)
      trips.emplace_back(r, ci[k], va[k]);
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

int parse_trailing_index(const std::string& msg) {
  // Eigen reports e.g. "... ZERO COLUMN AT 3" with a 1-based index.
  int end = static_cast<int>(msg.size());
  while (end > 0 && std::isspace(static_cast<unsigned char>(msg[end - 1]))) --end;
  int begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(msg[begin - 1])))
    --begin;
  if (begin == end) return -1;
  return std::stoi(msg.substr(begin, end - begin)) - 1;
}

}  // namespace

struct LuFactorization::Impl {
  EigenSparse A;
  Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>> lu;
};

LuFactorization::LuFactorization(const SparseMatrix& A)
    : impl_(std::make_unique<Impl>()) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("LuFactorization: matrix must be square");
  // catch empty rows/columns up front so the pivot index is exact
  {
    std::vector<std::uint8_t> row_has(A.rows(), 0), col_has(A.cols(), 0);
    auto rp = A.row_ptr();
    auto ci = A.col_idx();
    auto va = A.values();
    for (int r = 0; r < A.rows(); ++r)
      for (int k = rp[r]; k < rp[r + 1]; ++k)
        if (va[k] != 0.0) {
          row_has[r] = 1;
          col_has[ci[k]] = 1;
        }
    for (int r = 0; r < A.rows(); ++r)
      if (!row_has[r])
        throw SingularMatrixError(
            "singular matrix: row " + std::to_string(r) + " is empty", r);
    for (int c = 0; c < A.cols(); ++c)
      if (!col_has[c])
        throw SingularMatrixError(
            "singular matrix: column " + std::to_string(c) + " is empty", c);
  }
  impl_->A = to_eigen(A);
  impl_->lu.isSymmetric(false);
  impl_->lu.analyzePattern(impl_->A);
  impl_->lu.factorize(impl_->A);
  if (impl_->lu.info() != Eigen::Success) {
    const std::string msg = impl_->lu.lastErrorMessage();
    throw SingularMatrixError("singular matrix: " + msg,
                              parse_trailing_index(msg));
  }
}

LuFactorization::~LuFactorization() = default;
LuFactorization::LuFactorization(LuFactorization&&) noexcept = default;
LuFactorization& LuFactorization::operator=(LuFactorization&&) noexcept =
    default;

DenseVector LuFactorization::solve(std::span<const double> b) const {
  const auto n = impl_->A.rows();
  if (static_cast<Eigen::Index>(b.size()) != n)
    throw std::invalid_argument("LuFactorization::solve: size mismatch");
  Eigen::Map<const Eigen::VectorXd> bb(b.data(), n);
  Eigen::VectorXd x = impl_->lu.solve(bb);
  const double target = 1e-10 * (1.0 + bb.norm());
  Eigen::VectorXd r = bb - impl_->A * x;
  if (r.norm() > target) {
    x += impl_->lu.solve(r).eval();
    r = bb - impl_->A * x;
    if (r.norm() > target)
      throw SingularMatrixError(
          "direct solve residual exceeds tolerance after refinement", -1);
  }
  return DenseVector(x.data(), x.data() + n);
}

DenseVector solve_direct(const SparseMatrix& A, const DenseVector& b) {
  return LuFactorization(A).solve(b);
}

MeanConstrainedSolver::MeanConstrainedSolver(const SparseMatrix& A,
                                             DenseVector w)
    : n_(A.rows()), w_(std::move(w)) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("MeanConstrainedSolver: matrix must be square");
  if (static_cast<int>(w_.size()) != n_)
    throw std::invalid_argument("MeanConstrainedSolver: weight size mismatch");
  AssemblyBuffer buf(n_ + 1, n_ + 1);
  buf.reserve(A.nnz() + 2 * static_cast<std::size_t>(n_));
  auto rp = A.row_ptr();
  auto ci = A.col_idx();
  auto va = A.values();
  for (int r = 0; r < n_; ++r)
    for (int k = rp[r]; k < rp[r + 1]; ++k) buf.add(r, ci[k], va[k]);
  for (int i = 0; i < n_; ++i) {
    buf.add(i, n_, w_[i]);
    buf.add(n_, i, w_[i]);
  }
  bordered_ = std::make_shared<const SparseMatrix>(SparseMatrix::from_buffer(buf));
  lu_ = std::make_shared<const LuFactorization>(*bordered_);
}

DenseVector MeanConstrainedSolver::solve(std::span<const double> b) const {
  if (static_cast<int>(b.size()) != n_)
    throw std::invalid_argument("MeanConstrainedSolver::solve: size mismatch");
  DenseVector rhs(n_ + 1, 0.0);
  std::copy(b.begin(), b.end(), rhs.begin());
  DenseVector xl = lu_->solve(rhs);
  const double lambda = xl[n_];
  DenseVector x(xl.begin(), xl.begin() + n_);

  // verify against the projected right-hand side b - lambda * w
  DenseVector r(n_);
  // bordered matrix rows 0..n-1 give A x + lambda w
  {
    DenseVector full = bordered_->matvec(xl);
    double bnorm2 = 0.0;
    for (int i = 0; i < n_; ++i) {
      r[i] = full[i] - b[i];
      bnorm2 += b[i] * b[i];
    }
    const double lam_scale = std::abs(lambda) * norm2(w_);
    if (norm2(r) > 1e-9 * (1.0 + std::sqrt(bnorm2) + lam_scale))
      throw CompatibilityError(
          "mean-constrained solve: right-hand side incompatible beyond the "
          "constant component");
  }
  return x;
}

DenseVector solve_with_mean_constraint(const SparseMatrix& A,
                                       const DenseVector& b,
                                       const DenseVector& lumped_mass) {
  return MeanConstrainedSolver(A, lumped_mass).solve(b);
}

}  // namespace chb
