#pragma once

// Small dense / sparse linear algebra used by the assembly and solvers.
// Everything here is deterministic: no threads, fixed iteration order.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lagfsi {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
// y += alpha * x
void axpy(double alpha, const Vec& x, Vec& y);

/// Row-major dense matrix.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec multiply(const Vec& x) const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  Vec data_;
};

/// Cholesky factorization of a symmetric positive definite matrix.
/// Throws std::runtime_error if a nonpositive pivot is met.
class CholeskyFactor {
public:
  explicit CholeskyFactor(const DenseMatrix& A);
  Vec solve(const Vec& b) const;
  std::size_t size() const { return n_; }

private:
  std::size_t n_ = 0;
  Vec l_;  // lower triangle, row-major
};

/// Compressed sparse row matrix, built from triplets.
class CsrMatrix {
public:
  CsrMatrix() = default;

  static CsrMatrix from_triplets(std::size_t n,
                                 const std::vector<std::size_t>& rows,
                                 const std::vector<std::size_t>& cols,
                                 const Vec& vals);

  std::size_t size() const { return n_; }
  Vec multiply(const Vec& x) const;
  Vec diagonal() const;
  DenseMatrix to_dense() const;

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const Vec& values() const { return vals_; }

private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_, col_idx_;
  Vec vals_;
};

struct CgResult {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradient for SPD systems.
CgResult conjugate_gradient(const CsrMatrix& A, const Vec& b, Vec& x,
                            double rel_tol, std::size_t max_iter);

/// Triplet accumulator; duplicate entries are summed on conversion.
class TripletList {
public:
  explicit TripletList(std::size_t n) : n_(n) {}
  void add(std::size_t i, std::size_t j, double v) {
    if (v == 0.0) return;
    rows_.push_back(i);
    cols_.push_back(j);
    vals_.push_back(v);
  }
  CsrMatrix to_csr() const { return CsrMatrix::from_triplets(n_, rows_, cols_, vals_); }
  std::size_t size() const { return n_; }

private:
  std::size_t n_;
  std::vector<std::size_t> rows_, cols_;
  Vec vals_;
};

}  // namespace lagfsi
