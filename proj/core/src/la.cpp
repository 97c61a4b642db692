#include "lagfsi/la.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lagfsi {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vec DenseMatrix::multiply(const Vec& x) const {
  Vec y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    const double* row = &data_[i * cols_];
    for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

CholeskyFactor::CholeskyFactor(const DenseMatrix& A) : n_(A.rows()) {
  if (A.rows() != A.cols()) throw std::runtime_error("cholesky: matrix not square");
  l_.assign(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j <= i; ++j) l_[i * n_ + j] = A(i, j);

  for (std::size_t j = 0; j < n_; ++j) {
    double d = l_[j * n_ + j];
    for (std::size_t k = 0; k < j; ++k) d -= l_[j * n_ + k] * l_[j * n_ + k];
    if (d <= 0.0 || !std::isfinite(d))
      throw std::runtime_error("cholesky: matrix not positive definite (pivot " +
                               std::to_string(j) + ")");
    const double lj = std::sqrt(d);
    l_[j * n_ + j] = lj;
    for (std::size_t i = j + 1; i < n_; ++i) {
      double s = l_[i * n_ + j];
      const double* li = &l_[i * n_];
      const double* ljrow = &l_[j * n_];
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * ljrow[k];
      l_[i * n_ + j] = s / lj;
    }
  }
}

Vec CholeskyFactor::solve(const Vec& b) const {
  Vec y(b);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = y[i];
    const double* li = &l_[i * n_];
    for (std::size_t k = 0; k < i; ++k) s -= li[k] * y[k];
    y[i] = s / li[i];
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n_; ++k) s -= l_[k * n_ + ii] * y[k];
    y[ii] = s / l_[ii * n_ + ii];
  }
  return y;
}

CsrMatrix CsrMatrix::from_triplets(std::size_t n,
                                   const std::vector<std::size_t>& rows,
                                   const std::vector<std::size_t>& cols,
                                   const Vec& vals) {
  CsrMatrix m;
  m.n_ = n;
  const std::size_t nnz_in = vals.size();
  std::vector<std::size_t> order(nnz_in);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a] != rows[b]) return rows[a] < rows[b];
    return cols[a] < cols[b];
  });

  m.row_ptr_.assign(n + 1, 0);
  std::size_t last_row = static_cast<std::size_t>(-1);
  for (std::size_t k : order) {
    if (!m.col_idx_.empty() && rows[k] == last_row && cols[k] == m.col_idx_.back()) {
      m.vals_.back() += vals[k];
    } else {
      m.col_idx_.push_back(cols[k]);
      m.vals_.push_back(vals[k]);
      m.row_ptr_[rows[k] + 1] += 1;
      last_row = rows[k];
    }
  }
  for (std::size_t i = 0; i < n; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  return m;
}

Vec CsrMatrix::multiply(const Vec& x) const {
  Vec y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      s += vals_[k] * x[col_idx_[k]];
    y[i] = s;
  }
  return y;
}

Vec CsrMatrix::diagonal() const {
  Vec d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_idx_[k] == i) d[i] = vals_[k];
  return d;
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix A(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      A(i, col_idx_[k]) += vals_[k];
  return A;
}

CgResult conjugate_gradient(const CsrMatrix& A, const Vec& b, Vec& x,
                            double rel_tol, std::size_t max_iter) {
  CgResult res;
  const std::size_t n = A.size();
  if (x.size() != n) x.assign(n, 0.0);

  Vec d = A.diagonal();
  for (double& di : d) di = (di != 0.0) ? 1.0 / di : 1.0;

  Vec r = A.multiply(x);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const double b_norm = norm2(b);
  if (b_norm == 0.0) {
    x.assign(n, 0.0);
    res.converged = true;
    return res;
  }

  Vec z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = d[i] * r[i];
  Vec p = z;
  double rz = dot(r, z);

  for (std::size_t it = 0; it < max_iter; ++it) {
    Vec q = A.multiply(p);
    const double pq = dot(p, q);
    if (pq <= 0.0) break;  // loss of positivity: stop, report residual
    const double alpha = rz / pq;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    res.iterations = it + 1;
    res.relative_residual = norm2(r) / b_norm;
    if (res.relative_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = d[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.relative_residual = norm2(r) / b_norm;
  return res;
}

}  // namespace lagfsi
