#include "saddlekit/densela.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "saddlekit/errors.hpp"

namespace saddlekit {

namespace {

void require_same_size(const DenseVector& a, const DenseVector& b, const char* op) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(op) + ": lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shapes do not match");
  }
}

void require_square(const DenseMatrix& m, const char* op) {
  if (!m.square()) {
    throw DimensionError(std::string(op) + ": matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

void require_finite(const DenseVector& v, const char* op) {
  if (!v.all_finite()) throw NumericalError(std::string(op) + ": non-finite result");
}

double off_diagonal_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

// --- DenseVector ----------------------------------------------------------

DenseVector& DenseVector::operator+=(const DenseVector& other) {
  require_same_size(*this, other, "vector +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseVector& DenseVector::operator-=(const DenseVector& other) {
  require_same_size(*this, other, "vector -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseVector& DenseVector::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

bool DenseVector::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseVector operator+(DenseVector a, const DenseVector& b) { return a += b; }
DenseVector operator-(DenseVector a, const DenseVector& b) { return a -= b; }
DenseVector operator*(double s, DenseVector v) { return v *= s; }
DenseVector operator-(DenseVector v) { return v *= -1.0; }

double dot(const DenseVector& a, const DenseVector& b) {
  require_same_size(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(const DenseVector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double norm2(const DenseVector& v) { return std::sqrt(squared_norm(v)); }

double max_abs(const DenseVector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

DenseVector axpy(const DenseVector& a, double s, const DenseVector& b) {
  require_same_size(a, b, "axpy");
  DenseVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
  return out;
}

DenseVector concat(const DenseVector& x, const DenseVector& y) {
  std::vector<double> out;
  out.reserve(x.size() + y.size());
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  return DenseVector(std::move(out));
}

std::pair<DenseVector, DenseVector> split(const DenseVector& v, std::size_t head) {
  if (head > v.size()) throw DimensionError("split: head exceeds length");
  std::vector<double> a(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(head));
  std::vector<double> b(v.begin() + static_cast<std::ptrdiff_t>(head), v.end());
  return {DenseVector(std::move(a)), DenseVector(std::move(b))};
}

// --- DenseMatrix ----------------------------------------------------------

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                         std::to_string(rows_ * cols_));
  }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(const DenseVector& d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_shape(*this, other, "matrix +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_shape(*this, other, "matrix -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix m) { return m *= s; }

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

DenseMatrix gram(const DenseMatrix& a) {
  const std::size_t n = a.cols();
  DenseMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.rows(); ++k) s += a(k, i) * a(k, j);
      g(i, j) = s;
      g(j, i) = s;
    }
  return g;
}

DenseVector matvec(const DenseMatrix& m, const DenseVector& v) {
  if (m.cols() != v.size()) {
    throw DimensionError("matvec: matrix has " + std::to_string(m.cols()) +
                         " columns, vector has length " + std::to_string(v.size()));
  }
  DenseVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    const auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * v[j];
    out[i] = s;
  }
  return out;
}

DenseVector matvec_transposed(const DenseMatrix& m, const DenseVector& v) {
  if (m.rows() != v.size()) {
    throw DimensionError("matvec_transposed: matrix has " + std::to_string(m.rows()) +
                         " rows, vector has length " + std::to_string(v.size()));
  }
  DenseVector out(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j) * v[i];
    out[j] = s;
  }
  return out;
}

double max_abs(const DenseMatrix& m) {
  double out = 0.0;
  for (double v : m.values()) out = std::max(out, std::abs(v));
  return out;
}

double frobenius_norm(const DenseMatrix& m) {
  double s = 0.0;
  for (double v : m.values()) s += v * v;
  return std::sqrt(s);
}

double asymmetry(const DenseMatrix& m) {
  require_square(m, "asymmetry");
  double out = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) out = std::max(out, std::abs(m(i, j) - m(j, i)));
  return out;
}

// --- factorizations -------------------------------------------------------

CholeskyFactorization::CholeskyFactorization(const DenseMatrix& m) : lower_(m.rows(), m.cols()) {
  require_square(m, "cholesky");
  const std::size_t n = m.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= lower_(j, k) * lower_(j, k);
    if (!(pivot > 0.0)) {
      throw NotPositiveDefiniteError("pivot " + std::to_string(j) + " is " + std::to_string(pivot));
    }
    const double ljj = std::sqrt(pivot);
    lower_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
      lower_(i, j) = s / ljj;
    }
  }
}

DenseVector CholeskyFactorization::solve(const DenseVector& rhs) const {
  const std::size_t n = lower_.rows();
  if (rhs.size() != n) throw DimensionError("cholesky solve: rhs length mismatch");
  DenseVector z(rhs);
  for (std::size_t i = 0; i < n; ++i) {
    double s = z[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * z[k];
    z[i] = s / lower_(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = z[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= lower_(k, ii) * z[k];
    z[ii] = s / lower_(ii, ii);
  }
  require_finite(z, "cholesky solve");
  return z;
}

LuFactorization::LuFactorization(const DenseMatrix& m) : lu_(m), pivots_(m.rows()) {
  require_square(m, "lu");
  const std::size_t n = m.rows();
  const double scale = std::max(max_abs(m), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
    pivots_[k] = p;
    if (std::abs(lu_(p, k)) <= 1e-14 * scale) {
      throw SingularMatrixError("zero pivot in column " + std::to_string(k));
    }
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = lu_(i, k) / lu_(k, k);
      lu_(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
    }
  }
}

DenseVector LuFactorization::solve(const DenseVector& rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.size() != n) throw DimensionError("lu solve: rhs length mismatch");
  DenseVector z(rhs);
  for (std::size_t k = 0; k < n; ++k) std::swap(z[k], z[pivots_[k]]);
  for (std::size_t i = 0; i < n; ++i) {
    double s = z[i];
    for (std::size_t k = 0; k < i; ++k) s -= lu_(i, k) * z[k];
    z[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = z[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= lu_(ii, k) * z[k];
    z[ii] = s / lu_(ii, ii);
  }
  require_finite(z, "lu solve");
  return z;
}

DenseVector solve_spd(const DenseMatrix& m, const DenseVector& rhs) {
  require_square(m, "solve_spd");
  if (rhs.size() != m.rows()) throw DimensionError("solve_spd: rhs length mismatch");
  return CholeskyFactorization(m).solve(rhs);
}

DenseVector solve_lu(const DenseMatrix& m, const DenseVector& rhs) {
  require_square(m, "solve_lu");
  if (rhs.size() != m.rows()) throw DimensionError("solve_lu: rhs length mismatch");
  return LuFactorization(m).solve(rhs);
}

DenseMatrix solve_spd(const DenseMatrix& m, const DenseMatrix& rhs) {
  if (rhs.rows() != m.rows()) throw DimensionError("solve_spd: rhs row count mismatch");
  const CholeskyFactorization chol(m);
  DenseMatrix out(rhs.rows(), rhs.cols());
  DenseVector col(rhs.rows());
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    for (std::size_t i = 0; i < rhs.rows(); ++i) col[i] = rhs(i, j);
    const DenseVector z = chol.solve(col);
    for (std::size_t i = 0; i < rhs.rows(); ++i) out(i, j) = z[i];
  }
  return out;
}

// --- symmetric eigenvalues ------------------------------------------------

std::vector<double> sym_eigenvalues(const DenseMatrix& m, const JacobiOptions& options) {
  require_square(m, "sym_eigenvalues");
  const double skew = asymmetry(m);
  if (skew > kSymmetryTolerance) {
    throw NotSymmetricError("max |M - M^T| = " + std::to_string(skew));
  }
  const std::size_t n = m.rows();
  DenseMatrix a(m);
  // Symmetrize exactly so rotations act on one triangle consistently.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));

  const double target = options.relative_off_tolerance * frobenius_norm(a);
  int sweep = 0;
  while (off_diagonal_norm(a) > target) {
    if (sweep++ >= options.max_sweeps) {
      throw ConvergenceError("Jacobi did not converge in " + std::to_string(options.max_sweeps) +
                             " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

EigenExtremes sym_eig_extremes(const DenseMatrix& m, const JacobiOptions& options) {
  if (m.rows() == 0) throw DimensionError("sym_eig_extremes: empty matrix");
  const auto eig = sym_eigenvalues(m, options);
  return {eig.front(), eig.back()};
}

}  // namespace saddlekit
