#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace saddlekit {

class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  DenseVector(std::initializer_list<double> values) : data_(values) {}
  explicit DenseVector(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& raw() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  DenseVector& operator+=(const DenseVector& other);
  DenseVector& operator-=(const DenseVector& other);
  DenseVector& operator*=(double s);

  bool all_finite() const;

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> data_;
};

DenseVector operator+(DenseVector a, const DenseVector& b);
DenseVector operator-(DenseVector a, const DenseVector& b);
DenseVector operator*(double s, DenseVector v);
DenseVector operator-(DenseVector v);

double dot(const DenseVector& a, const DenseVector& b);
double squared_norm(const DenseVector& v);
double norm2(const DenseVector& v);
double max_abs(const DenseVector& v);

// a + s * b; the arithmetic order is fixed so callers can rely on bitwise
// reproducibility.
DenseVector axpy(const DenseVector& a, double s, const DenseVector& b);

// Stacks [x; y].
DenseVector concat(const DenseVector& x, const DenseVector& y);
// Inverse of concat: returns (v[0..head), v[head..]).
std::pair<DenseVector, DenseVector> split(const DenseVector& v, std::size_t head);

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(const DenseVector& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> values() const { return data_; }

  DenseMatrix transpose() const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix m);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// Aᵀ A, computed so the result is exactly symmetric.
DenseMatrix gram(const DenseMatrix& a);

DenseVector matvec(const DenseMatrix& m, const DenseVector& v);
// Mᵀ v without forming the transpose.
DenseVector matvec_transposed(const DenseMatrix& m, const DenseVector& v);

double max_abs(const DenseMatrix& m);
double frobenius_norm(const DenseMatrix& m);
// max |M - Mᵀ|; throws DimensionError for non-square input.
double asymmetry(const DenseMatrix& m);

inline constexpr double kSymmetryTolerance = 1e-10;

// Cholesky factor L (lower triangular) with M = L Lᵀ.
class CholeskyFactorization {
 public:
  explicit CholeskyFactorization(const DenseMatrix& m);
  DenseVector solve(const DenseVector& rhs) const;
  std::size_t size() const { return lower_.rows(); }

 private:
  DenseMatrix lower_;
};

// PA = LU with partial (row) pivoting.
class LuFactorization {
 public:
  explicit LuFactorization(const DenseMatrix& m);
  DenseVector solve(const DenseVector& rhs) const;
  std::size_t size() const { return lu_.rows(); }

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> pivots_;
};

DenseVector solve_spd(const DenseMatrix& m, const DenseVector& rhs);
DenseVector solve_lu(const DenseMatrix& m, const DenseVector& rhs);
// Solves M X = R column by column through one Cholesky factorization.
DenseMatrix solve_spd(const DenseMatrix& m, const DenseMatrix& rhs);

struct EigenExtremes {
  double lambda_min;
  double lambda_max;
};

struct JacobiOptions {
  double relative_off_tolerance = 1e-14;
  int max_sweeps = 100;
};

// All eigenvalues of a symmetric matrix via cyclic Jacobi rotations, sorted
// ascending.
std::vector<double> sym_eigenvalues(const DenseMatrix& m, const JacobiOptions& options = {});
EigenExtremes sym_eig_extremes(const DenseMatrix& m, const JacobiOptions& options = {});

}  // namespace saddlekit
