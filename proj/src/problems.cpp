#include "saddlekit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "saddlekit/errors.hpp"
#include "saddlekit/rng.hpp"

namespace saddlekit {

// --- ProblemConstants -----------------------------------------------------

double ProblemConstants::mu() const { return std::min(mu_x, mu_y); }

double ProblemConstants::L() const { return std::max({L_x, L_xy, L_y, L_yx}); }

double ProblemConstants::kappa() const {
  const double m = mu();
  return m > 0.0 ? L() / m : std::numeric_limits<double>::infinity();
}

void ProblemConstants::validate() const {
  for (double c : {mu_x, mu_y, L_x, L_y, L_xy, L_yx}) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw PreconditionError("constants must be finite and >= 0");
  }
  if (!(L() > 0.0)) throw PreconditionError("L must be positive");
  if (mu() > L()) throw PreconditionError("mu exceeds L");
}

// --- SaddleProblem --------------------------------------------------------

SaddleProblem::SaddleProblem(std::size_t dim_x, std::size_t dim_y, GradientOracle grad)
    : dim_x_(dim_x), dim_y_(dim_y), grad_(std::move(grad)) {
  if (dim_x_ == 0 || dim_y_ == 0) throw DimensionError("problem dimensions must be positive");
  if (!grad_) throw PreconditionError("gradient oracle is required");
}

SaddleProblem& SaddleProblem::with_name(std::string name) {
  name_ = std::move(name);
  return *this;
}

SaddleProblem& SaddleProblem::with_constants(const ProblemConstants& constants) {
  constants.validate();
  constants_ = constants;
  return *this;
}

SaddleProblem& SaddleProblem::with_saddle(DenseVector x_star, DenseVector y_star) {
  check_dims(x_star, y_star);
  const GradientPair g = gradient(x_star, y_star);
  const double residual = std::sqrt(squared_norm(g.gx) + squared_norm(g.gy));
  if (!(residual <= kSaddleStationarityTolerance)) {
    throw PreconditionError("claimed saddle has gradient norm " + std::to_string(residual));
  }
  saddle_ = PointPair{std::move(x_star), std::move(y_star)};
  return *this;
}

SaddleProblem& SaddleProblem::with_exact_prox(ProxOracle prox) {
  prox_ = std::move(prox);
  return *this;
}

SaddleProblem& SaddleProblem::with_affine_field(AffineField field) {
  const std::size_t n = dim_x_ + dim_y_;
  if (field.M.rows() != n || field.M.cols() != n || field.c.size() != n) {
    throw DimensionError("affine field does not match problem dimensions");
  }
  affine_ = std::move(field);
  return *this;
}

SaddleProblem& SaddleProblem::with_value(ValueOracle value) {
  value_ = std::move(value);
  return *this;
}

SaddleProblem& SaddleProblem::with_bilinear_spectrum(const BilinearSpectrum& spectrum) {
  spectrum_ = spectrum;
  return *this;
}

void SaddleProblem::check_dims(const DenseVector& x, const DenseVector& y) const {
  if (x.size() != dim_x_ || y.size() != dim_y_) {
    throw DimensionError("point has dims (" + std::to_string(x.size()) + ", " +
                         std::to_string(y.size()) + "), problem has (" + std::to_string(dim_x_) +
                         ", " + std::to_string(dim_y_) + ")");
  }
}

GradientPair SaddleProblem::gradient(const DenseVector& x, const DenseVector& y) const {
  check_dims(x, y);
  GradientPair g = grad_(x, y);
  if (g.gx.size() != dim_x_ || g.gy.size() != dim_y_) {
    throw DimensionError("gradient oracle returned wrong dimensions");
  }
  return g;
}

DenseVector SaddleProblem::field(const DenseVector& z) const {
  auto [x, y] = split(z, dim_x_);
  GradientPair g = gradient(x, y);
  return concat(g.gx, -g.gy);
}

double SaddleProblem::value(const DenseVector& x, const DenseVector& y) const {
  if (!value_) throw PreconditionError("problem has no value oracle");
  check_dims(x, y);
  return value_(x, y);
}

PointPair SaddleProblem::exact_prox(const DenseVector& x, const DenseVector& y, double eta) const {
  if (!prox_) throw PreconditionError("problem has no exact proximal map");
  check_dims(x, y);
  return prox_(x, y, eta);
}

double SaddleProblem::distance_squared(const DenseVector& x, const DenseVector& y) const {
  if (!saddle_) throw PreconditionError("saddle point unknown");
  check_dims(x, y);
  return squared_norm(x - saddle_->first) + squared_norm(y - saddle_->second);
}

// --- BilinearProblem ------------------------------------------------------

BilinearProblem::BilinearProblem(DenseMatrix B) : B_(std::move(B)) {
  if (!B_.square() || B_.rows() == 0) throw DimensionError("bilinear B must be square and non-empty");
  const EigenExtremes eig = sym_eig_extremes(gram(B_));
  if (!(eig.lambda_max > 0.0) || eig.lambda_min <= 1e-14 * eig.lambda_max) {
    throw SingularMatrixError("B is rank deficient: lambda_min(B^T B) = " +
                              std::to_string(eig.lambda_min));
  }
  spectrum_ = {eig.lambda_min, eig.lambda_max};
}

double BilinearProblem::value(const DenseVector& x, const DenseVector& y) const {
  return dot(x, matvec(B_, y));
}

PointPair BilinearProblem::prox(const DenseVector& x, const DenseVector& y, double eta) const {
  const std::size_t d = dim();
  const double eta2 = eta * eta;
  DenseMatrix qx_inv = DenseMatrix::identity(d) + eta2 * gram(B_.transpose());
  DenseMatrix qy_inv = DenseMatrix::identity(d) + eta2 * gram(B_);
  DenseVector rx = axpy(x, -eta, matvec(B_, y));
  DenseVector ry = axpy(y, eta, matvec_transposed(B_, x));
  return {solve_spd(qx_inv, rx), solve_spd(qy_inv, ry)};
}

AffineField BilinearProblem::affine_field() const {
  const std::size_t d = dim();
  DenseMatrix M(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      M(i, d + j) = B_(i, j);   // ∇ₓf = B y
      M(d + j, i) = -B_(i, j);  // -∇ᵧf = -Bᵀ x
    }
  return {std::move(M), DenseVector(2 * d)};
}

ProblemConstants BilinearProblem::constants() const {
  const double norm_b = std::sqrt(spectrum_.lambda_max);
  ProblemConstants c;
  c.L_xy = norm_b;
  c.L_yx = norm_b;
  return c;
}

SaddleProblem BilinearProblem::as_saddle_problem() const {
  const std::size_t d = dim();
  // The closures share one immutable copy of the problem.
  auto self = std::make_shared<const BilinearProblem>(*this);
  SaddleProblem p(d, d, [self](const DenseVector& x, const DenseVector& y) {
    return bilinear_grad(*self, x, y);
  });
  p.with_name("bilinear")
      .with_constants(constants())
      .with_value([self](const DenseVector& x, const DenseVector& y) { return self->value(x, y); })
      .with_exact_prox([self](const DenseVector& x, const DenseVector& y, double eta) {
        return self->prox(x, y, eta);
      })
      .with_affine_field(affine_field())
      .with_bilinear_spectrum(spectrum_)
      .with_saddle(DenseVector(d), DenseVector(d));
  return p;
}

GradientPair bilinear_grad(const BilinearProblem& p, const DenseVector& x, const DenseVector& y) {
  if (x.size() != p.dim() || y.size() != p.dim()) throw DimensionError("bilinear_grad: dimension mismatch");
  return {matvec(p.matrix(), y), matvec_transposed(p.matrix(), x)};
}

double condition_number_bilinear(const BilinearProblem& p) { return p.kappa(); }

double matrix_condition_number(const BilinearProblem& p) { return std::sqrt(p.kappa()); }

BilinearProblem geometric_diagonal_bilinear(std::size_t d, double lo, double hi) {
  if (d == 0 || !(lo > 0.0) || !(hi >= lo)) throw PreconditionError("invalid geometric diagonal");
  DenseVector diag(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double t = d == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(d - 1);
    diag[i] = lo * std::pow(hi / lo, t);
  }
  diag[d - 1] = hi;
  return BilinearProblem(DenseMatrix::diagonal(diag));
}

BilinearProblem random_bilinear(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    DenseMatrix B(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) B(i, j) = rng.normal();
    try {
      return BilinearProblem(std::move(B));
    } catch (const SingularMatrixError&) {
    }
  }
  throw SingularMatrixError("could not draw a full-rank matrix");
}

// --- QuadraticRegressionSaddle --------------------------------------------

QuadraticRegressionSaddle::QuadraticRegressionSaddle(DenseMatrix A, DenseVector b, double lambda_reg)
    : A_(std::move(A)), b_(std::move(b)), lambda_(lambda_reg) {
  if (A_.rows() == 0 || A_.cols() == 0) throw DimensionError("A must be non-empty");
  if (b_.size() != A_.rows()) throw DimensionError("b must have one entry per row of A");
  if (!(lambda_ > 0.0)) throw PreconditionError("lambda must be positive");
  // ‖A‖₂² is the top eigenvalue of the smaller Gram matrix.
  const DenseMatrix g = A_.rows() < A_.cols() ? gram(A_.transpose()) : gram(A_);
  spectral_norm_A_ = std::sqrt(std::max(0.0, sym_eig_extremes(g).lambda_max));
}

double QuadraticRegressionSaddle::value(const DenseVector& x, const DenseVector& y) const {
  const double n = static_cast<double>(n_samples());
  return (-0.5 * squared_norm(y) - dot(b_, y) + dot(y, matvec(A_, x))) / n +
         0.5 * lambda_ * squared_norm(x);
}

PointPair QuadraticRegressionSaddle::closed_form_saddle() const {
  const double n = static_cast<double>(n_samples());
  DenseMatrix H = (1.0 / n) * gram(A_);
  for (std::size_t i = 0; i < H.rows(); ++i) H(i, i) += lambda_;
  DenseVector x = solve_spd(H, (1.0 / n) * matvec_transposed(A_, b_));
  DenseVector y = matvec(A_, x) - b_;
  return {std::move(x), std::move(y)};
}

AffineField QuadraticRegressionSaddle::affine_field() const {
  const std::size_t d = dim_x();
  const std::size_t m = dim_y();
  const double inv_n = 1.0 / static_cast<double>(n_samples());
  DenseMatrix M(d + m, d + m);
  for (std::size_t i = 0; i < d; ++i) M(i, i) = lambda_;
  for (std::size_t j = 0; j < m; ++j) M(d + j, d + j) = inv_n;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      M(c, d + r) = A_(r, c) * inv_n;   // ∇ₓf ∋ Aᵀy/n
      M(d + r, c) = -A_(r, c) * inv_n;  // -∇ᵧf ∋ -Ax/n
    }
  DenseVector c(d + m);
  for (std::size_t j = 0; j < m; ++j) c[d + j] = b_[j] * inv_n;
  return {std::move(M), std::move(c)};
}

ProblemConstants QuadraticRegressionSaddle::constants() const {
  const double inv_n = 1.0 / static_cast<double>(n_samples());
  ProblemConstants c;
  c.mu_x = lambda_;
  c.L_x = lambda_;
  c.mu_y = inv_n;
  c.L_y = inv_n;
  c.L_xy = spectral_norm_A_ * inv_n;
  c.L_yx = spectral_norm_A_ * inv_n;
  return c;
}

SaddleProblem QuadraticRegressionSaddle::as_saddle_problem() const {
  auto self = std::make_shared<const QuadraticRegressionSaddle>(*this);
  SaddleProblem p(dim_x(), dim_y(), [self](const DenseVector& x, const DenseVector& y) {
    return quadratic_grad(*self, x, y);
  });
  auto [xs, ys] = closed_form_saddle();
  p.with_name("quadratic")
      .with_constants(constants())
      .with_value([self](const DenseVector& x, const DenseVector& y) { return self->value(x, y); })
      .with_affine_field(affine_field())
      .with_saddle(std::move(xs), std::move(ys));
  return p;
}

GradientPair quadratic_grad(const QuadraticRegressionSaddle& p, const DenseVector& x,
                            const DenseVector& y) {
  if (x.size() != p.dim_x() || y.size() != p.dim_y()) {
    throw DimensionError("quadratic_grad: dimension mismatch");
  }
  const double inv_n = 1.0 / static_cast<double>(p.n_samples());
  DenseVector gx = axpy(inv_n * matvec_transposed(p.A(), y), p.lambda_reg(), x);
  DenseVector gy = inv_n * (matvec(p.A(), x) - y - p.b());
  return {std::move(gx), std::move(gy)};
}

QuadraticRegressionSaddle generate_regression_problem(std::size_t d, std::size_t n,
                                                      double lambda_reg, std::uint64_t seed) {
  if (d == 0 || n == 0) throw PreconditionError("d and n must be at least 1");
  Rng rng(seed);
  DenseMatrix A(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) A(i, j) = rng.normal();
  return QuadraticRegressionSaddle(std::move(A), DenseVector(n), lambda_reg);
}

ScscSummary scsc_constants(const QuadraticRegressionSaddle& p) {
  const ProblemConstants c = p.constants();
  return {c.mu(), c.L(), c.kappa()};
}

}  // namespace saddlekit
