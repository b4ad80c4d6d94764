#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "saddlekit/densela.hpp"

namespace saddlekit {

struct GradientPair {
  DenseVector gx;  // ∇ₓf
  DenseVector gy;  // ∇ᵧf
};

// Strong convexity / concavity moduli and block Lipschitz constants of ∇f.
struct ProblemConstants {
  double mu_x = 0.0;
  double mu_y = 0.0;
  double L_x = 0.0;
  double L_y = 0.0;
  double L_xy = 0.0;
  double L_yx = 0.0;

  double mu() const;
  double L() const;
  // L / μ; infinite when μ = 0.
  double kappa() const;
  // Throws PreconditionError unless μ ≥ 0, L > 0 and μ ≤ L.
  void validate() const;
};

// Extreme eigenvalues of BᵀB for a bilinear problem.
struct BilinearSpectrum {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa() const { return lambda_max / lambda_min; }
};

// The monotone field F(z) = [∇ₓf; -∇ᵧf] written as M z + c.
struct AffineField {
  DenseMatrix M;
  DenseVector c;
};

using PointPair = std::pair<DenseVector, DenseVector>;

// A min-max problem over (x, y) ∈ ℝᵐ × ℝⁿ seen through its gradient oracle.
// Everything beyond the oracle is optional metadata that a concrete family can
// supply: constants, a known saddle point, an exact proximal map, an affine
// form of the field, the scalar objective, and for bilinear problems the
// spectrum of BᵀB.
class SaddleProblem {
 public:
  using GradientOracle = std::function<GradientPair(const DenseVector&, const DenseVector&)>;
  using ValueOracle = std::function<double(const DenseVector&, const DenseVector&)>;
  using ProxOracle =
      std::function<PointPair(const DenseVector&, const DenseVector&, double /*eta*/)>;

  SaddleProblem(std::size_t dim_x, std::size_t dim_y, GradientOracle grad);

  SaddleProblem& with_name(std::string name);
  SaddleProblem& with_constants(const ProblemConstants& constants);
  // Throws PreconditionError when ‖∇f(x*, y*)‖ exceeds kSaddleStationarityTolerance.
  SaddleProblem& with_saddle(DenseVector x_star, DenseVector y_star);
  SaddleProblem& with_exact_prox(ProxOracle prox);
  SaddleProblem& with_affine_field(AffineField field);
  SaddleProblem& with_value(ValueOracle value);
  SaddleProblem& with_bilinear_spectrum(const BilinearSpectrum& spectrum);

  std::size_t dim_x() const { return dim_x_; }
  std::size_t dim_y() const { return dim_y_; }
  const std::string& name() const { return name_; }

  GradientPair gradient(const DenseVector& x, const DenseVector& y) const;
  // F(z) for stacked z = [x; y].
  DenseVector field(const DenseVector& z) const;
  double value(const DenseVector& x, const DenseVector& y) const;

  const std::optional<ProblemConstants>& constants() const { return constants_; }
  const std::optional<PointPair>& saddle() const { return saddle_; }
  const std::optional<AffineField>& affine_field() const { return affine_; }
  const std::optional<BilinearSpectrum>& bilinear_spectrum() const { return spectrum_; }
  bool has_exact_prox() const { return static_cast<bool>(prox_); }
  bool has_value() const { return static_cast<bool>(value_); }
  PointPair exact_prox(const DenseVector& x, const DenseVector& y, double eta) const;

  // Squared distance ‖x - x*‖² + ‖y - y*‖²; requires a known saddle point.
  double distance_squared(const DenseVector& x, const DenseVector& y) const;

 private:
  void check_dims(const DenseVector& x, const DenseVector& y) const;

  std::size_t dim_x_;
  std::size_t dim_y_;
  std::string name_ = "saddle";
  GradientOracle grad_;
  ValueOracle value_;
  ProxOracle prox_;
  std::optional<ProblemConstants> constants_;
  std::optional<PointPair> saddle_;
  std::optional<AffineField> affine_;
  std::optional<BilinearSpectrum> spectrum_;
};

inline constexpr double kSaddleStationarityTolerance = 1e-9;

// f(x, y) = xᵀ B y with B square and full rank. The unique saddle is the
// origin.
class BilinearProblem {
 public:
  // Throws DimensionError for non-square B and SingularMatrixError when
  // λ_min(BᵀB) ≤ 1e-14 λ_max(BᵀB).
  explicit BilinearProblem(DenseMatrix B);

  const DenseMatrix& matrix() const { return B_; }
  std::size_t dim() const { return B_.rows(); }
  double lambda_min_btb() const { return spectrum_.lambda_min; }
  double lambda_max_btb() const { return spectrum_.lambda_max; }
  const BilinearSpectrum& spectrum() const { return spectrum_; }
  double kappa() const { return spectrum_.kappa(); }

  double value(const DenseVector& x, const DenseVector& y) const;
  // Closed-form proximal point update:
  //   x⁺ = (I + η²BBᵀ)⁻¹(x - ηBy),  y⁺ = (I + η²BᵀB)⁻¹(y + ηBᵀx).
  PointPair prox(const DenseVector& x, const DenseVector& y, double eta) const;
  AffineField affine_field() const;
  // μ = 0 and L_xy = L_yx = ‖B‖₂.
  ProblemConstants constants() const;

  SaddleProblem as_saddle_problem() const;

 private:
  DenseMatrix B_;
  BilinearSpectrum spectrum_;
};

GradientPair bilinear_grad(const BilinearProblem& p, const DenseVector& x, const DenseVector& y);
double condition_number_bilinear(const BilinearProblem& p);

// Diagonal B with entries geometrically spaced from lo to hi, so cond(B) = hi/lo.
BilinearProblem geometric_diagonal_bilinear(std::size_t d, double lo, double hi);
// Gaussian B, redrawn until full rank.
BilinearProblem random_bilinear(std::size_t d, std::uint64_t seed);

// Saddle reformulation of ℓ2-regularized least squares:
//   f(x, y) = (1/n)[-½‖y‖² - bᵀy + yᵀAx] + (λ/2)‖x‖²,  A ∈ ℝⁿˣᵈ.
class QuadraticRegressionSaddle {
 public:
  QuadraticRegressionSaddle(DenseMatrix A, DenseVector b, double lambda_reg);

  const DenseMatrix& A() const { return A_; }
  const DenseVector& b() const { return b_; }
  double lambda_reg() const { return lambda_; }
  std::size_t n_samples() const { return A_.rows(); }
  std::size_t dim_x() const { return A_.cols(); }
  std::size_t dim_y() const { return A_.rows(); }

  double value(const DenseVector& x, const DenseVector& y) const;
  // x* = (AᵀA/n + λI)⁻¹ Aᵀb/n,  y* = Ax* - b.
  PointPair closed_form_saddle() const;
  AffineField affine_field() const;
  ProblemConstants constants() const;

  SaddleProblem as_saddle_problem() const;

 private:
  DenseMatrix A_;
  DenseVector b_;
  double lambda_;
  double spectral_norm_A_;
};

GradientPair quadratic_grad(const QuadraticRegressionSaddle& p, const DenseVector& x,
                            const DenseVector& y);

// Rows of A drawn i.i.d. from N(0, I_d) and b = 0.
QuadraticRegressionSaddle generate_regression_problem(std::size_t d, std::size_t n,
                                                      double lambda_reg, std::uint64_t seed);

struct ScscSummary {
  double mu;
  double L;
  double kappa;
};

ScscSummary scsc_constants(const QuadraticRegressionSaddle& p);

// cond(B) = sqrt(κ) for bilinear problems, reported alongside κ.
double matrix_condition_number(const BilinearProblem& p);

}  // namespace saddlekit
