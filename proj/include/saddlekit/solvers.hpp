#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saddlekit/densela.hpp"
#include "saddlekit/errors.hpp"
#include "saddlekit/problems.hpp"

namespace saddlekit {

enum class Method { PP, GDA, OGDA, GOGDA, EG };

std::string_view method_name(Method m);
// Accepts the canonical upper-case names, case-insensitively.
std::optional<Method> parse_method(std::string_view name);

struct Iterate {
  DenseVector x;
  DenseVector y;
  std::size_t k = 0;
};

// Stacked z = [x; y].
DenseVector stacked(const Iterate& it);

// OGDA keeps the gradients at the previous iterate rather than the point
// itself, so each step costs one oracle call.
struct OgdaState {
  Iterate current;
  DenseVector prev_grad_x;
  DenseVector prev_grad_y;
};

// Gradients for the previous slot are taken at `history` when given, otherwise
// at `init`, which makes the first step a plain GDA step.
OgdaState make_ogda_state(const SaddleProblem& p, const Iterate& init,
                          const std::optional<Iterate>& history = std::nullopt);

struct SolverConfig {
  double eta = 0.0;
  double alpha = 0.0;  // generalized OGDA only
  double beta = 0.0;   // generalized OGDA only
  std::size_t max_iters = 0;
  double inner_tol = 1e-12;
  std::size_t inner_max = 10000;

  // Throws PreconditionError when the fields needed by `m` are out of range.
  void validate(Method m) const;
};

struct RunRecord {
  Method method = Method::PP;
  SolverConfig config;
  std::vector<Iterate> iterates;
  // r_k = ‖x_k - x*‖² + ‖y_k - y*‖²; empty when the saddle is unknown.
  std::vector<double> r;
  // r_{k+1} / r_k, empty where r_k = 0.
  std::vector<std::optional<double>> ratios;
};

inline constexpr double kDivergenceFactor = 1e12;

// Thrown by run() once r_k exceeds kDivergenceFactor · r₀. The record holds
// everything up to and including the offending iterate.
class DivergenceError : public Error {
 public:
  DivergenceError(RunRecord partial, std::size_t k);
  const RunRecord& partial() const { return partial_; }

 private:
  RunRecord partial_;
};

// x⁺ = x - η∇ₓf(x, y), y⁺ = y + η∇ᵧf(x, y).
Iterate gda_step(const SaddleProblem& p, const Iterate& it, double eta);

// x⁺ = x - 2η∇ₓf(z_k) + η∇ₓf(z_{k-1}); y analogous with signs flipped.
OgdaState ogda_step(const SaddleProblem& p, const OgdaState& st, double eta);

// x⁺ = x - (α+β)∇ₓf(z_k) + β∇ₓf(z_{k-1}). With α = β = η this is ogda_step.
OgdaState generalized_ogda_step(const SaddleProblem& p, const OgdaState& st, double alpha,
                                double beta);

// True iff α equals 1/(40√λ_max(BᵀB)) to 1e-12 relative and
// 0 < α - Kα² ≤ β ≤ α.
bool validate_generalized_stepsizes(double alpha, double beta, double K, const BilinearProblem& p);

struct EgStep {
  Iterate midpoint;
  Iterate next;
};

EgStep eg_step(const SaddleProblem& p, const Iterate& it, double eta);

Iterate pp_step_bilinear(const BilinearProblem& p, const Iterate& it, double eta);

// Exact implicit step for F(z) = Mz + c: solves (I + ηM)z⁺ = z_k - ηc.
Iterate pp_step_affine(const SaddleProblem& p, const Iterate& it, double eta);

// Proximal step via fixed-point iteration z ← z_k - ηF(z), which contracts
// when ηL < 1.
Iterate pp_step_implicit(const SaddleProblem& p, const Iterate& it, double eta, double inner_tol,
                         std::size_t inner_max);

// Factorizes I + ηM once for repeated affine proximal steps.
class AffineProxSolver {
 public:
  AffineProxSolver(const AffineField& field, std::size_t dim_x, double eta);
  Iterate step(const Iterate& it) const;

 private:
  std::size_t dim_x_;
  DenseVector shift_;  // ηc
  LuFactorization lu_;
};

// Runs `method` for config.max_iters steps from `init`. PP uses the problem's
// exact proximal map when it has one, else the affine solve, else the
// fixed-point inner loop. `history` seeds the OGDA/GOGDA previous iterate.
//
// Step errors are rethrown with the failing iteration index attached.
RunRecord run(const SaddleProblem& p, Method method, const SolverConfig& config,
              const Iterate& init, const std::optional<Iterate>& history = std::nullopt);

}  // namespace saddlekit
