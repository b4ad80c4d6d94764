#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "saddlekit/problems.hpp"
#include "saddlekit/solvers.hpp"

namespace saddlekit {

enum class TheoremId {
  PP_BILINEAR,
  PP_SCSC,
  OGDA_BILINEAR,
  OGDA_SCSC,
  GOGDA_BILINEAR,
  EG_BILINEAR,
  EG_SCSC,
};

std::string_view theorem_name(TheoremId id);
std::optional<TheoremId> parse_theorem(std::string_view name);
// The method a theorem is about.
Method theorem_method(TheoremId id);
bool is_bilinear_theorem(TheoremId id);

// Quantities a bound may depend on. Bilinear theorems read the spectrum of BᵀB,
// SCSC theorems read μ and L. `eta` is only consulted by the PP theorems, which
// hold for every positive stepsize.
struct BoundInputs {
  std::optional<BilinearSpectrum> spectrum;
  std::optional<ProblemConstants> constants;
  std::optional<double> eta;
};

BoundInputs bound_inputs(const SaddleProblem& p, std::optional<double> eta = std::nullopt);

struct TheoreticalBound {
  double eta;           // recommended stepsize
  double factor;        // per-step (or per-window) contraction
  int window;           // 4 for the OGDA bilinear bound, else 1
  double r0_inflation;  // 1024κ² for OGDA SCSC, else 1
};

// Without an explicit eta the PP theorems use 1/√λ_max(BᵀB) and 1/L.
// Throws MissingConstantsError when the required inputs are absent.
TheoreticalBound theoretical_bound(TheoremId id, const BoundInputs& in);
TheoreticalBound theoretical_bound(TheoremId id, const SaddleProblem& p,
                                   std::optional<double> eta = std::nullopt);

inline constexpr double kCertifyTolerance = 1e-9;
inline constexpr double kStepsizeMatchTolerance = 1e-12;

struct RateCertificate {
  TheoremId theorem = TheoremId::PP_BILINEAR;
  double bound = 0.0;
  double worst_observed = 0.0;
  bool pass = false;
  std::optional<std::size_t> violated_at;
};

// Checks a run against a theorem's bound:
//   window 1:  r_{k+1} ≤ factor · r_k
//   window 4:  r_{k+1} ≤ factor · max{r_k, …, r_{k-3}}  for k ≥ 3
//   OGDA SCSC: r_k ≤ factor^{k-1} · 1024κ² · r₀  for k ≥ 1, reported as
//              factor · max_k r_k / bound_k so that pass ⇔ worst ≤ factor.
// Throws ConfigMismatchError when the record's stepsize is not the theorem's
// (PP theorems accept any stepsize) or, for GOGDA, β lies outside
// [α - α², α].
RateCertificate certify(const RunRecord& record, TheoremId id, const SaddleProblem& p);

// V_k = ‖z_k - η(F(z_k) - F(z_{k-1})) - z*‖² + η²L²‖z_k - z_{k-1}‖² for
// k = 1..K (entry i holds V_{i+1}). Requires an OGDA record at stepsize eta.
std::vector<double> ogda_lyapunov_series(const RunRecord& record, const SaddleProblem& p, double eta);

// Checks V_{k+1} ≤ factor · V_k + tolerance for all k. worst_observed is the
// largest V_{k+1}/V_k over V_k > 0.
RateCertificate check_lyapunov(const std::vector<double>& V, double factor,
                               double tolerance = kCertifyTolerance);

inline constexpr double kGapFloor = 1e-14;
inline constexpr double kExactGap = 1e-13;

struct OrderReport {
  Method method = Method::PP;
  std::vector<double> etas;  // usable grid points, strictly decreasing
  std::vector<double> gaps;
  double slope = 0.0;
  double intercept = 0.0;
  bool exact = false;  // every gap ≤ 1e-13
};

std::vector<double> default_eta_grid();  // 2⁻³, …, 2⁻¹⁰

// One-step distance between `method` and an exact PP step at each η, with a
// least-squares fit of log gap against log η. OGDA and GOGDA start from
// z₁ = PP_η(anchor) with z₀ = anchor as history, so their memory is consistent
// with a PP trajectory at the same η; the other methods step from the anchor.
// GOGDA uses α = β = η. Gaps under 1e-14 are dropped; fewer than four usable
// points throws InsufficientDataError unless every gap is ≤ 1e-13.
OrderReport approximation_order(const SaddleProblem& p, const Iterate& anchor, Method method,
                                const std::vector<double>& eta_grid = default_eta_grid());

struct LinearFit {
  double slope;
  double intercept;
};
// Ordinary least squares; needs at least two distinct x values.
LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

struct ObservedRate {
  double slope;  // d log r_k / dk; -inf on exact convergence
  bool exact_convergence = false;
};

// Least-squares slope of log r_k against k for k ≥ burn_in.
ObservedRate observed_rate(const RunRecord& record, std::size_t burn_in = 0);

}  // namespace saddlekit
