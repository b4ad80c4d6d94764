#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saddlekit/analysis.hpp"
#include "saddlekit/errors.hpp"
#include "saddlekit/problems.hpp"
#include "saddlekit/solvers.hpp"

namespace saddlekit {

// Experiment files are line-oriented:
//
//   # comment
//   key = value            top level: name, iters, output_dir, plot, trajectory
//   [problem]              family = bilinear | quadratic, plus family keys
//   [init]                 fill | x, y | norm | history_x, history_y
//   [method]               name, stepsize, beta, K, label (repeatable)
//
// The full grammar is in README.md.
class SpecParseError : public Error {
 public:
  SpecParseError(std::size_t line, std::size_t column, const std::string& msg);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class ProblemFamily { Bilinear, Quadratic };

struct ProblemSpec {
  ProblemFamily family = ProblemFamily::Bilinear;
  // bilinear
  std::optional<std::size_t> dim;
  std::optional<std::pair<double, double>> diag_geomspace;
  std::optional<std::vector<double>> diag;
  // quadratic
  std::optional<std::size_t> d;
  std::optional<std::size_t> n;
  std::optional<double> lambda;  // unset with lambda_is_inverse_n means 1/n
  bool lambda_is_inverse_n = false;
  std::optional<std::vector<double>> b;
  // either family
  std::optional<std::filesystem::path> matrix;  // resolved against the spec file's directory
  std::string generate;                         // "gaussian" or "zero"; empty when unset
  std::uint64_t seed = 0;
};

struct InitSpec {
  std::optional<double> fill;
  std::optional<std::vector<double>> x;
  std::optional<std::vector<double>> y;
  std::optional<double> norm;
  std::optional<std::vector<double>> history_x;
  std::optional<std::vector<double>> history_y;
};

enum class StepsizePolicy { Theorem, Tuned, Value };
enum class BetaPolicy { Upper, Lower, Value };

struct MethodSpec {
  Method method = Method::PP;
  StepsizePolicy policy = StepsizePolicy::Theorem;
  double value = 0.0;
  BetaPolicy beta_policy = BetaPolicy::Upper;
  double beta_value = 0.0;
  double K = 1.0;
  std::string label;
};

struct ExperimentSpec {
  std::string name;
  std::size_t iters = 0;
  std::filesystem::path output_dir = ".";
  bool plot = true;
  bool trajectory = false;
  ProblemSpec problem;
  InitSpec init;
  std::vector<MethodSpec> methods;
};

// `base_dir` resolves relative matrix paths. A set seed_override replaces
// the problem seed.
ExperimentSpec parse_spec(std::string_view text, const std::filesystem::path& base_dir = ".",
                          std::optional<std::uint64_t> seed_override = std::nullopt);

// Reads SADDLEKIT_SEED; throws SpecParseError(0, 0, …) when it is not an
// unsigned integer.
std::optional<std::uint64_t> seed_from_environment();

struct Builtin {
  std::string_view name;
  std::string_view description;
  std::string_view text;
};
const std::vector<Builtin>& builtins();
std::optional<Builtin> find_builtin(std::string_view name);

// A spec argument is a builtin name unless a file of that name exists.
ExperimentSpec load_spec(const std::string& spec_or_builtin);

// The problem built from a ProblemSpec, keeping the concrete family around
// for the quantities only it knows.
struct ExperimentProblem {
  ProblemFamily family;
  SaddleProblem problem;
  std::optional<BilinearProblem> bilinear;
  std::optional<QuadraticRegressionSaddle> quadratic;
};

ExperimentProblem build_problem(const ProblemSpec& spec);
Iterate build_init(const InitSpec& spec, const SaddleProblem& p);
std::optional<Iterate> build_history(const InitSpec& spec, const SaddleProblem& p);

// The theorem a method/family pair is measured against, if any.
std::optional<TheoremId> theorem_for(Method m, ProblemFamily family);

struct ResolvedMethod {
  MethodSpec spec;
  SolverConfig config;
  std::optional<TheoremId> theorem;
  std::optional<double> theorem_eta;
  // True when the stepsize is the one the theorem prescribes, so its bound
  // can be annotated.
  bool at_theorem_stepsize = false;
};

inline constexpr std::size_t kTuningGridSize = 16;

// Geometric grid η_t · 2^{j/2}, j = -7, …, 8, around the theorem stepsize.
std::vector<double> tuning_grid(double theorem_eta);

ResolvedMethod resolve_method(const MethodSpec& m, const ExperimentProblem& ep, std::size_t iters,
                              const Iterate& init, const std::optional<Iterate>& history);

struct MethodOutcome {
  ResolvedMethod method;
  RunRecord record;
  bool diverged = false;
};

struct ExperimentResult {
  std::vector<MethodOutcome> outcomes;
  std::vector<std::filesystem::path> files;
};

// Runs every method and writes `<name>_<label>.csv` (plus trajectory CSVs and
// SVG plots when enabled) into `out_dir`.
ExperimentResult run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir);

// theory_bound column for a run: empty where no theorem bound applies.
std::vector<std::optional<double>> theory_bound_series(const ResolvedMethod& m,
                                                       const ExperimentProblem& ep,
                                                       const std::vector<double>& r);

}  // namespace saddlekit
