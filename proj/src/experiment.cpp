#include "saddlekit/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "saddlekit/csv.hpp"
#include "saddlekit/matrix_io.hpp"
#include "saddlekit/svg.hpp"

namespace saddlekit {

SpecParseError::SpecParseError(std::size_t line, std::size_t column, const std::string& msg)
    : Error("SpecParseError: " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

// --- parsing helpers -------------------------------------------------------

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Trims `s` and reports the column of the first kept character.
Token trimmed(const std::string& s, std::size_t base_column) {
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return {s.substr(b, e - b), base_column + b};
}

class ValueParser {
 public:
  ValueParser(std::size_t line, Token tok) : line_(line), tok_(std::move(tok)) {}

  [[noreturn]] void fail(const std::string& msg, std::size_t offset = 0) const {
    throw SpecParseError(line_, tok_.column + offset, msg);
  }

  const std::string& text() const { return tok_.text; }

  double number(const std::string& s, std::size_t offset) const {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      fail("expected a number, got '" + s + "'", offset);
    }
    return v;
  }

  double number() const { return number(tok_.text, 0); }

  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("expected a positive number");
    return v;
  }

  std::uint64_t unsigned_int() const {
    std::uint64_t v = 0;
    const auto& s = tok_.text;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) fail("expected a non-negative integer");
    return v;
  }

  std::size_t positive_int() const {
    const auto v = unsigned_int();
    if (v == 0) fail("expected a positive integer");
    return static_cast<std::size_t>(v);
  }

  bool boolean() const {
    const auto v = lower(tok_.text);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail("expected true or false");
  }

  std::vector<double> list() const {
    std::vector<double> out;
    std::size_t start = 0;
    const auto& s = tok_.text;
    while (true) {
      const std::size_t comma = s.find(',', start);
      const std::string piece = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      Token t = trimmed(piece, start);
      out.push_back(number(t.text, t.column));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }

 private:
  std::size_t line_;
  Token tok_;
};

enum class Section { Top, Problem, Init, Method };

}  // namespace

ExperimentSpec parse_spec(std::string_view text, const std::filesystem::path& base_dir,
                          std::optional<std::uint64_t> seed_override) {
  ExperimentSpec spec;
  Section section = Section::Top;
  std::size_t section_line = 0;
  std::set<std::string> seen;
  bool have_name = false, have_iters = false, have_family = false;
  std::size_t problem_line = 0;
  struct PendingMethod {
    MethodSpec spec;
    std::size_t line;
    bool has_name = false;
  };
  std::vector<PendingMethod> methods;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto hash = raw.find('#');
    const std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
    const Token line = trimmed(body, 1);
    if (line.text.empty()) continue;

    if (line.text.front() == '[') {
      if (line.text.back() != ']') throw SpecParseError(line_no, line.column, "unterminated section header");
      const std::string name = lower(trimmed(line.text.substr(1, line.text.size() - 2), 0).text);
      seen.clear();
      section_line = line_no;
      if (name == "problem") {
        if (problem_line) throw SpecParseError(line_no, line.column, "duplicate [problem] section");
        problem_line = line_no;
        section = Section::Problem;
      } else if (name == "init") {
        section = Section::Init;
      } else if (name == "method") {
        section = Section::Method;
        methods.push_back({MethodSpec{}, line_no});
      } else {
        throw SpecParseError(line_no, line.column + 1, "unknown section '" + name + "'");
      }
      continue;
    }

    const auto eq = line.text.find('=');
    if (eq == std::string::npos) throw SpecParseError(line_no, line.column, "expected 'key = value'");
    const Token key_tok = trimmed(line.text.substr(0, eq), line.column);
    const Token val_tok = trimmed(line.text.substr(eq + 1), line.column + eq + 1);
    const std::string key = lower(key_tok.text);
    if (key.empty()) throw SpecParseError(line_no, line.column, "missing key");
    if (val_tok.text.empty()) throw SpecParseError(line_no, line.column + eq + 1, "missing value for '" + key + "'");
    if (!seen.insert(key).second) throw SpecParseError(line_no, key_tok.column, "duplicate key '" + key + "'");
    const ValueParser v(line_no, val_tok);
    auto unknown = [&]() -> void { throw SpecParseError(line_no, key_tok.column, "unknown key '" + key + "'"); };

    switch (section) {
      case Section::Top:
        if (key == "name") {
          spec.name = v.text();
          for (char c : spec.name) {
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
              v.fail("name may only contain letters, digits, '_', '-' and '.'");
            }
          }
          have_name = true;
        } else if (key == "iters") {
          spec.iters = v.positive_int();
          have_iters = true;
        } else if (key == "output_dir") {
          spec.output_dir = v.text();
        } else if (key == "plot") {
          spec.plot = v.boolean();
        } else if (key == "trajectory") {
          spec.trajectory = v.boolean();
        } else {
          unknown();
        }
        break;

      case Section::Problem: {
        auto& p = spec.problem;
        if (key == "family") {
          const auto f = lower(v.text());
          if (f == "bilinear") p.family = ProblemFamily::Bilinear;
          else if (f == "quadratic") p.family = ProblemFamily::Quadratic;
          else v.fail("family must be 'bilinear' or 'quadratic'");
          have_family = true;
        } else if (key == "dim") {
          p.dim = v.positive_int();
        } else if (key == "diag_geomspace") {
          const auto l = v.list();
          if (l.size() != 2 || !(l[0] > 0.0) || !(l[1] >= l[0])) v.fail("diag_geomspace expects 'lo, hi' with 0 < lo <= hi");
          p.diag_geomspace = std::pair{l[0], l[1]};
        } else if (key == "diag") {
          p.diag = v.list();
        } else if (key == "d") {
          p.d = v.positive_int();
        } else if (key == "n") {
          p.n = v.positive_int();
        } else if (key == "lambda") {
          if (lower(v.text()) == "1/n") p.lambda_is_inverse_n = true;
          else p.lambda = v.positive();
        } else if (key == "b") {
          p.b = v.list();
        } else if (key == "matrix") {
          const std::filesystem::path mp(v.text());
          p.matrix = mp.is_absolute() ? mp : base_dir / mp;
        } else if (key == "generate") {
          p.generate = lower(v.text());
          if (p.generate != "gaussian" && p.generate != "zero") v.fail("generate must be 'gaussian' or 'zero'");
        } else if (key == "seed") {
          p.seed = v.unsigned_int();
        } else {
          unknown();
        }
        break;
      }

      case Section::Init: {
        auto& i = spec.init;
        if (key == "fill") i.fill = v.number();
        else if (key == "x") i.x = v.list();
        else if (key == "y") i.y = v.list();
        else if (key == "norm") i.norm = v.positive();
        else if (key == "history_x") i.history_x = v.list();
        else if (key == "history_y") i.history_y = v.list();
        else unknown();
        break;
      }

      case Section::Method: {
        auto& pm = methods.back();
        auto& m = pm.spec;
        if (key == "name") {
          const auto parsed = parse_method(v.text());
          if (!parsed) v.fail("unknown method '" + v.text() + "' (expected PP, GDA, OGDA, GOGDA or EG)");
          m.method = *parsed;
          pm.has_name = true;
        } else if (key == "stepsize") {
          const auto s = lower(v.text());
          if (s == "theorem") m.policy = StepsizePolicy::Theorem;
          else if (s == "tuned") m.policy = StepsizePolicy::Tuned;
          else {
            m.policy = StepsizePolicy::Value;
            m.value = v.positive();
          }
        } else if (key == "beta") {
          const auto s = lower(v.text());
          if (s == "upper") m.beta_policy = BetaPolicy::Upper;
          else if (s == "lower") m.beta_policy = BetaPolicy::Lower;
          else {
            m.beta_policy = BetaPolicy::Value;
            m.beta_value = v.positive();
          }
        } else if (key == "k") {
          m.K = v.positive();
        } else if (key == "label") {
          m.label = v.text();
        } else {
          unknown();
        }
        break;
      }
    }
  }

  // Whole-file checks report the most relevant line.
  if (!have_name) throw SpecParseError(1, 1, "missing required key 'name'");
  if (!have_iters) throw SpecParseError(1, 1, "missing required key 'iters'");
  if (!problem_line) throw SpecParseError(line_no + 1, 1, "missing [problem] section");
  if (!have_family) throw SpecParseError(problem_line, 1, "[problem] needs 'family'");
  if (methods.empty()) throw SpecParseError(line_no + 1, 1, "at least one [method] section is required");

  auto& p = spec.problem;
  if (p.family == ProblemFamily::Bilinear) {
    const int sources = (p.diag_geomspace ? 1 : 0) + (p.diag ? 1 : 0) + (p.matrix ? 1 : 0) + (p.generate == "gaussian" ? 1 : 0);
    if (sources != 1) {
      throw SpecParseError(problem_line, 1,
                           "bilinear problem needs exactly one of diag_geomspace, diag, matrix, generate = gaussian");
    }
    if ((p.diag_geomspace || p.generate == "gaussian") && !p.dim) throw SpecParseError(problem_line, 1, "'dim' is required");
    if (p.generate == "zero") throw SpecParseError(problem_line, 1, "bilinear B must be full rank");
    if (p.d || p.n || p.lambda || p.lambda_is_inverse_n || p.b) {
      throw SpecParseError(problem_line, 1, "d, n, lambda and b apply to quadratic problems only");
    }
  } else {
    if (p.diag_geomspace || p.diag || p.dim) throw SpecParseError(problem_line, 1, "dim, diag and diag_geomspace apply to bilinear problems only");
    if (!p.matrix && (!p.d || !p.n)) throw SpecParseError(problem_line, 1, "quadratic problem needs 'd' and 'n' (or 'matrix')");
    if (p.matrix && !p.generate.empty()) throw SpecParseError(problem_line, 1, "'matrix' and 'generate' are exclusive");
    if (!p.lambda && !p.lambda_is_inverse_n) throw SpecParseError(problem_line, 1, "quadratic problem needs 'lambda'");
    if (p.generate.empty() && !p.matrix) p.generate = "gaussian";
  }
  if (seed_override) p.seed = *seed_override;

  const auto& i = spec.init;
  if (i.fill && (i.x || i.y)) throw SpecParseError(section_line, 1, "[init] 'fill' excludes 'x'/'y'");
  if (static_cast<bool>(i.x) != static_cast<bool>(i.y)) throw SpecParseError(section_line, 1, "[init] needs both 'x' and 'y'");
  if (static_cast<bool>(i.history_x) != static_cast<bool>(i.history_y)) {
    throw SpecParseError(section_line, 1, "[init] needs both 'history_x' and 'history_y'");
  }

  std::set<std::string> labels;
  for (auto& pm : methods) {
    if (!pm.has_name) throw SpecParseError(pm.line, 1, "[method] needs 'name'");
    if (pm.spec.label.empty()) pm.spec.label = std::string(method_name(pm.spec.method));
    if (!labels.insert(pm.spec.label).second) {
      throw SpecParseError(pm.line, 1, "duplicate method label '" + pm.spec.label + "'; set 'label'");
    }
    spec.methods.push_back(pm.spec);
  }
  return spec;
}

std::optional<std::uint64_t> seed_from_environment() {
  const char* s = std::getenv("SADDLEKIT_SEED");
  if (!s || !*s) return std::nullopt;
  std::uint64_t v = 0;
  const std::string str(s);
  auto [ptr, ec] = std::from_chars(str.data(), str.data() + str.size(), v);
  if (ec != std::errc() || ptr != str.data() + str.size()) {
    throw SpecParseError(0, 0, "SADDLEKIT_SEED must be an unsigned integer, got '" + str + "'");
  }
  return v;
}

// --- builtins ---------------------------------------------------------------

namespace {

constexpr std::string_view kFig1 = R"(# Scalar bilinear game min_x max_y xy.
# eta = 0.2 and init (0.5, 0.5) are chosen so that GDA's outward spiral and
# the inward spirals of the other methods are visible within 100 steps.
name = fig1
iters = 100
trajectory = true

[problem]
family = bilinear
diag = 1

[init]
x = 0.5
y = 0.5

[method]
name = PP
stepsize = 0.2

[method]
name = GDA
stepsize = 0.2

[method]
name = OGDA
stepsize = 0.2

[method]
name = EG
stepsize = 0.2
)";

constexpr std::string_view kFig2 = R"(# Bilinear problem with a 10x10 diagonal B whose entries are geometrically
# spaced from 1 to 100, so cond(B) = 100 and kappa = cond(B)^2 = 1e4.
name = fig2
iters = 5000

[problem]
family = bilinear
dim = 10
diag_geomspace = 1, 100

[init]
fill = 10

[method]
name = PP
stepsize = theorem

[method]
name = EG
stepsize = theorem

[method]
name = OGDA
stepsize = theorem
)";

constexpr std::string_view kFig3 = R"(# Saddle reformulation of ridge regression with d = 50, n = 10, b = 0 and
# lambda = 1/n. Rows of A are standard Gaussian. The initial point is the
# all-ones vector scaled to norm 10. GDA uses the EG/OGDA stepsize 1/(4L).
name = fig3
iters = 2000

[problem]
family = quadratic
d = 50
n = 10
lambda = 1/n
generate = gaussian
seed = 1

[init]
fill = 1
norm = 10

[method]
name = PP
stepsize = theorem

[method]
name = EG
stepsize = theorem

[method]
name = OGDA
stepsize = theorem

[method]
name = GDA
stepsize = theorem
)";

}  // namespace

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> list = {
      {"fig1", "scalar bilinear xy, trajectories of PP/GDA/OGDA/EG at eta = 0.2", kFig1},
      {"fig2", "10-d diagonal bilinear with cond(B) = 100, PP/EG/OGDA at theorem stepsizes", kFig2},
      {"fig3", "quadratic regression saddle d = 50, n = 10, lambda = 1/n, PP/EG/OGDA/GDA", kFig3},
  };
  return list;
}

std::optional<Builtin> find_builtin(std::string_view name) {
  for (const auto& b : builtins())
    if (b.name == name) return b;
  return std::nullopt;
}

ExperimentSpec load_spec(const std::string& spec_or_builtin) {
  const std::filesystem::path path(spec_or_builtin);
  const auto seed = seed_from_environment();
  std::error_code ec;
  if (std::filesystem::is_regular_file(path, ec)) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str(), path.parent_path().empty() ? "." : path.parent_path(), seed);
  }
  if (auto b = find_builtin(spec_or_builtin)) return parse_spec(b->text, ".", seed);
  throw SpecParseError(0, 0, "no spec file or builtin named '" + spec_or_builtin + "'");
}

// --- building ---------------------------------------------------------------

ExperimentProblem build_problem(const ProblemSpec& spec) {
  if (spec.family == ProblemFamily::Bilinear) {
    BilinearProblem bp = [&]() {
      if (spec.diag_geomspace) return geometric_diagonal_bilinear(*spec.dim, spec.diag_geomspace->first, spec.diag_geomspace->second);
      if (spec.diag) return BilinearProblem(DenseMatrix::diagonal(DenseVector(*spec.diag)));
      if (spec.matrix) return BilinearProblem(read_matrix_file(*spec.matrix));
      return random_bilinear(*spec.dim, spec.seed);
    }();
    SaddleProblem sp = bp.as_saddle_problem();
    return {ProblemFamily::Bilinear, std::move(sp), std::move(bp), std::nullopt};
  }
  DenseMatrix A;
  if (spec.matrix) {
    A = read_matrix_file(*spec.matrix);
  } else if (spec.generate == "zero") {
    A = DenseMatrix(*spec.n, *spec.d);
  } else {
    A = generate_regression_problem(*spec.d, *spec.n, 1.0, spec.seed).A();
  }
  const double lambda = spec.lambda_is_inverse_n ? 1.0 / static_cast<double>(A.rows()) : *spec.lambda;
  DenseVector b = spec.b ? DenseVector(*spec.b) : DenseVector(A.rows());
  QuadraticRegressionSaddle q(std::move(A), std::move(b), lambda);
  SaddleProblem sp = q.as_saddle_problem();
  return {ProblemFamily::Quadratic, std::move(sp), std::nullopt, std::move(q)};
}

Iterate build_init(const InitSpec& spec, const SaddleProblem& p) {
  Iterate it;
  if (spec.x) {
    it.x = DenseVector(*spec.x);
    it.y = DenseVector(*spec.y);
    if (it.x.size() != p.dim_x() || it.y.size() != p.dim_y()) {
      throw DimensionError("[init] x/y have lengths " + std::to_string(it.x.size()) + "/" +
                           std::to_string(it.y.size()) + ", problem needs " + std::to_string(p.dim_x()) +
                           "/" + std::to_string(p.dim_y()));
    }
  } else {
    const double fill = spec.fill.value_or(1.0);
    it.x = DenseVector(p.dim_x(), fill);
    it.y = DenseVector(p.dim_y(), fill);
  }
  if (spec.norm) {
    const double n = std::sqrt(squared_norm(it.x) + squared_norm(it.y));
    if (!(n > 0.0)) throw PreconditionError("[init] cannot rescale the zero vector");
    it.x *= *spec.norm / n;
    it.y *= *spec.norm / n;
  }
  return it;
}

std::optional<Iterate> build_history(const InitSpec& spec, const SaddleProblem& p) {
  if (!spec.history_x) return std::nullopt;
  Iterate h{DenseVector(*spec.history_x), DenseVector(*spec.history_y), 0};
  if (h.x.size() != p.dim_x() || h.y.size() != p.dim_y()) throw DimensionError("[init] history has the wrong dimensions");
  return h;
}

std::optional<TheoremId> theorem_for(Method m, ProblemFamily family) {
  const bool bil = family == ProblemFamily::Bilinear;
  switch (m) {
    case Method::PP: return bil ? TheoremId::PP_BILINEAR : TheoremId::PP_SCSC;
    case Method::EG: return bil ? TheoremId::EG_BILINEAR : TheoremId::EG_SCSC;
    case Method::OGDA: return bil ? TheoremId::OGDA_BILINEAR : TheoremId::OGDA_SCSC;
    case Method::GOGDA: return bil ? std::optional(TheoremId::GOGDA_BILINEAR) : std::nullopt;
    case Method::GDA: return std::nullopt;
  }
  return std::nullopt;
}

std::vector<double> tuning_grid(double theorem_eta) {
  std::vector<double> grid;
  for (int j = -7; j <= 8; ++j) grid.push_back(theorem_eta * std::exp2(0.5 * j));
  return grid;
}

namespace {

SolverConfig make_config(const MethodSpec& m, double eta, std::size_t iters) {
  SolverConfig c;
  c.max_iters = iters;
  if (m.method == Method::GOGDA) {
    c.alpha = eta;
    switch (m.beta_policy) {
      case BetaPolicy::Upper: c.beta = eta; break;
      case BetaPolicy::Lower: c.beta = eta - m.K * eta * eta; break;
      case BetaPolicy::Value: c.beta = m.beta_value; break;
    }
    c.eta = eta;
  } else {
    c.eta = eta;
  }
  return c;
}

}  // namespace

ResolvedMethod resolve_method(const MethodSpec& m, const ExperimentProblem& ep, std::size_t iters,
                              const Iterate& init, const std::optional<Iterate>& history) {
  ResolvedMethod out;
  out.spec = m;
  out.theorem = theorem_for(m.method, ep.family);
  if (out.theorem) {
    out.theorem_eta = theoretical_bound(*out.theorem, ep.problem).eta;
  } else if (m.method == Method::GDA) {
    // GDA has no rate; it borrows the EG stepsize so comparisons are like for like.
    out.theorem_eta = theoretical_bound(*theorem_for(Method::EG, ep.family), ep.problem).eta;
  }
  const bool any_eta = m.method == Method::PP;

  double eta = 0.0;
  switch (m.policy) {
    case StepsizePolicy::Value:
      eta = m.value;
      break;
    case StepsizePolicy::Theorem:
      if (!out.theorem_eta) {
        throw ConfigMismatchError(std::string(method_name(m.method)) + " has no theorem stepsize for this problem family");
      }
      eta = *out.theorem_eta;
      break;
    case StepsizePolicy::Tuned: {
      if (!out.theorem_eta) {
        throw ConfigMismatchError(std::string(method_name(m.method)) + " has no theorem stepsize to tune around");
      }
      double best_r = std::numeric_limits<double>::infinity();
      eta = *out.theorem_eta;
      for (double cand : tuning_grid(*out.theorem_eta)) {
        try {
          const RunRecord rec = run(ep.problem, m.method, make_config(m, cand, iters), init, history);
          if (rec.r.back() < best_r) {
            best_r = rec.r.back();
            eta = cand;
          }
        } catch (const Error&) {
          // diverged or failed; not a candidate
        }
      }
      break;
    }
  }
  out.config = make_config(m, eta, iters);
  out.at_theorem_stepsize =
      out.theorem && (any_eta || std::abs(eta - *out.theorem_eta) <= kStepsizeMatchTolerance * *out.theorem_eta);
  if (out.theorem == TheoremId::GOGDA_BILINEAR && out.at_theorem_stepsize) {
    out.at_theorem_stepsize = validate_generalized_stepsizes(out.config.alpha, out.config.beta, 1.0, *ep.bilinear);
  }
  return out;
}

std::vector<std::optional<double>> theory_bound_series(const ResolvedMethod& m, const ExperimentProblem& ep,
                                                       const std::vector<double>& r) {
  std::vector<std::optional<double>> out(r.size());
  if (!m.theorem || !m.at_theorem_stepsize || r.empty()) return out;
  const bool pp = m.spec.method == Method::PP;
  const TheoreticalBound tb =
      theoretical_bound(*m.theorem, ep.problem, pp ? std::optional<double>(m.config.eta) : std::nullopt);
  if (*m.theorem == TheoremId::OGDA_SCSC) {
    double b = tb.r0_inflation * r[0];
    out[0] = b;
    for (std::size_t k = 1; k < r.size(); ++k) {
      out[k] = b;
      b *= tb.factor;
    }
  } else if (tb.window > 1) {
    const std::size_t win = static_cast<std::size_t>(tb.window);
    const double head = *std::max_element(r.begin(), r.begin() + std::min(win, r.size()));
    double b = head;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (k >= win && k % win == 0) b *= tb.factor;
      out[k] = b;
    }
  } else {
    double b = r[0];
    for (std::size_t k = 0; k < r.size(); ++k) {
      out[k] = b;
      b *= tb.factor;
    }
  }
  return out;
}

namespace {

std::string file_stem(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' ? c : '_');
  return out;
}

CsvMetadata metadata_for(const ExperimentSpec& spec, const ExperimentProblem& ep, const ResolvedMethod& m) {
  CsvMetadata meta;
  auto add = [&](std::string k, std::string v) { meta.entries.emplace_back(std::move(k), std::move(v)); };
  add("experiment", spec.name);
  add("method", std::string(method_name(m.spec.method)));
  add("label", m.spec.label);
  add("eta", format_shortest(m.config.eta));
  if (m.spec.method == Method::GOGDA) {
    add("alpha", format_shortest(m.config.alpha));
    add("beta", format_shortest(m.config.beta));
  }
  add("stepsize_policy", m.spec.policy == StepsizePolicy::Theorem ? "theorem"
                         : m.spec.policy == StepsizePolicy::Tuned ? "tuned"
                                                                  : "value");
  if (m.theorem_eta) add("theorem_eta", format_shortest(*m.theorem_eta));
  add("theorem", m.theorem ? std::string(theorem_name(*m.theorem)) : "none");
  if (ep.bilinear) {
    add("problem", "bilinear d=" + std::to_string(ep.bilinear->dim()));
    add("cond_B", format_shortest(matrix_condition_number(*ep.bilinear)));
    add("kappa", format_shortest(ep.bilinear->kappa()));
  } else {
    const auto c = scsc_constants(*ep.quadratic);
    add("problem", "quadratic d=" + std::to_string(ep.quadratic->dim_x()) + " n=" +
                       std::to_string(ep.quadratic->n_samples()));
    add("mu", format_shortest(c.mu));
    add("L", format_shortest(c.L));
    add("kappa", format_shortest(c.kappa));
  }
  add("seed", std::to_string(spec.problem.seed));
  add("iters", std::to_string(spec.iters));
  return meta;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir) {
  const ExperimentProblem ep = build_problem(spec.problem);
  const Iterate init = build_init(spec.init, ep.problem);
  const std::optional<Iterate> history = build_history(spec.init, ep.problem);

  ExperimentResult result;
  for (const auto& m : spec.methods) {
    MethodOutcome o;
    o.method = resolve_method(m, ep, spec.iters, init, history);
    try {
      o.record = run(ep.problem, m.method, o.method.config, init, history);
    } catch (const DivergenceError& e) {
      o.record = e.partial();
      o.diverged = true;
    }
    result.outcomes.push_back(std::move(o));
  }

  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> run_csvs, traj_csvs;
  for (const auto& o : result.outcomes) {
    const CsvMetadata meta = metadata_for(spec, ep, o.method);
    const auto& r = o.record.r;
    const auto bounds = theory_bound_series(o.method, ep, r);
    const std::size_t kept = o.diverged ? r.size() - 1 : r.size();
    std::vector<RunCsvRow> rows;
    rows.reserve(kept);
    for (std::size_t k = 0; k < kept; ++k) {
      rows.push_back({k, r[k], k == 0 ? std::nullopt : o.record.ratios[k - 1], bounds[k]});
    }
    const auto stem = file_stem(spec.name + "_" + o.method.spec.label);
    const auto path = out_dir / (stem + ".csv");
    write_run_csv(path, meta, rows, o.diverged ? std::optional<std::size_t>(kept) : std::nullopt);
    run_csvs.push_back(path);
    if (spec.trajectory) {
      std::vector<std::size_t> ks;
      std::vector<double> xs, ys;
      for (std::size_t k = 0; k < kept; ++k) {
        ks.push_back(k);
        xs.push_back(o.record.iterates[k].x[0]);
        ys.push_back(o.record.iterates[k].y[0]);
      }
      const auto tpath = out_dir / (stem + "_trajectory.csv");
      write_trajectory_csv(tpath, meta, ks, xs, ys);
      traj_csvs.push_back(tpath);
    }
  }
  result.files = run_csvs;
  result.files.insert(result.files.end(), traj_csvs.begin(), traj_csvs.end());
  if (spec.plot) {
    const auto svg = out_dir / (file_stem(spec.name) + ".svg");
    plot_csv_files(run_csvs, svg);
    result.files.push_back(svg);
    if (spec.trajectory) {
      const auto tsvg = out_dir / (file_stem(spec.name) + "_trajectory.svg");
      plot_csv_files(traj_csvs, tsvg);
      result.files.push_back(tsvg);
    }
  }
  return result;
}

}  // namespace saddlekit
