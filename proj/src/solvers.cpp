#include "saddlekit/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace saddlekit {

namespace {

void require_finite(const DenseVector& v, const char* what) {
  if (!v.all_finite()) throw NumericalError(std::string("non-finite ") + what);
}

GradientPair checked_gradient(const SaddleProblem& p, const DenseVector& x, const DenseVector& y) {
  GradientPair g = p.gradient(x, y);
  require_finite(g.gx, "gradient");
  require_finite(g.gy, "gradient");
  return g;
}

Iterate from_stacked(const DenseVector& z, std::size_t dim_x, std::size_t k) {
  auto [x, y] = split(z, dim_x);
  return {std::move(x), std::move(y), k};
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::PP: return "PP";
    case Method::GDA: return "GDA";
    case Method::OGDA: return "OGDA";
    case Method::GOGDA: return "GOGDA";
    case Method::EG: return "EG";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Method m : {Method::PP, Method::GDA, Method::OGDA, Method::GOGDA, Method::EG}) {
    if (method_name(m) == upper) return m;
  }
  return std::nullopt;
}

DenseVector stacked(const Iterate& it) { return concat(it.x, it.y); }

OgdaState make_ogda_state(const SaddleProblem& p, const Iterate& init,
                          const std::optional<Iterate>& history) {
  const Iterate& prev = history ? *history : init;
  GradientPair g = checked_gradient(p, prev.x, prev.y);
  return {init, std::move(g.gx), std::move(g.gy)};
}

void SolverConfig::validate(Method m) const {
  if (m == Method::GOGDA) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw PreconditionError("alpha and beta must be positive");
  } else if (!(eta > 0.0)) {
    throw PreconditionError("eta must be positive");
  }
  if (!(inner_tol > 0.0)) throw PreconditionError("inner_tol must be positive");
  if (inner_max == 0) throw PreconditionError("inner_max must be positive");
}

DivergenceError::DivergenceError(RunRecord partial, std::size_t k)
    : Error("DivergenceError: r_k exceeded 1e12 * r_0 at k = " + std::to_string(k)),
      partial_(std::move(partial)) {
  set_iteration(k);
}

Iterate gda_step(const SaddleProblem& p, const Iterate& it, double eta) {
  const GradientPair g = checked_gradient(p, it.x, it.y);
  Iterate out{axpy(it.x, -eta, g.gx), axpy(it.y, eta, g.gy), it.k + 1};
  require_finite(out.x, "iterate");
  require_finite(out.y, "iterate");
  return out;
}

OgdaState generalized_ogda_step(const SaddleProblem& p, const OgdaState& st, double alpha,
                                double beta) {
  const Iterate& cur = st.current;
  GradientPair g = checked_gradient(p, cur.x, cur.y);
  const double lead = alpha + beta;
  DenseVector x(cur.x.size());
  DenseVector y(cur.y.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = cur.x[i] - lead * g.gx[i] + beta * st.prev_grad_x[i];
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = cur.y[i] + lead * g.gy[i] - beta * st.prev_grad_y[i];
  require_finite(x, "iterate");
  require_finite(y, "iterate");
  return {{std::move(x), std::move(y), cur.k + 1}, std::move(g.gx), std::move(g.gy)};
}

OgdaState ogda_step(const SaddleProblem& p, const OgdaState& st, double eta) {
  return generalized_ogda_step(p, st, eta, eta);
}

bool validate_generalized_stepsizes(double alpha, double beta, double K, const BilinearProblem& p) {
  const double alpha_theorem = 1.0 / (40.0 * std::sqrt(p.lambda_max_btb()));
  if (!(std::abs(alpha - alpha_theorem) <= 1e-12 * alpha_theorem)) return false;
  const double lower = alpha - K * alpha * alpha;
  return lower > 0.0 && lower <= beta && beta <= alpha;
}

EgStep eg_step(const SaddleProblem& p, const Iterate& it, double eta) {
  Iterate mid = gda_step(p, it, eta);
  const GradientPair g = checked_gradient(p, mid.x, mid.y);
  Iterate next{axpy(it.x, -eta, g.gx), axpy(it.y, eta, g.gy), it.k + 1};
  require_finite(next.x, "iterate");
  require_finite(next.y, "iterate");
  return {std::move(mid), std::move(next)};
}

Iterate pp_step_bilinear(const BilinearProblem& p, const Iterate& it, double eta) {
  if (it.x.size() != p.dim() || it.y.size() != p.dim()) throw DimensionError("pp_step_bilinear: dimension mismatch");
  auto [x, y] = p.prox(it.x, it.y, eta);
  return {std::move(x), std::move(y), it.k + 1};
}

AffineProxSolver::AffineProxSolver(const AffineField& field, std::size_t dim_x, double eta)
    : dim_x_(dim_x),
      shift_(eta * field.c),
      lu_(DenseMatrix::identity(field.M.rows()) + eta * field.M) {}

Iterate AffineProxSolver::step(const Iterate& it) const {
  DenseVector z = lu_.solve(stacked(it) - shift_);
  return from_stacked(z, dim_x_, it.k + 1);
}

Iterate pp_step_affine(const SaddleProblem& p, const Iterate& it, double eta) {
  if (!p.affine_field()) throw PreconditionError("problem does not expose an affine field");
  if (it.x.size() != p.dim_x() || it.y.size() != p.dim_y()) throw DimensionError("pp_step_affine: dimension mismatch");
  return AffineProxSolver(*p.affine_field(), p.dim_x(), eta).step(it);
}

Iterate pp_step_implicit(const SaddleProblem& p, const Iterate& it, double eta, double inner_tol,
                         std::size_t inner_max) {
  if (p.constants() && !(eta * p.constants()->L() < 1.0)) {
    throw PreconditionError("fixed-point proximal step needs eta * L < 1");
  }
  const DenseVector zk = stacked(it);
  if (eta == 0.0) return {it.x, it.y, it.k + 1};
  DenseVector z = zk;
  double increment = 0.0;
  for (std::size_t t = 0; t < inner_max; ++t) {
    DenseVector next = axpy(zk, -eta, p.field(z));
    require_finite(next, "inner iterate");
    increment = norm2(next - z);
    z = std::move(next);
    if (increment <= inner_tol) return from_stacked(z, p.dim_x(), it.k + 1);
  }
  throw InnerSolveError("fixed-point iteration did not converge in " + std::to_string(inner_max) +
                            " iterations",
                        increment);
}

RunRecord run(const SaddleProblem& p, Method method, const SolverConfig& config,
              const Iterate& init, const std::optional<Iterate>& history) {
  config.validate(method);
  if (init.x.size() != p.dim_x() || init.y.size() != p.dim_y()) throw DimensionError("run: init dimension mismatch");
  require_finite(init.x, "init");
  require_finite(init.y, "init");

  RunRecord rec;
  rec.method = method;
  rec.config = config;
  rec.iterates.reserve(config.max_iters + 1);

  const bool track = p.saddle().has_value();
  auto push = [&](Iterate it) {
    it.k = rec.iterates.size();
    if (track) {
      const double r = p.distance_squared(it.x, it.y);
      if (!rec.r.empty()) {
        const double prev = rec.r.back();
        rec.ratios.push_back(prev > 0.0 ? std::optional<double>(r / prev) : std::nullopt);
      }
      rec.r.push_back(r);
    }
    rec.iterates.push_back(std::move(it));
  };
  push(init);

  std::optional<AffineProxSolver> affine;
  if (method == Method::PP && !p.has_exact_prox() && p.affine_field()) {
    affine.emplace(*p.affine_field(), p.dim_x(), config.eta);
  }
  std::optional<OgdaState> ogda;

  for (std::size_t k = 0; k < config.max_iters; ++k) {
    const Iterate& cur = rec.iterates.back();
    Iterate next;
    try {
      switch (method) {
        case Method::PP:
          if (p.has_exact_prox()) {
            auto [x, y] = p.exact_prox(cur.x, cur.y, config.eta);
            require_finite(x, "iterate");
            require_finite(y, "iterate");
            next = {std::move(x), std::move(y), k + 1};
          } else if (affine) {
            next = affine->step(cur);
            require_finite(next.x, "iterate");
            require_finite(next.y, "iterate");
          } else {
            next = pp_step_implicit(p, cur, config.eta, config.inner_tol, config.inner_max);
          }
          break;
        case Method::GDA:
          next = gda_step(p, cur, config.eta);
          break;
        case Method::OGDA:
        case Method::GOGDA: {
          if (!ogda) ogda = make_ogda_state(p, cur, history);
          const double a = method == Method::OGDA ? config.eta : config.alpha;
          const double b = method == Method::OGDA ? config.eta : config.beta;
          ogda = generalized_ogda_step(p, *ogda, a, b);
          next = ogda->current;
          break;
        }
        case Method::EG:
          next = eg_step(p, cur, config.eta).next;
          break;
      }
    } catch (Error& e) {
      e.set_iteration(k);
      throw;
    }
    push(std::move(next));
    if (track && rec.r.back() > kDivergenceFactor * rec.r.front()) {
      throw DivergenceError(std::move(rec), k + 1);
    }
  }
  return rec;
}

}  // namespace saddlekit
