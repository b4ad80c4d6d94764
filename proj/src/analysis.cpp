#include "saddlekit/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "saddlekit/errors.hpp"

namespace saddlekit {

namespace {

constexpr TheoremId kAllTheorems[] = {
    TheoremId::PP_BILINEAR,    TheoremId::PP_SCSC,     TheoremId::OGDA_BILINEAR,
    TheoremId::OGDA_SCSC,      TheoremId::GOGDA_BILINEAR, TheoremId::EG_BILINEAR,
    TheoremId::EG_SCSC,
};

const BilinearSpectrum& need_spectrum(const BoundInputs& in, TheoremId id) {
  if (!in.spectrum) {
    throw MissingConstantsError(std::string(theorem_name(id)) + " needs the spectrum of B^T B");
  }
  return *in.spectrum;
}

const ProblemConstants& need_constants(const BoundInputs& in, TheoremId id) {
  if (!in.constants || !(in.constants->mu() > 0.0)) {
    throw MissingConstantsError(std::string(theorem_name(id)) + " needs mu > 0 and L");
  }
  return *in.constants;
}

double record_stepsize(const RunRecord& rec) {
  return rec.method == Method::GOGDA ? rec.config.alpha : rec.config.eta;
}

bool same_stepsize(double a, double b) {
  return std::abs(a - b) <= kStepsizeMatchTolerance * std::abs(b);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Tracks the worst ratio and the first index where it exceeds the limit.
struct Worst {
  double limit = 0.0;
  double worst = 0.0;
  std::optional<std::size_t> violated_at;

  void observe(double ratio, std::size_t k) {
    if (!(ratio <= worst)) worst = ratio;
    if (!violated_at && !(ratio <= limit)) violated_at = k;
  }
};

Iterate reference_pp_step(const SaddleProblem& p, const Iterate& it, double eta) {
  if (p.has_exact_prox()) {
    auto [x, y] = p.exact_prox(it.x, it.y, eta);
    return {std::move(x), std::move(y), it.k + 1};
  }
  if (p.affine_field()) return pp_step_affine(p, it, eta);
  return pp_step_implicit(p, it, eta, 1e-14, 100000);
}

}  // namespace

std::string_view theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::PP_BILINEAR: return "PP_BILINEAR";
    case TheoremId::PP_SCSC: return "PP_SCSC";
    case TheoremId::OGDA_BILINEAR: return "OGDA_BILINEAR";
    case TheoremId::OGDA_SCSC: return "OGDA_SCSC";
    case TheoremId::GOGDA_BILINEAR: return "GOGDA_BILINEAR";
    case TheoremId::EG_BILINEAR: return "EG_BILINEAR";
    case TheoremId::EG_SCSC: return "EG_SCSC";
  }
  return "?";
}

std::optional<TheoremId> parse_theorem(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (TheoremId id : kAllTheorems) {
    if (theorem_name(id) == upper) return id;
  }
  return std::nullopt;
}

Method theorem_method(TheoremId id) {
  switch (id) {
    case TheoremId::PP_BILINEAR:
    case TheoremId::PP_SCSC: return Method::PP;
    case TheoremId::OGDA_BILINEAR:
    case TheoremId::OGDA_SCSC: return Method::OGDA;
    case TheoremId::GOGDA_BILINEAR: return Method::GOGDA;
    case TheoremId::EG_BILINEAR:
    case TheoremId::EG_SCSC: return Method::EG;
  }
  return Method::PP;
}

bool is_bilinear_theorem(TheoremId id) {
  return id == TheoremId::PP_BILINEAR || id == TheoremId::OGDA_BILINEAR ||
         id == TheoremId::GOGDA_BILINEAR || id == TheoremId::EG_BILINEAR;
}

BoundInputs bound_inputs(const SaddleProblem& p, std::optional<double> eta) {
  return {p.bilinear_spectrum(), p.constants(), eta};
}

TheoreticalBound theoretical_bound(TheoremId id, const BoundInputs& in) {
  if (in.eta && !(*in.eta > 0.0)) throw PreconditionError("eta must be positive");
  switch (id) {
    case TheoremId::PP_BILINEAR: {
      const auto& s = need_spectrum(in, id);
      const double eta = in.eta.value_or(1.0 / std::sqrt(s.lambda_max));
      return {eta, 1.0 / (1.0 + eta * eta * s.lambda_min), 1, 1.0};
    }
    case TheoremId::PP_SCSC: {
      const auto& c = need_constants(in, id);
      const double eta = in.eta.value_or(1.0 / c.L());
      return {eta, 1.0 / (1.0 + eta * c.mu()), 1, 1.0};
    }
    case TheoremId::OGDA_BILINEAR:
    case TheoremId::GOGDA_BILINEAR: {
      const auto& s = need_spectrum(in, id);
      return {1.0 / (40.0 * std::sqrt(s.lambda_max)), 1.0 - 1.0 / (800.0 * s.kappa()), 4, 1.0};
    }
    case TheoremId::OGDA_SCSC: {
      const auto& c = need_constants(in, id);
      const double kappa = c.kappa();
      return {1.0 / (4.0 * c.L()), 1.0 - c.mu() / (4.0 * c.L()), 1, 1024.0 * kappa * kappa};
    }
    case TheoremId::EG_BILINEAR: {
      const auto& s = need_spectrum(in, id);
      return {1.0 / (2.0 * std::sqrt(2.0 * s.lambda_max)), 1.0 - 1.0 / (20.0 * s.kappa()), 1, 1.0};
    }
    case TheoremId::EG_SCSC: {
      const auto& c = need_constants(in, id);
      return {1.0 / (4.0 * c.L()), 1.0 - 1.0 / (4.0 * c.kappa()), 1, 1.0};
    }
  }
  throw PreconditionError("unknown theorem");
}

TheoreticalBound theoretical_bound(TheoremId id, const SaddleProblem& p, std::optional<double> eta) {
  return theoretical_bound(id, bound_inputs(p, eta));
}

RateCertificate certify(const RunRecord& record, TheoremId id, const SaddleProblem& p) {
  if (record.r.empty()) throw PreconditionError("record has no distances; saddle unknown");
  if (!(record.r.front() > 0.0)) throw PreconditionError("certify needs r_0 > 0");

  const bool pp = id == TheoremId::PP_BILINEAR || id == TheoremId::PP_SCSC;
  const double eta = record_stepsize(record);
  const TheoreticalBound tb = theoretical_bound(id, p, pp ? std::optional<double>(eta) : std::nullopt);
  if (!pp && !same_stepsize(eta, tb.eta)) {
    throw ConfigMismatchError(std::string(theorem_name(id)) + " requires eta = " + fmt(tb.eta) +
                              ", record used " + fmt(eta));
  }
  if (id == TheoremId::GOGDA_BILINEAR && record.method == Method::GOGDA) {
    const double a = record.config.alpha;
    const double b = record.config.beta;
    if (!(a - a * a > 0.0 && a - a * a <= b && b <= a)) {
      throw ConfigMismatchError("beta = " + fmt(b) + " outside [alpha - alpha^2, alpha]");
    }
  }

  RateCertificate cert;
  cert.theorem = id;
  cert.bound = tb.factor;
  const auto& r = record.r;
  Worst w;
  w.limit = tb.factor + kCertifyTolerance;

  if (id == TheoremId::OGDA_SCSC) {
    // Scale by the factor so the comparison matches the other theorems.
    double bound_k = tb.r0_inflation * r.front();  // k = 1
    for (std::size_t k = 1; k < r.size(); ++k) {
      w.observe(tb.factor * (r[k] / bound_k), k);
      bound_k *= tb.factor;
    }
  } else if (tb.window > 1) {
    const std::size_t win = static_cast<std::size_t>(tb.window);
    for (std::size_t k = win - 1; k + 1 < r.size(); ++k) {
      const double ref = *std::max_element(r.begin() + (k + 1 - win), r.begin() + (k + 1));
      if (ref == 0.0 && r[k + 1] == 0.0) continue;
      w.observe(ref > 0.0 ? r[k + 1] / ref : std::numeric_limits<double>::infinity(), k);
    }
  } else {
    for (std::size_t k = 0; k + 1 < r.size(); ++k) {
      if (r[k] == 0.0 && r[k + 1] == 0.0) continue;
      w.observe(r[k] > 0.0 ? r[k + 1] / r[k] : std::numeric_limits<double>::infinity(), k);
    }
  }
  cert.worst_observed = w.worst;
  cert.violated_at = w.violated_at;
  cert.pass = !w.violated_at;
  return cert;
}

std::vector<double> ogda_lyapunov_series(const RunRecord& record, const SaddleProblem& p, double eta) {
  if (record.method != Method::OGDA) throw ConfigMismatchError("Lyapunov series needs an OGDA record");
  if (!same_stepsize(record.config.eta, eta)) {
    throw ConfigMismatchError("record stepsize " + fmt(record.config.eta) + " differs from " + fmt(eta));
  }
  if (!p.constants()) throw MissingConstantsError("Lyapunov series needs L");
  if (!p.saddle()) throw PreconditionError("Lyapunov series needs the saddle point");
  const double L = p.constants()->L();
  const DenseVector z_star = concat(p.saddle()->first, p.saddle()->second);

  std::vector<double> V;
  if (record.iterates.size() < 2) return V;
  V.reserve(record.iterates.size() - 1);
  DenseVector z_prev = stacked(record.iterates[0]);
  DenseVector F_prev = p.field(z_prev);
  for (std::size_t k = 1; k < record.iterates.size(); ++k) {
    DenseVector z = stacked(record.iterates[k]);
    DenseVector F = p.field(z);
    const DenseVector lead = axpy(z, -eta, F - F_prev) - z_star;
    V.push_back(squared_norm(lead) + eta * eta * L * L * squared_norm(z - z_prev));
    z_prev = std::move(z);
    F_prev = std::move(F);
  }
  return V;
}

RateCertificate check_lyapunov(const std::vector<double>& V, double factor, double tolerance) {
  RateCertificate cert;
  cert.theorem = TheoremId::OGDA_SCSC;
  cert.bound = factor;
  for (std::size_t i = 0; i + 1 < V.size(); ++i) {
    if (V[i] > 0.0) cert.worst_observed = std::max(cert.worst_observed, V[i + 1] / V[i]);
    if (!cert.violated_at && !(V[i + 1] <= factor * V[i] + tolerance)) cert.violated_at = i + 1;
  }
  cert.pass = !cert.violated_at;
  return cert;
}

std::vector<double> default_eta_grid() {
  std::vector<double> grid;
  for (int e = 3; e <= 10; ++e) grid.push_back(std::ldexp(1.0, -e));
  return grid;
}

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DimensionError("fit_line: length mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw InsufficientDataError("need at least two points for a fit");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("fit needs distinct abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

OrderReport approximation_order(const SaddleProblem& p, const Iterate& anchor, Method method,
                                const std::vector<double>& eta_grid) {
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    if (!(eta_grid[i] > 0.0) || (i > 0 && !(eta_grid[i] < eta_grid[i - 1]))) {
      throw PreconditionError("eta grid must be positive and strictly decreasing");
    }
  }
  OrderReport rep;
  rep.method = method;
  bool all_tiny = true;
  for (double eta : eta_grid) {
    Iterate start = anchor;
    std::optional<Iterate> history;
    if (method == Method::OGDA || method == Method::GOGDA) {
      history = anchor;
      start = reference_pp_step(p, anchor, eta);
    }
    const Iterate exact = reference_pp_step(p, start, eta);
    Iterate out;
    switch (method) {
      case Method::PP: out = reference_pp_step(p, start, eta); break;
      case Method::GDA: out = gda_step(p, start, eta); break;
      case Method::EG: out = eg_step(p, start, eta).next; break;
      case Method::OGDA:
      case Method::GOGDA: out = ogda_step(p, make_ogda_state(p, start, history), eta).current; break;
    }
    const double gap = std::sqrt(squared_norm(out.x - exact.x) + squared_norm(out.y - exact.y));
    if (gap > kExactGap) all_tiny = false;
    if (gap < kGapFloor) continue;
    rep.etas.push_back(eta);
    rep.gaps.push_back(gap);
  }
  if (all_tiny && !eta_grid.empty()) {
    rep.exact = true;
    rep.slope = std::numeric_limits<double>::quiet_NaN();
    rep.intercept = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  if (rep.etas.size() < 4) {
    throw InsufficientDataError(std::to_string(rep.etas.size()) + " usable grid points, need 4");
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < rep.etas.size(); ++i) {
    lx.push_back(std::log(rep.etas[i]));
    ly.push_back(std::log(rep.gaps[i]));
  }
  const LinearFit fit = fit_line(lx, ly);
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  return rep;
}

ObservedRate observed_rate(const RunRecord& record, std::size_t burn_in) {
  const auto& r = record.r;
  if (burn_in >= r.size() || r.size() - burn_in < 2) {
    throw InsufficientDataError("need at least two distances after burn-in");
  }
  std::vector<double> ks, lr;
  for (std::size_t k = burn_in; k < r.size(); ++k) {
    if (r[k] == 0.0) return {-std::numeric_limits<double>::infinity(), true};
    ks.push_back(static_cast<double>(k));
    lr.push_back(std::log(r[k]));
  }
  return {fit_line(ks, lr).slope, false};
}

}  // namespace saddlekit
