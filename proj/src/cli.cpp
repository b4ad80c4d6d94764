#include "saddlekit/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "saddlekit/analysis.hpp"
#include "saddlekit/csv.hpp"
#include "saddlekit/experiment.hpp"
#include "saddlekit/svg.hpp"

namespace saddlekit {

namespace {

std::string fixed3(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

int cmd_run(const std::string& spec_arg, const std::string& out_dir, std::ostream& out) {
  const ExperimentSpec spec = load_spec(spec_arg);
  const std::filesystem::path dir = out_dir.empty() ? spec.output_dir : std::filesystem::path(out_dir);
  const ExperimentResult res = run_experiment(spec, dir);
  for (const auto& o : res.outcomes) {
    out << "method=" << o.method.spec.label << " eta=" << format_shortest(o.method.config.eta)
        << " iters=" << o.record.r.size() - 1 << " r_final=" << format_shortest(o.record.r.back())
        << (o.diverged ? " diverged" : "") << '\n';
  }
  for (const auto& f : res.files) out << "wrote " << f.string() << '\n';
  return kExitOk;
}

int cmd_certify(const std::string& spec_arg, const std::string& theorem_arg, std::ostream& out) {
  const auto theorem = parse_theorem(theorem_arg);
  if (!theorem) throw SpecParseError(0, 0, "unknown theorem '" + theorem_arg + "'");
  const ExperimentSpec spec = load_spec(spec_arg);
  const ExperimentProblem ep = build_problem(spec.problem);
  if (is_bilinear_theorem(*theorem) != (ep.family == ProblemFamily::Bilinear)) {
    throw ConfigMismatchError(std::string(theorem_name(*theorem)) + " does not apply to this problem family");
  }
  const Iterate init = build_init(spec.init, ep.problem);
  const auto history = build_history(spec.init, ep.problem);

  std::vector<MethodSpec> selected;
  for (const auto& m : spec.methods)
    if (m.method == theorem_method(*theorem)) selected.push_back(m);
  if (selected.empty()) {
    // Nothing the theorem is about: hold every method to the theorem's stepsize.
    const double eta = theoretical_bound(*theorem, ep.problem).eta;
    for (MethodSpec m : spec.methods) {
      m.policy = StepsizePolicy::Value;
      m.value = eta;
      selected.push_back(m);
    }
  }

  bool all_pass = true;
  for (const auto& m : selected) {
    const ResolvedMethod rm = resolve_method(m, ep, spec.iters, init, history);
    RunRecord rec;
    try {
      rec = run(ep.problem, m.method, rm.config, init, history);
    } catch (const DivergenceError& e) {
      rec = e.partial();
    }
    const RateCertificate c = certify(rec, *theorem, ep.problem);
    all_pass = all_pass && c.pass;
    out << "theorem=" << theorem_name(c.theorem) << " bound=" << format_shortest(c.bound)
        << " worst=" << format_shortest(c.worst_observed) << " pass=" << (c.pass ? "true" : "false")
        << " violated_at=" << (c.violated_at ? std::to_string(*c.violated_at) : "-")
        << " method=" << m.label << '\n';
  }
  return all_pass ? kExitOk : kExitCertifyFailed;
}

int cmd_order(const std::string& spec_arg, const std::string& method_arg, std::ostream& out) {
  const auto method = parse_method(method_arg);
  if (!method) throw SpecParseError(0, 0, "unknown method '" + method_arg + "'");
  const ExperimentSpec spec = load_spec(spec_arg);
  const ExperimentProblem ep = build_problem(spec.problem);
  const Iterate anchor = build_init(spec.init, ep.problem);
  const OrderReport rep = approximation_order(ep.problem, anchor, *method);
  out << "eta,gap\n";
  for (std::size_t i = 0; i < rep.etas.size(); ++i) {
    out << format_shortest(rep.etas[i]) << ',' << format_shortest(rep.gaps[i]) << '\n';
  }
  if (rep.exact) {
    out << "exact\n";
  } else {
    out << "slope=" << fixed3(rep.slope) << '\n';
  }
  return kExitOk;
}

int cmd_list(const std::string& show, std::ostream& out) {
  if (!show.empty()) {
    const auto b = find_builtin(show);
    if (!b) throw SpecParseError(0, 0, "no builtin named '" + show + "'");
    out << b->text;
    return kExitOk;
  }
  for (const auto& b : builtins()) out << b.name << "  " << b.description << '\n';
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"saddlekit: saddle-point solvers and rate verification"};
  app.require_subcommand(1);

  std::string run_spec, run_out;
  auto* run_cmd = app.add_subcommand("run", "run an experiment spec or builtin, writing CSV and SVG");
  run_cmd->add_option("spec", run_spec, "spec file or builtin name")->required();
  run_cmd->add_option("--out", run_out, "output directory (overrides output_dir)");

  std::string cert_spec, cert_theorem;
  auto* cert_cmd = app.add_subcommand("certify", "check runs against a theorem's contraction bound");
  cert_cmd->add_option("spec", cert_spec, "spec file or builtin name")->required();
  cert_cmd->add_option("theorem", cert_theorem,
                       "PP_BILINEAR, PP_SCSC, OGDA_BILINEAR, OGDA_SCSC, GOGDA_BILINEAR, EG_BILINEAR or EG_SCSC")
      ->required();

  std::string order_spec, order_method;
  auto* order_cmd = app.add_subcommand("order", "measure the one-step gap to the proximal point step");
  order_cmd->add_option("spec", order_spec, "spec file or builtin name")->required();
  order_cmd->add_option("method", order_method, "PP, GDA, OGDA, GOGDA or EG")->required();

  std::vector<std::string> plot_inputs;
  std::string plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "render run or trajectory CSVs as SVG");
  plot_cmd->add_option("csv", plot_inputs, "input CSV files")->required();
  plot_cmd->add_option("-o,--output", plot_out, "output SVG path")->required();

  std::string show;
  auto* list_cmd = app.add_subcommand("list-builtins", "list built-in experiment specs");
  list_cmd->add_option("--show", show, "print the text of one builtin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParseError;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_spec, run_out, out);
    if (cert_cmd->parsed()) return cmd_certify(cert_spec, cert_theorem, out);
    if (order_cmd->parsed()) return cmd_order(order_spec, order_method, out);
    if (plot_cmd->parsed()) {
      std::vector<std::filesystem::path> paths(plot_inputs.begin(), plot_inputs.end());
      plot_csv_files(paths, plot_out);
      out << "wrote " << plot_out << '\n';
      return kExitOk;
    }
    if (list_cmd->parsed()) return cmd_list(show, out);
  } catch (const SpecParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParseError;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParseError;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParseError;
  } catch (const ConfigMismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigMismatch;
  } catch (const InsufficientDataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInsufficientData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitOtherError;
  }
  return kExitOtherError;
}

}  // namespace saddlekit
