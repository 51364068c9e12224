#pragma once

// Command-line front end: expect | sweep | figure | verify. `run` is the
// whole program minus main(), so tests can drive it in-process.
//
// Exit codes: 0 ok, 1 verify failed, 2 configuration error,
// 3 orthogonal selection, 4 truncation / numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wmp/errors.hpp"
#include "wmp/figures.hpp"
#include "wmp/snr.hpp"
#include "wmp/sweep.hpp"
#include "wmp/verify.hpp"

namespace wmp::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfig = 2, kOrthogonal = 3, kTruncation = 4 };

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const OrthogonalSelectionError*>(&e)) return kOrthogonal;
  if (dynamic_cast<const TruncationError*>(&e) || dynamic_cast<const ResourceError*>(&e) ||
      dynamic_cast<const SeriesBudgetError*>(&e) || dynamic_cast<const DegenerateNormalizationError*>(&e) ||
      dynamic_cast<const DegeneratePointerError*>(&e))
    return kTruncation;
  if (dynamic_cast<const Error*>(&e)) return kConfig;
  return kVerifyFailed;
}

inline double parse_real(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) throw ConfigError("bad number '" + text + "' for " + what);
  return v;
}

/// `x` or `start:stop:step`.
inline std::vector<double> parse_axis(const std::string& text, const std::string& what) {
  const auto first = text.find(':');
  if (first == std::string::npos) return {parse_real(text, what)};
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos)
    throw ConfigError(what + " range must be start:stop:step, got '" + text + "'");
  return range_axis(parse_real(text.substr(0, first), what), parse_real(text.substr(first + 1, second - first - 1), what),
                    parse_real(text.substr(second + 1), what));
}

/// `re` or `re,im`.
inline cdouble parse_weak_value(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_real(text, "weak value"), 0.0};
  return {parse_real(text.substr(0, comma), "weak value"), parse_real(text.substr(comma + 1), "weak value")};
}

struct RunConfig {
  std::vector<std::string> modes;
  std::string op_class = "involutory";
  std::vector<std::string> weak_values;
  std::string theta;
  std::string phi;
  std::string s;
  double sigma = 1.0;
  std::optional<int> dim_x;
  double tolerance = 1e-9;
  bool skip_truncation_check = false;
  std::string output;
  std::string format;
  std::string ps = "paper";
  int n_measurements = 1;
  int threads = 0;
  // figure
  std::string figure;
  std::string outdir = ".";
  std::optional<double> s_step;
  std::optional<int> theta_divisions;
  // verify
  bool quick = false;
  bool canary = false;
  std::string report;

  [[nodiscard]] EvaluationOptions evaluation() const {
    EvaluationOptions o;
    o.ps_convention = parse_ps_convention(ps);
    o.n_measurements = n_measurements;
    if (n_measurements < 1) throw ConfigError("--n must be at least 1");
    o.oracle.verify_truncation = !skip_truncation_check;
    o.oracle.truncation_tolerance = tolerance;
    o.oracle.dim_x = dim_x;
    return o;
  }

  [[nodiscard]] std::vector<PointerMode> parsed_modes() const {
    if (modes.empty()) throw ConfigError("at least one --mode is required");
    std::vector<PointerMode> out;
    for (const auto& m : modes) out.push_back(PointerMode::parse(m));
    return out;
  }

  [[nodiscard]] std::vector<SelectionPoint> selections() const {
    const bool by_wv = !weak_values.empty();
    const bool by_angle = !theta.empty();
    if (by_wv == by_angle) throw ConfigError("give exactly one of --weak-value or --theta/--phi");
    if (by_wv && !phi.empty()) throw ConfigError("--phi only applies with --theta");
    std::vector<SelectionPoint> out;
    if (by_wv) {
      for (const auto& w : weak_values) out.push_back(SelectionPoint::from_weak_value(parse_weak_value(w)));
      return out;
    }
    const auto thetas = parse_axis(theta, "theta");
    const auto phis = phi.empty() ? std::vector<double>{0.0} : parse_axis(phi, "phi");
    for (double t : thetas)
      for (double p : phis) {
        Selection::checked(t, p);
        out.push_back(SelectionPoint::from_angles(t, p));
      }
    return out;
  }
};

// Writes to --output when given, otherwise to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

inline void add_evaluation_flags(CLI::App* sub, RunConfig& c, bool many) {
  if (many) {
    sub->add_option("--mode", c.modes, "pointer mode hg:n[,m] or lg:p,l (repeatable)");
    sub->add_option("--weak-value", c.weak_values, "weak value re,im (repeatable)");
  } else {
    sub->add_option("--mode", c.modes, "pointer mode hg:n[,m] or lg:p,l")->expected(1);
    sub->add_option("--weak-value", c.weak_values, "weak value re,im")->expected(1);
  }
  sub->add_option("--class", c.op_class, "involutory (A^2 = I) or projector (A^2 = A)");
  sub->add_option("--theta", c.theta, "pre-selection angle in radians (scalar or start:stop:step)");
  sub->add_option("--phi", c.phi, "pre-selection phase in radians (default 0)");
  sub->add_option("--s", c.s, "coupling g/sigma (scalar or start:stop:step)")->required();
  sub->add_option("--sigma", c.sigma, "beam width");
  sub->add_option("--dim", c.dim_x, "x-mode truncation (overrides the adaptive rule)");
  sub->add_option("--tol", c.tolerance, "truncation doubling-test tolerance");
  sub->add_flag("--no-truncation-check", c.skip_truncation_check, "skip the doubling test");
  sub->add_option("--ps", c.ps, "post-selection probability in the SNR: paper or exact");
  sub->add_option("--n", c.n_measurements, "number of measurements N");
  sub->add_option("--output,-o", c.output, "output file (default stdout)");
}

inline std::vector<std::pair<std::string, std::string>> sweep_metadata(const RunConfig& c, const EvaluationOptions& o) {
  std::string modes;
  for (const auto& m : c.modes) modes += (modes.empty() ? "" : " ") + m;
  std::string wvs;
  for (const auto& w : c.weak_values) wvs += (wvs.empty() ? "" : " ") + w;
  std::vector<std::pair<std::string, std::string>> meta{{"command", "sweep"}, {"class", c.op_class}, {"modes", modes}, {"s", c.s}};
  if (!wvs.empty()) meta.emplace_back("weak_values", wvs);
  else meta.emplace_back("theta", c.theta), meta.emplace_back("phi", c.phi.empty() ? "0" : c.phi);
  meta.emplace_back("sigma", format_number(c.sigma));
  meta.emplace_back("n_measurements", std::to_string(o.n_measurements));
  meta.emplace_back("ps_convention", to_string(o.ps_convention));
  meta.emplace_back("truncation_tolerance", format_number(o.oracle.truncation_tolerance));
  return meta;
}

inline int run_expect(const RunConfig& c, std::ostream& out) {
  const auto modes = c.parsed_modes();
  const auto sels = c.selections();
  const auto ss = parse_axis(c.s, "s");
  if (modes.size() != 1 || sels.size() != 1 || ss.size() != 1) throw ConfigError("expect needs a single mode, selection and s");
  const EvaluationOptions opts = c.evaluation();
  const MeasurementSetting st = make_setting(modes[0], parse_operator_class(c.op_class), sels[0], ss[0], c.sigma);
  const PointEvaluation ev = evaluate_point(st, opts);
  const SweepRow row = evaluate_row(modes[0], st.op_class, sels[0], ss[0], c.sigma, opts);

  const OracleMoments& om = ev.oracle.moments;
  const std::vector<std::pair<std::string, double>> residuals{{"x_mean", ev.analytic.x_mean - om.x_mean},
                                                              {"y_mean", ev.analytic.y_mean - om.y_mean},
                                                              {"px_mean", ev.analytic.px_mean - om.px_mean},
                                                              {"norm_coef", ev.analytic.norm_coef - ev.oracle.norm_coefficient}};
  Sink sink(c.output, out);
  std::ostream& os = sink.get();
  const std::string fmt = c.format.empty() ? "text" : c.format;
  if (fmt == "csv") {
    write_csv(os, {row});
  } else if (fmt == "json") {
    nlohmann::ordered_json j = to_json(row);
    nlohmann::ordered_json r;
    for (const auto& [k, v] : residuals) r[k] = json_number(v);
    j["residuals"] = r;
    j["near_degenerate"] = ev.analytic.near_degenerate;
    j["dim_x"] = ev.oracle.shape.dim_x;
    j["truncation_delta"] = json_number(ev.oracle.truncation_delta);
    os << j.dump(2) << '\n';
  } else if (fmt == "text") {
    const auto line = [&](const std::string& k, const std::string& v) { os << k << ": " << v << '\n'; };
    const PointerMomentReport& m = row.report;
    line("mode", st.mode.to_string());
    line("class", to_string(st.op_class));
    line("s", format_number(st.s));
    line("sigma", format_number(st.sigma));
    line("g", format_number(st.coupling()));
    line("weak_value", format_weak_value(st.weak_value));
    line("theta", format_number(row.theta));
    line("phi", format_number(row.phi));
    line("x_mean", format_number(m.x_mean));
    line("y_mean", format_number(m.y_mean));
    line("px_mean", format_number(m.px_mean));
    line("py_mean", format_number(m.py_mean));
    line("x_var", format_number(m.x_var));
    line("y_var", format_number(m.y_var));
    line("px_var", format_number(m.px_var));
    line("norm_coef", format_number(m.norm_coef));
    line("ps_paper", format_number(m.ps_paper));
    line("ps_exact", format_number(m.ps_exact));
    line("snr_x", format_number(row.snr_x));
    line("snr_y", format_number(row.snr_y));
    for (const auto& [k, v] : residuals) line("residual_" + k, format_number(v));
    line("dim_x", std::to_string(ev.oracle.shape.dim_x));
    line("truncation_delta", format_number(ev.oracle.truncation_delta));
    if (ev.analytic.near_degenerate) line("warning", "normalization radicand below 1e-12");
  } else {
    throw ConfigError("--format must be text, csv or json");
  }
  return kOk;
}

inline int run_sweep(const RunConfig& c, std::ostream& out) {
  SweepGrid grid{parse_axis(c.s, "s"), c.selections(), c.parsed_modes(), parse_operator_class(c.op_class), c.sigma};
  const EvaluationOptions opts = c.evaluation();
  const std::string fmt = c.format.empty() ? "csv" : c.format;
  if (fmt != "csv" && fmt != "json") throw ConfigError("--format must be csv or json");
  const auto rows = snr_surface(grid, opts, c.threads);
  Sink sink(c.output, out);
  if (fmt == "csv") write_csv(sink.get(), rows, sweep_metadata(c, opts));
  else write_json(sink.get(), rows, sweep_metadata(c, opts));
  return kOk;
}

inline int run_figure(const RunConfig& c, std::ostream& out) {
  const FigurePreset preset = figure_preset(c.figure, {c.s_step, c.theta_divisions});
  const EvaluationOptions opts = c.evaluation();
  std::filesystem::create_directories(c.outdir);
  for (const auto& panel : preset.panels) {
    const auto rows = snr_surface(panel.grid, opts, c.threads);
    const std::filesystem::path path = std::filesystem::path(c.outdir) / panel.file_name();
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    auto meta = panel_metadata(panel, opts);
    meta.insert(meta.begin() + 1, {"title", preset.title});
    write_csv(f, rows, meta);
    out << path.string() << '\n';
  }
  return kOk;
}

inline int run_verify_command(const RunConfig& c, std::ostream& out) {
  const VerifyReport rep = run_verify({c.quick, c.canary, c.threads});
  for (const auto& chk : rep.checks) {
    out << (chk.passed() ? "PASS " : "FAIL ") << chk.name << "  max_residual=" << format_number(chk.max_residual)
        << " tol=" << format_number(chk.tolerance) << " points=" << chk.points;
    if (!chk.passed()) out << " failures=" << chk.failures << " worst=[" << chk.worst << "]";
    out << '\n';
  }
  if (!c.report.empty()) {
    Sink sink(c.report, out);
    sink.get() << rep.to_json().dump(2) << '\n';
  }
  out << (rep.passed() ? "verify: all checks passed" : "verify: FAILED") << '\n';
  return rep.passed() ? kOk : kVerifyFailed;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Weak-measurement pointer shifts and SNR for HG/LG pointers", "wmp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "wmp 0.1");

  CLI::App* expect = app.add_subcommand("expect", "evaluate one setting");
  add_evaluation_flags(expect, c, false);
  expect->add_option("--format", c.format, "text (default), csv or json");

  CLI::App* sweep = app.add_subcommand("sweep", "evaluate a grid of settings");
  add_evaluation_flags(sweep, c, true);
  sweep->add_option("--format", c.format, "csv (default) or json");
  sweep->add_option("--threads", c.threads, "worker threads (0 = all cores)");

  CLI::App* figure = app.add_subcommand("figure", "write the CSVs for a preset figure (fig1 .. fig9)");
  figure->add_option("name", c.figure, "fig1 .. fig9")->required();
  figure->add_option("--outdir", c.outdir, "directory for <fig>_<panel>.csv");
  figure->add_option("--ps", c.ps, "post-selection probability in the SNR: paper or exact");
  figure->add_option("--n", c.n_measurements, "number of measurements N");
  figure->add_option("--tol", c.tolerance, "truncation doubling-test tolerance");
  figure->add_option("--s-step", c.s_step, "override the s grid step");
  figure->add_option("--theta-div", c.theta_divisions, "surface theta grid k*pi/d, k = 1..d-1");
  figure->add_option("--threads", c.threads, "worker threads (0 = all cores)");

  CLI::App* verify = app.add_subcommand("verify", "run the self-check suite");
  verify->add_flag("--quick", c.quick, "small grid");
  verify->add_flag("--canary", c.canary, "use a deliberately broken formula; must fail");
  verify->add_option("--report", c.report, "write a JSON residual report here (- for stdout)");
  verify->add_option("--threads", c.threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfig;
  }

  try {
    if (expect->parsed()) return run_expect(c, out);
    if (sweep->parsed()) return run_sweep(c, out);
    if (figure->parsed()) return run_figure(c, out);
    return run_verify_command(c, out);
  } catch (const std::exception& e) {
    err << "wmp: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"wmp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace wmp::cli
