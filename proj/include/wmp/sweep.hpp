#pragma once

// Grid sweeps over (s, selection, mode) evaluated in parallel and gathered in a
// fixed order, plus the CSV/JSON row writers shared by every subcommand.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wmp/errors.hpp"
#include "wmp/modes.hpp"
#include "wmp/parallel.hpp"
#include "wmp/qubit.hpp"
#include "wmp/setting.hpp"
#include "wmp/snr.hpp"

namespace wmp {

/// A point on the selection axis: either explicit angles or a weak value.
struct SelectionPoint {
  std::optional<Selection> angles;
  std::optional<cdouble> weak_value;

  static SelectionPoint from_angles(double theta, double phi) { return {Selection{theta, phi}, std::nullopt}; }
  static SelectionPoint from_weak_value(cdouble w) { return {std::nullopt, w}; }
};

struct SweepGrid {
  std::vector<double> s;
  std::vector<SelectionPoint> selections;  // theta-major when built from angle axes
  std::vector<PointerMode> modes;
  OperatorClass op_class = OperatorClass::involutory;
  double sigma = 1.0;

  static std::vector<SelectionPoint> angle_axis(const std::vector<double>& thetas, const std::vector<double>& phis) {
    std::vector<SelectionPoint> out;
    for (double t : thetas)
      for (double p : phis) out.push_back(SelectionPoint::from_angles(t, p));
    return out;
  }

  [[nodiscard]] std::size_t size() const { return s.size() * selections.size() * modes.size(); }

  void validate() const {
    if (s.empty() || selections.empty() || modes.empty()) throw ConfigError("sweep axes must be non-empty");
    if (!(sigma > 0.0)) throw ConfigError("beam width must be positive");
  }
};

/// start, start + step, ... up to stop (inclusive, with a small tolerance).
inline std::vector<double> range_axis(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) throw ConfigError("range bounds must be finite");
  if (!(step > 0.0)) throw ConfigError("range step must be positive");
  if (stop < start) throw ConfigError("range is empty (stop < start)");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

inline MeasurementSetting make_setting(const PointerMode& mode, OperatorClass cls, const SelectionPoint& sel, double s,
                                       double sigma) {
  if (sel.weak_value) return MeasurementSetting::from_weak_value(mode, cls, *sel.weak_value, s, sigma);
  if (!sel.angles) throw ConfigError("selection point carries neither angles nor a weak value");
  return MeasurementSetting::from_selection(mode, cls, *sel.angles, s, sigma);
}

struct SweepRow {
  double s = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  PointerMode mode{};
  OperatorClass op_class = OperatorClass::involutory;
  cdouble weak_value{};
  PointerMomentReport report{};
  double snr_x = 0.0;
  double snr_y = 0.0;
  std::string error;  // empty when the point evaluated cleanly
};

inline SweepRow evaluate_row(const PointerMode& mode, OperatorClass cls, const SelectionPoint& sel, double s, double sigma,
                             const EvaluationOptions& opts) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  SweepRow row;
  row.s = s;
  row.mode = mode;
  row.op_class = cls;
  if (sel.angles) {
    row.theta = sel.angles->theta;
    row.phi = sel.angles->phi;
  } else if (sel.weak_value) {
    const Selection a = selection_for_sigma_weak_value(*sel.weak_value);
    row.theta = a.theta;
    row.phi = a.phi;
    row.weak_value = *sel.weak_value;
  }
  bool have_setting = false;
  try {
    const MeasurementSetting setting = make_setting(mode, cls, sel, s, sigma);
    row.weak_value = setting.weak_value;
    have_setting = true;
    const PointEvaluation ev = evaluate_point(setting, opts);
    row.report = ev.report();
    row.snr_x = ev.snr_x;
    row.snr_y = ev.snr_y;
  } catch (const std::exception& e) {
    row.report = {nan, nan, nan, nan, nan, nan, nan, nan, nan, nan};
    row.snr_x = row.snr_y = nan;
    if (!have_setting && !sel.weak_value) row.weak_value = {nan, nan};
    row.error = e.what();
  }
  return row;
}

/// Rows ordered s-major, then selection, then mode, whatever order the
/// workers finish in. Per-point failures land in the error column.
inline std::vector<SweepRow> snr_surface(const SweepGrid& grid, const EvaluationOptions& opts = {}, int threads = 0) {
  grid.validate();
  const std::size_t n_sel = grid.selections.size();
  const std::size_t n_mode = grid.modes.size();
  std::vector<SweepRow> rows(grid.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const std::size_t si = i / (n_sel * n_mode);
    const std::size_t li = (i / n_mode) % n_sel;
    const std::size_t mi = i % n_mode;
    rows[i] = evaluate_row(grid.modes[mi], grid.op_class, grid.selections[li], grid.s[si], grid.sigma, opts);
  });
  return rows;
}

// ---- output -----------------------------------------------------------------

inline const char* const kCsvHeader =
    "s,theta,phi,mode,class,wv_re,wv_im,x_mean,y_mean,px_mean,x_var,y_var,px_var,norm_coef,ps_paper,ps_exact,snr_x,snr_y,"
    "error";

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline std::string format_weak_value(cdouble w) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g%+gi", w.real(), w.imag());
  return buf;
}

inline std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

inline std::vector<double> numeric_fields(const SweepRow& r) {
  const auto& m = r.report;
  return {r.weak_value.real(), r.weak_value.imag(), m.x_mean, m.y_mean, m.px_mean, m.x_var, m.y_var,
          m.px_var,           m.norm_coef,         m.ps_paper, m.ps_exact, r.snr_x, r.snr_y};
}

inline void write_csv_row(std::ostream& out, const SweepRow& r) {
  out << format_number(r.s) << ',' << format_number(r.theta) << ',' << format_number(r.phi) << ','
      << csv_field(r.mode.to_string()) << ',' << to_string(r.op_class);
  for (double v : numeric_fields(r)) out << ',' << format_number(v);
  out << ',' << csv_field(r.error) << '\n';
}

/// `# key: value` lines, then the header, then the rows.
inline void write_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                      const std::vector<std::pair<std::string, std::string>>& metadata = {}) {
  for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << '\n';
  out << kCsvHeader << '\n';
  for (const auto& r : rows) write_csv_row(out, r);
}

inline nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v == 0.0 ? 0.0 : v;
  return format_number(v);
}

inline nlohmann::ordered_json to_json(const SweepRow& r) {
  static const char* const names[] = {"wv_re",  "wv_im",    "x_mean",   "y_mean", "px_mean", "x_var", "y_var",
                                      "px_var", "norm_coef", "ps_paper", "ps_exact", "snr_x", "snr_y"};
  nlohmann::ordered_json j;
  j["s"] = json_number(r.s);
  j["theta"] = json_number(r.theta);
  j["phi"] = json_number(r.phi);
  j["mode"] = r.mode.to_string();
  j["class"] = to_string(r.op_class);
  const auto values = numeric_fields(r);
  for (std::size_t i = 0; i < values.size(); ++i) j[names[i]] = json_number(values[i]);
  j["error"] = r.error;
  return j;
}

inline void write_json(std::ostream& out, const std::vector<SweepRow>& rows,
                       const std::vector<std::pair<std::string, std::string>>& metadata = {}) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata) meta[k] = v;
  doc["metadata"] = meta;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) doc["rows"].push_back(to_json(r));
  out << doc.dump(2) << '\n';
}

}  // namespace wmp
