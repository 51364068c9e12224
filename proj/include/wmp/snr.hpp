#pragma once

// Signal-to-noise ratio of the pointer shift:
//   SNR_W = sqrt(N P_s) |<W>| / sqrt(Var W),  W in {X, Y},
// with the mean taken from the closed forms and the variance from the oracle.

#include <cmath>
#include <string>

#include "wmp/analytic.hpp"
#include "wmp/errors.hpp"
#include "wmp/postselect.hpp"
#include "wmp/setting.hpp"

namespace wmp {

enum class PsConvention { paper, exact };
enum class Direction { x, y };

inline const char* to_string(PsConvention c) { return c == PsConvention::paper ? "paper" : "exact"; }

inline PsConvention parse_ps_convention(const std::string& text) {
  if (text == "paper") return PsConvention::paper;
  if (text == "exact") return PsConvention::exact;
  throw ConfigError("probability convention must be 'paper' or 'exact', got '" + text + "'");
}

struct PointerMomentReport {
  double x_mean = 0.0;
  double y_mean = 0.0;
  double px_mean = 0.0;
  double py_mean = 0.0;
  double x_var = 0.0;
  double y_var = 0.0;
  double px_var = 0.0;
  double norm_coef = 1.0;
  double ps_paper = 1.0;
  double ps_exact = 1.0;
};

struct EvaluationOptions {
  PsConvention ps_convention = PsConvention::paper;
  int n_measurements = 1;
  OracleOptions oracle{};
  AnalyticOptions analytic{};
};

inline double snr_value(double mean, double variance, double ps, int n_measurements) {
  if (n_measurements < 1) throw ConfigError("measurement count must be at least 1");
  if (!(variance > 0.0)) throw DegeneratePointerError("pointer variance is not positive");
  return std::sqrt(n_measurements * ps) * std::abs(mean) / std::sqrt(variance);
}

/// Analytic means, oracle variances and both SNRs at one setting.
struct PointEvaluation {
  MeasurementSetting setting;
  AnalyticMoments analytic;
  OracleReport oracle;
  double ps_paper = 1.0;
  double ps_exact = 1.0;
  double snr_x = 0.0;
  double snr_y = 0.0;

  [[nodiscard]] PointerMomentReport report() const {
    return {analytic.x_mean, analytic.y_mean, analytic.px_mean, oracle.moments.py_mean, oracle.moments.x_var,
            oracle.moments.y_var, oracle.moments.px_var, analytic.norm_coef, ps_paper, ps_exact};
  }
};

inline PointEvaluation evaluate_point(const MeasurementSetting& setting, const EvaluationOptions& opts = {}) {
  setting.validate();
  PointEvaluation ev{setting, analytic_moments(setting, opts.analytic), oracle_evaluate(setting, opts.oracle)};
  ev.ps_paper = setting.ps_paper();
  ev.ps_exact = ev.oracle.exact_prob;
  const double ps = opts.ps_convention == PsConvention::paper ? ev.ps_paper : ev.ps_exact;
  ev.snr_x = snr_value(ev.analytic.x_mean, ev.oracle.moments.x_var, ps, opts.n_measurements);
  ev.snr_y = snr_value(ev.analytic.y_mean, ev.oracle.moments.y_var, ps, opts.n_measurements);
  return ev;
}

struct SnrRequest {
  MeasurementSetting setting;
  Direction direction = Direction::x;
  int n_measurements = 1;
  PsConvention ps_convention = PsConvention::paper;
};

inline double snr(const SnrRequest& req, const OracleOptions& oracle = {}, const AnalyticOptions& analytic = {}) {
  EvaluationOptions opts{req.ps_convention, req.n_measurements, oracle, analytic};
  const PointEvaluation ev = evaluate_point(req.setting, opts);
  return req.direction == Direction::x ? ev.snr_x : ev.snr_y;
}

}  // namespace wmp
