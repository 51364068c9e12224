#pragma once

// Self-check suite behind `wmp verify`: closed forms against the oracle, the
// two evolution routes against each other, the fundamental-mode reductions,
// the weak-regime limits and the SNR scaling laws. Every check reports its
// worst residual against a fixed tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "wmp/analytic.hpp"
#include "wmp/modes.hpp"
#include "wmp/parallel.hpp"
#include "wmp/postselect.hpp"
#include "wmp/snr.hpp"
#include "wmp/sweep.hpp"

namespace wmp {

struct VerifyOptions {
  bool quick = false;
  bool canary = false;  // swap in a deliberately broken formula; the run must fail
  int threads = 0;
};

struct VerifyCheck {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t points = 0;
  std::size_t failures = 0;
  std::string worst;  // setting that produced max_residual

  [[nodiscard]] bool passed() const { return failures == 0; }
};

struct VerifyReport {
  bool quick = false;
  bool canary = false;
  std::vector<VerifyCheck> checks;

  [[nodiscard]] bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed(); });
  }

  [[nodiscard]] nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["passed"] = passed();
    j["quick"] = quick;
    j["canary"] = canary;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks)
      j["checks"].push_back({{"name", c.name},
                             {"passed", c.passed()},
                             {"max_residual", json_number(c.max_residual)},
                             {"tolerance", c.tolerance},
                             {"points", c.points},
                             {"failures", c.failures},
                             {"worst", c.worst}});
    return j;
  }
};

struct GridPoint {
  PointerMode mode;
  OperatorClass op_class;
  cdouble weak_value;
  double s;

  [[nodiscard]] std::string describe() const {
    return mode.to_string() + " " + to_string(op_class) + " w=" + format_weak_value(weak_value) + " s=" + format_number(s);
  }
  [[nodiscard]] MeasurementSetting setting(double sigma = 1.0) const {
    return MeasurementSetting::from_weak_value(mode, op_class, weak_value, s, sigma);
  }
};

inline std::vector<GridPoint> equivalence_grid(bool quick) {
  std::vector<PointerMode> modes;
  std::vector<cdouble> ws;
  std::vector<double> ss;
  if (quick) {
    modes = {PointerMode::hg(0), PointerMode::hg(2), PointerMode::lg(0, 1), PointerMode::lg(1, 1)};
    ws = {{0.5, 1.0}, {5.0, 5.0}};
    ss = {0.5, 2.0};
  } else {
    for (int n = 0; n <= 3; ++n) modes.push_back(PointerMode::hg(n));
    for (auto [p, l] : {std::pair{0, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 2}}) modes.push_back(PointerMode::lg(p, l));
    ws = {{0.5, 0.0}, {0.5, 1.0}, {0.0, 1.0}, {5.0, 0.0}, {5.0, 5.0}};
    ss = {0.1, 0.5, 1.0, 2.0, 4.0};
  }
  std::vector<GridPoint> grid;
  for (const auto& m : modes)
    for (auto cls : {OperatorClass::involutory, OperatorClass::projector})
      for (cdouble w : ws)
        for (double s : ss) grid.push_back({m, cls, w, s});
  return grid;
}

namespace detail {

// Accumulates per-point residuals into a check; failures are points whose
// residual exceeds the tolerance (or is not a number).
struct CheckBuilder {
  VerifyCheck check;
  std::vector<double> residuals;
  std::vector<std::string> labels;

  CheckBuilder(std::string name, double tol, std::size_t n) : residuals(n, 0.0), labels(n) {
    check.name = std::move(name);
    check.tolerance = tol;
  }

  void set(std::size_t i, double residual, std::string label) {
    residuals[i] = residual;
    labels[i] = std::move(label);
  }

  VerifyCheck finish() {
    check.points = residuals.size();
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      const double r = residuals[i];
      const bool bad = !(r <= check.tolerance);
      if (bad) ++check.failures;
      if (bad && std::isnan(check.max_residual)) continue;
      if (std::isnan(r) || r > check.max_residual) {
        check.max_residual = r;
        check.worst = labels[i];
      }
    }
    return check;
  }
};

// Test-only copy of the position shift with the sign of the |w|^2 term flipped
// in the projector branch.
inline double canary_x_expectation(const MeasurementSetting& st) {
  if (st.op_class == OperatorClass::involutory) return x_expectation(st);
  const double s = st.s, g = st.coupling();
  const cdouble w = st.weak_value;
  const double n2 = 1.0 / norm_radicand(st);
  const double overlap = std::exp(-s * s / 8.0) * weighted(diagonal_weights(st.mode), [&](int n) { return laguerre(n, s * s / 4.0); });
  return n2 * g * (w.real() + abs2(w)) * overlap + n2 * g * abs2(w);
}

inline double failed_point() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace detail

inline VerifyCheck verify_oracle_equivalence(const VerifyOptions& opts) {
  const auto grid = equivalence_grid(opts.quick);
  detail::CheckBuilder b("oracle_equivalence", 1e-8, grid.size());
  parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
    double r = detail::failed_point();
    try {
      const MeasurementSetting st = grid[i].setting();
      const AnalyticMoments a = analytic_moments(st);
      const OracleReport o = oracle_evaluate(st);
      const double x = opts.canary ? detail::canary_x_expectation(st) : a.x_mean;
      const double scale = std::max(1.0, st.coupling());
      r = std::max({std::abs(x - o.moments.x_mean), std::abs(a.y_mean - o.moments.y_mean), std::abs(a.px_mean - o.moments.px_mean),
                    std::abs(a.norm_coef - o.norm_coefficient)}) /
          scale;
    } catch (const std::exception&) {
    }
    b.set(i, r, grid[i].describe());
  });
  return b.finish();
}

inline VerifyCheck verify_decomposition(const VerifyOptions& opts) {
  const auto grid = equivalence_grid(opts.quick);
  detail::CheckBuilder b("decomposition_identity", 1e-8, grid.size());
  parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
    double r = detail::failed_point();
    try {
      const MeasurementSetting st = grid[i].setting();
      const Shape sh = adaptive_shape(st.mode, st.s);
      const TruncatedState ptr = pointer_state(st.mode, sh);
      const QubitState pre = realizing_states(st).pre;
      const SystemOperator op = SystemOperator::for_class(st.op_class);
      const TruncatedState a = evolve_decomposed(op, st.s, ptr, pre);
      const TruncatedState e = evolve_exponential(op, st.s, ptr, pre);
      r = (a.amplitudes() - e.amplitudes()).cwiseAbs().maxCoeff();
    } catch (const std::exception&) {
    }
    b.set(i, r, grid[i].describe());
  });
  return b.finish();
}

inline VerifyCheck verify_fundamental_reduction(const VerifyOptions&) {
  std::vector<GridPoint> grid;
  for (double s : {0.0, 0.5, 1.0, 2.0, 4.0, 6.0})
    for (auto cls : {OperatorClass::involutory, OperatorClass::projector})
      for (cdouble w : {cdouble(0.5), cdouble(0.5, 1.0), cdouble(5.0, 5.0)})
        for (const auto& m : {PointerMode::hg(0), PointerMode::lg(0, 0)}) grid.push_back({m, cls, w, s});
  detail::CheckBuilder b("fundamental_reduction", 1e-12, grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const MeasurementSetting st = grid[i].setting();
    const FundamentalMoments f = reduced_fg_moments(st.s, st.sigma, st.op_class, st.weak_value);
    const double lam = norm_coefficient(st);
    const double r = std::max({std::abs(x_expectation(st) - f.x_mean) / std::max(1.0, st.s), std::abs(p_expectation(st) - f.px_mean),
                               std::abs(1.0 / (lam * lam) - f.normalizer)});
    b.set(i, r, grid[i].describe());
  }
  return b.finish();
}

inline VerifyCheck verify_first_order(const VerifyOptions&) {
  const double s = 1e-3;
  std::vector<GridPoint> grid;
  for (const auto& w : {cdouble(0.5), cdouble(0.5, 0.5), cdouble(0.0, 1.0), std::polar(1.0, 2.0)})
    for (auto cls : {OperatorClass::involutory, OperatorClass::projector}) {
      for (int n = 0; n <= 2; ++n) grid.push_back({PointerMode::hg(n), cls, w, s});
      for (int p = 0; p <= 2; ++p)
        for (int l = -2; l <= 2; ++l) grid.push_back({PointerMode::lg(p, l), cls, w, s});
    }
  detail::CheckBuilder b("first_order_limits", 1e-3, grid.size());
  auto rel = [](double a, double ref) { return ref == 0.0 ? std::abs(a) : std::abs(a / ref - 1.0); };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const MeasurementSetting st = grid[i].setting();
    const FirstOrderMoments f = first_order_moments(st.mode, st.op_class, st.weak_value, st.coupling(), st.sigma);
    double r = rel(x_expectation(st), f.x_mean);
    r = std::max(r, rel(p_expectation(st), f.px_mean));
    if (st.mode.is_lg()) r = std::max(r, rel(y_expectation(st), f.y_mean));
    b.set(i, r, grid[i].describe());
  }
  return b.finish();
}

// SNR_y vanishes without azimuthal structure, grows with l at weak coupling
// and decays at strong coupling. Residuals are 0 (holds) or 1 (violated).
inline VerifyCheck verify_y_structure(const VerifyOptions& opts) {
  detail::CheckBuilder b("y_structure", 0.0, 0);
  auto push = [&](bool ok, std::string label) {
    b.residuals.push_back(ok ? 0.0 : 1.0);
    b.labels.push_back(std::move(label));
  };
  const cdouble w(0.5, 1.0);
  const auto snr_y = [&](const PointerMode& m, OperatorClass cls, double s) {
    return snr({MeasurementSetting::from_weak_value(m, cls, w, s), Direction::y});
  };
  const std::vector<double> ss = opts.quick ? std::vector<double>{0.5, 2.0} : std::vector<double>{0.1, 0.5, 1.0, 2.0, 4.0};
  for (auto cls : {OperatorClass::involutory, OperatorClass::projector})
    for (double s : ss) {
      for (int n = 0; n <= 3; ++n) push(snr_y(PointerMode::hg(n), cls, s) == 0.0, "hg:" + std::to_string(n) + " snr_y == 0");
      for (int p = 0; p <= 2; ++p) push(snr_y(PointerMode::lg(p, 0), cls, s) == 0.0, "lg:" + std::to_string(p) + ",0 snr_y == 0");
    }
  double prev = 0.0;
  for (int l = 1; l <= 3; ++l) {
    const double v = snr_y(PointerMode::lg(0, l), OperatorClass::projector, 0.3);
    push(v >= prev, "snr_y non-decreasing in l at s=0.3, l=" + std::to_string(l));
    prev = v;
    push(snr_y(PointerMode::lg(0, l), OperatorClass::projector, 8.0) < snr_y(PointerMode::lg(0, l), OperatorClass::projector, 0.5),
         "snr_y(s=8) < snr_y(s=0.5), l=" + std::to_string(l));
  }
  return b.finish();
}

inline VerifyCheck verify_snr_scaling(const VerifyOptions& opts) {
  std::vector<GridPoint> grid;
  const std::vector<PointerMode> modes = opts.quick ? std::vector<PointerMode>{PointerMode::lg(0, 1)}
                                                    : std::vector<PointerMode>{PointerMode::hg(0), PointerMode::hg(2), PointerMode::lg(0, 1), PointerMode::lg(1, 1)};
  for (const auto& m : modes)
    for (auto cls : {OperatorClass::involutory, OperatorClass::projector})
      for (double s : {0.5, 2.0}) grid.push_back({m, cls, {0.5, 1.0}, s});
  detail::CheckBuilder b("snr_scaling", 1e-10, grid.size());
  parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
    double r = detail::failed_point();
    try {
      double worst = 0.0;
      for (auto dir : {Direction::x, Direction::y}) {
        const double one = snr({grid[i].setting(), dir, 1});
        worst = std::max(worst, std::abs(snr({grid[i].setting(), dir, 4}) - 2.0 * one));
        for (double sigma : {0.5, 2.0}) worst = std::max(worst, std::abs(snr({grid[i].setting(sigma), dir}) - one));
      }
      r = worst;
    } catch (const std::exception&) {
    }
    b.set(i, r, grid[i].describe());
  });
  return b.finish();
}

inline VerifyReport run_verify(const VerifyOptions& opts = {}) {
  VerifyReport rep{opts.quick, opts.canary, {}};
  rep.checks.push_back(verify_oracle_equivalence(opts));
  rep.checks.push_back(verify_decomposition(opts));
  rep.checks.push_back(verify_fundamental_reduction(opts));
  rep.checks.push_back(verify_first_order(opts));
  rep.checks.push_back(verify_y_structure(opts));
  rep.checks.push_back(verify_snr_scaling(opts));
  return rep;
}

}  // namespace wmp
