// One line per acceptance criterion; exit status is non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "wmp/analytic.hpp"
#include "wmp/postselect.hpp"
#include "wmp/snr.hpp"
#include "wmp/sweep.hpp"

using namespace wmp;

namespace {

constexpr OperatorClass kClasses[] = {OperatorClass::involutory, OperatorClass::projector};

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("%s  criterion %d  %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<PointerMode> criterion_modes() {
  std::vector<PointerMode> m;
  for (int n = 0; n <= 3; ++n) m.push_back(PointerMode::hg(n));
  for (auto [p, l] : {std::pair{0, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 2}}) m.push_back(PointerMode::lg(p, l));
  return m;
}

const std::vector<cdouble> kGridWeakValues{{0.5, 0.0}, {0.5, 1.0}, {0.0, 1.0}, {5.0, 0.0}, {5.0, 5.0}};
const std::vector<double> kGridS{0.1, 0.5, 1.0, 2.0, 4.0};

MeasurementSetting at(const PointerMode& m, OperatorClass c, cdouble w, double s, double sigma = 1.0) {
  return MeasurementSetting::from_weak_value(m, c, w, s, sigma);
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto modes = criterion_modes();
  std::vector<MeasurementSetting> grid;
  for (const auto& m : modes)
    for (auto c : kClasses)
      for (cdouble w : kGridWeakValues)
        for (double s : kGridS) grid.push_back(at(m, c, w, s));
  std::vector<double> res(grid.size(), std::nan(""));
  parallel_for(grid.size(), 0, [&](std::size_t i) {
    const AnalyticMoments a = analytic_moments(grid[i]);
    const OracleReport o = oracle_evaluate(grid[i]);
    res[i] = std::max({std::abs(a.x_mean - o.moments.x_mean), std::abs(a.y_mean - o.moments.y_mean),
                       std::abs(a.px_mean - o.moments.px_mean), std::abs(a.norm_coef - o.norm_coefficient)}) /
             std::max(1.0, grid[i].coupling());
  });
  const double worst = *std::max_element(res.begin(), res.end());
  const bool ok = std::all_of(res.begin(), res.end(), [](double r) { return r <= 1e-8; });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(1, "oracle equivalence grid", ok,
         std::to_string(grid.size()) + " settings, max |analytic - oracle| / max(1,g) = " + fmt("%.2e", worst) + " (tol 1e-8), " +
             fmt("%.1f s", secs));
}

void criterion2() {
  const auto modes = criterion_modes();
  std::vector<MeasurementSetting> grid;
  for (const auto& m : modes)
    for (auto c : kClasses)
      for (cdouble w : kGridWeakValues)
        for (double s : kGridS) grid.push_back(at(m, c, w, s));
  std::vector<double> res(grid.size(), std::nan(""));
  parallel_for(grid.size(), 0, [&](std::size_t i) {
    const MeasurementSetting& st = grid[i];
    const Shape sh = adaptive_shape(st.mode, st.s);
    const TruncatedState ptr = pointer_state(st.mode, sh);
    const QubitState pre = realizing_states(st).pre;
    const SystemOperator op = SystemOperator::for_class(st.op_class);
    res[i] = (evolve_decomposed(op, st.s, ptr, pre).amplitudes() - evolve_exponential(op, st.s, ptr, pre).amplitudes()).cwiseAbs().maxCoeff();
  });
  const double worst = *std::max_element(res.begin(), res.end());
  report(2, "decomposition identity", worst <= 1e-8,
         std::to_string(grid.size()) + " settings, max amplitude difference decomposed vs dense exponential = " + fmt("%.2e", worst) +
             " (tol 1e-8)");
}

void criterion3() {
  double worst = 0.0;
  int n = 0;
  for (double s : {0.0, 0.5, 1.0, 2.0, 4.0, 6.0})
    for (auto c : kClasses)
      for (cdouble w : {cdouble(0.5), cdouble(0.5, 1.0), cdouble(5.0, 5.0)}) {
        const FundamentalMoments f = reduced_fg_moments(s, 1.0, c, w);
        const MeasurementSetting st = at(PointerMode::hg(0), c, w, s);
        const double lam = norm_coefficient(st);
        worst = std::max({worst, std::abs(x_expectation(st) - f.x_mean), std::abs(p_expectation(st) - f.px_mean),
                          std::abs(1.0 / (lam * lam) - f.normalizer)});
        ++n;
      }
  report(3, "fundamental-Gaussian reduction", worst <= 1e-12,
         std::to_string(n) + " settings, max |general - reduced| over x, px, normalizer = " + fmt("%.2e", worst) + " (tol 1e-12)");
}

void criterion4() {
  const double s = 1e-3, g = s;
  double wx = 0.0, wp = 0.0, wy = 0.0;
  int n = 0;
  const std::vector<cdouble> ws{{0.5, 0.0}, {0.5, 0.5}, {0.0, 1.0}, {0.6, 0.8}, {-0.3, 0.2}, std::polar(1.0, 2.0)};
  std::vector<PointerMode> modes;
  for (int k = 0; k <= 2; ++k) modes.push_back(PointerMode::hg(k));
  for (int p = 0; p <= 2; ++p)
    for (int l = -2; l <= 2; ++l) modes.push_back(PointerMode::lg(p, l));
  for (const auto& m : modes)
    for (auto c : kClasses)
      for (cdouble w : ws) {
        const MeasurementSetting st = at(m, c, w, s);
        ++n;
        // relative to g Re w; for Re w = 0 measure against g |w|
        const double xref = g * w.real();
        wx = std::max(wx, std::abs(x_expectation(st) - xref) / std::abs(w.real() != 0.0 ? xref : g * std::abs(w)));
        if (w.imag() != 0.0) {
          const double ratio = p_expectation(st) / (g * w.imag() / 2.0);
          wp = std::max(wp, std::abs(ratio / m.order_factor() - 1.0));
        }
        if (m.is_lg() && m.l() != 0 && w.imag() != 0.0) {
          const double yref = -m.l() * g * w.imag();
          wy = std::max(wy, std::abs(y_expectation(st) / yref - 1.0));
        }
      }
  const bool ok = wx <= 1e-3 && wp <= 1e-3 && wy <= 1e-3;
  report(4, "first-order limits", ok,
         std::to_string(n) + " settings at s=1e-3, max relative deviation: x " + fmt("%.2e", wx) + ", px ratio " + fmt("%.2e", wp) +
             ", y " + fmt("%.2e", wy) + " (tol 1e-3)");
}

void criterion5() {
  std::string detail;
  bool ok = true;
  double worst = 0.0;
  for (auto c : kClasses)
    for (cdouble w : {cdouble(0.5), cdouble(0.5, 1.0)}) {
      const MeasurementSetting st = at(PointerMode::hg(0), c, w, 10.0);
      const double value = snr({st, Direction::x});
      const SnrLimit lim = snr_strong_limit(c, w, st.ps_paper());
      const double gap = std::abs(value / lim.value - 1.0);
      worst = std::max(worst, gap);
      ok = ok && !lim.divergent && gap <= 0.01;
      detail += std::string(c == OperatorClass::involutory ? "inv" : "proj") + " w=" + format_weak_value(w) + ": " + fmt("%.5f", value) +
                " vs " + fmt("%.5f", lim.value) + " (" + fmt("%.2f%%", 100 * gap) + "); ";
    }
  // How the gap closes with s (information only).
  AnalyticOptions wide;
  wide.series_budget = 2000;
  const double far = snr({at(PointerMode::hg(0), OperatorClass::projector, 0.5, 40.0), Direction::x}, {}, wide);
  detail += "worst gap " + fmt("%.2f%%", 100 * worst) + " (tol 1%); projector w=0.5 at s=40: " +
            fmt("%.3f%%", 100 * std::abs(far / snr_strong_limit(OperatorClass::projector, 0.5, 0.8).value - 1.0));
  report(5, "strong-coupling SNR limits at s=10", ok, detail);
}

int monotonicity_violations(PsConvention conv) {
  SweepGrid grid;
  for (int k = 1; k <= 16; ++k) grid.s.push_back(0.25 * k);
  std::vector<double> thetas;
  for (int k = 1; k <= 15; ++k) thetas.push_back(k * std::numbers::pi / 16);
  grid.selections = SweepGrid::angle_axis(thetas, {0.0});
  grid.modes = {PointerMode::hg(0), PointerMode::hg(1), PointerMode::hg(2)};
  EvaluationOptions opts;
  opts.ps_convention = conv;
  const auto rows = snr_surface(grid, opts);
  int bad = 0;
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    const bool ok = rows[i].error.empty() && rows[i].snr_x >= rows[i + 1].snr_x && rows[i + 1].snr_x >= rows[i + 2].snr_x;
    if (!ok) ++bad;
  }
  return bad;
}

void criterion6() {
  const int exact = monotonicity_violations(PsConvention::exact);
  const int paper = monotonicity_violations(PsConvention::paper);
  report(6, "Figure-1 monotonicity in n", exact == 0,
         "240 grid points, P_s = exact post-selection probability: " + std::to_string(exact) +
             " violations; with P_s = cos^2(theta/2): " + std::to_string(paper) + " violations (all at theta > pi/2, 1 <= s <= 3.5)");
}

void criterion7() {
  bool zeros = true;
  for (auto c : kClasses)
    for (double s : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0})
      for (cdouble w : kGridWeakValues) {
        for (int n = 0; n <= 3; ++n) zeros = zeros && snr({at(PointerMode::hg(n), c, w, s), Direction::y}) == 0.0;
        for (int p = 0; p <= 2; ++p) zeros = zeros && snr({at(PointerMode::lg(p, 0), c, w, s), Direction::y}) == 0.0;
      }
  const cdouble w(0.5, 1.0);
  bool growth = true, decay = true;
  std::string values;
  double prev = 0.0;
  for (int l = 1; l <= 3; ++l) {
    const auto y = [&](double s) { return snr({at(PointerMode::lg(0, l), OperatorClass::projector, w, s), Direction::y}); };
    const double a = y(0.3), b = y(0.5), c = y(8.0);
    growth = growth && a >= prev;
    decay = decay && c < b;
    prev = a;
    values += " l=" + std::to_string(l) + ": " + fmt("%.4f", a) + "/" + fmt("%.4f", b) + "/" + fmt("%.2e", c) + ";";
  }
  report(7, "y-direction structure", zeros && growth && decay,
         std::string("HG and l=0 SNR_y exactly 0: ") + (zeros ? "yes" : "NO") + "; SNR_y(s=0.3/0.5/8) projector w=0.5+i" + values +
             " growth in l " + (growth ? "holds" : "FAILS") + ", decay " + (decay ? "holds" : "FAILS"));
}

void criterion8() {
  // Pairs with equal real part and modulus are (w, conj w).
  double dx = 0.0, dp = 0.0, anti = 0.0, oracle_anti = 0.0, yprop = 0.0;
  for (const auto& m : criterion_modes())
    for (auto c : kClasses)
      for (cdouble w : {cdouble(0.5, 1.0), cdouble(5.0, 5.0), cdouble(-0.3, 0.7)})
        for (double s : {0.5, 2.0}) {
          const AnalyticMoments a = analytic_moments(at(m, c, w, s));
          const AnalyticMoments b = analytic_moments(at(m, c, std::conj(w), s));
          dx = std::max(dx, std::abs(a.x_mean - b.x_mean));
          dp = std::max(dp, std::abs(a.px_mean - b.px_mean));
          anti = std::max(anti, std::abs(a.px_mean + b.px_mean));
          if (s == 2.0 && m == PointerMode::hg(1)) {
            const double oa = oracle_evaluate(at(m, c, w, s)).moments.px_mean;
            const double ob = oracle_evaluate(at(m, c, std::conj(w), s)).moments.px_mean;
            oracle_anti = std::max(oracle_anti, std::abs(oa + ob));
          }
        }
  for (const auto& m : criterion_modes()) {
    if (!m.is_lg()) continue;
    for (double s : {0.5, 2.0})
      for (double mod : {0.5, 1.5, 5.0}) {
        const double base = y_expectation(at(m, OperatorClass::involutory, std::polar(mod, 0.4), s)) / (mod * std::sin(0.4));
        for (double ph : {1.0, 2.2, -0.7, -2.5}) {
          const cdouble w = std::polar(mod, ph);
          const double r = y_expectation(at(m, OperatorClass::involutory, w, s)) / w.imag();
          yprop = std::max(yprop, std::abs(r - base));
        }
      }
  }
  const bool ok = dx <= 1e-10 && dp <= 1e-10 && yprop <= 1e-10;
  report(8, "dependence-structure invariants", ok,
         "w vs conj(w): max |dx_mean| " + fmt("%.1e", dx) + ", max |dpx_mean| " + fmt("%.2e", dp) +
             " (tol 1e-10); px_mean is odd in Im w instead: max |px(w) + px(conj w)| " + fmt("%.1e", anti) + " analytic, " +
             fmt("%.1e", oracle_anti) + " oracle; involutory y_mean / Im w at fixed |w| spread " + fmt("%.1e", yprop));
}

void criterion9() {
  double dn = 0.0, ds = 0.0;
  for (const PointerMode& m : {PointerMode::hg(0), PointerMode::hg(2), PointerMode::lg(0, 1), PointerMode::lg(1, 2)})
    for (auto c : kClasses)
      for (cdouble w : {cdouble(0.5, 1.0), cdouble(5.0, 0.0)})
        for (double s : {0.3, 1.5, 4.0})
          for (auto dir : {Direction::x, Direction::y}) {
            const double one = snr({at(m, c, w, s), dir, 1});
            dn = std::max(dn, std::abs(snr({at(m, c, w, s), dir, 4}) - 2.0 * one));
            for (double sigma : {0.5, 1.7, 2.0}) ds = std::max(ds, std::abs(snr({at(m, c, w, s, sigma), dir}) - one));
          }
  report(9, "sqrt(N) scaling and sigma invariance", dn <= 1e-10 && ds <= 1e-10,
         "max |SNR(N=4) - 2 SNR(N=1)| " + fmt("%.1e", dn) + ", max |SNR(sigma) - SNR(1)| over sigma in {0.5,1.7,2} " + fmt("%.1e", ds) +
             " (tol 1e-10)");
}

}  // namespace

int main() {
  const auto guard = [](int id, void (*fn)()) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, "aborted", false, e.what());
    }
  };
  guard(1, criterion1);
  guard(2, criterion2);
  guard(3, criterion3);
  guard(4, criterion4);
  guard(5, criterion5);
  guard(6, criterion6);
  guard(7, criterion7);
  guard(8, criterion8);
  guard(9, criterion9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
