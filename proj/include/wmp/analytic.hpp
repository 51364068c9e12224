#pragma once

// Closed-form pointer shifts after post-selection for HG and LG pointers and
// both observable classes (A^2 = I and A^2 = A), at arbitrary coupling.
//
// Everything is evaluated at sigma = 1 in terms of s; g = s * sigma enters
// only when results are reported (positions scale with sigma, momenta with
// 1/sigma).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wmp/errors.hpp"
#include "wmp/modes.hpp"
#include "wmp/qubit.hpp"
#include "wmp/setting.hpp"
#include "wmp/specfn.hpp"

namespace wmp {

struct AnalyticOptions {
  int series_budget = 400;        // extra terms allowed past kappa = n
  int series_quiet_terms = 5;     // consecutive negligible terms that end the sum
  double series_rel_cutoff = 1e-16;
};

namespace detail {

// x-mode Fock levels n with the weight sum_{j,k,j',k'} C_{jk} C*_{j'k'} delta_{j'+k', j+k}
// that multiplies every x-diagonal matrix element. HG(n, m) is the single level n.
struct LevelWeight {
  int level = 0;
  double weight = 0.0;
};

inline std::vector<LevelWeight> diagonal_weights(const PointerMode& mode) {
  if (mode.is_hg()) return {{mode.n(), 1.0}};
  const LGIndices idx = mode.lg_indices();
  const LGCoefficientTable c = lg_coefficients(idx.alpha, idx.beta);
  std::vector<double> acc(static_cast<std::size_t>(idx.mu + 1), 0.0);
  for (int j = 0; j <= idx.alpha; ++j)
    for (int k = 0; k <= idx.beta; ++k)
      for (int jp = 0; jp <= idx.alpha; ++jp)
        for (int kp = 0; kp <= idx.beta; ++kp)
          if (jp + kp == j + k) acc[static_cast<std::size_t>(idx.mu - k - j)] += (c(j, k) * std::conj(c(jp, kp))).real();
  std::vector<LevelWeight> out;
  for (int n = 0; n <= idx.mu; ++n)
    if (acc[static_cast<std::size_t>(n)] != 0.0) out.push_back({n, acc[static_cast<std::size_t>(n)]});
  return out;
}

inline double weighted(const std::vector<LevelWeight>& weights, const std::function<double(int)>& f) {
  double total = 0.0;
  for (const auto& w : weights) total += w.weight * f(w.level);
  return total;
}

// sum_{j,k,j',k'} Re{i C_{jk} C*_{j'k'}} delta_{j'+k', j+k+shift} f(j+k), shift = +-1.
inline double lg_offdiagonal_sum(const LGIndices& idx, const LGCoefficientTable& c, int shift,
                                 const std::function<double(int)>& f) {
  double total = 0.0;
  const cdouble i_unit(0.0, 1.0);
  for (int j = 0; j <= idx.alpha; ++j)
    for (int k = 0; k <= idx.beta; ++k)
      for (int jp = 0; jp <= idx.alpha; ++jp)
        for (int kp = 0; kp <= idx.beta; ++kp)
          if (jp + kp == j + k + shift) total += (i_unit * c(j, k) * std::conj(c(jp, kp))).real() * f(j + k);
  return total;
}

inline double abs2(cdouble w) { return std::norm(w); }

}  // namespace detail

/// Inverse square of the norm coefficient (the bracket under the -1/2 power).
inline double norm_radicand(const MeasurementSetting& setting) {
  const double s = setting.s;
  const cdouble w = setting.weak_value;
  const auto weights = detail::diagonal_weights(setting.mode);
  if (setting.op_class == OperatorClass::involutory) {
    const double overlap = std::exp(-s * s / 2.0) * detail::weighted(weights, [&](int n) { return laguerre(n, s * s); });
    return 1.0 + 0.5 * (1.0 - detail::abs2(w)) * (overlap - 1.0);
  }
  const double overlap = std::exp(-s * s / 8.0) * detail::weighted(weights, [&](int n) { return laguerre(n, s * s / 4.0); });
  return 1.0 + 2.0 * (w.real() - detail::abs2(w)) * (overlap - 1.0);
}

// Radicands below this are reported as near-degenerate.
inline constexpr double kNearDegenerateRadicand = 1e-12;

/// lambda / gamma (HG) or lambda' / gamma' (LG).
inline double norm_coefficient(const MeasurementSetting& setting) {
  const double r = norm_radicand(setting);
  if (!(r > 0.0)) throw DegenerateNormalizationError("normalization radicand is not positive");
  return 1.0 / std::sqrt(r);
}

inline double x_expectation(const MeasurementSetting& setting) {
  const double g = setting.coupling();
  const double s = setting.s;
  const cdouble w = setting.weak_value;
  const double n2 = 1.0 / norm_radicand(setting);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw DegenerateNormalizationError("normalization radicand is not positive");
  if (setting.op_class == OperatorClass::involutory) return n2 * g * w.real();
  const auto weights = detail::diagonal_weights(setting.mode);
  const double overlap = std::exp(-s * s / 8.0) * detail::weighted(weights, [&](int n) { return laguerre(n, s * s / 4.0); });
  return n2 * g * (w.real() - detail::abs2(w)) * overlap + n2 * g * detail::abs2(w);
}

/// sum_kappa n!/kappa! (-x)^{kappa-n} L_n^{(kappa-n)}(x) L_n^{(kappa-n+1)}(x), x > 0.
inline double momentum_series(int n, double x, const AnalyticOptions& opts = {}) {
  if (!(x > 0.0)) throw std::invalid_argument("momentum_series: argument must be positive");
  const double log_x = std::log(x);
  double sum = 0.0;
  int quiet = 0;
  const int last = n + opts.series_budget;
  for (int kappa = 0; kappa <= last; ++kappa) {
    const int eta = kappa - n;
    const ScaledValue a = laguerre_assoc_scaled(n, eta, x);
    const ScaledValue b = laguerre_assoc_scaled(n, eta + 1, x);
    double term = 0.0;
    if (a.mantissa != 0.0 && b.mantissa != 0.0) {
      const double sign = (std::abs(eta) % 2 == 0) ? 1.0 : -1.0;
      const double log_pref = log_factorial(n) - log_factorial(kappa) + eta * log_x + a.log_scale + b.log_scale;
      term = sign * a.mantissa * b.mantissa * std::exp(log_pref);
    }
    sum += term;
    if (kappa > n) {
      quiet = std::abs(term) <= opts.series_rel_cutoff * std::abs(sum) ? quiet + 1 : 0;
      if (quiet >= opts.series_quiet_terms) return sum;
    }
  }
  throw SeriesBudgetError("momentum series did not converge within the term budget");
}

inline double p_expectation(const MeasurementSetting& setting, const AnalyticOptions& opts = {}) {
  const double s = setting.s;
  const cdouble w = setting.weak_value;
  if (s == 0.0 || w.imag() == 0.0) return 0.0;
  const double n2 = 1.0 / norm_radicand(setting);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw DegenerateNormalizationError("normalization radicand is not positive");
  // 2 g <P_x> = n2 s^2 Im(w) (...)  =>  <P_x> = n2 Im(w) s / (2 sigma) (...)
  const double scale = n2 * w.imag() * s / (2.0 * setting.sigma);
  const auto weights = detail::diagonal_weights(setting.mode);
  if (setting.op_class == OperatorClass::involutory) {
    const double x = s * s / 4.0;
    return scale * std::exp(-x) * detail::weighted(weights, [&](int n) { return momentum_series(n, x, opts); });
  }
  const double x = s * s / 4.0;
  return scale * std::exp(-s * s / 8.0) * detail::weighted(weights, [&](int n) {
           return laguerre_assoc(n, 1, x) + (n >= 1 ? laguerre_assoc(n - 1, 1, x) : 0.0);
         });
}

inline double y_expectation(const MeasurementSetting& setting) {
  if (setting.mode.is_hg() || setting.mode.l() == 0) return 0.0;
  const double s = setting.s;
  const double g = setting.coupling();
  const cdouble w = setting.weak_value;
  if (w.imag() == 0.0 || g == 0.0) return 0.0;
  const double n2 = 1.0 / norm_radicand(setting);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw DegenerateNormalizationError("normalization radicand is not positive");

  const LGIndices idx = setting.mode.lg_indices();
  const int total = idx.mu;
  const LGCoefficientTable c = lg_coefficients(idx.alpha, idx.beta);
  const bool involutory = setting.op_class == OperatorClass::involutory;
  const double arg = involutory ? s * s : s * s / 4.0;
  const double damping = involutory ? std::exp(-s * s / 2.0) : std::exp(-s * s / 8.0);

  // delta_{k'+j', k+j-1}: sqrt((k+j)/(N-k-j+1)) L^{(1)}_{N-k-j}
  const double lowered = detail::lg_offdiagonal_sum(idx, c, -1, [&](int q) {
    return std::sqrt(static_cast<double>(q) / (total - q + 1)) * laguerre_assoc(total - q, 1, arg);
  });
  // delta_{k'+j', k+j+1}: sqrt((k+j+1)/(N-k-j)) L^{(1)}_{N-k-j-1}
  const double raised = detail::lg_offdiagonal_sum(idx, c, +1, [&](int q) {
    if (total - q <= 0) return 0.0;
    return std::sqrt(static_cast<double>(q + 1) / (total - q)) * laguerre_assoc(total - q - 1, 1, arg);
  });
  return g * n2 * w.imag() * damping * (lowered - raised);
}

struct AnalyticMoments {
  double x_mean = 0.0;
  double y_mean = 0.0;
  double px_mean = 0.0;
  double norm_coef = 1.0;
  bool near_degenerate = false;
};

inline AnalyticMoments analytic_moments(const MeasurementSetting& setting, const AnalyticOptions& opts = {}) {
  const double radicand = norm_radicand(setting);
  AnalyticMoments m;
  m.norm_coef = norm_coefficient(setting);
  m.near_degenerate = radicand < kNearDegenerateRadicand;
  m.x_mean = x_expectation(setting);
  m.y_mean = y_expectation(setting);
  m.px_mean = p_expectation(setting, opts);
  return m;
}

/// Fundamental-Gaussian pointer: the Z (A^2 = I) and N (A^2 = A) forms.
struct FundamentalMoments {
  double x_mean = 0.0;
  double px_mean = 0.0;
  double normalizer = 1.0;  // Z or N
};

inline FundamentalMoments reduced_fg_moments(double s, double sigma, OperatorClass cls, cdouble w) {
  const double g = s * sigma;
  const double w2 = detail::abs2(w);
  if (cls == OperatorClass::involutory) {
    const double e = std::exp(-s * s / 2.0);
    const double z = 1.0 + 0.5 * (1.0 - w2) * (e - 1.0);
    return {g * w.real() / z, g * w.imag() * e / (2.0 * sigma * sigma * z), z};
  }
  const double e = std::exp(-s * s / 8.0);
  const double nn = 1.0 + 2.0 * (w.real() - w2) * (e - 1.0);
  return {g * (w2 + (w.real() - w2) * e) / nn, g * w.imag() * e / (2.0 * sigma * sigma * nn), nn};
}

struct FirstOrderMoments {
  double x_mean = 0.0;
  double y_mean = 0.0;
  double px_mean = 0.0;
};

/// Weak-regime shifts; identical for both observable classes. y uses the
/// signed azimuthal index.
inline FirstOrderMoments first_order_moments(const PointerMode& mode, OperatorClass /*cls*/, cdouble w, double g, double sigma) {
  FirstOrderMoments out;
  out.x_mean = g * w.real();
  out.y_mean = mode.is_lg() ? -mode.l() * g * w.imag() : 0.0;
  out.px_mean = g * w.imag() / (2.0 * sigma * sigma) * mode.order_factor();
  return out;
}

/// Left-hand side of the first-order validity condition; compare against 1.
inline double validity_margin(const PointerMode& mode, OperatorClass cls, cdouble w, double g, double sigma) {
  double amp = std::max(1.0, std::abs(w));
  if (cls == OperatorClass::projector) amp = std::max(amp, std::sqrt(std::abs(w.real())));
  return g * std::sqrt(static_cast<double>(mode.order_factor())) / (2.0 * sigma) * amp;
}

struct SnrLimit {
  double value = 0.0;
  bool divergent = false;
};

inline constexpr double kDivergentRadicand = 1e-14;

/// s -> infinity limit of SNR_x.
inline SnrLimit snr_strong_limit(OperatorClass cls, cdouble w, double ps) {
  const double w2 = detail::abs2(w);
  const double re = w.real();
  if (cls == OperatorClass::involutory) {
    const double radicand = 1.0 + 2.0 * w2 + w2 * w2 - 4.0 * re * re;
    if (radicand < kDivergentRadicand) return {std::numeric_limits<double>::infinity(), true};
    return {2.0 * std::sqrt(ps) * std::abs(re) / std::sqrt(radicand), false};
  }
  const double radicand = 1.0 + w2 - 2.0 * re;
  if (radicand < kDivergentRadicand) return {std::numeric_limits<double>::infinity(), true};
  return {std::sqrt(ps) * std::sqrt(w2) / std::sqrt(radicand), false};
}

}  // namespace wmp
