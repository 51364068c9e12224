#pragma once

// Laguerre polynomials and Fock-basis matrix elements of the displacement
// operator D(xi) = exp(xi a^dagger - conj(xi) a).
//
// Factorial ratios are always formed in the log domain; polynomial values are
// carried as (mantissa, log-scale) pairs so that matrix elements stay finite
// for Fock indices in the hundreds and |xi| ~ 10.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace wmp {

using cdouble = std::complex<double>;

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Value represented as mantissa * exp(log_scale).
struct ScaledValue {
  double mantissa = 0.0;
  double log_scale = 0.0;

  [[nodiscard]] double value() const {
    if (mantissa == 0.0) return 0.0;
    return mantissa * std::exp(log_scale);
  }
};

namespace detail {

inline void rescale(double& a, double& b, double& log_scale) {
  constexpr double kBig = 1e150;
  const double m = std::max(std::abs(a), std::abs(b));
  if (m > kBig) {
    a /= kBig;
    b /= kBig;
    log_scale += std::log(kBig);
  }
}

// Forward three-term recurrence, eta >= 0.
inline ScaledValue laguerre_nonneg(int n, int eta, double x) {
  double prev = 1.0;
  if (n == 0) return {prev, 0.0};
  double cur = 1.0 + eta - x;
  double log_scale = 0.0;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + eta - x) * cur - (k + eta) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    rescale(prev, cur, log_scale);
  }
  return {cur, log_scale};
}

}  // namespace detail

/// Generalized Laguerre polynomial L_n^{(eta)}(x) in scaled form.
///
/// Negative upper indices eta = -k use L_n^{(-k)}(x) = (-x)^k (n-k)!/n! L_{n-k}^{(k)}(x)
/// for k <= n and vanish for k > n.
inline ScaledValue laguerre_assoc_scaled(int n, int eta, double x) {
  if (n < 0) throw std::invalid_argument("laguerre: degree must be non-negative");
  if (eta >= 0) return detail::laguerre_nonneg(n, eta, x);
  const int k = -eta;
  if (k > n) return {0.0, 0.0};
  ScaledValue inner = detail::laguerre_nonneg(n - k, k, x);
  if (x == 0.0 || inner.mantissa == 0.0) return {0.0, 0.0};
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double x_sign = (x < 0.0 && k % 2 == 1) ? -1.0 : 1.0;
  inner.mantissa *= sign * x_sign;
  inner.log_scale += k * std::log(std::abs(x)) + log_factorial(n - k) - log_factorial(n);
  return inner;
}

inline double laguerre_assoc(int n, int eta, double x) { return laguerre_assoc_scaled(n, eta, x).value(); }

inline double laguerre(int n, double x) { return laguerre_assoc(n, 0, x); }

/// <row| D(xi) |col> in the Fock basis.
inline cdouble displaced_fock_element(int row, int col, cdouble xi) {
  if (row < 0 || col < 0) throw std::invalid_argument("displaced_fock_element: negative index");
  const double r = std::abs(xi);
  if (r == 0.0) return row == col ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};

  const int lo = std::min(row, col);
  const int d = std::abs(row - col);
  const double x = r * r;
  const ScaledValue lag = laguerre_assoc_scaled(lo, d, x);
  if (lag.mantissa == 0.0) return {0.0, 0.0};

  const double log_mag = -0.5 * x + 0.5 * (log_factorial(lo) - log_factorial(lo + d)) + d * std::log(r) + lag.log_scale;
  const double magnitude = lag.mantissa * std::exp(log_mag);

  // row >= col: xi^d ; row < col: (-conj(xi))^d
  double phase = d * std::arg(xi);
  double sign = 1.0;
  if (row < col) {
    phase = -phase;
    if (d % 2 == 1) sign = -1.0;
  }
  return (sign * magnitude) * cdouble(std::cos(phase), std::sin(phase));
}

}  // namespace wmp
