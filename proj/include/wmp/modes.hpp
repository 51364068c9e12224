#pragma once

// Hermite-Gaussian and Laguerre-Gaussian pointer modes in the two-mode Fock
// basis, and the expansion of an LG mode over HG cells.

#include <charconv>
#include <cstdlib>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wmp/errors.hpp"
#include "wmp/fock.hpp"
#include "wmp/specfn.hpp"

namespace wmp {

enum class ModeKind { hg, lg };

/// Radial/azimuthal (p, l) against the ladder exponents (alpha, beta) of
/// (a_x^dag + i a_y^dag)^alpha (a_x^dag - i a_y^dag)^beta, mu = alpha + beta,
/// nu = alpha - beta.
struct LGIndices {
  int alpha = 0;
  int beta = 0;
  int mu = 0;
  int nu = 0;
  friend bool operator==(const LGIndices&, const LGIndices&) = default;
};

// Signed-l convention: l >= 0 puts the azimuthal excess on alpha.
inline LGIndices index_map(int p, int l) {
  if (p < 0) throw ConfigError("LG radial index must be non-negative");
  const int alpha = l >= 0 ? p + l : p;
  const int beta = l >= 0 ? p : p - l;
  return {alpha, beta, alpha + beta, alpha - beta};
}

struct PointerMode {
  ModeKind kind = ModeKind::hg;
  int first = 0;   // HG n, LG p
  int second = 0;  // HG m, LG l

  static PointerMode hg(int n, int m = 0) {
    if (n < 0 || m < 0) throw ConfigError("HG indices must be non-negative");
    return {ModeKind::hg, n, m};
  }
  static PointerMode lg(int p, int l) {
    if (p < 0) throw ConfigError("LG radial index must be non-negative");
    return {ModeKind::lg, p, l};
  }

  [[nodiscard]] bool is_hg() const { return kind == ModeKind::hg; }
  [[nodiscard]] bool is_lg() const { return kind == ModeKind::lg; }
  [[nodiscard]] int n() const { return first; }
  [[nodiscard]] int m() const { return second; }
  [[nodiscard]] int p() const { return first; }
  [[nodiscard]] int l() const { return second; }

  [[nodiscard]] LGIndices lg_indices() const { return index_map(first, second); }

  // Highest x-Fock level populated by the mode.
  [[nodiscard]] int max_x_level() const { return is_hg() ? first : lg_indices().mu; }
  // Number of y levels the mode needs.
  [[nodiscard]] int y_levels() const { return is_hg() ? second + 1 : lg_indices().mu + 1; }

  // Factor (2n+1) or (2p+|l|+1) of the weak-regime momentum shift.
  [[nodiscard]] int order_factor() const { return is_hg() ? 2 * first + 1 : 2 * first + std::abs(second) + 1; }

  [[nodiscard]] std::string to_string() const {
    if (is_hg()) return "hg:" + std::to_string(first) + (second != 0 ? "," + std::to_string(second) : "");
    return "lg:" + std::to_string(first) + "," + std::to_string(second);
  }

  /// Parses `hg:n[,m]` or `lg:p,l`.
  static PointerMode parse(std::string_view text) {
    auto fail = [&] { return ConfigError("bad mode spec '" + std::string(text) + "' (expected hg:n[,m] or lg:p,l)"); };
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw fail();
    const std::string_view kind = text.substr(0, colon);
    std::string_view rest = text.substr(colon + 1);

    std::vector<int> values;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view tok = rest.substr(0, comma);
      int v = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) throw fail();
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
      if (rest.empty()) throw fail();
    }
    if (kind == "hg" && (values.size() == 1 || values.size() == 2))
      return hg(values[0], values.size() == 2 ? values[1] : 0);
    if (kind == "lg" && values.size() == 2) return lg(values[0], values[1]);
    throw fail();
  }

  friend bool operator==(const PointerMode&, const PointerMode&) = default;
};

struct LGCoefficientTable {
  int alpha = 0;
  int beta = 0;
  std::vector<cdouble> values;  // (alpha+1) x (beta+1), j-major

  [[nodiscard]] cdouble operator()(int j, int k) const { return values[static_cast<std::size_t>(j * (beta + 1) + k)]; }
  // HG cell (x level, y level) that coefficient (j, k) multiplies.
  [[nodiscard]] std::pair<int, int> hg_cell(int j, int k) const { return {alpha + beta - k - j, k + j}; }
};

inline double log_binomial(int n, int k) { return log_factorial(n) - log_factorial(k) - log_factorial(n - k); }

/// C_{alpha,j;beta,k}
///   = 2^{-(alpha+beta)/2} (-1)^k i^{k+j} sqrt((alpha+beta-k-j)! (k+j)! / (alpha! beta!)) binom(alpha,j) binom(beta,k)
inline LGCoefficientTable lg_coefficients(int alpha, int beta) {
  if (alpha < 0 || beta < 0) throw ConfigError("LG ladder exponents must be non-negative");
  LGCoefficientTable t{alpha, beta, {}};
  t.values.reserve(static_cast<std::size_t>((alpha + 1) * (beta + 1)));
  const int total = alpha + beta;
  static constexpr cdouble kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int j = 0; j <= alpha; ++j) {
    for (int k = 0; k <= beta; ++k) {
      const int q = j + k;
      const double log_mag = -0.5 * total * std::log(2.0) - 0.5 * (log_factorial(alpha) + log_factorial(beta)) +
                             0.5 * (log_factorial(total - q) + log_factorial(q)) + log_binomial(alpha, j) +
                             log_binomial(beta, k);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      t.values.push_back(sign * std::exp(log_mag) * kIPow[q % 4]);
    }
  }
  return t;
}

inline TruncatedState hg_state(int n, int m, Shape dims) {
  if (n >= dims.dim_x || m >= dims.dim_y) throw TruncationError("HG mode index exceeds truncation");
  dims.qubit_dim = 1;
  return TruncatedState::basis(dims, n, m);
}

inline TruncatedState lg_state(int p, int l, Shape dims) {
  const LGIndices idx = index_map(p, l);
  if (idx.mu >= dims.dim_x || idx.mu >= dims.dim_y) throw TruncationError("LG mode order exceeds truncation");
  dims.qubit_dim = 1;
  const LGCoefficientTable c = lg_coefficients(idx.alpha, idx.beta);
  TruncatedState s(dims);
  for (int j = 0; j <= idx.alpha; ++j)
    for (int k = 0; k <= idx.beta; ++k) {
      const auto [x, y] = c.hg_cell(j, k);
      s(0, x, y) += c(j, k);
    }
  return s;
}

inline TruncatedState pointer_state(const PointerMode& mode, Shape dims) {
  return mode.is_hg() ? hg_state(mode.n(), mode.m(), dims) : lg_state(mode.p(), mode.l(), dims);
}

}  // namespace wmp
