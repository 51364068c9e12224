#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wmp/analytic.hpp"
#include "wmp/postselect.hpp"

using namespace wmp;

namespace {

const cdouble I(0.0, 1.0);
constexpr OperatorClass kInv = OperatorClass::involutory;
constexpr OperatorClass kProj = OperatorClass::projector;

MeasurementSetting at(const PointerMode& mode, OperatorClass cls, cdouble w, double s, double sigma = 1.0) {
  return MeasurementSetting::from_weak_value(mode, cls, w, s, sigma);
}

PointerMode random_mode(std::mt19937_64& g) {
  if (oracle::uniform_int(g, 0, 1) == 0) return PointerMode::hg(oracle::uniform_int(g, 0, 4));
  return PointerMode::lg(oracle::uniform_int(g, 0, 2), oracle::uniform_int(g, -3, 3));
}

}  // namespace

TEST(NormCoefficient, SpecValues) {
  for (double s : {0.3, 2.0, 7.0}) {
    EXPECT_NEAR(norm_coefficient(at(PointerMode::lg(1, 2), kInv, std::polar(1.0, 0.8), s)), 1.0, 1e-14);
    EXPECT_NEAR(norm_coefficient(at(PointerMode::hg(3), kInv, 1.0, s)), 1.0, 1e-14);
  }
  for (const PointerMode& mode : {PointerMode::hg(2), PointerMode::lg(2, -1)})
    for (auto cls : {kInv, kProj}) EXPECT_NEAR(norm_coefficient(at(mode, cls, {3.0, -2.0}, 0.0)), 1.0, 1e-14);

  const MeasurementSetting st = at(PointerMode::hg(1), kInv, 0.5, 1.0);
  const OracleResult r = oracle_final_pointer(st);
  EXPECT_NEAR(norm_coefficient(st), 1.0 / (std::sqrt(r.exact_prob) / std::abs(r.overlap)), 1e-8);
}

TEST(XExpectation, SpecValues) {
  for (double s : {0.1, 1.0, 6.0}) EXPECT_NEAR(x_expectation(at(PointerMode::hg(0), kInv, 1.0, s)), s, 1e-13);
  EXPECT_EQ(x_expectation(at(PointerMode::hg(2), kProj, {0.5, 1.0}, 0.0)), 0.0);
  const double s = 40.0;
  EXPECT_NEAR(x_expectation(at(PointerMode::hg(0), kProj, 0.5, s)) / s, 0.5, 1e-12);
}

TEST(PExpectation, SpecValues) {
  for (const PointerMode& mode : {PointerMode::hg(0), PointerMode::hg(3), PointerMode::lg(1, -2)})
    for (auto cls : {kInv, kProj})
      for (double s : {0.2, 3.0}) EXPECT_EQ(p_expectation(at(mode, cls, 2.5, s)), 0.0);

  const double s = 1e-4;
  for (auto cls : {kInv, kProj}) {
    const cdouble w(0.3, 0.4);
    const double base = s * w.imag() / 2.0;
    EXPECT_NEAR(p_expectation(at(PointerMode::hg(1), cls, w, s)) / base, 3.0, 1e-6);
    EXPECT_NEAR(p_expectation(at(PointerMode::lg(0, 2), cls, w, s)) / base, 3.0, 1e-6);
  }
}

TEST(YExpectation, SpecValues) {
  for (auto cls : {kInv, kProj}) {
    EXPECT_EQ(y_expectation(at(PointerMode::hg(2, 1), cls, {0.5, 1.0}, 1.0)), 0.0);
    EXPECT_EQ(y_expectation(at(PointerMode::lg(2, 0), cls, {0.5, 1.0}, 1.0)), 0.0);
    const double s = 1e-4;
    EXPECT_NEAR(y_expectation(at(PointerMode::lg(0, 1), cls, I, s)) / s, -1.0, 1e-6);
  }
}

TEST(Analytic, MatchesOracleOnRandomSettings) {
  auto g = oracle::rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const PointerMode mode = random_mode(g);
    const auto cls = trial % 2 ? kInv : kProj;
    const double sigma = oracle::uniform(g, 0.5, 2.0);
    const double s = oracle::uniform(g, 0.0, 5.0);
    const cdouble w = std::polar(oracle::uniform(g, 0.0, 4.0), oracle::uniform(g, -3.1, 3.1));
    const MeasurementSetting st = at(mode, cls, w, s, sigma);
    const AnalyticMoments a = analytic_moments(st);
    const OracleReport o = oracle_evaluate(st);
    const double tol = 1e-8 * std::max(1.0, st.coupling());
    EXPECT_NEAR(a.x_mean, o.moments.x_mean, tol) << mode.to_string() << ' ' << s << ' ' << w;
    EXPECT_NEAR(a.y_mean, o.moments.y_mean, tol) << mode.to_string() << ' ' << s << ' ' << w;
    EXPECT_NEAR(a.px_mean, o.moments.px_mean, tol) << mode.to_string() << ' ' << s << ' ' << w;
    EXPECT_NEAR(a.norm_coef, o.norm_coefficient, 1e-8 * a.norm_coef) << mode.to_string() << ' ' << s << ' ' << w;
  }
}

TEST(Analytic, FromSelectionMatchesOracle) {
  auto g = oracle::rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const PointerMode mode = random_mode(g);
    const auto cls = trial % 2 ? kInv : kProj;
    const MeasurementSetting st =
        MeasurementSetting::from_selection(mode, cls, {oracle::uniform(g, 0.1, 3.0), oracle::uniform(g, 0, 6.28)}, oracle::uniform(g, 0, 4));
    const AnalyticMoments a = analytic_moments(st);
    const OracleReport o = oracle_evaluate(st);
    EXPECT_NEAR(a.x_mean, o.moments.x_mean, 1e-8 * std::max(1.0, st.s));
    EXPECT_NEAR(a.px_mean, o.moments.px_mean, 1e-8 * std::max(1.0, st.s));
    EXPECT_NEAR(a.y_mean, o.moments.y_mean, 1e-8 * std::max(1.0, st.s));
  }
}

TEST(FundamentalReduction, SpecValues) {
  const FundamentalMoments r1 = reduced_fg_moments(1.5, 1.0, kInv, 1.0);
  EXPECT_NEAR(r1.x_mean, 1.5, 1e-14);
  EXPECT_EQ(r1.px_mean, 0.0);
  const FundamentalMoments big = reduced_fg_moments(60.0, 1.0, kInv, 0.5);
  EXPECT_NEAR(big.normalizer, 0.625, 1e-14);
  EXPECT_NEAR(big.x_mean / 60.0, 0.8, 1e-14);
  const FundamentalMoments zero = reduced_fg_moments(0.0, 1.0, kInv, {0.5, 1.0});
  EXPECT_EQ(zero.x_mean, 0.0);
  EXPECT_EQ(zero.normalizer, 1.0);
}

TEST(FundamentalReduction, GeneralFormsReduce) {
  for (double s : {0.0, 0.5, 1.0, 2.0, 4.0, 6.0})
    for (auto cls : {kInv, kProj})
      for (cdouble w : {cdouble(0.5), cdouble(0.5, 1.0), cdouble(5, 5)})
        for (double sigma : {1.0, 1.7}) {
          const FundamentalMoments r = reduced_fg_moments(s, sigma, cls, w);
          for (const PointerMode& mode : {PointerMode::hg(0), PointerMode::lg(0, 0)}) {
            const MeasurementSetting st = at(mode, cls, w, s, sigma);
            EXPECT_NEAR(x_expectation(st), r.x_mean, 1e-12 * std::max(1.0, s));
            EXPECT_NEAR(p_expectation(st), r.px_mean, 1e-12 * std::max(1.0, s));
            EXPECT_NEAR(1.0 / (norm_coefficient(st) * norm_coefficient(st)), r.normalizer, 1e-12);
          }
        }
}

TEST(Analytic, LG00EqualsHG0) {
  for (double s : {0.3, 2.0, 5.0})
    for (auto cls : {kInv, kProj}) {
      const AnalyticMoments a = analytic_moments(at(PointerMode::hg(0), cls, {0.7, -0.4}, s));
      const AnalyticMoments b = analytic_moments(at(PointerMode::lg(0, 0), cls, {0.7, -0.4}, s));
      EXPECT_NEAR(a.x_mean, b.x_mean, 1e-12);
      EXPECT_NEAR(a.px_mean, b.px_mean, 1e-12);
      EXPECT_NEAR(a.norm_coef, b.norm_coef, 1e-12);
      EXPECT_EQ(b.y_mean, 0.0);
    }
}

TEST(Analytic, XSideInvariantUnderAzimuthalFlip) {
  for (int p = 0; p <= 2; ++p)
    for (int l = 1; l <= 3; ++l)
      for (auto cls : {kInv, kProj}) {
        const AnalyticMoments a = analytic_moments(at(PointerMode::lg(p, l), cls, {0.5, 1.0}, 1.3));
        const AnalyticMoments b = analytic_moments(at(PointerMode::lg(p, -l), cls, {0.5, 1.0}, 1.3));
        EXPECT_NEAR(a.x_mean, b.x_mean, 1e-12);
        EXPECT_NEAR(a.px_mean, b.px_mean, 1e-12);
        EXPECT_NEAR(a.norm_coef, b.norm_coef, 1e-12);
        EXPECT_NEAR(a.y_mean, -b.y_mean, 1e-12);
      }
}

TEST(Analytic, DependenceStructure) {
  // x depends on (Re w, |w|); the momentum shift is odd in Im w; the
  // involutory y shift is Im w times a function of |w|.
  for (const PointerMode& mode : {PointerMode::hg(2), PointerMode::lg(1, 1)})
    for (auto cls : {kInv, kProj}) {
      const cdouble w(0.6, 0.8);
      const AnalyticMoments a = analytic_moments(at(mode, cls, w, 1.4));
      const AnalyticMoments b = analytic_moments(at(mode, cls, std::conj(w), 1.4));
      EXPECT_NEAR(a.x_mean, b.x_mean, 1e-12);
      EXPECT_NEAR(a.px_mean, -b.px_mean, 1e-12);
    }
  const double mod = 1.5;
  double ratio = 0.0;
  for (double phase : {0.3, 1.0, 2.0, 2.8, -1.2}) {
    const cdouble w = std::polar(mod, phase);
    const double r = y_expectation(at(PointerMode::lg(0, 2), kInv, w, 0.9)) / w.imag();
    if (ratio == 0.0) ratio = r;
    EXPECT_NEAR(r, ratio, 1e-12 * std::abs(ratio));
  }
}

TEST(FirstOrder, SpecValues) {
  const double g = 0.7, sigma = 1.0;
  const FirstOrderMoments a = first_order_moments(PointerMode::hg(2), kInv, I, g, sigma);
  EXPECT_EQ(a.x_mean, 0.0);
  EXPECT_EQ(a.y_mean, 0.0);
  EXPECT_NEAR(a.px_mean, 5 * g / 2, 1e-15);
  const FirstOrderMoments b = first_order_moments(PointerMode::lg(1, 1), kProj, 1.0, g, sigma);
  EXPECT_NEAR(b.x_mean, g, 1e-15);
  EXPECT_EQ(b.y_mean, 0.0);
  EXPECT_EQ(b.px_mean, 0.0);
  const FirstOrderMoments c = first_order_moments(PointerMode::lg(0, 1), kInv, {0.5, 1.0}, g, sigma);
  EXPECT_NEAR(c.x_mean, 0.5 * g, 1e-15);
  EXPECT_NEAR(c.y_mean, -g, 1e-15);
  EXPECT_NEAR(c.px_mean, 2 * g / 2, 1e-15);
}

TEST(FirstOrder, ClosedFormsConverge) {
  const double s = 1e-3;
  for (auto cls : {kInv, kProj})
    for (const PointerMode& mode : {PointerMode::hg(0), PointerMode::hg(2), PointerMode::lg(1, 1), PointerMode::lg(0, -2)}) {
      const cdouble w = std::polar(0.9, 0.7);
      const MeasurementSetting st = at(mode, cls, w, s);
      const FirstOrderMoments f = first_order_moments(mode, cls, w, s, 1.0);
      EXPECT_NEAR(x_expectation(st) / f.x_mean, 1.0, 1e-3);
      EXPECT_NEAR(p_expectation(st) / f.px_mean, 1.0, 1e-3);
      if (mode.is_lg()) {
        EXPECT_NEAR(y_expectation(st) / f.y_mean, 1.0, 1e-3);
      }
    }
}

TEST(ValidityMargin, SpecValues) {
  EXPECT_EQ(validity_margin(PointerMode::hg(1), kInv, 3.0, 0.0, 1.0), 0.0);
  EXPECT_NEAR(validity_margin(PointerMode::hg(0), kInv, 5.0, 0.1, 1.0), 0.25, 1e-15);
  EXPECT_NEAR(validity_margin(PointerMode::hg(0), kProj, 0.25, 0.2, 1.0), 0.1, 1e-15);
  EXPECT_NEAR(validity_margin(PointerMode::lg(1, -1), kInv, 0.5, 0.2, 1.0), 0.1 * 2.0, 1e-15);
}

TEST(StrongLimit, SpecValues) {
  EXPECT_NEAR(snr_strong_limit(kInv, 0.5, 0.8).value, 1.1926, 1e-4);
  EXPECT_NEAR(snr_strong_limit(kProj, 0.5, 0.8).value, 0.8944, 1e-4);
  EXPECT_EQ(snr_strong_limit(kInv, {0.0, 2.0}, 0.3).value, 0.0);
  const SnrLimit pole = snr_strong_limit(kInv, 1.0, 0.5);
  EXPECT_TRUE(pole.divergent);
  EXPECT_TRUE(std::isinf(pole.value));
  EXPECT_TRUE(snr_strong_limit(kInv, -1.0, 0.5).divergent);
  EXPECT_TRUE(snr_strong_limit(kProj, 1.0, 0.5).divergent);
}

TEST(MomentumSeries, BudgetDoublingChangesNothing) {
  AnalyticOptions wide;
  wide.series_budget = 800;
  for (int n = 0; n <= 6; ++n)
    for (double x : {1e-4, 0.5, 4.0, 25.0}) {
      const double a = momentum_series(n, x);
      const double b = momentum_series(n, x, wide);
      EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
    }
  AnalyticOptions tiny;
  tiny.series_budget = 2;
  EXPECT_THROW(momentum_series(0, 25.0, tiny), SeriesBudgetError);
}

TEST(MomentumSeries, MatchesDirectSum) {
  // Small x: plain summation of the defining series in long double.
  for (int n = 0; n <= 3; ++n)
    for (double x : {0.1, 0.8}) {
      long double ref = 0.0L;
      for (int kappa = 0; kappa < 60; ++kappa) {
        const int eta = kappa - n;
        ref += std::tgamma(n + 1.0L) / std::tgamma(kappa + 1.0L) * std::pow(-static_cast<long double>(x), eta) *
               laguerre_assoc(n, eta, x) * laguerre_assoc(n, eta + 1, x);
      }
      EXPECT_NEAR(momentum_series(n, x), static_cast<double>(ref), 1e-13);
    }
}

TEST(NormCoefficient, DegenerateRadicand) {
  // For finite weak values the radicand stays positive (|e^{-x/2} L_n(x)| <= 1 and
  // Re w - |w|^2 <= 1/4), so only a corrupted setting reaches the guard.
  MeasurementSetting st = at(PointerMode::hg(0), kInv, 0.5, 3.0);
  st.weak_value = cdouble(std::nan(""), 0.0);
  EXPECT_THROW(norm_coefficient(st), DegenerateNormalizationError);
  EXPECT_THROW(x_expectation(st), DegenerateNormalizationError);
}
