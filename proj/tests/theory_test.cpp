#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "errors.hpp"
#include "theory.hpp"

using namespace crystalflow;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

constexpr double kPi = std::numbers::pi;

Big big_delta_exp(const Big& x) { return 2 - exp(x) * (1 + 7 * x + 6 * x * x + x * x * x); }

Big big_delta_adl(const Big& x) {
  const Big d = 1 - x, q = x / d;
  return 6 - 3 / (d * d * d * d) * (1 + 28 * q + 120 * q * q + 120 * q * q * q);
}

template <class F>
Big big_root(F f, double hi) {
  boost::math::tools::eps_tolerance<Big> tol(160);
  const auto [a, b] = boost::math::tools::bisect(f, Big(0), Big(hi), tol);
  return (a + b) / 2;
}

SpectralField sine(const GridSpec& g, int k, double a) {
  const std::vector<ModeTerm> modes{{{k, 0}, a, 0.0}};
  return SpectralField::from_modes(g, modes);
}

}  // namespace

TEST(Delta, ExactAtZero) {
  EXPECT_EQ(delta_exp(0.0), 1.0);
  EXPECT_EQ(delta_adl(0.0), 3.0);
}

TEST(Delta, MatchesFiftyDigitClosedForm) {
  for (double x : {1e-6, 0.01, 0.05, 0.1, 0.104, 0.2, 0.5}) {
    const double ref = static_cast<double>(big_delta_exp(Big(x)));
    EXPECT_NEAR(delta_exp(x), ref, 1e-15 * std::max(1.0, std::abs(ref))) << x;
  }
  for (double x : {1e-6, 0.005, 0.02, 0.023, 0.025, 0.1, 0.4}) {
    const double ref = static_cast<double>(big_delta_adl(Big(x)));
    EXPECT_NEAR(delta_adl(x), ref, 1e-14 * std::max(1.0, std::abs(ref))) << x;
  }
}

TEST(Delta, DomainChecks) {
  EXPECT_THROW(delta_exp(-0.1), InvalidArgument);
  EXPECT_THROW(delta_adl(1.0), InvalidArgument);
  EXPECT_THROW(delta_adl(-1e-3), InvalidArgument);
  const SmallnessReport r = smallness(ModelKind::Adl, 1.2);
  EXPECT_TRUE(std::isnan(r.delta));
  EXPECT_FALSE(r.admissible);
  EXPECT_TRUE(smallness(ModelKind::Exp, 0.1).admissible);
  EXPECT_FALSE(smallness(ModelKind::Exp, 0.11).admissible);
  EXPECT_FALSE(smallness(ModelKind::Adl, 0.0252).admissible);
}

TEST(Threshold, RootsMatchHighPrecisionBisection) {
  const Big exp_root = big_root([](const Big& x) { return big_delta_exp(x); }, 1.0);
  const Big adl_root = big_root([](const Big& x) { return big_delta_adl(x); }, 0.5);
  const ThresholdResult e = threshold_root(ModelKind::Exp);
  const ThresholdResult a = threshold_root(ModelKind::Adl);
  EXPECT_NEAR(e.root, static_cast<double>(exp_root), 1e-12);
  EXPECT_NEAR(a.root, static_cast<double>(adl_root), 1e-12);
  EXPECT_NEAR(e.root, 0.10483566758528777, 1e-12);
  EXPECT_NEAR(a.root, 0.025195042420089, 1e-12);
  for (const ThresholdResult& r : {e, a}) {
    EXPECT_LE(r.upper - r.lower, 1e-12);
    EXPECT_LE(r.lower, r.root);
    EXPECT_GE(r.upper, r.root);
  }
  EXPECT_GT(delta_exp(e.lower), 0.0);
  EXPECT_LT(delta_exp(e.upper), 0.0);
  EXPECT_GT(delta_adl(a.lower), 0.0);
  EXPECT_LT(delta_adl(a.upper), 0.0);
}

TEST(Envelope, Values) {
  EXPECT_EQ(decay_envelope(0.1, 2.0, 0.0), 0.1);
  EXPECT_DOUBLE_EQ(decay_envelope(0.1, 2.0, 1.5), 0.1 * std::exp(-3.0));
}

// ∫ e^{-a sin x} dx = 2π I₀(a), ∫ (1 + a sin x)^{-2} dx = 2π (1 - a²)^{-3/2}.
TEST(Lyapunov, MatchesBesselAndClosedForms) {
  const GridSpec g = GridSpec::make(1, 8);
  for (double a : {0.05, 0.2, 0.5}) {
    const SpectralField v = sine(g, 1, a);
    EXPECT_NEAR(lyapunov_L1(v), 2.0 * kPi * boost::math::cyl_bessel_i(0, a), 1e-13);
    EXPECT_NEAR(lyapunov(ModelKind::Adl, v), 2.0 * kPi * std::pow(1.0 - a * a, -1.5), 1e-10);
  }
  EXPECT_NEAR(lyapunov_L1(SpectralField(g)), 2.0 * kPi, 1e-14);
  EXPECT_THROW(lyapunov_L2(sine(g, 1, 1.5)), SingularityError);
}

TEST(Lyapunov, TwoDimensionalVolume) {
  const GridSpec g = GridSpec::make(2, 4);
  EXPECT_NEAR(lyapunov_L2(SpectralField(g)), 4.0 * kPi * kPi, 1e-12);
}

TEST(Interpolation, EqualityForSingleShell) {
  const GridSpec g = GridSpec::make(2, 6);
  const std::vector<ModeTerm> modes{{{3, 4}, 0.7, 0.0}, {{5, 0}, 0.2, 1.0}, {{0, -5}, 0.1, 0.0}};
  const SpectralField f = SpectralField::from_modes(g, modes);
  const InterpolationCheck c = interpolation_check(f, 1.5, 3.0);
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.lhs / c.rhs, 1.0, 1e-13);
}

TEST(Interpolation, HoldsForRandomFields) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n;
  const GridSpec g = GridSpec::make(1, 10);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Complex> c(g.coeff_count());
    for (Complex& z : c) z = {n(rng), n(rng)};
    const SpectralField f(g, c);
    const double r = 4.0 * std::uniform_real_distribution<double>()(rng);
    const double s = r * std::uniform_real_distribution<double>()(rng);
    EXPECT_TRUE(interpolation_check(f, s, r).pass) << s << " " << r;
  }
  EXPECT_THROW(interpolation_check(sine(g, 1, 1.0), 2.0, 1.0), InvalidArgument);
  EXPECT_THROW(interpolation_check(SpectralField(g), 0.5, 1.0), InvalidArgument);
}

TEST(SeriesIdentities, ConvergeAtHalf) {
  const SeriesIdentityResult r = series_identity_check(0.5, 60);
  EXPECT_NEAR(r.closed[0], 6.0 * 16.0 - 6.0, 1e-12);
  EXPECT_NEAR(r.closed[1], 24.0 * 0.5 * 32.0, 1e-12);
  EXPECT_NEAR(r.closed[2], 120.0 * 0.25 * 64.0, 1e-10);
  EXPECT_NEAR(r.closed[3], 720.0 * 0.125 * 128.0, 1e-9);
  for (double res : r.residual) EXPECT_LT(res, 1e-10);
  const SeriesIdentityResult coarse = series_identity_check(0.5, 10);
  EXPECT_GT(coarse.residual[3], 1e-3);
  EXPECT_THROW(series_identity_check(1.0, 60), InvalidArgument);
}

TEST(CoefficientAudit, ExpAndAdl) {
  const CoefficientAudit e = delta_exp_coefficient_audit(60);
  EXPECT_EQ(e.coefficients, (std::array<double, 4>{1.0, 7.0, 6.0, 1.0}));
  EXPECT_TRUE(e.coefficients_match);
  EXPECT_TRUE(e.verdict);
  ASSERT_EQ(e.residuals.size(), 3u);
  for (double r : e.residuals) EXPECT_LT(r, 1e-12);
  const CoefficientAudit a = delta_adl_coefficient_audit(400);
  EXPECT_TRUE(a.verdict);
  for (double r : a.residuals) EXPECT_LT(r, 1e-12);
  EXPECT_THROW(delta_exp_coefficient_audit(5), InvalidArgument);
}

TEST(GradientRatios, FiniteAndPositive) {
  const GridSpec g = GridSpec::make(1, 8);
  const GradientRatios r = gradient_l4_ratios(sine(g, 2, 0.3) + sine(g, 3, 0.1));
  EXPECT_GT(r.h2_wiener0, 0.0);
  EXPECT_GT(r.l2_wiener2, 0.0);
  EXPECT_TRUE(std::isfinite(r.h2_wiener0));
  EXPECT_TRUE(std::isfinite(r.l2_wiener2));
}
