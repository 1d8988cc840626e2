#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "errors.hpp"
#include "torus.hpp"

using namespace crystalflow;

namespace {

constexpr double kPi = std::numbers::pi;

// f(x) = Σ f̂(k) e^{ik·x} summed term by term in long double.
long double direct_sum(const SpectralField& f, double x0, double x1) {
  std::complex<long double> s = 0;
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Wavevector k = f.grid().wavevector(i);
    const long double phase = static_cast<long double>(k[0]) * x0 + static_cast<long double>(k[1]) * x1;
    s += std::complex<long double>(c[i].real(), c[i].imag()) *
         std::complex<long double>(std::cos(phase), std::sin(phase));
  }
  return s.real();
}

SpectralField random_field(const GridSpec& g, std::mt19937_64& rng, bool zero_mean = false) {
  std::normal_distribution<double> n;
  std::vector<Complex> c(g.coeff_count());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = {n(rng), n(rng)};
  if (zero_mean) c[g.coeff_index({0, 0})] = 0.0;
  return SpectralField(g, std::move(c));
}

}  // namespace

TEST(GridSpec, MakePicksSmallestEvenPaddedSize) {
  EXPECT_EQ(GridSpec::make(1, 32).points, 130);
  EXPECT_EQ(GridSpec::make(1, 4).points, 18);
  EXPECT_EQ(GridSpec::make(2, 8, 1.5).points, 26);
  EXPECT_EQ(GridSpec::make(1, 8).coeff_count(), 17u);
  EXPECT_EQ(GridSpec::make(2, 8).coeff_count(), 289u);
  EXPECT_EQ(GridSpec::make(2, 8).sample_count(), 34u * 34u);
}

TEST(GridSpec, RejectsBrokenInvariants) {
  EXPECT_THROW((GridSpec{3, 4, 18, 2.0}.validate()), InvalidArgument);
  EXPECT_THROW((GridSpec{1, 8, 16, 2.0}.validate()), InvalidArgument);
  EXPECT_THROW((GridSpec{1, -1, 4, 2.0}.validate()), InvalidArgument);
  EXPECT_NO_THROW((GridSpec{1, 0, 2, 1.0}.validate()));
  EXPECT_THROW((GridSpec{1, 8, 17, 1.0}.validate()), InvalidArgument);
  EXPECT_NO_THROW((GridSpec{1, 8, 34, 2.0}.validate()));
}

TEST(GridSpec, IndexRoundTrip) {
  const GridSpec g = GridSpec::make(2, 5);
  for (std::size_t i = 0; i < g.coeff_count(); ++i) EXPECT_EQ(g.coeff_index(g.wavevector(i)), i);
  EXPECT_EQ(g.node(0), -kPi);
}

TEST(SpectralField, ConstructionSymmetrises) {
  const GridSpec g = GridSpec::make(1, 3);
  std::vector<Complex> c(g.coeff_count());
  c[g.coeff_index({2, 0})] = {1.0, 1.0};
  c[g.coeff_index({0, 0})] = {0.5, 0.25};
  const SpectralField f(g, c);
  EXPECT_EQ(f.coeff({2, 0}), Complex(0.5, 0.5));
  EXPECT_EQ(f.coeff({-2, 0}), Complex(0.5, -0.5));
  EXPECT_EQ(f.coeff({0, 0}), Complex(0.5, 0.0));
  EXPECT_EQ(f.hermitian_defect(), 0.0);
  EXPECT_EQ(f.coeff({9, 0}), Complex(0.0, 0.0));
}

TEST(SpectralField, SineModeCoefficients) {
  const GridSpec g = GridSpec::make(1, 8);
  const std::vector<ModeTerm> modes{{{3, 0}, 0.1, 0.0}};
  const SpectralField f = SpectralField::from_modes(g, modes);
  EXPECT_NEAR(f.coeff({3, 0}).imag(), -0.05, 1e-17);
  EXPECT_NEAR(f.coeff({-3, 0}).imag(), 0.05, 1e-17);
  EXPECT_TRUE(f.is_zero_mean());
  EXPECT_DOUBLE_EQ(wiener_norm(f, 0.0), 0.1);
  EXPECT_DOUBLE_EQ(wiener_norm(f, 1.0), 0.3);
}

TEST(SpectralField, ZeroModeIsConstant) {
  const std::vector<ModeTerm> modes{{{0, 0}, 2.0, kPi / 2}};
  const SpectralField f = SpectralField::from_modes(GridSpec::make(1, 4), modes);
  EXPECT_DOUBLE_EQ(f.mean(), 2.0);
  const std::vector<ModeTerm> outside{{{5, 0}, 1.0, 0.0}};
  EXPECT_THROW(SpectralField::from_modes(GridSpec::make(1, 4), outside), InvalidArgument);
}

TEST(Transforms, MatchDirectTrigonometricSum) {
  std::mt19937_64 rng(7);
  for (int dim : {1, 2}) {
    const GridSpec g = GridSpec::make(dim, dim == 1 ? 9 : 4);
    const SpectralField f = random_field(g, rng);
    double residue = 1.0;
    const std::vector<double> samples = to_physical(f, &residue);
    EXPECT_LT(residue, 1e-13);
    for (int j0 = 0; j0 < g.points; ++j0) {
      for (int j1 = 0; j1 < (dim == 2 ? g.points : 1); ++j1) {
        const double x1 = dim == 2 ? g.node(j1) : 0.0;
        const std::size_t idx = dim == 2 ? static_cast<std::size_t>(j0) * g.points + j1 : j0;
        EXPECT_NEAR(samples[idx], static_cast<double>(direct_sum(f, g.node(j0), x1)), 1e-12);
      }
    }
  }
}

TEST(Transforms, RoundTrip) {
  std::mt19937_64 rng(11);
  for (int dim : {1, 2}) {
    const GridSpec g = GridSpec::make(dim, 6);
    const SpectralField f = random_field(g, rng);
    const SpectralField back = from_physical(to_physical(f), g);
    for (std::size_t i = 0; i < g.coeff_count(); ++i)
      EXPECT_LT(std::abs(back.coeffs()[i] - f.coeffs()[i]), 1e-13);
  }
}

TEST(Transforms, FromPhysicalProjectsSamplesOfKnownFunction) {
  const GridSpec g = GridSpec::make(1, 4);
  std::vector<double> s(g.sample_count());
  for (int j = 0; j < g.points; ++j) s[j] = 2.0 + std::cos(2.0 * g.node(j)) - 3.0 * std::sin(g.node(j));
  const SpectralField f = from_physical(s, g);
  EXPECT_NEAR(f.mean(), 2.0, 1e-15);
  EXPECT_NEAR(f.coeff({2, 0}).real(), 0.5, 1e-15);
  EXPECT_NEAR(f.coeff({1, 0}).imag(), 1.5, 1e-15);
}

TEST(Derivatives, SpectralDerivativeOfSine) {
  const GridSpec g = GridSpec::make(1, 8);
  const std::vector<ModeTerm> modes{{{3, 0}, 1.0, 0.4}};
  const SpectralField f = SpectralField::from_modes(g, modes);
  const std::vector<double> d1 = to_physical(derivative(f, 0, 1));
  const std::vector<double> lap = to_physical(laplacian(f));
  const std::vector<double> bil = to_physical(bilaplacian(f));
  for (int j = 0; j < g.points; ++j) {
    const double x = g.node(j);
    EXPECT_NEAR(d1[j], 3.0 * std::cos(3.0 * x + 0.4), 1e-13);
    EXPECT_NEAR(lap[j], -9.0 * std::sin(3.0 * x + 0.4), 1e-13);
    EXPECT_NEAR(bil[j], 81.0 * std::sin(3.0 * x + 0.4), 1e-12);
  }
}

TEST(Derivatives, InverseLaplacian) {
  std::mt19937_64 rng(3);
  const GridSpec g = GridSpec::make(2, 5);
  const SpectralField f = random_field(g, rng, true);
  const SpectralField back = laplacian(inverse_laplacian_zero_mean(f));
  EXPECT_LT(wiener_norm(back - f, 0.0), 1e-13 * wiener_norm(f, 0.0));
  EXPECT_THROW(inverse_laplacian_zero_mean(random_field(g, rng, false)), InvalidArgument);
}

TEST(Norms, WienerAndSobolevOfTwoModes) {
  const GridSpec g = GridSpec::make(2, 4);
  const std::vector<ModeTerm> modes{{{3, 4}, 2.0, 0.0}, {{1, 0}, 1.0, 0.0}};
  const SpectralField f = SpectralField::from_modes(g, modes);
  EXPECT_NEAR(wiener_norm(f, 0.0), 3.0, 1e-15);
  EXPECT_NEAR(wiener_norm(f, 1.0), 2.0 * 5.0 + 1.0, 1e-13);
  EXPECT_NEAR(wiener_norm(f, 2.0), 2.0 * 25.0 + 1.0, 1e-12);
  // Σ |k|^{2α} |f̂|² = 2·(1)²·|k|^{2α} + 2·(1/2)²
  EXPECT_NEAR(sobolev_norm(f, 1.0), std::sqrt(2.0 * 25.0 + 0.5), 1e-13);
  EXPECT_NEAR(lp_norm(f, 2.0), 2.0 * kPi * std::sqrt(2.0 + 0.5), 1e-12);
  EXPECT_THROW(wiener_norm(f, -1.0), InvalidArgument);
}

TEST(Norms, ZeroToTheZeroIsOne) {
  const GridSpec g = GridSpec::make(1, 2);
  std::vector<Complex> c(g.coeff_count());
  c[g.coeff_index({0, 0})] = 1.5;
  const SpectralField f(g, c);
  EXPECT_EQ(wiener_norm(f, 0.0), 1.5);
  EXPECT_EQ(wiener_norm(f, 1.0), 0.0);
  EXPECT_EQ(sobolev_norm(f, 1.0), 0.0);
}

TEST(Norms, SupBoundedByWienerNorm) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const SpectralField f = random_field(GridSpec::make(1 + trial % 2, 5), rng);
    EXPECT_LE(linf_norm(f), wiener_norm(f, 0.0) * (1.0 + 1e-14));
  }
}

TEST(Quadrature, ExactForBandLimitedProducts) {
  std::mt19937_64 rng(9);
  const GridSpec g = GridSpec::make(1, 7);
  const SpectralField f = random_field(g, rng);
  std::vector<double> s = to_physical(f);
  for (double& x : s) x *= x;
  double parseval = 0.0;
  for (const Complex& z : f.coeffs()) parseval += std::norm(z);
  EXPECT_NEAR(quadrature(s, g), 2.0 * kPi * parseval, 1e-11 * parseval);
}

TEST(Resample, DilateScalesWavevectors) {
  const GridSpec small = GridSpec::make(1, 4);
  const GridSpec big = GridSpec::make(1, 8);
  const std::vector<ModeTerm> modes{{{3, 0}, 1.0, 0.2}};
  const SpectralField f = SpectralField::from_modes(small, modes);
  const SpectralField g = dilate(f, 2, big);
  EXPECT_EQ(g.coeff({6, 0}), f.coeff({3, 0}));
  EXPECT_THROW(dilate(f, 3, big), InvalidArgument);
  const SpectralField r = resample(g, small);
  EXPECT_TRUE(r.is_zero());
}

TEST(SpectralField, ArithmeticRequiresMatchingGrid) {
  const SpectralField a(GridSpec::make(1, 4)), b(GridSpec::make(1, 5));
  EXPECT_THROW(a + b, InvalidArgument);
}
