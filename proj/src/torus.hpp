#pragma once

// Real periodic fields on the torus [-π, π]^d (d = 1, 2) stored as truncated
// Fourier coefficients
//
//   f(x) = Σ_{|k_i| ≤ M} f̂(k) e^{i k·x},   f̂(k) = (2π)^{-d} ∫ f(x) e^{-i k·x} dx,
//
// together with spectral differentiation, the Wiener norms |f|_α = Σ |k|^α |f̂(k)|,
// the homogeneous Sobolev norms and grid quadrature on the collocation nodes
// x_j = -π + 2πj/P.

#include <array>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace crystalflow {

using Complex = std::complex<double>;

// Integer wavevector. The second component is always 0 when dim == 1.
using Wavevector = std::array<int, 2>;

inline double wavenumber_sq(const Wavevector& k) {
  return static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1];
}

struct GridSpec {
  int dim = 1;
  int modes = 8;       // M, the largest retained |k_i|
  int points = 34;     // P, collocation nodes per axis
  double padding = 2.0;

  // Smallest even P with P ≥ padding·(2M+1).
  static GridSpec make(int dim, int modes, double padding = 2.0);

  // Throws InvalidArgument when an invariant is violated.
  void validate() const;

  int axis_modes() const { return 2 * modes + 1; }
  std::size_t coeff_count() const;
  std::size_t sample_count() const;

  double node(int j) const {
    return -std::numbers::pi + 2.0 * std::numbers::pi * j / points;
  }
  double cell_volume() const;  // (2π/P)^d
  double volume() const;       // (2π)^d

  bool contains(const Wavevector& k) const;
  std::size_t coeff_index(const Wavevector& k) const;
  Wavevector wavevector(std::size_t index) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// One term A·sin(k·x + φ) of an initial-data mode list.
struct ModeTerm {
  Wavevector k{0, 0};
  double amplitude = 0.0;
  double phase = 0.0;
  friend bool operator==(const ModeTerm&, const ModeTerm&) = default;
};

// Immutable value type. Construction symmetrises the coefficients so that
// f̂(-k) = conj(f̂(k)) holds exactly and f̂(0) is real.
class SpectralField {
 public:
  SpectralField() : SpectralField(GridSpec{}) {}
  explicit SpectralField(const GridSpec& grid);
  SpectralField(const GridSpec& grid, std::vector<Complex> coeffs);

  static SpectralField from_modes(const GridSpec& grid,
                                  std::span<const ModeTerm> terms);

  const GridSpec& grid() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  // Zero for wavevectors outside the retained set.
  Complex coeff(const Wavevector& k) const;
  double mean() const { return coeff({0, 0}).real(); }
  bool is_zero_mean() const { return coeff({0, 0}) == Complex{0.0, 0.0}; }
  bool is_zero() const;
  double hermitian_defect() const;

  SpectralField without_mean() const;

  // Pointwise multiplier in Fourier space; the result is re-symmetrised.
  template <class Multiplier>
  SpectralField apply_multiplier(Multiplier&& multiplier) const {
    std::vector<Complex> out(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      out[i] = multiplier(grid_.wavevector(i)) * coeffs_[i];
    return SpectralField(grid_, std::move(out));
  }

  SpectralField operator+(const SpectralField& other) const;
  SpectralField operator-(const SpectralField& other) const;
  SpectralField operator-() const { return *this * -1.0; }
  SpectralField operator*(double scale) const;
  friend SpectralField operator*(double scale, const SpectralField& f) {
    return f * scale;
  }

 private:
  void require_same_grid(const SpectralField& other) const;

  GridSpec grid_;
  std::vector<Complex> coeffs_;
};

// Samples on the collocation grid, row-major with axis 0 slowest.
std::vector<double> to_physical(const SpectralField& f,
                                double* imag_residue = nullptr);
SpectralField from_physical(std::span<const double> samples,
                            const GridSpec& grid);

SpectralField derivative(const SpectralField& f, int axis, int order);
SpectralField laplacian(const SpectralField& f);
SpectralField bilaplacian(const SpectralField& f);
SpectralField inverse_laplacian_zero_mean(const SpectralField& f);

// Copies the modes the two grids share; modes beyond the target M are dropped.
SpectralField resample(const SpectralField& f, const GridSpec& target);

// x ↦ f(λx) for integer λ ≥ 1; the target grid must retain λ·M.
SpectralField dilate(const SpectralField& f, int lambda,
                     const GridSpec& target);

double wiener_norm(const SpectralField& f, double alpha);
double sobolev_norm(const SpectralField& f, double alpha);
double linf_norm(const SpectralField& f);
double lp_norm(const SpectralField& f, double p);

// Trapezoid rule on the collocation grid: (2π/P)^d Σ_j g_j.
double quadrature(std::span<const double> samples, const GridSpec& grid);

}  // namespace crystalflow
