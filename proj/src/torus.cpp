#include "torus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "fft.hpp"

namespace crystalflow {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int wrap(int k, int n) { return k >= 0 ? k : k + n; }

double sign_of_shift(const Wavevector& k) {
  // e^{i k·x_0} with x_0 = (-π, ..., -π)
  return ((k[0] + k[1]) % 2 == 0) ? 1.0 : -1.0;
}

Wavevector negate(const Wavevector& k) { return {-k[0], -k[1]}; }

// |k|^α with 0^0 = 1.
double wavenumber_pow(const Wavevector& k, double alpha) {
  if (alpha == 0.0) return 1.0;
  const double ksq = wavenumber_sq(k);
  if (ksq == 0.0) return 0.0;
  if (k[1] == 0) return std::pow(std::abs(static_cast<double>(k[0])), alpha);
  if (k[0] == 0) return std::pow(std::abs(static_cast<double>(k[1])), alpha);
  return std::pow(ksq, 0.5 * alpha);
}

std::vector<Complex> physical_buffer(const SpectralField& f) {
  const GridSpec& g = f.grid();
  const int n = g.points;
  std::vector<Complex> buffer(g.sample_count(), Complex{0.0, 0.0});
  const auto coeffs = f.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Wavevector k = g.wavevector(i);
    const std::size_t j0 = static_cast<std::size_t>(wrap(k[0], n));
    const std::size_t pos =
        g.dim == 1 ? j0 : j0 * n + static_cast<std::size_t>(wrap(k[1], n));
    buffer[pos] = coeffs[i] * sign_of_shift(k);
  }
  fft::transform(buffer, g.dim, n, fft::Direction::Backward);
  return buffer;
}

}  // namespace

GridSpec GridSpec::make(int dim, int modes, double padding) {
  GridSpec g;
  g.dim = dim;
  g.modes = modes;
  g.padding = padding;
  const double needed = std::ceil(padding * (2.0 * modes + 1.0) - 1e-9);
  int p = static_cast<int>(needed);
  if (p % 2 != 0) ++p;
  g.points = std::max(p, 2);
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (dim != 1 && dim != 2)
    throw InvalidArgument("grid: dim must be 1 or 2, got " + std::to_string(dim));
  if (modes < 0) throw InvalidArgument("grid: modes must be nonnegative");
  if (!(padding >= 1.0)) throw InvalidArgument("grid: padding must be >= 1");
  if (points % 2 != 0 || points < 2)
    throw InvalidArgument("grid: points per axis must be even, got " +
                          std::to_string(points));
  if (points < 2 * modes + 1)
    throw InvalidArgument("grid: points per axis must be >= 2M+1");
  if (points + 1e-9 < padding * (2.0 * modes + 1.0))
    throw InvalidArgument("grid: points per axis must be >= padding*(2M+1)");
}

std::size_t GridSpec::coeff_count() const {
  const std::size_t n = static_cast<std::size_t>(axis_modes());
  return dim == 1 ? n : n * n;
}

std::size_t GridSpec::sample_count() const {
  const std::size_t n = static_cast<std::size_t>(points);
  return dim == 1 ? n : n * n;
}

double GridSpec::cell_volume() const {
  const double h = kTwoPi / points;
  return dim == 1 ? h : h * h;
}

double GridSpec::volume() const { return dim == 1 ? kTwoPi : kTwoPi * kTwoPi; }

bool GridSpec::contains(const Wavevector& k) const {
  if (std::abs(k[0]) > modes) return false;
  if (dim == 1) return k[1] == 0;
  return std::abs(k[1]) <= modes;
}

std::size_t GridSpec::coeff_index(const Wavevector& k) const {
  const std::size_t i0 = static_cast<std::size_t>(k[0] + modes);
  if (dim == 1) return i0;
  return i0 * axis_modes() + static_cast<std::size_t>(k[1] + modes);
}

Wavevector GridSpec::wavevector(std::size_t index) const {
  if (dim == 1) return {static_cast<int>(index) - modes, 0};
  const int n = axis_modes();
  return {static_cast<int>(index / n) - modes, static_cast<int>(index % n) - modes};
}

// ---------------------------------------------------------------------------

SpectralField::SpectralField(const GridSpec& grid)
    : grid_(grid), coeffs_(grid.coeff_count(), Complex{0.0, 0.0}) {
  grid_.validate();
}

SpectralField::SpectralField(const GridSpec& grid, std::vector<Complex> coeffs)
    : grid_(grid) {
  grid_.validate();
  if (coeffs.size() != grid_.coeff_count())
    throw InvalidArgument("field: coefficient count does not match grid");
  coeffs_.resize(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const std::size_t j = grid_.coeff_index(negate(grid_.wavevector(i)));
    coeffs_[i] = 0.5 * (coeffs[i] + std::conj(coeffs[j]));
  }
}

SpectralField SpectralField::from_modes(const GridSpec& grid,
                                        std::span<const ModeTerm> terms) {
  grid.validate();
  std::vector<Complex> c(grid.coeff_count(), Complex{0.0, 0.0});
  for (const ModeTerm& t : terms) {
    Wavevector k = t.k;
    if (grid.dim == 1 && k[1] != 0)
      throw InvalidArgument("mode: second wavevector component must be 0 in 1D");
    if (!grid.contains(k))
      throw InvalidArgument("mode: wavevector beyond retained modes");
    if (k[0] == 0 && k[1] == 0) {
      c[grid.coeff_index(k)] += t.amplitude * std::sin(t.phase);
      continue;
    }
    // A sin(θ) = A (e^{iθ} - e^{-iθ}) / 2i
    const Complex plus = t.amplitude * std::polar(1.0, t.phase) / Complex{0.0, 2.0};
    c[grid.coeff_index(k)] += plus;
    c[grid.coeff_index(negate(k))] += std::conj(plus);
  }
  return SpectralField(grid, std::move(c));
}

Complex SpectralField::coeff(const Wavevector& k) const {
  if (!grid_.contains(k)) return {0.0, 0.0};
  return coeffs_[grid_.coeff_index(k)];
}

bool SpectralField::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Complex& c) { return c == Complex{0.0, 0.0}; });
}

double SpectralField::hermitian_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const std::size_t j = grid_.coeff_index(negate(grid_.wavevector(i)));
    worst = std::max(worst, std::abs(coeffs_[j] - std::conj(coeffs_[i])));
  }
  return worst;
}

SpectralField SpectralField::without_mean() const {
  SpectralField out(*this);
  out.coeffs_[grid_.coeff_index({0, 0})] = Complex{0.0, 0.0};
  return out;
}

void SpectralField::require_same_grid(const SpectralField& other) const {
  if (!(grid_ == other.grid_))
    throw InvalidArgument("field: arithmetic between different grids");
}

SpectralField SpectralField::operator+(const SpectralField& other) const {
  require_same_grid(other);
  SpectralField out(*this);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] += other.coeffs_[i];
  return out;
}

SpectralField SpectralField::operator-(const SpectralField& other) const {
  require_same_grid(other);
  SpectralField out(*this);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] -= other.coeffs_[i];
  return out;
}

SpectralField SpectralField::operator*(double scale) const {
  SpectralField out(*this);
  for (auto& c : out.coeffs_) c *= scale;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> to_physical(const SpectralField& f, double* imag_residue) {
  const std::vector<Complex> buffer = physical_buffer(f);
  std::vector<double> samples(buffer.size());
  double residue = 0.0;
  for (std::size_t j = 0; j < buffer.size(); ++j) {
    samples[j] = buffer[j].real();
    residue = std::max(residue, std::abs(buffer[j].imag()));
  }
  if (imag_residue != nullptr) *imag_residue = residue;
  return samples;
}

SpectralField from_physical(std::span<const double> samples, const GridSpec& grid) {
  grid.validate();
  if (samples.size() != grid.sample_count())
    throw InvalidArgument("from_physical: expected " +
                          std::to_string(grid.sample_count()) + " samples, got " +
                          std::to_string(samples.size()));
  std::vector<Complex> buffer(samples.begin(), samples.end());
  fft::transform(buffer, grid.dim, grid.points, fft::Direction::Forward);

  const int n = grid.points;
  const double scale = 1.0 / static_cast<double>(grid.sample_count());
  std::vector<Complex> c(grid.coeff_count());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Wavevector k = grid.wavevector(i);
    const std::size_t j0 = static_cast<std::size_t>(wrap(k[0], n));
    const std::size_t pos =
        grid.dim == 1 ? j0 : j0 * n + static_cast<std::size_t>(wrap(k[1], n));
    c[i] = buffer[pos] * (scale * sign_of_shift(k));
  }
  return SpectralField(grid, std::move(c));
}

SpectralField derivative(const SpectralField& f, int axis, int order) {
  if (order < 0) throw InvalidArgument("derivative: order must be >= 0");
  if (axis < 0 || axis >= f.grid().dim)
    throw InvalidArgument("derivative: axis out of range");
  if (order == 0) return f;
  static constexpr Complex kUnitPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex unit = kUnitPowers[order % 4];
  return f.apply_multiplier([&](const Wavevector& k) {
    return unit * std::pow(static_cast<double>(k[axis]), order);
  });
}

SpectralField laplacian(const SpectralField& f) {
  return f.apply_multiplier(
      [](const Wavevector& k) { return Complex{-wavenumber_sq(k), 0.0}; });
}

SpectralField bilaplacian(const SpectralField& f) {
  return f.apply_multiplier([](const Wavevector& k) {
    const double ksq = wavenumber_sq(k);
    return Complex{ksq * ksq, 0.0};
  });
}

SpectralField inverse_laplacian_zero_mean(const SpectralField& f) {
  if (!f.is_zero_mean())
    throw InvalidArgument("inverse_laplacian: input must have zero mean");
  return f.apply_multiplier([](const Wavevector& k) {
    const double ksq = wavenumber_sq(k);
    return ksq == 0.0 ? Complex{0.0, 0.0} : Complex{-1.0 / ksq, 0.0};
  });
}

SpectralField resample(const SpectralField& f, const GridSpec& target) {
  if (target.dim != f.grid().dim)
    throw InvalidArgument("resample: dimension mismatch");
  std::vector<Complex> c(target.coeff_count());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.coeff(target.wavevector(i));
  return SpectralField(target, std::move(c));
}

SpectralField dilate(const SpectralField& f, int lambda, const GridSpec& target) {
  if (lambda < 1) throw InvalidArgument("dilate: factor must be >= 1");
  if (target.dim != f.grid().dim) throw InvalidArgument("dilate: dimension mismatch");
  if (target.modes < lambda * f.grid().modes)
    throw InvalidArgument("dilate: target grid does not resolve lambda*M");
  std::vector<Complex> c(target.coeff_count(), Complex{0.0, 0.0});
  const auto src = f.coeffs();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Wavevector k = f.grid().wavevector(i);
    c[target.coeff_index({lambda * k[0], lambda * k[1]})] = src[i];
  }
  return SpectralField(target, std::move(c));
}

double wiener_norm(const SpectralField& f, double alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("wiener_norm: alpha must be >= 0");
  const auto c = f.coeffs();
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    sum += wavenumber_pow(f.grid().wavevector(i), alpha) * std::abs(c[i]);
  return sum;
}

double sobolev_norm(const SpectralField& f, double alpha) {
  const auto c = f.coeffs();
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Wavevector k = f.grid().wavevector(i);
    if (alpha != 0.0 && wavenumber_sq(k) == 0.0) continue;
    sum += wavenumber_pow(k, 2.0 * alpha) * std::norm(c[i]);
  }
  return std::sqrt(sum);
}

double linf_norm(const SpectralField& f) {
  const std::vector<double> s = to_physical(f);
  double m = 0.0;
  for (double x : s) m = std::max(m, std::abs(x));
  return m;
}

double lp_norm(const SpectralField& f, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be >= 1");
  const std::vector<double> s = to_physical(f);
  double sum = 0.0;
  for (double x : s) sum += std::pow(std::abs(x), p);
  return std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

double quadrature(std::span<const double> samples, const GridSpec& grid) {
  if (samples.size() != grid.sample_count())
    throw InvalidArgument("quadrature: sample count does not match grid");
  double sum = 0.0;
  for (double x : samples) sum += x;
  return sum * grid.cell_volume();
}

}  // namespace crystalflow
