#include "models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace crystalflow {

std::string to_string(ModelKind kind) { return kind == ModelKind::Exp ? "exp" : "adl"; }

ModelKind parse_model_kind(const std::string& text) {
  if (text == "exp") return ModelKind::Exp;
  if (text == "adl") return ModelKind::Adl;
  throw InvalidArgument("unknown model kind '" + text + "' (expected exp or adl)");
}

std::uint64_t binomial_coeff(int n, int k) {
  if (k < 0 || n < 0 || k > n)
    throw InvalidArgument("binomial_coeff: requires 0 <= k <= n");
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    // c·(n-k+i)/i is an integer; reducing by gcd(c, i) keeps the product small.
    const std::uint64_t g = std::gcd(c, static_cast<std::uint64_t>(i));
    const std::uint64_t factor = static_cast<std::uint64_t>(n - k + i) / (static_cast<std::uint64_t>(i) / g);
    c /= g;
    if (c > std::numeric_limits<std::uint64_t>::max() / factor) {
      std::ostringstream msg;
      msg << "binomial_coeff(" << n << ", " << k
          << ") overflows 64 bits; truncation order too large";
      throw OverflowError(msg.str());
    }
    c *= factor;
  }
  return c;
}

std::vector<double> series_coefficients(ModelKind kind, int order) {
  if (order < 0) throw InvalidArgument("series order must be >= 0");
  std::vector<double> a(static_cast<std::size_t>(order) + 1);
  double inv_factorial = 1.0;
  for (int j = 0; j <= order; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    if (kind == ModelKind::Exp) {
      if (j > 0) inv_factorial /= j;
      a[j] = sign * inv_factorial;
    } else {
      a[j] = sign * static_cast<double>(binomial_coeff(j + 2, j));
    }
  }
  return a;
}

namespace {

double horner_from(const std::vector<double>& a, std::size_t first, double v) {
  double acc = 0.0;
  for (std::size_t j = a.size(); j-- > first;) acc = acc * v + a[j];
  return acc;
}

double full_nonlinearity(ModelKind kind, double v) {
  return kind == ModelKind::Exp ? std::exp(-v) : 1.0 / ((1.0 + v) * (1.0 + v) * (1.0 + v));
}

// Σ_{j≥2} a_j v^j as v² Σ a_{j+2} v^j, truncated where the terms drop below
// 1e-17 relative on the interval the table is used on.
template <std::size_t Terms>
std::array<double, Terms> tail_table(ModelKind kind) {
  std::array<double, Terms> a{};
  const std::vector<double> c = series_coefficients(kind, static_cast<int>(Terms) + 1);
  for (std::size_t j = 0; j < Terms; ++j) a[j] = c[j + 2];
  return a;
}

template <std::size_t Terms>
double tail_series(const std::array<double, Terms>& a, double v) {
  double acc = 0.0;
  for (std::size_t j = Terms; j-- > 0;) acc = acc * v + a[j];
  return v * v * acc;
}

double full_tail(ModelKind kind, double v) {
  static const auto exp_table = tail_table<24>(ModelKind::Exp);
  static const auto adl_table = tail_table<44>(ModelKind::Adl);
  if (kind == ModelKind::Exp) {
    if (std::abs(v) < 0.5) return tail_series(exp_table, v);
    return std::expm1(-v) + v;
  }
  if (std::abs(v) < 0.2) return tail_series(adl_table, v);
  return std::expm1(-3.0 * std::log1p(v)) + 3.0 * v;
}

// Evaluates the tail pointwise on the collocation grid.
class TailEvaluator {
 public:
  explicit TailEvaluator(const ModelConfig& cfg) : cfg_(cfg) {
    if (cfg.mode.truncated) coeffs_ = series_coefficients(cfg.kind, cfg.mode.order);
  }

  double operator()(double v) const {
    if (!cfg_.mode.truncated) return full_tail(cfg_.kind, v);
    if (cfg_.mode.order == 0) return cfg_.linear_coefficient() * v;
    if (cfg_.mode.order == 1) return 0.0;
    return v * v * horner_from(coeffs_, 2, v);
  }

 private:
  const ModelConfig& cfg_;
  std::vector<double> coeffs_;
};

void require_zero_mean(const SpectralField& v, const char* where) {
  if (!v.is_zero_mean())
    throw InvalidArgument(std::string(where) + ": v must have zero mean");
}

}  // namespace

double nonlinearity(const ModelConfig& cfg, double v) {
  if (!cfg.mode.truncated) return full_nonlinearity(cfg.kind, v);
  return horner_from(series_coefficients(cfg.kind, cfg.mode.order), 0, v);
}

double nonlinearity_tail(const ModelConfig& cfg, double v) { return TailEvaluator(cfg)(v); }

void check_admissible_samples(ModelKind kind, std::span<const double> samples) {
  if (kind != ModelKind::Adl || samples.empty()) return;
  const double lowest = 1.0 + *std::min_element(samples.begin(), samples.end());
  if (!(lowest > kAdlPositivityGuard)) {
    std::ostringstream msg;
    msg << "adl nonlinearity is singular: min(1+v) = " << lowest;
    throw SingularityError(msg.str(), lowest);
  }
}

SpectralField nonlinear_remainder(const ModelConfig& cfg, const SpectralField& v) {
  require_zero_mean(v, "nonlinear_remainder");
  if (!(v.grid() == cfg.grid))
    throw InvalidArgument("nonlinear_remainder: field grid differs from model grid");
  std::vector<double> samples = to_physical(v);
  check_admissible_samples(cfg.kind, samples);
  const TailEvaluator tail(cfg);
  for (double& s : samples) s = tail(s);
  return bilaplacian(from_physical(samples, cfg.grid));
}

SpectralField rhs(const ModelConfig& cfg, const SpectralField& v) {
  return nonlinear_remainder(cfg, v) - bilaplacian(v) * cfg.linear_coefficient();
}

std::vector<double> u_samples_from_v(ModelKind kind, const SpectralField& v) {
  require_zero_mean(v, "u_from_v");
  if (kind == ModelKind::Exp) return to_physical(inverse_laplacian_zero_mean(v));
  std::vector<double> samples = to_physical(v);
  check_admissible_samples(kind, samples);
  for (double& s : samples) s = 1.0 / (1.0 + s);
  return samples;
}

SpectralField u_from_v(ModelKind kind, const SpectralField& v) {
  if (kind == ModelKind::Exp) {
    require_zero_mean(v, "u_from_v");
    return inverse_laplacian_zero_mean(v);
  }
  return from_physical(u_samples_from_v(kind, v), v.grid());
}

SpectralField v_from_u(ModelKind kind, const SpectralField& u) {
  if (kind == ModelKind::Exp) return laplacian(u);
  std::vector<double> w = to_physical(u);
  for (double s : w)
    if (!(s > 0.0)) throw InvalidArgument("v_from_u: adl requires u > 0 everywhere");
  for (double& s : w) s = 1.0 / s;
  const double mean = quadrature(w, u.grid()) / u.grid().volume();
  for (double& s : w) s = s / mean - 1.0;
  return from_physical(w, u.grid()).without_mean();
}

}  // namespace crystalflow
