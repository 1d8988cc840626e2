#include "theory.hpp"

#include <limits>

#include "errors.hpp"

namespace crystalflow {

double delta_exp(double x) {
  if (!(x >= 0.0)) throw InvalidArgument("delta_exp: requires x >= 0");
  return 2.0 - std::exp(x) * (1.0 + x * (7.0 + x * (6.0 + x)));
}

double delta_adl(double x) {
  if (!(x >= 0.0) || !(x < 1.0)) throw InvalidArgument("delta_adl: requires 0 <= x < 1");
  const double q = x / (1.0 - x);
  const double d = 1.0 - x;
  return 6.0 - 3.0 / (d * d * d * d) * (1.0 + q * (28.0 + q * (120.0 + q * 120.0)));
}

double delta(ModelKind kind, double x) {
  return kind == ModelKind::Exp ? delta_exp(x) : delta_adl(x);
}

SmallnessReport smallness(ModelKind kind, double x) {
  SmallnessReport r;
  r.model = kind;
  r.x = x;
  const bool in_domain = x >= 0.0 && (kind == ModelKind::Exp || x < 1.0);
  r.delta = in_domain ? delta(kind, x) : std::numeric_limits<double>::quiet_NaN();
  r.admissible = in_domain && r.delta > 0.0;
  return r;
}

ThresholdResult threshold_root(ModelKind kind) {
  // δ is strictly decreasing with δ(0) > 0; both upper ends are negative.
  ThresholdResult r;
  r.lower = 0.0;
  r.upper = kind == ModelKind::Exp ? 1.0 : 0.5;
  while (r.upper - r.lower > 1e-12) {
    const double mid = 0.5 * (r.lower + r.upper);
    if (delta(kind, mid) > 0.0)
      r.lower = mid;
    else
      r.upper = mid;
    ++r.iterations;
  }
  r.root = 0.5 * (r.lower + r.upper);
  return r;
}

double lyapunov_L1(const SpectralField& v) {
  std::vector<double> s = to_physical(v);
  for (double& x : s) x = std::exp(-x);
  return quadrature(s, v.grid());
}

double lyapunov_L2(const SpectralField& v) {
  std::vector<double> s = to_physical(v);
  check_admissible_samples(ModelKind::Adl, s);
  for (double& x : s) x = 1.0 / ((1.0 + x) * (1.0 + x));
  return quadrature(s, v.grid());
}

double lyapunov(ModelKind kind, const SpectralField& v) {
  return kind == ModelKind::Exp ? lyapunov_L1(v) : lyapunov_L2(v);
}

InterpolationCheck interpolation_check(const SpectralField& f, double s, double r) {
  if (!(s >= 0.0) || !(s <= r)) throw InvalidArgument("interpolation_check: requires 0 <= s <= r");
  if (f.is_zero()) throw InvalidArgument("interpolation_check: field must be nonzero");
  const double theta = r == 0.0 ? 0.0 : s / r;
  InterpolationCheck c;
  c.lhs = wiener_norm(f, s);
  c.rhs = std::pow(wiener_norm(f, 0.0), 1.0 - theta) * std::pow(wiener_norm(f, r), theta);
  c.pass = c.lhs <= c.rhs * (1.0 + 1e-12);
  return c;
}

SeriesIdentityResult series_identity_check(double w, int terms) {
  if (!(w > 0.0 && w < 1.0)) throw InvalidArgument("series_identity_check: requires 0 < w < 1");
  if (terms < 4) throw InvalidArgument("series_identity_check: requires at least 4 terms");
  SeriesIdentityResult r;
  // Identity m (0-based) has falling product (j+2)...(j+2-(m+3)+1), starts at
  // j = 2 + max(0, m-1) and carries the factor w^m in front of w^{j-1-m}.
  for (int m = 0; m < 4; ++m) {
    const int first = m == 0 ? 2 : 1 + m;
    double sum = 0.0;
    for (int j = terms; j >= first; --j) {
      double product = 1.0;
      for (int f = 0; f < m + 3; ++f) product *= (j + 2 - f);
      sum += product * std::pow(w, j - 1);
    }
    r.partial[m] = sum;
  }
  const double d = 1.0 - w;
  r.closed[0] = 6.0 / std::pow(d, 4) - 6.0;
  r.closed[1] = 24.0 * w / std::pow(d, 5);
  r.closed[2] = 120.0 * w * w / std::pow(d, 6);
  r.closed[3] = 720.0 * w * w * w / std::pow(d, 7);
  for (int m = 0; m < 4; ++m)
    r.residual[m] = std::abs(r.partial[m] - r.closed[m]) / std::abs(r.closed[m]);
  return r;
}

namespace {

// Per-j bound written in n = j - 1: 1 + n[7 + 6(n-1) + (n-1)(n-2)].
double per_term_bound(double n) { return 1.0 + n * (7.0 + 6.0 * (n - 1.0) + (n - 1.0) * (n - 2.0)); }

// Coefficients of 1 + n[...] in the falling-factorial basis n^(m), read off
// from forward differences at 0: a_m = Δ^m q(0) / m!.
std::array<double, 4> falling_factorial_coefficients() {
  std::array<double, 4> q{};
  for (int n = 0; n < 4; ++n) q[n] = per_term_bound(n);
  std::array<double, 4> a{};
  double factorial = 1.0;
  for (int m = 0; m < 4; ++m) {
    if (m > 0) factorial *= m;
    a[m] = q[0] / factorial;
    for (int i = 0; i + 1 < 4 - m; ++i) q[i] = q[i + 1] - q[i];
  }
  return a;
}

bool coefficients_are_1761(const std::array<double, 4>& a) {
  return a[0] == 1.0 && a[1] == 7.0 && a[2] == 6.0 && a[3] == 1.0;
}

}  // namespace

CoefficientAudit delta_exp_coefficient_audit(int terms, std::vector<double> points) {
  if (terms < 10) throw InvalidArgument("coefficient audit: requires at least 10 terms");
  CoefficientAudit a;
  a.coefficients = falling_factorial_coefficients();
  a.coefficients_match = coefficients_are_1761(a.coefficients);
  a.points = std::move(points);
  a.verdict = a.coefficients_match;
  for (double x : a.points) {
    // Σ_{j=1}^{terms} x^{j-1}/(j-1)! · bound(j-1), summed from the small end.
    std::vector<double> t(static_cast<std::size_t>(terms));
    double power_over_factorial = 1.0;
    for (int n = 0; n < terms; ++n) {
      if (n > 0) power_over_factorial *= x / n;
      t[n] = power_over_factorial * per_term_bound(n);
    }
    double sum = 0.0;
    for (std::size_t i = t.size(); i-- > 0;) sum += t[i];
    const double closed = 2.0 - delta_exp(x);
    a.partial_sums.push_back(sum);
    a.closed_forms.push_back(closed);
    a.residuals.push_back(std::abs(sum - closed));
    if (!(a.residuals.back() < 1e-12)) a.verdict = false;
  }
  return a;
}

CoefficientAudit delta_adl_coefficient_audit(int terms, std::vector<double> points) {
  if (terms < 10) throw InvalidArgument("coefficient audit: requires at least 10 terms");
  CoefficientAudit a;
  a.coefficients = falling_factorial_coefficients();
  a.coefficients_match = coefficients_are_1761(a.coefficients);
  a.points = std::move(points);
  a.verdict = a.coefficients_match;
  for (double x : a.points) {
    if (!(x >= 0.0 && x < 1.0)) throw InvalidArgument("adl audit: requires 0 <= x < 1");
    double sum = 0.0;
    for (int j = terms; j >= 2; --j) {
      const double jj = j;
      sum += 0.5 * (jj + 2.0) * (jj + 1.0) * jj * per_term_bound(jj - 1.0) * std::pow(x, j - 1);
    }
    const double closed = 3.0 - delta_adl(x);
    a.partial_sums.push_back(sum);
    a.closed_forms.push_back(closed);
    a.residuals.push_back(std::abs(sum - closed));
    if (!(a.residuals.back() < 1e-12)) a.verdict = false;
  }
  return a;
}

GradientRatios gradient_l4_ratios(const SpectralField& v) {
  const GridSpec& g = v.grid();
  std::vector<double> grad_sq(g.sample_count(), 0.0);
  for (int axis = 0; axis < g.dim; ++axis) {
    const std::vector<double> d = to_physical(derivative(v, axis, 1));
    for (std::size_t j = 0; j < d.size(); ++j) grad_sq[j] += d[j] * d[j];
  }
  for (double& x : grad_sq) x = x * x;
  const double grad_l4_sq = std::sqrt(quadrature(grad_sq, g));
  GradientRatios r;
  const double den1 = sobolev_norm(v, 2.0) * wiener_norm(v, 0.0);
  const double den2 = lp_norm(v, 2.0) * wiener_norm(v, 2.0);
  r.h2_wiener0 = den1 > 0.0 ? grad_l4_sq / den1 : 0.0;
  r.l2_wiener2 = den2 > 0.0 ? grad_l4_sq / den2 : 0.0;
  return r;
}

}  // namespace crystalflow
