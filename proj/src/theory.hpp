#pragma once

// Explicit analytic objects attached to the two equations: the smallness
// functions δ(|v₀|₀) whose positivity gives global existence together with
// the decay rate, their thresholds, the decay envelope, the two Lyapunov
// functionals, the Wiener interpolation inequality and the power-series and
// binomial identities behind the δ formulas.

#include <array>
#include <cmath>
#include <vector>

#include "models.hpp"

namespace crystalflow {

// 2 - e^x (1 + 7x + 6x² + x³), x ≥ 0.
double delta_exp(double x);

// 6 - 3(1-x)^{-4} [1 + 28 x/(1-x) + 120 x²/(1-x)² + 120 x³/(1-x)³], 0 ≤ x < 1.
double delta_adl(double x);

double delta(ModelKind kind, double x);

struct SmallnessReport {
  ModelKind model = ModelKind::Exp;
  double x = 0.0;
  double delta = 0.0;   // NaN when x lies outside the formula's domain
  bool admissible = false;
};
SmallnessReport smallness(ModelKind kind, double x);

struct ThresholdResult {
  double root = 0.0;
  double lower = 0.0;   // δ(lower) > 0
  double upper = 0.0;   // δ(upper) < 0
  int iterations = 0;
};

// Unique positive root of δ, bisected until the bracket is ≤ 1e-12 wide.
ThresholdResult threshold_root(ModelKind kind);

inline double decay_envelope(double x0, double delta, double t) {
  return x0 * std::exp(-delta * t);
}

// ∫ e^{-v} dx and ∫ (1+v)^{-2} dx by the trapezoid rule on the collocation grid.
double lyapunov_L1(const SpectralField& v);
double lyapunov_L2(const SpectralField& v);
double lyapunov(ModelKind kind, const SpectralField& v);

struct InterpolationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};
// |f|_s ≤ |f|₀^{1-s/r} |f|_r^{s/r}, 0 ≤ s ≤ r.
InterpolationCheck interpolation_check(const SpectralField& f, double s, double r);

// The four identities Σ_j P_m(j) w^{j-1} for the derivative orders 3..6:
//   Σ_{j≥2} (j+2)(j+1)j w^{j-1}                 = 3!/(1-w)⁴ - 3!
//   w Σ_{j≥2} (j+2)(j+1)j(j-1) w^{j-2}          = 4! w/(1-w)⁵
//   w² Σ_{j≥3} (j+2)...(j-2) w^{j-3}            = 5! w²/(1-w)⁶
//   w³ Σ_{j≥4} (j+2)...(j-3) w^{j-4}            = 6! w³/(1-w)⁷
struct SeriesIdentityResult {
  std::array<double, 4> partial{};
  std::array<double, 4> closed{};
  std::array<double, 4> residual{};  // |partial - closed| / |closed|
};
SeriesIdentityResult series_identity_check(double w, int terms);

// Recomputes the δ₁ polynomial coefficients from the per-j bound
// 1 + (j-1)[7 + 6(j-2) + (j-2)(j-3)] and compares the resummed series
// against 2 - delta_exp(x).
struct CoefficientAudit {
  std::array<double, 4> coefficients{};  // expected (1, 7, 6, 1)
  std::vector<double> points;
  std::vector<double> partial_sums;
  std::vector<double> closed_forms;
  std::vector<double> residuals;
  bool coefficients_match = false;
  bool verdict = false;
};
CoefficientAudit delta_exp_coefficient_audit(int terms,
                                             std::vector<double> points = {0.05, 0.1, 0.2});

// Same for δ₂: 3 - Σ_{j≥2} (j+2)(j+1)j/2 [1 + 7(j-1) + 6(j-1)(j-2) + (j-1)(j-2)(j-3)] x^{j-1}.
CoefficientAudit delta_adl_coefficient_audit(int terms,
                                             std::vector<double> points = {0.005, 0.01, 0.02});

// Empirical ratios ‖∇v‖²_{L⁴} / (‖v‖_{H²} |v|₀) and ‖∇v‖²_{L⁴} / (‖v‖_{L²} |v|₂).
// The constants of the corresponding inequalities are unspecified, so these
// are reported, never asserted against a bound.
struct GradientRatios {
  double h2_wiener0 = 0.0;
  double l2_wiener2 = 0.0;
};
GradientRatios gradient_l4_ratios(const SpectralField& v);

}  // namespace crystalflow
