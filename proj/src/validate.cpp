#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "errors.hpp"
#include "fft.hpp"
#include "stepper.hpp"
#include "theory.hpp"

namespace crystalflow {
namespace {

using WienerFn = double (*)(const SpectralField&, double);
using QuadratureFn = double (*)(std::span<const double>, const GridSpec&);

double wiener_half_spectrum(const SpectralField& f, double alpha) {
  double sum = 0.0;
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Wavevector k = f.grid().wavevector(i);
    if (k[0] < 0) continue;
    const double ksq = wavenumber_sq(k);
    sum += (ksq == 0.0 ? (alpha == 0.0 ? 1.0 : 0.0) : std::pow(ksq, 0.5 * alpha)) * std::abs(c[i]);
  }
  return sum;
}

double quadrature_wrong_cell(std::span<const double> samples, const GridSpec& grid) {
  double sum = 0.0;
  for (double s : samples) sum += s;
  return sum * std::pow(2.0 * std::numbers::pi / (grid.points + 1), grid.dim);
}

struct Primitives {
  WienerFn wiener = &wiener_norm;
  QuadratureFn quadrature = &crystalflow::quadrature;
  bool faulty = false;
};

class Suite {
 public:
  Suite(const ValidateOptions& options, const std::function<void(const CheckResult&)>& on_result)
      : options_(options), on_result_(on_result), rng_(options.seed) {
    if (options.inject_fault == "wiener-norm") {
      prim_.wiener = &wiener_half_spectrum;
      prim_.faulty = true;
    } else if (options.inject_fault == "quadrature") {
      prim_.quadrature = &quadrature_wrong_cell;
      prim_.faulty = true;
    } else if (!options.inject_fault.empty()) {
      throw ConfigError("validate: unknown fault '" + options.inject_fault + "'");
    }
  }

  bool selected(const std::string& family, const std::string& name) const {
    return options_.filter.empty() || options_.filter == family || options_.filter == name;
  }

  void report(const std::string& family, const std::string& name, bool pass,
              const std::string& detail, bool informational = false) {
    CheckResult r{family, name, pass, informational, detail};
    if (on_result_) on_result_(r);
    results_.push_back(std::move(r));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

  // Random real trigonometric polynomial: random dimension, truncation,
  // sparsity and spectral decay, so that single-mode equality cases and
  // broad spectra both appear.
  SpectralField random_field(bool zero_mean) {
    std::uniform_int_distribution<int> dim_dist(1, 2);
    const int dim = dim_dist(rng_);
    std::uniform_int_distribution<int> m_dist(1, dim == 1 ? 12 : 5);
    return random_field_on(GridSpec::make(dim, m_dist(rng_)), zero_mean);
  }

  SpectralField random_field_on(const GridSpec& grid, bool zero_mean) {
    const int dim = grid.dim;
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit;
    const double decay = 3.0 * unit(rng_);
    const double density = unit(rng_) < 0.2 ? 0.0 : unit(rng_);
    std::vector<Complex> c(grid.coeff_count());
    bool any = false;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Wavevector k = grid.wavevector(i);
      const double ksq = wavenumber_sq(k);
      if (ksq == 0.0 && zero_mean) continue;
      if (unit(rng_) > density) continue;
      const double scale = std::pow(1.0 + ksq, -0.5 * decay);
      c[i] = scale * Complex(gauss(rng_), gauss(rng_));
      any = true;
    }
    if (!any) {
      std::uniform_int_distribution<int> kd(1, grid.modes);
      const Wavevector k{kd(rng_), dim == 2 ? kd(rng_) - grid.modes / 2 : 0};
      c[grid.coeff_index(k)] = Complex(gauss(rng_), gauss(rng_));
    }
    return SpectralField(grid, std::move(c));
  }

  void parseval() {
    for (int dim : {1, 2}) {
      const std::string name = "parseval." + std::to_string(dim) + "d";
      if (!selected("parseval", name)) continue;
      double worst = 0.0;
      for (int trial = 0; trial < 200; ++trial) {
        SpectralField f = random_field(false);
        while (f.grid().dim != dim) f = random_field(false);
        std::vector<double> sq = to_physical(f);
        for (double& x : sq) x *= x;
        const double grid_integral = prim_.quadrature(sq, f.grid());
        double spectral = 0.0;
        for (const Complex& z : f.coeffs()) spectral += std::norm(z);
        spectral *= f.grid().volume();
        worst = std::max(worst, std::abs(grid_integral - spectral) / spectral);
      }
      report("parseval", name, worst < 1e-10, "max relative error " + fmt(worst) + " over 200 fields");
    }
  }

  void roundtrip() {
    if (selected("roundtrip", "roundtrip.spectral")) {
      double worst = 0.0, imag = 0.0;
      for (int trial = 0; trial < 200; ++trial) {
        const SpectralField f = random_field(false);
        double residue = 0.0;
        const SpectralField g = from_physical(to_physical(f, &residue), f.grid());
        imag = std::max(imag, residue);
        double scale = 0.0, err = 0.0;
        for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
          scale = std::max(scale, std::abs(f.coeffs()[i]));
          err = std::max(err, std::abs(f.coeffs()[i] - g.coeffs()[i]));
        }
        worst = std::max(worst, err / scale);
      }
      report("roundtrip", "roundtrip.spectral", worst < 1e-12 && imag < 1e-12,
             "max relative coefficient error " + fmt(worst) + ", imaginary residue " + fmt(imag));
    }
    if (selected("roundtrip", "roundtrip.fft")) {
      double worst = 0.0;
      std::normal_distribution<double> gauss;
      for (int dim : {1, 2}) {
        for (int n : {8, 18, 34, 64, 130}) {
          if (dim == 2 && n > 64) continue;
          const std::size_t total = dim == 1 ? n : static_cast<std::size_t>(n) * n;
          std::vector<Complex> a(total), b;
          for (Complex& z : a) z = Complex(gauss(rng_), gauss(rng_));
          b = a;
          fft::transform(b, dim, n, fft::Direction::Forward);
          fft::transform(b, dim, n, fft::Direction::Backward);
          double err = 0.0, scale = 0.0;
          for (std::size_t i = 0; i < total; ++i) {
            err = std::max(err, std::abs(b[i] / static_cast<double>(total) - a[i]));
            scale = std::max(scale, std::abs(a[i]));
          }
          worst = std::max(worst, err / scale);
        }
      }
      report("roundtrip", "roundtrip.fft", worst < 1e-12, "max relative error " + fmt(worst));
    }
    if (selected("roundtrip", "roundtrip.exp_u")) {
      double worst = 0.0;
      for (int trial = 0; trial < 100; ++trial) {
        const SpectralField v = random_field(true);
        const SpectralField back = v_from_u(ModelKind::Exp, u_from_v(ModelKind::Exp, v));
        worst = std::max(worst, wiener_norm(back - v, 0.0) / wiener_norm(v, 0.0));
      }
      report("roundtrip", "roundtrip.exp_u", worst < 1e-12,
             "v -> u = inverse laplacian -> v, max relative A0 error " + fmt(worst));
    }
  }

  void linf() {
    if (!selected("linf", "linf.wiener_bound")) return;
    int failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const SpectralField f = random_field(trial % 2 == 0);
      const double sup = linf_norm(f), a0 = prim_.wiener(f, 0.0);
      worst = std::max(worst, sup / a0);
      if (sup > a0 * (1.0 + 1e-13)) ++failures;
    }
    report("linf", "linf.wiener_bound", failures == 0,
           std::to_string(failures) + "/1000 violations of max|f| <= |f|_0, max ratio " + fmt(worst));
  }

  void interpolation() {
    if (!selected("interpolation", "interpolation.integer_orders")) return;
    int checks = 0, failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const SpectralField f = random_field(trial % 3 != 0);
      for (int r = 0; r <= 4; ++r) {
        for (int s = 0; s <= r; ++s) {
          ++checks;
          bool pass;
          if (!prim_.faulty) {
            pass = interpolation_check(f, s, r).pass;
          } else {
            const double theta = r == 0 ? 0.0 : static_cast<double>(s) / r;
            const double lhs = prim_.wiener(f, s);
            const double rhs = std::pow(prim_.wiener(f, 0), 1.0 - theta) * std::pow(prim_.wiener(f, r), theta);
            pass = lhs <= rhs * (1.0 + 1e-12);
          }
          if (!pass) ++failures;
        }
      }
    }
    report("interpolation", "interpolation.integer_orders", failures == 0,
           std::to_string(checks - failures) + "/" + std::to_string(checks) +
               " of |f|_s <= |f|_0^(1-s/r) |f|_r^(s/r) over 1000 polynomials, 0 <= s <= r <= 4");
  }

  void series() {
    if (!selected("series", "series.power_identities")) return;
    const SeriesIdentityResult r = series_identity_check(0.5, 60);
    const double worst = *std::max_element(r.residual.begin(), r.residual.end());
    std::ostringstream os;
    os << "w = 0.5, N = 60, residuals";
    for (double x : r.residual) os << ' ' << fmt(x);
    report("series", "series.power_identities", worst < 1e-10, os.str());
  }

  void binomial() {
    if (!selected("binomial", "binomial.product_identity")) return;
    long long cases = 0, failures = 0;
    for (int n = 0; n <= 20; ++n)
      for (int m = 0; m <= n; ++m)
        for (int k = 0; k <= m; ++k) {
          ++cases;
          if (binomial_coeff(n, m) * binomial_coeff(m, k) !=
              binomial_coeff(n, k) * binomial_coeff(n - k, m - k))
            ++failures;
        }
    report("binomial", "binomial.product_identity", failures == 0,
           std::to_string(cases - failures) + "/" + std::to_string(cases) +
               " cases of C(n,m)C(m,k) = C(n,k)C(n-k,m-k), n <= 20");
  }

  void delta_audit() {
    if (selected("delta_audit", "delta_audit.exp")) {
      const CoefficientAudit a = delta_exp_coefficient_audit(60);
      report("delta_audit", "delta_audit.exp", a.verdict, audit_detail(a, "2 - delta_exp"));
    }
    if (selected("delta_audit", "delta_audit.adl")) {
      const CoefficientAudit a = delta_adl_coefficient_audit(400);
      report("delta_audit", "delta_audit.adl", a.verdict, audit_detail(a, "3 - delta_adl"));
    }
  }

  void phi() {
    if (!selected("phi", "phi.values")) return;
    const PhiValues at0 = phi_functions(0.0);
    const PhiValues m1 = phi_functions(-1.0);
    const PhiValues tiny = phi_functions(-1e-8);
    bool pass = at0.phi0 == 1.0 && at0.phi1 == 1.0 && std::abs(at0.phi2 - 0.5) < 1e-16 &&
                std::abs(at0.phi3 - 1.0 / 6.0) < 1e-16;
    pass = pass && std::abs(m1.phi0 - std::exp(-1.0)) < 1e-16;
    pass = pass && std::abs(tiny.phi1 - (1.0 - 5e-9)) < 1e-15;
    // Long-double closed forms away from 0, where their cancellation is harmless.
    double worst = 0.0;
    for (double z : {-0.01, -0.3, -0.999999999, -1.0, -1.000000001, -2.5, -40.0, -1e3}) {
      const PhiValues p = phi_functions(z);
      const long double zl = z, em1 = std::expm1(zl);
      const long double ref[3] = {em1 / zl, (em1 - zl) / (zl * zl),
                                  (em1 - zl - 0.5L * zl * zl) / (zl * zl * zl)};
      const double got[3] = {p.phi1, p.phi2, p.phi3};
      for (int l = 0; l < 3; ++l)
        worst = std::max(worst, static_cast<double>(std::abs((got[l] - ref[l]) / ref[l])));
    }
    pass = pass && worst < 1e-14;
    report("phi", "phi.values", pass,
           "phi1(-1e-8) - (1 - 5e-9) = " + fmt(tiny.phi1 - (1.0 - 5e-9)) +
               ", max relative error vs long double " + fmt(worst));
  }

  void linear_flow() {
    for (Scheme scheme : {Scheme::Etd1, Scheme::Etdrk4}) {
      const std::string name = "linear_flow." + to_string(scheme);
      if (!selected("linear_flow", name)) continue;
      double worst = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        const SpectralField v = random_field(true);
        const ModelConfig model{ModelKind::Exp, NonlinearityMode::truncated_at(1), v.grid()};
        StepperConfig cfg;
        cfg.dt = 1e-3;
        cfg.scheme = scheme;
        const Stepper stepper(model, cfg);
        const TrajectoryState next = stepper.step({0.0, v, 0});
        for (std::size_t i = 0; i < v.coeffs().size(); ++i) {
          const double ksq = wavenumber_sq(v.grid().wavevector(i));
          const Complex exact = std::exp(-ksq * ksq * cfg.dt) * v.coeffs()[i];
          if (exact != Complex{})
            worst = std::max(worst, std::abs(next.v.coeffs()[i] - exact) / std::abs(exact));
          else
            worst = std::max(worst, std::abs(next.v.coeffs()[i]));
        }
      }
      report("linear_flow", name, worst < 1e-15,
             "N = 1 step vs exp(-|k|^4 dt), max relative error " + fmt(worst));
    }
  }

  void norms() {
    if (selected("norms", "norms.homogeneity_triangle")) {
      bool pass = true;
      double worst = 0.0;
      std::uniform_real_distribution<double> lam(-3.0, 3.0);
      for (int trial = 0; trial < 200; ++trial) {
        const SpectralField f = random_field(false);
        const SpectralField g = random_field_on(f.grid(), false);
        const double l = lam(rng_);
        for (double a : {0.0, 0.5, 1.0, 1.9, 2.0, 4.0}) {
          const double fa = prim_.wiener(f, a);
          worst = std::max(worst, std::abs(prim_.wiener(f * l, a) - std::abs(l) * fa) / std::max(fa, 1e-300));
          if (prim_.wiener(f + g, a) > (fa + prim_.wiener(g, a)) * (1.0 + 1e-14)) pass = false;
          const double sa = sobolev_norm(f, a);
          if (std::abs(sobolev_norm(f * l, a) - std::abs(l) * sa) > 1e-13 * std::abs(l) * sa) pass = false;
        }
      }
      report("norms", "norms.homogeneity_triangle", pass && worst < 1e-13,
             "|l f|_a = |l| |f|_a to " + fmt(worst) + ", triangle inequality");
    }
    if (selected("norms", "norms.dilation")) {
      double worst0 = 0.0, worsta = 0.0;
      for (int trial = 0; trial < 100; ++trial) {
        SpectralField f = random_field(true);
        const int lambda = 2 + trial % 3;
        const GridSpec big = GridSpec::make(f.grid().dim, lambda * f.grid().modes);
        const SpectralField g = dilate(f, lambda, big);
        const double f0 = prim_.wiener(f, 0.0);
        worst0 = std::max(worst0, std::abs(prim_.wiener(g, 0.0) - f0) / f0);
        for (double a : {1.0, 2.0, 4.0}) {
          const double fa = prim_.wiener(f, a);
          worsta = std::max(worsta, std::abs(prim_.wiener(g, a) - std::pow(lambda, a) * fa) / fa);
        }
      }
      report("norms", "norms.dilation", worst0 < 1e-13 && worsta < 1e-12,
             "|f(l.)|_0 = |f|_0 to " + fmt(worst0) + ", |f(l.)|_a = l^a |f|_a to " + fmt(worsta));
    }
  }

  // v_l(t, x) = v(l⁴t, lx) solves the same equation.
  void scaling() {
    for (ModelKind kind : {ModelKind::Exp, ModelKind::Adl}) {
      const std::string name = "scaling." + to_string(kind);
      if (!selected("scaling", name)) continue;
      const int lambda = 2;
      const GridSpec small = GridSpec::make(1, 6);
      const GridSpec big{1, lambda * small.modes, lambda * small.points, small.padding};
      const std::vector<ModeTerm> modes{{{1, 0}, 0.008, 0.3}, {{3, 0}, 0.004, -1.1}};
      const SpectralField v0 = SpectralField::from_modes(small, modes);
      StepperConfig coarse;
      coarse.dt = 1e-3;
      coarse.t_end = 0.2;
      StepperConfig fine = coarse;
      fine.dt = coarse.dt / std::pow(lambda, 4);
      fine.t_end = coarse.t_end / std::pow(lambda, 4);
      const TrajectoryState a = integrate({kind, NonlinearityMode::full(), small}, coarse, v0);
      const TrajectoryState b =
          integrate({kind, NonlinearityMode::full(), big}, fine, dilate(v0, lambda, big));
      const double err = wiener_norm(dilate(a.v, lambda, big) - b.v, 0.0) / wiener_norm(b.v, 0.0);
      report("scaling", name, err < 1e-10,
             "v(l^4 t, l x) vs flow of v0(l x), l = 2, relative A0 difference " + fmt(err));
    }
  }

  void smart() {
    if (!selected("smart", "smart.gradient_ratios")) return;
    double lo1 = 1e300, hi1 = 0.0, lo2 = 1e300, hi2 = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const SpectralField v = random_field(true);
      const GradientRatios g = gradient_l4_ratios(v);
      lo1 = std::min(lo1, g.h2_wiener0);
      hi1 = std::max(hi1, g.h2_wiener0);
      lo2 = std::min(lo2, g.l2_wiener2);
      hi2 = std::max(hi2, g.l2_wiener2);
    }
    report("smart", "smart.gradient_ratios", true,
           "|grad v|_L4^2 / (|v|_H2 |v|_0) in [" + fmt(lo1) + ", " + fmt(hi1) +
               "], |grad v|_L4^2 / (|v|_L2 |v|_2) in [" + fmt(lo2) + ", " + fmt(hi2) + "]",
           true);
  }

 private:
  static std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
  }

  static std::string audit_detail(const CoefficientAudit& a, const std::string& target) {
    std::ostringstream os;
    os << "coefficients (" << a.coefficients[0] << ", " << a.coefficients[1] << ", "
       << a.coefficients[2] << ", " << a.coefficients[3] << "); residual vs " << target;
    for (std::size_t i = 0; i < a.points.size(); ++i)
      os << " x=" << a.points[i] << ": " << fmt(a.residuals[i]);
    return os.str();
  }

  const ValidateOptions& options_;
  const std::function<void(const CheckResult&)>& on_result_;
  std::mt19937_64 rng_;
  Primitives prim_;
  std::vector<CheckResult> results_;
};

}  // namespace

std::vector<std::string> validation_families() {
  return {"parseval", "roundtrip", "linf", "interpolation", "series", "binomial",
          "delta_audit", "phi", "linear_flow", "norms", "scaling", "smart"};
}

std::vector<std::string> validation_faults() { return {"wiener-norm", "quadrature"}; }

std::vector<CheckResult> run_validation(const ValidateOptions& options,
                                        const std::function<void(const CheckResult&)>& on_result) {
  Suite suite(options, on_result);
  suite.parseval();
  suite.roundtrip();
  suite.linf();
  suite.interpolation();
  suite.series();
  suite.binomial();
  suite.delta_audit();
  suite.phi();
  suite.linear_flow();
  suite.norms();
  suite.scaling();
  suite.smart();
  std::vector<CheckResult> results = suite.take();
  if (results.empty() && !options.filter.empty())
    throw ConfigError("validate: filter '" + options.filter + "' matches no check");
  return results;
}

}  // namespace crystalflow
