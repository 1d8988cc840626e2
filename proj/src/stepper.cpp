#include "stepper.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace crystalflow {

std::string to_string(Scheme scheme) {
  return scheme == Scheme::Etd1 ? "etd1" : "etdrk4";
}

Scheme parse_scheme(const std::string& text) {
  if (text == "etd1") return Scheme::Etd1;
  if (text == "etdrk4") return Scheme::Etdrk4;
  throw InvalidArgument("unknown scheme '" + text + "' (expected etd1 or etdrk4)");
}

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("stepper: dt must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw InvalidArgument("stepper: t_end must be >= 0");
  if (sample_every < 1) throw InvalidArgument("stepper: sample_every must be >= 1");
  if (max_steps < 1) throw InvalidArgument("stepper: max_steps must be >= 1");
}

long long StepperConfig::step_count() const {
  return static_cast<long long>(std::ceil(t_end / dt - 1e-9));
}

PhiValues phi_functions(double z) {
  PhiValues p;
  if (std::abs(z) < 1.0) {
    // φ_l(z) = Σ_n z^n / (n + l)!, 25 terms; the tail is below 1/25!.
    constexpr int kTerms = 25;
    double sums[4];
    for (int l = 0; l < 4; ++l) {
      double inv_fact = 1.0;  // 1/(kTerms - 1 + l)!
      for (int m = 2; m <= kTerms - 1 + l; ++m) inv_fact /= m;
      double acc = 0.0;
      for (int n = kTerms - 1; n >= 0; --n) {
        acc = acc * z + inv_fact;
        inv_fact *= (n + l);  // becomes 1/(n - 1 + l)!
      }
      sums[l] = acc;
    }
    p.phi0 = std::exp(z);
    p.phi1 = sums[1];
    p.phi2 = sums[2];
    p.phi3 = sums[3];
    return p;
  }
  const double em1 = std::expm1(z);
  p.phi0 = std::exp(z);
  p.phi1 = em1 / z;
  p.phi2 = (em1 - z) / (z * z);
  p.phi3 = (em1 - z - 0.5 * z * z) / (z * z * z);
  return p;
}

Stepper::Stepper(const ModelConfig& model, const StepperConfig& config)
    : model_(model), config_(config) {
  config_.validate();
  model_.grid.validate();
  const std::size_t n = model_.grid.coeff_count();
  decay_full_.resize(n);
  decay_half_.resize(n);
  half_weight_.resize(n);
  etd1_weight_.resize(n);
  w1_.resize(n);
  w23_.resize(n);
  w4_.resize(n);

  const double h = config_.dt;
  const double c = model_.linear_coefficient();
  for (std::size_t i = 0; i < n; ++i) {
    const double ksq = wavenumber_sq(model_.grid.wavevector(i));
    const double z = -c * ksq * ksq * h;
    const PhiValues full = phi_functions(z);
    const PhiValues half = phi_functions(0.5 * z);
    decay_full_[i] = full.phi0;
    decay_half_[i] = half.phi0;
    half_weight_[i] = 0.5 * h * half.phi1;
    etd1_weight_[i] = h * full.phi1;
    w1_[i] = h * (full.phi1 - 3.0 * full.phi2 + 4.0 * full.phi3);
    w23_[i] = h * (2.0 * full.phi2 - 4.0 * full.phi3);
    w4_[i] = h * (4.0 * full.phi3 - full.phi2);
  }
}

SpectralField Stepper::remainder(const SpectralField& v) const {
  return nonlinear_remainder(model_, v);
}

TrajectoryState Stepper::step(const TrajectoryState& state) const {
  const SpectralField& v = state.v;
  if (!(v.grid() == model_.grid))
    throw InvalidArgument("step: state grid differs from model grid");
  const auto vc = v.coeffs();
  const std::size_t n = vc.size();
  const std::size_t mean_index = model_.grid.coeff_index({0, 0});

  const SpectralField nv = remainder(v);
  const auto nvc = nv.coeffs();
  std::vector<Complex> next(n);

  if (config_.scheme == Scheme::Etd1) {
    for (std::size_t i = 0; i < n; ++i)
      next[i] = decay_full_[i] * vc[i] + etd1_weight_[i] * nvc[i];
  } else {
    std::vector<Complex> stage(n);
    for (std::size_t i = 0; i < n; ++i)
      stage[i] = decay_half_[i] * vc[i] + half_weight_[i] * nvc[i];
    const SpectralField a(model_.grid, stage);
    const SpectralField na = remainder(a);
    const auto nac = na.coeffs();

    for (std::size_t i = 0; i < n; ++i)
      stage[i] = decay_half_[i] * vc[i] + half_weight_[i] * nac[i];
    const SpectralField nb = remainder(SpectralField(model_.grid, stage));
    const auto nbc = nb.coeffs();

    const auto ac = a.coeffs();
    for (std::size_t i = 0; i < n; ++i)
      stage[i] = decay_half_[i] * ac[i] + half_weight_[i] * (2.0 * nbc[i] - nvc[i]);
    const SpectralField nc = remainder(SpectralField(model_.grid, stage));
    const auto ncc = nc.coeffs();

    for (std::size_t i = 0; i < n; ++i)
      next[i] = decay_full_[i] * vc[i] + w1_[i] * nvc[i] + w23_[i] * (nac[i] + nbc[i]) +
                w4_[i] * ncc[i];
  }
  next[mean_index] = Complex{0.0, 0.0};

  TrajectoryState out;
  out.step_count = state.step_count + 1;
  out.t = static_cast<double>(out.step_count) * config_.dt;
  out.v = SpectralField(model_.grid, std::move(next));
  return out;
}

double dt_guard_formula(double linear_coefficient, double wiener0, double remainder_rate) {
  return 0.5 / (linear_coefficient * (1.0 + wiener0) * std::max(1.0, remainder_rate));
}

double dt_guard(const ModelConfig& model, const SpectralField& v) {
  const double norm = wiener_norm(v, 0.0);
  const double rate = norm > 0.0 ? wiener_norm(nonlinear_remainder(model, v), 0.0) / norm : 0.0;
  return dt_guard_formula(model.linear_coefficient(), norm, rate);
}

TrajectoryState integrate(const ModelConfig& model, const StepperConfig& config,
                          const SpectralField& v0, const Observer& observer) {
  config.validate();
  if (!v0.is_zero_mean()) throw InvalidArgument("integrate: v0 must have zero mean");
  const long long total = config.step_count();
  if (total > config.max_steps) {
    std::ostringstream msg;
    msg << "integrate: " << total << " steps needed, max_steps is " << config.max_steps;
    throw StepLimitError(msg.str());
  }

  TrajectoryState state{0.0, v0, 0};
  try {
    if (!config.allow_large_dt) {
      const double guard = dt_guard(model, v0);
      if (config.dt > 10.0 * guard) {
        std::ostringstream msg;
        msg << "integrate: dt = " << config.dt << " exceeds 10x the recommended " << guard;
        throw InvalidArgument(msg.str());
      }
    }
    const Stepper stepper(model, config);
    if (observer) observer(state.t, state.v);
    while (state.step_count < total) {
      state = stepper.step(state);
      const bool sample = state.step_count % config.sample_every == 0 ||
                          state.step_count == total;
      if (observer && sample) observer(state.t, state.v);
    }
  } catch (const SingularityError& e) {
    std::ostringstream msg;
    msg << e.what() << " at t = " << state.t;
    throw SingularityError(msg.str(), e.min_one_plus_v(), state.t);
  }
  return state;
}

}  // namespace crystalflow
