#pragma once

#include <functional>
#include <string>

#include "models.hpp"

namespace crystalflow {

enum class Scheme { Etd1, Etdrk4 };

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& text);

struct StepperConfig {
  double dt = 1e-4;
  Scheme scheme = Scheme::Etdrk4;
  double t_end = 1.0;
  int sample_every = 1;
  long long max_steps = 100'000'000;
  bool allow_large_dt = false;  // skip the 10x dt_guard refusal

  void validate() const;
  long long step_count() const;  // number of fixed steps covering t_end
  friend bool operator==(const StepperConfig&, const StepperConfig&) = default;
};

struct TrajectoryState {
  double t = 0.0;
  SpectralField v;
  long long step_count = 0;
};

// φ0(z) = e^z, φ_{l+1}(z) = (φ_l(z) - 1/l!) / z.
struct PhiValues {
  double phi0 = 1.0;
  double phi1 = 1.0;
  double phi2 = 0.5;
  double phi3 = 1.0 / 6.0;
};
PhiValues phi_functions(double z);

// Exponential time differencing for ∂t v̂(k) = -c|k|⁴ v̂(k) + R̂(k), where R is
// the nonlinear remainder. The linear factor e^{-c|k|⁴dt} is applied exactly
// per mode; the tables below are built once per (model, dt).
class Stepper {
 public:
  Stepper(const ModelConfig& model, const StepperConfig& config);

  TrajectoryState step(const TrajectoryState& state) const;

  const ModelConfig& model() const { return model_; }
  const StepperConfig& config() const { return config_; }

 private:
  SpectralField remainder(const SpectralField& v) const;

  ModelConfig model_;
  StepperConfig config_;
  std::vector<double> decay_full_;   // e^{z}
  std::vector<double> decay_half_;   // e^{z/2}
  std::vector<double> half_weight_;  // (dt/2) φ1(z/2)
  std::vector<double> etd1_weight_;  // dt φ1(z)
  std::vector<double> w1_, w23_, w4_;
};

using Observer = std::function<void(double t, const SpectralField& v)>;

// Runs ceil(t_end/dt) steps. The observer sees the initial state, every
// sample_every-th step, and the final state.
TrajectoryState integrate(const ModelConfig& model, const StepperConfig& config,
                          const SpectralField& v0, const Observer& observer = {});

// dt ≤ 0.5 / (c (1 + |v|₀) max(1, rate)), rate = |R(v)|₀ / |v|₀.
double dt_guard_formula(double linear_coefficient, double wiener0, double remainder_rate);
double dt_guard(const ModelConfig& model, const SpectralField& v);

}  // namespace crystalflow
