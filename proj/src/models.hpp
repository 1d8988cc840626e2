#pragma once

// Right-hand sides of the two crystal-surface equations in v-form,
//
//   Exp:  ∂t v = Δ² e^{-v}             (v = Δu)
//   Adl:  ∂t v = Δ² (1 + v)^{-3}       (1/u = 1 + v)
//
// either with the full nonlinearity or with its degree-N power-series
// truncation. Both are split as ∂t v = -c Δ²v + Δ² G(v) with c = 1 (Exp)
// or c = 3 (Adl) and G collecting the terms of degree ≥ 2.

#include <cstdint>
#include <string>
#include <vector>

#include "torus.hpp"

namespace crystalflow {

enum class ModelKind { Exp, Adl };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

struct NonlinearityMode {
  bool truncated = false;
  int order = 20;  // N, used only when truncated

  static NonlinearityMode full() { return {}; }
  static NonlinearityMode truncated_at(int order) { return {true, order}; }
  friend bool operator==(const NonlinearityMode&, const NonlinearityMode&) = default;
};

struct ModelConfig {
  ModelKind kind = ModelKind::Exp;
  NonlinearityMode mode;
  GridSpec grid;

  double linear_coefficient() const { return kind == ModelKind::Exp ? 1.0 : 3.0; }
};

// Adl samples with 1 + v at or below this value are rejected.
inline constexpr double kAdlPositivityGuard = 1e-8;

// Exact binomial coefficient; throws OverflowError past 64 bits.
std::uint64_t binomial_coeff(int n, int k);

// Coefficients a_0..a_N of the truncated series Σ a_j v^j:
// (-1)^j / j! for Exp, (-1)^j C(j+2, j) for Adl.
std::vector<double> series_coefficients(ModelKind kind, int order);

// Pointwise nonlinearity F(v): e^{-v}, (1+v)^{-3} or the truncated series.
double nonlinearity(const ModelConfig& cfg, double v);

// Pointwise G(v) = F(v) - F(0) + c·v, evaluated without cancelling the
// linear part (expm1 / log1p in full mode, the degree ≥ 2 tail otherwise).
double nonlinearity_tail(const ModelConfig& cfg, double v);

// Throws SingularityError for Adl when min(1 + v) ≤ kAdlPositivityGuard.
void check_admissible_samples(ModelKind kind, std::span<const double> samples);

// rhs = Δ² F(v), with F evaluated on the collocation grid and projected
// back to the retained modes. Requires v to have zero mean.
SpectralField rhs(const ModelConfig& cfg, const SpectralField& v);

// rhs(v) + c·Δ²v = Δ² G(v).
SpectralField nonlinear_remainder(const ModelConfig& cfg, const SpectralField& v);

// Exp: u = Δ^{-1} v with zero mean. Adl: u = 1 / (1 + v), projected.
SpectralField u_from_v(ModelKind kind, const SpectralField& v);
// 1/(1+v) on the collocation grid, without projection.
std::vector<double> u_samples_from_v(ModelKind kind, const SpectralField& v);

// Exp: v = Δu. Adl: w = 1/u normalised to mean one, v = w - 1 with the
// mean mode pinned to zero. Rejects u ≤ 0 for Adl.
SpectralField v_from_u(ModelKind kind, const SpectralField& u);

}  // namespace crystalflow
