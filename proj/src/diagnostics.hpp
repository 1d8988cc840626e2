#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stepper.hpp"
#include "theory.hpp"

namespace crystalflow {

// Envelope slack as a fraction of x0, shared by certification and reports.
inline constexpr double kEnvelopeSlack = 1e-6;
// Samples below this Wiener norm are excluded from rate fits.
inline constexpr double kRateFitFloor = 1e-13;
// Fraction of the remaining window dropped as transient before fitting.
inline constexpr double kRateFitTransient = 0.1;
// Relative slack for sample-to-sample monotonicity.
inline constexpr double kMonotoneSlack = 1e-10;

// Sobolev exponents recorded in every sample.
inline constexpr std::array<double, 4> kSobolevOrders = {0.0, 1.0, 1.9, 2.0};

struct TimeSample {
  double t = 0.0;
  double wiener0 = 0.0, wiener1 = 0.0, wiener2 = 0.0, wiener4 = 0.0;
  double l2 = 0.0;
  std::array<double, kSobolevOrders.size()> sobolev{};
  double linf = 0.0;
  double lyapunov = 0.0;
  double min_one_plus_v = 0.0;
  double u_min = 0.0, u_max = 0.0;
};

TimeSample observe(ModelKind kind, double t, const SpectralField& v);

class TimeSeries {
 public:
  // Throws InvalidArgument unless t exceeds the previous sample time.
  void append(const TimeSample& sample);
  std::span<const TimeSample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const TimeSample& front() const { return samples_.front(); }
  const TimeSample& back() const { return samples_.back(); }

 private:
  std::vector<TimeSample> samples_;
};

struct EnvelopeSample {
  double t = 0.0;
  double norm = 0.0;
  double envelope = 0.0;
  bool pass = false;
};

struct DecayCertificate {
  double x0 = 0.0;
  double delta = 0.0;
  double slack = 0.0;  // absolute
  std::vector<EnvelopeSample> samples;
  double fitted_rate = 0.0;  // +inf when nothing is left to fit
  bool verdict = false;
  std::optional<double> first_failure;
};

// |v(t)|₀ ≤ x0 e^{-δt} + slack_fraction·x0 at every sample.
DecayCertificate certify_decay(const TimeSeries& series, double x0, double delta,
                               double slack_fraction = kEnvelopeSlack);

// Least-squares exponential rate -d log(y)/dt. Samples below kRateFitFloor
// are dropped, then the first 10% of what remains. +inf if < 2 points survive.
double fit_decay_rate(std::span<const double> t, std::span<const double> y);

bool check_lyapunov_monotone(const TimeSeries& series);
bool check_wiener_monotone(const TimeSeries& series);

// r must be one of kSobolevOrders below 2.
double hr_decay_fit(const TimeSeries& series, double r);

struct RefinementLevel {
  int modes = 0;
  int points = 0;  // 0 picks the grid's default padding
  double dt = 0.0;
};

struct RefinementRow {
  RefinementLevel level;
  double final_wiener0 = 0.0;
  double difference = 0.0;  // vs the previous level; NaN on the first row
};

struct RefinementStudy {
  std::vector<RefinementRow> rows;
  bool converged = false;  // |differences| nonincreasing
};

using InitialDataFactory = std::function<SpectralField(const GridSpec&)>;

RefinementStudy refinement_study(const ModelConfig& model, const StepperConfig& stepper,
                                 const InitialDataFactory& initial,
                                 std::span<const RefinementLevel> levels);

struct OrderRow {
  double dt = 0.0;
  double error = 0.0;           // |v_dt(T) - v_ref(T)|₀
  double observed_order = 0.0;  // log2(previous error / error); NaN on the first row
};

struct TemporalOrderStudy {
  double reference_dt = 0.0;
  std::vector<OrderRow> rows;
  double fitted_order = 0.0;  // least-squares slope of log(error) against log(dt)
};

// Final-time errors of `stepper.scheme` at each dt (descending, successive
// halvings) against an ETDRK4 reference at reference_dt.
TemporalOrderStudy temporal_order_study(const ModelConfig& model, const StepperConfig& stepper,
                                        const SpectralField& v0, std::span<const double> dts,
                                        double reference_dt);

struct TruncationRow {
  int order = 0;
  double error = 0.0;  // ‖rhs(Truncated(N)) - rhs(Full)‖_{L∞}
  double ratio = 0.0;  // error / previous error; NaN on the first row
};

struct TruncationStudy {
  std::vector<TruncationRow> rows;
  bool monotone = false;
  // exp of the least-squares slope of log(error) against N over rows with
  // N ≥ fit_from and error above kRateFitFloor; NaN if fewer than two.
  double fitted_ratio = 0.0;
};

TruncationStudy truncation_study(ModelKind kind, const SpectralField& v,
                                 std::span<const int> orders, int fit_from = 10);

}  // namespace crystalflow
