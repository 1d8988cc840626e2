#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace crystalflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Slope of the least-squares line through (x, y).
double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : kNaN;
}

template <class Get>
bool nonincreasing(const TimeSeries& series, Get get) {
  if (series.size() < 2) throw InvalidArgument("monotonicity check needs >= 2 samples");
  const auto s = series.samples();
  for (std::size_t i = 1; i < s.size(); ++i)
    if (get(s[i]) > get(s[i - 1]) * (1.0 + kMonotoneSlack)) return false;
  return true;
}

}  // namespace

TimeSample observe(ModelKind kind, double t, const SpectralField& v) {
  TimeSample s;
  s.t = t;
  s.wiener0 = wiener_norm(v, 0.0);
  s.wiener1 = wiener_norm(v, 1.0);
  s.wiener2 = wiener_norm(v, 2.0);
  s.wiener4 = wiener_norm(v, 4.0);
  for (std::size_t i = 0; i < kSobolevOrders.size(); ++i)
    s.sobolev[i] = sobolev_norm(v, kSobolevOrders[i]);

  const std::vector<double> samples = to_physical(v);
  double sq = 0.0, linf = 0.0, lowest = kInf;
  for (double x : samples) {
    sq += x * x;
    linf = std::max(linf, std::abs(x));
    lowest = std::min(lowest, x);
  }
  s.l2 = std::sqrt(sq * v.grid().cell_volume());
  s.linf = linf;
  s.min_one_plus_v = 1.0 + lowest;
  s.lyapunov = lyapunov(kind, v);

  const std::vector<double> u = u_samples_from_v(kind, v);
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  s.u_min = *lo;
  s.u_max = *hi;
  return s;
}

void TimeSeries::append(const TimeSample& sample) {
  if (!samples_.empty() && !(sample.t > samples_.back().t))
    throw InvalidArgument("time series: times must be strictly increasing");
  samples_.push_back(sample);
}

double fit_decay_rate(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw InvalidArgument("fit_decay_rate: size mismatch");
  std::vector<double> tt, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (y[i] >= kRateFitFloor && std::isfinite(y[i])) {
      tt.push_back(t[i]);
      ly.push_back(std::log(y[i]));
    }
  }
  const std::size_t skip = static_cast<std::size_t>(kRateFitTransient * tt.size());
  if (tt.size() - skip < 2) return kInf;
  const double slope = least_squares_slope(std::span(tt).subspan(skip), std::span(ly).subspan(skip));
  return std::isnan(slope) ? kInf : -slope;
}

DecayCertificate certify_decay(const TimeSeries& series, double x0, double delta,
                               double slack_fraction) {
  if (series.empty()) throw InvalidArgument("certify_decay: empty series");
  if (!(delta > 0.0)) throw InvalidArgument("certify_decay: requires delta > 0");
  DecayCertificate c;
  c.x0 = x0;
  c.delta = delta;
  c.slack = slack_fraction * x0;
  c.verdict = true;
  std::vector<double> t, y;
  for (const TimeSample& s : series.samples()) {
    EnvelopeSample e;
    e.t = s.t;
    e.norm = s.wiener0;
    e.envelope = decay_envelope(x0, delta, s.t);
    e.pass = e.norm <= e.envelope + c.slack;
    if (!e.pass && c.verdict) {
      c.verdict = false;
      c.first_failure = s.t;
    }
    c.samples.push_back(e);
    t.push_back(s.t);
    y.push_back(s.wiener0);
  }
  c.fitted_rate = fit_decay_rate(t, y);
  return c;
}

bool check_lyapunov_monotone(const TimeSeries& series) {
  return nonincreasing(series, [](const TimeSample& s) { return s.lyapunov; });
}

bool check_wiener_monotone(const TimeSeries& series) {
  return nonincreasing(series, [](const TimeSample& s) { return s.wiener0; });
}

double hr_decay_fit(const TimeSeries& series, double r) {
  if (!(r >= 0.0 && r < 2.0)) throw InvalidArgument("hr_decay_fit: requires 0 <= r < 2");
  const auto it = std::find(kSobolevOrders.begin(), kSobolevOrders.end(), r);
  if (it == kSobolevOrders.end())
    throw InvalidArgument("hr_decay_fit: exponent not recorded in the series");
  const std::size_t column = static_cast<std::size_t>(it - kSobolevOrders.begin());
  std::vector<double> t, y;
  for (const TimeSample& s : series.samples()) {
    t.push_back(s.t);
    y.push_back(s.sobolev[column]);
  }
  return fit_decay_rate(t, y);
}

RefinementStudy refinement_study(const ModelConfig& model, const StepperConfig& stepper,
                                 const InitialDataFactory& initial,
                                 std::span<const RefinementLevel> levels) {
  if (levels.size() < 2) throw InvalidArgument("refinement_study: needs >= 2 levels");
  RefinementStudy study;
  for (const RefinementLevel& level : levels) {
    ModelConfig m = model;
    m.grid = GridSpec::make(model.grid.dim, level.modes, model.grid.padding);
    if (level.points > 0) {
      m.grid.points = level.points;
      m.grid.validate();
    }
    StepperConfig s = stepper;
    s.dt = level.dt;
    const TrajectoryState final_state = integrate(m, s, initial(m.grid));
    RefinementRow row;
    row.level = level;
    row.level.points = m.grid.points;
    row.final_wiener0 = wiener_norm(final_state.v, 0.0);
    row.difference = study.rows.empty() ? kNaN
                                        : row.final_wiener0 - study.rows.back().final_wiener0;
    study.rows.push_back(row);
  }
  study.converged = true;
  for (std::size_t i = 2; i < study.rows.size(); ++i)
    if (std::abs(study.rows[i].difference) > std::abs(study.rows[i - 1].difference))
      study.converged = false;
  return study;
}

TemporalOrderStudy temporal_order_study(const ModelConfig& model, const StepperConfig& stepper,
                                        const SpectralField& v0, std::span<const double> dts,
                                        double reference_dt) {
  if (dts.size() < 2) throw InvalidArgument("temporal_order_study: needs >= 2 step sizes");
  if (!(reference_dt > 0.0) || reference_dt >= *std::min_element(dts.begin(), dts.end()))
    throw InvalidArgument("temporal_order_study: reference dt must be below every dt");
  StepperConfig ref_cfg = stepper;
  ref_cfg.scheme = Scheme::Etdrk4;
  ref_cfg.dt = reference_dt;
  ref_cfg.max_steps = std::max(ref_cfg.max_steps, ref_cfg.step_count());
  const SpectralField reference = integrate(model, ref_cfg, v0).v;

  TemporalOrderStudy study;
  study.reference_dt = reference_dt;
  std::vector<double> log_dt, log_err;
  for (double dt : dts) {
    StepperConfig cfg = stepper;
    cfg.dt = dt;
    if (std::abs(cfg.step_count() * dt - stepper.t_end) > 1e-9 * stepper.t_end)
      throw InvalidArgument("temporal_order_study: dt must divide t_end");
    OrderRow row;
    row.dt = dt;
    row.error = wiener_norm(integrate(model, cfg, v0).v - reference, 0.0);
    row.observed_order = study.rows.empty()
                             ? kNaN
                             : std::log(study.rows.back().error / row.error) /
                                   std::log(study.rows.back().dt / dt);
    study.rows.push_back(row);
    log_dt.push_back(std::log(dt));
    log_err.push_back(std::log(row.error));
  }
  study.fitted_order = least_squares_slope(log_dt, log_err);
  return study;
}

TruncationStudy truncation_study(ModelKind kind, const SpectralField& v,
                                 std::span<const int> orders, int fit_from) {
  if (orders.empty()) throw InvalidArgument("truncation_study: empty order list");
  if (kind == ModelKind::Adl && !(linf_norm(v) < 1.0))
    throw InvalidArgument("truncation_study: adl series needs max|v| < 1");

  ModelConfig full{kind, NonlinearityMode::full(), v.grid()};
  const SpectralField reference = rhs(full, v);

  TruncationStudy study;
  std::vector<double> fit_n, fit_log;
  for (int order : orders) {
    ModelConfig truncated{kind, NonlinearityMode::truncated_at(order), v.grid()};
    TruncationRow row;
    row.order = order;
    row.error = linf_norm(rhs(truncated, v) - reference);
    if (study.rows.empty() || study.rows.back().error == 0.0)
      row.ratio = kNaN;
    else
      row.ratio = row.error / study.rows.back().error;
    if (order >= fit_from && row.error >= kRateFitFloor) {
      fit_n.push_back(order);
      fit_log.push_back(std::log(row.error));
    }
    study.rows.push_back(row);
  }
  study.monotone = true;
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    const double prev = study.rows[i - 1].error, cur = study.rows[i].error;
    const bool at_floor = prev < kRateFitFloor && cur < kRateFitFloor;
    if (cur > prev && !at_floor) study.monotone = false;
  }
  study.fitted_ratio = fit_n.size() >= 2 ? std::exp(least_squares_slope(fit_n, fit_log)) : kNaN;
  return study;
}

}  // namespace crystalflow
