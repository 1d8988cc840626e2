#include "run.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace crystalflow {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Completed: return "completed";
    case RunStatus::Refused: return "refused";
    case RunStatus::Singular: return "singular";
  }
  return "unknown";
}

RunReport execute_run(const RunConfig& config, bool strict) {
  return execute_run(config, build_initial_field(config), strict);
}

RunReport execute_run(const RunConfig& config, const SpectralField& v0, bool strict) {
  RunReport report;
  report.config = config;
  const double x0 = wiener_norm(v0, 0.0);
  report.smallness = smallness(config.model.kind, x0);

  if (!report.smallness.admissible) {
    std::ostringstream msg;
    msg << "initial data inadmissible: |v0|_0 = " << x0 << ", delta = " << report.smallness.delta;
    report.warnings.push_back(msg.str());
    if (strict) {
      report.status = RunStatus::Refused;
      report.failure_message = msg.str();
      return report;
    }
  }

  try {
    report.dt_guard = dt_guard(config.model, v0);
    const TrajectoryState final_state = integrate(
        config.model, config.stepper, v0,
        [&](double t, const SpectralField& v) {
          report.series.append(observe(config.model.kind, t, v));
        });
    report.steps = final_state.step_count;
    report.final_time = final_state.t;
  } catch (const SingularityError& e) {
    report.status = RunStatus::Singular;
    report.failure_message = e.what();
    report.failure_time = std::isnan(e.time()) ? 0.0 : e.time();
    if (!report.series.empty()) report.final_time = report.series.back().t;
  }
  if (report.dt_guard > 0.0 && config.stepper.dt > report.dt_guard)
    report.warnings.push_back("dt exceeds the recommended step " + format_number(report.dt_guard));

  const TimeSeries& s = report.series;
  if (s.size() >= 2) {
    report.lyapunov_monotone = check_lyapunov_monotone(s);
    report.wiener_monotone = check_wiener_monotone(s);
    for (double r : kHrFitOrders) report.hr_decay_fits.emplace_back(r, hr_decay_fit(s, r));
  }
  if (!s.empty() && report.smallness.delta > 0.0)
    report.certificate =
        certify_decay(s, x0, report.smallness.delta, config.diagnostics.envelope_slack);

  if (config.model.kind == ModelKind::Exp) {
    report.positivity_ok = true;
  } else {
    bool ok = report.status != RunStatus::Singular && !s.empty();
    for (const TimeSample& sample : s.samples()) {
      if (!(sample.min_one_plus_v > 0.0)) ok = false;
      if (x0 < 1.0 && !(sample.u_min > 0.5)) ok = false;
    }
    report.positivity_ok = ok;
    if (s.size() >= 2) {
      auto deviation = [](const TimeSample& t) {
        return std::max(std::abs(t.u_max - 1.0), std::abs(t.u_min - 1.0));
      };
      report.u_converging = deviation(s.back()) < deviation(s.front()) ||
                            deviation(s.front()) == 0.0;
    }
  }
  return report;
}

}  // namespace crystalflow
