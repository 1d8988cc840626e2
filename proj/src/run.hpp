#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "diagnostics.hpp"

namespace crystalflow {

enum class RunStatus {
  Completed,
  Refused,   // δ ≤ 0 under strict mode; nothing was integrated
  Singular,  // Adl positivity guard tripped
};

std::string to_string(RunStatus status);

struct RunReport {
  RunConfig config;
  RunStatus status = RunStatus::Completed;
  SmallnessReport smallness;
  TimeSeries series;
  std::optional<DecayCertificate> certificate;  // only when δ > 0 and samples exist
  bool lyapunov_monotone = false;
  bool wiener_monotone = false;
  bool positivity_ok = false;
  // Adl: sup|u - 1| at the final sample is below its initial value.
  std::optional<bool> u_converging;
  std::vector<std::pair<double, double>> hr_decay_fits;  // (r, rate), r ∈ {0, 1, 1.9}
  long long steps = 0;
  double final_time = 0.0;
  double dt_guard = 0.0;
  std::optional<double> failure_time;
  std::string failure_message;
  std::vector<std::string> warnings;
};

inline constexpr std::array<double, 3> kHrFitOrders = {0.0, 1.0, 1.9};

// Integrates the configured problem from v₀ and assembles the report. Adl
// singularities end the run early with RunStatus::Singular. With strict set,
// inadmissible data (δ ≤ 0) returns RunStatus::Refused without stepping.
RunReport execute_run(const RunConfig& config, const SpectralField& v0, bool strict);
RunReport execute_run(const RunConfig& config, bool strict);

// Writes timeseries.csv, report.json and decay_plot.dat (as selected by
// outputs.formats) into directory; returns the paths written.
std::vector<std::string> write_outputs(const RunReport& report, const std::string& directory);

nlohmann::json report_to_json(const RunReport& report);

// CSV column names, in order, after "t".
std::vector<std::string> timeseries_columns();

// "%.17g", with inf/nan spelled out.
std::string format_number(double x);

}  // namespace crystalflow
