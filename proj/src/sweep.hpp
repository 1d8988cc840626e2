#pragma once

// Amplitude sweeps: the base run is repeated with v₀ rescaled to each
// requested |v₀|₀, runs execute concurrently and the aggregate is merged in
// x0 order once every worker has finished.
//
//   {"base": {...run config...} | "base_config": "run.json",
//    "amplitudes": [0.02, 0.05, 0.1], "workers": 4, "directory": "sweep_out"}

#include <string>
#include <vector>

#include "run.hpp"

namespace crystalflow {

struct SweepConfig {
  RunConfig base;
  std::vector<double> amplitudes;
  int workers = 1;
  std::string directory;  // defaults to base.outputs.directory
};

SweepConfig parse_sweep_config(const std::string& text, const std::string& base_dir = ".");
SweepConfig load_sweep_config(const std::string& path);

struct SweepRow {
  double x0 = 0.0;
  double delta = 0.0;
  bool admissible = false;
  double fitted_rate = 0.0;  // NaN when no certificate was produced
  bool verdict = false;
  RunStatus status = RunStatus::Completed;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ascending x0
  std::string aggregate_path;  // empty when not written
};

// workers ≤ 0 uses the configured count. With write_files set, each run
// writes its bundle under <directory>/run_<i>/ and sweep_aggregate.csv is
// written to <directory>.
SweepResult run_sweep(const SweepConfig& config, int workers, bool strict, bool write_files);

}  // namespace crystalflow
