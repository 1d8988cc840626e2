#pragma once

// Run configuration files (JSON). Every section is a closed object: keys not
// listed here are rejected with the offending path and line.
//
//   {
//     "model":        {"kind": "exp", "mode": "full", "N": 20},
//     "grid":         {"dim": 1, "M": 32, "P": 130, "padding": 2},
//     "stepper":      {"scheme": "etdrk4", "dt": 1e-4, "t_end": 5, "sample_every": 10},
//     "initial_data": {"kind": "modes", "modes": [{"k": [3], "amplitude": 0.1, "phase": 0}]},
//     "outputs":      {"directory": "out", "formats": ["csv", "json", "plot"]},
//     "diagnostics":  {"envelope_slack": 1e-6}
//   }

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stepper.hpp"

namespace crystalflow {

struct InitialData {
  enum class Kind { Modes, File };
  Kind kind = Kind::Modes;
  std::vector<ModeTerm> modes;
  std::string path;  // raw v samples, resolved against the config directory
  std::optional<double> normalize_wiener0;  // rescale so that |v₀|₀ equals this

  friend bool operator==(const InitialData&, const InitialData&) = default;
};

struct OutputOptions {
  std::string directory = "out";
  std::vector<std::string> formats = {"csv", "json", "plot"};

  bool wants(const std::string& format) const;
  friend bool operator==(const OutputOptions&, const OutputOptions&) = default;
};

struct DiagnosticsOptions {
  double envelope_slack = 1e-6;  // fraction of x0
  friend bool operator==(const DiagnosticsOptions&, const DiagnosticsOptions&) = default;
};

struct RunConfig {
  ModelConfig model;
  StepperConfig stepper;
  InitialData initial;
  OutputOptions outputs;
  DiagnosticsOptions diagnostics;
  std::string base_dir = ".";  // not serialized

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.model.kind == b.model.kind && a.model.mode == b.model.mode &&
           a.model.grid == b.model.grid && a.stepper == b.stepper &&
           a.initial == b.initial && a.outputs == b.outputs &&
           a.diagnostics == b.diagnostics;
  }
};

// Throws ConfigError("config: line L, column C: ...") on syntax errors and
// ConfigError("config: <path>: ...") on schema errors.
RunConfig parse_run_config(const std::string& text, const std::string& base_dir = ".");
RunConfig run_config_from_json(const nlohmann::json& j, const std::string& base_dir = ".",
                               const std::string& source_text = {});
RunConfig load_run_config(const std::string& path);

nlohmann::json run_config_to_json(const RunConfig& config);
std::string serialize_run_config(const RunConfig& config);

// Parses text as JSON, mapping syntax errors to line/column diagnostics.
nlohmann::json parse_json_document(const std::string& text, const std::string& what);
std::string read_text_file(const std::string& path);

// Builds v₀ from the initial-data section. Raw sample files are P^d
// whitespace-separated values in row-major order; '#' starts a comment.
// The mean of file data is removed.
SpectralField build_initial_field(const RunConfig& config);

}  // namespace crystalflow
