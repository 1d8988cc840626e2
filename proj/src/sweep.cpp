#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "errors.hpp"

namespace crystalflow {

SweepConfig parse_sweep_config(const std::string& text, const std::string& base_dir) {
  const nlohmann::json j = parse_json_document(text, "sweep config");
  if (!j.is_object()) throw ConfigError("sweep config: <root>: expected an object");
  for (const auto& [key, _] : j.items())
    if (key != "base" && key != "base_config" && key != "amplitudes" && key != "workers" &&
        key != "directory")
      throw ConfigError("sweep config: " + key + ": unknown key");

  SweepConfig c;
  if (j.contains("base") == j.contains("base_config"))
    throw ConfigError("sweep config: exactly one of base and base_config is required");
  if (j.contains("base")) {
    c.base = run_config_from_json(j.at("base"), base_dir);
  } else {
    if (!j.at("base_config").is_string())
      throw ConfigError("sweep config: base_config: expected a string");
    std::filesystem::path p(j.at("base_config").get<std::string>());
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    c.base = load_run_config(p.string());
  }

  if (!j.contains("amplitudes")) throw ConfigError("sweep config: amplitudes: missing required key");
  const auto& amps = j.at("amplitudes");
  if (!amps.is_array()) throw ConfigError("sweep config: amplitudes: expected an array");
  if (amps.empty()) throw ConfigError("sweep config: amplitudes: the amplitude grid is empty");
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const std::string where = "sweep config: amplitudes[" + std::to_string(i) + "]: ";
    if (!amps[i].is_number()) throw ConfigError(where + "expected a number");
    const double x = amps[i].get<double>();
    if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError(where + "expected a finite value >= 0");
    c.amplitudes.push_back(x);
  }
  if (j.contains("workers")) {
    if (!j.at("workers").is_number_integer() || j.at("workers").get<long long>() < 1)
      throw ConfigError("sweep config: workers: expected a positive integer");
    c.workers = static_cast<int>(std::min<long long>(j.at("workers").get<long long>(), 1024));
  }
  if (j.contains("directory")) {
    if (!j.at("directory").is_string())
      throw ConfigError("sweep config: directory: expected a string");
    c.directory = j.at("directory").get<std::string>();
  }
  return c;
}

SweepConfig load_sweep_config(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_sweep_config(read_text_file(path), parent.empty() ? "." : parent.string());
}

SweepResult run_sweep(const SweepConfig& config, int workers, bool strict, bool write_files) {
  if (config.amplitudes.empty()) throw ConfigError("sweep: the amplitude grid is empty");
  std::vector<double> amplitudes = config.amplitudes;
  std::sort(amplitudes.begin(), amplitudes.end());
  const std::size_t n = amplitudes.size();
  const std::string directory =
      config.directory.empty() ? config.base.outputs.directory : config.directory;

  // Validates the base initial data once, before any thread starts.
  (void)build_initial_field(config.base);

  std::vector<SweepRow> rows(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        RunConfig rc = config.base;
        rc.initial.normalize_wiener0 = amplitudes[i];
        const RunReport report = execute_run(rc, strict);
        SweepRow& row = rows[i];
        row.x0 = amplitudes[i];
        row.delta = report.smallness.delta;
        row.admissible = report.smallness.admissible;
        row.status = report.status;
        row.fitted_rate = report.certificate ? report.certificate->fitted_rate
                                             : std::numeric_limits<double>::quiet_NaN();
        row.verdict = report.certificate && report.certificate->verdict &&
                      report.status == RunStatus::Completed;
        if (write_files) {
          char name[32];
          std::snprintf(name, sizeof name, "run_%03zu", i);
          write_outputs(report, (std::filesystem::path(directory) / name).string());
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const int count = std::clamp(workers > 0 ? workers : config.workers, 1, static_cast<int>(n));
  std::vector<std::thread> pool;
  for (int w = 0; w < count; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  SweepResult result;
  result.rows = std::move(rows);
  if (write_files) {
    std::filesystem::create_directories(directory);
    const std::filesystem::path path = std::filesystem::path(directory) / "sweep_aggregate.csv";
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "x0,delta,admissible,fitted_rate,verdict,status\n";
    for (const SweepRow& r : result.rows)
      out << format_number(r.x0) << ',' << format_number(r.delta) << ',' << (r.admissible ? 1 : 0)
          << ',' << format_number(r.fitted_rate) << ',' << (r.verdict ? 1 : 0) << ','
          << to_string(r.status) << '\n';
    result.aggregate_path = path.string();
  }
  return result;
}

}  // namespace crystalflow
