#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "crystalflow/crystalflow.h"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kUsage = 1, kInadmissible = 2, kSingular = 3 };

int exit_for(cf_status status) {
  switch (status) {
    case CF_OK: return kOk;
    case CF_ERROR_INADMISSIBLE: return kInadmissible;
    case CF_ERROR_SINGULAR: return kSingular;
    default: return kUsage;
  }
}

int report_error(cf_status status) {
  std::cerr << "crystalflow: " << cf_status_message(status) << ": " << cf_last_error() << '\n';
  return exit_for(status);
}

json num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

const char* run_status_name(cf_run_status s) {
  switch (s) {
    case CF_RUN_COMPLETED: return "completed";
    case CF_RUN_REFUSED: return "refused";
    case CF_RUN_SINGULAR: return "singular";
  }
  return "unknown";
}

int cmd_run(const std::string& path, bool strict, bool as_json, const std::string& out_dir) {
  cf_run* run = nullptr;
  cf_status st = cf_run_create_from_file(path.c_str(), &run);
  if (st != CF_OK) return report_error(st);
  struct Guard {
    cf_run* r;
    ~Guard() { cf_run_destroy(r); }
  } guard{run};

  if (!out_dir.empty() && (st = cf_run_set_output_directory(run, out_dir.c_str())) != CF_OK)
    return report_error(st);

  const cf_status exec = cf_run_execute(run, strict);
  const std::string exec_message = cf_last_error();
  if (exec != CF_OK && exec != CF_ERROR_INADMISSIBLE && exec != CF_ERROR_SINGULAR)
    return report_error(exec);

  cf_run_summary s{};
  if ((st = cf_run_get_summary(run, &s)) != CF_OK) return report_error(st);
  if (s.status != CF_RUN_REFUSED && (st = cf_run_write_outputs(run)) != CF_OK)
    return report_error(st);

  std::vector<std::string> warnings;
  for (size_t i = 0; i < s.n_warnings; ++i) {
    const char* w = nullptr;
    if (cf_run_get_warning(run, i, &w) == CF_OK) warnings.emplace_back(w);
  }
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';

  if (as_json) {
    json j{{"status", run_status_name(s.status)},
           {"x0", num(s.x0)},
           {"delta", num(s.delta)},
           {"admissible", s.admissible != 0},
           {"verdict", s.has_certificate ? json(s.verdict != 0) : json(nullptr)},
           {"fitted_rate", num(s.fitted_rate)},
           {"lyapunov_monotone", s.lyapunov_monotone != 0},
           {"positivity_ok", s.positivity_ok != 0},
           {"steps", s.steps},
           {"final_time", num(s.final_time)},
           {"failure_time", num(s.failure_time)},
           {"warnings", warnings}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "status       " << run_status_name(s.status) << '\n'
              << "x0           " << fmt("%.12g", s.x0) << '\n'
              << "delta        " << fmt("%.12g", s.delta) << (s.admissible ? "" : "  (inadmissible)")
              << '\n';
    if (s.status != CF_RUN_REFUSED) {
      std::cout << "steps        " << s.steps << " to t = " << fmt("%.6g", s.final_time) << '\n';
      if (s.has_certificate)
        std::cout << "envelope     " << (s.verdict ? "holds" : "violated") << ", fitted rate "
                  << fmt("%.6g", s.fitted_rate) << '\n';
      std::cout << "lyapunov     " << (s.lyapunov_monotone ? "nonincreasing" : "increases") << '\n'
                << "positivity   " << (s.positivity_ok ? "ok" : "violated") << '\n';
    }
    if (exec != CF_OK) std::cout << "error        " << exec_message << '\n';
  }
  return exit_for(exec);
}

int cmd_threshold(const std::string& which, bool as_json) {
  std::vector<std::pair<std::string, cf_model>> models;
  if (which == "exp" || which == "all") models.emplace_back("exp", CF_MODEL_EXP);
  if (which == "adl" || which == "all") models.emplace_back("adl", CF_MODEL_ADL);
  if (models.empty()) {
    std::cerr << "crystalflow: threshold: unknown model '" << which << "' (exp, adl or all)\n";
    return kUsage;
  }
  json out = json::object();
  for (const auto& [name, model] : models) {
    cf_threshold_result t{};
    cf_status st = cf_threshold(model, &t);
    if (st != CF_OK) return report_error(st);
    const double step = model == CF_MODEL_EXP ? 0.01 : 0.0025;
    const int rows = model == CF_MODEL_EXP ? 20 : 16;
    json table = json::array();
    if (!as_json) {
      std::cout << name << ": root " << fmt("%.12f", t.root) << "  bracket ["
                << fmt("%.15f", t.lower) << ", " << fmt("%.15f", t.upper) << "]  width "
                << fmt("%.2e", t.upper - t.lower) << '\n';
      std::cout << "     x        delta(x)\n";
    }
    for (int i = 0; i <= rows; ++i) {
      const double x = i * step;
      double d = 0.0;
      if ((st = cf_delta(model, x, &d)) != CF_OK) return report_error(st);
      table.push_back({{"x", x}, {"delta", d}});
      if (!as_json) std::cout << "  " << fmt("%8.4f", x) << "  " << fmt("% .10f", d) << '\n';
    }
    out[name] = {{"root", t.root},
                 {"lower", t.lower},
                 {"upper", t.upper},
                 {"bracket_width", t.upper - t.lower},
                 {"iterations", t.iterations},
                 {"table", table}};
  }
  if (as_json) std::cout << out.dump(2) << '\n';
  return kOk;
}

struct ValidateState {
  bool as_json = false;
  json checks = json::array();
};

void on_check(const char* family, const char* name, int pass, int informational,
              const char* detail, void* user) {
  auto* state = static_cast<ValidateState*>(user);
  if (state->as_json) {
    state->checks.push_back({{"family", family},
                             {"name", name},
                             {"pass", pass != 0},
                             {"informational", informational != 0},
                             {"detail", detail}});
    return;
  }
  const char* verdict = informational ? "INFO" : pass ? "PASS" : "FAIL";
  std::cout << verdict << "  " << name << "  " << detail << std::endl;
}

int cmd_validate(const std::string& filter, const std::string& fault, bool as_json) {
  ValidateState state;
  state.as_json = as_json;
  int checks = 0, failed = 0;
  const cf_status st = cf_validate(filter.empty() ? nullptr : filter.c_str(),
                                   fault.empty() ? nullptr : fault.c_str(), on_check, &state,
                                   &checks, &failed);
  if (st != CF_OK) return report_error(st);
  if (as_json)
    std::cout << json{{"checks", state.checks}, {"total", checks}, {"failed", failed}}.dump(2) << '\n';
  else
    std::cout << checks - failed << "/" << checks << " checks passed\n";
  return failed == 0 ? kOk : kUsage;
}

struct SweepState {
  std::vector<cf_sweep_row> rows;
};

void on_row(const cf_sweep_row* row, void* user) {
  static_cast<SweepState*>(user)->rows.push_back(*row);
}

int cmd_sweep(const std::string& path, int workers, bool strict, bool as_json,
              const std::string& out_dir) {
  SweepState state;
  const cf_status st = cf_sweep_execute(path.c_str(), workers, strict,
                                        out_dir.empty() ? nullptr : out_dir.c_str(), on_row, &state);
  if (st != CF_OK) return report_error(st);
  bool refused = false, singular = false;
  json rows = json::array();
  if (!as_json) std::cout << "         x0        delta   fitted_rate  verdict  status\n";
  for (const cf_sweep_row& r : state.rows) {
    refused = refused || r.status == CF_RUN_REFUSED;
    singular = singular || r.status == CF_RUN_SINGULAR;
    if (as_json) {
      rows.push_back({{"x0", r.x0},
                      {"delta", num(r.delta)},
                      {"admissible", r.admissible != 0},
                      {"fitted_rate", num(r.fitted_rate)},
                      {"verdict", r.verdict != 0},
                      {"status", run_status_name(r.status)}});
    } else {
      std::cout << fmt("%11.6g", r.x0) << "  " << fmt("%11.4g", r.delta) << "  "
                << fmt("%12.6g", r.fitted_rate) << "  " << (r.verdict ? "true " : "false")
                << "    " << run_status_name(r.status) << '\n';
    }
  }
  if (as_json) std::cout << json{{"rows", rows}}.dump(2) << '\n';
  if (singular) return kSingular;
  if (refused) return kInadmissible;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral solver and certification tool for the exponential and ADL "
               "crystal-surface equations."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cf_version()));

  bool strict = false, as_json = false;
  std::string config, out_dir, model = "all", filter, fault;
  int workers = 0;

  CLI::App* run = app.add_subcommand("run", "Integrate a configured run and certify its decay");
  run->add_option("config", config, "Run config (JSON)")->required();
  run->add_flag("--strict", strict, "Refuse initial data with delta <= 0 (exit 2)");
  run->add_flag("--json", as_json, "Print the summary as JSON");
  run->add_option("--out", out_dir, "Output directory, overriding outputs.directory");

  CLI::App* threshold = app.add_subcommand("threshold", "Admissibility threshold and delta table");
  threshold->add_option("model", model, "exp, adl or all")->check(CLI::IsMember({"exp", "adl", "all"}));
  threshold->add_flag("--json", as_json, "Machine-readable output");

  CLI::App* validate = app.add_subcommand("validate", "Run the property suite");
  validate->add_option("--filter", filter, "Run only this family or check");
  validate->add_option("--inject-fault", fault, "Break a primitive on purpose (wiener-norm, quadrature)")
      ->group("");
  validate->add_flag("--json", as_json, "Machine-readable output");

  CLI::App* sweep = app.add_subcommand("sweep", "Run an amplitude sweep");
  sweep->add_option("config", config, "Sweep config (JSON)")->required();
  sweep->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_flag("--strict", strict, "Refuse inadmissible amplitudes");
  sweep->add_flag("--json", as_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*run) return cmd_run(config, strict, as_json, out_dir);
  if (*threshold) return cmd_threshold(model, as_json);
  if (*validate) return cmd_validate(filter, fault, as_json);
  if (*sweep) return cmd_sweep(config, workers, strict, as_json, out_dir);
  return kUsage;
}
