#include "crystalflow/crystalflow.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "errors.hpp"
#include "run.hpp"
#include "sweep.hpp"
#include "validate.hpp"

using namespace crystalflow;

struct cf_run {
  RunConfig config;
  SpectralField v0;
  std::optional<RunReport> report;
};

namespace {

thread_local std::string last_error;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

cf_status fail(cf_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
cf_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const Error& e) {
    return fail(static_cast<cf_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CF_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CF_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(CF_ERROR_INTERNAL, "unknown exception");
  }
}

ModelKind to_kind(cf_model model) {
  if (model == CF_MODEL_EXP) return ModelKind::Exp;
  if (model == CF_MODEL_ADL) return ModelKind::Adl;
  throw InvalidArgument("unknown model");
}

cf_run_status to_c(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return CF_RUN_COMPLETED;
    case RunStatus::Refused: return CF_RUN_REFUSED;
    case RunStatus::Singular: return CF_RUN_SINGULAR;
  }
  return CF_RUN_COMPLETED;
}

void require(const void* p, const char* what) {
  if (!p) throw InvalidArgument(std::string(what) + " is NULL");
}

const RunReport& report_of(const cf_run* run) {
  require(run, "run");
  if (!run->report) throw InvalidArgument("run has not been executed");
  return *run->report;
}

}  // namespace

extern "C" {

const char* cf_version(void) { return "0.1.0"; }

const char* cf_status_message(cf_status status) {
  switch (status) {
    case CF_OK: return "ok";
    case CF_ERROR_CONFIG: return "configuration error";
    case CF_ERROR_INADMISSIBLE: return "inadmissible initial data";
    case CF_ERROR_SINGULAR: return "singularity";
    case CF_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case CF_ERROR_IO: return "i/o error";
    case CF_ERROR_STEP_LIMIT: return "step limit exceeded";
    case CF_ERROR_OVERFLOW: return "overflow";
    case CF_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cf_last_error(void) { return last_error.c_str(); }

cf_status cf_delta(cf_model model, double x, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = delta(to_kind(model), x);
    return CF_OK;
  });
}

cf_status cf_threshold(cf_model model, cf_threshold_result* out) {
  return guarded([&] {
    require(out, "out");
    const ThresholdResult r = threshold_root(to_kind(model));
    *out = {r.root, r.lower, r.upper, r.iterations};
    return CF_OK;
  });
}

cf_status cf_run_create_from_file(const char* path, cf_run** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto run = std::make_unique<cf_run>();
    run->config = load_run_config(path);
    run->v0 = build_initial_field(run->config);
    *out = run.release();
    return CF_OK;
  });
}

cf_status cf_run_create_from_json(const char* json, const char* base_dir, cf_run** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    auto run = std::make_unique<cf_run>();
    run->config = parse_run_config(json, base_dir ? base_dir : ".");
    run->v0 = build_initial_field(run->config);
    *out = run.release();
    return CF_OK;
  });
}

void cf_run_destroy(cf_run* run) { delete run; }

cf_status cf_run_initial_norm(const cf_run* run, double* out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    *out = wiener_norm(run->v0, 0.0);
    return CF_OK;
  });
}

cf_status cf_run_set_initial_norm(cf_run* run, double x0) {
  return guarded([&] {
    require(run, "run");
    if (!(x0 >= 0.0) || !std::isfinite(x0)) throw InvalidArgument("x0 must be finite and >= 0");
    RunConfig next = run->config;
    next.initial.normalize_wiener0 = x0;
    SpectralField v0 = build_initial_field(next);
    run->config = std::move(next);
    run->v0 = std::move(v0);
    run->report.reset();
    return CF_OK;
  });
}

cf_status cf_run_set_output_directory(cf_run* run, const char* directory) {
  return guarded([&] {
    require(run, "run");
    require(directory, "directory");
    if (!*directory) throw InvalidArgument("directory is empty");
    run->config.outputs.directory = directory;
    if (run->report) run->report->config.outputs.directory = directory;
    return CF_OK;
  });
}

cf_status cf_run_serialize_config(const cf_run* run, char* buffer, size_t capacity,
                                  size_t* needed) {
  return guarded([&] {
    require(run, "run");
    const std::string text = serialize_run_config(run->config);
    if (needed) *needed = text.size() + 1;
    if (!buffer) return CF_OK;
    if (capacity < text.size() + 1) throw InvalidArgument("buffer too small");
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    return CF_OK;
  });
}

cf_status cf_run_execute(cf_run* run, int strict) {
  return guarded([&] {
    require(run, "run");
    run->report = execute_run(run->config, run->v0, strict != 0);
    if (run->report->status == RunStatus::Refused)
      return fail(CF_ERROR_INADMISSIBLE, run->report->failure_message);
    if (run->report->status == RunStatus::Singular)
      return fail(CF_ERROR_SINGULAR, run->report->failure_message);
    return CF_OK;
  });
}

cf_status cf_run_write_outputs(const cf_run* run) {
  return guarded([&] {
    const RunReport& r = report_of(run);
    write_outputs(r, r.config.outputs.directory);
    return CF_OK;
  });
}

cf_status cf_run_get_summary(const cf_run* run, cf_run_summary* out) {
  return guarded([&] {
    const RunReport& r = report_of(run);
    require(out, "out");
    cf_run_summary s{};
    s.status = to_c(r.status);
    s.x0 = r.smallness.x;
    s.delta = r.smallness.delta;
    s.admissible = r.smallness.admissible;
    s.has_certificate = r.certificate.has_value();
    s.verdict = r.certificate && r.certificate->verdict;
    s.fitted_rate = r.certificate ? r.certificate->fitted_rate : kNaN;
    s.first_failure_time =
        r.certificate && r.certificate->first_failure ? *r.certificate->first_failure : kNaN;
    s.lyapunov_monotone = r.lyapunov_monotone;
    s.wiener_monotone = r.wiener_monotone;
    s.positivity_ok = r.positivity_ok;
    for (int i = 0; i < 3; ++i)
      s.hr_rate[i] = i < static_cast<int>(r.hr_decay_fits.size()) ? r.hr_decay_fits[i].second : kNaN;
    s.steps = r.steps;
    s.final_time = r.final_time;
    s.failure_time = r.failure_time ? *r.failure_time : kNaN;
    s.n_samples = r.series.size();
    s.n_warnings = r.warnings.size();
    *out = s;
    return CF_OK;
  });
}

cf_status cf_run_get_sample(const cf_run* run, size_t index, cf_sample* out) {
  return guarded([&] {
    const RunReport& r = report_of(run);
    require(out, "out");
    if (index >= r.series.size()) throw InvalidArgument("sample index out of range");
    const TimeSample& t = r.series.samples()[index];
    *out = {t.t, t.wiener0, t.wiener1, t.wiener2, t.wiener4, t.l2,
            t.sobolev[0], t.sobolev[1], t.sobolev[2], t.sobolev[3],
            t.linf, t.lyapunov, t.min_one_plus_v, t.u_min, t.u_max};
    return CF_OK;
  });
}

cf_status cf_run_get_warning(const cf_run* run, size_t index, const char** out) {
  return guarded([&] {
    const RunReport& r = report_of(run);
    require(out, "out");
    if (index >= r.warnings.size()) throw InvalidArgument("warning index out of range");
    *out = r.warnings[index].c_str();
    return CF_OK;
  });
}

cf_status cf_validate(const char* filter, const char* fault, cf_check_callback callback,
                      void* user, int* n_checks, int* n_failed) {
  return guarded([&] {
    ValidateOptions options;
    if (filter) options.filter = filter;
    if (fault) options.inject_fault = fault;
    const std::vector<CheckResult> results = run_validation(options, [&](const CheckResult& r) {
      if (callback)
        callback(r.family.c_str(), r.name.c_str(), r.pass, r.informational, r.detail.c_str(), user);
    });
    int failed = 0;
    for (const CheckResult& r : results)
      if (!r.pass && !r.informational) ++failed;
    if (n_checks) *n_checks = static_cast<int>(results.size());
    if (n_failed) *n_failed = failed;
    return CF_OK;
  });
}

cf_status cf_sweep_execute(const char* path, int workers, int strict, const char* out_dir,
                           cf_sweep_callback callback, void* user) {
  return guarded([&] {
    require(path, "path");
    SweepConfig config = load_sweep_config(path);
    if (out_dir) config.directory = out_dir;
    const SweepResult result = run_sweep(config, workers, strict != 0, true);
    if (callback) {
      for (const SweepRow& r : result.rows) {
        const cf_sweep_row row{r.x0, r.delta, r.admissible, r.fitted_rate, r.verdict, to_c(r.status)};
        callback(&row, user);
      }
    }
    return CF_OK;
  });
}

}  // extern "C"
