#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "errors.hpp"
#include "run.hpp"

namespace crystalflow {
namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::vector<double> row_of(const TimeSample& s) {
  std::vector<double> row{s.t, s.wiener0, s.wiener1, s.wiener2, s.wiener4, s.l2};
  row.insert(row.end(), s.sobolev.begin(), s.sobolev.end());
  row.insert(row.end(), {s.linf, s.lyapunov, s.min_one_plus_v, s.u_min, s.u_max});
  return row;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> timeseries_columns() {
  return {"wiener_0", "wiener_1", "wiener_2", "wiener_4", "l2",
          "sobolev_0", "sobolev_1", "sobolev_1.9", "sobolev_2",
          "linf", "lyapunov", "min_one_plus_v", "u_min", "u_max"};
}

json report_to_json(const RunReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = run_config_to_json(r.config);
  j["status"] = to_string(r.status);
  j["smallness"] = {{"model", to_string(r.smallness.model)},
                    {"x0", number(r.smallness.x)},
                    {"delta", number(r.smallness.delta)},
                    {"admissible", r.smallness.admissible}};
  j["steps"] = r.steps;
  j["final_time"] = number(r.final_time);
  j["dt_guard"] = number(r.dt_guard);
  j["lyapunov_monotone"] = r.lyapunov_monotone;
  j["wiener_monotone"] = r.wiener_monotone;
  j["positivity_ok"] = r.positivity_ok;
  j["u_converging"] = r.u_converging ? json(*r.u_converging) : json(nullptr);
  json fits = json::object();
  for (const auto& [order, rate] : r.hr_decay_fits) fits[format_number(order)] = number(rate);
  j["hr_decay_fits"] = fits;
  if (r.certificate) {
    const DecayCertificate& c = *r.certificate;
    json samples = json::array();
    for (const EnvelopeSample& e : c.samples)
      samples.push_back({number(e.t), number(e.norm), number(e.envelope), e.pass});
    j["certificate"] = {{"x0", number(c.x0)},
                        {"delta", number(c.delta)},
                        {"slack", number(c.slack)},
                        {"fitted_rate", number(c.fitted_rate)},
                        {"verdict", c.verdict},
                        {"first_failure_time", c.first_failure ? number(*c.first_failure) : json(nullptr)},
                        {"columns", {"t", "norm", "envelope", "pass"}},
                        {"samples", samples}};
  } else {
    j["certificate"] = nullptr;
  }
  j["failure_time"] = r.failure_time ? number(*r.failure_time) : json(nullptr);
  j["failure_message"] = r.failure_message;
  j["warnings"] = r.warnings;
  json columns = json::array({"t"});
  for (const std::string& c : timeseries_columns()) columns.push_back(c);
  json rows = json::array();
  for (const TimeSample& s : r.series.samples()) {
    json row = json::array();
    for (double x : row_of(s)) row.push_back(number(x));
    rows.push_back(row);
  }
  j["series"] = {{"columns", columns}, {"rows", rows}};
  return j;
}

std::vector<std::string> write_outputs(const RunReport& report, const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create '" + directory + "': " + ec.message());
  const OutputOptions& opts = report.config.outputs;
  std::vector<std::string> written;

  if (opts.wants("csv")) {
    const fs::path path = fs::path(directory) / "timeseries.csv";
    std::ofstream out = open_output(path);
    out << "t";
    for (const std::string& c : timeseries_columns()) out << ',' << c;
    out << '\n';
    for (const TimeSample& s : report.series.samples()) {
      const std::vector<double> row = row_of(s);
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
      out << '\n';
    }
    written.push_back(path.string());
  }
  if (opts.wants("json")) {
    const fs::path path = fs::path(directory) / "report.json";
    std::ofstream out = open_output(path);
    out << report_to_json(report).dump(2) << '\n';
    written.push_back(path.string());
  }
  if (opts.wants("plot")) {
    const fs::path path = fs::path(directory) / "decay_plot.dat";
    std::ofstream out = open_output(path);
    out << "# t wiener_0 envelope\n";
    const double x0 = report.smallness.x;
    const double delta = report.smallness.delta;
    for (const TimeSample& s : report.series.samples()) {
      const double env = delta > 0.0 ? decay_envelope(x0, delta, s.t)
                                     : std::numeric_limits<double>::quiet_NaN();
      out << format_number(s.t) << ' ' << format_number(s.wiener0) << ' ' << format_number(env)
          << '\n';
    }
    written.push_back(path.string());
  }
  return written;
}

}  // namespace crystalflow
