#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace crystalflow {
namespace {

using nlohmann::json;

// Tracks the dotted path of the value being decoded.
class Reader {
 public:
  Reader(const json& node, std::string path, const std::string* text)
      : node_(node), path_(std::move(path)), text_(text) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("config: " + (path_.empty() ? std::string("<root>") : path_) + ": " + msg);
  }

  void require_object() const {
    if (!node_.is_object()) fail("expected an object");
  }

  void reject_unknown(std::initializer_list<const char*> allowed) const {
    require_object();
    for (const auto& [key, _] : node_.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* a) { return key == a; });
      if (known) continue;
      std::string where;
      if (text_) {
        const std::size_t pos = text_->find("\"" + key + "\"");
        if (pos != std::string::npos)
          where = " (line " + std::to_string(1 + std::count(text_->begin(), text_->begin() + pos, '\n')) + ")";
      }
      throw ConfigError("config: " + child_path(key) + ": unknown key" + where);
    }
  }

  bool has(const char* key) const { return node_.contains(key); }

  Reader at(const char* key) const {
    if (!node_.contains(key)) Reader(node_, child_path(key), text_).fail("missing required key");
    return Reader(node_.at(key), child_path(key), text_);
  }

  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }

  double number() const {
    if (!node_.is_number()) fail("expected a number");
    const double x = node_.get<double>();
    if (!std::isfinite(x)) fail("expected a finite number");
    return x;
  }

  long long integer() const {
    if (node_.is_number_integer()) return node_.get<long long>();
    if (node_.is_number_float()) {
      const double x = node_.get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15)
        return static_cast<long long>(x);
    }
    fail("expected an integer");
  }

  bool boolean() const {
    if (!node_.is_boolean()) fail("expected true or false");
    return node_.get<bool>();
  }

  std::vector<Reader> array() const {
    if (!node_.is_array()) fail("expected an array");
    std::vector<Reader> out;
    for (std::size_t i = 0; i < node_.size(); ++i)
      out.emplace_back(node_[i], path_ + "[" + std::to_string(i) + "]", text_);
    return out;
  }

  const std::string& path() const { return path_; }

 private:
  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& node_;
  std::string path_;
  const std::string* text_;
};

// Runs a library validator and rewraps InvalidArgument at the reader's path.
template <class F>
void check(const Reader& r, F&& f) {
  try {
    f();
  } catch (const InvalidArgument& e) {
    r.fail(e.what());
  }
}

ModelConfig read_model(const Reader& r) {
  r.reject_unknown({"kind", "mode", "N"});
  ModelConfig m;
  const Reader kind = r.at("kind");
  check(kind, [&] { m.kind = parse_model_kind(kind.string()); });
  const std::string mode = r.has("mode") ? r.at("mode").string() : "full";
  if (mode == "full") {
    m.mode = NonlinearityMode::full();
    if (r.has("N")) m.mode.order = static_cast<int>(r.at("N").integer());
  } else if (mode == "truncated") {
    m.mode = NonlinearityMode::truncated_at(r.has("N") ? static_cast<int>(r.at("N").integer()) : 20);
  } else {
    r.at("mode").fail("expected \"full\" or \"truncated\"");
  }
  if (m.mode.order < 0 || m.mode.order > 170) r.at("N").fail("expected 0 <= N <= 170");
  return m;
}

GridSpec read_grid(const Reader& r) {
  r.reject_unknown({"dim", "M", "P", "padding"});
  const Reader dim = r.at("dim");
  const Reader modes = r.at("M");
  const long long d = dim.integer();
  if (d != 1 && d != 2) dim.fail("expected 1 or 2");
  const long long m = modes.integer();
  if (m < 1 || m > 4096) modes.fail("expected 1 <= M <= 4096");
  const double padding = r.has("padding") ? r.at("padding").number() : 2.0;
  if (!(padding >= 1.0)) r.at("padding").fail("expected padding >= 1");
  GridSpec g = GridSpec::make(static_cast<int>(d), static_cast<int>(m), padding);
  if (r.has("P")) {
    const Reader p = r.at("P");
    g.points = static_cast<int>(p.integer());
    check(p, [&] { g.validate(); });
  }
  return g;
}

StepperConfig read_stepper(const Reader& r) {
  r.reject_unknown({"scheme", "dt", "t_end", "sample_every", "max_steps", "allow_large_dt"});
  StepperConfig s;
  if (r.has("scheme")) {
    const Reader scheme = r.at("scheme");
    check(scheme, [&] { s.scheme = parse_scheme(scheme.string()); });
  }
  s.dt = r.at("dt").number();
  if (!(s.dt > 0.0)) r.at("dt").fail("expected dt > 0");
  s.t_end = r.at("t_end").number();
  if (!(s.t_end >= 0.0)) r.at("t_end").fail("expected t_end >= 0");
  if (r.has("sample_every")) {
    const long long n = r.at("sample_every").integer();
    if (n < 1 || n > 1'000'000'000) r.at("sample_every").fail("expected a positive integer");
    s.sample_every = static_cast<int>(n);
  }
  if (r.has("max_steps")) {
    s.max_steps = r.at("max_steps").integer();
    if (s.max_steps < 1) r.at("max_steps").fail("expected a positive integer");
  }
  if (r.has("allow_large_dt")) s.allow_large_dt = r.at("allow_large_dt").boolean();
  return s;
}

InitialData read_initial(const Reader& r, int dim) {
  r.reject_unknown({"kind", "modes", "path", "normalize_wiener0"});
  InitialData init;
  const std::string kind = r.at("kind").string();
  if (kind == "modes") {
    init.kind = InitialData::Kind::Modes;
    if (r.has("path")) r.at("path").fail("not allowed with kind \"modes\"");
    for (const Reader& term : r.at("modes").array()) {
      term.reject_unknown({"k", "amplitude", "phase"});
      ModeTerm t;
      const Reader k = term.at("k");
      const std::vector<Reader> comps = k.array();
      if (static_cast<int>(comps.size()) != dim)
        k.fail("expected " + std::to_string(dim) + " component(s)");
      for (int i = 0; i < dim; ++i) t.k[i] = static_cast<int>(comps[i].integer());
      if (t.k[0] == 0 && t.k[1] == 0) k.fail("the zero mode is not allowed");
      t.amplitude = term.at("amplitude").number();
      if (term.has("phase")) t.phase = term.at("phase").number();
      init.modes.push_back(t);
    }
  } else if (kind == "file") {
    init.kind = InitialData::Kind::File;
    if (r.has("modes")) r.at("modes").fail("not allowed with kind \"file\"");
    init.path = r.at("path").string();
    if (init.path.empty()) r.at("path").fail("expected a non-empty path");
  } else {
    r.at("kind").fail("expected \"modes\" or \"file\"");
  }
  if (r.has("normalize_wiener0")) {
    init.normalize_wiener0 = r.at("normalize_wiener0").number();
    if (!(*init.normalize_wiener0 >= 0.0)) r.at("normalize_wiener0").fail("expected a value >= 0");
  }
  return init;
}

OutputOptions read_outputs(const Reader& r) {
  r.reject_unknown({"directory", "formats"});
  OutputOptions o;
  if (r.has("directory")) o.directory = r.at("directory").string();
  if (r.has("formats")) {
    o.formats.clear();
    std::set<std::string> seen;
    for (const Reader& f : r.at("formats").array()) {
      const std::string name = f.string();
      if (name != "csv" && name != "json" && name != "plot")
        f.fail("expected \"csv\", \"json\" or \"plot\"");
      if (!seen.insert(name).second) f.fail("duplicate format");
      o.formats.push_back(name);
    }
  }
  return o;
}

DiagnosticsOptions read_diagnostics(const Reader& r) {
  r.reject_unknown({"envelope_slack"});
  DiagnosticsOptions d;
  if (r.has("envelope_slack")) {
    d.envelope_slack = r.at("envelope_slack").number();
    if (!(d.envelope_slack >= 0.0)) r.at("envelope_slack").fail("expected a value >= 0");
  }
  return d;
}

}  // namespace

bool OutputOptions::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

nlohmann::json parse_json_document(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    std::ostringstream os;
    os << what << ": line " << line << ", column " << column << ": " << msg;
    throw ConfigError(os.str());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunConfig run_config_from_json(const nlohmann::json& j, const std::string& base_dir,
                               const std::string& source_text) {
  const Reader root(j, "", source_text.empty() ? nullptr : &source_text);
  root.reject_unknown({"model", "grid", "stepper", "initial_data", "outputs", "diagnostics"});
  RunConfig c;
  c.base_dir = base_dir;
  c.model = read_model(root.at("model"));
  c.model.grid = read_grid(root.at("grid"));
  c.stepper = read_stepper(root.at("stepper"));
  c.initial = read_initial(root.at("initial_data"), c.model.grid.dim);
  if (root.has("outputs")) c.outputs = read_outputs(root.at("outputs"));
  if (root.has("diagnostics")) c.diagnostics = read_diagnostics(root.at("diagnostics"));
  for (const ModeTerm& t : c.initial.modes)
    if (!c.model.grid.contains(t.k))
      throw ConfigError("config: initial_data.modes: wavevector outside |k_i| <= M");
  return c;
}

RunConfig parse_run_config(const std::string& text, const std::string& base_dir) {
  return run_config_from_json(parse_json_document(text, "config"), base_dir, text);
}

RunConfig load_run_config(const std::string& path) {
  const std::string text = read_text_file(path);
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_run_config(text, parent.empty() ? "." : parent.string());
}

nlohmann::json run_config_to_json(const RunConfig& c) {
  json model{{"kind", to_string(c.model.kind)},
             {"mode", c.model.mode.truncated ? "truncated" : "full"},
             {"N", c.model.mode.order}};
  json grid{{"dim", c.model.grid.dim},
            {"M", c.model.grid.modes},
            {"P", c.model.grid.points},
            {"padding", c.model.grid.padding}};
  json stepper{{"scheme", to_string(c.stepper.scheme)},
               {"dt", c.stepper.dt},
               {"t_end", c.stepper.t_end},
               {"sample_every", c.stepper.sample_every},
               {"max_steps", c.stepper.max_steps},
               {"allow_large_dt", c.stepper.allow_large_dt}};
  json initial;
  if (c.initial.kind == InitialData::Kind::Modes) {
    initial["kind"] = "modes";
    json modes = json::array();
    for (const ModeTerm& t : c.initial.modes) {
      json k = json::array({t.k[0]});
      if (c.model.grid.dim == 2) k.push_back(t.k[1]);
      modes.push_back({{"k", k}, {"amplitude", t.amplitude}, {"phase", t.phase}});
    }
    initial["modes"] = modes;
  } else {
    initial["kind"] = "file";
    initial["path"] = c.initial.path;
  }
  if (c.initial.normalize_wiener0) initial["normalize_wiener0"] = *c.initial.normalize_wiener0;
  return json{{"model", model},
              {"grid", grid},
              {"stepper", stepper},
              {"initial_data", initial},
              {"outputs", {{"directory", c.outputs.directory}, {"formats", c.outputs.formats}}},
              {"diagnostics", {{"envelope_slack", c.diagnostics.envelope_slack}}}};
}

std::string serialize_run_config(const RunConfig& config) {
  return run_config_to_json(config).dump(2) + "\n";
}

SpectralField build_initial_field(const RunConfig& config) {
  const GridSpec& grid = config.model.grid;
  SpectralField v0(grid);
  if (config.initial.kind == InitialData::Kind::Modes) {
    v0 = SpectralField::from_modes(grid, config.initial.modes);
  } else {
    std::filesystem::path p(config.initial.path);
    if (p.is_relative()) p = std::filesystem::path(config.base_dir) / p;
    std::ifstream in(p);
    if (!in) throw ConfigError("config: initial_data.path: cannot open '" + p.string() + "'");
    std::vector<double> samples;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string token;
      while (ls >> token) {
        std::size_t used = 0;
        double x = 0.0;
        try {
          x = std::stod(token, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != token.size() || !std::isfinite(x))
          throw ConfigError("config: " + p.string() + ": line " + std::to_string(lineno) +
                            ": not a finite number '" + token + "'");
        samples.push_back(x);
      }
    }
    if (samples.size() != grid.sample_count())
      throw ConfigError("config: " + p.string() + ": expected " +
                        std::to_string(grid.sample_count()) + " samples, found " +
                        std::to_string(samples.size()));
    v0 = from_physical(samples, grid).without_mean();
  }
  if (config.initial.normalize_wiener0) {
    const double norm = wiener_norm(v0, 0.0);
    if (norm == 0.0) {
      if (*config.initial.normalize_wiener0 != 0.0)
        throw ConfigError("config: initial_data.normalize_wiener0: initial data is zero");
    } else {
      v0 = v0 * (*config.initial.normalize_wiener0 / norm);
    }
  }
  return v0;
}

}  // namespace crystalflow
