#include "ssb/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ssb/io.hpp"
#include "ssb/parallel.hpp"

namespace ssb {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError(field + ": " + message);
}

std::string type_name(const json& v) { return v.type_name(); }

// Reads one JSON object section, tracking which keys were consumed.
class Section {
 public:
  Section(const json& doc, std::string name) : name_(std::move(name)) {
    if (!doc.contains(name_)) return;
    const json& v = doc.at(name_);
    if (!v.is_object()) fail(name_, "expected an object, got " + type_name(v));
    obj_ = &v;
  }

  /// Rejects keys that no reader asked for.
  void finish() const {
    if (!obj_) return;
    for (const auto& [key, value] : obj_->items()) {
      if (!seen_.count(key)) fail(field(key), "unknown key");
    }
  }

  void number(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(field(key), "expected a number, got " + type_name(*v));
      out = v->get<double>();
    }
  }

  void optional_number(const char* key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      if (!v->is_number()) fail(field(key), "expected a number or null, got " + type_name(*v));
      out = v->get<double>();
    }
  }

  void integer(const char* key, long& out) {
    if (const json* v = find(key)) {
      if (v->is_number_integer()) {
        out = v->get<long>();
      } else if (v->is_number_float() && std::floor(v->get<double>()) == v->get<double>() &&
                 std::abs(v->get<double>()) < 9e15) {
        out = static_cast<long>(v->get<double>());
      } else {
        fail(field(key), "expected an integer, got " + v->dump());
      }
    }
  }

  void unsigned64(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
        fail(field(key), "expected a nonnegative integer, got " + v->dump());
      }
      out = v->get<std::uint64_t>();
    }
  }

  void boolean(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(field(key), "expected true or false, got " + type_name(*v));
      out = v->get<bool>();
    }
  }

  void text(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(field(key), "expected a string, got " + type_name(*v));
      out = v->get<std::string>();
    }
  }

  void numbers(const char* key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(field(key), "expected an array of numbers, got " + type_name(*v));
      out.clear();
      for (const json& e : *v) {
        if (!e.is_number()) fail(field(key), "expected an array of numbers, found " + e.dump());
        out.push_back(e.get<double>());
      }
    }
  }

  void texts(const char* key, std::vector<std::string>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(field(key), "expected an array of strings, got " + type_name(*v));
      out.clear();
      for (const json& e : *v) {
        if (!e.is_string()) fail(field(key), "expected an array of strings, found " + e.dump());
        out.push_back(e.get<std::string>());
      }
    }
  }

 private:
  std::string field(const std::string& key) const { return name_ + "." + key; }

  const json* find(const char* key) {
    seen_.insert(key);
    if (!obj_ || !obj_->contains(key)) return nullptr;
    return &obj_->at(key);
  }

  std::string name_;
  const json* obj_ = nullptr;
  std::set<std::string> seen_;
};

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json to_json(const ScenarioConfig& c) {
  return json{
      {"model",
       {{"n_atoms", c.model.n_atoms},
        {"delta", c.model.delta},
        {"t0", optional_json(c.model.t0)},
        {"b0", optional_json(c.model.b0)},
        {"kappa", c.model.kappa},
        {"mass", c.model.mass},
        {"lattice_const", c.model.lattice_const}}},
      {"time_grid",
       {{"t_start", optional_json(c.time_grid.t_start)},
        {"t_end", c.time_grid.t_end},
        {"n_samples", c.time_grid.n_samples},
        {"spacing", c.time_grid.spacing}}},
      {"grid",
       {{"n_points", c.grid.n_points},
        {"window_sigmas", c.grid.window_sigmas},
        {"adapt", c.grid.adapt},
        {"points_per_sigma", c.grid.points_per_sigma},
        {"max_points", c.grid.max_points}}},
      {"wigner", {{"times", c.wigner.times}, {"frame", c.wigner.frame}}},
      {"tomography",
       {{"time", optional_json(c.tomography.time)},
        {"angles", c.tomography.angles},
        {"samples_per_angle", c.tomography.samples_per_angle},
        {"seed", c.tomography.seed},
        {"x_points", c.tomography.x_points},
        {"sample_bins", c.tomography.sample_bins},
        {"filter", c.tomography.filter},
        {"cutoff", c.tomography.cutoff},
        {"grid_points", c.tomography.grid_points},
        {"window_sigmas", c.tomography.window_sigmas}}},
      {"regimes",
       {{"deltas", c.regimes.deltas},
        {"t_min", c.regimes.t_min},
        {"t_max", c.regimes.t_max},
        {"t0_min", c.regimes.t0_min},
        {"t0_max", c.regimes.t0_max},
        {"resolution", c.regimes.resolution}}},
      {"exact", {{"method", c.exact.method}}},
      {"outputs", {{"directory", c.outputs.directory}, {"formats", c.outputs.formats}}},
      {"run", {{"workers", c.run.workers}, {"absolute_times", c.run.absolute_times}}},
  };
}

ScenarioConfig from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> sections{"model",   "time_grid", "grid",  "wigner", "tomography",
                                              "regimes", "exact",     "outputs", "run"};
  for (const auto& [key, value] : doc.items()) {
    if (!sections.count(key)) fail(key, "unknown section");
  }
  ScenarioConfig c;
  {
    Section s(doc, "model");
    s.integer("n_atoms", c.model.n_atoms);
    s.number("delta", c.model.delta);
    s.optional_number("t0", c.model.t0);
    s.optional_number("b0", c.model.b0);
    s.number("kappa", c.model.kappa);
    s.number("mass", c.model.mass);
    s.number("lattice_const", c.model.lattice_const);
    // A document naming only b0 selects it over the default t0.
    if (doc.contains("model") && doc["model"].contains("b0") && !doc["model"].contains("t0")) c.model.t0.reset();
    s.finish();
  }
  {
    Section s(doc, "time_grid");
    s.optional_number("t_start", c.time_grid.t_start);
    s.number("t_end", c.time_grid.t_end);
    s.integer("n_samples", c.time_grid.n_samples);
    s.text("spacing", c.time_grid.spacing);
    s.finish();
  }
  {
    Section s(doc, "grid");
    s.integer("n_points", c.grid.n_points);
    s.number("window_sigmas", c.grid.window_sigmas);
    s.boolean("adapt", c.grid.adapt);
    s.number("points_per_sigma", c.grid.points_per_sigma);
    s.integer("max_points", c.grid.max_points);
    s.finish();
  }
  {
    Section s(doc, "wigner");
    s.numbers("times", c.wigner.times);
    s.text("frame", c.wigner.frame);
    s.finish();
  }
  {
    Section s(doc, "tomography");
    s.optional_number("time", c.tomography.time);
    s.integer("angles", c.tomography.angles);
    s.integer("samples_per_angle", c.tomography.samples_per_angle);
    s.unsigned64("seed", c.tomography.seed);
    s.integer("x_points", c.tomography.x_points);
    s.integer("sample_bins", c.tomography.sample_bins);
    s.text("filter", c.tomography.filter);
    s.number("cutoff", c.tomography.cutoff);
    s.integer("grid_points", c.tomography.grid_points);
    s.number("window_sigmas", c.tomography.window_sigmas);
    s.finish();
  }
  {
    Section s(doc, "regimes");
    s.numbers("deltas", c.regimes.deltas);
    s.number("t_min", c.regimes.t_min);
    s.number("t_max", c.regimes.t_max);
    s.number("t0_min", c.regimes.t0_min);
    s.number("t0_max", c.regimes.t0_max);
    s.integer("resolution", c.regimes.resolution);
    s.finish();
  }
  {
    Section s(doc, "exact");
    s.text("method", c.exact.method);
    s.finish();
  }
  {
    Section s(doc, "outputs");
    s.text("directory", c.outputs.directory);
    s.texts("formats", c.outputs.formats);
    s.finish();
  }
  {
    Section s(doc, "run");
    s.integer("workers", c.run.workers);
    s.boolean("absolute_times", c.run.absolute_times);
    s.finish();
  }
  c.validate();
  return c;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
}

json override_value(const json& current, const std::string& raw) {
  json parsed;
  try {
    parsed = json::parse(raw);
  } catch (const json::parse_error&) {
    parsed = raw;
  }
  if (current.is_array() && !parsed.is_array()) {
    json list = json::array();
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        list.push_back(json::parse(item));
      } catch (const json::parse_error&) {
        list.push_back(item);
      }
    }
    return list;
  }
  return parsed;
}

void require_positive(double v, const char* field) {
  if (!(v > 0) || !std::isfinite(v)) fail(field, "must be a positive finite number");
}

}  // namespace

void ScenarioConfig::validate() const {
  if (model.n_atoms < 1) fail("model.n_atoms", "must be at least 1");
  require_positive(model.delta, "model.delta");
  if (model.t0.has_value() == model.b0.has_value()) fail("model", "give exactly one of t0 and b0");
  if (model.t0) require_positive(*model.t0, "model.t0");
  if (model.b0) require_positive(*model.b0, "model.b0");
  require_positive(model.kappa, "model.kappa");
  require_positive(model.mass, "model.mass");
  require_positive(model.lattice_const, "model.lattice_const");

  if (time_grid.n_samples < 1) fail("time_grid.n_samples", "must be at least 1");
  if (time_grid.spacing != "linear" && time_grid.spacing != "log") {
    fail("time_grid.spacing", "must be \"linear\" or \"log\"");
  }
  const double start_min = ramp().t0() / t_hat();
  const double start = t_start_over_that();
  if (start < start_min * (1 - 1e-12)) fail("time_grid.t_start", "must not precede t0/t_hat");
  if (!(time_grid.t_end > start)) fail("time_grid.t_end", "must exceed t_start");

  if (grid.n_points < 2) fail("grid.n_points", "must be at least 2");
  if (!(grid.window_sigmas >= 6)) fail("grid.window_sigmas", "must be at least 6");
  require_positive(grid.points_per_sigma, "grid.points_per_sigma");
  if (grid.max_points < grid.n_points) fail("grid.max_points", "must be at least grid.n_points");

  if (wigner.frame != "rescaled" && wigner.frame != "oscillator") {
    fail("wigner.frame", "must be \"rescaled\" or \"oscillator\"");
  }
  for (double t : wigner.times) {
    if (!(t >= start_min * (1 - 1e-12)) || !std::isfinite(t)) fail("wigner.times", "times must not precede t0/t_hat");
  }

  if (tomography.time && !(*tomography.time >= start_min * (1 - 1e-12))) {
    fail("tomography.time", "must not precede t0/t_hat");
  }
  if (tomography.angles < 2) fail("tomography.angles", "must be at least 2");
  if (tomography.samples_per_angle < 0) fail("tomography.samples_per_angle", "must be nonnegative");
  if (tomography.x_points < 3) fail("tomography.x_points", "must be at least 3");
  if (tomography.sample_bins < 3) fail("tomography.sample_bins", "must be at least 3");
  try {
    filter_from_string(tomography.filter);
  } catch (const std::invalid_argument&) {
    fail("tomography.filter", "must be \"ram-lak\" or \"hann\"");
  }
  if (!(tomography.cutoff > 0 && tomography.cutoff <= 1)) fail("tomography.cutoff", "must lie in (0, 1]");
  if (tomography.grid_points < 8) fail("tomography.grid_points", "must be at least 8");
  if (!(tomography.window_sigmas >= 6)) fail("tomography.window_sigmas", "must be at least 6");

  if (regimes.deltas.empty()) fail("regimes.deltas", "must not be empty");
  for (double d : regimes.deltas) require_positive(d, "regimes.deltas");
  require_positive(regimes.t_min, "regimes.t_min");
  require_positive(regimes.t0_min, "regimes.t0_min");
  if (!(regimes.t_max > regimes.t_min)) fail("regimes.t_max", "must exceed regimes.t_min");
  if (!(regimes.t0_max > regimes.t0_min)) fail("regimes.t0_max", "must exceed regimes.t0_min");
  if (regimes.resolution < 2) fail("regimes.resolution", "must be at least 2");

  if (exact.method != "airy" && exact.method != "ode") fail("exact.method", "must be \"airy\" or \"ode\"");
  if (outputs.directory.empty()) fail("outputs.directory", "must not be empty");
  for (const std::string& f : outputs.formats) {
    if (f != "csv") fail("outputs.formats", "unsupported format \"" + f + "\" (only csv)");
  }
  if (run.workers < 0) fail("run.workers", "must be nonnegative");
}

RampSpec ScenarioConfig::ramp() const {
  return model.t0 ? RampSpec::from_t0(model.delta, *model.t0) : RampSpec::from_b0(model.delta, *model.b0);
}

Scenario ScenarioConfig::scenario() const { return Scenario::make(static_cast<double>(model.n_atoms), ramp()); }

double ScenarioConfig::t_start_over_that() const {
  return time_grid.t_start.value_or(ramp().t0() / t_hat());
}

std::vector<double> ScenarioConfig::time_samples() const {
  const double a = t_start_over_that();
  const double b = time_grid.t_end;
  const long n = time_grid.n_samples;
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (long i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n - 1);
    out[static_cast<std::size_t>(i)] =
        time_grid.spacing == "log" ? a * std::pow(b / a, u) : a + (b - a) * u;
  }
  out.front() = a;
  out.back() = b;
  return out;
}

double ScenarioConfig::tomography_time_over_that() const {
  return tomography.time.value_or(ramp().t0() / t_hat());
}

EnvelopeMethod ScenarioConfig::envelope_method() const {
  return exact.method == "ode" ? EnvelopeMethod::OdeIntegration : EnvelopeMethod::Airy;
}

GridSpec ScenarioConfig::grid_spec() const {
  GridSpec g;
  g.n_points = grid.n_points;
  g.window_sigmas = grid.window_sigmas;
  g.adapt = grid.adapt;
  g.points_per_sigma = grid.points_per_sigma;
  g.max_points = grid.max_points;
  return g;
}

ChainParams<double> ScenarioConfig::chain() const {
  if (model.n_atoms < 2 || model.n_atoms > 4096) {
    throw ConfigError("model.n_atoms: the dispersion run needs 2 <= n_atoms <= 4096");
  }
  ChainParams<double> p;
  p.n_atoms = static_cast<int>(model.n_atoms);
  p.kappa = model.kappa;
  p.mass = model.mass;
  p.lattice_const = model.lattice_const;
  return p;
}

unsigned ScenarioConfig::workers() const {
  return run.workers == 0 ? default_workers() : static_cast<unsigned>(run.workers);
}

ScenarioConfig parse_config(const std::string& json_text) { return from_json(parse_document(json_text)); }

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_config(text);
}

std::string emit_config(const ScenarioConfig& config) { return to_json(config).dump(2) + "\n"; }

ScenarioConfig configure(const std::string& json_text,
                         const std::vector<std::pair<std::string, std::string>>& overrides) {
  json doc = json_text.empty() ? json::object() : parse_document(json_text);
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  const json schema = to_json(ScenarioConfig{});
  for (const auto& [key, raw] : overrides) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) fail(key, "overrides take the form --section.key");
    const std::string section = key.substr(0, dot);
    const std::string leaf = key.substr(dot + 1);
    if (!schema.contains(section) || !schema[section].contains(leaf)) fail(key, "unknown option");
    json& target = doc[section];
    if (!target.is_object()) target = json::object();
    const json& current = target.contains(leaf) ? target[leaf] : schema[section][leaf];
    target[leaf] = override_value(current, raw);
    // Selecting one ramp parameterization drops the other.
    if (section == "model" && leaf == "b0" && !target[leaf].is_null()) target["t0"] = nullptr;
    if (section == "model" && leaf == "t0" && !target[leaf].is_null()) target["b0"] = nullptr;
  }
  return from_json(doc);
}

}  // namespace ssb
