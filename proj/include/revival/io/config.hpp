#pragma once

// Run configuration: a JSON document with nested sections. Every scalar can
// be overridden from the command line with a dotted key path.

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "revival/compare.hpp"
#include "revival/errors.hpp"
#include "revival/fock.hpp"
#include "revival/params.hpp"
#include "revival/separable.hpp"

namespace revival::io {

using json = nlohmann::json;
using namespace nlohmann::literals;

enum class RunMode { curve, compare, entanglement_scan, decompose, headline_check };

inline const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::curve: return "curve";
    case RunMode::compare: return "compare";
    case RunMode::entanglement_scan: return "entanglement-scan";
    case RunMode::decompose: return "decompose";
    case RunMode::headline_check: return "headline-check";
  }
  return "?";
}

inline std::optional<RunMode> parse_mode(const std::string& s) {
  for (auto m : {RunMode::curve, RunMode::compare, RunMode::entanglement_scan, RunMode::decompose,
                 RunMode::headline_check}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

/// Numeric-engine dimension above which validation warns about cost.
inline constexpr int kLargeDimWarning = 256;
/// Desk-scale guard.
inline constexpr int kDeskScaleDim = 4096;

struct Diagnostic {
  enum class Severity { warning, error };
  Severity severity;
  std::string key;
  std::string message;

  [[nodiscard]] bool is_error() const { return severity == Severity::error; }
  [[nodiscard]] std::string str() const {
    return std::string(is_error() ? "error" : "warning") + ": " + key + ": " + message;
  }
};

struct RunConfig {
  RunMode mode = RunMode::curve;
  std::optional<PhysicalParams> physical;
  DimensionlessParams params;

  double grid_start = 0.0;  // ωt
  double grid_stop = 0.0;   // ωt
  std::size_t grid_steps = 0;

  analysis::EngineSet engines;
  analysis::CompareOptions compare;
  std::optional<std::uint64_t> seed;
  analysis::SeparableOptions separable;

  std::vector<double> scan_nbar;
  double scan_omega_t = std::numbers::pi;
  double headline_reference = 1e-10;

  std::string output_directory = "revival-out";
  bool write_svg = true;
  bool force = false;

  /// Fully resolved document, defaults included; recorded in the manifest.
  json resolved;

  [[nodiscard]] std::vector<PhaseAngle> grid() const {
    return analysis::phase_grid(grid_start, grid_stop, grid_steps);
  }
};

/// Defaults beneath every user document. Parameter blocks have no default.
inline json default_config() {
  return json{
      {"mode", "curve"},
      {"grid", {{"start", 0.0}, {"stop", 4.0 * std::numbers::pi}, {"steps", 201}, {"unit", "omega_t"}}},
      {"engines",
       {{"semiclassical", true},
        {"quantum_analytic", true},
        {"quantum_numeric", true},
        {"monte_carlo", true},
        {"negativity", true},
        {"entropy", "auto"},
        {"weight_separable", true}}},
      {"mc", {{"samples", 100000}}},
      {"truncation", {{"dim", 0}, {"tail_tolerance", 1e-10}}},
      {"separable", {{"rule", "monte_carlo"}, {"samples", 20000}, {"radial_nodes", 64}, {"angular_nodes", 96}}},
      {"scan", {{"nbar", json::array({0, 1, 2, 4, 8})}, {"omega_t", std::numbers::pi}}},
      {"headline", {{"reference_thermal", 1e-10}}},
      {"output", {{"directory", "revival-out"}, {"svg", true}}},
      {"workers", 1},
  };
}

/// Named scenarios merged beneath the user document.
inline std::optional<json> preset(const std::string& name) {
  if (name == "headline") {
    // 16λ² = 1e-24 and n̄ = 1e15: the room-temperature, 100 s oscillator regime.
    return json{{"mode", "headline-check"},
                {"params", {{"dimensionless", {{"lambda", 2.5e-13}, {"nbar", 1e15}}}}}};
  }
  if (name == "desk") {
    return json{{"params", {{"dimensionless", {{"lambda", 0.1}, {"nbar", 4.0}}}}},
                {"mc", {{"seed", 1}}}};
  }
  if (name == "ground-state") {
    return json{{"params", {{"dimensionless", {{"lambda", 0.1}, {"nbar", 0.0}}}}},
                {"mc", {{"seed", 1}}}};
  }
  return std::nullopt;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

/// Applies `a.b.c=value`. The value is parsed as JSON when possible and kept
/// as a string otherwise.
inline void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key.path=value: " + assignment);
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  std::string pointer;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError("empty key segment in override: " + assignment);
    pointer += "/" + part;
  }
  doc[json::json_pointer(pointer)] = value;
}

/// User document layered over preset and defaults.
inline json resolve_document(const json& user) {
  json doc = default_config();
  if (user.contains("preset")) {
    const auto name = user["preset"].get<std::string>();
    auto p = preset(name);
    if (!p) throw ConfigError("unknown preset: " + name);
    doc.merge_patch(*p);
  }
  // A user block of the other kind replaces the preset's parameters.
  if (doc.contains("params") && user.contains("params") && user["params"].is_object()) {
    for (const char* kind : {"physical", "dimensionless"}) {
      if (user["params"].contains(kind) && !doc["params"].contains(kind)) doc.erase("params");
    }
  }
  doc.merge_patch(user);
  return doc;
}

namespace detail {

struct Collector {
  std::vector<Diagnostic> items;
  void error(std::string key, std::string msg) {
    items.push_back({Diagnostic::Severity::error, std::move(key), std::move(msg)});
  }
  void warning(std::string key, std::string msg) {
    items.push_back({Diagnostic::Severity::warning, std::move(key), std::move(msg)});
  }
};

inline std::string dotted(const std::string& ptr) {
  std::string out = ptr.substr(1);
  for (auto& ch : out) {
    if (ch == '/') ch = '.';
  }
  return out;
}

inline std::optional<double> number_at(const json& doc, const std::string& ptr, Collector& c) {
  const json::json_pointer p(ptr);
  if (!doc.contains(p)) return std::nullopt;
  const auto& v = doc.at(p);
  if (!v.is_number()) {
    c.error(dotted(ptr), "must be a number");
    return std::nullopt;
  }
  return v.get<double>();
}

inline std::optional<bool> bool_at(const json& doc, const std::string& ptr, Collector& c) {
  const json::json_pointer p(ptr);
  if (!doc.contains(p)) return std::nullopt;
  const auto& v = doc.at(p);
  if (!v.is_boolean()) {
    c.error(dotted(ptr), "must be true or false");
    return std::nullopt;
  }
  return v.get<bool>();
}

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

/// Interprets a resolved document. Diagnostics are appended to `diag`;
/// the returned config is meaningful only if no error was recorded.
inline RunConfig interpret(const json& doc, std::vector<Diagnostic>& diag) {
  detail::Collector c;
  RunConfig cfg;
  cfg.resolved = doc;

  // Mode.
  if (!doc.contains("mode") || !doc["mode"].is_string() || !parse_mode(doc["mode"].get<std::string>())) {
    c.error("mode", "must be one of curve, compare, entanglement-scan, decompose, headline-check");
  } else {
    cfg.mode = *parse_mode(doc["mode"].get<std::string>());
  }

  // Parameters: exactly one block.
  const bool has_si = doc.contains("/params/physical"_json_pointer);
  const bool has_dimless = doc.contains("/params/dimensionless"_json_pointer);
  bool params_ok = false;
  if (has_si == has_dimless) {
    c.error("params", "exactly one of params.physical and params.dimensionless is required");
  } else if (has_si) {
    PhysicalParams p;
    const std::pair<const char*, double*> fields[] = {{"oscillator_mass", &p.oscillator_mass},
                                                      {"atom_mass", &p.atom_mass},
                                                      {"separation", &p.separation},
                                                      {"angular_frequency", &p.angular_frequency},
                                                      {"temperature", &p.temperature}};
    bool complete = true;
    for (const auto& [name, target] : fields) {
      const std::string ptr = std::string("/params/physical/") + name;
      auto v = detail::number_at(doc, ptr, c);
      if (!v) {
        if (!doc.contains(json::json_pointer(ptr))) c.error(detail::dotted(ptr), "missing");
        complete = false;
        continue;
      }
      if (!(*v > 0.0) || !std::isfinite(*v)) {
        c.error(detail::dotted(ptr), "must be finite and strictly positive");
        complete = false;
      }
      *target = *v;
    }
    const std::pair<const char*, double*> constants[] = {
        {"gravitational", &p.constants.gravitational},
        {"reduced_planck", &p.constants.reduced_planck},
        {"boltzmann", &p.constants.boltzmann}};
    for (const auto& [name, target] : constants) {
      const std::string ptr = std::string("/params/physical/constants/") + name;
      if (auto v = detail::number_at(doc, ptr, c)) {
        if (!(*v > 0.0)) {
          c.error(detail::dotted(ptr), "must be strictly positive");
          complete = false;
        }
        *target = *v;
      }
    }
    if (complete) {
      try {
        cfg.physical = p;
        cfg.params = reduce(p);
        params_ok = true;
        if (cfg.params.occupation_clamped) {
          c.warning("params.physical.temperature", "ħω/k_BT overflows; mean occupation clamped to 0");
        }
      } catch (const InvalidParams& e) {
        c.error("params.physical", e.what());
      }
    }
  } else {
    auto lambda = detail::number_at(doc, "/params/dimensionless/lambda", c);
    auto nbar = detail::number_at(doc, "/params/dimensionless/nbar", c);
    if (!lambda) c.error("params.dimensionless.lambda", "missing");
    if (!nbar) c.error("params.dimensionless.nbar", "missing");
    if (lambda && nbar) {
      try {
        cfg.params = natural_units(*lambda, *nbar);
        params_ok = true;
      } catch (const InvalidParams& e) {
        c.error("params.dimensionless", e.what());
      }
    }
  }

  // Grid.
  const double omega = params_ok ? cfg.params.omega : 1.0;
  auto start = detail::number_at(doc, "/grid/start", c);
  auto stop = detail::number_at(doc, "/grid/stop", c);
  auto steps = detail::number_at(doc, "/grid/steps", c);
  std::string unit = doc.value("/grid/unit"_json_pointer, std::string("omega_t"));
  double scale = 1.0;
  if (unit == "periods") {
    scale = 2.0 * std::numbers::pi;
  } else if (unit == "seconds") {
    scale = omega;
  } else if (unit != "omega_t") {
    c.error("grid.unit", "must be omega_t, periods or seconds");
  }
  if (!steps || *steps < 2 || std::floor(*steps) != *steps) {
    c.error("grid.steps", "must be an integer of at least 2");
  } else {
    cfg.grid_steps = static_cast<std::size_t>(*steps);
  }
  if (start && stop) {
    cfg.grid_start = *start * scale;
    cfg.grid_stop = *stop * scale;
    if (!(cfg.grid_stop > cfg.grid_start)) c.error("grid.stop", "must exceed grid.start");
  }

  // Engines.
  auto& e = cfg.engines;
  const std::pair<const char*, bool*> toggles[] = {{"semiclassical", &e.semiclassical},
                                                   {"quantum_analytic", &e.quantum_analytic},
                                                   {"quantum_numeric", &e.quantum_numeric},
                                                   {"monte_carlo", &e.monte_carlo},
                                                   {"negativity", &e.negativity},
                                                   {"weight_separable", &e.weight_separable}};
  for (const auto& [name, target] : toggles) {
    if (auto v = detail::bool_at(doc, std::string("/engines/") + name, c)) *target = *v;
  }
  const json entropy = doc.value("/engines/entropy"_json_pointer, json("auto"));
  if (entropy.is_boolean()) {
    e.entropy = entropy.get<bool>();
  } else if (entropy == "auto") {
    e.entropy = params_ok && cfg.params.nbar == 0.0;
  } else {
    c.error("engines.entropy", "must be true, false or \"auto\"");
  }

  // Monte Carlo.
  if (auto n = detail::number_at(doc, "/mc/samples", c)) {
    if (*n < 100 || std::floor(*n) != *n) {
      c.error("mc.samples", "must be an integer of at least 100");
    } else {
      cfg.compare.mc_samples = static_cast<std::size_t>(*n);
    }
  }
  if (doc.contains("/mc/seed"_json_pointer)) {
    const auto& s = doc.at("/mc/seed"_json_pointer);
    if (!s.is_number_integer() || s.get<std::int64_t>() < 0) {
      c.error("mc.seed", "must be a non-negative integer");
    } else {
      cfg.seed = s.get<std::uint64_t>();
      cfg.compare.seed = *cfg.seed;
      cfg.separable.seed = *cfg.seed;
    }
  }

  // Separable component.
  const std::string rule = doc.value("/separable/rule"_json_pointer, std::string("monte_carlo"));
  if (rule == "monte_carlo") {
    cfg.separable.rule = analysis::MixtureRule::monte_carlo;
  } else if (rule == "quadrature") {
    cfg.separable.rule = analysis::MixtureRule::quadrature;
  } else {
    c.error("separable.rule", "must be monte_carlo or quadrature");
  }
  if (auto n = detail::number_at(doc, "/separable/samples", c)) {
    if (*n < 2) c.error("separable.samples", "must be at least 2");
    else cfg.separable.mc_samples = static_cast<std::size_t>(*n);
  }
  if (auto n = detail::number_at(doc, "/separable/radial_nodes", c)) {
    if (*n < 1) c.error("separable.radial_nodes", "must be positive");
    else cfg.separable.radial_nodes = static_cast<int>(*n);
  }
  if (auto n = detail::number_at(doc, "/separable/angular_nodes", c)) {
    if (*n < 1) c.error("separable.angular_nodes", "must be positive");
    else cfg.separable.angular_nodes = static_cast<int>(*n);
  }

  const bool uses_mc =
      ((cfg.mode == RunMode::curve || cfg.mode == RunMode::compare) && e.monte_carlo) ||
      (cfg.mode == RunMode::decompose && cfg.separable.rule == analysis::MixtureRule::monte_carlo);
  if (uses_mc && !cfg.seed) c.error("mc.seed", "required when a Monte Carlo engine is enabled");

  // Truncation.
  if (auto d = detail::number_at(doc, "/truncation/dim", c)) {
    if (*d != 0 && (*d < 2 || std::floor(*d) != *d)) {
      c.error("truncation.dim", "must be 0 (automatic) or an integer of at least 2");
    } else {
      cfg.compare.dim_override = static_cast<int>(*d);
    }
  }
  if (auto tol = detail::number_at(doc, "/truncation/tail_tolerance", c)) {
    if (!(*tol > 0.0 && *tol < 1.0)) c.error("truncation.tail_tolerance", "must lie in (0, 1)");
    else cfg.compare.tail_tolerance = *tol;
  }

  // Scan and headline.
  if (doc.contains("/scan/nbar"_json_pointer)) {
    const auto& list = doc.at("/scan/nbar"_json_pointer);
    if (!list.is_array() || list.empty()) {
      c.error("scan.nbar", "must be a non-empty array of numbers");
    } else {
      for (const auto& v : list) {
        if (!v.is_number() || v.get<double>() < 0.0) {
          c.error("scan.nbar", "entries must be non-negative numbers");
          break;
        }
        cfg.scan_nbar.push_back(v.get<double>());
      }
    }
  }
  if (auto v = detail::number_at(doc, "/scan/omega_t", c)) cfg.scan_omega_t = *v;
  if (auto v = detail::number_at(doc, "/headline/reference_thermal", c)) {
    if (!(*v > 0.0)) c.error("headline.reference_thermal", "must be positive");
    else cfg.headline_reference = *v;
  }

  // Numeric-engine cost guard.
  const bool numeric = (cfg.mode == RunMode::curve || cfg.mode == RunMode::compare)
                           ? (e.quantum_numeric || e.negativity || e.entropy)
                           : (cfg.mode == RunMode::entanglement_scan || cfg.mode == RunMode::decompose);
  if (params_ok && numeric) {
    std::vector<double> occupations = {cfg.params.nbar};
    if (cfg.mode == RunMode::entanglement_scan) occupations = cfg.scan_nbar;
    for (double nbar : occupations) {
      if (cfg.compare.dim_override > 0) {
        const double tail = fock::thermal_tail_mass(nbar, cfg.compare.dim_override);
        if (tail > cfg.compare.tail_tolerance) {
          c.error("truncation.dim", "dim=" + std::to_string(cfg.compare.dim_override) +
                                        " leaves thermal tail mass " + detail::short_number(tail) + " at nbar=" +
                                        detail::short_number(nbar));
        }
        continue;
      }
      if (nbar > 1e6) {
        c.error("params", "nbar=" + detail::short_number(nbar) +
                              " is far beyond desk scale for the Fock-space engine; use headline-check");
        continue;
      }
      const int suggested = fock::required_dim(nbar, 0.0, cfg.params.lambda, cfg.compare.tail_tolerance);
      if (suggested > kDeskScaleDim) {
        c.warning("truncation.dim", "nbar=" + detail::short_number(nbar) + " forces dim=" + std::to_string(suggested) +
                                        " beyond the desk-scale guard of " + std::to_string(kDeskScaleDim));
      } else if (suggested > kLargeDimWarning) {
        c.warning("truncation.dim", "nbar=" + detail::short_number(nbar) + " needs dim=" + std::to_string(suggested) +
                                        " (suggested truncation.dim=" + std::to_string(suggested) + ")");
      }
    }
  }

  // Output.
  if (doc.contains("/output/directory"_json_pointer)) {
    const auto& d = doc.at("/output/directory"_json_pointer);
    if (!d.is_string() || d.get<std::string>().empty()) c.error("output.directory", "must be a non-empty string");
    else cfg.output_directory = d.get<std::string>();
  }
  if (auto v = detail::bool_at(doc, "/output/svg", c)) cfg.write_svg = *v;
  if (auto v = detail::bool_at(doc, "/output/force", c)) cfg.force = *v;
  if (auto w = detail::number_at(doc, "/workers", c)) {
    if (*w < 0) c.error("workers", "must be non-negative");
    else cfg.compare.workers = static_cast<unsigned>(*w);
  }

  diag.insert(diag.end(), c.items.begin(), c.items.end());
  return cfg;
}

/// Static validation of a user document; never throws for content errors.
inline std::vector<Diagnostic> validate(const json& user) {
  std::vector<Diagnostic> diag;
  try {
    interpret(resolve_document(user), diag);
  } catch (const std::exception& e) {
    diag.push_back({Diagnostic::Severity::error, "config", e.what()});
  }
  return diag;
}

/// Resolves and interprets; throws ConfigError listing every error.
inline RunConfig parse(const json& user, std::vector<Diagnostic>* warnings = nullptr) {
  std::vector<Diagnostic> diag;
  RunConfig cfg = interpret(resolve_document(user), diag);
  std::string errors;
  for (const auto& d : diag) {
    if (d.is_error()) errors += "\n  " + d.str();
    else if (warnings != nullptr) warnings->push_back(d);
  }
  if (!errors.empty()) throw ConfigError("invalid configuration:" + errors);
  return cfg;
}

}  // namespace revival::io
