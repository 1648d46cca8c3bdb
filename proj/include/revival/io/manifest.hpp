#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "revival/entanglement.hpp"
#include "revival/errors.hpp"
#include "revival/fock.hpp"
#include "revival/params.hpp"
#include "revival/separable.hpp"

namespace revival::io {

using json = nlohmann::json;

inline constexpr const char* kManifestFormat = "revival-run-manifest";
inline constexpr int kManifestVersion = 1;
inline constexpr const char* kManifestFile = "manifest.json";

/// Version tags recorded per engine so that outputs can be traced to the
/// code that produced them.
inline json engine_versions() {
  return json{{"semiclassical_analytic", "1.0.0"}, {"semiclassical_mc", "1.0.0"},
              {"quantum_analytic", "1.0.0"},       {"quantum_numeric", "1.0.0"},
              {"negativity", "1.0.0"},             {"separable", "1.0.0"}};
}

inline json tolerance_set() {
  return json{{"negativity_clamp", analysis::kNegativityClamp},
              {"evolve_trace_drift", analysis::kEvolveTraceDrift},
              {"purity_guard", analysis::kPurityGuard},
              {"coherent_tail_limit", fock::kCoherentTailLimit},
              {"coherent_renormalize_threshold", fock::kRenormalizeThreshold},
              {"separable_stderr_warning", analysis::kSeparableStderrWarning},
              {"degenerate_shift", analysis::kDegenerateShift}};
}

struct RunManifest {
  std::string mode;
  json config;  // resolved configuration document
  DimensionlessParams resolved;
  std::optional<std::uint64_t> seed;
  int dim = 0;
  double tail_tolerance = 1e-10;
  json tolerances = tolerance_set();
  json engines = engine_versions();
  std::string started_utc;
  double wall_clock_seconds = 0.0;
  double tail_mass = 0.0;
  double max_trace_drift = 0.0;
  std::size_t failed_points = 0;
  std::vector<std::string> engines_failed_everywhere;
  std::vector<std::string> outputs;
  int exit_status = 0;
};

inline json to_json(const DimensionlessParams& p) {
  return json{{"lambda", p.lambda},     {"nbar", p.nbar},       {"chi", p.chi},
              {"g", p.g},               {"x_zp", p.x_zp},       {"sigma_x", p.sigma_x},
              {"sigma_p", p.sigma_p},   {"omega", p.omega},     {"oscillator_mass", p.oscillator_mass},
              {"occupation_clamped", p.occupation_clamped}};
}

inline DimensionlessParams dimensionless_from_json(const json& j) {
  DimensionlessParams p;
  p.lambda = j.at("lambda").get<double>();
  p.nbar = j.at("nbar").get<double>();
  p.chi = j.at("chi").get<double>();
  p.g = j.at("g").get<double>();
  p.x_zp = j.at("x_zp").get<double>();
  p.sigma_x = j.at("sigma_x").get<double>();
  p.sigma_p = j.at("sigma_p").get<double>();
  p.omega = j.at("omega").get<double>();
  p.oscillator_mass = j.at("oscillator_mass").get<double>();
  p.occupation_clamped = j.at("occupation_clamped").get<bool>();
  return p;
}

inline json to_json(const RunManifest& m) {
  json j{{"format", kManifestFormat},
         {"version", kManifestVersion},
         {"mode", m.mode},
         {"config", m.config},
         {"resolved_parameters", to_json(m.resolved)},
         {"seed", m.seed ? json(*m.seed) : json(nullptr)},
         {"truncation", {{"dim", m.dim}, {"tail_tolerance", m.tail_tolerance}}},
         {"tolerances", m.tolerances},
         {"engine_versions", m.engines},
         {"started_utc", m.started_utc},
         {"wall_clock_seconds", m.wall_clock_seconds},
         {"diagnostics",
          {{"tail_mass", m.tail_mass},
           {"max_trace_drift", m.max_trace_drift},
           {"failed_points", m.failed_points},
           {"engines_failed_everywhere", m.engines_failed_everywhere}}},
         {"outputs", m.outputs},
         {"exit_status", m.exit_status}};
  return j;
}

inline RunManifest manifest_from_json(const json& j) {
  if (j.value("format", std::string{}) != kManifestFormat) {
    throw ConfigError("not a run manifest (format field missing or wrong)");
  }
  if (j.value("version", 0) != kManifestVersion) {
    throw ConfigError("unsupported manifest version");
  }
  try {
    RunManifest m;
    m.mode = j.at("mode").get<std::string>();
    m.config = j.at("config");
    m.resolved = dimensionless_from_json(j.at("resolved_parameters"));
    if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
    m.dim = j.at("truncation").at("dim").get<int>();
    m.tail_tolerance = j.at("truncation").at("tail_tolerance").get<double>();
    m.tolerances = j.at("tolerances");
    m.engines = j.at("engine_versions");
    m.started_utc = j.at("started_utc").get<std::string>();
    m.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    const auto& d = j.at("diagnostics");
    m.tail_mass = d.at("tail_mass").get<double>();
    m.max_trace_drift = d.at("max_trace_drift").get<double>();
    m.failed_points = d.at("failed_points").get<std::size_t>();
    m.engines_failed_everywhere = d.at("engines_failed_everywhere").get<std::vector<std::string>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.exit_status = j.at("exit_status").get<int>();
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace revival::io
