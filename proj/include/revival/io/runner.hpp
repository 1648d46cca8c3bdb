#pragma once

// Executes a RunConfig and writes its artifacts: a CSV per mode, an optional
// SVG plot, and exactly one manifest per output directory.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "revival/compare.hpp"
#include "revival/entanglement.hpp"
#include "revival/io/config.hpp"
#include "revival/io/csv.hpp"
#include "revival/io/manifest.hpp"
#include "revival/io/svg.hpp"
#include "revival/quantum.hpp"
#include "revival/semiclassical.hpp"
#include "revival/separable.hpp"

namespace revival::io {

namespace fs = std::filesystem;

/// Environment variable naming the root for relative output directories.
inline constexpr const char* kOutputRootEnv = "REVIVAL_OUTPUT_ROOT";

inline const std::vector<std::string>& curve_header() {
  static const std::vector<std::string> header = {
      "omega_t",    "V_semiclassical", "V_quantum_analytic", "V_quantum_numeric", "V_mc",
      "V_mc_stderr", "negativity",     "entropy",            "weight_separable",  "flags"};
  return header;
}

struct RunResult {
  int exit_status = 0;
  fs::path directory;
  RunManifest manifest;
};

inline fs::path resolve_output_directory(const std::string& configured) {
  fs::path p(configured);
  if (p.is_relative()) {
    if (const char* root = std::getenv(kOutputRootEnv); root != nullptr && *root != '\0') {
      p = fs::path(root) / p;
    }
  }
  return p;
}

namespace detail {

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

inline void write_curve_csv(const fs::path& path, const analysis::VisibilityCurve& curve) {
  auto out = open_output(path);
  CsvWriter csv(out);
  csv.row(curve_header());
  for (const auto& r : curve.records) {
    csv.row({format_real(r.omega_t), format_optional(r.v_semiclassical),
             format_optional(r.v_quantum_analytic), format_optional(r.v_quantum_numeric),
             format_optional(r.v_mc), format_optional(r.v_mc_stderr), format_optional(r.negativity),
             format_optional(r.entropy), format_optional(r.weight_separable), r.flags});
  }
}

inline void write_curve_svg(const fs::path& path, const analysis::VisibilityCurve& curve) {
  std::vector<double> x;
  std::vector<PlotSeries> series = {{"semiclassical", "#1f77b4", {}},
                                    {"quantum (closed form)", "#ff7f0e", {}},
                                    {"quantum (Fock space)", "#2ca02c", {}},
                                    {"Monte Carlo", "#d62728", {}}};
  for (const auto& r : curve.records) {
    x.push_back(r.omega_t);
    series[0].y.push_back(r.v_semiclassical);
    series[1].y.push_back(r.v_quantum_analytic);
    series[2].y.push_back(r.v_quantum_numeric);
    series[3].y.push_back(r.v_mc);
  }
  std::erase_if(series, [](const PlotSeries& s) {
    for (const auto& v : s.y) {
      if (v) return false;
    }
    return true;
  });
  auto out = open_output(path);
  write_svg_plot(out, x, series, "omega t (rad)", "visibility V");
}

inline void write_compare_csv(const fs::path& path, const analysis::VisibilityCurve& curve,
                              const DimensionlessParams& dp) {
  auto out = open_output(path);
  CsvWriter csv(out);
  csv.row({"omega_t", "ratio_quantum_over_semiclassical", "oracle_ratio", "ratio_error",
           "delta_numeric_minus_analytic", "delta_mc_minus_semiclassical", "mc_z_score"});
  for (const auto& r : curve.records) {
    std::optional<double> ratio, ratio_err, d_num, d_mc, z;
    const double oracle = analysis::oracle_ratio(dp.lambda, PhaseAngle(r.omega_t));
    if (r.v_quantum_analytic && r.v_semiclassical && *r.v_semiclassical > 0.0) {
      ratio = *r.v_quantum_analytic / *r.v_semiclassical;
      ratio_err = *ratio - oracle;
    }
    if (r.v_quantum_numeric && r.v_quantum_analytic) d_num = *r.v_quantum_numeric - *r.v_quantum_analytic;
    if (r.v_mc && r.v_semiclassical) {
      d_mc = *r.v_mc - *r.v_semiclassical;
      if (r.v_mc_stderr && *r.v_mc_stderr > 0.0) z = *d_mc / *r.v_mc_stderr;
    }
    csv.row({format_real(r.omega_t), format_optional(ratio), format_real(oracle), format_optional(ratio_err),
             format_optional(d_num), format_optional(d_mc), format_optional(z)});
  }
}

struct ScanRow {
  double nbar = 0.0;
  int dim = 0;
  std::optional<double> v_numeric, v_analytic, v_semiclassical, dip, negativity, entropy;
  std::string flags;
};

inline std::vector<ScanRow> entanglement_scan(const RunConfig& cfg, double* max_drift) {
  std::vector<ScanRow> rows(cfg.scan_nbar.size());
  std::vector<double> drifts(rows.size(), 0.0);
  const PhaseAngle phase(cfg.scan_omega_t);
  parallel_for(rows.size(), cfg.compare.workers, [&](std::size_t i) {
    ScanRow& row = rows[i];
    row.nbar = cfg.scan_nbar[i];
    DimensionlessParams dp = cfg.params;
    dp.nbar = row.nbar;
    row.v_analytic = 2.0 * std::abs(quantum::quantum_coherence_oracle(dp.lambda, dp.nbar, phase));
    row.v_semiclassical = semiclassical::analytic_visibility(dp, phase);
    try {
      const fock::FockSpace space(analysis::numeric_dim(dp, cfg.compare), cfg.compare.tail_tolerance);
      row.dim = space.dim;
      const auto state = quantum::evolve(quantum::thermal_initial_state(dp.nbar, space), phase, dp.lambda);
      drifts[i] = std::abs(state.trace() - 1.0);
      row.v_numeric = quantum::reduced_atom(state).visibility();
      row.dip = 1.0 - *row.v_numeric;
      row.negativity = analysis::negativity(state);
      if (state.purity() > analysis::kPurityGuard) row.entropy = analysis::entanglement_entropy_pure(state);
    } catch (const Error&) {
      row.flags = "quantum_numeric:error";
    }
  });
  for (double d : drifts) *max_drift = std::max(*max_drift, d);
  return rows;
}

inline void write_scan_csv(const fs::path& path, const std::vector<ScanRow>& rows) {
  auto out = open_output(path);
  CsvWriter csv(out);
  csv.row({"nbar", "dim", "V_quantum_numeric", "V_quantum_analytic", "V_semiclassical", "dip",
           "dip_ratio_to_first", "occupation_ratio_to_first", "negativity", "entropy", "flags"});
  for (const auto& r : rows) {
    std::optional<double> ratio;
    if (r.dip && !rows.empty() && rows.front().dip && *rows.front().dip > 0.0) ratio = *r.dip / *rows.front().dip;
    const double occ_ratio = (2.0 * r.nbar + 1.0) / (2.0 * rows.front().nbar + 1.0);
    csv.row({format_real(r.nbar), std::to_string(r.dim), format_optional(r.v_numeric),
             format_optional(r.v_analytic), format_optional(r.v_semiclassical), format_optional(r.dip),
             format_optional(ratio), format_real(occ_ratio), format_optional(r.negativity),
             format_optional(r.entropy), r.flags});
  }
}

struct DecomposeRow {
  double omega_t = 0.0;
  std::optional<analysis::DecompositionReport> report;
  double c_semiclassical = 0.0;
  std::string flags;
};

inline void write_decompose_csv(const fs::path& path, const std::vector<DecomposeRow>& rows) {
  auto out = open_output(path);
  CsvWriter csv(out);
  csv.row({"omega_t", "weight_separable", "residual_weight", "c_full_re", "c_full_im", "c_sep_re",
           "c_sep_im", "c_sep_stderr", "c_semiclassical", "c_residual_re", "c_residual_im", "trace_sep",
           "trace_residual", "trace_norm_residual", "trace_distance_to_separable", "negativity_sep",
           "degenerate", "flags"});
  for (const auto& row : rows) {
    if (!row.report) {
      std::vector<std::string> fields(18);
      fields[0] = format_real(row.omega_t);
      fields[8] = format_real(row.c_semiclassical);
      fields[17] = row.flags;
      csv.row(fields);
      continue;
    }
    const auto& r = *row.report;
    const bool deg = r.degenerate;
    csv.row({format_real(row.omega_t), format_real(r.weight_separable), format_real(r.residual_weight),
             format_real(r.coherence_full.real()), format_real(r.coherence_full.imag()),
             format_real(r.coherence_sep.real()), format_real(r.coherence_sep.imag()),
             format_real(r.coherence_sep_stderr), format_real(row.c_semiclassical),
             deg ? "" : format_real(r.coherence_residual.real()),
             deg ? "" : format_real(r.coherence_residual.imag()), format_real(r.trace_sep),
             deg ? "" : format_real(r.trace_residual), format_real(r.trace_norm_residual),
             format_real(r.trace_distance_to_separable), format_real(r.negativity_sep), deg ? "1" : "0",
             row.flags});
  }
}

inline json headline_json(const analysis::HeadlineReport& h) {
  return json{{"lambda", h.lambda},
              {"nbar", h.nbar},
              {"dV_ground", h.dip_ground},
              {"dV_thermal_quantum", h.dip_thermal_quantum},
              {"dV_thermal_semiclassical", h.dip_thermal_semiclassical},
              {"log10_dV_ground", h.log10_dip_ground},
              {"log10_dV_thermal_quantum", h.log10_dip_thermal_quantum},
              {"log10_dV_thermal_semiclassical", h.log10_dip_thermal_semiclassical},
              {"reference_thermal", h.reference_thermal},
              {"residual_factor", h.residual_factor}};
}

}  // namespace detail

/// Runs the configuration. `log` receives human-readable progress lines.
inline RunResult run(const RunConfig& cfg, std::ostream& log = std::cout) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult result;
  result.directory = resolve_output_directory(cfg.output_directory);
  const fs::path manifest_path = result.directory / kManifestFile;
  if (fs::exists(manifest_path) && !cfg.force) {
    throw ConfigError(result.directory.string() + " already holds a manifest; pass --force to overwrite");
  }
  fs::create_directories(result.directory);

  RunManifest& m = result.manifest;
  m.mode = to_string(cfg.mode);
  m.config = cfg.resolved;
  m.resolved = cfg.params;
  m.seed = cfg.seed;
  m.tail_tolerance = cfg.compare.tail_tolerance;
  m.started_utc = detail::utc_now();

  switch (cfg.mode) {
    case RunMode::curve:
    case RunMode::compare: {
      const auto curve = analysis::compare_models(cfg.grid(), cfg.params, cfg.engines, cfg.compare);
      m.dim = curve.diagnostics.dim;
      m.tail_mass = curve.diagnostics.tail_mass;
      m.max_trace_drift = curve.diagnostics.max_trace_drift;
      m.failed_points = curve.diagnostics.failed_points;
      m.engines_failed_everywhere = curve.diagnostics.engines_failed_everywhere;
      detail::write_curve_csv(result.directory / "curve.csv", curve);
      m.outputs.push_back("curve.csv");
      if (cfg.mode == RunMode::compare) {
        detail::write_compare_csv(result.directory / "compare.csv", curve, cfg.params);
        m.outputs.push_back("compare.csv");
        log << "max |V_q/V_sc - exp(-8 lambda^2 sin^2)| = "
            << format_real(curve.diagnostics.max_oracle_ratio_error) << "\n";
      }
      if (cfg.write_svg) {
        detail::write_curve_svg(result.directory / "curve.svg", curve);
        m.outputs.push_back("curve.svg");
      }
      if (!curve.diagnostics.setup_error.empty()) log << "numeric engine: " << curve.diagnostics.setup_error << "\n";
      break;
    }
    case RunMode::entanglement_scan: {
      const auto rows = detail::entanglement_scan(cfg, &m.max_trace_drift);
      for (const auto& r : rows) {
        m.dim = std::max(m.dim, r.dim);
        if (!r.flags.empty()) ++m.failed_points;
      }
      if (!rows.empty() && m.failed_points == rows.size()) m.engines_failed_everywhere.push_back("quantum_numeric");
      detail::write_scan_csv(result.directory / "scan.csv", rows);
      m.outputs.push_back("scan.csv");
      break;
    }
    case RunMode::decompose: {
      const auto grid = cfg.grid();
      std::vector<detail::DecomposeRow> rows(grid.size());
      int dim = 0;
      try {
        dim = analysis::numeric_dim(cfg.params, cfg.compare);
      } catch (const Error&) {
      }
      m.dim = dim;
      std::vector<double> drifts(grid.size(), 0.0);
      std::optional<quantum::ConditionalEvolution> evolution;
      std::optional<quantum::JointState> initial;
      std::optional<fock::FockSpace> space;
      try {
        space.emplace(dim, cfg.compare.tail_tolerance);
        initial = quantum::thermal_initial_state(cfg.params.nbar, *space);
        evolution.emplace(cfg.params.lambda, *space);
        m.tail_mass = fock::thermal_tail_mass(cfg.params.nbar, dim);
      } catch (const Error& e) {
        log << "numeric engine: " << e.what() << "\n";
      }
      parallel_for(grid.size(), cfg.compare.workers, [&](std::size_t i) {
        auto& row = rows[i];
        row.omega_t = grid[i].value();
        row.c_semiclassical = semiclassical::analytic_coherence(cfg.params, grid[i]).real();
        if (!evolution) {
          row.flags = "decompose:setup";
          return;
        }
        try {
          const auto full = evolution->apply(*initial, grid[i]);
          drifts[i] = std::abs(full.trace() - 1.0);
          row.report = analysis::decompose(full, cfg.params.nbar, cfg.params.lambda, grid[i], *space, cfg.separable);
          if (row.report->convergence_warning) row.flags = "separable:stderr_above_1e-3";
        } catch (const Error&) {
          row.flags = "decompose:error";
        }
      });
      for (std::size_t i = 0; i < rows.size(); ++i) {
        m.max_trace_drift = std::max(m.max_trace_drift, drifts[i]);
        if (!rows[i].report) ++m.failed_points;
      }
      if (!rows.empty() && m.failed_points == rows.size()) m.engines_failed_everywhere.push_back("decompose");
      detail::write_decompose_csv(result.directory / "decomposition.csv", rows);
      m.outputs.push_back("decomposition.csv");
      break;
    }
    case RunMode::headline_check: {
      const auto h = analysis::headline_check(cfg.params.lambda, cfg.params.nbar, cfg.headline_reference);
      auto out = detail::open_output(result.directory / "headline.json");
      out << detail::headline_json(h).dump(2) << "\n";
      m.outputs.push_back("headline.json");
      log << "dV_ground (n=0)            = " << format_real(h.dip_ground) << "\n"
          << "dV_thermal quantum         = " << format_real(h.dip_thermal_quantum) << "\n"
          << "dV_thermal semiclassical   = " << format_real(h.dip_thermal_semiclassical) << "\n"
          << "reference thermal dV       = " << format_real(h.reference_thermal) << "\n"
          << "residual factor            = " << format_real(h.residual_factor) << "\n";
      break;
    }
  }

  m.exit_status = m.engines_failed_everywhere.empty() ? 0 : 1;
  m.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto out = detail::open_output(manifest_path);
  out << to_json(m).dump(2) << "\n";
  result.exit_status = m.exit_status;
  return result;
}

}  // namespace revival::io
