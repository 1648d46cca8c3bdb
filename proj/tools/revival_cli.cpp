#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "revival/io/config.hpp"
#include "revival/io/manifest.hpp"
#include "revival/io/runner.hpp"

namespace {

namespace fs = std::filesystem;
using revival::io::json;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct DocumentArgs {
  std::string config;
  std::string preset;
  std::string manifest;
  std::vector<std::string> overrides;
};

void add_document_options(CLI::App* cmd, DocumentArgs& args) {
  cmd->add_option("-c,--config", args.config, "JSON configuration file");
  cmd->add_option("-p,--preset", args.preset, "named preset: headline, desk, ground-state");
  cmd->add_option("--from-manifest", args.manifest, "re-run the configuration recorded in a manifest");
  cmd->add_option("-s,--set", args.overrides, "override a key, e.g. --set params.dimensionless.nbar=2");
}

fs::path manifest_path(const std::string& arg) {
  fs::path p(arg);
  if (fs::is_directory(p)) p /= revival::io::kManifestFile;
  return p;
}

json build_document(const DocumentArgs& args) {
  json doc = json::object();
  if (!args.manifest.empty()) {
    const auto m = revival::io::manifest_from_json(revival::io::load_json_file(manifest_path(args.manifest).string()));
    doc = m.config;
  }
  if (!args.config.empty()) doc.merge_patch(revival::io::load_json_file(args.config));
  if (!args.preset.empty()) doc["preset"] = args.preset;
  for (const auto& o : args.overrides) revival::io::apply_override(doc, o);
  return doc;
}

int cmd_run(const DocumentArgs& args, const std::string& out, bool force, int workers) {
  json doc = build_document(args);
  if (!out.empty()) doc["output"]["directory"] = out;
  if (force) doc["output"]["force"] = true;
  if (workers >= 0) doc["workers"] = workers;

  std::vector<revival::io::Diagnostic> warnings;
  const auto cfg = revival::io::parse(doc, &warnings);
  for (const auto& w : warnings) std::cerr << w.str() << "\n";
  const auto result = revival::io::run(cfg, std::cout);
  for (const auto& file : result.manifest.outputs) std::cout << (result.directory / file).string() << "\n";
  std::cout << (result.directory / revival::io::kManifestFile).string() << "\n";
  if (result.exit_status != 0) {
    std::cerr << "engines failed at every point:";
    for (const auto& e : result.manifest.engines_failed_everywhere) std::cerr << " " << e;
    std::cerr << "\n";
  }
  return result.exit_status;
}

int cmd_validate(const DocumentArgs& args) {
  const auto diag = revival::io::validate(build_document(args));
  bool failed = false;
  for (const auto& d : diag) {
    std::cout << d.str() << "\n";
    failed = failed || d.is_error();
  }
  if (!failed) std::cout << "ok\n";
  return failed ? kExitConfig : 0;
}

int cmd_show_manifest(const std::string& path) {
  const auto m = revival::io::manifest_from_json(revival::io::load_json_file(manifest_path(path).string()));
  std::cout << revival::io::to_json(m).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherence revival simulator for a qubit coupled to an oscillator"};
  app.require_subcommand(1);

  DocumentArgs run_args;
  std::string out;
  bool force = false;
  int workers = -1;
  auto* run = app.add_subcommand("run", "run a configuration and write its outputs");
  add_document_options(run, run_args);
  run->add_option("-o,--out", out, "output directory (relative paths resolve under $REVIVAL_OUTPUT_ROOT)");
  run->add_flag("-f,--force", force, "overwrite an existing output directory");
  run->add_option("-j,--workers", workers, "worker threads, 0 for all cores");

  DocumentArgs validate_args;
  auto* validate = app.add_subcommand("validate", "check a configuration without running it");
  add_document_options(validate, validate_args);

  std::string manifest;
  auto* show = app.add_subcommand("show-manifest", "print a run manifest");
  show->add_option("manifest", manifest, "manifest.json or the directory holding it")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_args, out, force, workers);
    if (*validate) return cmd_validate(validate_args);
    if (*show) return cmd_show_manifest(manifest);
  } catch (const revival::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
