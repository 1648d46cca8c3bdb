#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "catch_amalgamated.hpp"

#include "revival/io/config.hpp"
#include "revival/io/csv.hpp"
#include "revival/io/manifest.hpp"
#include "revival/io/runner.hpp"

using namespace revival;
using namespace revival::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("revival-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_error(const std::vector<Diagnostic>& diag, const std::string& key) {
  for (const auto& d : diag) {
    if (d.is_error() && d.key == key) return true;
  }
  return false;
}

json small_curve(const fs::path& out) {
  return json{{"preset", "desk"},
              {"grid", {{"steps", 7}}},
              {"mc", {{"samples", 2000}}},
              {"output", {{"directory", out.string()}}}};
}

}  // namespace

TEST_CASE("reals use 17 significant digits", "[io]") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(1e-300) == "1e-300");
  CHECK(format_real(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_optional(std::nullopt).empty());
  CHECK(std::stod(format_real(std::numbers::pi)) == std::numbers::pi);
}

TEST_CASE("CSV quoting round-trips", "[io]") {
  std::ostringstream out;
  CsvWriter csv(out);
  csv.row({"a", "b,c", "say \"hi\"", ""});
  CHECK(out.str() == "a,\"b,c\",\"say \"\"hi\"\"\",\r\n");
  const auto fields = parse_record("a,\"b,c\",\"say \"\"hi\"\"\",");
  REQUIRE(fields.size() == 4);
  CHECK(fields[1] == "b,c");
  CHECK(fields[2] == "say \"hi\"");
  CHECK(fields[3].empty());
}

TEST_CASE("configuration validation", "[io]") {
  CHECK(has_error(validate(json::object()), "params"));
  CHECK(has_error(validate({{"params", {{"dimensionless", {{"lambda", 0.1}, {"nbar", 1.0}}}}}}), "mc.seed"));
  const json both = {{"params", {{"dimensionless", {{"lambda", 0.1}, {"nbar", 1.0}}}, {"physical", json::object()}}}};
  CHECK(has_error(validate(both), "params"));
  json bad = {{"preset", "desk"}, {"grid", {{"steps", 1}, {"unit", "fortnights"}}}, {"mode", "sideways"}};
  const auto diag = validate(bad);
  CHECK(has_error(diag, "grid.steps"));
  CHECK(has_error(diag, "grid.unit"));
  CHECK(has_error(diag, "mode"));
  CHECK(has_error(validate({{"preset", "desk"}, {"truncation", {{"dim", 12}}}}), "truncation.dim"));
  CHECK(has_error(validate({{"preset", "desk"}, {"params", {{"dimensionless", {{"nbar", 1e8}}}}}}), "params"));
  CHECK_THROWS_AS(parse(json::object()), ConfigError);
  CHECK_THROWS_AS(resolve_document({{"preset", "nope"}}), ConfigError);
}

TEST_CASE("large dimensions produce warnings", "[io]") {
  std::vector<Diagnostic> warnings;
  parse({{"preset", "desk"}, {"params", {{"dimensionless", {{"nbar", 40.0}}}}}}, &warnings);
  REQUIRE_FALSE(warnings.empty());
  CHECK(warnings.front().key == "truncation.dim");
}

TEST_CASE("physical parameters are reduced", "[io]") {
  const json doc = {{"mode", "headline-check"},
                    {"params",
                     {{"physical",
                       {{"oscillator_mass", 1e-3},
                        {"atom_mass", 1e-25},
                        {"separation", 1e-4},
                        {"angular_frequency", 62.83},
                        {"temperature", 1e-3}}}}}};
  const auto cfg = parse(doc);
  REQUIRE(cfg.physical);
  CHECK(cfg.params.lambda == reduce(*cfg.physical).lambda);
  CHECK(has_error(validate({{"params", {{"physical", {{"oscillator_mass", -1.0}}}}}}), "params.physical.oscillator_mass"));
}

TEST_CASE("grid units", "[io]") {
  auto cfg = parse({{"preset", "desk"}, {"grid", {{"start", 0}, {"stop", 2}, {"steps", 3}, {"unit", "periods"}}}});
  CHECK(cfg.grid().back().value() == 4.0 * std::numbers::pi);
  cfg = parse({{"preset", "desk"}, {"grid", {{"start", 0}, {"stop", 1.5}, {"steps", 3}}}});
  CHECK(cfg.grid().back().value() == 1.5);
}

TEST_CASE("overrides", "[io]") {
  json doc = {{"preset", "desk"}};
  apply_override(doc, "params.dimensionless.nbar=2.5");
  apply_override(doc, "mode=compare");
  apply_override(doc, "output.svg=false");
  const auto cfg = parse(doc);
  CHECK(cfg.params.nbar == 2.5);
  CHECK(cfg.params.lambda == 0.1);
  CHECK(cfg.mode == RunMode::compare);
  CHECK_FALSE(cfg.write_svg);
  CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "a..b=1"), ConfigError);
}

TEST_CASE("manifest round-trips", "[io]") {
  RunManifest m;
  m.mode = "compare";
  m.config = {{"x", 1}};
  m.resolved = natural_units(0.1, 2.0);
  m.seed = 42;
  m.dim = 64;
  m.started_utc = "2026-01-01T00:00:00Z";
  m.wall_clock_seconds = 1.25;
  m.failed_points = 3;
  m.engines_failed_everywhere = {"mc"};
  m.outputs = {"curve.csv"};
  m.exit_status = 1;
  const json j = to_json(m);
  const auto back = manifest_from_json(json::parse(j.dump()));
  CHECK(to_json(back) == j);
  CHECK(back.resolved.chi == m.resolved.chi);
  CHECK_THROWS_AS(manifest_from_json({{"format", "other"}}), ConfigError);
  json broken = j;
  broken.erase("diagnostics");
  CHECK_THROWS_AS(manifest_from_json(broken), ConfigError);
}

TEST_CASE("curve run writes CSV, SVG and manifest", "[io]") {
  const auto dir = scratch_dir("curve");
  std::ostringstream log;
  const auto result = run(parse(small_curve(dir)), log);
  CHECK(result.exit_status == 0);
  const std::string csv = slurp(dir / "curve.csv");
  CHECK(csv.rfind("omega_t,V_semiclassical,V_quantum_analytic,V_quantum_numeric,V_mc,V_mc_stderr,"
                  "negativity,entropy,weight_separable,flags\r\n", 0) == 0);
  CHECK(fs::exists(dir / "curve.svg"));
  const auto m = manifest_from_json(load_json_file((dir / kManifestFile).string()));
  CHECK(m.seed == std::uint64_t{1});
  CHECK(m.dim > 0);
  // A second run into the same directory needs force.
  CHECK_THROWS_AS(run(parse(small_curve(dir)), log), ConfigError);
  auto forced = small_curve(dir);
  forced["output"]["force"] = true;
  CHECK_NOTHROW(run(parse(forced), log));
  CHECK(slurp(dir / "curve.csv") == csv);
}

TEST_CASE("other modes write their tables", "[io]") {
  std::ostringstream log;
  auto dir = scratch_dir("scan");
  run(parse({{"preset", "desk"}, {"mode", "entanglement-scan"}, {"scan", {{"nbar", {0, 1}}}}, {"output", {{"directory", dir.string()}}}}), log);
  CHECK(fs::exists(dir / "scan.csv"));
  dir = scratch_dir("decompose");
  run(parse({{"preset", "desk"},
             {"mode", "decompose"},
             {"separable", {{"rule", "quadrature"}}},
             {"grid", {{"steps", 3}}},
             {"output", {{"directory", dir.string()}}}}),
      log);
  CHECK(fs::exists(dir / "decomposition.csv"));
  dir = scratch_dir("headline");
  run(parse({{"preset", "headline"}, {"output", {{"directory", dir.string()}}}}), log);
  const auto h = load_json_file((dir / "headline.json").string());
  CHECK(h.at("residual_factor").get<double>() > 9.0);
}

TEST_CASE("engine failing everywhere sets exit status 1", "[io]") {
  const auto dir = scratch_dir("failing");
  std::ostringstream log;
  auto doc = small_curve(dir);
  doc["engines"] = {{"quantum_numeric", false}, {"negativity", false}, {"entropy", true}};
  doc["mc"]["samples"] = 1000;
  // entropy on a thermal state fails at every point but ωt = 2π multiples.
  doc["grid"] = {{"start", 0.5}, {"stop", 1.5}, {"steps", 3}};
  const auto result = run(parse(doc), log);
  CHECK(result.exit_status == 1);
  CHECK(result.manifest.engines_failed_everywhere == std::vector<std::string>{"entropy"});
}

TEST_CASE("relative output directories resolve under the root variable", "[io]") {
  const auto root = scratch_dir("root");
  ::setenv(kOutputRootEnv, root.string().c_str(), 1);
  CHECK(resolve_output_directory("abc") == root / "abc");
  CHECK(resolve_output_directory("/abs/x") == fs::path("/abs/x"));
  ::unsetenv(kOutputRootEnv);
  CHECK(resolve_output_directory("abc") == fs::path("abc"));
}

#ifdef REVIVAL_CLI_PATH
TEST_CASE("CLI re-run from a manifest is byte-identical", "[io][cli]") {
  const auto dir = scratch_dir("cli");
  fs::create_directories(dir);
  const std::string cli = REVIVAL_CLI_PATH;
  const std::string first = cli + " run --preset desk --set grid.steps=9 --set mc.samples=3000 -o " +
                            (dir / "a").string() + " > /dev/null";
  REQUIRE(std::system(first.c_str()) == 0);
  const std::string again = cli + " run --from-manifest " + (dir / "a").string() + " -o " + (dir / "b").string() +
                            " > /dev/null";
  REQUIRE(std::system(again.c_str()) == 0);
  CHECK(slurp(dir / "a" / "curve.csv") == slurp(dir / "b" / "curve.csv"));
  CHECK(std::system((cli + " run --preset desk -o " + (dir / "a").string() + " 2> /dev/null").c_str()) != 0);
  CHECK(std::system((cli + " validate --set mode=curve > /dev/null").c_str()) != 0);
  CHECK(std::system((cli + " show-manifest " + (dir / "a").string() + " > /dev/null").c_str()) == 0);
}
#endif
