#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "owfplan/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUserError = 1;
constexpr int kExitInternalError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "owfplan - joint export-cable / storage / droop-reserve planning for "
      "offshore wind farms"};
  app.require_subcommand(1);

  owfplan::RunManifest manifest;
  std::string seed_str;

  app.add_option("--config", manifest.config_path,
                 "planning config JSON (falls back to $OWFPLAN_CONFIG_DIR for "
                 "relative names)");
  app.add_option("--out", manifest.out_dir, "artifact directory")
      ->default_val("out");
  app.add_option("--case", manifest.cases,
                 "case labels: ccd, base, no_reserve, no_ess (repeatable)");
  auto* seed_opt =
      app.add_option("--seed", manifest.seed, "override the config seed");

  auto* ingest = app.add_subcommand(
      "ingest", "align historical price/wind CSVs into model-ready days");
  ingest->add_option("--manifest", manifest.data_manifest_path,
                     "data manifest JSON mapping series kinds to CSV paths");

  auto* scengen = app.add_subcommand(
      "scengen", "sample and reduce the price/wind scenario tree");

  auto* solve = app.add_subcommand(
      "solve", "solve the sizing and operation program for each case");
  solve->add_flag("--dump-program", manifest.dump_program,
                  "also write the program text dump per case");

  owfplan::FreqcheckSelection sel;
  auto* freqcheck = app.add_subcommand(
      "freqcheck", "simulate a generator-trip contingency with the solved "
                   "droop schedule");
  freqcheck->add_option("--da-node", sel.da_node, "scenario-tree DA node");
  freqcheck->add_option("--leaf", sel.leaf, "RT leaf within the DA node");
  freqcheck->add_option("--quarter", sel.quarter,
                        "quarter index (default: largest scheduled up reserve)");

  auto* report = app.add_subcommand(
      "report", "emit design/revenue tables and per-scenario traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUserError;
  }
  manifest.seed_overridden = seed_opt->count() > 0;

  try {
    if (ingest->parsed()) {
      owfplan::cmd_ingest(manifest);
    } else if (scengen->parsed()) {
      owfplan::cmd_scengen(manifest);
    } else if (solve->parsed()) {
      owfplan::cmd_solve(manifest);
    } else if (freqcheck->parsed()) {
      owfplan::cmd_freqcheck(manifest, sel);
    } else if (report->parsed()) {
      owfplan::cmd_report(manifest);
    }
  } catch (const owfplan::UserError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUserError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternalError;
  }
  return kExitOk;
}
