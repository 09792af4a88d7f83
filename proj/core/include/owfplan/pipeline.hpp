#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace owfplan {

// Bad inputs, missing upstream artifacts, schema mismatches: exit code 1.
// Anything else that throws is an internal error: exit code 2.
class UserError : public std::runtime_error {
 public:
  explicit UserError(const std::string& what) : std::runtime_error(what) {}
};

// Everything a pipeline stage needs to know about one run.
struct RunManifest {
  std::string config_path;
  std::string data_manifest_path;  // ingest only
  std::vector<std::string> cases{"ccd"};
  std::uint64_t seed = 0;
  bool seed_overridden = false;
  std::string out_dir = "out";
  bool dump_program = false;
};

// Stage artifacts inside out_dir.
std::string dayset_path(const RunManifest& m);
std::string tree_path(const RunManifest& m);
std::string solution_path(const RunManifest& m, const std::string& case_label);

void cmd_ingest(const RunManifest& m);
void cmd_scengen(const RunManifest& m);
void cmd_solve(const RunManifest& m);

struct FreqcheckSelection {
  int da_node = 0;
  int leaf = 0;
  int quarter = -1;  // -1: quarter with the largest scheduled up reserve
};
void cmd_freqcheck(const RunManifest& m, const FreqcheckSelection& sel);

void cmd_report(const RunManifest& m);

}  // namespace owfplan
