#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mmq/config.hpp"
#include "mmq/experiments.hpp"

namespace mmq {

inline constexpr const char* kCodeVersion = "0.1.0";

struct ExperimentInfo {
  std::string id;
  std::string axes;    // required axis names, listed outer first
  std::string figure;  // which measurement the output corresponds to
};

const std::vector<ExperimentInfo>& experiment_registry();

// One line per experiment: id, figure, axes.
std::string list_experiments();

struct RunRecord {
  std::string config_hash;
  std::string record_path;   // where record.json landed
  double wall_seconds = 0;   // console reporting only, never persisted
  SweepResult result;
  nlohmann::json fits;
};

// Executes the configured experiment, applies noise and fits, and writes
// record.json under the config's output directory. Relative directories are
// rooted at $MMQSIM_OUTPUT_ROOT when that variable is set.
RunRecord run_config(const RunConfig& cfg);

// Resolve the output directory the same way run_config does.
std::string resolve_output_dir(const std::string& dir);

nlohmann::json record_json(const RunConfig& cfg, const SweepResult& result,
                           const nlohmann::json& fits);

// Reads a persisted record and writes plot-ready files into out_dir
// (defaults to the record's directory). Returns the paths written.
// format: "csv" (trace or grid + long form, with a metadata sidecar)
// or "json" (single plotdata file).
std::vector<std::string> emit_plotdata(const std::string& record_path,
                                       const std::string& format,
                                       const std::string& out_dir = "");

}  // namespace mmq
