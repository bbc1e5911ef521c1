#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmq/device.hpp"
#include "mmq/experiments.hpp"

namespace mmq {

struct RunConfig {
  std::string experiment;
  DeviceParams device;
  DynamicsSettings dynamics;
  double noise_amplitude = 0;
  std::uint64_t noise_seed = 1;
  std::map<std::string, std::vector<double>> axes;  // expanded grids
  nlohmann::json options;                           // experiment-specific knobs
  std::vector<std::string> fits;
  std::string output_dir;
  std::vector<std::string> formats;
  std::string hash;        // FNV-1a of the canonical config text
  nlohmann::json canonical;
};

// FNV-1a 64 over the canonical (sorted-key, compact) JSON dump, as hex.
std::string config_hash(const nlohmann::json& j);

// Parse and validate. Errors name the offending field path
// ("axes.delay: stop must exceed start").
RunConfig parse_run_config(const nlohmann::json& j);

RunConfig load_run_config(const std::string& path);

}  // namespace mmq
