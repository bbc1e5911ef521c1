#include "mmq/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "mmq/errors.hpp"

namespace mmq {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw invalid_input(path + ": " + what);
}

const nlohmann::json& member(const nlohmann::json& j, const std::string& parent,
                             const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) fail(parent.empty() ? key : parent + "." + key, "missing");
  return *it;
}

double number_at(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double get_number(const nlohmann::json& j, const std::string& parent,
                  const std::string& key) {
  return number_at(member(j, parent, key), parent + "." + key);
}

double get_number_or(const nlohmann::json& j, const std::string& parent,
                     const std::string& key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  return number_at(*it, parent + "." + key);
}

std::string get_string(const nlohmann::json& j, const std::string& parent,
                       const std::string& key) {
  const nlohmann::json& v = member(j, parent, key);
  if (!v.is_string()) fail(parent + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> expand_axis(const nlohmann::json& spec,
                                const std::string& path) {
  if (spec.is_array()) {
    std::vector<double> out;
    out.reserve(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i)
      out.push_back(number_at(spec[i], path + "[" + std::to_string(i) + "]"));
    if (out.empty()) fail(path, "axis must hold at least one value");
    return out;
  }
  if (!spec.is_object()) fail(path, "expected {start, stop, count} or a value array");
  if (spec.contains("values")) return expand_axis(spec["values"], path + ".values");

  double start = get_number(spec, path, "start");
  double stop = get_number(spec, path, "stop");
  double count_raw = get_number(spec, path, "count");
  if (count_raw < 1 || count_raw != std::floor(count_raw))
    fail(path + ".count", "expected a positive integer");
  auto count = static_cast<std::size_t>(count_raw);
  if (count == 1) {
    if (stop != start) fail(path, "count 1 requires stop == start");
    return {start};
  }
  if (stop <= start) fail(path, "stop must exceed start");
  std::vector<double> out(count);
  double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = start + step * static_cast<double>(i);
  out.back() = stop;
  return out;
}

DeviceParams parse_device(const nlohmann::json& j) {
  if (!j.is_object()) fail("device", "expected an object");
  DeviceParams p;
  p.E_J = get_number(j, "device", "E_J");
  p.E_C = get_number(j, "device", "E_C");
  p.g = get_number(j, "device", "g");
  p.f_RR_bare = get_number(j, "device", "f_RR_bare");
  p.kappa = get_number(j, "device", "kappa");
  p.f01 = get_number(j, "device", "f01");
  p.alpha = get_number(j, "device", "alpha");
  p.chi = get_number(j, "device", "chi");
  p.T1 = get_number(j, "device", "T1");
  p.Tphi = get_number(j, "device", "Tphi");
  p.temperature = get_number(j, "device", "temperature");
  p.Delta = get_number_or(j, "device", "Delta", p.f01 - p.f_RR_bare);
  p.C_J = get_number_or(j, "device", "C_J", 0);
  p.C_Q = get_number_or(j, "device", "C_Q", 0);
  p.J_c = get_number_or(j, "device", "J_c", 0);
  p.A_J = get_number_or(j, "device", "A_J", 0);
  try {
    validate_device(p);
  } catch (const invalid_input& e) {
    fail("device", e.what());
  }
  return p;
}

DynamicsSettings parse_dynamics(const nlohmann::json& root) {
  DynamicsSettings s;
  auto it = root.find("dynamics");
  if (it == root.end()) return s;
  const nlohmann::json& j = *it;
  if (!j.is_object()) fail("dynamics", "expected an object");
  double nq = get_number_or(j, "dynamics", "N_q", s.N_q);
  double nr = get_number_or(j, "dynamics", "N_r", s.N_r);
  if (nq < 1 || nq != std::floor(nq)) fail("dynamics.N_q", "expected a positive integer");
  if (nr < 1 || nr != std::floor(nr)) fail("dynamics.N_r", "expected a positive integer");
  s.N_q = static_cast<int>(nq);
  s.N_r = static_cast<int>(nr);
  s.dt = get_number_or(j, "dynamics", "dt", s.dt);
  if (s.dt <= 0) fail("dynamics.dt", "must be positive");
  s.nbar = get_number_or(j, "dynamics", "nbar", s.nbar);
  if (s.nbar < 0) fail("dynamics.nbar", "must be nonnegative");
  double mp = get_number_or(j, "dynamics", "max_points", static_cast<double>(s.max_points));
  if (mp < 1 || mp != std::floor(mp)) fail("dynamics.max_points", "expected a positive integer");
  s.max_points = static_cast<std::size_t>(mp);
  return s;
}

}  // namespace

std::string config_hash(const nlohmann::json& j) {
  std::string text = j.dump();  // nlohmann objects iterate in sorted key order
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_run_config(const nlohmann::json& j) {
  if (!j.is_object()) throw invalid_input("config: expected a JSON object");
  RunConfig cfg;
  cfg.canonical = j;
  cfg.hash = config_hash(j);
  cfg.experiment = get_string(j, "", "experiment");
  cfg.device = parse_device(member(j, "", "device"));
  cfg.dynamics = parse_dynamics(j);

  const nlohmann::json& axes = member(j, "", "axes");
  if (!axes.is_object()) fail("axes", "expected an object");
  for (auto it = axes.begin(); it != axes.end(); ++it)
    cfg.axes[it.key()] = expand_axis(it.value(), "axes." + it.key());

  if (auto it = j.find("noise"); it != j.end()) {
    const nlohmann::json& n = *it;
    if (!n.is_object()) fail("noise", "expected an object");
    cfg.noise_amplitude = get_number_or(n, "noise", "amplitude", 0.0);
    if (cfg.noise_amplitude < 0) fail("noise.amplitude", "must be nonnegative");
    double seed = get_number_or(n, "noise", "seed", 1.0);
    if (seed < 0 || seed != std::floor(seed)) fail("noise.seed", "expected a nonnegative integer");
    cfg.noise_seed = static_cast<std::uint64_t>(seed);
  }

  if (auto it = j.find("options"); it != j.end()) {
    if (!it->is_object()) fail("options", "expected an object");
    cfg.options = *it;
  } else {
    cfg.options = nlohmann::json::object();
  }

  if (auto it = j.find("fits"); it != j.end()) {
    if (!it->is_array()) fail("fits", "expected an array of fit names");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const nlohmann::json& f = (*it)[i];
      if (!f.is_string()) fail("fits[" + std::to_string(i) + "]", "expected a string");
      cfg.fits.push_back(f.get<std::string>());
    }
  }

  if (auto it = j.find("output"); it != j.end()) {
    const nlohmann::json& out = *it;
    if (!out.is_object()) fail("output", "expected an object");
    if (out.contains("directory")) cfg.output_dir = get_string(out, "output", "directory");
    if (auto ft = out.find("formats"); ft != out.end()) {
      if (!ft->is_array()) fail("output.formats", "expected an array");
      for (std::size_t i = 0; i < ft->size(); ++i) {
        const nlohmann::json& f = (*ft)[i];
        if (!f.is_string()) fail("output.formats[" + std::to_string(i) + "]", "expected a string");
        cfg.formats.push_back(f.get<std::string>());
      }
    }
  }
  if (cfg.output_dir.empty()) cfg.output_dir = "out/" + cfg.experiment;
  if (cfg.formats.empty()) cfg.formats = {"csv"};
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid_input(path + ": " + e.what());
  }
  return parse_run_config(j);
}

}  // namespace mmq
