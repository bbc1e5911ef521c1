#include "mmq/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "mmq/constants.hpp"
#include "mmq/errors.hpp"
#include "mmq/fitting.hpp"
#include "mmq/purcell.hpp"

namespace mmq {

namespace {

namespace fs = std::filesystem;

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<double>& axis_values(const RunConfig& cfg, const char* name) {
  auto it = cfg.axes.find(name);
  if (it == cfg.axes.end())
    throw invalid_input(std::string("axes.") + name + ": missing (required by " +
                        cfg.experiment + ")");
  return it->second;
}

double opt_number(const nlohmann::json& o, const char* key, double fallback) {
  auto it = o.find(key);
  if (it == o.end()) return fallback;
  if (!it->is_number()) throw invalid_input(std::string("options.") + key + ": expected a number");
  return it->get<double>();
}

std::string opt_string(const nlohmann::json& o, const char* key, const std::string& fallback) {
  auto it = o.find(key);
  if (it == o.end()) return fallback;
  if (!it->is_string()) throw invalid_input(std::string("options.") + key + ": expected a string");
  return it->get<std::string>();
}

PulseEnvelope template_from_options(const nlohmann::json& o) {
  PulseEnvelope t;
  t.tau = opt_number(o, "tau", 2.0);
  t.sigma = opt_number(o, "sigma", 0.5);
  t.omega0 = opt_number(o, "amplitude", 0.0);  // <= 0 asks for the pi amplitude
  return t;
}

SweepResult run_purcell_sweep(const DeviceParams& p, const std::vector<double>& freq_GHz,
                              double C_r_fF) {
  EquivalentCircuit eq = equivalent_circuit(p, C_r_fF);
  const double C_q = eq.junction.C_J;

  SweepResult out;
  out.experiment = "purcell_sweep";
  out.axes = {{"frequency_GHz", freq_GHz}};
  out.values.reserve(freq_GHz.size());
  for (double f : freq_GHz) {
    if (!(f > 0))
      throw invalid_input("axes.frequency_GHz: qubit frequencies must be positive");
    const double omega = constants::two_pi * f * 1e9;
    // Retune the junction inductance at fixed capacitance so the bare qubit
    // lands at f; the coupled mode root nearby is where decay is evaluated.
    JunctionBranch jb{1.0 / (C_q * omega * omega), C_q};
    std::vector<double> roots =
        mode_frequencies(eq.network, jb, 0.95 * omega, 1.05 * omega, 201);
    double eval = omega;
    double best = std::numeric_limits<double>::infinity();
    for (double r : roots) {
      double d = std::abs(r - omega);
      if (d < best) {
        best = d;
        eval = r;
      }
    }
    PurcellEstimate tp = purcell_time(eq.network, jb, eval);
    if (!tp.finite)
      throw numerical_error("purcell_sweep: lossless network gives an unbounded decay time");
    out.values.push_back(tp.seconds * 1e9);
  }
  out.meta["C_r_fF"] = C_r_fF;
  out.meta["C_c_fF"] = eq.C_c_fF;
  out.meta["C_q_fF"] = eq.C_q_fF;
  out.meta["L_r_pH"] = eq.L_r_pH;
  out.meta["R_ohm"] = eq.R_ohm;
  out.meta["Q"] = eq.Q;
  out.meta["analytic_ns_at_f01"] = analytic_purcell(p.g, p.Delta, p.kappa);
  out.check_shape();
  return out;
}

SweepResult dispatch(const RunConfig& cfg) {
  const DeviceParams& p = cfg.device;
  const nlohmann::json& o = cfg.options;

  if (cfg.experiment == "punchout")
    return run_punchout(p, axis_values(cfg, "frequency_GHz"), axis_values(cfg, "power_dB"));

  if (cfg.experiment == "two_tone") {
    std::string mode = opt_string(o, "mode", "analytic");
    TwoToneMode m;
    if (mode == "analytic")
      m = TwoToneMode::analytic;
    else if (mode == "master_equation")
      m = TwoToneMode::master_equation;
    else
      throw invalid_input("options.mode: expected \"analytic\" or \"master_equation\"");
    return run_two_tone(p, axis_values(cfg, "frequency_GHz"), axis_values(cfg, "drive_photons"),
                        m, cfg.dynamics);
  }

  if (cfg.experiment == "rabi_time") {
    PulseEnvelope t = template_from_options(o);
    if (!(t.omega0 > 0))
      throw invalid_input("options.amplitude: rabi_time drives at a fixed positive amplitude");
    return run_rabi_time(p, t, axis_values(cfg, "tau_ns"), axis_values(cfg, "frequency_GHz"),
                         cfg.dynamics);
  }

  if (cfg.experiment == "chevron") {
    std::string mode = opt_string(o, "mode", "amp_tau");
    PulseEnvelope t = template_from_options(o);
    if (mode == "amp_tau")
      return run_chevron_amp_tau(p, t, axis_values(cfg, "amplitude_GHz"),
                                 axis_values(cfg, "tau_ns"),
                                 opt_number(o, "drive_freq", p.f01), cfg.dynamics);
    if (mode == "freq_amp")
      return run_chevron_freq_amp(p, t, axis_values(cfg, "frequency_GHz"),
                                  axis_values(cfg, "amplitude_GHz"), cfg.dynamics);
    throw invalid_input("options.mode: expected \"amp_tau\" or \"freq_amp\"");
  }

  if (cfg.experiment == "t1") {
    PulseEnvelope t = template_from_options(o);
    return run_t1(p, axis_values(cfg, "delay_ns"), &t, cfg.dynamics);
  }

  if (cfg.experiment == "ramsey") {
    PulseEnvelope t = template_from_options(o);
    double advance = opt_number(o, "phase_advance", 0.320);
    return run_ramsey(p, axis_values(cfg, "delay_ns"), advance, &t, cfg.dynamics);
  }

  if (cfg.experiment == "purcell_sweep")
    return run_purcell_sweep(p, axis_values(cfg, "frequency_GHz"),
                             opt_number(o, "C_r_fF", 20.0));

  std::string known;
  for (const ExperimentInfo& e : experiment_registry()) {
    if (!known.empty()) known += ", ";
    known += e.id;
  }
  throw invalid_input("experiment: unknown id \"" + cfg.experiment + "\" (known: " + known + ")");
}

nlohmann::json fit_json(const FitResult& fr) {
  nlohmann::json j;
  j["converged"] = fr.converged;
  j["degenerate"] = fr.degenerate;
  j["iterations"] = fr.iterations;
  j["residual_norm"] = fr.residual_norm;
  if (!fr.note.empty()) j["note"] = fr.note;
  j["values"] = fr.values;
  j["sigmas"] = fr.sigmas;
  return j;
}

void require_one_axis(const SweepResult& r, const char* fit) {
  if (r.axes.size() != 1)
    throw invalid_input(std::string(fit) + " needs a one-dimensional sweep");
}

// Row count over all axes but the innermost.
std::size_t outer_rows(const SweepResult& r) {
  std::size_t rows = 1;
  for (std::size_t k = 0; k + 1 < r.axes.size(); ++k) rows *= r.axes[k].values.size();
  return rows;
}

nlohmann::json peaks_per_trace(const SweepResult& r, int n_peaks) {
  const std::vector<double>& x = r.axes.back().values;
  const std::size_t width = x.size();
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t row = 0; row < outer_rows(r); ++row) {
    std::vector<double> y(r.values.begin() + static_cast<std::ptrdiff_t>(row * width),
                          r.values.begin() + static_cast<std::ptrdiff_t>((row + 1) * width));
    arr.push_back(fit_json(fit_peaks(x, y, n_peaks)));
  }
  return arr;
}

FitResult broadening_from_traces(const SweepResult& r, const DeviceParams& p) {
  if (r.axes.size() != 2 || r.axes.front().name != "drive_photons")
    throw invalid_input("needs a two_tone sweep with a drive_photons outer axis");
  const std::vector<double>& photons = r.axes.front().values;
  const std::vector<double>& freqs = r.axes.back().values;
  const std::size_t width = freqs.size();
  std::vector<double> widths;
  widths.reserve(photons.size());
  for (std::size_t row = 0; row < photons.size(); ++row) {
    std::vector<double> y(r.values.begin() + static_cast<std::ptrdiff_t>(row * width),
                          r.values.begin() + static_cast<std::ptrdiff_t>((row + 1) * width));
    FitResult pk = fit_peaks(freqs, y, 1);
    widths.push_back(pk.values.at("sigma0"));
  }
  return power_broadening_fit(photons, widths, p.g);
}

nlohmann::json run_fits(const RunConfig& cfg, const SweepResult& r) {
  nlohmann::json fits = nlohmann::json::object();
  for (const std::string& name : cfg.fits) {
    try {
      if (name == "exponential") {
        require_one_axis(r, "exponential");
        fits[name] = fit_json(fit_exponential(r.axes.front().values, r.values));
      } else if (name == "damped_cosine") {
        require_one_axis(r, "damped_cosine");
        fits[name] = fit_json(fit_damped_cosine(r.axes.front().values, r.values));
      } else if (name == "peaks") {
        double n = opt_number(cfg.options, "n_peaks", 1.0);
        if (n < 1 || n != std::floor(n))
          throw invalid_input("options.n_peaks: expected a positive integer");
        fits[name] = peaks_per_trace(r, static_cast<int>(n));
      } else if (name == "power_broadening") {
        fits[name] = fit_json(broadening_from_traces(r, cfg.device));
      } else {
        throw invalid_input(
            "unknown fit (expected exponential, damped_cosine, peaks, or power_broadening)");
      }
    } catch (const invalid_input& e) {
      throw invalid_input("fits." + name + ": " + e.what());
    } catch (const numerical_error& e) {
      throw numerical_error("fits." + name + ": " + e.what());
    }
  }
  return fits;
}

std::string axis_unit(const std::string& name) {
  auto pos = name.rfind('_');
  if (pos != std::string::npos) {
    std::string suffix = name.substr(pos + 1);
    if (suffix == "ns" || suffix == "GHz" || suffix == "dB") return suffix;
  }
  return "dimensionless";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw numerical_error("cannot write " + path.string());
  out << text;
  if (!out) throw numerical_error("write failed: " + path.string());
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> registry = {
      {"punchout", "power_dB, frequency_GHz", "Fig 2a"},
      {"two_tone", "drive_photons, frequency_GHz", "Fig 2b-c, Fig S7"},
      {"rabi_time", "frequency_GHz, tau_ns", "Fig 3b"},
      {"chevron", "amplitude_GHz, tau_ns | frequency_GHz, amplitude_GHz", "Fig 3c, Fig S8"},
      {"t1", "delay_ns", "Fig 4a"},
      {"ramsey", "delay_ns", "Fig 4b"},
      {"purcell_sweep", "frequency_GHz", "Fig S9"},
  };
  return registry;
}

std::string list_experiments() {
  std::string out;
  for (const ExperimentInfo& e : experiment_registry()) {
    out += e.id;
    out += " → ";
    out += e.figure;
    out += " (axes: ";
    out += e.axes;
    out += ")\n";
  }
  return out;
}

std::string resolve_output_dir(const std::string& dir) {
  fs::path p(dir);
  if (p.is_absolute()) return p.string();
  const char* root = std::getenv("MMQSIM_OUTPUT_ROOT");
  if (root != nullptr && *root != '\0') return (fs::path(root) / p).string();
  return p.string();
}

nlohmann::json record_json(const RunConfig& cfg, const SweepResult& result,
                           const nlohmann::json& fits) {
  nlohmann::json rec;
  rec["code_version"] = kCodeVersion;
  rec["config_hash"] = cfg.hash;
  rec["experiment"] = cfg.experiment;
  nlohmann::json axes = nlohmann::json::array();
  for (const SweepAxis& a : result.axes) {
    nlohmann::json ja;
    ja["name"] = a.name;
    ja["values"] = a.values;
    axes.push_back(std::move(ja));
  }
  rec["axes"] = std::move(axes);
  rec["values"] = result.values;
  rec["meta"] = result.meta;
  rec["fits"] = fits;
  nlohmann::json dyn;
  dyn["N_q"] = cfg.dynamics.N_q;
  dyn["N_r"] = cfg.dynamics.N_r;
  dyn["dt"] = cfg.dynamics.dt;
  dyn["nbar"] = cfg.dynamics.nbar;
  dyn["max_points"] = cfg.dynamics.max_points;
  dyn["noise_amplitude"] = cfg.noise_amplitude;
  dyn["noise_seed"] = cfg.noise_seed;
  rec["dynamics"] = std::move(dyn);
  return rec;
}

RunRecord run_config(const RunConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  SweepResult result = dispatch(cfg);
  result.params_hash = cfg.hash;
  if (cfg.noise_amplitude > 0) add_noise(result, cfg.noise_amplitude, cfg.noise_seed);
  nlohmann::json fits = run_fits(cfg, result);
  auto stop = std::chrono::steady_clock::now();

  fs::path dir(resolve_output_dir(cfg.output_dir));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw invalid_input("cannot create output directory " + dir.string());
  fs::path record_path = dir / "record.json";
  write_text(record_path, record_json(cfg, result, fits).dump(2) + "\n");

  RunRecord rr;
  rr.config_hash = cfg.hash;
  rr.record_path = record_path.string();
  rr.wall_seconds = std::chrono::duration<double>(stop - start).count();
  rr.result = std::move(result);
  rr.fits = std::move(fits);
  return rr;
}

std::vector<std::string> emit_plotdata(const std::string& record_path, const std::string& format,
                                       const std::string& out_dir) {
  if (format != "csv" && format != "json")
    throw invalid_input("unknown format \"" + format + "\" (expected csv or json)");

  std::ifstream in(record_path);
  if (!in) throw invalid_input("cannot open record: " + record_path);
  nlohmann::json rec;
  try {
    in >> rec;
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid_input(record_path + ": " + e.what());
  }
  if (!rec.is_object() || !rec.contains("axes") || !rec.contains("values") ||
      !rec.contains("experiment"))
    throw invalid_input(record_path + ": not a run record (needs experiment, axes, values)");

  struct Axis {
    std::string name;
    std::vector<double> values;
  };
  std::vector<Axis> axes;
  for (const nlohmann::json& ja : rec["axes"])
    axes.push_back({ja.at("name").get<std::string>(), ja.at("values").get<std::vector<double>>()});
  std::vector<double> values = rec["values"].get<std::vector<double>>();
  std::string stem = rec["experiment"].get<std::string>();
  if (axes.empty() || axes.size() > 2)
    throw invalid_input(record_path + ": plot emission handles one or two axes");
  std::size_t expected = 1;
  for (const Axis& a : axes) expected *= a.values.size();
  if (expected != values.size())
    throw invalid_input(record_path + ": value count does not match the axis grid");

  fs::path dir = out_dir.empty() ? fs::path(record_path).parent_path() : fs::path(out_dir);
  if (dir.empty()) dir = ".";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw invalid_input("cannot create output directory " + dir.string());

  std::vector<std::string> written;

  if (format == "json") {
    nlohmann::json pd;
    pd["axes"] = rec["axes"];
    pd["values"] = rec["values"];
    if (rec.contains("meta")) pd["meta"] = rec["meta"];
    pd["config_hash"] = rec.value("config_hash", "");
    pd["experiment"] = stem;
    fs::path path = dir / (stem + "_plotdata.json");
    write_text(path, pd.dump(2) + "\n");
    written.push_back(path.string());
    return written;
  }

  if (axes.size() == 1) {
    std::string csv = axes[0].name + ",value\n";
    for (std::size_t i = 0; i < values.size(); ++i)
      csv += g17(axes[0].values[i]) + "," + g17(values[i]) + "\n";
    fs::path path = dir / (stem + "_trace.csv");
    write_text(path, csv);
    written.push_back(path.string());
  } else {
    const Axis& outer = axes[0];
    const Axis& inner = axes[1];
    const std::size_t width = inner.values.size();

    // Grid: header row holds the outer axis, each data row one inner value.
    std::string grid = inner.name;
    for (double v : outer.values) grid += "," + g17(v);
    grid += "\n";
    for (std::size_t r = 0; r < width; ++r) {
      grid += g17(inner.values[r]);
      for (std::size_t c = 0; c < outer.values.size(); ++c)
        grid += "," + g17(values[c * width + r]);
      grid += "\n";
    }
    fs::path grid_path = dir / (stem + "_grid.csv");
    write_text(grid_path, grid);
    written.push_back(grid_path.string());

    std::string longform = outer.name + "," + inner.name + ",value\n";
    for (std::size_t c = 0; c < outer.values.size(); ++c)
      for (std::size_t r = 0; r < width; ++r)
        longform += g17(outer.values[c]) + "," + g17(inner.values[r]) + "," +
                    g17(values[c * width + r]) + "\n";
    fs::path long_path = dir / (stem + "_long.csv");
    write_text(long_path, longform);
    written.push_back(long_path.string());
  }

  nlohmann::json meta;
  nlohmann::json names = nlohmann::json::array();
  nlohmann::json units;
  for (const Axis& a : axes) {
    names.push_back(a.name);
    units[a.name] = axis_unit(a.name);
  }
  meta["axis_names"] = std::move(names);
  meta["axis_units"] = std::move(units);
  meta["config_hash"] = rec.value("config_hash", "");
  meta["experiment"] = stem;
  if (rec.contains("meta")) meta["meta"] = rec["meta"];
  if (rec.contains("dynamics")) {
    const nlohmann::json& dyn = rec["dynamics"];
    meta["dt"] = dyn.value("dt", 0.0);
    meta["noise_seed"] = dyn.value("noise_seed", std::uint64_t{0});
    meta["noise_amplitude"] = dyn.value("noise_amplitude", 0.0);
  }
  fs::path meta_path = dir / (stem + "_meta.json");
  write_text(meta_path, meta.dump(2) + "\n");
  written.push_back(meta_path.string());
  return written;
}

}  // namespace mmq
