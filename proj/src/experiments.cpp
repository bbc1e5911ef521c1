#include "mmq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mmq/constants.hpp"
#include "mmq/errors.hpp"
#include "mmq/operators.hpp"

namespace mmq {

namespace {

void require_axis(const std::vector<double>& v, const char* who, const char* axis) {
  if (v.empty()) throw invalid_input(std::string(who) + ": empty " + axis + " grid");
  for (double x : v)
    if (!std::isfinite(x))
      throw invalid_input(std::string(who) + ": non-finite value in " + axis + " grid");
}

void require_nonnegative(const std::vector<double>& v, const char* who, const char* axis) {
  for (double x : v)
    if (x < 0)
      throw invalid_input(std::string(who) + ": negative value in " + axis + " grid");
}

void guard_points(std::size_t n, const DynamicsSettings& s, const char* who) {
  if (n > s.max_points) {
    std::ostringstream os;
    os << who << ": sweep of " << n << " points exceeds the limit of " << s.max_points
       << "; coarsen the grid or raise max_points";
    throw resource_error(os.str());
  }
}

double effective_T2(const DeviceParams& p) {
  double inv = 0;
  if (std::isfinite(p.T1)) inv += 1.0 / (2.0 * p.T1);
  if (std::isfinite(p.Tphi)) inv += 1.0 / p.Tphi;
  return inv > 0 ? 1.0 / inv : std::numeric_limits<double>::infinity();
}

// Boltzmann weight of |1> relative to |0>.
double thermal_weight(const DeviceParams& p) {
  if (p.temperature <= 0) return 0;
  const double p1 = thermal_population(p.f01, p.temperature);
  return p1 / (1.0 - p1);
}

double lorentzian_dip(double f, double center, double kappa) {
  const double x = 2.0 * (f - center) / kappa;
  return 1.0 - 1.0 / (1.0 + x * x);
}

PulseEnvelope resolved_template(const PulseEnvelope* tmpl, double area_radians) {
  PulseEnvelope pe;
  pe.tau = 2.0;
  pe.sigma = 0.5;
  if (tmpl) pe = *tmpl;
  pe.t_start = 0;
  pe.detuning = 0;
  if (pe.omega0 <= 0) pe.omega0 = amplitude_for_area(pe.tau, pe.sigma, area_radians);
  return pe;
}

struct Workbench {
  HilbertSpec space;
  Operator rho0;
  Operator lowering;
  std::vector<CollapseChannel> channels;
  ReadoutModel model;

  Workbench(const DeviceParams& p, const DynamicsSettings& s, bool damped = true)
      : space{s.N_q, s.N_r},
        rho0(basis_density(space, std::vector<int>(2, 0))),
        lowering(lowering_on(space, 0)),
        model(readout_model(p)) {
    if (damped)
      channels = collapse_channels(p.T1, p.Tphi, p.kappa, s.N_q, s.N_r, s.nbar);
  }
};

double evolve_signal(const Workbench& wb, const Operator& H0,
                     const std::vector<PulseEnvelope>& pulses, const DynamicsSettings& s) {
  TimeDependentHamiltonian tdh{H0, {}};
  double t_end = 0;
  for (const auto& pe : pulses) {
    tdh.drives.push_back(drive_hamiltonian(pe, wb.lowering));
    t_end = std::max(t_end, pe.t_start + pulse_support(pe));
  }
  TimeGrid grid{0, t_end + wb.model.duration, s.dt};
  Trajectory traj = evolve(wb.rho0, tdh, wb.channels, grid);
  return readout_signal(traj, wb.model);
}

}  // namespace

ReadoutModel readout_model(const DeviceParams& p) {
  ReadoutModel m;
  m.chi = p.chi;
  m.kappa = p.kappa;
  return m;
}

std::size_t SweepResult::expected_size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

void SweepResult::check_shape() const {
  if (values.size() != expected_size())
    throw invalid_input("sweep result: value count does not match the axis grid");
}

double SweepResult::at(std::size_t i, std::size_t j) const {
  if (axes.size() != 2) throw invalid_input("sweep result: at(i, j) needs exactly two axes");
  if (i >= axes[0].values.size() || j >= axes[1].values.size())
    throw invalid_input("sweep result: index out of range");
  return values[i * axes[1].values.size() + j];
}

double readout_signal(const Trajectory& traj, const ReadoutModel& model) {
  if (!(model.duration > 0)) throw invalid_input("readout: duration must be positive");
  const auto& times = traj.times;
  if (times.size() < 2) throw invalid_input("readout: trajectory has no recorded samples");
  const auto it = traj.records.find("nq");
  if (it == traj.records.end() || it->second.size() != times.size())
    throw invalid_input("readout: trajectory lacks occupation records");
  const std::vector<double>& nq = it->second;

  const double t_end = times.back();
  const double t0 = t_end - model.duration;
  if (t0 < times.front() - 1e-9)
    throw invalid_input("readout: window extends before the start of the trajectory");

  double integral = 0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double ta = times[i], tb = times[i + 1];
    if (tb <= t0) continue;
    const double a = std::max(ta, t0);
    double va = nq[i];
    if (a > ta) {
      const double u = (a - ta) / (tb - ta);
      va = nq[i] + u * (nq[i + 1] - nq[i]);
    }
    integral += 0.5 * (va + nq[i + 1]) * (tb - a);
  }
  const double mean_n = integral / model.duration;
  if (model.mode == ReadoutModel::Mode::proxy) return mean_n;

  if (!(model.kappa > 0) || model.chi == 0)
    throw invalid_input("readout: dispersive mode needs chi and kappa");
  // |S21| change at the ground-state dip for a pull of 2 chi per excitation;
  // linear in the occupation for small chi/kappa, saturating at large pull.
  auto response = [&](double n) {
    const double x = 4.0 * std::abs(model.chi) * n / model.kappa;
    return x / std::sqrt(1.0 + x * x);
  };
  return response(mean_n) / response(1.0);
}

double readout_window_decay(double T1, double duration) {
  if (!(duration > 0)) throw invalid_input("readout: duration must be positive");
  if (!std::isfinite(T1)) return 1.0;
  if (!(T1 > 0)) throw invalid_input("readout: T1 must be positive");
  return (T1 / duration) * (1.0 - std::exp(-duration / T1));
}

double punchout_dip_center(const DeviceParams& p, double power_dB) {
  // Drive photon number crosses n_crit at 0 dB; the dressed pull g^2/Delta
  // interpolates to zero logistically in log photon number.
  const double s = 1.0 / (1.0 + std::pow(10.0, power_dB / 5.0));
  return p.f_RR_bare + dressed_shift(p.g, p.Delta) * s;
}

SweepResult run_punchout(const DeviceParams& p, const std::vector<double>& probe_freq_GHz,
                         const std::vector<double>& power_dB) {
  validate_device(p);
  require_axis(probe_freq_GHz, "run_punchout", "frequency");
  require_axis(power_dB, "run_punchout", "power");

  SweepResult r;
  r.experiment = "punchout";
  r.axes = {{"power_dB", power_dB}, {"frequency_GHz", probe_freq_GHz}};
  r.values.reserve(power_dB.size() * probe_freq_GHz.size());
  for (double P : power_dB) {
    const double center = punchout_dip_center(p, P);
    for (double f : probe_freq_GHz) r.values.push_back(lorentzian_dip(f, center, p.kappa));
  }
  r.meta["dressed_shift_GHz"] = dressed_shift(p.g, p.Delta);
  r.meta["n_crit"] = critical_photon_number(p.g, p.Delta);
  r.meta["kappa_GHz"] = p.kappa;
  r.check_shape();
  return r;
}

double two_tone_hwhm(const DeviceParams& p, double n_s) {
  if (n_s < 0) throw invalid_input("two_tone_hwhm: photon number must be nonnegative");
  const double T2 = effective_T2(p);
  double w2 = n_s * p.g * p.g * p.T1 / T2;
  if (std::isfinite(T2)) w2 += 1.0 / (T2 * T2);
  return std::sqrt(w2) / constants::two_pi;
}

SweepResult run_two_tone(const DeviceParams& p, const std::vector<double>& probe_GHz,
                         const std::vector<double>& drive_photons, TwoToneMode mode,
                         const DynamicsSettings& settings) {
  validate_device(p);
  require_axis(probe_GHz, "run_two_tone", "frequency");
  require_axis(drive_photons, "run_two_tone", "drive-photon");
  require_nonnegative(drive_photons, "run_two_tone", "drive-photon");

  SweepResult r;
  r.experiment = "two_tone";
  r.axes = {{"drive_photons", drive_photons}, {"frequency_GHz", probe_GHz}};
  r.values.reserve(drive_photons.size() * probe_GHz.size());
  const double weight = thermal_weight(p);
  r.meta["thermal_amp_ratio"] = weight;

  if (mode == TwoToneMode::analytic) {
    const double ln2 = std::log(2.0);
    // Lines at f01, the two-photon half point f01 + alpha/2, and the thermal
    // f12 line at f01 + alpha, all with the power-broadened width.
    for (std::size_t i = 0; i < drive_photons.size(); ++i) {
      const double n_s = drive_photons[i];
      const double w = two_tone_hwhm(p, n_s);
      r.meta["hwhm" + std::to_string(i)] = w;
      const double a1 = n_s;
      const double a2 = 0.5 * n_s * n_s;
      const double a3 = n_s * weight;
      for (double f : probe_GHz) {
        double v = 0;
        if (n_s > 0) {
          const double d1 = f - p.f01;
          const double d2 = f - (p.f01 + 0.5 * p.alpha);
          const double d3 = f - (p.f01 + p.alpha);
          v = a1 * std::exp(-ln2 * d1 * d1 / (w * w)) +
              a2 * std::exp(-ln2 * d2 * d2 / (w * w)) +
              a3 * std::exp(-ln2 * d3 * d3 / (w * w));
        }
        r.values.push_back(v);
      }
    }
    r.check_shape();
    return r;
  }

  guard_points(drive_photons.size() * probe_GHz.size(), settings, "run_two_tone");
  DynamicsSettings s = settings;
  s.N_r = 1;  // the resonator is 19 GHz detuned; the probe drives the qubit
  if (s.nbar <= 0 && weight > 0 && weight < 1) s.nbar = weight / (1.0 - weight);
  HilbertSpec space{s.N_q, s.N_r};
  const Operator low = lowering_on(space, 0);
  const Operator num = number_on(space, 0);
  const auto channels = collapse_channels(p.T1, p.Tphi, p.kappa, s.N_q, s.N_r, s.nbar);

  for (double n_s : drive_photons) {
    // Drive with the saturation amplitude that reproduces the broadening law.
    const double env = p.g * std::sqrt(n_s) / constants::two_pi;
    for (double f : probe_GHz) {
      Operator H = build_rotating_hamiltonian(p, f, s.N_q, s.N_r);
      if (env > 0) {
        H.matrix += 0.5 * env * (low.matrix + low.matrix.adjoint());
      }
      const Operator rho = steady_state(H, channels);
      r.values.push_back(expectation_real(rho, num));
    }
  }
  r.check_shape();
  return r;
}

SweepResult run_rabi_time(const DeviceParams& p, const PulseEnvelope& pulse_template,
                          const std::vector<double>& tau_ns,
                          const std::vector<double>& drive_freq_GHz,
                          const DynamicsSettings& settings) {
  validate_device(p);
  require_axis(tau_ns, "run_rabi_time", "tau");
  require_nonnegative(tau_ns, "run_rabi_time", "tau");
  require_axis(drive_freq_GHz, "run_rabi_time", "frequency");
  if (pulse_template.omega0 <= 0)
    throw invalid_input("run_rabi_time: pulse template needs a positive amplitude");
  guard_points(tau_ns.size() * drive_freq_GHz.size(), settings, "run_rabi_time");

  Workbench wb(p, settings);
  SweepResult r;
  r.experiment = "rabi_time";
  r.axes = {{"frequency_GHz", drive_freq_GHz}, {"tau_ns", tau_ns}};
  r.values.reserve(drive_freq_GHz.size() * tau_ns.size());
  for (double fc : drive_freq_GHz) {
    const Operator H0 = build_rotating_hamiltonian(p, fc, settings.N_q, settings.N_r);
    for (double tau : tau_ns) {
      PulseEnvelope pe = pulse_template;
      pe.tau = tau;
      pe.t_start = 0;
      pe.detuning = 0;
      r.values.push_back(evolve_signal(wb, H0, {pe}, settings));
    }
  }
  r.meta["readout_duration_ns"] = wb.model.duration;
  r.check_shape();
  return r;
}

SweepResult run_chevron_amp_tau(const DeviceParams& p, const PulseEnvelope& pulse_template,
                                const std::vector<double>& amplitude_GHz,
                                const std::vector<double>& tau_ns, double drive_freq_GHz,
                                const DynamicsSettings& settings) {
  validate_device(p);
  require_axis(amplitude_GHz, "run_chevron", "amplitude");
  require_nonnegative(amplitude_GHz, "run_chevron", "amplitude");
  require_axis(tau_ns, "run_chevron", "tau");
  require_nonnegative(tau_ns, "run_chevron", "tau");
  guard_points(amplitude_GHz.size() * tau_ns.size(), settings, "run_chevron");

  Workbench wb(p, settings);
  const Operator H0 = build_rotating_hamiltonian(p, drive_freq_GHz, settings.N_q, settings.N_r);
  SweepResult r;
  r.experiment = "chevron_amp_tau";
  r.axes = {{"amplitude_GHz", amplitude_GHz}, {"tau_ns", tau_ns}};
  r.values.reserve(amplitude_GHz.size() * tau_ns.size());
  for (double amp : amplitude_GHz) {
    for (double tau : tau_ns) {
      PulseEnvelope pe = pulse_template;
      pe.omega0 = amp;
      pe.tau = tau;
      pe.t_start = 0;
      pe.detuning = 0;
      r.values.push_back(amp > 0 ? evolve_signal(wb, H0, {pe}, settings)
                                 : evolve_signal(wb, H0, {}, settings));
    }
  }
  r.meta["drive_freq_GHz"] = drive_freq_GHz;
  r.check_shape();
  return r;
}

SweepResult run_chevron_freq_amp(const DeviceParams& p, const PulseEnvelope& pulse_template,
                                 const std::vector<double>& drive_freq_GHz,
                                 const std::vector<double>& amplitude_GHz,
                                 const DynamicsSettings& settings) {
  validate_device(p);
  require_axis(drive_freq_GHz, "run_chevron", "frequency");
  require_axis(amplitude_GHz, "run_chevron", "amplitude");
  require_nonnegative(amplitude_GHz, "run_chevron", "amplitude");
  guard_points(drive_freq_GHz.size() * amplitude_GHz.size(), settings, "run_chevron");

  Workbench wb(p, settings);
  SweepResult r;
  r.experiment = "chevron_freq_amp";
  r.axes = {{"frequency_GHz", drive_freq_GHz}, {"amplitude_GHz", amplitude_GHz}};
  r.values.reserve(drive_freq_GHz.size() * amplitude_GHz.size());
  for (double fc : drive_freq_GHz) {
    const Operator H0 = build_rotating_hamiltonian(p, fc, settings.N_q, settings.N_r);
    for (double amp : amplitude_GHz) {
      PulseEnvelope pe = pulse_template;
      pe.omega0 = amp;
      pe.t_start = 0;
      pe.detuning = 0;
      r.values.push_back(amp > 0 ? evolve_signal(wb, H0, {pe}, settings)
                                 : evolve_signal(wb, H0, {}, settings));
    }
  }
  r.meta["tau_ns"] = pulse_template.tau;
  r.check_shape();
  return r;
}

SweepResult run_t1(const DeviceParams& p, const std::vector<double>& delay_ns,
                   const PulseEnvelope* pulse_template, const DynamicsSettings& settings) {
  validate_device(p);
  require_axis(delay_ns, "run_t1", "delay");
  require_nonnegative(delay_ns, "run_t1", "delay");
  guard_points(delay_ns.size(), settings, "run_t1");

  const PulseEnvelope pi_pulse = resolved_template(pulse_template, constants::pi);
  const double support = pulse_support(pi_pulse);

  Workbench wb(p, settings);
  const Operator H0 = build_rotating_hamiltonian(p, p.f01, settings.N_q, settings.N_r);

  SweepResult r;
  r.experiment = "t1";
  r.axes = {{"delay_ns", delay_ns}};
  r.meta["pi_pulse_amplitude_GHz"] = pi_pulse.omega0;
  r.meta["readout_decay_factor"] = readout_window_decay(p.T1, wb.model.duration);

  // Inversion quality, for normalizing the delay-zero signal.
  {
    TimeDependentHamiltonian tdh{H0, {drive_hamiltonian(pi_pulse, wb.lowering)}};
    TimeGrid grid{0, support, settings.dt};
    Trajectory traj = evolve(wb.rho0, tdh, wb.channels, grid);
    r.meta["pi_pulse_p1"] = traj.records.at("P1").back();
  }

  r.values.reserve(delay_ns.size());
  for (double d : delay_ns) {
    TimeDependentHamiltonian seq{H0, {drive_hamiltonian(pi_pulse, wb.lowering)}};
    TimeGrid g{0, support + d + wb.model.duration, settings.dt};
    Trajectory t = evolve(wb.rho0, seq, wb.channels, g);
    r.values.push_back(readout_signal(t, wb.model));
  }
  r.check_shape();
  return r;
}

SweepResult run_ramsey(const DeviceParams& p, const std::vector<double>& delay_ns,
                       double phase_advance_GHz, const PulseEnvelope* pulse_template,
                       const DynamicsSettings& settings) {
  validate_device(p);
  require_axis(delay_ns, "run_ramsey", "delay");
  require_nonnegative(delay_ns, "run_ramsey", "delay");
  guard_points(delay_ns.size(), settings, "run_ramsey");
  if (!std::isfinite(phase_advance_GHz) || phase_advance_GHz < 0)
    throw invalid_input("run_ramsey: phase advance must be a nonnegative frequency");

  const PulseEnvelope half = resolved_template(pulse_template, 0.5 * constants::pi);
  const double support = pulse_support(half);

  Workbench wb(p, settings);
  const Operator H0 = build_rotating_hamiltonian(p, p.f01, settings.N_q, settings.N_r);

  SweepResult r;
  r.experiment = "ramsey";
  r.axes = {{"delay_ns", delay_ns}};
  r.meta["phase_advance_GHz"] = phase_advance_GHz;
  r.meta["half_pulse_amplitude_GHz"] = half.omega0;
  r.meta["readout_decay_factor"] = readout_window_decay(p.T1, wb.model.duration);
  r.values.reserve(delay_ns.size());
  for (double d : delay_ns) {
    PulseEnvelope first = half;
    first.t_start = 0;
    PulseEnvelope second = half;
    second.t_start = support + d;
    second.phase = half.phase + constants::two_pi * phase_advance_GHz * d;
    r.values.push_back(evolve_signal(wb, H0, {first, second}, settings));
  }
  r.check_shape();
  return r;
}

double calibrated_pi_amplitude(const DeviceParams& p, double tau, double sigma,
                               const DynamicsSettings& settings) {
  validate_device(p);
  Workbench wb(p, settings, /*damped=*/false);
  const Operator H0 = build_rotating_hamiltonian(p, p.f01, settings.N_q, settings.N_r);

  auto p1_after = [&](double amp) {
    PulseEnvelope pe;
    pe.tau = tau;
    pe.sigma = sigma;
    pe.omega0 = amp;
    TimeDependentHamiltonian tdh{H0, {drive_hamiltonian(pe, wb.lowering)}};
    TimeGrid grid{0, pulse_support(pe), settings.dt};
    return evolve(wb.rho0, tdh, wb.channels, grid).records.at("P1").back();
  };

  const double seed = amplitude_for_area(tau, sigma, constants::pi);
  const int n_scan = 21;
  std::vector<double> amps(n_scan), vals(n_scan);
  for (int i = 0; i < n_scan; ++i) {
    amps[static_cast<std::size_t>(i)] = seed * (0.7 + 0.6 * i / (n_scan - 1));
    vals[static_cast<std::size_t>(i)] = p1_after(amps[static_cast<std::size_t>(i)]);
  }
  const auto best_it = std::max_element(vals.begin(), vals.end());
  const auto b = static_cast<std::size_t>(std::distance(vals.begin(), best_it));
  if (b == 0 || b + 1 == static_cast<std::size_t>(n_scan)) return amps[b];

  // Parabolic refinement through the best three samples.
  const double x1 = amps[b - 1], x2 = amps[b], x3 = amps[b + 1];
  const double y1 = vals[b - 1], y2 = vals[b], y3 = vals[b + 1];
  const double denom = (x2 - x1) * (y2 - y3) - (x2 - x3) * (y2 - y1);
  if (denom == 0) return x2;
  const double x_ref = x2 - 0.5 *
                                ((x2 - x1) * (x2 - x1) * (y2 - y3) -
                                 (x2 - x3) * (x2 - x3) * (y2 - y1)) /
                                denom;
  if (!std::isfinite(x_ref) || x_ref <= x1 || x_ref >= x3) return x2;
  return p1_after(x_ref) >= y2 ? x_ref : x2;
}

void add_noise(SweepResult& result, double amplitude, std::uint64_t seed) {
  if (amplitude < 0) throw invalid_input("add_noise: amplitude must be nonnegative");
  if (amplitude == 0 || result.values.empty()) return;
  double peak = 0;
  for (double v : result.values) peak = std::max(peak, std::abs(v));
  if (peak == 0) peak = 1.0;
  const double scale = amplitude * peak;

  // Box-Muller on the raw engine keeps the stream identical across platforms.
  std::mt19937_64 rng(seed);
  auto uniform = [&]() { return (rng() >> 11) * (1.0 / 9007199254740992.0); };
  std::size_t i = 0;
  while (i < result.values.size()) {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    result.values[i++] += scale * radius * std::cos(constants::two_pi * u2);
    if (i < result.values.size())
      result.values[i++] += scale * radius * std::sin(constants::two_pi * u2);
  }
  result.meta["noise_amplitude"] = amplitude;
}

}  // namespace mmq
