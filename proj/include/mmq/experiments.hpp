#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mmq/device.hpp"
#include "mmq/lindblad.hpp"
#include "mmq/pulse.hpp"

namespace mmq {

struct ReadoutModel {
  enum class Mode { proxy, dispersive_shift };
  double chi = 0;        // GHz, qubit-state pull of the resonator
  double kappa = 0;      // GHz, resonator linewidth (dispersive mode only)
  double duration = 20;  // ns
  Mode mode = Mode::proxy;
};

ReadoutModel readout_model(const DeviceParams& p);

struct SweepAxis {
  std::string name;  // "frequency_GHz", "power_dB", "delay_ns", ...
  std::vector<double> values;
};

struct SweepResult {
  std::string experiment;
  std::string params_hash;
  std::vector<SweepAxis> axes;
  std::vector<double> values;  // row major, last axis fastest
  std::map<std::string, double> meta;

  std::size_t expected_size() const;
  void check_shape() const;
  // Value at (i, j) for a two-axis sweep.
  double at(std::size_t i, std::size_t j) const;
};

struct DynamicsSettings {
  int N_q = 3;
  int N_r = 1;
  double dt = 0.002;           // ns
  double nbar = 0;             // thermal excitation quanta on the qubit
  std::size_t max_points = 10000;  // sweep-size guard for integrator-backed runs
};

// Mean qubit occupation over the trailing readout window, normalized so a
// steady |1> reads 1.0. Dispersive mode maps occupation through the
// resonator-pull response instead of using it directly.
double readout_signal(const Trajectory& traj, const ReadoutModel& model);

// Analytic decay of the window average for a state prepared just before
// readout: (T1/D)(1 - exp(-D/T1)).
double readout_window_decay(double T1, double duration);

// Single-tone dip center vs probe power (dB relative to the power at which
// the drive holds n_crit photons in the resonator).
double punchout_dip_center(const DeviceParams& p, double power_dB);

SweepResult run_punchout(const DeviceParams& p, const std::vector<double>& probe_freq_GHz,
                         const std::vector<double>& power_dB);

enum class TwoToneMode { analytic, master_equation };

// Half width at half maximum of the spectroscopic line at drive photon
// number n_s: (2 pi sigma)^2 = 1/T2^2 + n_s g^2 T1/T2.
double two_tone_hwhm(const DeviceParams& p, double n_s);

SweepResult run_two_tone(const DeviceParams& p, const std::vector<double>& probe_GHz,
                         const std::vector<double>& drive_photons, TwoToneMode mode,
                         const DynamicsSettings& settings = {});

SweepResult run_rabi_time(const DeviceParams& p, const PulseEnvelope& pulse_template,
                          const std::vector<double>& tau_ns,
                          const std::vector<double>& drive_freq_GHz,
                          const DynamicsSettings& settings = {});

SweepResult run_chevron_amp_tau(const DeviceParams& p, const PulseEnvelope& pulse_template,
                                const std::vector<double>& amplitude_GHz,
                                const std::vector<double>& tau_ns, double drive_freq_GHz,
                                const DynamicsSettings& settings = {});

SweepResult run_chevron_freq_amp(const DeviceParams& p, const PulseEnvelope& pulse_template,
                                 const std::vector<double>& drive_freq_GHz,
                                 const std::vector<double>& amplitude_GHz,
                                 const DynamicsSettings& settings = {});

// Inversion pulse, wait, readout. pulse_template omega0 <= 0 requests the
// analytic pi-pulse amplitude for (tau, sigma).
SweepResult run_t1(const DeviceParams& p, const std::vector<double>& delay_ns,
                   const PulseEnvelope* pulse_template = nullptr,
                   const DynamicsSettings& settings = {});

// Half pulse, wait t, half pulse with phase 2 pi phase_advance t, readout.
SweepResult run_ramsey(const DeviceParams& p, const std::vector<double>& delay_ns,
                       double phase_advance_GHz = 0.320,
                       const PulseEnvelope* pulse_template = nullptr,
                       const DynamicsSettings& settings = {});

// Amplitude that maximizes P1 after one pulse, found by scanning the
// undamped dynamics around the analytic seed and refining parabolically.
double calibrated_pi_amplitude(const DeviceParams& p, double tau, double sigma,
                               const DynamicsSettings& settings = {});

// Additive Gaussian noise, sigma = amplitude * max|values|, deterministic
// for a given seed.
void add_noise(SweepResult& result, double amplitude, std::uint64_t seed);

}  // namespace mmq
