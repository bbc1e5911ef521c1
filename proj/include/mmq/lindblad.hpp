#pragma once

#include <map>
#include <string>
#include <vector>

#include "mmq/operators.hpp"
#include "mmq/pulse.hpp"

namespace mmq {

struct CollapseChannel {
  Operator op;
  double rate = 0;  // 1/ns
};

// Relaxation b at 1/T1, pure dephasing b'b at 2/Tphi (so the two-level
// coherence decays at exactly 1/Tphi), resonator decay a at 2 pi kappa.
// Infinite T1 or Tphi disables the channel; nbar > 0 adds thermal
// excitation b' at nbar/T1.
std::vector<CollapseChannel> collapse_channels(double T1, double Tphi, double kappa,
                                               int N_q, int N_r, double nbar = 0.0);

struct TimeGrid {
  double t0 = 0;
  double t1 = 0;
  double dt = 0.002;  // ns

  int steps() const;  // full steps of dt covering [t0, t1]
  void validate() const;
};

struct TimeDependentHamiltonian {
  Operator static_part;
  std::vector<DriveTerm> drives;

  void evaluate(double t, Eigen::MatrixXcd& out) const;
};

struct Trajectory {
  TimeGrid grid;
  HilbertSpec space;
  std::vector<double> times;
  // "nq", "P0", "P1", "P2", "nr" sampled at `times`.
  std::map<std::string, std::vector<double>> records;
  std::vector<double> state_times;
  std::vector<Eigen::MatrixXcd> states;
  double max_step_trace_drift = 0;  // largest per-step |tr - 1| seen
  double final_trace_drift = 0;     // |tr - 1| at the end (renormalization off)
};

struct EvolveOptions {
  int record_stride = 1;
  int state_stride = 0;  // 0 keeps only the first and last state
  bool renormalize = true;
  bool validate_states = true;
  double drift_error_tol = 1e-6;
};

// -i 2 pi [H, rho] + sum_k rate_k (L rho L' - {L'L, rho}/2); H in GHz, t in ns.
Operator lindblad_derivative(const Operator& H, const std::vector<CollapseChannel>& channels,
                             const Operator& rho);

// Fixed-step RK4 integration of the master equation. Per-step trace drift
// beyond drift_error_tol aborts with a suggestion to reduce dt.
Trajectory evolve(const Operator& rho0, const TimeDependentHamiltonian& H,
                  const std::vector<CollapseChannel>& channels, const TimeGrid& grid,
                  const EvolveOptions& opts = {});

// Unique stationary state of the (time-independent) Liouvillian, from the
// vectorized generator with one row replaced by the trace constraint.
Operator steady_state(const Operator& H, const std::vector<CollapseChannel>& channels);

}  // namespace mmq
