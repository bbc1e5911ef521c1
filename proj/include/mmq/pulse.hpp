#pragma once

#include <vector>

#include "mmq/operators.hpp"

namespace mmq {

// Flat-top drive envelope with Gaussian edges. Edges are truncated at
// 2.5 sigma per side, which leaves a step of exp(-2.5^2/2) ~ 4.4% of omega0
// at the support boundary; total support is tau + 5 sigma.
struct PulseEnvelope {
  double tau = 0;       // flat-top length, ns
  double sigma = 1.5;   // Gaussian edge width, ns
  double omega0 = 0;    // peak Rabi rate, GHz
  double detuning = 0;  // carrier minus frame frequency, GHz
  double phase = 0;     // rad
  double t_start = 0;   // ns
};

inline constexpr double kEdgeTruncation = 2.5;  // in units of sigma, per side

// Integral of one full Gaussian edge pair divided by (omega0 * sigma):
// sqrt(2 pi) erf(2.5/sqrt 2) ~ 2.47550.
double edge_area_factor();

double envelope_value(const PulseEnvelope& p, double t);
double pulse_support(const PulseEnvelope& p);

// Bloch rotation angle on resonance, radians: 2 pi * integral of the envelope.
double pulse_area(const PulseEnvelope& p);

// Peak amplitude giving the requested on-resonance rotation angle.
double amplitude_for_area(double tau, double sigma, double area_radians);

// One drive term in the rotating frame:
//   H_d(t) = envelope(t)/2 * (O e^{+i(2 pi detuning t + phase)} + h.c.)
// with O the lowering operator of the driven subsystem on the full space.
struct DriveTerm {
  PulseEnvelope pulse;
  Operator op;
  Operator op_dag;
};

DriveTerm drive_hamiltonian(const PulseEnvelope& p, const Operator& lowering);

// Adds the term's matrix at time t into H (same space as op).
void add_drive(const DriveTerm& d, double t, Eigen::MatrixXcd& H);

struct TargetedPulse {
  enum class Target { qubit, resonator };
  PulseEnvelope pulse;
  Target target = Target::qubit;
};

struct PulseSequence {
  std::vector<TargetedPulse> pulses;
  double readout_start = 0;
  double readout_duration = 20;
  bool allow_overlap = false;
};

// Non-negative times; readout must start after the last qubit pulse ends
// unless overlap is explicitly allowed.
void validate_sequence(const PulseSequence& s);

}  // namespace mmq
