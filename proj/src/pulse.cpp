#include "mmq/pulse.hpp"

#include <cmath>

#include "mmq/constants.hpp"
#include "mmq/errors.hpp"

namespace mmq {

double edge_area_factor() {
  static const double f =
      std::sqrt(constants::two_pi) * std::erf(kEdgeTruncation / std::sqrt(2.0));
  return f;
}

double envelope_value(const PulseEnvelope& p, double t) {
  if (p.sigma <= 0) throw invalid_input("envelope: sigma must be positive");
  if (p.tau < 0) throw invalid_input("envelope: tau must be non-negative");
  double edge = kEdgeTruncation * p.sigma;
  double x = t - p.t_start;
  if (x < 0 || x > p.tau + 2.0 * edge) return 0.0;
  if (x < edge) {
    double u = (x - edge) / p.sigma;
    return p.omega0 * std::exp(-0.5 * u * u);
  }
  if (x <= edge + p.tau) return p.omega0;
  double u = (x - edge - p.tau) / p.sigma;
  return p.omega0 * std::exp(-0.5 * u * u);
}

double pulse_support(const PulseEnvelope& p) {
  return p.tau + 2.0 * kEdgeTruncation * p.sigma;
}

double pulse_area(const PulseEnvelope& p) {
  return constants::two_pi * p.omega0 * (p.tau + edge_area_factor() * p.sigma);
}

double amplitude_for_area(double tau, double sigma, double area_radians) {
  if (sigma <= 0) throw invalid_input("amplitude_for_area: sigma must be positive");
  if (tau < 0) throw invalid_input("amplitude_for_area: tau must be non-negative");
  return area_radians / constants::two_pi / (tau + edge_area_factor() * sigma);
}

DriveTerm drive_hamiltonian(const PulseEnvelope& p, const Operator& lowering) {
  return DriveTerm{p, lowering, dagger(lowering)};
}

void add_drive(const DriveTerm& d, double t, Eigen::MatrixXcd& H) {
  double env = envelope_value(d.pulse, t);
  if (env == 0.0) return;
  double theta = constants::two_pi * d.pulse.detuning * t + d.pulse.phase;
  complexd w = 0.5 * env * std::exp(complexd(0.0, theta));
  H.noalias() += w * d.op.matrix;
  H.noalias() += std::conj(w) * d.op_dag.matrix;
}

void validate_sequence(const PulseSequence& s) {
  if (s.readout_duration <= 0) throw invalid_input("sequence: readout duration must be positive");
  if (s.readout_start < 0) throw invalid_input("sequence: readout start must be non-negative");
  double last_qubit_end = 0;
  for (const auto& tp : s.pulses) {
    if (tp.pulse.t_start < 0) throw invalid_input("sequence: pulse start must be non-negative");
    if (tp.target == TargetedPulse::Target::qubit)
      last_qubit_end = std::max(last_qubit_end, tp.pulse.t_start + pulse_support(tp.pulse));
  }
  if (!s.allow_overlap && s.readout_start < last_qubit_end - 1e-12)
    throw invalid_input("sequence: readout overlaps a qubit pulse; set allow_overlap to permit this");
}

}  // namespace mmq
