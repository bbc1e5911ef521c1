#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mmq/device.hpp"
#include "mmq/operators.hpp"

// This module works in SI units: ohm, henry, farad, rad/s, seconds.
// Element sign convention (time dependence e^{-i omega t}):
//   Y_R = 1/R, Y_L = +i/(omega L), Y_C = -i omega C.

namespace mmq {

struct JunctionBranch {
  double L_J = 0;  // henry
  double C_J = 0;  // farad
};

class CircuitNetwork {
 public:
  CircuitNetwork() = default;  // an open circuit
  static CircuitNetwork resistor(double ohm);
  static CircuitNetwork inductor(double henry);
  static CircuitNetwork capacitor(double farad);
  static CircuitNetwork open_circuit();
  static CircuitNetwork series(std::vector<CircuitNetwork> parts);
  static CircuitNetwork parallel(std::vector<CircuitNetwork> parts);
  // Samples (omega ascending, complex Y); natural cubic interpolation.
  static CircuitNetwork tabulated(std::vector<double> omega_rad_s,
                                  std::vector<complexd> admittance);
  // Three-column text file: frequency GHz, Re Y (S), Im Y (S).
  // Lines whose first non-blank character is '#' are comments.
  static CircuitNetwork from_file(const std::string& path);

  complexd admittance(double omega_rad_s) const;
  complexd impedance(double omega_rad_s) const;
  // Evaluable omega range; elements are (0, inf), tables are their span.
  std::pair<double, double> domain() const;

 private:
  enum class Kind { resistor, inductor, capacitor, open, series, parallel, tabulated };

  Kind kind_ = Kind::open;
  double value_ = 0;
  std::vector<CircuitNetwork> parts_;
  std::vector<double> tab_omega_, tab_re_, tab_im_;
  std::vector<double> curv_re_, curv_im_;  // spline second derivatives
};

// Y_J = -i omega C_J + i/(omega L_J).
complexd junction_admittance(double omega_rad_s, const JunctionBranch& j);

// Roots of Im(Y_net + Y_J) inside the bracket: uniform sign scan plus
// bisection to 1e-9 relative. Sign flips across poles are discarded.
std::vector<double> mode_frequencies(const CircuitNetwork& net, const JunctionBranch& j,
                                     double omega_lo, double omega_hi, int scan_points = 1001);

struct PurcellEstimate {
  double seconds = 0;
  bool finite = true;  // false when Re Y <= 0 leaves the decay unbounded
};

// T_P = (1/2) (-Im Y') / Re Y of the full admittance seen by the junction,
// derivative by central difference (relative step 1e-6, one Richardson pass).
PurcellEstimate purcell_time(const CircuitNetwork& net, const JunctionBranch& j,
                             double omega_q_rad_s);

// Dispersive-limit estimate Delta^2 / (g^2 kappa) / (2 pi), in ns.
double analytic_purcell(double g_GHz, double Delta_GHz, double kappa_GHz);

// Lumped one-port stand-in for the device: junction branch facing a series
// coupling capacitor into a parallel RLC resonator, element values chosen to
// reproduce f01, f_RR, g, and kappa.
struct EquivalentCircuit {
  JunctionBranch junction;
  CircuitNetwork network;
  double C_q_fF = 0;
  double C_c_fF = 0;
  double L_r_pH = 0;
  double R_ohm = 0;
  double Q = 0;
};

EquivalentCircuit equivalent_circuit(const DeviceParams& p, double C_r_fF = 20.0);

}  // namespace mmq
