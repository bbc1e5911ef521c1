#pragma once

#include <string>
#include <vector>

#include "mmq/operators.hpp"

namespace mmq {

// Static device parameter set. Energies are cyclic frequencies in GHz,
// times in ns, capacitances in fF.
struct DeviceParams {
  double E_J = 0;         // Josephson energy / h, GHz
  double E_C = 0;         // charging energy / h, GHz
  double g = 0;           // qubit-resonator coupling, GHz
  double f_RR_bare = 0;   // bare readout resonator frequency, GHz
  double kappa = 0;       // resonator linewidth, GHz
  double f01 = 0;         // qubit transition frequency, GHz
  double alpha = 0;       // anharmonicity, GHz, negative
  double Delta = 0;       // f01 - f_RR_bare, GHz
  double chi = 0;         // dispersive shift, GHz, negative
  double C_J = 0;         // junction capacitance, fF
  double C_Q = 0;         // shunt capacitance, fF
  double J_c = 0;         // critical current density, kA/cm^2
  double A_J = 0;         // junction area, um^2
  double T1 = 0;          // relaxation time, ns
  double Tphi = 0;        // pure dephasing time, ns
  double temperature = 0; // K
};

// Throws invalid_input on hard violations (Delta inconsistent with
// f01 - f_RR_bare beyond 1e-6 GHz, alpha >= 0, kappa <= 0); returns
// soft warnings (E_J/E_C below the transmon regime).
std::vector<std::string> validate_device(const DeviceParams& p);

// Bundled data-sheet parameter set for the 72 GHz device.
DeviceParams reference_device();

struct DerivedValue {
  double value = 0;
  std::string formula;
};

struct DerivedQuantities {
  DerivedValue f01_pred;
  DerivedValue chi_pred;
  DerivedValue dressed_shift;
  DerivedValue n_crit;
  DerivedValue f_plasma;
  DerivedValue Q1;
};

double transmon_f01(double E_J, double E_C);
double charging_energy(double C_total_fF);
double dispersive_shift(double g, double Delta, double alpha);
double dressed_shift(double g, double Delta);
double critical_photon_number(double g, double Delta);

double josephson_inductance_pH(double E_J_GHz);
double plasma_frequency(double E_J_GHz, double C_J_fF);
// Barrier-parameter form. Dimensional analysis of omega_p^2 = 1/(L_J C_J)
// with I_c = J_c A and C_J = eps A / d gives omega_p^2 = 2 e J_c d / (hbar eps);
// a frequently quoted variant transposes eps and d. This helper implements the
// dimensionally consistent form and exists for exploration only; prefer
// plasma_frequency(E_J, C_J).
double plasma_frequency_from_barrier(double J_c_kA_cm2, double d_nm, double eps_r);

double thermal_population(double f01_GHz, double T_kelvin);
double temperature_bound(double p1, double f01_GHz);

DerivedQuantities derive_quantities(const DeviceParams& p);

// H/h = f01 b'b + (alpha/2) b'b(b'b - 1) + f_RR_bare a'a + g (a b' + a' b)
// on the qubit (x) resonator space. N_r = 1 freezes the resonator.
Operator build_system_hamiltonian(const DeviceParams& p, int N_q, int N_r);

// Same Hamiltonian in a frame rotating at f_frame on both subsystems; the
// exchange term is frame-invariant, both number terms are shifted.
Operator build_rotating_hamiltonian(const DeviceParams& p, double f_frame, int N_q, int N_r);

// Dispersive shift extracted from exact diagonalization of the coupled
// Hamiltonian, for comparison with the second-order formula.
double dispersive_shift_numeric(const DeviceParams& p, int N_q, int N_r);

}  // namespace mmq
