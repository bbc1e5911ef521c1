#include "mmq/device.hpp"

#include <cmath>
#include <sstream>

#include "mmq/constants.hpp"
#include "mmq/errors.hpp"

namespace mmq {

namespace k = constants;

std::vector<std::string> validate_device(const DeviceParams& p) {
  if (p.E_J <= 0 || p.E_C <= 0) throw invalid_input("device: E_J and E_C must be positive");
  if (p.f01 <= 0 || p.f_RR_bare <= 0)
    throw invalid_input("device: f01 and f_RR_bare must be positive");
  if (p.g < 0) throw invalid_input("device: g must be nonnegative");
  if (p.kappa <= 0) throw invalid_input("device: kappa must be positive");
  if (p.alpha >= 0) throw invalid_input("device: alpha must be negative");
  if (p.T1 <= 0 || p.Tphi <= 0)
    throw invalid_input("device: T1 and Tphi must be positive (infinity disables)");
  if (p.temperature < 0) throw invalid_input("device: temperature must be nonnegative");
  if (std::abs(p.Delta - (p.f01 - p.f_RR_bare)) > 1e-6)
    throw invalid_input("device: Delta must equal f01 - f_RR_bare within 1e-6 GHz");
  std::vector<std::string> warnings;
  if (p.E_J / p.E_C < 30.0) {
    std::ostringstream os;
    os << "E_J/E_C = " << p.E_J / p.E_C << " is below the transmon regime (>= 30)";
    warnings.push_back(os.str());
  }
  return warnings;
}

DeviceParams reference_device() {
  DeviceParams p;
  p.E_J = 2871.0;
  p.E_C = 0.228;
  p.g = 0.607979;
  p.f_RR_bare = 91.151;
  p.kappa = 0.084281;
  p.f01 = 72.137;
  p.alpha = -0.228;
  p.Delta = p.f01 - p.f_RR_bare;  // -19.014 GHz
  p.chi = -0.230e-3;
  p.C_J = 45.0;
  p.C_Q = 39.0;
  p.J_c = 1.43;
  p.A_J = 0.56;
  p.T1 = 15.849;
  p.Tphi = 38.90;
  p.temperature = 0.87;
  return p;
}

double transmon_f01(double E_J, double E_C) {
  if (E_J <= 0 || E_C <= 0) throw invalid_input("transmon_f01: inputs must be positive");
  return std::sqrt(8.0 * E_J * E_C) - E_C;
}

double charging_energy(double C_total_fF) {
  if (C_total_fF <= 0) throw invalid_input("charging_energy: capacitance must be positive");
  double C = C_total_fF * 1e-15;
  double E = k::elementary_charge * k::elementary_charge / (2.0 * C * k::planck_h);  // Hz
  return E * 1e-9;
}

double dispersive_shift(double g, double Delta, double alpha) {
  if (Delta == 0) throw invalid_input("dispersive_shift: Delta = 0 (resonant)");
  if (Delta + alpha == 0) throw invalid_input("dispersive_shift: Delta + alpha = 0 (straddling)");
  return (g * g / Delta) * (alpha / (Delta + alpha));
}

double dressed_shift(double g, double Delta) {
  if (Delta == 0) throw invalid_input("dressed_shift: Delta = 0");
  return g * g / Delta;
}

double critical_photon_number(double g, double Delta) {
  if (g == 0) throw invalid_input("critical_photon_number: g = 0");
  return Delta * Delta / (4.0 * g * g);
}

double josephson_inductance_pH(double E_J_GHz) {
  if (E_J_GHz <= 0) throw invalid_input("josephson_inductance: E_J must be positive");
  // L_J = (hbar/2e)^2 / (E_J h), via I_c = 2pi E_J h / Phi0.
  double phi0_over_2pi = k::hbar / (2.0 * k::elementary_charge);
  double E_J_joule = E_J_GHz * 1e9 * k::planck_h;
  return phi0_over_2pi * phi0_over_2pi / E_J_joule * 1e12;
}

double plasma_frequency(double E_J_GHz, double C_J_fF) {
  if (E_J_GHz <= 0 || C_J_fF <= 0) throw invalid_input("plasma_frequency: inputs must be positive");
  double L = josephson_inductance_pH(E_J_GHz) * 1e-12;
  double C = C_J_fF * 1e-15;
  return 1.0 / (k::two_pi * std::sqrt(L * C)) * 1e-9;
}

double plasma_frequency_from_barrier(double J_c_kA_cm2, double d_nm, double eps_r) {
  if (J_c_kA_cm2 <= 0 || d_nm <= 0 || eps_r <= 0)
    throw invalid_input("plasma_frequency_from_barrier: inputs must be positive");
  double J_c = J_c_kA_cm2 * 1e7;  // A/m^2
  double d = d_nm * 1e-9;
  double eps = eps_r * 8.8541878128e-12;
  double omega = std::sqrt(2.0 * k::elementary_charge * J_c * d / (k::hbar * eps));
  return omega / k::two_pi * 1e-9;
}

namespace {
// h * (1 GHz) / k_B in kelvin.
const double kGHzToKelvin = k::planck_h * 1e9 / k::boltzmann_k;
}  // namespace

double thermal_population(double f01_GHz, double T_kelvin) {
  if (T_kelvin <= 0) throw invalid_input("thermal_population: temperature must be positive");
  if (f01_GHz <= 0) throw invalid_input("thermal_population: frequency must be positive");
  double x = kGHzToKelvin * f01_GHz / T_kelvin;
  return 1.0 / (1.0 + std::exp(x));
}

double temperature_bound(double p1, double f01_GHz) {
  if (p1 <= 0 || p1 >= 0.5)
    throw invalid_input("temperature_bound: population must lie in (0, 0.5)");
  if (f01_GHz <= 0) throw invalid_input("temperature_bound: frequency must be positive");
  return kGHzToKelvin * f01_GHz / std::log(1.0 / p1 - 1.0);
}

DerivedQuantities derive_quantities(const DeviceParams& p) {
  DerivedQuantities d;
  d.f01_pred = {transmon_f01(p.E_J, p.E_C), "sqrt(8 E_J E_C) - E_C"};
  d.chi_pred = {dispersive_shift(p.g, p.Delta, p.alpha), "(g^2/Delta) alpha/(Delta+alpha)"};
  d.dressed_shift = {dressed_shift(p.g, p.Delta), "g^2/Delta"};
  d.n_crit = {critical_photon_number(p.g, p.Delta), "Delta^2/(4 g^2)"};
  d.f_plasma = {plasma_frequency(p.E_J, p.C_J), "1/(2 pi sqrt(L_J C_J))"};
  d.Q1 = {k::two_pi * p.f01 * p.T1, "2 pi f01 T1"};
  return d;
}

namespace {
Operator duffing_plus_resonator(const DeviceParams& p, double f_q, double f_r, int N_q, int N_r) {
  if (N_q < 2) throw invalid_input("system hamiltonian: N_q must be >= 2");
  if (N_r < 1) throw invalid_input("system hamiltonian: N_r must be >= 1");
  HilbertSpec space{N_q, N_r};
  Operator b = lowering_on(space, 0);
  Operator a = lowering_on(space, 1);
  Operator nq = dagger(b) * b;
  Operator nr = dagger(a) * a;
  Operator id = identity_op(space);
  Operator H = f_q * nq + (p.alpha / 2.0) * (nq * (nq - id)) + f_r * nr +
               p.g * (a * dagger(b) + dagger(a) * b);
  if (!is_hermitian(H.matrix, 1e-12))
    throw numerical_error("system hamiltonian: lost hermiticity");
  return H;
}
}  // namespace

Operator build_system_hamiltonian(const DeviceParams& p, int N_q, int N_r) {
  return duffing_plus_resonator(p, p.f01, p.f_RR_bare, N_q, N_r);
}

Operator build_rotating_hamiltonian(const DeviceParams& p, double f_frame, int N_q, int N_r) {
  return duffing_plus_resonator(p, p.f01 - f_frame, p.f_RR_bare - f_frame, N_q, N_r);
}

double dispersive_shift_numeric(const DeviceParams& p, int N_q, int N_r) {
  if (N_q < 2 || N_r < 2)
    throw invalid_input("dispersive_shift_numeric: needs at least two levels per subsystem");
  Operator H = build_system_hamiltonian(p, N_q, N_r);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.matrix);
  const auto& vecs = es.eigenvectors();
  const auto& vals = es.eigenvalues();
  // Match each dressed state to the bare state it overlaps most.
  auto energy_of = [&](int q, int r) {
    int bare = q * N_r + r;
    int best = 0;
    double best_w = -1;
    for (int i = 0; i < vals.size(); ++i) {
      double w = std::norm(vecs(bare, i));
      if (w > best_w) {
        best_w = w;
        best = i;
      }
    }
    return vals(best);
  };
  double e00 = energy_of(0, 0), e01 = energy_of(0, 1);
  double e10 = energy_of(1, 0), e11 = energy_of(1, 1);
  // Resonator frequency pulled by one qubit excitation; half the difference.
  return 0.5 * ((e11 - e10) - (e01 - e00));
}

}  // namespace mmq
