#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mmq {

// Multiplier-chain bookkeeping. Frequencies are generator-referred: a probe
// synthesized at f_S reaches the device through an order-N multiplier, so
// its n-th harmonic sits at (n/N) f_S.
struct ChainSpec {
  int multiplier_order = 6;
  double f_generator = 0;      // GHz
  double f_RLO = 0;            // readout LO, GHz
  double f_RIF = 0;            // readout IF, GHz
  double waveguide_cutoff = 0; // GHz, evanescent below this
};

void validate_chain(const ChainSpec& chain);

struct Harmonic {
  int n = 0;
  double f_GHz = 0;
};

// {(n, n f / order) : 1 <= n <= n_max, n f / order >= cutoff}.
std::vector<Harmonic> harmonics(double f_GHz, int n_max, double cutoff_GHz, int order = 6);

// (USB, LSB) = (LO + IF, LO - IF).
std::pair<double, double> sidebands(double f_LO_GHz, double f_IF_GHz);

// Probe grid values whose harmonics land within tolerance of any readout
// LO harmonic shifted by +-IF. Both combs respect the waveguide cutoff.
std::vector<double> direct_conversion_spurs(const std::vector<double>& probe_GHz,
                                            const ChainSpec& chain, int n_max,
                                            double tolerance_GHz = 1e-3);

struct FeatureAssignment {
  double observed_f = 0;   // GHz, generator-referred probe frequency
  std::string source;      // "resonator" or "qubit"
  int source_index = 0;
  int harmonic_n = 0;
  double predicted_f = 0;  // (order/n) f_source
  double residual = 0;     // observed - predicted
};

struct AssignmentResult {
  std::vector<FeatureAssignment> assigned;
  std::vector<double> unassigned;
};

// Match each observed feature to the source and harmonic minimizing the
// residual within tolerance; ties prefer smaller n, then resonators, then
// smaller source index.
AssignmentResult assign_features(const std::vector<double>& observed_GHz,
                                 const std::vector<double>& resonators_GHz,
                                 const std::vector<double>& qubits_GHz, int n_min, int n_max,
                                 double tolerance_GHz, int order = 6);

}  // namespace mmq
