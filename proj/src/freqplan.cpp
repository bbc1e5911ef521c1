#include "mmq/freqplan.hpp"

#include <algorithm>
#include <cmath>

#include "mmq/errors.hpp"

namespace mmq {

void validate_chain(const ChainSpec& chain) {
  if (chain.multiplier_order < 1)
    throw invalid_input("chain: multiplier order must be at least 1");
  if (chain.waveguide_cutoff < 0)
    throw invalid_input("chain: waveguide cutoff must be nonnegative");
  if (!(chain.f_RLO > chain.f_RIF) || !(chain.f_RIF > 0))
    throw invalid_input("chain: need f_RLO > f_RIF > 0");
}

std::vector<Harmonic> harmonics(double f_GHz, int n_max, double cutoff_GHz, int order) {
  if (!(f_GHz > 0)) throw invalid_input("harmonics: frequency must be positive");
  if (n_max < 1) throw invalid_input("harmonics: n_max must be at least 1");
  if (order < 1) throw invalid_input("harmonics: order must be at least 1");
  if (cutoff_GHz < 0) throw invalid_input("harmonics: cutoff must be nonnegative");
  std::vector<Harmonic> out;
  for (int n = 1; n <= n_max; ++n) {
    const double f = n * f_GHz / order;
    if (f >= cutoff_GHz) out.push_back({n, f});
  }
  return out;
}

std::pair<double, double> sidebands(double f_LO_GHz, double f_IF_GHz) {
  if (!(f_LO_GHz > f_IF_GHz) || !(f_IF_GHz >= 0))
    throw invalid_input("sidebands: need f_LO > f_IF >= 0");
  return {f_LO_GHz + f_IF_GHz, f_LO_GHz - f_IF_GHz};
}

std::vector<double> direct_conversion_spurs(const std::vector<double>& probe_GHz,
                                            const ChainSpec& chain, int n_max,
                                            double tolerance_GHz) {
  validate_chain(chain);
  if (n_max < 1) throw invalid_input("spurs: n_max must be at least 1");
  if (!(tolerance_GHz > 0)) throw invalid_input("spurs: tolerance must be positive");

  // Frequencies the receiver is sensitive to: every propagating LO harmonic
  // offset by the intermediate frequency on either side.
  std::vector<double> monitored;
  for (const Harmonic& h :
       harmonics(chain.f_RLO, n_max, chain.waveguide_cutoff, chain.multiplier_order)) {
    monitored.push_back(h.f_GHz + chain.f_RIF);
    monitored.push_back(h.f_GHz - chain.f_RIF);
  }

  std::vector<double> out;
  for (double f_S : probe_GHz) {
    if (!(f_S > 0)) throw invalid_input("spurs: probe frequencies must be positive");
    bool hit = false;
    for (const Harmonic& h :
         harmonics(f_S, n_max, chain.waveguide_cutoff, chain.multiplier_order)) {
      for (double m : monitored) {
        if (std::abs(h.f_GHz - m) < tolerance_GHz) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    if (hit) out.push_back(f_S);
  }
  return out;
}

AssignmentResult assign_features(const std::vector<double>& observed_GHz,
                                 const std::vector<double>& resonators_GHz,
                                 const std::vector<double>& qubits_GHz, int n_min, int n_max,
                                 double tolerance_GHz, int order) {
  if (!(tolerance_GHz > 0)) throw invalid_input("assign_features: tolerance must be positive");
  if (n_min < 1 || n_max < n_min)
    throw invalid_input("assign_features: need 1 <= n_min <= n_max");
  if (order < 1) throw invalid_input("assign_features: order must be at least 1");

  struct Candidate {
    double predicted;
    std::string source;
    int index;
    int n;
    int source_rank;  // resonators first
  };
  std::vector<Candidate> candidates;
  for (int n = n_min; n <= n_max; ++n) {
    for (std::size_t i = 0; i < resonators_GHz.size(); ++i)
      candidates.push_back(
          {order * resonators_GHz[i] / n, "resonator", static_cast<int>(i), n, 0});
    for (std::size_t i = 0; i < qubits_GHz.size(); ++i)
      candidates.push_back({order * qubits_GHz[i] / n, "qubit", static_cast<int>(i), n, 1});
  }

  AssignmentResult result;
  for (double f : observed_GHz) {
    const Candidate* best = nullptr;
    double best_abs = tolerance_GHz;
    for (const Candidate& c : candidates) {
      const double d = std::abs(f - c.predicted);
      if (d > best_abs) continue;
      const bool better =
          !best || d < best_abs ||
          (d == best_abs && (c.n < best->n || (c.n == best->n &&
                                               (c.source_rank < best->source_rank ||
                                                (c.source_rank == best->source_rank &&
                                                 c.index < best->index)))));
      if (better) {
        best = &c;
        best_abs = d;
      }
    }
    if (best) {
      result.assigned.push_back(
          {f, best->source, best->index, best->n, best->predicted, f - best->predicted});
    } else {
      result.unassigned.push_back(f);
    }
  }
  return result;
}

}  // namespace mmq
