#include <doctest.h>

#include <cmath>

#include "mmq/constants.hpp"
#include "mmq/device.hpp"
#include "mmq/errors.hpp"
#include "mmq/lindblad.hpp"
#include "mmq/operators.hpp"
#include "mmq/pulse.hpp"

using namespace mmq;

namespace {

// Undamped two-level run driven by one pulse; returns (P0, P1) records.
Trajectory drive_two_level(const PulseEnvelope& p, double t_end, double dt = 0.002) {
  HilbertSpec space{{2}};
  TimeDependentHamiltonian h;
  h.static_part = zero_op(space);
  h.drives.push_back(drive_hamiltonian(p, lowering_on(space, 0)));
  TimeGrid grid{0.0, t_end, dt};
  return evolve(basis_density(space, {0}), h, {}, grid);
}

}  // namespace

TEST_CASE("envelope shape and continuity") {
  PulseEnvelope p;
  p.tau = 4.0;
  p.sigma = 1.5;
  p.omega0 = 0.05;

  const double edge = 2.5 * p.sigma;
  CHECK(envelope_value(p, edge + 2.0) == doctest::Approx(p.omega0));
  CHECK(envelope_value(p, edge) == doctest::Approx(p.omega0));
  CHECK(envelope_value(p, edge + p.tau) == doctest::Approx(p.omega0));
  CHECK(envelope_value(p, -0.1) == 0.0);
  CHECK(envelope_value(p, p.tau + 2.0 * edge + 0.1) == 0.0);

  // Truncation step at the support boundary: omega0 * exp(-2.5^2/2).
  CHECK(envelope_value(p, 1e-12) == doctest::Approx(p.omega0 * std::exp(-3.125)).epsilon(1e-6));

  // C0 at the edge-to-flat joints.
  for (double t : {edge, edge + p.tau}) {
    CHECK(std::abs(envelope_value(p, t - 1e-9) - envelope_value(p, t + 1e-9)) < 1e-9);
  }
  for (double t = 0.05; t < p.tau + 2.0 * edge; t += 0.05) {
    CHECK(envelope_value(p, t) <= p.omega0 + 1e-15);
  }
}

TEST_CASE("envelope integral matches the truncated-Gaussian formula") {
  PulseEnvelope p;
  p.tau = 3.0;
  p.sigma = 1.2;
  p.omega0 = 1.0;
  const double support = pulse_support(p);
  const int n = 600000;
  const double h = support / n;
  double integral = 0.5 * (envelope_value(p, 0.0) + envelope_value(p, support));
  for (int k = 1; k < n; ++k) integral += envelope_value(p, k * h);
  integral *= h;

  const double expected =
      p.tau + p.sigma * std::sqrt(constants::two_pi) * std::erf(2.5 / std::sqrt(2.0));
  CHECK(integral == doctest::Approx(expected).epsilon(1e-6));
  CHECK(pulse_area(p) == doctest::Approx(constants::two_pi * expected).epsilon(1e-12));
}

TEST_CASE("pulse area scaling and the 68 MHz convention") {
  PulseEnvelope p;
  p.tau = 2.0;
  p.sigma = 1.5;
  p.omega0 = 0.068;
  // tau=2 ns at 68 MHz with sigma=1.5 ns edges: the naive integral area is
  // below pi, which is why amplitude calibration is exposed separately.
  CHECK(pulse_area(p) == doctest::Approx(2.4412).epsilon(1e-3));
  CHECK(pulse_area(p) < constants::pi);

  p.omega0 = 0.0;
  CHECK(pulse_area(p) == 0.0);
  p.omega0 = 0.136;
  PulseEnvelope half = p;
  half.omega0 = 0.068;
  CHECK(pulse_area(p) == doctest::Approx(2.0 * pulse_area(half)));
}

TEST_CASE("amplitude_for_area inverts pulse_area") {
  PulseEnvelope p;
  p.tau = 2.0;
  p.sigma = 0.5;
  p.omega0 = amplitude_for_area(2.0, 0.5, constants::pi);
  CHECK(pulse_area(p) == doctest::Approx(constants::pi).epsilon(1e-12));
  CHECK_THROWS_AS(amplitude_for_area(2.0, 0.0, constants::pi), invalid_input);
}

TEST_CASE("resonant pi pulse inverts the qubit") {
  PulseEnvelope p;
  p.tau = 2.0;
  p.sigma = 0.5;
  p.omega0 = amplitude_for_area(2.0, 0.5, constants::pi);
  Trajectory traj = drive_two_level(p, pulse_support(p));
  CHECK(traj.records.at("P1").back() >= 0.999);
}

TEST_CASE("phase pi echo returns to ground") {
  PulseEnvelope half;
  half.tau = 1.0;
  half.sigma = 0.5;
  half.omega0 = amplitude_for_area(1.0, 0.5, constants::pi / 2.0);

  PulseEnvelope second = half;
  second.t_start = pulse_support(half);
  second.phase = constants::pi;

  HilbertSpec space{{2}};
  TimeDependentHamiltonian h;
  h.static_part = zero_op(space);
  h.drives.push_back(drive_hamiltonian(half, lowering_on(space, 0)));
  h.drives.push_back(drive_hamiltonian(second, lowering_on(space, 0)));
  TimeGrid grid{0.0, second.t_start + pulse_support(second), 0.002};
  Trajectory traj = evolve(basis_density(space, {0}), h, {}, grid);
  CHECK(traj.records.at("P0").back() >= 0.999);
}

TEST_CASE("detuning at the Rabi rate halves the peak transfer") {
  PulseEnvelope p;
  p.tau = 400.0;
  p.sigma = 0.01;  // nearly rectangular so the generalized-Rabi formula applies
  p.omega0 = 0.02;
  p.detuning = 0.02;
  Trajectory traj = drive_two_level(p, pulse_support(p), 0.005);
  double peak = 0.0;
  for (double v : traj.records.at("P1")) peak = std::max(peak, v);
  CHECK(peak == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("integer-area pulses alternate population extrema") {
  // sigma-dominated pulses: tau = 0, wide Gaussian edges.
  for (int n = 1; n <= 4; ++n) {
    PulseEnvelope p;
    p.tau = 0.0;
    p.sigma = 2.0;
    p.omega0 = amplitude_for_area(0.0, 2.0, n * constants::pi);
    Trajectory traj = drive_two_level(p, pulse_support(p));
    double p1 = traj.records.at("P1").back();
    if (n % 2 == 1) {
      CHECK(p1 >= 0.999);
    } else {
      CHECK(p1 <= 1e-3);
    }
  }
}

TEST_CASE("sequence validation") {
  PulseEnvelope p;
  p.tau = 2.0;
  p.sigma = 0.5;
  p.omega0 = 0.01;

  PulseSequence s;
  s.pulses.push_back({p, TargetedPulse::Target::qubit});
  s.readout_start = pulse_support(p);
  s.readout_duration = 20.0;
  CHECK_NOTHROW(validate_sequence(s));

  s.readout_start = 1.0;  // inside the pulse
  CHECK_THROWS_AS(validate_sequence(s), invalid_input);
  s.allow_overlap = true;
  CHECK_NOTHROW(validate_sequence(s));

  s.allow_overlap = false;
  s.readout_start = pulse_support(p);
  s.pulses[0].pulse.t_start = -0.5;
  CHECK_THROWS_AS(validate_sequence(s), invalid_input);

  PulseSequence bad;
  bad.readout_duration = 0.0;
  CHECK_THROWS_AS(validate_sequence(bad), invalid_input);
}

TEST_CASE("envelope validation errors") {
  PulseEnvelope p;
  p.tau = 2.0;
  p.sigma = 0.0;
  CHECK_THROWS_AS(envelope_value(p, 1.0), invalid_input);
  p.sigma = 0.5;
  p.tau = -1.0;
  CHECK_THROWS_AS(envelope_value(p, 1.0), invalid_input);
}
