#include <doctest.h>

#include <cmath>
#include <limits>

#include "mmq/constants.hpp"
#include "mmq/errors.hpp"
#include "mmq/lindblad.hpp"
#include "mmq/operators.hpp"

using namespace mmq;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("collapse channel construction") {
  auto ch = collapse_channels(15.849, 38.90, 0.084281, 3, 5);
  REQUIRE(ch.size() == 3);
  CHECK(ch[0].rate == doctest::Approx(1.0 / 15.849));
  CHECK(ch[0].rate == doctest::Approx(0.0631).epsilon(1e-3));
  CHECK(ch[1].rate == doctest::Approx(2.0 / 38.90));
  CHECK(ch[2].rate == doctest::Approx(constants::two_pi * 0.084281));

  // Infinite Tphi disables dephasing; N_r = 1 freezes the resonator channel.
  CHECK(collapse_channels(15.849, kInf, 0.084281, 3, 5).size() == 2);
  CHECK(collapse_channels(15.849, 38.90, 0.084281, 3, 1).size() == 2);
  CHECK(collapse_channels(kInf, kInf, 0.0, 2, 1).empty());

  // Thermal excitation rides at nbar/T1.
  auto warm = collapse_channels(20.0, kInf, 0.0, 2, 1, 0.05);
  REQUIRE(warm.size() == 2);
  CHECK(warm[1].rate == doctest::Approx(0.05 / 20.0));

  CHECK_THROWS_AS(collapse_channels(-1.0, 38.90, 0.08, 2, 1), invalid_input);
  CHECK_THROWS_AS(collapse_channels(15.849, 0.0, 0.08, 2, 1), invalid_input);
}

TEST_CASE("lindblad derivative identities") {
  HilbertSpec space{{2}};
  Operator rho = basis_density(space, {1});
  Operator n = number_on(space, 0);

  // Commuting H with no channels gives a zero derivative.
  Operator d0 = lindblad_derivative(n, {}, rho);
  CHECK(d0.matrix.norm() < 1e-15);

  // Relaxation at rate gamma drains P1 at exactly gamma.
  const double gamma = 0.2;
  std::vector<CollapseChannel> ch{{lowering_on(space, 0), gamma}};
  Operator d = lindblad_derivative(zero_op(space), ch, rho);
  CHECK(d.matrix(1, 1).real() == doctest::Approx(-gamma));
  CHECK(d.matrix(0, 0).real() == doctest::Approx(gamma));

  // The derivative is traceless for any mix of terms.
  Operator rho2{space, Eigen::MatrixXcd::Zero(2, 2)};
  rho2.matrix << complexd(0.7, 0.0), complexd(0.1, 0.05), complexd(0.1, -0.05), complexd(0.3, 0.0);
  Operator h{space, Eigen::MatrixXcd::Zero(2, 2)};
  h.matrix << complexd(0.3, 0.0), complexd(0.02, 0.01), complexd(0.02, -0.01), complexd(-0.1, 0.0);
  Operator dv = lindblad_derivative(h, ch, rho2);
  CHECK(std::abs(dv.matrix.trace()) < 1e-14);
}

TEST_CASE("free evolution is the identity") {
  HilbertSpec space{{2, 2}};
  Operator rho = basis_density(space, {1, 1});
  TimeDependentHamiltonian h;
  h.static_part = zero_op(space);
  Trajectory traj = evolve(rho, h, {}, {0.0, 5.0, 0.002});
  CHECK((traj.states.back() - rho.matrix).norm() < 1e-14);
}

TEST_CASE("relaxation reproduces the exponential to 1e-6") {
  HilbertSpec space{{2}};
  const double T1 = 15.849;
  TimeDependentHamiltonian h;
  h.static_part = zero_op(space);
  auto ch = collapse_channels(T1, kInf, 0.0, 2, 1);
  Trajectory traj = evolve(basis_density(space, {1}), h, ch, {0.0, 40.0, 0.001});
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    double expected = std::exp(-traj.times[k] / T1);
    worst = std::max(worst, std::abs(traj.records.at("P1")[k] - expected));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("resonant constant drive gives the Rabi formula") {
  HilbertSpec space{{2}};
  const double omega = 0.025;
  Operator low = lowering_on(space, 0);
  Operator hd{space, 0.5 * omega * (low.matrix + dagger(low).matrix)};
  TimeDependentHamiltonian h;
  h.static_part = hd;
  Trajectory traj = evolve(basis_density(space, {0}), h, {}, {0.0, 80.0, 0.002});
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    double expected = std::pow(std::sin(constants::pi * omega * traj.times[k]), 2);
    worst = std::max(worst, std::abs(traj.records.at("P1")[k] - expected));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("coherence decays at the combined rate") {
  HilbertSpec space{{2}};
  const double T1 = 18.0, Tphi = 30.0;
  Operator plus{space, Eigen::MatrixXcd::Zero(2, 2)};
  plus.matrix << complexd(0.5, 0), complexd(0.5, 0), complexd(0.5, 0), complexd(0.5, 0);
  TimeDependentHamiltonian h;
  h.static_part = zero_op(space);
  auto ch = collapse_channels(T1, Tphi, 0.0, 2, 1);
  EvolveOptions opts;
  opts.state_stride = 0;
  Trajectory traj = evolve(plus, h, ch, {0.0, 12.0, 0.001}, opts);
  const double rate = 1.0 / (2.0 * T1) + 1.0 / Tphi;
  double expected = 0.5 * std::exp(-12.0 * rate);
  CHECK(traj.states.back()(0, 1).real() == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("trace and hermiticity preserved through a driven damped run") {
  HilbertSpec space{{3, 2}};
  Operator low = lowering_on(space, 0);
  Operator hd{space, 0.03 * (low.matrix + dagger(low).matrix)};
  TimeDependentHamiltonian h;
  h.static_part = hd;
  auto ch = collapse_channels(15.849, 38.90, 0.084281, 3, 2);
  EvolveOptions opts;
  opts.renormalize = false;
  Trajectory traj = evolve(basis_density(space, {0, 0}), h, ch, {0.0, 30.0, 0.005}, opts);
  CHECK(traj.final_trace_drift < 1e-9 * 30.0);
  CHECK(traj.max_step_trace_drift / 0.005 < 1e-9);
  Eigen::MatrixXcd rho = traj.states.back();
  CHECK((rho - rho.adjoint()).norm() < 1e-10);
}

TEST_CASE("instability is reported with a dt hint") {
  HilbertSpec space{{2}};
  Operator low = lowering_on(space, 0);
  Operator hd{space, 60.0 * (low.matrix + dagger(low).matrix)};
  TimeDependentHamiltonian h;
  h.static_part = hd;
  std::vector<CollapseChannel> ch{{lowering_on(space, 0), 120.0}};
  bool threw = false;
  try {
    evolve(basis_density(space, {0}), h, ch, {0.0, 10.0, 0.02});
  } catch (const numerical_error& e) {
    threw = true;
    CHECK(std::string(e.what()).find("dt") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("halving dt improves accuracy at fourth order") {
  HilbertSpec space{{2}};
  Operator low = lowering_on(space, 0);
  Operator hd{space, 0.4 * (low.matrix + dagger(low).matrix)};
  TimeDependentHamiltonian h;
  h.static_part = hd;
  auto ch = collapse_channels(10.0, 20.0, 0.0, 2, 1);
  EvolveOptions opts;
  opts.renormalize = false;
  opts.validate_states = false;

  auto final_p1 = [&](double dt) {
    Trajectory t = evolve(basis_density(space, {0}), h, ch, {0.0, 5.0, dt}, opts);
    return t.records.at("P1").back();
  };
  double ref = final_p1(0.0025);
  double e1 = std::abs(final_p1(0.08) - ref);
  double e2 = std::abs(final_p1(0.04) - ref);
  double order = std::log2(e1 / e2);
  CHECK(order >= 3.5);
}

TEST_CASE("steady state obeys detailed balance") {
  HilbertSpec space{{2}};
  const double down = 0.08, up = 0.02;
  std::vector<CollapseChannel> ch{{lowering_on(space, 0), down},
                                  {Operator{space, dagger(lowering_on(space, 0)).matrix}, up}};
  Operator ss = steady_state(zero_op(space), ch);
  CHECK(ss.matrix(1, 1).real() == doctest::Approx(up / (up + down)).epsilon(1e-10));

  // Unitary-only generator has no unique stationary state.
  CHECK_THROWS_AS(steady_state(zero_op(space), {}), numerical_error);
}

TEST_CASE("steady state matches long-time evolution") {
  HilbertSpec space{{2}};
  Operator low = lowering_on(space, 0);
  Operator h{space, 0.004 * (low.matrix + dagger(low).matrix) + 0.002 * number_on(space, 0).matrix};
  auto ch = collapse_channels(25.0, 40.0, 0.0, 2, 1);
  Operator ss = steady_state(h, ch);

  TimeDependentHamiltonian hd;
  hd.static_part = h;
  Trajectory traj = evolve(basis_density(space, {0}), hd, ch, {0.0, 600.0, 0.01});
  CHECK((traj.states.back() - ss.matrix).norm() < 1e-6);
}
