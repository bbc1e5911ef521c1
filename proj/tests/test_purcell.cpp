#include "mmq/purcell.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <vector>

#include "mmq/constants.hpp"
#include "mmq/device.hpp"
#include "mmq/errors.hpp"

using namespace mmq;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("element admittances follow the sign convention") {
  const double w = 1e11;
  CHECK(CircuitNetwork::resistor(50.0).admittance(w) == complexd(0.02, 0));
  CHECK(CircuitNetwork::inductor(1e-9).admittance(w).imag() == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(CircuitNetwork::capacitor(1e-12).admittance(w).imag() == doctest::Approx(-100.0).epsilon(1e-12));
  CHECK(CircuitNetwork::open_circuit().admittance(w) == complexd(0, 0));

  CHECK(CircuitNetwork::resistor(50.0).impedance(w) == complexd(50.0, 0));
  CHECK_THROWS_AS(CircuitNetwork::open_circuit().impedance(w), numerical_error);
  CHECK_THROWS_AS(CircuitNetwork::resistor(50.0).admittance(0.0), invalid_input);
}

TEST_CASE("factories reject nonphysical elements") {
  CHECK_THROWS_AS(CircuitNetwork::resistor(-1.0), invalid_input);
  CHECK_THROWS_AS(CircuitNetwork::inductor(0.0), invalid_input);
  CHECK_THROWS_AS(CircuitNetwork::capacitor(-2e-15), invalid_input);
  CHECK_THROWS_AS(CircuitNetwork::series({}), invalid_input);
  CHECK_THROWS_AS(CircuitNetwork::parallel({}), invalid_input);

  CHECK_THROWS_AS(CircuitNetwork::tabulated({1e9}, {complexd(0, 0)}), invalid_input);
  CHECK_THROWS_AS(CircuitNetwork::tabulated({1e9, 2e9}, {complexd(0, 0)}), invalid_input);
  CHECK_THROWS_AS(CircuitNetwork::tabulated({2e9, 1e9}, {complexd(0, 0), complexd(0, 0)}),
                  invalid_input);
  CHECK_THROWS_AS(CircuitNetwork::tabulated({-1e9, 1e9}, {complexd(0, 0), complexd(0, 0)}),
                  invalid_input);
}

TEST_CASE("series and parallel compose impedance and admittance") {
  const double w = 2e11;
  const auto r1 = CircuitNetwork::resistor(30.0);
  const auto r2 = CircuitNetwork::resistor(70.0);
  CHECK(CircuitNetwork::series({r1, r2}).impedance(w).real() == doctest::Approx(100.0));
  CHECK(CircuitNetwork::parallel({r1, r2}).admittance(w).real() ==
        doctest::Approx(1.0 / 30 + 1.0 / 70).epsilon(1e-12));

  // A resistor in series with a capacitor.
  const double C = 5e-15;
  const complexd z =
      CircuitNetwork::series({r1, CircuitNetwork::capacitor(C)}).impedance(w);
  CHECK(z.real() == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(z.imag() == doctest::Approx(1.0 / (w * C)).epsilon(1e-12));

  // An open branch keeps the whole series branch open.
  CHECK(CircuitNetwork::series({r1, CircuitNetwork::open_circuit()}).admittance(w) ==
        complexd(0, 0));
}

TEST_CASE("junction admittance cancels at the plasma frequency") {
  const JunctionBranch j{1e-9, 1e-15};
  const double w0 = 1.0 / std::sqrt(j.L_J * j.C_J);
  CHECK(junction_admittance(w0, j).imag() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(junction_admittance(0.5 * w0, j).imag() > 0);
  CHECK(junction_admittance(2.0 * w0, j).imag() < 0);
  CHECK_THROWS_AS(junction_admittance(-1.0, j), invalid_input);
  CHECK_THROWS_AS(junction_admittance(1e11, JunctionBranch{0, 1e-15}), invalid_input);
}

TEST_CASE("a bare junction resonates at its plasma frequency") {
  const JunctionBranch j{1e-9, 1e-15};
  const double w0 = 1e12;
  const auto roots = mode_frequencies(CircuitNetwork::open_circuit(), j, 0.5e12, 1.5e12);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(w0).epsilon(1e-9));
}

TEST_CASE("junction shunted by a resistor has the closed-form decay time") {
  const JunctionBranch j{56.936e-12, 85.495e-15};
  const double R = 1e5;
  const auto net = CircuitNetwork::resistor(R);

  for (double w : {3e11, 4.5e11, 6e11}) {
    const PurcellEstimate est = purcell_time(net, j, w);
    REQUIRE(est.finite);
    const double expect = 0.5 * R * (j.C_J + 1.0 / (w * w * j.L_J));
    CHECK(est.seconds == doctest::Approx(expect).epsilon(1e-6));
  }

  // At the plasma frequency the inductive and capacitive parts contribute
  // equally, collapsing the estimate to R C.
  const double wp = 1.0 / std::sqrt(j.L_J * j.C_J);
  CHECK(purcell_time(net, j, wp).seconds == doctest::Approx(R * j.C_J).epsilon(1e-6));
}

TEST_CASE("decay time is invariant under a uniform admittance rescale") {
  const JunctionBranch j{60e-12, 80e-15};
  const JunctionBranch j2{30e-12, 160e-15};
  const double w = 4e11;
  const double a = purcell_time(CircuitNetwork::resistor(2e4), j, w).seconds;
  const double b = purcell_time(CircuitNetwork::resistor(1e4), j2, w).seconds;
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("a lossless shunt leaves the decay unbounded") {
  const JunctionBranch j{1e-9, 1e-15};
  const PurcellEstimate est = purcell_time(CircuitNetwork::inductor(1e-10), j, 1e11);
  CHECK_FALSE(est.finite);
  CHECK(std::isinf(est.seconds));
}

TEST_CASE("coupled mode roots match the two-node Lagrangian eigenproblem") {
  const double L1 = 60e-12, C1 = 80e-15;
  const double L2 = 150e-12, C2 = 20e-15;
  const double Cc = 5e-15;

  Eigen::Matrix2d Cm, Linv;
  Cm << C1 + Cc, -Cc, -Cc, C2 + Cc;
  Linv << 1.0 / L1, 0, 0, 1.0 / L2;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(Linv, Cm);
  REQUIRE(es.info() == Eigen::Success);
  const double w_low = std::sqrt(es.eigenvalues()(0));
  const double w_high = std::sqrt(es.eigenvalues()(1));

  const auto net = CircuitNetwork::series(
      {CircuitNetwork::capacitor(Cc),
       CircuitNetwork::parallel({CircuitNetwork::inductor(L2), CircuitNetwork::capacitor(C2)})});
  const auto roots = mode_frequencies(net, JunctionBranch{L1, C1}, 3e11, 7e11, 2001);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(w_low).epsilon(1e-6));
  CHECK(roots[1] == doctest::Approx(w_high).epsilon(1e-6));
}

TEST_CASE("mode scan discards the pole between hybridized modes") {
  const EquivalentCircuit eq = equivalent_circuit(reference_device());
  const double w_q = constants::two_pi * 72.137e9;
  const double w_r = constants::two_pi * 91.151e9;
  // The coupling capacitor puts a susceptance pole between the two modes;
  // only the zeros may survive the scan.
  const auto roots = mode_frequencies(eq.network, eq.junction, 0.8 * w_q, 1.1 * w_r, 4001);
  REQUIRE(roots.size() == 2);

  const double C_q = eq.C_q_fF * 1e-15, C_c = eq.C_c_fF * 1e-15, C_r = 20e-15;
  Eigen::Matrix2d Cm, Linv;
  Cm << C_q + C_c, -C_c, -C_c, C_r + C_c;
  Linv << 1.0 / eq.junction.L_J, 0, 0, 1.0 / (eq.L_r_pH * 1e-12);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(Linv, Cm);
  REQUIRE(es.info() == Eigen::Success);
  CHECK(roots[0] == doctest::Approx(std::sqrt(es.eigenvalues()(0))).epsilon(1e-4));
  CHECK(roots[1] == doctest::Approx(std::sqrt(es.eigenvalues()(1))).epsilon(1e-4));
  CHECK(roots[0] < w_q);
  CHECK(roots[1] < w_r);
}

TEST_CASE("tabulated admittance reproduces the sampled network") {
  const auto rlc = CircuitNetwork::parallel({CircuitNetwork::resistor(9e4),
                                             CircuitNetwork::inductor(150e-12),
                                             CircuitNetwork::capacitor(20e-15)});
  std::vector<double> omega;
  std::vector<complexd> y;
  for (int i = 0; i <= 2000; ++i) {
    const double w = 4e11 + (7e11 - 4e11) * i / 2000.0;
    omega.push_back(w);
    y.push_back(rlc.admittance(w));
  }
  const auto tab = CircuitNetwork::tabulated(omega, y);

  const auto d = tab.domain();
  CHECK(d.first == 4e11);
  CHECK(d.second == 7e11);

  for (double w : {4.3e11, 5.5e11, 6.9e11}) {
    const complexd exact = rlc.admittance(w);
    const complexd interp = tab.admittance(w);
    CHECK(interp.real() == doctest::Approx(exact.real()).epsilon(1e-4));
    CHECK(interp.imag() == doctest::Approx(exact.imag()).epsilon(1e-4));
  }
  CHECK_THROWS_AS(tab.admittance(3e11), invalid_input);
  CHECK_THROWS_AS(tab.admittance(8e11), invalid_input);
}

TEST_CASE("admittance tables load from three-column text") {
  const std::string path = "purcell_table_test.txt";
  {
    std::ofstream out(path);
    out << "# frequency_GHz  ReY_S  ImY_S\n";
    out << "\n";
    out << "60.0  1e-5  -2e-3\n";
    out << "  80.0  2e-5  0.0\n";
    out << "100.0  3e-5  2e-3\n";
  }
  const auto net = CircuitNetwork::from_file(path);
  const double w80 = constants::two_pi * 80e9;
  CHECK(net.admittance(w80).real() == doctest::Approx(2e-5).epsilon(1e-9));
  CHECK(net.admittance(w80).imag() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(net.admittance(constants::two_pi * 120e9), invalid_input);
  CHECK_THROWS_AS(CircuitNetwork::from_file("no_such_table.txt"), invalid_input);

  {
    std::ofstream out(path);
    out << "60.0  1e-5\n";
  }
  CHECK_THROWS_AS(CircuitNetwork::from_file(path), invalid_input);
  std::remove(path.c_str());
}

TEST_CASE("dispersive decay estimate") {
  CHECK(analytic_purcell(0.607979, -19.0143, 0.084281) == doctest::Approx(1846.9).epsilon(1e-3));
  CHECK(analytic_purcell(0.607979, 19.0143, 0.084281) ==
        doctest::Approx(analytic_purcell(0.607979, -19.0143, 0.084281)).epsilon(1e-12));
  CHECK(std::isinf(analytic_purcell(0.0, -19.0, 0.084281)));
  CHECK(std::isinf(analytic_purcell(0.6, -19.0, 0.0)));
  CHECK_THROWS_AS(analytic_purcell(0.6, 0.0, 0.084281), invalid_input);
}

TEST_CASE("equivalent circuit reproduces the design frequencies") {
  const DeviceParams p = reference_device();
  const EquivalentCircuit eq = equivalent_circuit(p);

  CHECK(eq.C_q_fF == doctest::Approx(85.495).epsilon(1e-3));
  CHECK(eq.L_r_pH == doctest::Approx(152.44).epsilon(1e-3));
  CHECK(eq.R_ohm == doctest::Approx(94418).epsilon(1e-3));
  CHECK(eq.C_c_fF == doctest::Approx(0.62006).epsilon(1e-3));
  CHECK(eq.Q == doctest::Approx(1081.5).epsilon(1e-3));

  // The junction branch alone resonates at the qubit frequency.
  const double wp = 1.0 / std::sqrt(eq.junction.L_J * eq.junction.C_J);
  CHECK(wp == doctest::Approx(constants::two_pi * p.f01 * 1e9).epsilon(1e-9));

  CHECK_THROWS_AS(equivalent_circuit(p, -5.0), invalid_input);
}

TEST_CASE("circuit and dispersive estimates agree to a factor of two") {
  const DeviceParams p = reference_device();
  const EquivalentCircuit eq = equivalent_circuit(p);
  const double w_q = constants::two_pi * p.f01 * 1e9;
  const auto roots = mode_frequencies(eq.network, eq.junction, 0.95 * w_q, 1.05 * w_q, 2001);
  REQUIRE(!roots.empty());

  const PurcellEstimate est = purcell_time(eq.network, eq.junction, roots.front());
  REQUIRE(est.finite);
  const double circuit_ns = est.seconds * 1e9;
  const double dispersive_ns = analytic_purcell(p.g, p.Delta, p.kappa);
  CHECK(circuit_ns / dispersive_ns > 0.5);
  CHECK(circuit_ns / dispersive_ns < 2.0);
}
