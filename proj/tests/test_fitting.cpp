#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mmq/constants.hpp"
#include "mmq/errors.hpp"
#include "mmq/fitting.hpp"

using namespace mmq;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

std::vector<double> with_noise(const std::vector<double>& y, double sigma, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  std::vector<double> out = y;
  for (double& v : out) v += gauss(rng);
  return out;
}

}  // namespace

TEST_CASE("exponential fit recovers its own model") {
  auto t = linspace(0.0, 60.0, 41);
  std::vector<double> y;
  for (double tk : t) y.push_back(0.9 * std::exp(-tk / 15.849) + 0.02);
  FitResult fr = fit_exponential(t, y);
  CHECK(fr.converged);
  CHECK(fr.values.at("T") == doctest::Approx(15.849).epsilon(1e-6));
  CHECK(fr.values.at("amplitude") == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(fr.values.at("offset") == doctest::Approx(0.02).epsilon(1e-4));
  CHECK(fr.sigmas.at("T") >= 0.0);
}

TEST_CASE("exponential fit under 1 percent noise") {
  auto t = linspace(0.0, 60.0, 50);
  std::vector<double> clean;
  for (double tk : t) clean.push_back(std::exp(-tk / 15.849));
  FitResult fr = fit_exponential(t, with_noise(clean, 0.01, 7));
  CHECK(fr.converged);
  CHECK(fr.values.at("T") == doctest::Approx(15.849).epsilon(0.05));
}

TEST_CASE("exponential fit degenerates on constant data") {
  auto t = linspace(0.0, 10.0, 12);
  std::vector<double> y(t.size(), 0.4);
  FitResult fr = fit_exponential(t, y);
  CHECK(fr.degenerate);
  CHECK(!fr.note.empty());
}

TEST_CASE("exponential fit input validation") {
  CHECK_THROWS_AS(fit_exponential({0.0, 1.0, 2.0}, {1.0, 0.5, 0.3}), invalid_input);
  CHECK_THROWS_AS(fit_exponential({0.0, 2.0, 1.0, 3.0}, {1.0, 0.5, 0.3, 0.2}), invalid_input);
}

TEST_CASE("damped cosine fit recovers its own model") {
  auto t = linspace(0.0, 40.0, 161);
  std::vector<double> y;
  for (double tk : t)
    y.push_back(0.42 * std::exp(-tk / 17.466) * std::cos(constants::two_pi * 0.320 * tk + 0.7) +
                0.5);
  FitResult fr = fit_damped_cosine(t, y);
  CHECK(fr.converged);
  CHECK(fr.values.at("freq") == doctest::Approx(0.320).epsilon(1e-6));
  CHECK(fr.values.at("T2s") == doctest::Approx(17.466).epsilon(1e-6));
  CHECK(fr.values.at("amplitude") == doctest::Approx(0.42).epsilon(1e-6));
  CHECK(fr.values.at("phase") == doctest::Approx(0.7).epsilon(1e-4));
}

TEST_CASE("damped cosine phase reported modulo 2 pi") {
  auto t = linspace(0.0, 30.0, 121);
  std::vector<double> y;
  for (double tk : t)
    y.push_back(0.3 * std::exp(-tk / 20.0) * std::cos(constants::two_pi * 0.25 * tk + constants::pi) + 0.1);
  FitResult fr = fit_damped_cosine(t, y);
  CHECK(fr.converged);
  double d = std::remainder(fr.values.at("phase") - constants::pi, constants::two_pi);
  CHECK(std::abs(d) < 1e-4);
  CHECK(fr.values.at("amplitude") > 0.0);
}

TEST_CASE("damped cosine degenerate and sampling errors") {
  auto t = linspace(0.0, 10.0, 21);
  std::vector<double> flat(t.size(), 0.25);
  CHECK(fit_damped_cosine(t, flat).degenerate);

  // 0.9 GHz oscillation sampled at 2 ns steps violates Nyquist.
  auto ts = linspace(0.0, 40.0, 21);
  std::vector<double> fast;
  for (double tk : ts) fast.push_back(std::cos(constants::two_pi * 0.9 * tk));
  CHECK_THROWS_AS(fit_damped_cosine(ts, fast), invalid_input);
}

TEST_CASE("single gaussian peak recovered exactly") {
  auto f = linspace(72.0, 72.3, 151);
  std::vector<double> y;
  const double ln2 = std::log(2.0);
  for (double fk : f)
    y.push_back(0.05 * std::exp(-ln2 * std::pow((fk - 72.137) / 0.010, 2)) + 0.001);
  FitResult fr = fit_peaks(f, y, 1);
  CHECK(fr.converged);
  CHECK(fr.values.at("center0") == doctest::Approx(72.137).epsilon(1e-8));
  CHECK(fr.values.at("sigma0") == doctest::Approx(0.010).epsilon(1e-6));
  CHECK(fr.values.at("amp0") == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("two peaks 114 MHz apart resolved within 1 MHz") {
  auto f = linspace(71.85, 72.35, 401);
  std::vector<double> y;
  const double ln2 = std::log(2.0);
  for (double fk : f) {
    double a = 0.05 * std::exp(-ln2 * std::pow((fk - 72.137) / 0.030, 2));
    double b = 0.03 * std::exp(-ln2 * std::pow((fk - 72.023) / 0.030, 2));
    y.push_back(a + b);
  }
  FitResult fr = fit_peaks(f, y, 2);
  CHECK(fr.converged);
  // Presented sorted by center: index 0 is the lower line.
  CHECK(std::abs(fr.values.at("center0") - 72.023) < 1e-3);
  CHECK(std::abs(fr.values.at("center1") - 72.137) < 1e-3);
  CHECK(fr.values.at("center1") - fr.values.at("center0") == doctest::Approx(0.114).epsilon(0.01));
}

TEST_CASE("peak fit degenerate and seeding errors") {
  auto f = linspace(1.0, 2.0, 41);
  std::vector<double> flat(f.size(), 0.2);
  FitResult fr = fit_peaks(f, flat, 1);
  CHECK(fr.degenerate);

  std::vector<double> one_bump;
  const double ln2 = std::log(2.0);
  for (double fk : f) one_bump.push_back(std::exp(-ln2 * std::pow((fk - 1.5) / 0.05, 2)));
  CHECK_THROWS_AS(fit_peaks(f, one_bump, 4), invalid_input);
}

TEST_CASE("stark calibration recovers the photon rate") {
  // center = f_ge0 - chi * k * P with chi = -0.230 MHz, k = 100 photons/mW
  const double chi = -0.230e-3, k = 100.0;
  auto powers = linspace(0.01, 0.2, 8);
  std::vector<double> centers;
  for (double p : powers) centers.push_back(72.137 - chi * k * p);
  StarkCalibration cal = stark_calibration(powers, centers, chi);
  CHECK(cal.photons_per_milliwatt == doctest::Approx(k).epsilon(0.01));
  CHECK(cal.f_ge0 == doctest::Approx(72.137).epsilon(1e-9));
  CHECK(cal.r_squared == doctest::Approx(1.0));
  CHECK(cal.warning.empty());

  // Doubling powers halves the fitted photon rate.
  std::vector<double> doubled = powers;
  for (double& p : doubled) p *= 2.0;
  CHECK(stark_calibration(doubled, centers, chi).photons_per_milliwatt ==
        doctest::Approx(k / 2.0).epsilon(0.01));

  // Flat centers: zero rate, R^2 undefined.
  std::vector<double> flat(powers.size(), 72.137);
  StarkCalibration zero = stark_calibration(powers, flat, chi);
  CHECK(zero.photons_per_milliwatt == 0.0);
  CHECK(!zero.r_squared_defined);

  CHECK_THROWS_AS(stark_calibration({0.1, 0.2}, {72.1, 72.2}, chi), invalid_input);
  CHECK_THROWS_AS(stark_calibration(powers, centers, 0.0), invalid_input);
}

TEST_CASE("power broadening fit recovers T1 and T2") {
  const double T1 = 47.3, T2 = 20.9, g = 0.607979;
  auto n_s = linspace(0.001, 0.01, 6);
  std::vector<double> widths;
  for (double n : n_s) {
    double sq = 1.0 / (T2 * T2) + n * g * g * T1 / T2;
    widths.push_back(std::sqrt(sq) / constants::two_pi);
  }
  FitResult fr = power_broadening_fit(n_s, widths, g);
  CHECK(fr.values.at("T1") == doctest::Approx(T1).epsilon(1e-6));
  CHECK(fr.values.at("T2") == doctest::Approx(T2).epsilon(1e-6));

  // Scaling every n_s by c scales the fitted T1 by 1/c.
  std::vector<double> scaled = n_s;
  for (double& n : scaled) n *= 2.0;
  FitResult half = power_broadening_fit(scaled, widths, g);
  CHECK(half.values.at("T1") == doctest::Approx(T1 / 2.0).epsilon(1e-6));

  // Constant widths: zero slope, T1 degenerate at zero.
  std::vector<double> flat(n_s.size(), widths[0]);
  FitResult zero = power_broadening_fit(n_s, flat, g);
  CHECK(zero.degenerate);
  CHECK(zero.values.at("T1") == 0.0);

  // Narrowing with power is unphysical.
  std::vector<double> shrinking = widths;
  std::reverse(shrinking.begin(), shrinking.end());
  CHECK_THROWS_AS(power_broadening_fit(n_s, shrinking, g), numerical_error);
}

TEST_CASE("dephasing decomposition") {
  CHECK(dephasing_decomposition(15.849, 17.466) == doctest::Approx(38.90).epsilon(0.005));
  CHECK(std::isinf(dephasing_decomposition(10.0, 20.0)));
  // Tphi >> T1 pushes T2s toward 2 T1.
  double t2s = 1.0 / (1.0 / (2.0 * 10.0) + 1.0 / 1e9);
  CHECK(dephasing_decomposition(10.0, t2s) == doctest::Approx(1e9).epsilon(1e-3));
  CHECK_THROWS_AS(dephasing_decomposition(10.0, 25.0), invalid_input);

  // Inverse identity: rebuild 1/T2s from (T1, Tphi).
  double tphi = dephasing_decomposition(15.849, 17.466);
  CHECK(1.0 / (2.0 * 15.849) + 1.0 / tphi == doctest::Approx(1.0 / 17.466).epsilon(1e-12));
}

TEST_CASE("quality factor") {
  CHECK(quality_factor(72.137, 15.849) == doctest::Approx(7183.0).epsilon(0.002));
  CHECK(quality_factor(72.137, 31.698) == doctest::Approx(2.0 * quality_factor(72.137, 15.849)));
  CHECK(quality_factor(1.0 / constants::two_pi, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(quality_factor(-72.0, 15.849), invalid_input);
}

TEST_CASE("uncertainties shrink roughly as one over root N") {
  auto fit_sigma = [](int n) {
    auto t = linspace(0.0, 60.0, n);
    std::vector<double> clean;
    for (double tk : t) clean.push_back(std::exp(-tk / 15.0));
    FitResult fr = fit_exponential(t, with_noise(clean, 0.02, 11));
    return fr.sigmas.at("T");
  };
  double s50 = fit_sigma(50);
  double s200 = fit_sigma(200);
  CHECK(s200 < s50);
  CHECK(s50 / s200 == doctest::Approx(2.0).epsilon(0.5));
}

TEST_CASE("broadening roundtrip through the analytic width law is exact") {
  // Same law the two-tone generator uses, fed straight back into the fit.
  const double T1 = 47.3, T2 = 20.9, g = 0.607979;
  std::vector<double> n_s = {0.002, 0.02, 0.05};
  std::vector<double> widths;
  for (double n : n_s)
    widths.push_back(std::sqrt(1.0 / (T2 * T2) + n * g * g * T1 / T2) / constants::two_pi);
  FitResult fr = power_broadening_fit(n_s, widths, g);
  CHECK(fr.values.at("T1") == doctest::Approx(T1).epsilon(1e-6));
  CHECK(fr.values.at("T2") == doctest::Approx(T2).epsilon(1e-6));
}
