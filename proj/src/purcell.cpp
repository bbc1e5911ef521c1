#include "mmq/purcell.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mmq/constants.hpp"
#include "mmq/errors.hpp"

namespace mmq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Natural cubic spline second derivatives for strictly increasing x.
std::vector<double> spline_curvature(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = x.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    a[i] = h0;
    b[i] = 2.0 * (h0 + h1);
    c[i] = h1;
    d[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
  }
  // Thomas sweep over the interior rows, natural ends m[0] = m[n-1] = 0.
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m[i] = (d[i] - c[i] * (i + 2 < n ? m[i + 1] : 0.0)) / b[i];
    if (i == 1) break;
  }
  return m;
}

double spline_eval(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& m, double v) {
  const auto hi_it = std::upper_bound(x.begin(), x.end(), v);
  std::size_t hi = static_cast<std::size_t>(hi_it - x.begin());
  hi = std::clamp<std::size_t>(hi, 1, x.size() - 1);
  const std::size_t lo = hi - 1;
  const double h = x[hi] - x[lo];
  const double t = (v - x[lo]) / h;
  const double u = 1.0 - t;
  return u * y[lo] + t * y[hi] +
         h * h / 6.0 * ((u * u * u - u) * m[lo] + (t * t * t - t) * m[hi]);
}

}  // namespace

CircuitNetwork CircuitNetwork::resistor(double ohm) {
  if (!(ohm > 0)) throw invalid_input("circuit: resistance must be positive");
  CircuitNetwork n;
  n.kind_ = Kind::resistor;
  n.value_ = ohm;
  return n;
}

CircuitNetwork CircuitNetwork::inductor(double henry) {
  if (!(henry > 0)) throw invalid_input("circuit: inductance must be positive");
  CircuitNetwork n;
  n.kind_ = Kind::inductor;
  n.value_ = henry;
  return n;
}

CircuitNetwork CircuitNetwork::capacitor(double farad) {
  if (!(farad > 0)) throw invalid_input("circuit: capacitance must be positive");
  CircuitNetwork n;
  n.kind_ = Kind::capacitor;
  n.value_ = farad;
  return n;
}

CircuitNetwork CircuitNetwork::open_circuit() { return CircuitNetwork(); }

CircuitNetwork CircuitNetwork::series(std::vector<CircuitNetwork> parts) {
  if (parts.empty()) throw invalid_input("circuit: series needs at least one part");
  CircuitNetwork n;
  n.kind_ = Kind::series;
  n.parts_ = std::move(parts);
  return n;
}

CircuitNetwork CircuitNetwork::parallel(std::vector<CircuitNetwork> parts) {
  if (parts.empty()) throw invalid_input("circuit: parallel needs at least one part");
  CircuitNetwork n;
  n.kind_ = Kind::parallel;
  n.parts_ = std::move(parts);
  return n;
}

CircuitNetwork CircuitNetwork::tabulated(std::vector<double> omega_rad_s,
                                         std::vector<complexd> admittance) {
  if (omega_rad_s.size() != admittance.size())
    throw invalid_input("circuit: table lengths differ");
  if (omega_rad_s.size() < 2) throw invalid_input("circuit: table needs at least two rows");
  for (std::size_t i = 0; i < omega_rad_s.size(); ++i) {
    if (!(omega_rad_s[i] > 0)) throw invalid_input("circuit: table frequencies must be positive");
    if (i > 0 && !(omega_rad_s[i] > omega_rad_s[i - 1]))
      throw invalid_input("circuit: table frequencies must be strictly increasing");
  }
  CircuitNetwork n;
  n.kind_ = Kind::tabulated;
  n.tab_omega_ = std::move(omega_rad_s);
  n.tab_re_.reserve(admittance.size());
  n.tab_im_.reserve(admittance.size());
  for (const complexd& y : admittance) {
    n.tab_re_.push_back(y.real());
    n.tab_im_.push_back(y.imag());
  }
  n.curv_re_ = spline_curvature(n.tab_omega_, n.tab_re_);
  n.curv_im_ = spline_curvature(n.tab_omega_, n.tab_im_);
  return n;
}

CircuitNetwork CircuitNetwork::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("circuit: cannot open admittance table " + path);
  std::vector<double> omega;
  std::vector<complexd> y;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream is(line.substr(first));
    double f_GHz, re, im;
    if (!(is >> f_GHz >> re >> im)) {
      std::ostringstream os;
      os << "circuit: " << path << " line " << line_no << ": expected three numeric columns";
      throw invalid_input(os.str());
    }
    omega.push_back(constants::two_pi * f_GHz * 1e9);
    y.emplace_back(re, im);
  }
  if (omega.size() < 2)
    throw invalid_input("circuit: admittance table " + path + " has fewer than two rows");
  return tabulated(std::move(omega), std::move(y));
}

std::pair<double, double> CircuitNetwork::domain() const {
  switch (kind_) {
    case Kind::tabulated:
      return {tab_omega_.front(), tab_omega_.back()};
    case Kind::series:
    case Kind::parallel: {
      double lo = 0, hi = kInf;
      for (const auto& p : parts_) {
        const auto d = p.domain();
        lo = std::max(lo, d.first);
        hi = std::min(hi, d.second);
      }
      return {lo, hi};
    }
    default:
      return {0, kInf};
  }
}

complexd CircuitNetwork::admittance(double omega) const {
  if (!(omega > 0)) throw invalid_input("circuit: omega must be positive");
  switch (kind_) {
    case Kind::open:
      return {0, 0};
    case Kind::resistor:
      return {1.0 / value_, 0};
    case Kind::inductor:
      return {0, 1.0 / (omega * value_)};
    case Kind::capacitor:
      return {0, -omega * value_};
    case Kind::parallel: {
      complexd y = 0;
      for (const auto& p : parts_) y += p.admittance(omega);
      return y;
    }
    case Kind::series: {
      complexd z = 0;
      for (const auto& p : parts_) {
        const complexd y = p.admittance(omega);
        if (y == complexd(0, 0)) return {0, 0};  // an open branch opens the chain
        z += 1.0 / y;
      }
      if (z == complexd(0, 0))
        throw numerical_error("circuit: series impedance vanished; admittance undefined");
      return 1.0 / z;
    }
    case Kind::tabulated: {
      const double slack = 1e-9 * tab_omega_.back();
      if (omega < tab_omega_.front() - slack || omega > tab_omega_.back() + slack) {
        std::ostringstream os;
        os << "circuit: omega " << omega << " rad/s outside the tabulated range ["
           << tab_omega_.front() << ", " << tab_omega_.back() << "]";
        throw invalid_input(os.str());
      }
      const double w = std::clamp(omega, tab_omega_.front(), tab_omega_.back());
      return {spline_eval(tab_omega_, tab_re_, curv_re_, w),
              spline_eval(tab_omega_, tab_im_, curv_im_, w)};
    }
  }
  throw numerical_error("circuit: unreachable network kind");
}

complexd CircuitNetwork::impedance(double omega) const {
  const complexd y = admittance(omega);
  if (y == complexd(0, 0))
    throw numerical_error("circuit: open network has no finite impedance");
  return 1.0 / y;
}

complexd junction_admittance(double omega, const JunctionBranch& j) {
  if (!(omega > 0)) throw invalid_input("junction_admittance: omega must be positive");
  if (!(j.L_J > 0) || !(j.C_J > 0))
    throw invalid_input("junction_admittance: L_J and C_J must be positive");
  return {0, -omega * j.C_J + 1.0 / (omega * j.L_J)};
}

std::vector<double> mode_frequencies(const CircuitNetwork& net, const JunctionBranch& j,
                                     double omega_lo, double omega_hi, int scan_points) {
  if (!(omega_lo > 0) || !(omega_hi > omega_lo))
    throw invalid_input("mode_frequencies: need 0 < omega_lo < omega_hi");
  if (scan_points < 3) throw invalid_input("mode_frequencies: need at least 3 scan points");

  auto im_y = [&](double w) {
    return (net.admittance(w) + junction_admittance(w, j)).imag();
  };

  std::vector<double> roots;
  const int n = scan_points;
  double w_prev = omega_lo;
  double f_prev = im_y(w_prev);
  for (int k = 1; k < n; ++k) {
    const double w_k = omega_lo + (omega_hi - omega_lo) * k / (n - 1);
    const double f_k = im_y(w_k);
    if (f_prev == 0.0) {
      roots.push_back(w_prev);
    } else if (f_prev * f_k < 0) {
      double a = w_prev, b = w_k, fa = f_prev;
      const double edge = std::min(std::abs(f_prev), std::abs(f_k));
      for (int it = 0; it < 200 && (b - a) > 1e-9 * 0.5 * (a + b); ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = im_y(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if (fa * fm < 0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      const double root = 0.5 * (a + b);
      // A pole also flips sign but stays large; a zero collapses below both
      // bracket-edge magnitudes.
      if (std::abs(im_y(root)) < edge) roots.push_back(root);
    }
    w_prev = w_k;
    f_prev = f_k;
  }
  if (f_prev == 0.0) roots.push_back(w_prev);

  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots)
    if (out.empty() || r - out.back() > 1e-8 * r) out.push_back(r);
  return out;
}

PurcellEstimate purcell_time(const CircuitNetwork& net, const JunctionBranch& j,
                             double omega_q) {
  if (!(omega_q > 0)) throw invalid_input("purcell_time: omega must be positive");
  auto y_total = [&](double w) { return net.admittance(w) + junction_admittance(w, j); };

  const double re_y = y_total(omega_q).real();
  if (re_y <= 0) return {kInf, false};

  auto central = [&](double h) {
    return (y_total(omega_q + h).imag() - y_total(omega_q - h).imag()) / (2.0 * h);
  };
  const double h = 1e-6 * omega_q;
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  const double dim_dw = (4.0 * d2 - d1) / 3.0;

  // Susceptance falls with frequency in this sign convention, so -Im Y' > 0
  // for a passive network.
  const double seconds = 0.5 * (-dim_dw) / re_y;
  return {seconds, std::isfinite(seconds)};
}

double analytic_purcell(double g_GHz, double Delta_GHz, double kappa_GHz) {
  const double g = std::abs(g_GHz);
  const double Delta = std::abs(Delta_GHz);
  const double kappa = std::abs(kappa_GHz);
  if (!(Delta > 0)) throw invalid_input("analytic_purcell: Delta must be nonzero");
  if (g == 0 || kappa == 0) return kInf;
  return Delta * Delta / (g * g * kappa) / constants::two_pi;
}

EquivalentCircuit equivalent_circuit(const DeviceParams& p, double C_r_fF) {
  if (!(C_r_fF > 0)) throw invalid_input("equivalent_circuit: C_r must be positive");
  validate_device(p);

  EquivalentCircuit eq;
  const double L_J = josephson_inductance_pH(p.E_J) * 1e-12;
  const double omega_q = constants::two_pi * p.f01 * 1e9;
  const double omega_r = constants::two_pi * p.f_RR_bare * 1e9;
  const double C_q = 1.0 / (L_J * omega_q * omega_q);
  const double C_r = C_r_fF * 1e-15;
  const double L_r = 1.0 / (C_r * omega_r * omega_r);
  eq.Q = p.f_RR_bare / p.kappa;
  const double R = eq.Q / (omega_r * C_r);
  // Capacitive coupling reproducing g = (C_c/2) sqrt(f_q f_r / (C_q C_r)).
  const double C_c = 2.0 * p.g * std::sqrt(C_q * C_r) / std::sqrt(p.f01 * p.f_RR_bare);

  eq.junction = {L_J, C_q};
  eq.network = CircuitNetwork::series(
      {CircuitNetwork::capacitor(C_c),
       CircuitNetwork::parallel({CircuitNetwork::resistor(R), CircuitNetwork::inductor(L_r),
                                 CircuitNetwork::capacitor(C_r)})});
  eq.C_q_fF = C_q * 1e15;
  eq.C_c_fF = C_c * 1e15;
  eq.L_r_pH = L_r * 1e12;
  eq.R_ohm = R;
  return eq;
}

}  // namespace mmq
