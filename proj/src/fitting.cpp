#include "mmq/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

#include "mmq/constants.hpp"
#include "mmq/errors.hpp"

namespace mmq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_series(const std::vector<double>& t, const std::vector<double>& y,
                    std::size_t min_points, const char* who) {
  if (t.size() != y.size())
    throw invalid_input(std::string(who) + ": x and y lengths differ");
  if (t.size() < min_points)
    throw invalid_input(std::string(who) + ": need at least " + std::to_string(min_points) +
                        " points");
  for (double v : t)
    if (!std::isfinite(v)) throw invalid_input(std::string(who) + ": non-finite x value");
  for (double v : y)
    if (!std::isfinite(v)) throw invalid_input(std::string(who) + ": non-finite y value");
}

void require_increasing(const std::vector<double>& t, const char* who) {
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw invalid_input(std::string(who) + ": x must be strictly increasing");
}

double spread(const std::vector<double>& y) {
  auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  return *hi - *lo;
}

double mean_of(const std::vector<double>& y) {
  return std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
}

// Ordinary least squares y = a + b x with standard errors.
struct LineFit {
  double intercept = 0, slope = 0;
  double sigma_intercept = 0, sigma_slope = 0;
  double ss_res = 0, ss_tot = 0;
};

LineFit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  const double xm = mean_of(x), ym = mean_of(y);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (sxx <= 0) throw invalid_input("line fit: x values are all equal");
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = ym - out.slope * xm;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    out.ss_res += r * r;
    out.ss_tot += (y[i] - ym) * (y[i] - ym);
  }
  const double dof = std::max(n - 2.0, 1.0);
  const double s2 = out.ss_res / dof;
  out.sigma_slope = std::sqrt(s2 / sxx);
  out.sigma_intercept = std::sqrt(s2 * (1.0 / n + xm * xm / sxx));
  return out;
}

Eigen::VectorXd lm_sigmas(const Eigen::MatrixXd& J, double cost) {
  // Pseudo-inverse of J'J scaled by residual variance; rank-deficient
  // directions contribute zero rather than blowing up.
  const auto n = J.rows();
  const auto k = J.cols();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = sv.size() ? sv(0) * 1e-12 : 0.0;
  const double dof = std::max<double>(static_cast<double>(n - k), 1.0);
  const double s2 = cost / dof;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    double var = 0;
    for (Eigen::Index j = 0; j < sv.size(); ++j) {
      if (sv(j) <= cutoff) continue;
      const double vij = svd.matrixV()(i, j);
      var += vij * vij / (sv(j) * sv(j));
    }
    out(i) = std::sqrt(std::max(var * s2, 0.0));
  }
  return out;
}

double wrap_angle(double a) {
  a = std::fmod(a, constants::two_pi);
  if (a > constants::pi) a -= constants::two_pi;
  if (a <= -constants::pi) a += constants::two_pi;
  return a;
}

}  // namespace

LMOutcome levenberg_marquardt(const ResidualFn& fn, Eigen::VectorXd p0, int n_residuals,
                              const LMOptions& opts) {
  const auto k = p0.size();
  Eigen::VectorXd r(n_residuals);
  Eigen::MatrixXd J(n_residuals, k);
  fn(p0, r, J);
  double cost = r.squaredNorm();

  LMOutcome out;
  out.p = p0;
  double lambda = opts.lambda_init;
  Eigen::VectorXd r_try(n_residuals);
  Eigen::MatrixXd J_try(n_residuals, k);

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    out.iterations = iter;
    Eigen::VectorXd grad = J.transpose() * r;
    if (grad.lpNorm<Eigen::Infinity>() < opts.gradient_tol) {
      out.converged = true;
      break;
    }
    Eigen::MatrixXd A = J.transpose() * J;
    Eigen::VectorXd damp = A.diagonal().cwiseMax(1e-30);
    A.diagonal() += lambda * damp;
    Eigen::VectorXd step = A.ldlt().solve(-grad);
    if (!step.allFinite()) {
      lambda *= opts.lambda_up;
      continue;
    }
    Eigen::VectorXd p_try = out.p + step;
    fn(p_try, r_try, J_try);
    const double cost_try = r_try.squaredNorm();
    if (std::isfinite(cost_try) && cost_try < cost) {
      out.p = p_try;
      r.swap(r_try);
      J.swap(J_try);
      cost = cost_try;
      lambda = std::max(lambda / opts.lambda_down, 1e-12);
      if (step.norm() < opts.step_tol * (out.p.norm() + opts.step_tol)) {
        out.converged = true;
        break;
      }
    } else {
      lambda *= opts.lambda_up;
      if (lambda > 1e14) break;
    }
  }
  if (!out.converged) {
    const Eigen::VectorXd grad = J.transpose() * r;
    out.converged = grad.lpNorm<Eigen::Infinity>() < opts.gradient_tol;
  }
  out.residual_norm = std::sqrt(cost);
  out.sigma = lm_sigmas(J, cost);
  return out;
}

FitResult fit_exponential(const std::vector<double>& t, const std::vector<double>& y) {
  require_series(t, y, 4, "fit_exponential");
  require_increasing(t, "fit_exponential");
  const auto n = static_cast<int>(t.size());

  FitResult res;
  const double range = spread(y);
  const double scale = std::max(std::abs(mean_of(y)), range);
  if (range <= 1e-12 * std::max(1.0, scale)) {
    res.values = {{"amplitude", 0.0}, {"T", kInf}, {"offset", mean_of(y)}};
    res.sigmas = {{"amplitude", 0.0}, {"T", kInf}, {"offset", 0.0}};
    res.converged = true;
    res.degenerate = true;
    res.note = "constant input; decay time unconstrained";
    return res;
  }

  // Seed from log-linear regression on the min-shifted data.
  const double ymin = *std::min_element(y.begin(), y.end());
  std::vector<double> tl, yl;
  for (int i = 0; i < n; ++i) {
    const double v = y[static_cast<std::size_t>(i)] - ymin;
    if (v > 1e-9 * range) {
      tl.push_back(t[static_cast<std::size_t>(i)]);
      yl.push_back(std::log(v));
    }
  }
  double a0 = range, r0 = 1.0 / std::max(t.back() - t.front(), 1e-12), c0 = ymin;
  if (tl.size() >= 2) {
    try {
      const LineFit lf = line_fit(tl, yl);
      if (std::isfinite(lf.slope) && lf.slope < 0) r0 = -lf.slope;
      if (std::isfinite(lf.intercept)) a0 = std::exp(std::min(lf.intercept, 700.0));
    } catch (const invalid_input&) {
    }
  }

  auto fn = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& J) {
    const double a = p(0), rate = p(1), c = p(2);
    for (int i = 0; i < n; ++i) {
      const double e = std::exp(-rate * t[static_cast<std::size_t>(i)]);
      r(i) = a * e + c - y[static_cast<std::size_t>(i)];
      J(i, 0) = e;
      J(i, 1) = -a * t[static_cast<std::size_t>(i)] * e;
      J(i, 2) = 1.0;
    }
  };
  Eigen::VectorXd p0(3);
  p0 << a0, r0, c0;
  const LMOutcome lm = levenberg_marquardt(fn, p0, n);

  const double rate = lm.p(1);
  res.residual_norm = lm.residual_norm;
  res.converged = lm.converged;
  res.iterations = lm.iterations;
  res.values["amplitude"] = lm.p(0);
  res.values["offset"] = lm.p(2);
  res.sigmas["amplitude"] = lm.sigma(0);
  res.sigmas["offset"] = lm.sigma(2);
  const double rate_floor = 1e-12 / std::max(t.back() - t.front(), 1e-12);
  if (!(rate > rate_floor)) {
    res.values["T"] = kInf;
    res.sigmas["T"] = kInf;
    res.degenerate = true;
    res.note = "decay rate consistent with zero";
  } else {
    res.values["T"] = 1.0 / rate;
    res.sigmas["T"] = lm.sigma(1) / (rate * rate);
  }
  if (!lm.converged && res.note.empty()) res.note = "iteration cap reached";
  return res;
}

FitResult fit_damped_cosine(const std::vector<double>& t, const std::vector<double>& y) {
  require_series(t, y, 8, "fit_damped_cosine");
  require_increasing(t, "fit_damped_cosine");
  const auto n = static_cast<int>(t.size());
  const double span = t.back() - t.front();

  FitResult res;
  const double range = spread(y);
  if (range <= 1e-12 * std::max(1.0, std::abs(mean_of(y)))) {
    res.values = {{"amplitude", 0.0},
                  {"T2s", kInf},
                  {"freq", 0.0},
                  {"phase", 0.0},
                  {"offset", mean_of(y)}};
    res.sigmas = {
        {"amplitude", 0.0}, {"T2s", kInf}, {"freq", 0.0}, {"phase", 0.0}, {"offset", 0.0}};
    res.converged = true;
    res.degenerate = true;
    res.note = "no oscillation amplitude";
    return res;
  }

  // Frequency/phase seed from the dominant discrete Fourier component.
  const double ymean = mean_of(y);
  const double dt = span / (n - 1);
  int k_peak = 1;
  double best = -1;
  std::complex<double> x_peak = 0;
  for (int k = 1; k <= n / 2; ++k) {
    std::complex<double> xk = 0;
    for (int j = 0; j < n; ++j) {
      const double ang = -constants::two_pi * j * k / static_cast<double>(n);
      xk += (y[static_cast<std::size_t>(j)] - ymean) *
            std::complex<double>(std::cos(ang), std::sin(ang));
    }
    if (std::abs(xk) > best) {
      best = std::abs(xk);
      k_peak = k;
      x_peak = xk;
    }
  }
  if (k_peak >= static_cast<int>(0.45 * n))
    throw invalid_input(
        "fit_damped_cosine: dominant frequency too close to the sampling limit, undersampled "
        "oscillation");
  const double f0 = k_peak / (n * dt);
  const double phi0 = wrap_angle(std::arg(x_peak) - constants::two_pi * f0 * t.front());
  const double a0 = 2.0 * best / n;
  const double r0 = 1.0 / span;

  auto fn = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& J) {
    const double a = p(0), rate = p(1), f = p(2), ph = p(3), c = p(4);
    for (int i = 0; i < n; ++i) {
      const double ti = t[static_cast<std::size_t>(i)];
      const double e = std::exp(-rate * ti);
      const double ang = constants::two_pi * f * ti + ph;
      const double cs = std::cos(ang), sn = std::sin(ang);
      r(i) = a * e * cs + c - y[static_cast<std::size_t>(i)];
      J(i, 0) = e * cs;
      J(i, 1) = -a * ti * e * cs;
      J(i, 2) = -a * e * sn * constants::two_pi * ti;
      J(i, 3) = -a * e * sn;
      J(i, 4) = 1.0;
    }
  };
  Eigen::VectorXd p0(5);
  p0 << a0, r0, f0, phi0, ymean;
  const LMOutcome lm = levenberg_marquardt(fn, p0, n);

  double amp = lm.p(0), rate = lm.p(1), freq = lm.p(2), phase = lm.p(3), off = lm.p(4);
  if (amp < 0) {
    amp = -amp;
    phase += constants::pi;
  }
  if (freq < 0) {
    freq = -freq;
    phase = -phase;
  }
  phase = wrap_angle(phase);

  res.residual_norm = lm.residual_norm;
  res.converged = lm.converged;
  res.iterations = lm.iterations;
  res.values = {{"amplitude", amp}, {"freq", freq}, {"phase", phase}, {"offset", off}};
  res.sigmas = {{"amplitude", lm.sigma(0)},
                {"freq", lm.sigma(2)},
                {"phase", lm.sigma(3)},
                {"offset", lm.sigma(4)}};
  const double rate_floor = 1e-12 / span;
  if (!(rate > rate_floor)) {
    res.values["T2s"] = kInf;
    res.sigmas["T2s"] = kInf;
    res.degenerate = true;
    res.note = "decay rate consistent with zero";
  } else {
    res.values["T2s"] = 1.0 / rate;
    res.sigmas["T2s"] = lm.sigma(1) / (rate * rate);
  }
  if (!lm.converged && res.note.empty()) res.note = "iteration cap reached";
  return res;
}

namespace {

std::vector<double> moving_average(const std::vector<double>& v, int half) {
  const auto n = static_cast<int>(v.size());
  std::vector<double> out(v.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double s = 0;
    for (int j = lo; j <= hi; ++j) s += v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s / (hi - lo + 1);
  }
  return out;
}

struct PeakSeed {
  double amp, center, width;
};

// Largest local maximum of the smoothed residual; width from half-max crossings.
PeakSeed seed_from_residual(const std::vector<double>& f, const std::vector<double>& resid,
                            double floor_level) {
  const auto n = static_cast<int>(f.size());
  const int half = std::max(1, n / 100);
  const std::vector<double> sm = moving_average(resid, half);
  int best = -1;
  for (int i = 0; i < n; ++i) {
    const double v = sm[static_cast<std::size_t>(i)];
    if (v <= floor_level) continue;
    const bool left_ok = i == 0 || sm[static_cast<std::size_t>(i - 1)] <= v;
    const bool right_ok = i == n - 1 || sm[static_cast<std::size_t>(i + 1)] <= v;
    if (!left_ok || !right_ok) continue;
    if (best < 0 || v > sm[static_cast<std::size_t>(best)]) best = i;
  }
  if (best < 0)
    throw invalid_input("fit_peaks: requested more peaks than resolvable local maxima");
  const double peak = sm[static_cast<std::size_t>(best)];
  int lo = best, hi = best;
  while (lo > 0 && sm[static_cast<std::size_t>(lo)] > 0.5 * peak) --lo;
  while (hi < n - 1 && sm[static_cast<std::size_t>(hi)] > 0.5 * peak) ++hi;
  const double grid_step = (f.back() - f.front()) / std::max(n - 1, 1);
  double width = 0.5 * (f[static_cast<std::size_t>(hi)] - f[static_cast<std::size_t>(lo)]);
  width = std::clamp(width, 2.0 * grid_step, 0.5 * (f.back() - f.front()));
  return {resid[static_cast<std::size_t>(best)], f[static_cast<std::size_t>(best)], width};
}

}  // namespace

FitResult fit_peaks(const std::vector<double>& f, const std::vector<double>& y, int n_peaks,
                    PeakShape shape) {
  (void)shape;
  if (n_peaks < 1) throw invalid_input("fit_peaks: n_peaks must be at least 1");
  require_series(f, y, static_cast<std::size_t>(3 * n_peaks + 1) + 1, "fit_peaks");
  require_increasing(f, "fit_peaks");
  const auto n = static_cast<int>(f.size());
  const double ln2 = std::log(2.0);

  FitResult res;
  const double range = spread(y);
  if (range <= 1e-12 * std::max(1.0, std::abs(mean_of(y)))) {
    const double c = mean_of(y);
    for (int i = 0; i < n_peaks; ++i) {
      const std::string s = std::to_string(i);
      res.values["amp" + s] = 0.0;
      res.values["center" + s] = 0.5 * (f.front() + f.back());
      res.values["sigma" + s] = 0.0;
      res.sigmas["amp" + s] = res.sigmas["center" + s] = res.sigmas["sigma" + s] = 0.0;
    }
    res.values["offset"] = c;
    res.sigmas["offset"] = 0.0;
    res.converged = true;
    res.degenerate = true;
    res.note = "flat input; zero-amplitude peaks";
    return res;
  }

  // Sequential seeding: fit k peaks, seed peak k+1 from the smoothed residual.
  // The floor rejects residual wiggle once all real structure is modeled.
  const double offset0 = *std::min_element(y.begin(), y.end());
  const double floor_level = 5e-3 * range;
  std::vector<PeakSeed> seeds;
  Eigen::VectorXd p;
  LMOutcome lm;

  auto model_fn = [&](int k_peaks) {
    return [&, k_peaks](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd& J) {
      for (int i = 0; i < n; ++i) {
        const double fi = f[static_cast<std::size_t>(i)];
        double m = q(3 * k_peaks);
        for (int j = 0; j < k_peaks; ++j) {
          const double a = q(3 * j), c = q(3 * j + 1), w = q(3 * j + 2);
          const double d = fi - c;
          const double g = std::exp(-ln2 * d * d / (w * w));
          m += a * g;
          J(i, 3 * j) = g;
          J(i, 3 * j + 1) = a * g * 2.0 * ln2 * d / (w * w);
          J(i, 3 * j + 2) = a * g * 2.0 * ln2 * d * d / (w * w * w);
        }
        J(i, 3 * k_peaks) = 1.0;
        r(i) = m - y[static_cast<std::size_t>(i)];
      }
    };
  };

  for (int k = 0; k < n_peaks; ++k) {
    std::vector<double> resid(y.size());
    for (int i = 0; i < n; ++i) {
      const double fi = f[static_cast<std::size_t>(i)];
      double m = seeds.empty() ? offset0 : p(3 * k);
      for (int j = 0; j < k; ++j) {
        const double d = fi - p(3 * j + 1);
        const double w = p(3 * j + 2);
        m += p(3 * j) * std::exp(-ln2 * d * d / (w * w));
      }
      resid[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] - m;
    }
    seeds.push_back(seed_from_residual(f, resid, floor_level));

    Eigen::VectorXd q(3 * (k + 1) + 1);
    for (int j = 0; j < k; ++j) {
      q(3 * j) = p(3 * j);
      q(3 * j + 1) = p(3 * j + 1);
      q(3 * j + 2) = p(3 * j + 2);
    }
    q(3 * k) = seeds.back().amp;
    q(3 * k + 1) = seeds.back().center;
    q(3 * k + 2) = seeds.back().width;
    q(3 * (k + 1)) = k == 0 ? offset0 : p(3 * k);
    lm = levenberg_marquardt(model_fn(k + 1), q, n);
    p = lm.p;
  }

  // Stable presentation: widths positive, peaks ordered by center.
  std::vector<int> order(static_cast<std::size_t>(n_peaks));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return p(3 * a + 1) < p(3 * b + 1); });
  res.residual_norm = lm.residual_norm;
  res.converged = lm.converged;
  res.iterations = lm.iterations;
  for (int i = 0; i < n_peaks; ++i) {
    const int j = order[static_cast<std::size_t>(i)];
    const std::string s = std::to_string(i);
    res.values["amp" + s] = p(3 * j);
    res.values["center" + s] = p(3 * j + 1);
    res.values["sigma" + s] = std::abs(p(3 * j + 2));
    res.sigmas["amp" + s] = lm.sigma(3 * j);
    res.sigmas["center" + s] = lm.sigma(3 * j + 1);
    res.sigmas["sigma" + s] = lm.sigma(3 * j + 2);
  }
  res.values["offset"] = p(3 * n_peaks);
  res.sigmas["offset"] = lm.sigma(3 * n_peaks);
  if (!lm.converged) res.note = "iteration cap reached";
  return res;
}

StarkCalibration stark_calibration(const std::vector<double>& powers_mW,
                                   const std::vector<double>& centers_GHz, double chi_known) {
  require_series(powers_mW, centers_GHz, 3, "stark_calibration");
  if (chi_known == 0) throw invalid_input("stark_calibration: chi_known must be nonzero");

  StarkCalibration cal;
  cal.chi_fit = chi_known;

  const double center_range = spread(centers_GHz);
  if (center_range <= 1e-15 * std::max(1.0, std::abs(mean_of(centers_GHz)))) {
    cal.f_ge0 = mean_of(centers_GHz);
    cal.photons_per_milliwatt = 0;
    cal.slope_per_milliwatt = 0;
    cal.r_squared = 0;
    cal.r_squared_defined = false;
    cal.warning = "centers do not vary with power; calibration factor is zero";
    return cal;
  }

  const LineFit lf = line_fit(powers_mW, centers_GHz);
  cal.slope_per_milliwatt = lf.slope;
  cal.f_ge0 = lf.intercept;
  cal.photons_per_milliwatt = -lf.slope / chi_known;
  cal.r_squared = lf.ss_tot > 0 ? 1.0 - lf.ss_res / lf.ss_tot : 0.0;
  cal.r_squared_defined = lf.ss_tot > 0;
  if (cal.photons_per_milliwatt < 0)
    cal.warning = "slope sign inconsistent with the supplied per-photon shift";
  else if (cal.r_squared < 0.9)
    cal.warning = "centers deviate from linearity beyond noise";
  return cal;
}

FitResult power_broadening_fit(const std::vector<double>& n_s,
                               const std::vector<double>& sigma_hwhm_GHz, double g) {
  require_series(n_s, sigma_hwhm_GHz, 3, "power_broadening_fit");
  if (!(g > 0)) throw invalid_input("power_broadening_fit: coupling g must be positive");
  double n_max = 0;
  for (double v : n_s) {
    if (v < 0) throw invalid_input("power_broadening_fit: photon numbers must be nonnegative");
    n_max = std::max(n_max, v);
  }
  for (double v : sigma_hwhm_GHz)
    if (!(v > 0)) throw invalid_input("power_broadening_fit: widths must be positive");

  std::vector<double> y(n_s.size());
  for (std::size_t i = 0; i < n_s.size(); ++i) {
    const double w = constants::two_pi * sigma_hwhm_GHz[i];
    y[i] = w * w;
  }
  const LineFit lf = line_fit(n_s, y);
  if (lf.intercept <= 0)
    throw numerical_error(
        "power_broadening_fit: nonpositive zero-power intercept, widths are inconsistent with "
        "a finite dephasing time");

  FitResult res;
  res.converged = true;
  res.residual_norm = std::sqrt(lf.ss_res);
  res.values["intercept"] = lf.intercept;
  res.values["slope"] = lf.slope;
  res.sigmas["intercept"] = lf.sigma_intercept;
  res.sigmas["slope"] = lf.sigma_slope;

  const double T2 = 1.0 / std::sqrt(lf.intercept);
  const double sigma_T2 = 0.5 * std::pow(lf.intercept, -1.5) * lf.sigma_intercept;
  res.values["T2"] = T2;
  res.sigmas["T2"] = sigma_T2;

  if (std::abs(lf.slope) * n_max < 1e-10 * lf.intercept) {
    res.values["T1"] = 0.0;
    res.sigmas["T1"] = 0.0;
    res.degenerate = true;
    res.note = "no power dependence; relaxation contribution unresolved";
    return res;
  }
  if (lf.slope < 0)
    throw numerical_error("power_broadening_fit: widths narrow with power, unphysical fit");
  const double T1 = lf.slope * T2 / (g * g);
  const double sigma_T1 = std::sqrt(std::pow(T2 / (g * g) * lf.sigma_slope, 2) +
                                    std::pow(lf.slope / (g * g) * sigma_T2, 2));
  res.values["T1"] = T1;
  res.sigmas["T1"] = sigma_T1;
  return res;
}

double dephasing_decomposition(double T1, double T2s) {
  if (!(T1 > 0) || !(T2s > 0))
    throw invalid_input("dephasing_decomposition: times must be positive");
  if (T2s > 2.0 * T1 * (1.0 + 1e-12))
    throw invalid_input("dephasing_decomposition: T2* exceeds 2 T1, unphysical input");
  const double inv = 1.0 / T2s - 1.0 / (2.0 * T1);
  if (inv <= 0) return kInf;
  return 1.0 / inv;
}

double quality_factor(double f01, double T1) {
  if (!(f01 > 0) || !(T1 > 0)) throw invalid_input("quality_factor: inputs must be positive");
  return constants::two_pi * f01 * T1;
}

}  // namespace mmq
