#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mmq {

struct FitResult {
  std::map<std::string, double> values;
  std::map<std::string, double> sigmas;  // 1-sigma uncertainties
  double residual_norm = 0;
  bool converged = false;
  bool degenerate = false;
  std::string note;
  int iterations = 0;
};

// Fills residuals r (model - data) and the Jacobian dr/dp at p.
using ResidualFn =
    std::function<void(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& J)>;

struct LMOptions {
  int max_iterations = 200;
  double gradient_tol = 1e-10;
  double lambda_init = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 10.0;
  double step_tol = 1e-14;
};

struct LMOutcome {
  Eigen::VectorXd p;
  Eigen::VectorXd sigma;
  double residual_norm = 0;
  bool converged = false;
  int iterations = 0;
};

// Damped least squares; damping is scaled by diag(J'J) and adapted whenever a
// step raises the residual. Uncertainties come from the pseudo-inverse of J'J
// at the optimum scaled by the residual variance.
LMOutcome levenberg_marquardt(const ResidualFn& fn, Eigen::VectorXd p0, int n_residuals,
                              const LMOptions& opts = {});

// a exp(-t/T) + c, seeded by log-linear regression on y - min(y).
// Keys: amplitude, T, offset.
FitResult fit_exponential(const std::vector<double>& t, const std::vector<double>& y);

// a exp(-t/T2s) cos(2 pi f t + phi) + c, frequency seeded from a discrete
// Fourier peak. Keys: amplitude, T2s, freq, phase, offset.
FitResult fit_damped_cosine(const std::vector<double>& t, const std::vector<double>& y);

enum class PeakShape { gaussian };

// Sum of Gaussians A_i exp(-ln2 (f - c_i)^2 / w_i^2) + offset, with w the
// half width at half maximum. Keys: amp<i>, center<i>, sigma<i>, offset.
// Peaks are seeded sequentially from the residual so overlapping lines
// (for example a main line plus a two-photon line) fit jointly.
FitResult fit_peaks(const std::vector<double>& f, const std::vector<double>& y, int n_peaks,
                    PeakShape shape = PeakShape::gaussian);

struct StarkCalibration {
  double f_ge0 = 0;                  // zero-photon qubit frequency, GHz
  double chi_fit = 0;                // per-photon shift used, GHz
  double photons_per_milliwatt = 0;  // calibration factor k
  double slope_per_milliwatt = 0;    // raw regression slope, GHz/mW
  double r_squared = 0;
  bool r_squared_defined = true;
  std::string warning;
};

// Linear regression of peak centers against power: center = f_ge0 - chi k P.
StarkCalibration stark_calibration(const std::vector<double>& powers_mW,
                                   const std::vector<double>& centers_GHz, double chi_known);

// Linear fit of (2 pi sigma)^2 against drive photon number n_s:
// intercept 1/T2^2, slope g^2 T1/T2. Keys: T1, T2, intercept, slope.
FitResult power_broadening_fit(const std::vector<double>& n_s,
                               const std::vector<double>& sigma_hwhm_GHz, double g);

// Tphi from 1/T2* = 1/Tphi + 1/(2 T1). T2s = 2 T1 gives infinity.
double dephasing_decomposition(double T1, double T2s);

// Q1 = 2 pi f01 T1.
double quality_factor(double f01, double T1);

}  // namespace mmq
