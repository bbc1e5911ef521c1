#include "mmq/lindblad.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "mmq/constants.hpp"
#include "mmq/errors.hpp"

namespace mmq {

std::vector<CollapseChannel> collapse_channels(double T1, double Tphi, double kappa,
                                               int N_q, int N_r, double nbar) {
  if (T1 <= 0 || Tphi <= 0)
    throw invalid_input("collapse_channels: T1 and Tphi must be positive (infinity disables)");
  if (kappa < 0) throw invalid_input("collapse_channels: kappa must be non-negative");
  if (nbar < 0) throw invalid_input("collapse_channels: nbar must be non-negative");
  HilbertSpec space{N_q, N_r};
  std::vector<CollapseChannel> out;
  if (std::isfinite(T1)) {
    Operator b = lowering_on(space, 0);
    out.push_back({b, 1.0 / T1});
    if (nbar > 0) out.push_back({dagger(b), nbar / T1});
  }
  if (std::isfinite(Tphi)) {
    Operator b = lowering_on(space, 0);
    out.push_back({dagger(b) * b, 2.0 / Tphi});
  }
  if (N_r > 1 && kappa > 0) {
    out.push_back({lowering_on(space, 1), constants::two_pi * kappa});
  }
  return out;
}

int TimeGrid::steps() const {
  return static_cast<int>(std::ceil((t1 - t0) / dt - 1e-12));
}

void TimeGrid::validate() const {
  if (dt <= 0) throw invalid_input("time grid: dt must be positive");
  if ((t1 - t0) / dt < 1.0 - 1e-12) throw invalid_input("time grid: span must cover at least one step");
}

void TimeDependentHamiltonian::evaluate(double t, Eigen::MatrixXcd& out) const {
  out = static_part.matrix;
  for (const auto& d : drives) add_drive(d, t, out);
}

namespace {

struct ChannelData {
  Eigen::MatrixXcd L;
  Eigen::MatrixXcd LdL;  // L' L
  double rate;
};

// out = -i 2 pi (H rho - rho H) + sum rate (L rho L' - (LdL rho + rho LdL)/2)
void rhs(const Eigen::MatrixXcd& H, const std::vector<ChannelData>& ch,
         const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& tmp, Eigen::MatrixXcd& out) {
  const complexd m_i_2pi(0.0, -constants::two_pi);
  tmp.noalias() = H * rho;
  tmp.noalias() -= rho * H;
  out = m_i_2pi * tmp;
  for (const auto& c : ch) {
    tmp.noalias() = c.L * rho * c.L.adjoint();
    tmp.noalias() -= 0.5 * (c.LdL * rho + rho * c.LdL);
    out.noalias() += c.rate * tmp;
  }
}

struct RecordTracker {
  int N_q = 1, N_r = 1;

  explicit RecordTracker(const HilbertSpec& space) {
    N_q = space.dims[0];
    N_r = space.dims.size() > 1 ? space.dims[1] : 1;
  }

  void append(const Eigen::MatrixXcd& rho, std::map<std::string, std::vector<double>>& rec) const {
    double P[3] = {0, 0, 0};
    double nq = 0, nr = 0;
    for (int q = 0; q < N_q; ++q) {
      double pq = 0;
      for (int r = 0; r < N_r; ++r) {
        double d = rho(q * N_r + r, q * N_r + r).real();
        pq += d;
        nr += r * d;
      }
      if (q < 3) P[q] = pq;
      nq += q * pq;
    }
    rec["P0"].push_back(P[0]);
    rec["P1"].push_back(P[1]);
    rec["P2"].push_back(P[2]);
    rec["nq"].push_back(nq);
    rec["nr"].push_back(nr);
  }
};

}  // namespace

Operator lindblad_derivative(const Operator& H, const std::vector<CollapseChannel>& channels,
                             const Operator& rho) {
  if (H.space != rho.space)
    throw invalid_input("lindblad_derivative: Hamiltonian and state live on different spaces");
  std::vector<ChannelData> ch;
  for (const auto& c : channels) {
    if (c.op.space != rho.space)
      throw invalid_input("lindblad_derivative: channel operator on a different space");
    if (c.rate < 0) throw invalid_input("lindblad_derivative: negative rate");
    ch.push_back({c.op.matrix, c.op.matrix.adjoint() * c.op.matrix, c.rate});
  }
  Eigen::MatrixXcd tmp(rho.dim(), rho.dim()), out(rho.dim(), rho.dim());
  rhs(H.matrix, ch, rho.matrix, tmp, out);
  return Operator{rho.space, std::move(out)};
}

Trajectory evolve(const Operator& rho0, const TimeDependentHamiltonian& H,
                  const std::vector<CollapseChannel>& channels, const TimeGrid& grid,
                  const EvolveOptions& opts) {
  grid.validate();
  check_density_matrix(rho0);
  if (H.static_part.space != rho0.space)
    throw invalid_input("evolve: Hamiltonian and state live on different spaces");
  for (const auto& d : H.drives)
    if (d.op.space != rho0.space)
      throw invalid_input("evolve: drive operator on a different space");

  std::vector<ChannelData> ch;
  for (const auto& c : channels) {
    if (c.op.space != rho0.space)
      throw invalid_input("evolve: channel operator on a different space");
    if (c.rate < 0) throw invalid_input("evolve: negative channel rate");
    if (c.rate > 0) ch.push_back({c.op.matrix, c.op.matrix.adjoint() * c.op.matrix, c.rate});
  }

  const int n = grid.steps();
  const int dim = rho0.dim();
  const double dt = grid.dt;

  Trajectory traj;
  traj.grid = grid;
  traj.space = rho0.space;
  RecordTracker tracker(rho0.space);

  Eigen::MatrixXcd rho = rho0.matrix;
  rho /= rho.trace().real();

  Eigen::MatrixXcd Ht(dim, dim), tmp(dim, dim), stage(dim, dim);
  Eigen::MatrixXcd q1(dim, dim), q2(dim, dim), q3(dim, dim), q4(dim, dim);

  auto store = [&](int step, double t) {
    bool last = (step == n);
    if (step % std::max(1, opts.record_stride) == 0 || last) {
      traj.times.push_back(t);
      tracker.append(rho, traj.records);
    }
    bool keep_state = last || step == 0 ||
                      (opts.state_stride > 0 && step % opts.state_stride == 0);
    if (keep_state) {
      if (opts.validate_states) {
        std::string v = density_matrix_violation(Operator{rho0.space, rho});
        if (!v.empty()) {
          std::ostringstream os;
          os << "evolve: state at t = " << t << " invalid (" << v
             << "); reduce dt or check channel rates";
          throw numerical_error(os.str());
        }
      }
      traj.state_times.push_back(t);
      traj.states.push_back(rho);
    }
  };

  double t = grid.t0;
  store(0, t);
  for (int step = 0; step < n; ++step) {
    t = grid.t0 + step * dt;
    H.evaluate(t, Ht);
    rhs(Ht, ch, rho, tmp, q1);
    stage = rho + (0.5 * dt) * q1;
    H.evaluate(t + 0.5 * dt, Ht);
    rhs(Ht, ch, stage, tmp, q2);
    stage = rho + (0.5 * dt) * q2;
    rhs(Ht, ch, stage, tmp, q3);
    stage = rho + dt * q3;
    H.evaluate(t + dt, Ht);
    rhs(Ht, ch, stage, tmp, q4);
    rho += (dt / 6.0) * (q1 + 2.0 * q2 + 2.0 * q3 + q4);

    double tr = rho.trace().real();
    double drift = std::abs(tr - 1.0);
    if (!std::isfinite(tr) || (opts.renormalize && drift > opts.drift_error_tol)) {
      std::ostringstream os;
      os << "evolve: trace drift " << drift << " at t = " << t + dt
         << " exceeds " << opts.drift_error_tol << "; integration unstable, reduce dt";
      throw numerical_error(os.str());
    }
    if (opts.renormalize) {
      traj.max_step_trace_drift = std::max(traj.max_step_trace_drift, drift);
      rho /= tr;
    } else {
      traj.final_trace_drift = drift;
      if (drift > opts.drift_error_tol) {
        std::ostringstream os;
        os << "evolve: accumulated trace drift " << drift << " at t = " << t + dt
           << " exceeds " << opts.drift_error_tol << "; reduce dt";
        throw numerical_error(os.str());
      }
    }
    store(step + 1, grid.t0 + (step + 1) * dt);
  }
  return traj;
}

Operator steady_state(const Operator& H, const std::vector<CollapseChannel>& channels) {
  const int d = H.dim();
  const int D = d * d;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  const complexd m_i_2pi(0.0, -constants::two_pi);

  // Column-stacking convention: vec(A rho B) = (B^T kron A) vec(rho).
  Eigen::MatrixXcd L(D, D);
  L = m_i_2pi * (Eigen::kroneckerProduct(id, H.matrix) -
                 Eigen::kroneckerProduct(H.matrix.transpose(), id));
  for (const auto& c : channels) {
    if (c.op.space != H.space)
      throw invalid_input("steady_state: channel operator on a different space");
    if (c.rate < 0) throw invalid_input("steady_state: negative channel rate");
    if (c.rate == 0) continue;
    const Eigen::MatrixXcd& Lm = c.op.matrix;
    const Eigen::MatrixXcd LdL = Lm.adjoint() * Lm;
    L += c.rate * (Eigen::kroneckerProduct(Lm.conjugate(), Lm) -
                   0.5 * (Eigen::kroneckerProduct(id, LdL) +
                          Eigen::kroneckerProduct(LdL.transpose(), id)))
                      .eval();
  }

  L.row(0).setZero();
  for (int i = 0; i < d; ++i) L(0, i * d + i) = 1.0;
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(D);
  b(0) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(L);
  if (!lu.isInvertible())
    throw numerical_error("steady_state: stationary state is not unique for these channels");
  Eigen::VectorXcd x = lu.solve(b);
  Eigen::MatrixXcd rho = Eigen::Map<Eigen::MatrixXcd>(x.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  Operator out{H.space, std::move(rho)};
  check_density_matrix(out);
  return out;
}

}  // namespace mmq
