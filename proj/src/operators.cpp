#include "mmq/operators.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "mmq/errors.hpp"

namespace mmq {

void HilbertSpec::validate() const {
  if (dims.empty()) throw invalid_input("HilbertSpec: no subsystems");
  for (int d : dims) {
    if (d < 1) throw invalid_input("HilbertSpec: subsystem dimension must be >= 1");
  }
}

int HilbertSpec::total_dim() const {
  int n = 1;
  for (int d : dims) n *= d;
  return n;
}

Operator annihilation_op(int dim) {
  if (dim < 2) throw invalid_input("annihilation_op: dimension must be >= 2");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator{HilbertSpec{dim}, std::move(m)};
}

Operator number_op(int dim) {
  if (dim < 2) throw invalid_input("number_op: dimension must be >= 2");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n);
  return Operator{HilbertSpec{dim}, std::move(m)};
}

Operator identity_op(const HilbertSpec& space) {
  space.validate();
  int n = space.total_dim();
  return Operator{space, Eigen::MatrixXcd::Identity(n, n)};
}

Operator zero_op(const HilbertSpec& space) {
  space.validate();
  int n = space.total_dim();
  return Operator{space, Eigen::MatrixXcd::Zero(n, n)};
}

Operator dagger(const Operator& op) {
  return Operator{op.space, op.matrix.adjoint()};
}

Operator tensor_product(const Operator& a, const Operator& b) {
  HilbertSpec space;
  space.dims = a.space.dims;
  space.dims.insert(space.dims.end(), b.space.dims.begin(), b.space.dims.end());
  Eigen::MatrixXcd m = Eigen::kroneckerProduct(a.matrix, b.matrix);
  return Operator{std::move(space), std::move(m)};
}

Operator embed(const Operator& local, int slot, const HilbertSpec& space) {
  space.validate();
  if (slot < 0 || slot >= static_cast<int>(space.dims.size()))
    throw invalid_input("embed: slot out of range");
  if (local.dim() != space.dims[slot])
    throw invalid_input("embed: operator dimension does not match the target slot");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 0; k < static_cast<int>(space.dims.size()); ++k) {
    const Eigen::MatrixXcd& factor =
        (k == slot) ? local.matrix
                    : Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(space.dims[k], space.dims[k]));
    m = Eigen::kroneckerProduct(m, factor).eval();
  }
  return Operator{space, std::move(m)};
}

Operator lowering_on(const HilbertSpec& space, int slot) {
  space.validate();
  if (slot < 0 || slot >= static_cast<int>(space.dims.size()))
    throw invalid_input("lowering_on: slot out of range");
  int d = space.dims[slot];
  if (d == 1) return zero_op(space);
  return embed(annihilation_op(d), slot, space);
}

Operator number_on(const HilbertSpec& space, int slot) {
  space.validate();
  if (slot < 0 || slot >= static_cast<int>(space.dims.size()))
    throw invalid_input("number_on: slot out of range");
  int d = space.dims[slot];
  if (d == 1) return zero_op(space);
  return embed(number_op(d), slot, space);
}

Operator basis_density(const HilbertSpec& space, const std::vector<int>& levels) {
  space.validate();
  if (levels.size() != space.dims.size())
    throw invalid_input("basis_density: one level index per subsystem required");
  int index = 0;
  for (size_t k = 0; k < levels.size(); ++k) {
    if (levels[k] < 0 || levels[k] >= space.dims[k])
      throw invalid_input("basis_density: level index out of range");
    index = index * space.dims[k] + levels[k];
  }
  int n = space.total_dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  m(index, index) = 1.0;
  return Operator{space, std::move(m)};
}

namespace {
void require_same_space(const Operator& a, const Operator& b, const char* what) {
  if (a.space != b.space) {
    std::ostringstream os;
    os << what << ": operators live on different spaces";
    throw invalid_input(os.str());
  }
}
}  // namespace

Operator operator+(const Operator& a, const Operator& b) {
  require_same_space(a, b, "operator+");
  return Operator{a.space, a.matrix + b.matrix};
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_space(a, b, "operator-");
  return Operator{a.space, a.matrix - b.matrix};
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a, b, "operator*");
  return Operator{a.space, a.matrix * b.matrix};
}

Operator operator*(complexd s, const Operator& a) {
  return Operator{a.space, s * a.matrix};
}

complexd expectation(const Operator& rho, const Operator& obs) {
  if (rho.space != obs.space)
    throw invalid_input("expectation: state and observable live on different spaces");
  return (rho.matrix * obs.matrix).trace();
}

double expectation_real(const Operator& rho, const Operator& obs) {
  complexd v = expectation(rho, obs);
  if (std::abs(v.imag()) > 1e-10)
    throw numerical_error("expectation_real: imaginary residue above 1e-10; observable not Hermitian?");
  return v.real();
}

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

std::string density_matrix_violation(const Operator& rho) {
  if (rho.matrix.rows() != rho.matrix.cols()) return "matrix is not square";
  if (rho.matrix.rows() != rho.space.total_dim()) return "matrix dimension does not match space";
  if (!is_hermitian(rho.matrix, 1e-10)) return "matrix is not Hermitian";
  double tr = rho.matrix.trace().real();
  if (std::abs(tr - 1.0) >= 1e-9) {
    std::ostringstream os;
    os << "trace deviates from one by " << std::abs(tr - 1.0);
    return os.str();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho.matrix + rho.matrix.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  if (lo < -1e-9) {
    std::ostringstream os;
    os << "negative eigenvalue " << lo;
    return os.str();
  }
  return {};
}

void check_density_matrix(const Operator& rho) {
  std::string v = density_matrix_violation(rho);
  if (!v.empty()) throw invalid_input("not a density matrix: " + v);
}

}  // namespace mmq
