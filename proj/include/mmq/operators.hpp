#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mmq {

using complexd = std::complex<double>;

// Ordered subsystem truncations. The ordering is fixed for a whole run:
// qubit first, resonator second. A dimension-1 factor is allowed and stands
// for a subsystem frozen in its ground state (its ladder operator is zero).
struct HilbertSpec {
  std::vector<int> dims;

  HilbertSpec() = default;
  HilbertSpec(std::initializer_list<int> d) : dims(d) { validate(); }
  explicit HilbertSpec(std::vector<int> d) : dims(std::move(d)) { validate(); }

  int total_dim() const;
  void validate() const;

  bool operator==(const HilbertSpec& o) const { return dims == o.dims; }
  bool operator!=(const HilbertSpec& o) const { return !(*this == o); }
};

// Dense operator on the tensor-product space described by `space`.
struct Operator {
  HilbertSpec space;
  Eigen::MatrixXcd matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

// Lowering operator: M[n-1, n] = sqrt(n). Requires dim >= 2.
Operator annihilation_op(int dim);
// diag(0, 1, ..., dim-1). Requires dim >= 2.
Operator number_op(int dim);

Operator identity_op(const HilbertSpec& space);
Operator zero_op(const HilbertSpec& space);

Operator dagger(const Operator& op);
Operator tensor_product(const Operator& a, const Operator& b);

// Lift a single-subsystem operator onto the full space by Kronecker products
// with identities on the other slots.
Operator embed(const Operator& local, int slot, const HilbertSpec& space);

// Embedded ladder / number operators for one subsystem of a composite space.
// A dimension-1 slot yields the zero operator (frozen vacuum).
Operator lowering_on(const HilbertSpec& space, int slot);
Operator number_on(const HilbertSpec& space, int slot);

// |levels><levels| as a density matrix, one level index per subsystem.
Operator basis_density(const HilbertSpec& space, const std::vector<int>& levels);

Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(complexd s, const Operator& a);
inline Operator operator*(const Operator& a, complexd s) { return s * a; }
inline Operator operator*(double s, const Operator& a) { return complexd(s, 0.0) * a; }
inline Operator operator*(const Operator& a, double s) { return complexd(s, 0.0) * a; }

// tr(rho * obs).
complexd expectation(const Operator& rho, const Operator& obs);
// Real part of tr(rho * obs) for Hermitian observables; throws if the
// imaginary residue exceeds 1e-10.
double expectation_real(const Operator& rho, const Operator& obs);

bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-12);

// Empty string when rho is a valid density matrix: Hermitian, |tr - 1| < 1e-9,
// eigenvalues above -1e-9. Otherwise a description of the first violation.
std::string density_matrix_violation(const Operator& rho);
// Throws invalid_input with the violation message.
void check_density_matrix(const Operator& rho);

}  // namespace mmq
