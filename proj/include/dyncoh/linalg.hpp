#ifndef DYNCOH_LINALG_HPP
#define DYNCOH_LINALG_HPP

#include <complex>

#include <Eigen/Dense>

#include "dyncoh/errors.hpp"

namespace dyncoh {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Tolerance for structural checks (Hermiticity, trace-one, completeness of a
// Kraus set). Numerical noise from O(100)-dimensional dense algebra stays
// well below this.
inline constexpr double kStructuralTol = 1e-10;

// Default tolerance for validating user-supplied objects, where entries may
// come from a text file or from another solver.
inline constexpr double kValidationTol = 1e-8;

// Entry-wise comparison with an explicit tolerance. There is deliberately no
// operator== on matrices anywhere in this library.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

// Largest |a_ij - b_ij|; the quantity approx_equal thresholds.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix identity(Index d);

// Kronecker product, first argument on the slow (left) index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { First, Second };

// Partial trace of an operator on C^{dim_first} (x) C^{dim_second},
// keeping the named factor.
ComplexMatrix partial_trace(const ComplexMatrix& m, Index dim_first,
                            Index dim_second, Subsystem keep);

// Projection onto the diagonal in the computational basis (full dephasing).
ComplexMatrix dephase(const ComplexMatrix& m);

double hermiticity_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kStructuralTol);

// Sum of singular values. For Hermitian input this equals the sum of absolute
// eigenvalues; both paths agree to machine precision and the singular-value
// route needs no Hermiticity precondition.
double trace_norm(const ComplexMatrix& m);

struct HermitianEigen {
  RealVector eigenvalues;    // descending
  ComplexMatrix eigenvectors;  // columns, matching order
};

// Eigendecomposition of a Hermitian matrix. Throws ValidationError if the
// input fails the Hermiticity precondition.
HermitianEigen hermitian_eig(const ComplexMatrix& m,
                             double hermiticity_tol = kStructuralTol);

// Smallest eigenvalue of a Hermitian matrix (PSD checks, Slater margins).
double min_eigenvalue(const ComplexMatrix& m,
                      double hermiticity_tol = kStructuralTol);

struct Svd {
  ComplexMatrix u;
  RealVector singular_values;  // descending
  ComplexMatrix v;             // m = u * diag(s) * v.adjoint()
};

Svd svd(const ComplexMatrix& m);

// Pauli basis: index 0 is the identity, 1..3 are x, y, z.
const ComplexMatrix& pauli(int index);

// Computational basis ket |i> in dimension d.
ComplexVector basis_ket(Index i, Index d);

}  // namespace dyncoh

#endif  // DYNCOH_LINALG_HPP
