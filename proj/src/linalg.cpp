#include "dyncoh/linalg.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dyncoh {

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs_diff(a, b) <= tol;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() == 0 && b.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

ComplexMatrix identity(Index d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Index dim_first,
                            Index dim_second, Subsystem keep) {
  const Index d = dim_first * dim_second;
  if (m.rows() != d || m.cols() != d) {
    std::ostringstream msg;
    msg << "partial_trace: operator is " << m.rows() << "x" << m.cols()
        << " but the factor dimensions " << dim_first << "*" << dim_second
        << " require " << d << "x" << d;
    throw DimensionError(msg.str());
  }
  if (keep == Subsystem::First) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_first, dim_first);
    for (Index i = 0; i < dim_first; ++i)
      for (Index j = 0; j < dim_first; ++j)
        for (Index k = 0; k < dim_second; ++k)
          out(i, j) += m(i * dim_second + k, j * dim_second + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_second, dim_second);
  for (Index i = 0; i < dim_second; ++i)
    for (Index j = 0; j < dim_second; ++j)
      for (Index k = 0; k < dim_first; ++k)
        out(i, j) += m(k * dim_second + i, k * dim_second + j);
  return out;
}

ComplexMatrix dephase(const ComplexMatrix& m) {
  return m.diagonal().asDiagonal();
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("hermiticity_defect: matrix is not square");
  }
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

double trace_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> decomposition(m);
  return decomposition.singularValues().sum();
}

HermitianEigen hermitian_eig(const ComplexMatrix& m, double hermiticity_tol) {
  if (!is_hermitian(m, hermiticity_tol)) {
    std::ostringstream msg;
    msg << "hermitian_eig: Hermiticity defect " << hermiticity_defect(m)
        << " exceeds tolerance " << hermiticity_tol;
    throw ValidationError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("hermitian_eig: eigensolver did not converge");
  }
  // Eigen returns ascending order; flip to descending.
  HermitianEigen result;
  result.eigenvalues = solver.eigenvalues().reverse();
  result.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return result;
}

double min_eigenvalue(const ComplexMatrix& m, double hermiticity_tol) {
  HermitianEigen eig = hermitian_eig(m, hermiticity_tol);
  return eig.eigenvalues(eig.eigenvalues.size() - 1);
}

Svd svd(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> decomposition(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return Svd{decomposition.matrixU(), decomposition.singularValues(),
             decomposition.matrixV()};
}

const ComplexMatrix& pauli(int index) {
  static const std::array<ComplexMatrix, 4> matrices = [] {
    const Complex i(0.0, 1.0);
    std::array<ComplexMatrix, 4> p;
    p[0] = ComplexMatrix::Identity(2, 2);
    p[1] = ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
    p[2] = ComplexMatrix{{0.0, -i}, {i, 0.0}};
    p[3] = ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
    return p;
  }();
  if (index < 0 || index > 3) {
    throw DimensionError("pauli: index must be 0..3");
  }
  return matrices[static_cast<std::size_t>(index)];
}

ComplexVector basis_ket(Index i, Index d) {
  if (i < 0 || i >= d) {
    throw DimensionError("basis_ket: index out of range");
  }
  ComplexVector ket = ComplexVector::Zero(d);
  ket(i) = 1.0;
  return ket;
}

}  // namespace dyncoh
