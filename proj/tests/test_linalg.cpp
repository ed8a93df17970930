#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "dyncoh/errors.hpp"
#include "dyncoh/linalg.hpp"
#include "test_util.hpp"

using namespace dyncoh;

TEST_CASE("kron dimensions and entries") {
  const ComplexMatrix x = pauli(1);
  const ComplexMatrix z = pauli(3);
  const ComplexMatrix k = kron(x, z);
  REQUIRE(k.rows() == 4);
  REQUIRE(k.cols() == 4);
  // (sigma_x (x) sigma_z)(0,2) = x(0,1) * z(0,0) = 1
  CHECK(k(0, 2) == Complex(1, 0));
  CHECK(k(1, 3) == Complex(-1, 0));
  CHECK(k(2, 0) == Complex(1, 0));
  CHECK(k(0, 0) == Complex(0, 0));
}

TEST_CASE("kron of identities is identity") {
  const ComplexMatrix k = kron(identity(2), identity(3));
  CHECK(max_abs_diff(k, identity(6)) == 0.0);
}

TEST_CASE("partial trace of product matrices") {
  std::mt19937_64 rng(11);
  const ComplexMatrix a = testutil::random_gaussian(2, 2, rng);
  const ComplexMatrix b = testutil::random_gaussian(3, 3, rng);
  const ComplexMatrix ab = kron(a, b);
  // Keeping a subsystem traces out the other factor.
  CHECK(max_abs_diff(partial_trace(ab, 2, 3, Subsystem::First),
                     b.trace() * a) < 1e-12);
  CHECK(max_abs_diff(partial_trace(ab, 2, 3, Subsystem::Second),
                     a.trace() * b) < 1e-12);
}

TEST_CASE("partial trace of an entangled projector") {
  // |phi+><phi+| with phi+ = (|00> + |11>)/sqrt(2): both marginals are I/2.
  ComplexMatrix phi = ComplexMatrix::Zero(4, 4);
  phi(0, 0) = phi(0, 3) = phi(3, 0) = phi(3, 3) = 0.5;
  CHECK(max_abs_diff(partial_trace(phi, 2, 2, Subsystem::First),
                     0.5 * identity(2)) < 1e-14);
  CHECK(max_abs_diff(partial_trace(phi, 2, 2, Subsystem::Second),
                     0.5 * identity(2)) < 1e-14);
}

TEST_CASE("partial trace rejects mismatched dimensions") {
  CHECK_THROWS_AS(partial_trace(identity(5), 2, 2, Subsystem::First),
                  DimensionError);
}

TEST_CASE("dephase keeps the diagonal only") {
  ComplexMatrix m(2, 2);
  m << Complex(0.7, 0), Complex(0.1, 0.2), Complex(0.1, -0.2), Complex(0.3, 0);
  const ComplexMatrix d = dephase(m);
  CHECK(d(0, 0) == Complex(0.7, 0));
  CHECK(d(1, 1) == Complex(0.3, 0));
  CHECK(d(0, 1) == Complex(0, 0));
  CHECK(d(1, 0) == Complex(0, 0));
}

TEST_CASE("trace norm equals the sum of singular values") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 3.0;
  h(1, 1) = -2.0;
  CHECK(trace_norm(h) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(trace_norm(pauli(1)) == doctest::Approx(2.0).epsilon(1e-12));
  ComplexMatrix nilpotent = ComplexMatrix::Zero(2, 2);
  nilpotent(0, 1) = 1.0;
  CHECK(trace_norm(nilpotent) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig returns descending eigenvalues and orthonormal vectors") {
  const HermitianEigen e = hermitian_eig(pauli(3));
  REQUIRE(e.eigenvalues.size() == 2);
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(-1.0));
  const ComplexMatrix v = e.eigenvectors;
  CHECK(max_abs_diff(v.adjoint() * v, identity(2)) < 1e-12);
  const ComplexMatrix rebuilt =
      v * e.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
      v.adjoint();
  CHECK(max_abs_diff(rebuilt, pauli(3)) < 1e-12);
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(m), ValidationError);
}

TEST_CASE("min_eigenvalue") {
  ComplexMatrix h(2, 2);
  h << Complex(2, 0), Complex(0, 1), Complex(0, -1), Complex(2, 0);
  CHECK(min_eigenvalue(h) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(min_eigenvalue(pauli(2)) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pauli matrices square to identity and anticommute") {
  for (int i = 1; i <= 3; ++i) {
    CHECK(max_abs_diff(pauli(i) * pauli(i), identity(2)) < 1e-15);
    CHECK(std::abs(pauli(i).trace()) < 1e-15);
  }
  CHECK(max_abs_diff(pauli(1) * pauli(2) + pauli(2) * pauli(1),
                     ComplexMatrix::Zero(2, 2)) < 1e-15);
  CHECK(max_abs_diff(pauli(0), identity(2)) == 0.0);
  CHECK_THROWS_AS(pauli(4), ValidationError);
}

TEST_CASE("basis_ket") {
  const ComplexVector k = basis_ket(1, 3);
  REQUIRE(k.size() == 3);
  CHECK(k(0) == Complex(0, 0));
  CHECK(k(1) == Complex(1, 0));
  CHECK(k(2) == Complex(0, 0));
  CHECK_THROWS_AS(basis_ket(3, 3), DimensionError);
}

TEST_CASE("approx_equal and max_abs_diff") {
  ComplexMatrix a = identity(2);
  ComplexMatrix b = a;
  b(0, 1) = Complex(0, 1e-9);
  CHECK(approx_equal(a, b, 1e-8));
  CHECK_FALSE(approx_equal(a, b, 1e-10));
  CHECK(max_abs_diff(a, b) == doctest::Approx(1e-9));
}
