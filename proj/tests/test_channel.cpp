#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "dyncoh/channel.hpp"
#include "dyncoh/errors.hpp"
#include "test_util.hpp"

using namespace dyncoh;

TEST_CASE("DensityMatrix validates its input") {
  CHECK_NOTHROW(DensityMatrix(0.5 * identity(2)));
  CHECK_THROWS_AS(DensityMatrix(identity(2)), ValidationError);  // trace 2
  ComplexMatrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, ValidationError);  // not PSD
  ComplexMatrix nonherm(2, 2);
  nonherm << 0.5, Complex(0, 0.3), Complex(0, 0.3), 0.5;
  CHECK_THROWS_AS(DensityMatrix{nonherm}, ValidationError);
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("DensityMatrix constructors") {
  const DensityMatrix plus = DensityMatrix::from_bloch(1, 0, 0);
  CHECK(plus.matrix()(0, 1).real() == doctest::Approx(0.5));
  CHECK_THROWS_AS(DensityMatrix::from_bloch(1, 1, 0), ValidationError);
  const DensityMatrix b = DensityMatrix::basis_state(1, 3);
  CHECK(b.matrix()(1, 1) == Complex(1, 0));
  CHECK(b.matrix().trace() == Complex(1, 0));
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(4);
  CHECK(max_abs_diff(mixed.matrix(), 0.25 * identity(4)) == 0.0);
  ComplexVector ket(2);
  ket << Complex(1, 0), Complex(0, 1);
  ket /= ket.norm();
  const DensityMatrix pure = DensityMatrix::pure(ket);
  CHECK(pure.matrix().trace().real() == doctest::Approx(1.0));
  CHECK((pure.matrix() * pure.matrix() - pure.matrix()).norm() < 1e-12);
}

TEST_CASE("KrausChannel validates completeness") {
  ComplexMatrix half = 0.5 * identity(2);
  CHECK_THROWS_AS(KrausChannel({half}), ValidationError);
  CHECK_NOTHROW(KrausChannel({half}, 1.0));  // explicit loose tolerance
  const KrausChannel id = identity_channel(2);
  CHECK(id.completeness_defect() == 0.0);
  CHECK(id.dim_in() == 2);
  CHECK(id.dim_out() == 2);
  CHECK_THROWS_AS(KrausChannel({}), ValidationError);
}

TEST_CASE("amplitude damping Kraus operators and domain") {
  const KrausChannel ad = amplitude_damping(0.36);
  REQUIRE(ad.kraus().size() == 2);
  CHECK(ad.kraus()[0](1, 1).real() == doctest::Approx(0.8));
  CHECK(ad.kraus()[1](0, 1).real() == doctest::Approx(0.6));
  CHECK(ad.kraus()[1](1, 0) == Complex(0, 0));
  CHECK_THROWS_AS(amplitude_damping(-0.1), ValidationError);
  CHECK_THROWS_AS(amplitude_damping(1.1), ValidationError);
  CHECK_NOTHROW(amplitude_damping(0.0));
  CHECK_NOTHROW(amplitude_damping(1.0));
}

TEST_CASE("apply: amplitude damping moves |1> toward |0>") {
  const DensityMatrix out =
      apply(amplitude_damping(0.3), DensityMatrix::basis_state(1, 2));
  CHECK(out.matrix()(0, 0).real() == doctest::Approx(0.3));
  CHECK(out.matrix()(1, 1).real() == doctest::Approx(0.7));
  CHECK(std::abs(out.matrix()(0, 1)) < 1e-14);
}

TEST_CASE("apply_selective: branch probabilities and states") {
  const auto branches =
      apply_selective(amplitude_damping(0.4), DensityMatrix::basis_state(1, 2));
  REQUIRE(branches.size() == 2);
  double total = 0.0;
  for (const auto& b : branches) total += b.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(branches[0].probability == doctest::Approx(0.6));
  CHECK(branches[0].state.matrix()(1, 1).real() == doctest::Approx(1.0));
  CHECK(branches[1].probability == doctest::Approx(0.4));
  CHECK(branches[1].state.matrix()(0, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("Choi matrix of the identity is the unnormalized Bell projector") {
  const ChoiMatrix j = to_choi(identity_channel(2));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 1.0;
  CHECK(max_abs_diff(j.matrix(), expected) < 1e-14);
  CHECK(max_abs_diff(j.input_marginal(), identity(2)) < 1e-14);
}

TEST_CASE("Choi basis blocks give the channel action on basis states") {
  const ChoiMatrix j = to_choi(amplitude_damping(0.25));
  const ComplexMatrix block = j.basis_block(1);
  CHECK(block(0, 0).real() == doctest::Approx(0.25));
  CHECK(block(1, 1).real() == doctest::Approx(0.75));
}

TEST_CASE("ChoiMatrix validates") {
  // Non-PSD: swap operator has eigenvalue -1 but identity marginal.
  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  CHECK_THROWS_AS(ChoiMatrix(swap, 2, 2), ValidationError);
  // Half the identity channel: PSD but trace-decreasing (marginal I/2).
  const ComplexMatrix half_id = 0.5 * to_choi(identity_channel(2)).matrix();
  CHECK_THROWS_AS(ChoiMatrix(half_id, 2, 2), ValidationError);
  CHECK_NOTHROW(ChoiMatrix(half_id, 2, 2, /*tol=*/1.0));
  // The fully depolarizing Choi I/2 is a valid channel in this convention.
  CHECK_NOTHROW(ChoiMatrix(0.5 * identity(4), 2, 2));
}

TEST_CASE("choi -> kraus -> choi round trip on random channels") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    const KrausChannel ch = testutil::random_cptp(2, 2, 3, rng);
    const ChoiMatrix j = to_choi(ch);
    const KrausChannel rebuilt = kraus_from_choi(j);
    CHECK(max_abs_diff(to_choi(rebuilt).matrix(), j.matrix()) < 1e-8);
  }
  // Also through a non-square channel.
  const KrausChannel ch32 = testutil::random_cptp(3, 2, 2, rng);
  const ChoiMatrix j32 = to_choi(ch32);
  const KrausChannel rebuilt32 = kraus_from_choi(j32);
  CHECK(rebuilt32.dim_in() == 3);
  CHECK(rebuilt32.dim_out() == 2);
  CHECK(max_abs_diff(to_choi(rebuilt32).matrix(), j32.matrix()) < 1e-8);
}

TEST_CASE("apply_choi agrees with the Kraus action") {
  std::mt19937_64 rng(29);
  const KrausChannel ch = testutil::random_cptp(2, 2, 2, rng);
  const DensityMatrix rho = testutil::random_density(2, rng);
  const ComplexMatrix via_choi =
      apply_choi(to_choi(ch).matrix(), 2, 2, rho.matrix());
  CHECK(max_abs_diff(via_choi, apply(ch, rho).matrix()) < 1e-12);
}

TEST_CASE("compose and tensor act correctly") {
  std::mt19937_64 rng(31);
  const KrausChannel a = testutil::random_cptp(2, 2, 2, rng);
  const KrausChannel b = testutil::random_cptp(2, 2, 2, rng);
  const DensityMatrix rho = testutil::random_density(2, rng);
  CHECK(max_abs_diff(apply(compose(a, b), rho).matrix(),
                     apply(a, apply(b, rho)).matrix()) < 1e-12);
  const DensityMatrix sigma = testutil::random_density(2, rng);
  const DensityMatrix joint = DensityMatrix(kron(rho.matrix(), sigma.matrix()));
  CHECK(max_abs_diff(
            apply(tensor(a, b), joint).matrix(),
            kron(apply(a, rho).matrix(), apply(b, sigma).matrix())) < 1e-12);
}

TEST_CASE("trace_out_channel replaces with the maximally mixed state") {
  std::mt19937_64 rng(37);
  const DensityMatrix rho = testutil::random_density(3, rng);
  const DensityMatrix out = apply(trace_out_channel(3), rho);
  CHECK(max_abs_diff(out.matrix(), identity(3) / 3.0) < 1e-12);
}

TEST_CASE("permutation and Hadamard channels") {
  const KrausChannel cycle = permutation_channel({1, 2, 0});
  const DensityMatrix out = apply(cycle, DensityMatrix::basis_state(0, 3));
  CHECK(out.matrix()(1, 1).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(permutation_channel({0, 0}), ValidationError);
  const DensityMatrix plus =
      apply(hadamard_channel(), DensityMatrix::basis_state(0, 2));
  CHECK(plus.matrix()(0, 1).real() == doctest::Approx(0.5));
}

TEST_CASE("unitary_channel rejects non-unitary input") {
  ComplexMatrix m(2, 2);
  m << 1, 1, 0, 1;
  CHECK_THROWS_AS(unitary_channel(m), ValidationError);
}

TEST_CASE("free-set membership under both characterizations") {
  CHECK(is_mio(dephasing_channel(2), MioVariant::Paper));
  CHECK(is_mio(dephasing_channel(2), MioVariant::Strict));
  CHECK(is_mio(identity_channel(2), MioVariant::Paper));
  CHECK(is_mio(identity_channel(2), MioVariant::Strict));
  CHECK(is_mio(unitary_channel(pauli(1)), MioVariant::Strict));
  CHECK(is_mio(amplitude_damping(0.6), MioVariant::Paper));
  CHECK(is_mio(amplitude_damping(0.6), MioVariant::Strict));
  // Hadamard is unital, so free under the marginal characterization only.
  CHECK(is_mio(hadamard_channel(), MioVariant::Paper));
  CHECK_FALSE(is_mio(hadamard_channel(), MioVariant::Strict));

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    CHECK(is_mio(testutil::random_strict_mio(rng), MioVariant::Strict));
  }
}

TEST_CASE("MioVariant string round trip") {
  CHECK(mio_variant_from_string("paper") == MioVariant::Paper);
  CHECK(mio_variant_from_string("strict") == MioVariant::Strict);
  CHECK(to_string(MioVariant::Paper) == "paper");
  CHECK(to_string(MioVariant::Strict) == "strict");
  CHECK_THROWS_AS(mio_variant_from_string("loose"), ValidationError);
}

TEST_CASE("channel mixtures used by the property suites are valid") {
  std::mt19937_64 rng(43);
  const KrausChannel a = testutil::random_cptp(2, 2, 2, rng);
  const KrausChannel b = testutil::random_cptp(2, 2, 3, rng);
  const KrausChannel m = testutil::mix(a, b, 0.3);
  CHECK(m.completeness_defect() < 1e-12);
  const DensityMatrix rho = testutil::random_density(2, rng);
  const ComplexMatrix expected =
      0.3 * apply(a, rho).matrix() + 0.7 * apply(b, rho).matrix();
  CHECK(max_abs_diff(apply(m, rho).matrix(), expected) < 1e-12);
}
