#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "dyncoh/errors.hpp"
#include "dyncoh/measures.hpp"
#include "test_util.hpp"

using namespace dyncoh;

namespace {

OptimizerConfig fast_cfg() {
  OptimizerConfig cfg;
  cfg.starts = 8;
  cfg.grid_points = 21;
  return cfg;
}

// Bloch vector of a qubit state, for interiority checks.
Eigen::Vector3d bloch_of(const DensityMatrix& rho) {
  Eigen::Vector3d r;
  for (int i = 0; i < 3; ++i) {
    r(i) = (rho.matrix() * pauli(i + 1)).trace().real();
  }
  return r;
}

}  // namespace

TEST_CASE("Hadamard cohering power under l1 is 1") {
  // Best input is a basis state: c_l1(H|0><0|H) - 0 = 1.
  const double t = t_tilde(hadamard_channel(), StaticMeasure::L1, fast_cfg(),
                           /*selective=*/false);
  CHECK(t == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("dephasing and identity have zero dynamical coherence") {
  for (const StaticMeasure m :
       {StaticMeasure::L1, StaticMeasure::RelativeEntropy}) {
    CHECK(t_tilde(dephasing_channel(2), m, fast_cfg(), false) ==
          doctest::Approx(0.0).epsilon(1e-8));
    CHECK(t_tilde(identity_channel(2), m, fast_cfg(), false) ==
          doctest::Approx(0.0).epsilon(1e-8));
  }
  CHECK(t_l2_post(identity_channel(2), fast_cfg()) ==
        doctest::Approx(0.0).epsilon(1e-8));
  CHECK(t_l2_nonpost(dephasing_channel(2), fast_cfg()) ==
        doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("the measured amplitude-damping channel at full decay purifies") {
  // All inputs land on |0>, so the post-selective purity gain peaks at the
  // maximally mixed input: 1 - 1/2.
  CHECK(t_l2_post(amplitude_damping(1.0), fast_cfg()) ==
        doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("gain before clamping can be negative") {
  // Trace-and-replace loses all coherence: the best l1 gain is 0 (at any
  // incoherent input), never positive.
  CHECK(delta_m_np(trace_out_channel(2), StaticMeasure::L1, fast_cfg()) <=
        1e-9);
  CHECK(t_tilde(trace_out_channel(2), StaticMeasure::L1, fast_cfg(), false) ==
        doctest::Approx(0.0));
}

TEST_CASE("selective gain dominates non-selective gain") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 5; ++trial) {
    const KrausChannel ch = testutil::random_cptp(2, 2, 2, rng);
    const double post = delta_m_p(ch, StaticMeasure::L1, fast_cfg());
    const double nonpost = delta_m_np(ch, StaticMeasure::L1, fast_cfg());
    CHECK(post >= nonpost - 1e-6);
  }
}

TEST_CASE("qubit affine form of amplitude damping") {
  const QubitAffineForm f = qubit_affine_form(amplitude_damping(0.36));
  CHECK(f.a(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.a(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.a(2) == doctest::Approx(0.36).epsilon(1e-12));
  CHECK(f.m(0, 0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(f.m(1, 1) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(f.m(2, 2) == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(f.xi(0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(f.xi(2) == doctest::Approx(0.64).epsilon(1e-12));
  // The shift is aligned with the xi = 0.64 singular direction.
  CHECK(std::abs(f.a_tilde(2)) == doctest::Approx(0.36).epsilon(1e-9));
}

TEST_CASE("affine form respects unitary covariance of the trace") {
  std::mt19937_64 rng(53);
  const KrausChannel ch = testutil::random_cptp(2, 2, 3, rng);
  const QubitAffineForm f = qubit_affine_form(ch);
  const DensityMatrix rho = testutil::random_density(2, rng);
  const Eigen::Vector3d u = bloch_of(rho);
  const Eigen::Vector3d v = f.m * u + f.a;
  CHECK((bloch_of(apply(ch, rho)) - v).norm() < 1e-10);
}

TEST_CASE("closed form for the non-selective l2 measure: amplitude damping") {
  const ClosedFormResult r = t2_closed_form(amplitude_damping(0.36));
  CHECK_FALSE(r.fallback_used);
  CHECK(r.value == doctest::Approx(0.1097560975609756).epsilon(1e-12));
  const ClosedFormResult half = t2_closed_form(amplitude_damping(0.5));
  CHECK(half.value == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("closed form agrees with the direct optimizer") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 6; ++trial) {
    const KrausChannel ch = testutil::random_nonunital_qubit(rng);
    const ClosedFormResult cf = t2_closed_form(ch);
    REQUIRE_FALSE(cf.fallback_used);
    const double direct = t_l2_nonpost(ch, {});
    CHECK(std::abs(cf.value - direct) < 1e-4);
  }
}

TEST_CASE("near-unitary channels trigger the documented fallback") {
  const ClosedFormResult r = t2_closed_form(unitary_channel(pauli(1)));
  CHECK(r.fallback_used);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-8));
  const ClosedFormResult h = t2_closed_form(hadamard_channel());
  CHECK(h.fallback_used);
  CHECK(h.value == doctest::Approx(0.0).epsilon(1e-8));  // unitary: no purity gain
}

TEST_CASE("closed form requires a qubit channel") {
  CHECK_THROWS_AS(t2_closed_form(dephasing_channel(3)), DimensionError);
  CHECK_THROWS_AS(qubit_affine_form(identity_channel(3)), DimensionError);
}

TEST_CASE("amplitude-damping analytics: endpoints and frozen values") {
  CHECK(ad_analytic(0.0) == 0.0);
  CHECK(ad_analytic(1.0) == 0.5);  // exact in IEEE arithmetic
  CHECK(ad_analytic(0.5) == doctest::Approx(0.18033988749894903).epsilon(1e-14));
  CHECK(ad_analytic(0.2) == doctest::Approx(0.06360220580284291).epsilon(1e-14));
  CHECK(ad_optimal_z(0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(ad_optimal_z(0.5) == doctest::Approx(0.2360679774997898).epsilon(1e-14));
  CHECK(ad_optimal_z(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(ad_analytic(-0.01), ValidationError);
  CHECK_THROWS_AS(ad_analytic(1.01), ValidationError);
  CHECK_THROWS_AS(ad_optimal_z(2.0), ValidationError);
}

TEST_CASE("analytic value matches the optimizer and sits strictly inside") {
  for (const double eta : {0.3, 0.7}) {
    const StateOptimum opt = t_l2_post_optimum(amplitude_damping(eta), {});
    CHECK(std::max(opt.value, 0.0) ==
          doctest::Approx(ad_analytic(eta)).epsilon(1e-6));
    CHECK(bloch_of(opt.argmax).norm() < 0.999);
  }
}

TEST_CASE("monotonicity under free pre/post composition (spot check)") {
  std::mt19937_64 rng(61);
  OptimizerConfig cfg = fast_cfg();
  for (int trial = 0; trial < 6; ++trial) {
    const KrausChannel n = testutil::random_cptp(2, 2, 2, rng);
    const KrausChannel f = testutil::random_strict_mio(rng);
    const double base = t_tilde(n, StaticMeasure::L1, cfg, false);
    CHECK(t_tilde(compose(f, n), StaticMeasure::L1, cfg, false) <=
          base + 1e-5);
    CHECK(t_tilde(compose(n, f), StaticMeasure::L1, cfg, false) <=
          base + 1e-5);
  }
}

TEST_CASE("convexity under channel mixing (spot check)") {
  std::mt19937_64 rng(67);
  OptimizerConfig cfg = fast_cfg();
  for (int trial = 0; trial < 4; ++trial) {
    const KrausChannel a = testutil::random_cptp(2, 2, 2, rng);
    const KrausChannel b = testutil::random_cptp(2, 2, 2, rng);
    const double ta = t_tilde(a, StaticMeasure::L1, cfg, false);
    const double tb = t_tilde(b, StaticMeasure::L1, cfg, false);
    for (const double t : {0.25, 0.5, 0.75}) {
      const double tmix =
          t_tilde(testutil::mix(a, b, t), StaticMeasure::L1, cfg, false);
      CHECK(tmix <= t * ta + (1.0 - t) * tb + 1e-5);
    }
  }
}
