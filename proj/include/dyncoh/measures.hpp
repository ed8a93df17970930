#ifndef DYNCOH_MEASURES_HPP
#define DYNCOH_MEASURES_HPP

#include "dyncoh/coherence.hpp"
#include "dyncoh/optimize.hpp"

namespace dyncoh {

// Largest coherence gain of the unmeasured channel:
//   max_rho C(N(rho)) - C(rho).
// Best value found by the multistart search; reported before clamping, so it
// may be negative.
double delta_m_np(const KrausChannel& ch, StaticMeasure measure,
                  const OptimizerConfig& cfg);

// Selective (post-measurement) variant:
//   max_rho sum_n p_n C(rho_n) - C(rho).
double delta_m_p(const KrausChannel& ch, StaticMeasure measure,
                 const OptimizerConfig& cfg);

// Dynamical coherence quantifier: the gain clamped at zero.
double t_tilde(const KrausChannel& ch, StaticMeasure measure,
               const OptimizerConfig& cfg, bool selective);

// l2 total dynamical coherence with post-selection:
//   max{ max_rho sum_n p_n Tr(rho_n^2) - Tr(rho^2), 0 }.
double t_l2_post(const KrausChannel& ch, const OptimizerConfig& cfg);
// ... and without post-selection:
//   max{ max_rho Tr(N(rho)^2) - Tr(rho^2), 0 }.
double t_l2_nonpost(const KrausChannel& ch, const OptimizerConfig& cfg);

// Full optimizer outcome (argmax and convergence counters) behind the two
// clamped values above.
StateOptimum t_l2_post_optimum(const KrausChannel& ch,
                               const OptimizerConfig& cfg);
StateOptimum t_l2_nonpost_optimum(const KrausChannel& ch,
                                  const OptimizerConfig& cfg);

// Affine (Bloch) description of a qubit channel: N maps Bloch vector u to
// M u + a, with m_ij = Tr[sigma_i N(sigma_j)]/2 and a_i = Tr[sigma_i N(I)]/2.
// xi are the singular values of M (descending) and a_tilde = U^T a with U
// from the SVD M = U diag(xi) V^T.
struct QubitAffineForm {
  Eigen::Vector3d a;
  Eigen::Matrix3d m;
  Eigen::Vector3d xi;
  Eigen::Vector3d a_tilde;
};

QubitAffineForm qubit_affine_form(const KrausChannel& ch);

// Closed form for the non-post-selective l2 measure of a qubit channel:
//   T2 = max{ sum_i [ xi_i^2 a~_i^2 / (2 (1 - xi_i^2)) + a_i^2 / 2 ], 0 }.
// Valid when every xi_i <= 1 - singular_guard; otherwise falls back to the
// direct optimization and reports it via fallback_used.
struct ClosedFormResult {
  double value;
  bool fallback_used;
};

ClosedFormResult t2_closed_form(const KrausChannel& ch,
                                const OptimizerConfig& fallback_cfg = {},
                                double singular_guard = 1e-6);

// Analytic amplitude-damping results: the optimal Bloch z coordinate of the
// post-selective l2 objective and the value it attains.
//   z*(eta) = (2 eta + sqrt(9 - 8 eta) - 3) / (2 eta),      z*(0) = 1/3
//   T(eta)  = [9 (sqrt(9-8 eta) - 3) - 4 eta (2 eta + 2 sqrt(9-8 eta) - 9)]
//             / (4 eta^2),                                   T(0)  = 0
double ad_optimal_z(double eta);
double ad_analytic(double eta);

}  // namespace dyncoh

#endif  // DYNCOH_MEASURES_HPP
