#include "dyncoh/measures.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace dyncoh {

namespace {

double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

StateObjective gain_objective(const KrausChannel& ch, StaticMeasure measure,
                              bool selective) {
  if (selective) {
    return [&ch, measure](const DensityMatrix& rho) {
      double gained = 0.0;
      for (const SelectiveBranch& branch : apply_selective(ch, rho)) {
        gained += branch.probability * static_coherence(measure, branch.state);
      }
      return gained - static_coherence(measure, rho);
    };
  }
  return [&ch, measure](const DensityMatrix& rho) {
    return static_coherence(measure, apply(ch, rho)) -
           static_coherence(measure, rho);
  };
}

StateObjective purity_gain_objective(const KrausChannel& ch, bool selective) {
  if (selective) {
    return [&ch](const DensityMatrix& rho) {
      double gained = 0.0;
      for (const SelectiveBranch& branch : apply_selective(ch, rho)) {
        gained += branch.probability * purity(branch.state);
      }
      return gained - purity(rho);
    };
  }
  return [&ch](const DensityMatrix& rho) {
    return purity(apply(ch, rho)) - purity(rho);
  };
}

double clamp_nonnegative(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

double delta_m_np(const KrausChannel& ch, StaticMeasure measure,
                  const OptimizerConfig& cfg) {
  return maximize_over_states(gain_objective(ch, measure, false), ch.dim_in(),
                              cfg)
      .value;
}

double delta_m_p(const KrausChannel& ch, StaticMeasure measure,
                 const OptimizerConfig& cfg) {
  return maximize_over_states(gain_objective(ch, measure, true), ch.dim_in(),
                              cfg)
      .value;
}

double t_tilde(const KrausChannel& ch, StaticMeasure measure,
               const OptimizerConfig& cfg, bool selective) {
  const double delta =
      selective ? delta_m_p(ch, measure, cfg) : delta_m_np(ch, measure, cfg);
  return clamp_nonnegative(delta);
}

StateOptimum t_l2_post_optimum(const KrausChannel& ch,
                               const OptimizerConfig& cfg) {
  return maximize_over_states(purity_gain_objective(ch, true), ch.dim_in(),
                              cfg);
}

StateOptimum t_l2_nonpost_optimum(const KrausChannel& ch,
                                  const OptimizerConfig& cfg) {
  return maximize_over_states(purity_gain_objective(ch, false), ch.dim_in(),
                              cfg);
}

double t_l2_post(const KrausChannel& ch, const OptimizerConfig& cfg) {
  return clamp_nonnegative(t_l2_post_optimum(ch, cfg).value);
}

double t_l2_nonpost(const KrausChannel& ch, const OptimizerConfig& cfg) {
  return clamp_nonnegative(t_l2_nonpost_optimum(ch, cfg).value);
}

QubitAffineForm qubit_affine_form(const KrausChannel& ch) {
  if (ch.dim_in() != 2 || ch.dim_out() != 2) {
    throw DimensionError("qubit_affine_form: channel must be qubit -> qubit");
  }
  const DensityMatrix half_mixed = DensityMatrix::maximally_mixed(2);
  QubitAffineForm form;
  // N(I) = 2 N(I/2); a_i = Tr[sigma_i N(I)] / 2.
  const ComplexMatrix n_of_identity = 2.0 * apply(ch, half_mixed).matrix();
  for (int i = 0; i < 3; ++i) {
    form.a(i) = 0.5 * (pauli(i + 1) * n_of_identity).trace().real();
  }
  for (int j = 0; j < 3; ++j) {
    ComplexMatrix n_of_sigma = ComplexMatrix::Zero(2, 2);
    for (const ComplexMatrix& k : ch.kraus()) {
      n_of_sigma += k * pauli(j + 1) * k.adjoint();
    }
    for (int i = 0; i < 3; ++i) {
      form.m(i, j) = 0.5 * (pauli(i + 1) * n_of_sigma).trace().real();
    }
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> decomposition(
      form.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  form.xi = decomposition.singularValues();
  form.a_tilde = decomposition.matrixU().transpose() * form.a;
  return form;
}

ClosedFormResult t2_closed_form(const KrausChannel& ch,
                                const OptimizerConfig& fallback_cfg,
                                double singular_guard) {
  const QubitAffineForm form = qubit_affine_form(ch);
  for (int i = 0; i < 3; ++i) {
    if (form.xi(i) >= 1.0 - singular_guard) {
      return ClosedFormResult{t_l2_nonpost(ch, fallback_cfg), true};
    }
  }
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double xi2 = form.xi(i) * form.xi(i);
    sum += xi2 * form.a_tilde(i) * form.a_tilde(i) / (2.0 * (1.0 - xi2)) +
           form.a(i) * form.a(i) / 2.0;
  }
  return ClosedFormResult{clamp_nonnegative(sum), false};
}

double ad_optimal_z(double eta) {
  if (eta < 0.0 || eta > 1.0) {
    throw ValidationError("ad_optimal_z: eta must lie in [0, 1]");
  }
  if (eta == 0.0) return 1.0 / 3.0;
  return (2.0 * eta + std::sqrt(9.0 - 8.0 * eta) - 3.0) / (2.0 * eta);
}

double ad_analytic(double eta) {
  if (eta < 0.0 || eta > 1.0) {
    throw ValidationError("ad_analytic: eta must lie in [0, 1]");
  }
  if (eta == 0.0) return 0.0;
  const double root = std::sqrt(9.0 - 8.0 * eta);
  return (9.0 * (root - 3.0) - 4.0 * eta * (2.0 * eta + 2.0 * root - 9.0)) /
         (4.0 * eta * eta);
}

}  // namespace dyncoh
