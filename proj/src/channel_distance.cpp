#include "dyncoh/channel_distance.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace dyncoh {

namespace {

// Tight solve settings: the distance contracts promise gap <= 1e-6, so aim
// an order below it.
SdpOptions distance_options() {
  SdpOptions options;
  options.gap_tol = 1e-8;
  options.feas_tol = 1e-9;
  options.max_iters = 300;
  return options;
}

void require_solved(const SdpReport& report, const std::string& what) {
  if (report.status == SdpStatus::Optimal) return;
  std::ostringstream msg;
  msg << what << ": solver stopped with status " << to_string(report.status)
      << " (gap " << report.gap << ", primal residual "
      << report.primal_residual << ", dual residual " << report.dual_residual
      << " after " << report.iterations << " iterations)";
  throw ConvergenceError(msg.str());
}

struct DiamondBlocks {
  HermitianSdpBuilder builder;
  int z = -1;
  int v = -1;
  int a = -1;
  std::vector<int> v_constraints;  // entry order on the input space
};

// Shared scaffolding of the diamond-norm programs:
//   blocks Z >= 0 (on in (x) out), V >= 0 (on in), a >= 0 (scalar),
//   V-link  V + 2 Tr_out(Z) - a I = 0,
// leaving the "Z >= (...)" constraint to the caller.
DiamondBlocks diamond_scaffold(Index dim_in, Index dim_out) {
  DiamondBlocks d;
  d.z = d.builder.add_hermitian_block(dim_in * dim_out);
  d.v = d.builder.add_hermitian_block(dim_in);
  d.a = d.builder.add_scalar_block();
  d.builder.add_scalar_objective(d.a, 1.0);
  const ComplexMatrix eye_out = identity(dim_out);
  for (const ComplexMatrix& e : hermitian_entry_basis(dim_in)) {
    const int k = d.builder.add_constraint(
        {{d.v, e}, {d.z, 2.0 * kron(e, eye_out)}},
        {{d.a, -e.trace().real()}}, 0.0);
    d.v_constraints.push_back(k);
  }
  return d;
}

// Dual multiplier of the V-link family, reassembled on the input space. At
// the exact optimum this is (minus) the worst-case input marginal; see
// diamond_norm_detail.
ComplexMatrix v_link_dual(const DiamondBlocks& d, const SdpReport& report,
                          Index dim_in) {
  RealVector coeffs(static_cast<Index>(d.v_constraints.size()));
  for (std::size_t k = 0; k < d.v_constraints.size(); ++k) {
    coeffs(static_cast<Index>(k)) = report.dual_solution(d.v_constraints[k]);
  }
  return -combine_entry_basis(dim_in, coeffs);
}

}  // namespace

DiamondDetail diamond_norm_detail(const ComplexMatrix& delta_choi,
                                  Index dim_in, Index dim_out) {
  const Index d = dim_in * dim_out;
  if (delta_choi.rows() != d || delta_choi.cols() != d) {
    throw DimensionError("diamond_norm: Choi block size mismatch");
  }
  if (hermiticity_defect(delta_choi) > kValidationTol) {
    throw ValidationError("diamond_norm: Choi block must be Hermitian");
  }
  const ComplexMatrix target = (delta_choi + delta_choi.adjoint()) / 2.0;

  DiamondBlocks blocks = diamond_scaffold(dim_in, dim_out);
  // Slack for Z >= target: W = Z - target >= 0.
  const int w = blocks.builder.add_hermitian_block(d);
  for (const ComplexMatrix& e : hermitian_entry_basis(d)) {
    const double rhs = -(e * target).trace().real();
    blocks.builder.add_constraint({{w, e}, {blocks.z, -1.0 * e}}, {}, rhs);
  }

  SdpReport report = solve(blocks.builder.problem(), distance_options());
  require_solved(report, "diamond_norm");
  DiamondDetail detail;
  detail.value = report.primal_value;
  detail.dual_value = report.dual_value;
  detail.gap = report.gap;
  detail.optimal_input = v_link_dual(blocks, report, dim_in);
  return detail;
}

double diamond_norm(const ComplexMatrix& delta_choi, Index dim_in,
                    Index dim_out) {
  return diamond_norm_detail(delta_choi, dim_in, dim_out).value;
}

namespace {

// Constraints shared by both distance programs: M is the Choi matrix of a
// trace-preserving map in the chosen free set.
void add_free_set_constraints(HermitianSdpBuilder& builder, int m_block,
                              Index dim_in, Index dim_out,
                              MioVariant variant) {
  const ComplexMatrix eye_out = identity(dim_out);
  for (const ComplexMatrix& e : hermitian_entry_basis(dim_in)) {
    builder.add_constraint({{m_block, kron(e, eye_out)}}, {},
                           e.trace().real());
  }
  // Off-diagonal entry functionals on the output space.
  std::vector<ComplexMatrix> off_diagonal;
  for (const ComplexMatrix& e : hermitian_entry_basis(dim_out)) {
    ComplexMatrix diag_part = dephase(e);
    if (max_abs_diff(e, diag_part) > 0.0) off_diagonal.push_back(e);
  }
  if (variant == MioVariant::Paper) {
    const ComplexMatrix eye_in = identity(dim_in);
    for (const ComplexMatrix& e : off_diagonal) {
      builder.add_constraint({{m_block, kron(eye_in, e)}}, {}, 0.0);
    }
    return;
  }
  for (Index i = 0; i < dim_in; ++i) {
    ComplexMatrix projector = ComplexMatrix::Zero(dim_in, dim_in);
    projector(i, i) = 1.0;
    for (const ComplexMatrix& e : off_diagonal) {
      builder.add_constraint({{m_block, kron(projector, e)}}, {}, 0.0);
    }
  }
}

ChoiMatrix free_channel_from_solution(const HermitianSdpBuilder& builder,
                                      const SdpReport& report, int m_block,
                                      Index dim_in, Index dim_out) {
  // Solver feasibility is ~1e-9; validate at the report contract tolerance.
  return ChoiMatrix(builder.block_solution(report, m_block), dim_in, dim_out,
                    1e-6);
}

}  // namespace

DistanceReport t_diamond_mio(const KrausChannel& ch, MioVariant variant) {
  const Index din = ch.dim_in();
  const Index dout = ch.dim_out();
  const Index d = din * dout;
  const ChoiMatrix j = to_choi(ch);

  DiamondBlocks blocks = diamond_scaffold(din, dout);
  HermitianSdpBuilder& builder = blocks.builder;
  const int m_block = builder.add_hermitian_block(d);
  // W = Z - J(N) + M >= 0.
  const int w = builder.add_hermitian_block(d);
  for (const ComplexMatrix& e : hermitian_entry_basis(d)) {
    const double rhs = -(e * j.matrix()).trace().real();
    builder.add_constraint(
        {{w, e}, {blocks.z, -1.0 * e}, {m_block, -1.0 * e}}, {}, rhs);
  }
  add_free_set_constraints(builder, m_block, din, dout, variant);

  // Start from the strictly feasible point: Z0 = I + J(N), M0 = I/|out|,
  // with matching slacks and a comfortably large a.
  const DiamondSlaterPoint slater = diamond_slater_point(j);
  const ComplexMatrix w0 = slater.z0 - j.matrix() + slater.m0;
  const ComplexMatrix tr_out_z0 =
      partial_trace(slater.z0, din, dout, Subsystem::First);
  const double z_top = -min_eigenvalue(-tr_out_z0);  // largest eigenvalue
  const double a0 = 2.0 * z_top + 1.0;
  const ComplexMatrix v0 = a0 * identity(din) - 2.0 * tr_out_z0;
  SdpOptions options = distance_options();
  options.initial_primal = builder.embed_initial(
      {{blocks.z, slater.z0}, {blocks.v, v0}, {m_block, slater.m0}, {w, w0}},
      {{blocks.a, a0}});

  SdpReport report = solve(builder.problem(), options);
  require_solved(report, "t_diamond_mio");
  DistanceReport out{
      report.primal_value, report.dual_value, report.gap,
      free_channel_from_solution(builder, report, m_block, din, dout),
      variant};
  return out;
}

DistanceReport t_a_non(const KrausChannel& ch, MioVariant variant) {
  const Index din = ch.dim_in();
  const Index dout = ch.dim_out();
  const ChoiMatrix j = to_choi(ch);

  HermitianSdpBuilder builder;
  const int m_block = builder.add_hermitian_block(din * dout);
  const int t = builder.add_scalar_block();
  builder.add_scalar_objective(t, 1.0);
  for (Index i = 0; i < din; ++i) {
    const int p = builder.add_hermitian_block(dout);
    const int q = builder.add_hermitian_block(dout);
    const int slack = builder.add_scalar_block();
    ComplexMatrix projector = ComplexMatrix::Zero(din, din);
    projector(i, i) = 1.0;
    const ComplexMatrix block_i = j.basis_block(i);
    // P_i - Q_i + F(|i><i|) = N(|i><i|), entry by entry.
    for (const ComplexMatrix& e : hermitian_entry_basis(dout)) {
      const double rhs = (e * block_i).trace().real();
      builder.add_constraint(
          {{p, e}, {q, -1.0 * e}, {m_block, kron(projector, e)}}, {}, rhs);
    }
    // Tr(P_i + Q_i) <= t via slack.
    builder.add_constraint({{p, identity(dout)}, {q, identity(dout)}},
                           {{slack, 1.0}, {t, -1.0}}, 0.0);
  }
  add_free_set_constraints(builder, m_block, din, dout, variant);

  SdpReport report = solve(builder.problem(), distance_options());
  require_solved(report, "t_a_non");
  DistanceReport out{
      report.primal_value, report.dual_value, report.gap,
      free_channel_from_solution(builder, report, m_block, din, dout),
      variant};
  return out;
}

namespace {

ComplexMatrix apply_kraus_raw(const KrausChannel& ch, const ComplexMatrix& x) {
  ComplexMatrix out = ComplexMatrix::Zero(ch.dim_out(), ch.dim_out());
  for (const ComplexMatrix& k : ch.kraus()) out += k * x * k.adjoint();
  return out;
}

}  // namespace

double induced_trace_norm(const KrausChannel& a, const KrausChannel& b,
                          const OptimizerConfig& cfg) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
    throw DimensionError("induced_trace_norm: channel dimensions differ");
  }
  const Index d = a.dim_in();
  const int n_params = static_cast<int>(4 * d);  // two complex unit vectors

  auto unpack = [d](const Eigen::VectorXd& v, Index offset) {
    ComplexVector ket(d);
    for (Index i = 0; i < d; ++i) {
      ket(i) = Complex(v(offset + 2 * i), v(offset + 2 * i + 1));
    }
    const double norm = ket.norm();
    if (norm < 1e-12) {
      ket = basis_ket(0, d);
    } else {
      ket /= norm;
    }
    return ket;
  };
  auto objective = [&](const Eigen::VectorXd& v) {
    const ComplexVector psi = unpack(v, 0);
    const ComplexVector phi = unpack(v, 2 * d);
    const ComplexMatrix x = psi * phi.adjoint();
    return -trace_norm(apply_kraus_raw(a, x) - apply_kraus_raw(b, x));
  };

  std::vector<Eigen::VectorXd> starts;
  for (Index i = 0; i < d; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n_params);
    v(2 * i) = 1.0;
    v(2 * d + 2 * i) = 1.0;  // psi = phi = |i>
    starts.push_back(v);
  }
  Eigen::VectorXd uniform = Eigen::VectorXd::Zero(n_params);
  for (Index i = 0; i < 2 * d; ++i) uniform(2 * i) = 1.0;
  starts.push_back(uniform);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < cfg.starts; ++s) {
    Eigen::VectorXd v(n_params);
    for (int i = 0; i < n_params; ++i) v(i) = gauss(rng);
    starts.push_back(v);
  }

  double best = 0.0;
  for (const Eigen::VectorXd& start : starts) {
    NelderMeadResult r =
        nelder_mead_minimize(objective, start, 0.2, cfg.max_iters, cfg.f_tol);
    best = std::max(best, -r.value);
  }
  return best;
}

}  // namespace dyncoh
