#include "dyncoh/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace dyncoh {

namespace {

constexpr Index kMaxBlockSize = 64;
constexpr double kStepFraction = 0.98;
constexpr double kDualDivergenceBound = 1e8;

void check(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

// Largest alpha >= 0 with B + alpha * dB still PSD, for positive definite B:
// 1 + alpha * lambda_min(L^-1 dB L^-T) >= 0.
double max_step(const RealMatrix& b, const RealMatrix& db) {
  Eigen::LLT<RealMatrix> llt(b);
  if (llt.info() != Eigen::Success) return 0.0;
  RealMatrix half = llt.matrixL().solve(db);
  RealMatrix t = llt.matrixL().solve(half.transpose());
  const double lambda_min =
      Eigen::SelfAdjointEigenSolver<RealMatrix>(t, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  if (lambda_min >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lambda_min;
}

RealMatrix psd_inverse(const RealMatrix& s) {
  Eigen::LLT<RealMatrix> llt(s);
  if (llt.info() == Eigen::Success) {
    return llt.solve(RealMatrix::Identity(s.rows(), s.cols()));
  }
  // Interior iterates can brush the boundary numerically; regularize and
  // retry rather than giving up.
  RealMatrix bumped = s;
  double jitter = 1e-14 * (1.0 + s.cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt < 4; ++attempt) {
    bumped += jitter * RealMatrix::Identity(s.rows(), s.cols());
    Eigen::LLT<RealMatrix> retry(bumped);
    if (retry.info() == Eigen::Success) {
      return retry.solve(RealMatrix::Identity(s.rows(), s.cols()));
    }
    jitter *= 100.0;
  }
  throw ConvergenceError("sdp: dual slack lost positive definiteness");
}

struct ValidatedProblem {
  std::vector<Index> sizes;
  std::vector<RealMatrix> c;
  // Per constraint: sorted unique (block, symmetric coefficient) terms.
  std::vector<std::vector<std::pair<int, RealMatrix>>> terms;
  RealVector rhs;
};

ValidatedProblem validate(const SdpProblem& p) {
  const int nblocks = static_cast<int>(p.block_sizes.size());
  check(nblocks > 0, "sdp: problem has no variable blocks");
  check(p.objective.size() == p.block_sizes.size(),
        "sdp: objective must provide one matrix per block");
  ValidatedProblem v;
  v.sizes = p.block_sizes;
  for (int b = 0; b < nblocks; ++b) {
    const Index n = p.block_sizes[b];
    check(n >= 1 && n <= kMaxBlockSize,
          "sdp: block size must lie in [1, 64], got " + std::to_string(n));
    const RealMatrix& c = p.objective[b];
    check(c.rows() == n && c.cols() == n,
          "sdp: objective matrix shape mismatch");
    check((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + c.cwiseAbs().maxCoeff()),
          "sdp: objective matrix must be symmetric");
    v.c.push_back((c + c.transpose()) / 2.0);
  }
  const int m = static_cast<int>(p.constraints.size());
  v.rhs.resize(m);
  v.terms.resize(m);
  for (int k = 0; k < m; ++k) {
    const SdpProblem::Constraint& con = p.constraints[k];
    check(!con.terms.empty(), "sdp: constraint touches no blocks");
    std::map<int, RealMatrix> merged;
    for (const auto& [b, a] : con.terms) {
      check(b >= 0 && b < nblocks, "sdp: constraint names an unknown block");
      const Index n = p.block_sizes[b];
      check(a.rows() == n && a.cols() == n,
            "sdp: constraint matrix shape mismatch");
      check((a - a.transpose()).cwiseAbs().maxCoeff() <=
                1e-12 * (1.0 + a.cwiseAbs().maxCoeff()),
            "sdp: constraint matrix must be symmetric");
      auto [it, inserted] = merged.emplace(b, (a + a.transpose()) / 2.0);
      if (!inserted) it->second += (a + a.transpose()) / 2.0;
    }
    v.terms[k].assign(merged.begin(), merged.end());
    v.rhs(k) = con.rhs;
  }
  return v;
}

double block_inner(const RealMatrix& a, const RealMatrix& b) {
  return (a.array() * b.array()).sum();
}

}  // namespace

std::string to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::Optimal:
      return "optimal";
    case SdpStatus::Infeasible:
      return "infeasible";
    case SdpStatus::MaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

SdpReport solve(const SdpProblem& problem, const SdpOptions& options) {
  ValidatedProblem p = validate(problem);
  const int nblocks = static_cast<int>(p.sizes.size());
  const int m = static_cast<int>(p.rhs.size());
  double total_dim = 0.0;
  for (Index n : p.sizes) total_dim += static_cast<double>(n);

  // Per-block list of (constraint index, coefficient) for Schur assembly.
  std::vector<std::vector<std::pair<int, const RealMatrix*>>> by_block(nblocks);
  for (int k = 0; k < m; ++k) {
    for (const auto& [b, a] : p.terms[k]) by_block[b].emplace_back(k, &a);
  }

  double data_scale = 1.0;
  for (int k = 0; k < m; ++k) data_scale = std::max(data_scale, std::abs(p.rhs(k)));
  for (int b = 0; b < nblocks; ++b) {
    data_scale = std::max(data_scale, p.c[b].cwiseAbs().maxCoeff());
  }
  const double eta = std::max(10.0, 2.0 * data_scale);

  std::vector<RealMatrix> x, s;
  for (int b = 0; b < nblocks; ++b) {
    x.push_back(eta * RealMatrix::Identity(p.sizes[b], p.sizes[b]));
    s.push_back(eta * RealMatrix::Identity(p.sizes[b], p.sizes[b]));
  }
  if (options.initial_primal) {
    const auto& given = *options.initial_primal;
    check(static_cast<int>(given.size()) == nblocks,
          "sdp: initial primal point must cover every block");
    bool usable = true;
    for (int b = 0; b < nblocks && usable; ++b) {
      if (given[b].rows() != p.sizes[b] || given[b].cols() != p.sizes[b]) {
        throw ValidationError("sdp: initial primal block shape mismatch");
      }
      Eigen::LLT<RealMatrix> llt((given[b] + given[b].transpose()) / 2.0);
      usable = llt.info() == Eigen::Success;
    }
    // Only a strictly positive definite start is an interior point; fall
    // back silently otherwise (the default start is always valid).
    if (usable) {
      for (int b = 0; b < nblocks; ++b) {
        x[b] = (given[b] + given[b].transpose()) / 2.0;
      }
    }
  }
  RealVector y = RealVector::Zero(m);

  SdpReport report;
  report.status = SdpStatus::MaxIterations;

  const double rhs_scale = 1.0 + (m > 0 ? p.rhs.cwiseAbs().maxCoeff() : 0.0);
  double obj_scale = 1.0;
  for (int b = 0; b < nblocks; ++b) {
    obj_scale = std::max(obj_scale, 1.0 + p.c[b].cwiseAbs().maxCoeff());
  }

  int divergence_hits = 0;
  int iter = 0;
  for (; iter < options.max_iters; ++iter) {
    std::vector<RealMatrix> s_inv;
    s_inv.reserve(nblocks);
    for (int b = 0; b < nblocks; ++b) s_inv.push_back(psd_inverse(s[b]));

    RealVector r_p = p.rhs;
    for (int k = 0; k < m; ++k) {
      for (const auto& [b, a] : p.terms[k]) r_p(k) -= block_inner(a, x[b]);
    }
    std::vector<RealMatrix> r_d;
    r_d.reserve(nblocks);
    for (int b = 0; b < nblocks; ++b) r_d.push_back(p.c[b] - s[b]);
    for (int k = 0; k < m; ++k) {
      for (const auto& [b, a] : p.terms[k]) r_d[b] -= y(k) * a;
    }

    double primal_res = 0.0;
    if (m > 0) primal_res = r_p.cwiseAbs().maxCoeff();
    double dual_res = 0.0;
    double xs = 0.0, pobj = 0.0;
    for (int b = 0; b < nblocks; ++b) {
      dual_res = std::max(dual_res, r_d[b].cwiseAbs().maxCoeff());
      xs += block_inner(x[b], s[b]);
      pobj += block_inner(p.c[b], x[b]);
    }
    const double dobj = p.rhs.dot(y);
    const double mu = xs / total_dim;

    report.primal_value = pobj;
    report.dual_value = dobj;
    report.gap = std::abs(pobj - dobj);
    report.primal_residual = primal_res;
    report.dual_residual = dual_res;
    report.iterations = iter;

    if (primal_res <= options.feas_tol * rhs_scale &&
        dual_res <= options.feas_tol * obj_scale &&
        report.gap <= options.gap_tol) {
      report.status = SdpStatus::Optimal;
      break;
    }
    if (std::abs(dobj) > kDualDivergenceBound &&
        primal_res > 100.0 * options.feas_tol * rhs_scale) {
      if (++divergence_hits >= 5) {
        report.status = SdpStatus::Infeasible;
        break;
      }
    } else {
      divergence_hits = 0;
    }

    // Schur complement M_kl = sum_b Tr(A_k X A_l S^-1); symmetric positive
    // definite for linearly independent constraints.
    RealMatrix schur = RealMatrix::Zero(m, m);
    for (int b = 0; b < nblocks; ++b) {
      const auto& list = by_block[b];
      for (const auto& [l, a_l] : list) {
        const RealMatrix u = x[b] * (*a_l) * s_inv[b];
        for (const auto& [k, a_k] : list) {
          schur(k, l) += block_inner(*a_k, u);
        }
      }
    }
    schur = (schur + schur.transpose()) / 2.0;
    Eigen::LDLT<RealMatrix> schur_fact(schur);
    if (schur_fact.info() != Eigen::Success) {
      schur += 1e-13 * (1.0 + schur.cwiseAbs().maxCoeff()) *
               RealMatrix::Identity(m, m);
      schur_fact.compute(schur);
      if (schur_fact.info() != Eigen::Success) {
        throw ConvergenceError("sdp: Schur complement factorization failed "
                               "(dependent constraints?)");
      }
    }

    // Shared pieces: G_b = X R_d S^-1 contributes to every right-hand side.
    std::vector<RealMatrix> g;
    g.reserve(nblocks);
    for (int b = 0; b < nblocks; ++b) g.push_back(x[b] * r_d[b] * s_inv[b]);

    auto assemble_rhs = [&](double sigma_mu,
                            const std::vector<RealMatrix>* corrector) {
      RealVector rhs(m);
      for (int k = 0; k < m; ++k) {
        double v = p.rhs(k);
        for (const auto& [b, a] : p.terms[k]) {
          v -= sigma_mu * block_inner(a, s_inv[b]);
          v += block_inner(a, g[b]);
          if (corrector) v += block_inner(a, (*corrector)[b]);
        }
        rhs(k) = v;
      }
      return rhs;
    };

    auto directions = [&](const RealVector& dy_step, double sigma_mu,
                          const std::vector<RealMatrix>* corrector,
                          std::vector<RealMatrix>& dx_out,
                          std::vector<RealMatrix>& ds_out) {
      ds_out = r_d;
      for (int k = 0; k < m; ++k) {
        for (const auto& [b, a] : p.terms[k]) ds_out[b] -= dy_step(k) * a;
      }
      dx_out.clear();
      dx_out.reserve(nblocks);
      for (int b = 0; b < nblocks; ++b) {
        RealMatrix v =
            sigma_mu * s_inv[b] - x[b] - x[b] * ds_out[b] * s_inv[b];
        if (corrector) v -= (*corrector)[b];
        dx_out.push_back((v + v.transpose()) / 2.0);
      }
    };

    // Predictor (affine scaling, sigma = 0).
    RealVector dy_aff = schur_fact.solve(assemble_rhs(0.0, nullptr));
    if (!dy_aff.allFinite()) {
      throw ConvergenceError("sdp: Newton system produced non-finite step");
    }
    std::vector<RealMatrix> dx_aff, ds_aff;
    directions(dy_aff, 0.0, nullptr, dx_aff, ds_aff);

    double alpha_p_aff = 1.0, alpha_d_aff = 1.0;
    for (int b = 0; b < nblocks; ++b) {
      alpha_p_aff = std::min(alpha_p_aff, max_step(x[b], dx_aff[b]));
      alpha_d_aff = std::min(alpha_d_aff, max_step(s[b], ds_aff[b]));
    }
    double xs_aff = 0.0;
    for (int b = 0; b < nblocks; ++b) {
      xs_aff += block_inner(x[b] + alpha_p_aff * dx_aff[b],
                            s[b] + alpha_d_aff * ds_aff[b]);
    }
    const double mu_aff = std::max(xs_aff, 0.0) / total_dim;
    double sigma = std::pow(mu_aff / mu, 3.0);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector: second-order term dXa dSa S^-1 enters both the Schur
    // right-hand side and the dX recovery.
    std::vector<RealMatrix> corr;
    corr.reserve(nblocks);
    for (int b = 0; b < nblocks; ++b) {
      corr.push_back(dx_aff[b] * ds_aff[b] * s_inv[b]);
    }
    RealVector dy = schur_fact.solve(assemble_rhs(sigma * mu, &corr));
    if (!dy.allFinite()) {
      throw ConvergenceError("sdp: Newton system produced non-finite step");
    }
    std::vector<RealMatrix> dx, ds;
    directions(dy, sigma * mu, &corr, dx, ds);

    double alpha_p = std::numeric_limits<double>::infinity();
    double alpha_d = std::numeric_limits<double>::infinity();
    for (int b = 0; b < nblocks; ++b) {
      alpha_p = std::min(alpha_p, max_step(x[b], dx[b]));
      alpha_d = std::min(alpha_d, max_step(s[b], ds[b]));
    }
    alpha_p = std::min(1.0, kStepFraction * alpha_p);
    alpha_d = std::min(1.0, kStepFraction * alpha_d);
    if (alpha_p <= 1e-14 && alpha_d <= 1e-14) {
      // No progress possible; stop and report whatever was reached.
      break;
    }
    for (int b = 0; b < nblocks; ++b) {
      x[b] += alpha_p * dx[b];
      s[b] += alpha_d * ds[b];
    }
    y += alpha_d * dy;
  }

  report.primal_solution = std::move(x);
  report.dual_solution = y;
  report.dual_slack = std::move(s);
  if (report.status == SdpStatus::MaxIterations) report.iterations = iter;
  return report;
}

RealMatrix embed_hermitian(const ComplexMatrix& h) {
  const Index d = h.rows();
  if (h.cols() != d) throw DimensionError("embed_hermitian: square input only");
  RealMatrix out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = h.real();
  out.topRightCorner(d, d) = -h.imag();
  out.bottomLeftCorner(d, d) = h.imag();
  out.bottomRightCorner(d, d) = h.real();
  return out;
}

ComplexMatrix extract_hermitian(const RealMatrix& y) {
  const Index n = y.rows();
  if (y.cols() != n || n % 2 != 0) {
    throw DimensionError("extract_hermitian: expected even square matrix");
  }
  const Index d = n / 2;
  RealMatrix re =
      (y.topLeftCorner(d, d) + y.bottomRightCorner(d, d)) / 2.0;
  RealMatrix im =
      (y.bottomLeftCorner(d, d) - y.topRightCorner(d, d)) / 2.0;
  ComplexMatrix out(d, d);
  out.real() = re;
  out.imag() = im;
  return (out + out.adjoint()) / 2.0;
}

int HermitianSdpBuilder::add_hermitian_block(Index d) {
  check(d >= 1, "builder: block dimension must be positive");
  blocks_.push_back(BlockInfo{BlockKind::Hermitian, d});
  problem_.block_sizes.push_back(2 * d);
  problem_.objective.push_back(RealMatrix::Zero(2 * d, 2 * d));
  return static_cast<int>(blocks_.size()) - 1;
}

int HermitianSdpBuilder::add_scalar_block() {
  blocks_.push_back(BlockInfo{BlockKind::Scalar, 1});
  problem_.block_sizes.push_back(1);
  problem_.objective.push_back(RealMatrix::Zero(1, 1));
  return static_cast<int>(blocks_.size()) - 1;
}

void HermitianSdpBuilder::add_objective(int block, const ComplexMatrix& c) {
  check(block >= 0 && block < static_cast<int>(blocks_.size()) &&
            blocks_[block].kind == BlockKind::Hermitian,
        "builder: add_objective needs a Hermitian block");
  check(is_hermitian(c) && c.rows() == blocks_[block].complex_dim,
        "builder: objective coefficient must be Hermitian of block dimension");
  problem_.objective[block] += embed_hermitian(c) / 2.0;
}

void HermitianSdpBuilder::add_scalar_objective(int block, double coeff) {
  check(block >= 0 && block < static_cast<int>(blocks_.size()) &&
            blocks_[block].kind == BlockKind::Scalar,
        "builder: add_scalar_objective needs a scalar block");
  problem_.objective[block](0, 0) += coeff;
}

int HermitianSdpBuilder::add_constraint(std::vector<Term> terms,
                                        std::vector<ScalarTerm> scalars,
                                        double rhs) {
  SdpProblem::Constraint con;
  con.rhs = rhs;
  std::map<int, RealMatrix> merged;
  for (const Term& t : terms) {
    check(t.block >= 0 && t.block < static_cast<int>(blocks_.size()) &&
              blocks_[t.block].kind == BlockKind::Hermitian,
          "builder: Hermitian term names a non-Hermitian block");
    check(is_hermitian(t.a) && t.a.rows() == blocks_[t.block].complex_dim,
          "builder: constraint coefficient must be Hermitian of block "
          "dimension");
    RealMatrix coeff = embed_hermitian(t.a) / 2.0;
    auto [it, inserted] = merged.emplace(t.block, coeff);
    if (!inserted) it->second += coeff;
  }
  for (const ScalarTerm& t : scalars) {
    check(t.block >= 0 && t.block < static_cast<int>(blocks_.size()) &&
              blocks_[t.block].kind == BlockKind::Scalar,
          "builder: scalar term names a non-scalar block");
    RealMatrix coeff(1, 1);
    coeff(0, 0) = t.coeff;
    auto [it, inserted] = merged.emplace(t.block, coeff);
    if (!inserted) it->second += coeff;
  }
  check(!merged.empty(), "builder: constraint touches no blocks");
  con.terms.assign(merged.begin(), merged.end());
  problem_.constraints.push_back(std::move(con));
  return static_cast<int>(problem_.constraints.size()) - 1;
}

ComplexMatrix HermitianSdpBuilder::block_solution(const SdpReport& report,
                                                  int block) const {
  check(block >= 0 && block < static_cast<int>(blocks_.size()) &&
            blocks_[block].kind == BlockKind::Hermitian,
        "builder: block_solution needs a Hermitian block");
  return extract_hermitian(report.primal_solution.at(block));
}

double HermitianSdpBuilder::scalar_solution(const SdpReport& report,
                                            int block) const {
  check(block >= 0 && block < static_cast<int>(blocks_.size()) &&
            blocks_[block].kind == BlockKind::Scalar,
        "builder: scalar_solution needs a scalar block");
  return report.primal_solution.at(block)(0, 0);
}

std::vector<RealMatrix> HermitianSdpBuilder::embed_initial(
    const std::vector<std::pair<int, ComplexMatrix>>& hermitian_values,
    const std::vector<std::pair<int, double>>& scalar_values) const {
  std::vector<RealMatrix> init;
  init.reserve(blocks_.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const Index n = problem_.block_sizes[b];
    init.push_back(RealMatrix::Identity(n, n));
  }
  for (const auto& [block, h] : hermitian_values) {
    check(block >= 0 && block < static_cast<int>(blocks_.size()) &&
              blocks_[block].kind == BlockKind::Hermitian,
          "builder: embed_initial Hermitian value for non-Hermitian block");
    check(h.rows() == blocks_[block].complex_dim,
          "builder: embed_initial dimension mismatch");
    init[block] = embed_hermitian((h + h.adjoint()) / 2.0);
  }
  for (const auto& [block, value] : scalar_values) {
    check(block >= 0 && block < static_cast<int>(blocks_.size()) &&
              blocks_[block].kind == BlockKind::Scalar,
          "builder: embed_initial scalar value for non-scalar block");
    init[block](0, 0) = value;
  }
  return init;
}

std::vector<ComplexMatrix> hermitian_entry_basis(Index d) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(d * d));
  const Complex i_unit(0.0, 1.0);
  for (Index i = 0; i < d; ++i) {
    for (Index j = i; j < d; ++j) {
      if (i == j) {
        ComplexMatrix e = ComplexMatrix::Zero(d, d);
        e(i, i) = 1.0;
        basis.push_back(std::move(e));
      } else {
        ComplexMatrix re = ComplexMatrix::Zero(d, d);
        re(i, j) = 0.5;
        re(j, i) = 0.5;
        basis.push_back(std::move(re));
        ComplexMatrix im = ComplexMatrix::Zero(d, d);
        im(i, j) = 0.5 * i_unit;
        im(j, i) = -0.5 * i_unit;
        basis.push_back(std::move(im));
      }
    }
  }
  return basis;
}

ComplexMatrix combine_entry_basis(Index d, const RealVector& coeffs) {
  const std::vector<ComplexMatrix> basis = hermitian_entry_basis(d);
  check(coeffs.size() == static_cast<Index>(basis.size()),
        "combine_entry_basis: coefficient count must be d^2");
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    out += coeffs(static_cast<Index>(k)) * basis[k];
  }
  return out;
}

DiamondSlaterPoint diamond_slater_point(const ChoiMatrix& n) {
  const Index d = n.dim_in() * n.dim_out();
  DiamondSlaterPoint point;
  point.z0 = ComplexMatrix::Identity(d, d) + n.matrix();
  point.m0 =
      ComplexMatrix::Identity(d, d) / static_cast<double>(n.dim_out());
  return point;
}

}  // namespace dyncoh
