#ifndef DYNCOH_SDP_HPP
#define DYNCOH_SDP_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dyncoh/channel.hpp"
#include "dyncoh/linalg.hpp"

namespace dyncoh {

// Dense real SDP in standard primal form over a product of PSD blocks:
//   minimize    sum_b <C_b, X_b>
//   subject to  sum_b <A_{k,b}, X_b> = rhs_k   (k = 1..m),   X_b >= 0,
// with <U, V> = Tr(U V) on symmetric matrices. Constraints store only the
// blocks they touch.
struct SdpProblem {
  struct Constraint {
    std::vector<std::pair<int, RealMatrix>> terms;  // (block index, coeff)
    double rhs = 0.0;
  };

  std::vector<Index> block_sizes;
  std::vector<RealMatrix> objective;  // one C_b per block
  std::vector<Constraint> constraints;
};

enum class SdpStatus { Optimal, Infeasible, MaxIterations };

std::string to_string(SdpStatus status);

struct SdpReport {
  SdpStatus status = SdpStatus::MaxIterations;
  double primal_value = 0.0;             // sum_b <C_b, X_b>
  double dual_value = 0.0;               // rhs^T y
  double gap = 0.0;                      // |primal_value - dual_value|
  std::vector<RealMatrix> primal_solution;  // X_b
  RealVector dual_solution;                 // y_k, one per constraint
  std::vector<RealMatrix> dual_slack;       // S_b = C_b - sum_k y_k A_{k,b}
  double primal_residual = 0.0;          // max_k |<A_k, X> - rhs_k|
  double dual_residual = 0.0;            // max entry defect of C - A^T y - S
  int iterations = 0;
};

struct SdpOptions {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iters = 200;
  // Strictly positive definite starting blocks (one per block, matching
  // sizes); used instead of the default scaled-identity start.
  std::optional<std::vector<RealMatrix>> initial_primal;
};

// Primal-dual path-following interior-point solve (infeasible start,
// predictor-corrector). On status Optimal the returned primal and dual
// values bracket the true optimum within gap. Problems are expected to admit
// strictly feasible points on both sides; structural infeasibility is
// reported heuristically via dual divergence. Block sizes are capped at 64.
SdpReport solve(const SdpProblem& problem, const SdpOptions& options = {});

// ---- complex Hermitian layer ----

// Symmetric embedding of a Hermitian matrix: H -> [[Re H, -Im H],
// [Im H, Re H]]. Doubles the dimension; inner products double too, so
// coefficient matrices are scaled by 1/2 at lowering time (centralized here).
RealMatrix embed_hermitian(const ComplexMatrix& h);
// Averaged inverse of the embedding; exact on embedded matrices and a
// value-preserving projection otherwise.
ComplexMatrix extract_hermitian(const RealMatrix& y);

// Assembles problems over complex Hermitian PSD variables and nonnegative
// scalars, lowering everything to the real form above. Linear functionals of
// a Hermitian variable X enter as Re Tr(A X) with Hermitian coefficient A.
class HermitianSdpBuilder {
 public:
  struct Term {
    int block;
    ComplexMatrix a;
  };
  struct ScalarTerm {
    int block;
    double coeff;
  };

  // Returns the block handle used everywhere else.
  int add_hermitian_block(Index d);
  int add_scalar_block();

  // Objective contributions: minimize sum of Re Tr(C X) + sum coeff * x.
  void add_objective(int block, const ComplexMatrix& c);
  void add_scalar_objective(int block, double coeff);

  // One real equality constraint:
  //   sum_t Re Tr(A_t X_{b_t}) + sum_t coeff_t x_{b_t} = rhs.
  // Returns the constraint index (dual multiplier position).
  int add_constraint(std::vector<Term> terms, std::vector<ScalarTerm> scalars,
                     double rhs);

  const SdpProblem& problem() const { return problem_; }

  ComplexMatrix block_solution(const SdpReport& report, int block) const;
  double scalar_solution(const SdpReport& report, int block) const;

  // Embeds per-block starting values (Hermitian matrices / scalars) into the
  // real form for SdpOptions::initial_primal.
  std::vector<RealMatrix> embed_initial(
      const std::vector<std::pair<int, ComplexMatrix>>& hermitian_values,
      const std::vector<std::pair<int, double>>& scalar_values) const;

 private:
  enum class BlockKind { Hermitian, Scalar };
  struct BlockInfo {
    BlockKind kind;
    Index complex_dim;  // meaningful for Hermitian blocks
  };

  std::vector<BlockInfo> blocks_;
  SdpProblem problem_;
};

// Hermitian entry functionals of dimension d in a fixed order: walking the
// upper triangle row-major, emit E_ii on the diagonal, and for i < j the
// real part functional (E_ij + E_ji)/2 followed by the imaginary part
// functional i(E_ij - E_ji)/2. For Hermitian H, Re Tr(e H) recovers the
// corresponding entry component, and the family spans all real-linear
// functionals of H. Count: d^2.
std::vector<ComplexMatrix> hermitian_entry_basis(Index d);

// sum_k coeffs_k e_k over the basis above (dual-multiplier reconstruction);
// coeffs.size() must be d^2.
ComplexMatrix combine_entry_basis(Index d, const RealVector& coeffs);

// Strictly feasible starting point for the diamond-norm programs:
//   Z0 = I + J(N),  M0 = I / dim_out.
// Z0 strictly dominates both 0 and J(N) - M for any CPTP M, and M0 is a
// valid Choi matrix of the fully depolarizing channel, so every constraint
// of the distance programs holds with margin.
struct DiamondSlaterPoint {
  ComplexMatrix z0;
  ComplexMatrix m0;
};

DiamondSlaterPoint diamond_slater_point(const ChoiMatrix& n);

}  // namespace dyncoh

#endif  // DYNCOH_SDP_HPP
