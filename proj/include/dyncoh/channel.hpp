#ifndef DYNCOH_CHANNEL_HPP
#define DYNCOH_CHANNEL_HPP

#include <string>
#include <vector>

#include "dyncoh/linalg.hpp"

namespace dyncoh {

// Unit-trace positive-semidefinite operator. Construction validates; the
// stored matrix is symmetrized so downstream Hermitian routines can rely on
// exact Hermiticity.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m, double tol = kValidationTol);

  static DensityMatrix pure(const ComplexVector& ket);
  static DensityMatrix basis_state(Index i, Index d);
  static DensityMatrix maximally_mixed(Index d);
  // Qubit state from Bloch coordinates; requires x^2 + y^2 + z^2 <= 1.
  static DensityMatrix from_bloch(double x, double y, double z);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

// Channel in Kraus form: rho -> sum_n K_n rho K_n^dagger. Construction
// validates trace preservation sum_n K_n^dagger K_n = I within
// validation_tol (the worked channels of interest are printed to four
// decimals, so the tolerance is caller-adjustable).
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus,
                        double validation_tol = kValidationTol);

  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  double validation_tol() const { return validation_tol_; }

  // max |(sum K^dag K - I)_ij|; zero for an exactly trace-preserving set.
  double completeness_defect() const;

 private:
  std::vector<ComplexMatrix> kraus_;
  Index dim_in_ = 0;
  Index dim_out_ = 0;
  double validation_tol_ = kValidationTol;
};

// Choi matrix J = sum_ij |i><j| (x) N(|i><j|), input factor first, so block
// (i, j) of size dim_out x dim_out is N(|i><j|). Construction validates
// positive semidefiniteness and that the output-traced reduction equals the
// input identity, both within tol.
class ChoiMatrix {
 public:
  ChoiMatrix(const ComplexMatrix& m, Index dim_in, Index dim_out,
             double tol = kValidationTol);

  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  const ComplexMatrix& matrix() const { return m_; }

  // Tr over the output factor; the identity on the input space for any
  // trace-preserving map.
  ComplexMatrix input_marginal() const;
  // Tr over the input factor; the image of the maximally mixed state scaled
  // by dim_in.
  ComplexMatrix output_marginal() const;
  // N(|i><i|): diagonal block i.
  ComplexMatrix basis_block(Index i) const;

 private:
  ComplexMatrix m_;
  Index dim_in_;
  Index dim_out_;
};

// ---- constructors for the channels used throughout ----

KrausChannel identity_channel(Index d);
KrausChannel unitary_channel(const ComplexMatrix& u,
                             double tol = kValidationTol);
// K0 = diag(1, sqrt(1-eta)), K1 = sqrt(eta)|0><1|.
KrausChannel amplitude_damping(double eta);
// Full dephasing: Kraus set {|i><i|}.
KrausChannel dephasing_channel(Index d);
// Basis-permutation unitary channel from a permutation of {0..d-1}.
KrausChannel permutation_channel(const std::vector<Index>& perm);
KrausChannel hadamard_channel();

// ---- application and conversion ----

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);

struct SelectiveBranch {
  double probability;
  DensityMatrix state;
};

// Outcome distribution of the selective (measured) version of the channel;
// branches with probability below drop_tol are omitted, the rest are
// normalized.
std::vector<SelectiveBranch> apply_selective(const KrausChannel& ch,
                                             const DensityMatrix& rho,
                                             double drop_tol = 1e-12);

ChoiMatrix to_choi(const KrausChannel& ch);

// Kraus operators from the eigendecomposition of the Choi matrix; eigenvalues
// below cutoff are discarded as numerical noise.
KrausChannel kraus_from_choi(const ChoiMatrix& j, double cutoff = 1e-10,
                             double validation_tol = kValidationTol);

// Action of the map described by a Choi matrix (also valid for non-CP
// Hermitian blocks, hence the raw-matrix signature):
// N(rho) = Tr_in[(rho^T (x) I) J].
ComplexMatrix apply_choi(const ComplexMatrix& j, Index dim_in, Index dim_out,
                         const ComplexMatrix& rho);

// after(before(rho)); Kraus set is all products.
KrausChannel compose(const KrausChannel& after, const KrausChannel& before);
// Parallel composition; Kraus set is all tensor products, first argument on
// the left factor.
KrausChannel tensor(const KrausChannel& a, const KrausChannel& b);
// The fully depolarizing trace-and-replace map rho -> Tr(rho) I/d.
KrausChannel trace_out_channel(Index d);

// ---- membership in the free set ----

// The two Choi-level characterizations of maximal-incoherence exposed by this
// library. Strict is the standard condition: every basis state maps to a
// diagonal state. Paper is the weaker marginal form: Tr over the input factor
// of the Choi matrix is diagonal (equivalently, the maximally mixed state
// maps to a diagonal state); every unital channel satisfies it.
enum class MioVariant { Paper, Strict };

std::string to_string(MioVariant variant);
MioVariant mio_variant_from_string(const std::string& name);

bool is_mio(const KrausChannel& ch, MioVariant variant = MioVariant::Strict,
            double tol = kValidationTol);
bool is_mio(const ChoiMatrix& j, MioVariant variant = MioVariant::Strict,
            double tol = kValidationTol);

}  // namespace dyncoh

#endif  // DYNCOH_CHANNEL_HPP
