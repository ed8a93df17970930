#include "dyncoh/channel.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace dyncoh {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("DensityMatrix: matrix must be square and nonempty");
  }
  m_ = (m + m.adjoint()) / 2.0;
  const double defect = hermiticity_defect(m);
  require(defect <= tol, "DensityMatrix: Hermiticity defect " +
                             std::to_string(defect) + " exceeds tolerance");
  const double trace_err = std::abs(m.trace() - Complex(1.0, 0.0));
  require(trace_err <= tol, "DensityMatrix: trace deviates from 1 by " +
                                std::to_string(trace_err));
  const double lambda_min = min_eigenvalue(m_);
  require(lambda_min >= -tol,
          "DensityMatrix: negative eigenvalue " + std::to_string(lambda_min));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& ket) {
  const double norm = ket.norm();
  if (norm <= 0.0) throw ValidationError("DensityMatrix::pure: zero vector");
  ComplexVector unit = ket / norm;
  return DensityMatrix(unit * unit.adjoint(), Unchecked{});
}

DensityMatrix DensityMatrix::basis_state(Index i, Index d) {
  return pure(basis_ket(i, d));
}

DensityMatrix DensityMatrix::maximally_mixed(Index d) {
  if (d <= 0) throw DimensionError("maximally_mixed: dimension must be >= 1");
  ComplexMatrix m = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  return DensityMatrix(std::move(m), Unchecked{});
}

DensityMatrix DensityMatrix::from_bloch(double x, double y, double z) {
  const double r2 = x * x + y * y + z * z;
  if (r2 > 1.0 + 1e-12) {
    throw ValidationError("from_bloch: point outside the unit ball");
  }
  ComplexMatrix m(2, 2);
  m(0, 0) = Complex((1.0 + z) / 2.0, 0.0);
  m(1, 1) = Complex((1.0 - z) / 2.0, 0.0);
  m(0, 1) = Complex(x / 2.0, -y / 2.0);
  m(1, 0) = Complex(x / 2.0, y / 2.0);
  return DensityMatrix(std::move(m), Unchecked{});
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus,
                           double validation_tol)
    : kraus_(std::move(kraus)), validation_tol_(validation_tol) {
  require(!kraus_.empty(), "KrausChannel: empty Kraus set");
  dim_out_ = kraus_.front().rows();
  dim_in_ = kraus_.front().cols();
  require(dim_in_ > 0 && dim_out_ > 0,
          "KrausChannel: Kraus operators must be nonempty matrices");
  for (const ComplexMatrix& k : kraus_) {
    if (k.rows() != dim_out_ || k.cols() != dim_in_) {
      throw DimensionError("KrausChannel: inconsistent Kraus operator shapes");
    }
  }
  const double defect = completeness_defect();
  if (defect > validation_tol_) {
    std::ostringstream msg;
    msg << "KrausChannel: trace-preservation defect " << defect
        << " exceeds tolerance " << validation_tol_
        << " (sum of K^dag K is not the identity)";
    throw ValidationError(msg.str());
  }
}

double KrausChannel::completeness_defect() const {
  ComplexMatrix sum = ComplexMatrix::Zero(dim_in_, dim_in_);
  for (const ComplexMatrix& k : kraus_) sum += k.adjoint() * k;
  return max_abs_diff(sum, identity(dim_in_));
}

ChoiMatrix::ChoiMatrix(const ComplexMatrix& m, Index dim_in, Index dim_out,
                       double tol)
    : dim_in_(dim_in), dim_out_(dim_out) {
  const Index d = dim_in * dim_out;
  if (dim_in <= 0 || dim_out <= 0 || m.rows() != d || m.cols() != d) {
    throw DimensionError("ChoiMatrix: matrix size does not match dimensions");
  }
  m_ = (m + m.adjoint()) / 2.0;
  const double defect = hermiticity_defect(m);
  require(defect <= tol, "ChoiMatrix: Hermiticity defect " +
                             std::to_string(defect) + " exceeds tolerance");
  const double lambda_min = min_eigenvalue(m_);
  require(lambda_min >= -tol, "ChoiMatrix: not positive semidefinite (min "
                              "eigenvalue " +
                                  std::to_string(lambda_min) + ")");
  const double tp_defect = max_abs_diff(input_marginal(), identity(dim_in_));
  require(tp_defect <= tol,
          "ChoiMatrix: output-traced reduction deviates from identity by " +
              std::to_string(tp_defect));
}

ComplexMatrix ChoiMatrix::input_marginal() const {
  return partial_trace(m_, dim_in_, dim_out_, Subsystem::First);
}

ComplexMatrix ChoiMatrix::output_marginal() const {
  return partial_trace(m_, dim_in_, dim_out_, Subsystem::Second);
}

ComplexMatrix ChoiMatrix::basis_block(Index i) const {
  if (i < 0 || i >= dim_in_) {
    throw DimensionError("basis_block: index out of range");
  }
  return m_.block(i * dim_out_, i * dim_out_, dim_out_, dim_out_);
}

KrausChannel identity_channel(Index d) {
  return KrausChannel({identity(d)});
}

KrausChannel unitary_channel(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) {
    throw DimensionError("unitary_channel: matrix must be square");
  }
  return KrausChannel({u}, tol);
}

KrausChannel amplitude_damping(double eta) {
  if (eta < 0.0 || eta > 1.0) {
    throw ValidationError("amplitude_damping: eta must lie in [0, 1]");
  }
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - eta);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(eta);
  return KrausChannel({std::move(k0), std::move(k1)}, kStructuralTol);
}

KrausChannel dephasing_channel(Index d) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    ComplexMatrix k = ComplexMatrix::Zero(d, d);
    k(i, i) = 1.0;
    kraus.push_back(std::move(k));
  }
  return KrausChannel(std::move(kraus), kStructuralTol);
}

KrausChannel permutation_channel(const std::vector<Index>& perm) {
  const Index d = static_cast<Index>(perm.size());
  require(d > 0, "permutation_channel: empty permutation");
  std::vector<bool> seen(perm.size(), false);
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    const Index target = perm[static_cast<std::size_t>(i)];
    if (target < 0 || target >= d || seen[static_cast<std::size_t>(target)]) {
      throw ValidationError("permutation_channel: not a permutation");
    }
    seen[static_cast<std::size_t>(target)] = true;
    u(target, i) = 1.0;
  }
  return unitary_channel(u, kStructuralTol);
}

KrausChannel hadamard_channel() {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix h(2, 2);
  h << s, s, s, -s;
  return unitary_channel(h, kStructuralTol);
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim_in()) {
    throw DimensionError("apply: state dimension does not match channel input");
  }
  ComplexMatrix out = ComplexMatrix::Zero(ch.dim_out(), ch.dim_out());
  for (const ComplexMatrix& k : ch.kraus()) {
    out += k * rho.matrix() * k.adjoint();
  }
  // The channel's own validation tolerance bounds how far the output can
  // drift from a unit-trace PSD matrix.
  return DensityMatrix(out, std::max(ch.validation_tol() * 10.0, 1e-9));
}

std::vector<SelectiveBranch> apply_selective(const KrausChannel& ch,
                                             const DensityMatrix& rho,
                                             double drop_tol) {
  if (rho.dim() != ch.dim_in()) {
    throw DimensionError(
        "apply_selective: state dimension does not match channel input");
  }
  std::vector<SelectiveBranch> branches;
  for (const ComplexMatrix& k : ch.kraus()) {
    ComplexMatrix out = k * rho.matrix() * k.adjoint();
    const double p = out.trace().real();
    if (p <= drop_tol) continue;
    branches.push_back(SelectiveBranch{
        p, DensityMatrix(out / p, std::max(ch.validation_tol() * 10.0, 1e-9))});
  }
  return branches;
}

ChoiMatrix to_choi(const KrausChannel& ch) {
  const Index din = ch.dim_in();
  const Index dout = ch.dim_out();
  ComplexMatrix j = ComplexMatrix::Zero(din * dout, din * dout);
  for (const ComplexMatrix& k : ch.kraus()) {
    // J += vec(K) vec(K)^dag with vec index (i_in * dout + i_out), which
    // places N(|i><j|) at block (i, j).
    ComplexVector v(din * dout);
    for (Index i = 0; i < din; ++i)
      for (Index a = 0; a < dout; ++a) v(i * dout + a) = k(a, i);
    j += v * v.adjoint();
  }
  return ChoiMatrix(std::move(j), din, dout,
                    std::max(ch.validation_tol() * din, 1e-9));
}

KrausChannel kraus_from_choi(const ChoiMatrix& j, double cutoff,
                             double validation_tol) {
  const Index din = j.dim_in();
  const Index dout = j.dim_out();
  HermitianEigen eig = hermitian_eig(j.matrix());
  std::vector<ComplexMatrix> kraus;
  for (Index n = 0; n < eig.eigenvalues.size(); ++n) {
    const double lambda = eig.eigenvalues(n);
    if (lambda <= cutoff) continue;
    const double scale = std::sqrt(lambda);
    ComplexMatrix k(dout, din);
    for (Index i = 0; i < din; ++i)
      for (Index a = 0; a < dout; ++a)
        k(a, i) = scale * eig.eigenvectors(i * dout + a, n);
    kraus.push_back(std::move(k));
  }
  if (kraus.empty()) {
    throw ValidationError(
        "kraus_from_choi: all eigenvalues below cutoff, map is zero");
  }
  return KrausChannel(std::move(kraus), validation_tol);
}

ComplexMatrix apply_choi(const ComplexMatrix& j, Index dim_in, Index dim_out,
                         const ComplexMatrix& rho) {
  if (rho.rows() != dim_in || rho.cols() != dim_in ||
      j.rows() != dim_in * dim_out || j.cols() != dim_in * dim_out) {
    throw DimensionError("apply_choi: dimension mismatch");
  }
  // Block (i, j) of J is N(|i><j|), so N(rho) = sum_ij rho_ij N(|i><j|).
  ComplexMatrix out = ComplexMatrix::Zero(dim_out, dim_out);
  for (Index i = 0; i < dim_in; ++i)
    for (Index k = 0; k < dim_in; ++k)
      out += rho(i, k) * j.block(i * dim_out, k * dim_out, dim_out, dim_out);
  return out;
}

KrausChannel compose(const KrausChannel& after, const KrausChannel& before) {
  if (before.dim_out() != after.dim_in()) {
    throw DimensionError("compose: inner dimensions do not match");
  }
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(after.kraus().size() * before.kraus().size());
  for (const ComplexMatrix& a : after.kraus())
    for (const ComplexMatrix& b : before.kraus()) kraus.push_back(a * b);
  return KrausChannel(std::move(kraus),
                      std::max(after.validation_tol(), before.validation_tol()));
}

KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const ComplexMatrix& ka : a.kraus())
    for (const ComplexMatrix& kb : b.kraus()) kraus.push_back(kron(ka, kb));
  return KrausChannel(std::move(kraus),
                      std::max(a.validation_tol(), b.validation_tol()));
}

KrausChannel trace_out_channel(Index d) {
  // rho -> Tr(rho) I/d, realized by the d^2 Kraus operators |i><j|/sqrt(d).
  std::vector<ComplexMatrix> kraus;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      ComplexMatrix k = ComplexMatrix::Zero(d, d);
      k(i, j) = scale;
      kraus.push_back(std::move(k));
    }
  return KrausChannel(std::move(kraus), kStructuralTol);
}

std::string to_string(MioVariant variant) {
  return variant == MioVariant::Paper ? "paper" : "strict";
}

MioVariant mio_variant_from_string(const std::string& name) {
  if (name == "paper") return MioVariant::Paper;
  if (name == "strict") return MioVariant::Strict;
  throw ValidationError("unknown MIO variant '" + name +
                        "' (expected 'paper' or 'strict')");
}

bool is_mio(const KrausChannel& ch, MioVariant variant, double tol) {
  return is_mio(to_choi(ch), variant, tol);
}

bool is_mio(const ChoiMatrix& j, MioVariant variant, double tol) {
  if (variant == MioVariant::Paper) {
    ComplexMatrix marginal = j.output_marginal();
    return max_abs_diff(marginal, dephase(marginal)) <= tol;
  }
  for (Index i = 0; i < j.dim_in(); ++i) {
    ComplexMatrix block = j.basis_block(i);
    if (max_abs_diff(block, dephase(block)) > tol) return false;
  }
  return true;
}

}  // namespace dyncoh
