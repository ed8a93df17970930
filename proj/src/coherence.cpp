#include "dyncoh/coherence.hpp"

#include <cmath>

namespace dyncoh {

namespace {

constexpr double kEntropyCutoff = 1e-12;

double entropy_bits(const ComplexMatrix& hermitian) {
  HermitianEigen eig = hermitian_eig(hermitian);
  double s = 0.0;
  for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double p = eig.eigenvalues(i);
    if (p > kEntropyCutoff) s -= p * std::log2(p);
  }
  return s;
}

}  // namespace

std::string to_string(StaticMeasure measure) {
  switch (measure) {
    case StaticMeasure::L1:
      return "l1";
    case StaticMeasure::RelativeEntropy:
      return "relative_entropy";
    case StaticMeasure::L2Total:
      return "l2_total";
  }
  throw Error("to_string: unhandled StaticMeasure");
}

StaticMeasure static_measure_from_string(const std::string& name) {
  if (name == "l1") return StaticMeasure::L1;
  if (name == "relative_entropy" || name == "rel-ent") {
    return StaticMeasure::RelativeEntropy;
  }
  if (name == "l2_total" || name == "l2-total") return StaticMeasure::L2Total;
  throw ValidationError("unknown static measure '" + name + "'");
}

double c_l1(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  double sum = 0.0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (i != j) sum += std::abs(m(i, j));
  return sum;
}

double c_rel_ent(const DensityMatrix& rho) {
  const double diff =
      entropy_bits(dephase(rho.matrix())) - entropy_bits(rho.matrix());
  // The difference is nonnegative in exact arithmetic; clamp rounding noise.
  return diff > 0.0 ? diff : 0.0;
}

double c_l2_total(const DensityMatrix& rho) {
  const double purity = (rho.matrix() * rho.matrix()).trace().real();
  const double floor = 1.0 / static_cast<double>(rho.dim());
  const double value = purity - floor;
  return value > 0.0 ? value : 0.0;
}

double static_coherence(StaticMeasure measure, const DensityMatrix& rho) {
  switch (measure) {
    case StaticMeasure::L1:
      return c_l1(rho);
    case StaticMeasure::RelativeEntropy:
      return c_rel_ent(rho);
    case StaticMeasure::L2Total:
      return c_l2_total(rho);
  }
  throw Error("static_coherence: unhandled StaticMeasure");
}

}  // namespace dyncoh
