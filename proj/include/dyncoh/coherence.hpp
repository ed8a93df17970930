#ifndef DYNCOH_COHERENCE_HPP
#define DYNCOH_COHERENCE_HPP

#include <string>

#include "dyncoh/channel.hpp"

namespace dyncoh {

// The static measures plugged into the dynamical quantifiers.
enum class StaticMeasure { L1, RelativeEntropy, L2Total };

std::string to_string(StaticMeasure measure);
StaticMeasure static_measure_from_string(const std::string& name);

// Sum of absolute off-diagonal entries.
double c_l1(const DensityMatrix& rho);

// Relative entropy of coherence S(dephase(rho)) - S(rho), entropy in bits;
// eigenvalues below 1e-12 contribute zero.
double c_rel_ent(const DensityMatrix& rho);

// Total coherence in the l2 (Hilbert-Schmidt) sense: distance from the
// maximally mixed state, Tr(rho^2) - 1/d. Basis independent.
double c_l2_total(const DensityMatrix& rho);

double static_coherence(StaticMeasure measure, const DensityMatrix& rho);

}  // namespace dyncoh

#endif  // DYNCOH_COHERENCE_HPP
