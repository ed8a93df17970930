#ifndef DYNCOH_CHANNEL_DISTANCE_HPP
#define DYNCOH_CHANNEL_DISTANCE_HPP

#include "dyncoh/optimize.hpp"
#include "dyncoh/sdp.hpp"

namespace dyncoh {

// Result of a distance-to-free-set solve. value and dual_value bracket the
// optimum (gap = |value - dual_value|); optimal_free_channel is the
// minimizing member of the free set, as a Choi matrix.
struct DistanceReport {
  double value;
  double dual_value;
  double gap;
  ChoiMatrix optimal_free_channel;
  MioVariant mio_variant;
};

// Diamond norm of the Hermiticity-preserving map with Choi block
// `delta_choi` (typically a difference of channels, so the input is not a
// valid ChoiMatrix object). Solved as
//   min a   s.t.  a I - 2 Tr_out(Z) >= 0,  Z >= delta_choi,  Z >= 0,
// which is exact for differences of trace-preserving maps.
double diamond_norm(const ComplexMatrix& delta_choi, Index dim_in,
                    Index dim_out);

struct DiamondDetail {
  double value;
  double dual_value;
  double gap;
  // Dual multiplier on the input space: the marginal of the worst-case
  // input state (unit trace, PSD up to solver tolerance).
  ComplexMatrix optimal_input;
};

DiamondDetail diamond_norm_detail(const ComplexMatrix& delta_choi,
                                  Index dim_in, Index dim_out);

// Diamond-norm distance from the channel to the chosen free set, as one
// joint SDP over (Z, M = J(F), a). Throws ConvergenceError if the solver
// does not reach status optimal.
DistanceReport t_diamond_mio(const KrausChannel& ch,
                             MioVariant variant = MioVariant::Strict);

// Dephasing-assisted trace-norm distance: minimize the largest
// ||(N - F)(|i><i|)||_1 over basis indices i and free F, with each trace
// norm expressed through a P - Q split.
DistanceReport t_a_non(const KrausChannel& ch,
                       MioVariant variant = MioVariant::Strict);

// Heuristic lower bound on the induced trace norm ||A - B||_1 =
// max{||(A-B)(X)||_1 : ||X||_1 <= 1}: multistart search over rank-one
// X = |psi><phi| (the extreme points of the trace-norm ball). No global
// certificate is claimed.
double induced_trace_norm(const KrausChannel& a, const KrausChannel& b,
                          const OptimizerConfig& cfg);

}  // namespace dyncoh

#endif  // DYNCOH_CHANNEL_DISTANCE_HPP
