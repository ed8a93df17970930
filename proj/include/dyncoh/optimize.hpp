#ifndef DYNCOH_OPTIMIZE_HPP
#define DYNCOH_OPTIMIZE_HPP

#include <cstdint>
#include <functional>

#include "dyncoh/channel.hpp"

namespace dyncoh {

// Knobs for the multistart derivative-free maximization used by every
// max-over-states quantity. Identical config + inputs reproduce identical
// results (the search is sequential and fully seeded).
struct OptimizerConfig {
  int starts = 32;        // random restarts on top of the deterministic seeds
  int max_iters = 2000;   // simplex iterations per start
  double f_tol = 1e-9;    // convergence window on simplex function spread
  std::uint64_t seed = 1;
  int grid_points = 41;   // per-axis density of the qubit Bloch-ball
                          // pre-seeding grid; values < 2 disable it
};

// How density matrices are coordinatized for the local search.
//   Bloch:  qubits; ball coordinates (x, y, z), radius clamped to 1.
//   Factor: any dimension; rho = G G^dag / Tr(G G^dag) from 2 d^2 real
//           parameters (covers all full-rank states and their closure).
enum class ParamMode { Bloch, Factor };

class StateParametrization {
 public:
  StateParametrization(Index dim, ParamMode mode);

  Index dim() const { return dim_; }
  ParamMode mode() const { return mode_; }
  int param_count() const;

  // Every parameter vector maps to a valid state (out-of-ball Bloch points
  // are radially clamped; a vanishing factor falls back to maximally mixed).
  DensityMatrix state(const Eigen::VectorXd& params) const;

 private:
  Index dim_;
  ParamMode mode_;
};

using StateObjective = std::function<double(const DensityMatrix&)>;

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value;
  bool converged;
  int iterations;
};

// Plain downhill-simplex minimization; building block for the multistart
// search, exposed for reuse and testing.
NelderMeadResult nelder_mead_minimize(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, double initial_step, int max_iters,
    double f_tol);

struct StateOptimum {
  double value;                   // best objective found (unclamped)
  DensityMatrix argmax;
  Eigen::VectorXd argmax_params;  // coordinates of argmax in the search space
  int converged_starts;
  int total_starts;
};

// Best value of `objective` over density matrices of dimension `dim`, by
// multistart simplex search seeded from basis states, uniform-superposition
// states, a coarse Bloch-ball grid (qubits only), and cfg.starts random
// draws. Throws ConvergenceError if no start converges.
StateOptimum maximize_over_states(const StateObjective& objective, Index dim,
                                  const OptimizerConfig& cfg);

struct BlochGridOptimum {
  double value;
  Eigen::Vector3d point;
};

// Exhaustive evaluation on a points_per_axis^3 grid over the Bloch ball;
// the coarse oracle behind the qubit pre-seeding.
BlochGridOptimum bloch_grid_maximize(const StateObjective& objective,
                                     int points_per_axis);

}  // namespace dyncoh

#endif  // DYNCOH_OPTIMIZE_HPP
