#ifndef DYNCOH_DISCRIMINATION_HPP
#define DYNCOH_DISCRIMINATION_HPP

#include <cstdint>

#include "dyncoh/channel_distance.hpp"

namespace dyncoh {

// Two-channel discrimination game: the referee applies n1 with probability
// `prior`, otherwise n2; the player picks one input state (with an ancilla
// register of the input dimension iff use_reference) and one binary
// measurement.
struct GameSpec {
  KrausChannel n1;
  KrausChannel n2;
  double prior = 0.5;
  long trials = 100000;
  std::uint64_t seed = 1;
  bool use_reference = true;
};

// Best success probability of discriminating two known states:
//   1/2 + ||lambda rho1 - (1 - lambda) rho2||_1 / 2.
double helstrom(const DensityMatrix& rho1, const DensityMatrix& rho2,
                double lambda);

// Best success probability over all strategies at even prior:
//   1/2 + diamond_norm(J(n1) - J(n2)) / 4.
double optimal_success(const KrausChannel& n1, const KrausChannel& n2);

// The input state realizing (numerically) the optimal game value, extracted
// from the diamond-norm SDP dual; if the extraction does not reproduce the
// SDP value it falls back to multistart maximization over pure inputs.
struct DiscriminationStrategy {
  DensityMatrix input;  // on the channel input space, ancilla on the right
  bool uses_reference;
  double predicted_success;  // Helstrom value of the two outputs
};

DiscriminationStrategy optimal_strategy(const KrausChannel& n1,
                                        const KrausChannel& n2, double prior,
                                        bool use_reference,
                                        const OptimizerConfig& fallback_cfg = {});

struct SimulationResult {
  double empirical_rate;
  double std_error;  // binomial
};

// Monte-Carlo play of the game: optimal input, Helstrom measurement with
// exact Born statistics, `trials` independent rounds.
SimulationResult simulate(const GameSpec& spec);

}  // namespace dyncoh

#endif  // DYNCOH_DISCRIMINATION_HPP
