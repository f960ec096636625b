#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spindir/encoding.hpp"
#include "spindir/povm.hpp"

namespace spindir {

// Monte-Carlo fidelity estimate for the full protocol: draw a source
// direction, measure, guess the outcome direction, score the fidelity.
struct SimulationReport {
  std::uint64_t trials = 0;
  double mean_fidelity = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(trials)
  std::uint64_t seed = 0;
  std::string rng;  // generator identity, for cross-implementation replay
  std::string state_descriptor;
  std::string set_descriptor;
};

// Runs `trials` rounds: source uniform on the sphere (cos theta uniform in
// [-1,1], azimuth uniform), outcome sampled by inverse CDF from the exact
// distribution, score (1 + n . n_r)/2. Bit-identical for a fixed seed.
// Trials are consumed in fixed-size blocks with per-block substreams derived
// from the seed, so a partitioned run merges to the same estimate.
SimulationReport run_protocol(const EffectiveState& state, const WeightedDirectionSet& set,
                              std::uint64_t trials, std::uint64_t seed);

// Outcome frequencies at a fixed source, with a chi-square statistic against
// the exact distribution.
struct FrequencyReport {
  std::vector<std::uint64_t> counts;
  std::vector<double> frequencies;
  std::vector<double> expected;  // exact outcome probabilities
  double chi_square = 0.0;
  int dof = 0;  // outcomes with nonzero probability, minus one
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

FrequencyReport empirical_outcome_frequencies(const EffectiveState& state,
                                              const WeightedDirectionSet& set,
                                              const Vec3& source, std::uint64_t trials,
                                              std::uint64_t seed);

}  // namespace spindir
