#include "spindir/simulate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace spindir {

namespace {

constexpr std::uint64_t kBlockTrials = 1 << 16;
constexpr char kRngName[] = "mt19937_64(splitmix64(seed,block))/u53, blocks of 65536";

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t block_seed(std::uint64_t master, std::uint64_t block) {
  return splitmix64(master + (block + 1) * 0x9E3779B97F4A7C15ull);
}

// Uniform in [0, 1) from the top 53 bits; identical across standard library
// implementations, unlike uniform_real_distribution.
double uniform_53(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::size_t sample_outcome(const std::vector<double>& probabilities, double u) {
  double cumulative = 0.0;
  for (std::size_t r = 0; r < probabilities.size(); ++r) {
    cumulative += probabilities[r];
    if (u < cumulative) return r;
  }
  return probabilities.size() - 1;  // u landed in the closure roundoff gap
}

std::string describe_state(const EffectiveState& state) {
  return "N=" + std::to_string(state.spin_count()) + ",twice_m=" +
         std::to_string(state.m().twice()) + ",multiplets=" + std::to_string(state.size());
}

std::string describe_set(const WeightedDirectionSet& set) {
  return std::to_string(set.size()) + " directions, C=" + std::to_string(set.total_weight());
}

}  // namespace

SimulationReport run_protocol(const EffectiveState& state, const WeightedDirectionSet& set,
                              std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("run_protocol: need at least one trial");
  const FiniteMeasurement measurement(state, set);
  FiniteMeasurement::Workspace ws;

  double sum = 0.0;
  double sum_sq = 0.0;
  const std::uint64_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    std::mt19937_64 gen(block_seed(seed, b));
    const std::uint64_t begin = b * kBlockTrials;
    const std::uint64_t end = std::min(trials, begin + kBlockTrials);
    double block_sum = 0.0;
    double block_sum_sq = 0.0;
    for (std::uint64_t t = begin; t < end; ++t) {
      const double cos_theta = 2.0 * uniform_53(gen) - 1.0;
      const double phi = 2.0 * std::numbers::pi * uniform_53(gen);
      const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
      const Vec3 source{sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta};
      measurement.probabilities(source, ws);
      const std::size_t r = sample_outcome(ws.probabilities, uniform_53(gen));
      const double score = 0.5 * (1.0 + dot(source, measurement.outcome_direction(r)));
      block_sum += score;
      block_sum_sq += score * score;
    }
    sum += block_sum;
    sum_sq += block_sum_sq;
  }

  SimulationReport report;
  report.trials = trials;
  report.seed = seed;
  report.rng = kRngName;
  report.state_descriptor = describe_state(state);
  report.set_descriptor = describe_set(set);
  report.mean_fidelity = sum / static_cast<double>(trials);
  if (trials > 1) {
    const double n = static_cast<double>(trials);
    const double variance =
        std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    report.std_error = std::sqrt(variance / n);
  } else {
    report.std_error = std::numeric_limits<double>::infinity();
  }
  return report;
}

FrequencyReport empirical_outcome_frequencies(const EffectiveState& state,
                                              const WeightedDirectionSet& set,
                                              const Vec3& source, std::uint64_t trials,
                                              std::uint64_t seed) {
  if (trials == 0) {
    throw std::invalid_argument("empirical_outcome_frequencies: need at least one trial");
  }
  const FiniteMeasurement measurement(state, set);
  const std::vector<double> expected = measurement.probabilities(source);

  FrequencyReport report;
  report.trials = trials;
  report.seed = seed;
  report.expected = expected;
  report.counts.assign(expected.size(), 0);

  const std::uint64_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    std::mt19937_64 gen(block_seed(seed, b));
    const std::uint64_t begin = b * kBlockTrials;
    const std::uint64_t end = std::min(trials, begin + kBlockTrials);
    for (std::uint64_t t = begin; t < end; ++t) {
      ++report.counts[sample_outcome(expected, uniform_53(gen))];
    }
  }

  report.frequencies.resize(expected.size());
  report.chi_square = 0.0;
  report.dof = -1;
  for (std::size_t r = 0; r < expected.size(); ++r) {
    report.frequencies[r] =
        static_cast<double>(report.counts[r]) / static_cast<double>(trials);
    const double expected_count = expected[r] * static_cast<double>(trials);
    if (expected_count > 0.0) {
      const double delta = static_cast<double>(report.counts[r]) - expected_count;
      report.chi_square += delta * delta / expected_count;
      ++report.dof;
    } else if (report.counts[r] > 0) {
      report.chi_square = std::numeric_limits<double>::infinity();
    }
  }
  return report;
}

}  // namespace spindir
