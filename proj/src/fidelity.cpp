#include "spindir/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "spindir/angular.hpp"
#include "spindir/errors.hpp"

namespace spindir {

namespace {

// Evaluates A(x) with the per-multiplet rotation series precomputed once.
class SignalAmplitude {
 public:
  explicit SignalAmplitude(const EffectiveState& state) {
    const DecoderSeed seed = decoder_seed(state.J(), state.m());
    for (std::size_t i = 0; i < state.size(); ++i) {
      rotations_.emplace_back(state.j_at(i), state.m(), state.m());
      factors_.push_back(seed.coeffs[i] * state.coeffs()[i]);
    }
  }

  double operator()(double x) const {
    const double xc = std::clamp(x, -1.0, 1.0);
    const double cos_half = std::sqrt(0.5 * (1.0 + xc));
    const double sin_half = std::sqrt(0.5 * (1.0 - xc));
    double amp = 0.0;
    for (std::size_t i = 0; i < rotations_.size(); ++i) {
      amp += factors_[i] * rotations_[i].from_half_angle(cos_half, sin_half);
    }
    return amp;
  }

 private:
  std::vector<WignerSmallD> rotations_;
  std::vector<double> factors_;
};

double info_gain_fixed_nodes(const SignalAmplitude& amplitude, int nodes) {
  const Quadrature q = gauss_legendre(nodes);
  return q.integrate([&](double x) {
    const double p = amplitude(x) * amplitude(x);
    if (p <= 1e-300) return 0.0;
    return 0.5 * p * std::log2(p);
  });
}

}  // namespace

double signal_amplitude(const EffectiveState& state, double x) {
  return SignalAmplitude(state)(x);
}

double maf_closed_form(const EffectiveState& state) {
  const std::vector<double>& a = state.coeffs();
  double fidelity = 0.5;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const HalfInt j = state.j_at(i);
    fidelity += 0.5 * fidelity_mu(j, state.m()) * a[i] * a[i];
    if (i > 0) fidelity += a[i - 1] * a[i] * fidelity_nu(j, state.m());
  }
  return fidelity;
}

double maf_quadrature(const EffectiveState& state, int nodes) {
  if (2 * nodes < state.J().twice() + 4) {
    throw std::invalid_argument("maf_quadrature: " + std::to_string(nodes) +
                                " nodes cannot integrate a degree-" +
                                std::to_string(state.J().twice() + 1) +
                                " integrand exactly; need nodes >= J + 2");
  }
  const SignalAmplitude amplitude(state);
  const Quadrature q = gauss_legendre(nodes);
  return q.integrate([&](double x) {
    const double a = amplitude(x);
    return 0.5 * (0.5 * (1.0 + x)) * a * a;
  });
}

double antiparallel_even_maf(int n) {
  if (n < 1) throw std::invalid_argument("antiparallel_even_maf: need n >= 1");
  double fidelity = 0.5;
  const double ln_n = log_factorial(n);
  for (int j = 1; j <= n; ++j) {
    const double weight = std::exp(2.0 * ln_n - log_factorial(n - j) - log_factorial(n + j));
    fidelity += weight * j / std::sqrt(static_cast<double>(n + 1 + j) * (n + 1 - j));
  }
  return fidelity;
}

double info_gain(const EffectiveState& state, int nodes) {
  if (nodes < 200) {
    throw std::invalid_argument("info_gain: integrand is not polynomial; need nodes >= 200");
  }
  const SignalAmplitude amplitude(state);
  const double coarse = info_gain_fixed_nodes(amplitude, nodes);
  const double fine = info_gain_fixed_nodes(amplitude, 2 * nodes);
  if (std::abs(fine - coarse) > 1e-7) {
    char delta[32];
    std::snprintf(delta, sizeof delta, "%.3e", std::abs(fine - coarse));
    throw ConvergenceError("info_gain: quadrature not converged between " +
                           std::to_string(nodes) + " and " + std::to_string(2 * nodes) +
                           " nodes (delta = " + delta + ")");
  }
  return fine;
}

double asymptotic_maf(int spin_count, AsymptoticOrder order) {
  if (spin_count < 2 || spin_count % 2 != 0) {
    throw std::invalid_argument("asymptotic_maf: derived for even N >= 2");
  }
  const double N = spin_count;
  switch (order) {
    case AsymptoticOrder::leading:
      return 1.0 - 1.0 / (2.0 * N);
    case AsymptoticOrder::next:
      return (2.0 * N + 1.0) / (2.0 * N + 2.0);
  }
  throw std::invalid_argument("asymptotic_maf: unknown order");
}

FidelityReport table_row(int spin_count, int info_nodes) {
  const EffectiveState parallel = parallel_state(spin_count);
  const EffectiveState antiparallel = antiparallel_state(spin_count);
  const OptimalEncoding optimal = optimal_state(spin_count);

  FidelityReport row;
  row.N = spin_count;
  row.f_parallel = maf_closed_form(parallel);
  row.f_antiparallel = maf_closed_form(antiparallel);
  row.f_optimal = optimal.maf;
  row.i_parallel = info_gain(parallel, info_nodes);
  row.i_antiparallel = info_gain(antiparallel, info_nodes);
  row.i_optimal = info_gain(optimal.state, info_nodes);

  const double slack = 1e-12;
  const bool ordered = 0.5 <= row.f_parallel + slack &&
                       row.f_parallel <= row.f_antiparallel + slack &&
                       row.f_antiparallel <= row.f_optimal + slack && row.f_optimal < 1.0;
  const bool gains_ok =
      row.i_parallel >= -slack && row.i_antiparallel >= -slack && row.i_optimal >= -slack;
  if (!ordered || !gains_ok) {
    throw std::logic_error("table_row: report violates the fidelity ordering invariant");
  }
  return row;
}

}  // namespace spindir
