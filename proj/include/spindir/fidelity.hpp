#pragma once

#include "spindir/encoding.hpp"

namespace spindir {

// Fidelities and information gains (bits) for the three reference encodings
// of N spins.
struct FidelityReport {
  int N = 0;
  double f_parallel = 0.0;
  double f_antiparallel = 0.0;
  double f_optimal = 0.0;
  double i_parallel = 0.0;
  double i_antiparallel = 0.0;
  double i_optimal = 0.0;
};

// Signal amplitude A(x) = sum_j sqrt(2j+1) A_j d^j_{mm}(arccos x); its square
// is the outcome density of the continuous measurement.
double signal_amplitude(const EffectiveState& state, double x);

// Maximal average fidelity from the closed tridiagonal form:
// F = 1/2 + (1/2) sum_j mu_j A_j^2 + sum_j A_{j-1} A_j nu_j.
double maf_closed_form(const EffectiveState& state);

// Independent oracle for the same quantity: the fidelity integral reduced to
// F = int_{-1}^{1} (dx/2) ((1+x)/2) A(x)^2, evaluated by Gauss-Legendre.
// The integrand is a polynomial of degree 2J+1, so node counts >= J+2 are
// exact; fewer nodes are refused rather than silently inexact.
double maf_quadrature(const EffectiveState& state, int nodes);

// Even-N antiparallel closed form, N = 2n:
// F = 1/2 + sum_{j=1}^{n} (n!^2 / ((n-j)!(n+j)!)) j / sqrt((n+1)^2 - j^2).
double antiparallel_even_maf(int n);

// Average information gain I = int_{-1}^{1} (dx/2) p log2 p with p = A^2,
// by Gauss-Legendre with a node-doubling convergence check (1e-7): the value
// at 2*nodes is returned, and disagreement beyond the check throws.
double info_gain(const EffectiveState& state, int nodes = 800);

enum class AsymptoticOrder {
  leading,  // 1 - 1/(2N)
  next,     // (2N+1)/(2N+2), accurate to O(1/N^3)
};

// Large-N antiparallel fidelity approximations (even N only; the closed
// forms are derived at m = 0).
double asymptotic_maf(int spin_count, AsymptoticOrder order);

// All six reference values for one N.
FidelityReport table_row(int spin_count, int info_nodes = 800);

}  // namespace spindir
