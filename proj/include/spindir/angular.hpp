#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "spindir/halfint.hpp"

namespace spindir {

// ln(n!) for n >= 0. Tabulated cumulative sum of logs; factorial ratios stay
// finite in log space up to n in the thousands.
double log_factorial(int n);

// Legendre polynomial P_L(x) by the three-term recurrence.
double legendre_p(int L, double x);

// Condon-Shortley spherical harmonic Y_L^M(theta, phi), computed through the
// normalized associated-Legendre recurrence (stable at large L, where the
// factorial-series rotation elements start losing digits to cancellation).
std::complex<double> spherical_harmonic(int L, int M, double theta, double phi);

// Rotation element d^j_{mk}(beta) as a precomputed factorial series. The
// log-space factorial work happens once at construction; evaluation is a
// short polynomial in cos(beta/2) and sin(beta/2).
class WignerSmallD {
 public:
  WignerSmallD(HalfInt j, HalfInt m, HalfInt k);

  double operator()(double beta) const;
  // cos_half = cos(beta/2), sin_half = sin(beta/2), both in [0, 1] for
  // beta in [0, pi].
  double from_half_angle(double cos_half, double sin_half) const;

 private:
  struct Term {
    double coeff;
    int cos_pow;
    int sin_pow;
  };
  std::vector<Term> terms_;
};

double wigner_small_d(HalfInt j, HalfInt m, HalfInt k, double beta);

// D^j_{mk}(phi, theta, gamma) = e^{-i m phi} d^j_{mk}(theta) e^{-i k gamma}
// with z-y-z Euler angles.
std::complex<double> wigner_big_d(HalfInt j, HalfInt m, HalfInt k, double phi,
                                  double theta, double gamma = 0.0);

// Wigner 3-j symbol by the Racah single-sum formula in log space.
// Selection-rule failures return 0; inconsistent quantum numbers throw.
double three_j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2,
               HalfInt m3);

// Gauss-Legendre rule on (-1, 1): nodes ascending, positive weights summing
// to 2, exact for polynomials of degree <= 2 * node count - 1.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      total += weights[i] * f(nodes[i]);
    }
    return total;
  }
};

Quadrature gauss_legendre(int node_count);

}  // namespace spindir
