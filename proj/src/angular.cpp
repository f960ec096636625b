#include "spindir/angular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spindir {

namespace {

constexpr double kPi = std::numbers::pi;

double ipow(double base, int exp) {
  double out = 1.0;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  static const std::vector<double> table = [] {
    std::vector<double> t(4097);
    t[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
      t[i] = t[i - 1] + std::log(static_cast<double>(i));
    }
    return t;
  }();
  if (n < static_cast<int>(table.size())) return table[static_cast<std::size_t>(n)];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double legendre_p(int L, double x) {
  if (L < 0) throw std::invalid_argument("legendre_p: negative degree");
  if (L == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int l = 1; l < L; ++l) {
    const double next = ((2 * l + 1) * x * cur - l * prev) / (l + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::complex<double> spherical_harmonic(int L, int M, double theta, double phi) {
  if (L < 0 || std::abs(M) > L) {
    throw std::invalid_argument("spherical_harmonic: requires 0 <= |M| <= L");
  }
  const int ma = std::abs(M);
  const double x = std::cos(theta);
  const double sx = std::sin(theta);

  // Normalized P_l^m ladder, seeded at l = ma with the Condon-Shortley sign.
  const double ln_seed = 0.5 * (std::log(2.0 * ma + 1.0) - std::log(4.0 * kPi) +
                                log_factorial(2 * ma)) -
                         ma * std::log(2.0) - log_factorial(ma);
  double cur = std::exp(ln_seed) * ipow(sx, ma);
  if (ma % 2 != 0) cur = -cur;
  double prev = 0.0;
  for (int l = ma; l < L; ++l) {
    const double a =
        std::sqrt(((2.0 * l + 3) * (2.0 * l + 1)) / ((l + 1.0 - ma) * (l + 1.0 + ma)));
    const double b =
        l > ma ? std::sqrt(((l - ma) * (l + 0.0 + ma)) / ((2.0 * l + 1) * (2.0 * l - 1)))
               : 0.0;
    const double next = a * (x * cur - b * prev);
    prev = cur;
    cur = next;
  }

  std::complex<double> value = cur * std::polar(1.0, ma * phi);
  if (M < 0) {
    value = std::conj(value);
    if (ma % 2 != 0) value = -value;
  }
  return value;
}

WignerSmallD::WignerSmallD(HalfInt j, HalfInt m, HalfInt k) {
  if (j.twice() < 0) throw std::invalid_argument("WignerSmallD: negative j");
  if (!same_ladder(j, m) || !same_ladder(j, k)) {
    throw std::invalid_argument("WignerSmallD: m and k must differ from j by integers");
  }
  if (abs(m) > j || abs(k) > j) {
    throw std::invalid_argument("WignerSmallD: |m|, |k| must not exceed j");
  }
  const int jpm = (j + m).to_int();
  const int jmm = (j - m).to_int();
  const int jpk = (j + k).to_int();
  const int jmk = (j - k).to_int();
  const int mmk = (m - k).to_int();
  const double ln_pre = 0.5 * (log_factorial(jpm) + log_factorial(jmm) +
                               log_factorial(jpk) + log_factorial(jmk));
  const int s_min = std::max(0, -mmk);
  const int s_max = std::min(jpk, jmm);
  terms_.reserve(static_cast<std::size_t>(s_max - s_min + 1));
  for (int s = s_min; s <= s_max; ++s) {
    const double ln_den = log_factorial(jpk - s) + log_factorial(s) +
                          log_factorial(mmk + s) + log_factorial(jmm - s);
    double coeff = std::exp(ln_pre - ln_den);
    if (!std::isfinite(coeff)) {
      throw std::domain_error("WignerSmallD: factorial series overflows at this j");
    }
    if ((mmk + s) % 2 != 0) coeff = -coeff;
    terms_.push_back({coeff, j.twice() - mmk - 2 * s, mmk + 2 * s});
  }
}

double WignerSmallD::from_half_angle(double cos_half, double sin_half) const {
  double total = 0.0;
  for (const Term& t : terms_) {
    total += t.coeff * ipow(cos_half, t.cos_pow) * ipow(sin_half, t.sin_pow);
  }
  return total;
}

double WignerSmallD::operator()(double beta) const {
  return from_half_angle(std::cos(0.5 * beta), std::sin(0.5 * beta));
}

double wigner_small_d(HalfInt j, HalfInt m, HalfInt k, double beta) {
  return WignerSmallD(j, m, k)(beta);
}

std::complex<double> wigner_big_d(HalfInt j, HalfInt m, HalfInt k, double phi,
                                  double theta, double gamma) {
  return std::polar(1.0, -m.value() * phi) * wigner_small_d(j, m, k, theta) *
         std::polar(1.0, -k.value() * gamma);
}

double three_j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2,
               HalfInt m3) {
  if (j1.twice() < 0 || j2.twice() < 0 || j3.twice() < 0) {
    throw std::invalid_argument("three_j: negative j");
  }
  if (!same_ladder(j1, m1) || !same_ladder(j2, m2) || !same_ladder(j3, m3)) {
    throw std::invalid_argument("three_j: m_i must differ from j_i by an integer");
  }
  if (abs(m1) > j1 || abs(m2) > j2 || abs(m3) > j3) {
    throw std::invalid_argument("three_j: |m_i| must not exceed j_i");
  }
  // Selection rules.
  if ((m1 + m2 + m3).twice() != 0) return 0.0;
  if (!(j1 + j2 + j3).is_integer()) return 0.0;
  if (j3 > j1 + j2 || j3 < abs(j1 - j2)) return 0.0;

  const double ln_delta =
      0.5 * (log_factorial((j1 + j2 - j3).to_int()) +
             log_factorial((j1 - j2 + j3).to_int()) +
             log_factorial((-j1 + j2 + j3).to_int()) -
             log_factorial((j1 + j2 + j3).to_int() + 1));
  const double ln_pre =
      0.5 * (log_factorial((j1 + m1).to_int()) + log_factorial((j1 - m1).to_int()) +
             log_factorial((j2 + m2).to_int()) + log_factorial((j2 - m2).to_int()) +
             log_factorial((j3 + m3).to_int()) + log_factorial((j3 - m3).to_int()));

  const int t_min = std::max({0, (j2 - j3 - m1).to_int(), (j1 - j3 + m2).to_int()});
  const int t_max = std::min({(j1 + j2 - j3).to_int(), (j1 - m1).to_int(),
                              (j2 + m2).to_int()});
  double total = 0.0;
  for (int t = t_min; t <= t_max; ++t) {
    const double ln_den = log_factorial(t) + log_factorial((j1 + j2 - j3).to_int() - t) +
                          log_factorial((j1 - m1).to_int() - t) +
                          log_factorial((j2 + m2).to_int() - t) +
                          log_factorial((j3 - j2 + m1).to_int() + t) +
                          log_factorial((j3 - j1 - m2).to_int() + t);
    const double term = std::exp(ln_delta + ln_pre - ln_den);
    total += (t % 2 != 0) ? -term : term;
  }
  const int phase = (j1 - j2 - m3).to_int();
  return (phase % 2 != 0) ? -total : total;
}

Quadrature gauss_legendre(int node_count) {
  if (node_count < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  const int n = node_count;
  Quadrature q;
  q.nodes.resize(static_cast<std::size_t>(n));
  q.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 1; i <= half; ++i) {
    double z = std::cos(kPi * (i - 0.25) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int l = 1; l <= n; ++l) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * l - 1.0) * z * p2 - (l - 1.0) * p3) / l;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    // Polish the derivative at the converged node for the weight.
    {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int l = 1; l <= n; ++l) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * l - 1.0) * z * p2 - (l - 1.0) * p3) / l;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    q.nodes[static_cast<std::size_t>(i - 1)] = -z;
    q.nodes[static_cast<std::size_t>(n - i)] = z;
    q.weights[static_cast<std::size_t>(i - 1)] = w;
    q.weights[static_cast<std::size_t>(n - i)] = w;
  }
  if (n % 2 == 1) q.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return q;
}

}  // namespace spindir
