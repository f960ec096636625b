#include "spindir/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spindir/angular.hpp"
#include "spindir/errors.hpp"

namespace spindir {

namespace {

// ---------------------------------------------------------------------------
// Top eigenpair of a symmetric tridiagonal matrix: Sturm bisection for the
// largest eigenvalue, inverse iteration for the vector, Rayleigh polish.
// Dimensions here are tiny (N/2 + 1), so robustness beats cleverness.
// ---------------------------------------------------------------------------

int eigenvalues_below(const std::vector<double>& diag, const std::vector<double>& off,
                      double x) {
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    q = diag[i] - x - (i > 0 ? off[i - 1] * off[i - 1] / q : 0.0);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

// LU factorization of (T - sigma I) with partial pivoting, tridiagonal
// storage plus one fill-in superdiagonal.
struct TridiagFactor {
  std::vector<double> sub, main_diag, sup, sup2;
  std::vector<int> swapped;

  TridiagFactor(const std::vector<double>& diag, const std::vector<double>& off,
                double sigma, double pivot_floor) {
    const int n = static_cast<int>(diag.size());
    main_diag.resize(diag.size());
    sub.assign(off.begin(), off.end());
    sup.assign(off.begin(), off.end());
    sup2.assign(n >= 2 ? static_cast<std::size_t>(n - 2) : 0, 0.0);
    swapped.assign(diag.size(), 0);
    for (int i = 0; i < n; ++i) main_diag[i] = diag[i] - sigma;
    for (int i = 0; i + 1 < n; ++i) {
      if (std::abs(main_diag[i]) >= std::abs(sub[i])) {
        if (main_diag[i] == 0.0) main_diag[i] = pivot_floor;
        const double factor = sub[i] / main_diag[i];
        sub[i] = factor;
        main_diag[i + 1] -= factor * sup[i];
      } else {
        const double factor = main_diag[i] / sub[i];
        main_diag[i] = sub[i];
        sub[i] = factor;
        const double tmp = sup[i];
        sup[i] = main_diag[i + 1];
        main_diag[i + 1] = tmp - factor * main_diag[i + 1];
        if (i + 2 < n) {
          sup2[i] = sup[i + 1];
          sup[i + 1] = -factor * sup[i + 1];
        }
        swapped[i] = 1;
      }
    }
    if (main_diag[n - 1] == 0.0) main_diag[n - 1] = pivot_floor;
  }

  void solve(std::vector<double>& b) const {
    const int n = static_cast<int>(main_diag.size());
    for (int i = 0; i + 1 < n; ++i) {
      if (swapped[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= sub[i] * b[i];
    }
    b[n - 1] /= main_diag[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - sup[n - 2] * b[n - 1]) / main_diag[n - 2];
    for (int i = n - 3; i >= 0; --i) {
      b[i] = (b[i] - sup[i] * b[i + 1] - sup2[i] * b[i + 2]) / main_diag[i];
    }
  }
};

struct EigenPair {
  double value;
  std::vector<double> vector;
};

EigenPair top_eigenpair(const std::vector<double>& diag, const std::vector<double>& off,
                        double tol) {
  const int n = static_cast<int>(diag.size());
  if (n == 1) return {diag[0], {1.0}};

  double lo = diag[0];
  double hi = diag[0];
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                          (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - radius);
    hi = std::max(hi, diag[i] + radius);
    scale = std::max({scale, std::abs(diag[i]), radius});
  }
  hi += 1e-10 * std::max(1.0, scale);
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (eigenvalues_below(diag, off, mid) >= n) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double lambda = 0.5 * (lo + hi);

  const double pivot_floor = 1e-16 * std::max(1.0, scale);
  const TridiagFactor factor(diag, off, lambda, pivot_floor);
  std::vector<double> v(diag.size(), 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> w(diag.size());
  double rayleigh = lambda;
  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 32; ++iter) {
    w = v;
    factor.solve(w);
    const double nrm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
      throw ConvergenceError("optimal_state: inverse iteration produced a degenerate vector");
    }
    for (double& c : w) c /= nrm;
    v = w;
    // Rayleigh quotient and residual of the candidate pair.
    rayleigh = 0.0;
    for (int i = 0; i < n; ++i) {
      double tv = diag[i] * v[i];
      if (i > 0) tv += off[i - 1] * v[i - 1];
      if (i + 1 < n) tv += off[i] * v[i + 1];
      rayleigh += v[i] * tv;
    }
    residual = 0.0;
    for (int i = 0; i < n; ++i) {
      double tv = diag[i] * v[i];
      if (i > 0) tv += off[i - 1] * v[i - 1];
      if (i + 1 < n) tv += off[i] * v[i + 1];
      residual = std::max(residual, std::abs(tv - rayleigh * v[i]));
    }
    if (residual <= tol * std::max(1.0, std::abs(rayleigh))) break;
  }
  if (residual > tol * std::max(1.0, std::abs(rayleigh))) {
    throw ConvergenceError("optimal_state: eigenpair residual " + std::to_string(residual) +
                           " above tolerance after bounded iterations");
  }
  if (std::accumulate(v.begin(), v.end(), 0.0) < 0.0) {
    for (double& c : v) c = -c;
  }
  return {rayleigh, v};
}

}  // namespace

EffectiveState::EffectiveState(HalfInt total_J, HalfInt m, std::vector<double> coeffs)
    : J_(total_J), m_(abs(m)), coeffs_(std::move(coeffs)) {
  if (J_.twice() < 0) throw std::invalid_argument("EffectiveState: negative J");
  if (!same_ladder(J_, m_)) {
    throw std::invalid_argument("EffectiveState: J - m must be an integer (got J=" +
                                to_string(J_) + ", m=" + to_string(m_) + ")");
  }
  if (m_ > J_) throw std::invalid_argument("EffectiveState: |m| exceeds J");
  const std::size_t expected = static_cast<std::size_t>((J_ - m_).to_int()) + 1;
  if (coeffs_.size() != expected) {
    throw std::invalid_argument("EffectiveState: expected " + std::to_string(expected) +
                                " coefficients, got " + std::to_string(coeffs_.size()));
  }
  double norm2 = 0.0;
  for (double c : coeffs_) {
    if (!(c >= 0.0)) {
      throw std::invalid_argument("EffectiveState: coefficients must be nonnegative");
    }
    norm2 += c * c;
  }
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("EffectiveState: coefficients not unit-norm (|sum-1| = " +
                                std::to_string(std::abs(norm2 - 1.0)) + ")");
  }
}

DecoderSeed decoder_seed(HalfInt total_J, HalfInt m) {
  const HalfInt ma = abs(m);
  if (!same_ladder(total_J, ma) || ma > total_J) {
    throw std::invalid_argument("decoder_seed: invalid (J, m)");
  }
  DecoderSeed seed{total_J, ma, {}};
  for (int tj = ma.twice(); tj <= total_J.twice(); tj += 2) {
    seed.coeffs.push_back(std::sqrt(tj + 1.0));
  }
  return seed;
}

double fidelity_mu(HalfInt j, HalfInt m) {
  if (j.twice() == 0) return 0.0;
  const double tj = j.twice();
  const double tm = m.twice();
  return (tm * tm) / (tj * (tj + 2.0));
}

double fidelity_nu(HalfInt j, HalfInt m) {
  const double tj = j.twice();
  const double tm = m.twice();
  return (tj * tj - tm * tm) / (2.0 * tj * std::sqrt(tj * tj - 1.0));
}

double FidelityQuadraticForm::quadratic_form(const std::vector<double>& a) const {
  if (a.size() != diag.size()) {
    throw std::invalid_argument("FidelityQuadraticForm: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += diag[i] * a[i] * a[i];
    if (i + 1 < a.size()) total += 2.0 * offdiag[i] * a[i] * a[i + 1];
  }
  return total;
}

FidelityQuadraticForm quadratic_form(HalfInt total_J, HalfInt m) {
  const HalfInt ma = abs(m);
  if (!same_ladder(total_J, ma) || ma > total_J) {
    throw std::invalid_argument("quadratic_form: invalid (J, m)");
  }
  FidelityQuadraticForm form{total_J, ma, {}, {}};
  for (int tj = ma.twice(); tj <= total_J.twice(); tj += 2) {
    const HalfInt j = HalfInt::from_twice(tj);
    form.diag.push_back(0.5 + 0.5 * fidelity_mu(j, ma));
    if (tj > ma.twice()) form.offdiag.push_back(0.5 * fidelity_nu(j, ma));
  }
  return form;
}

EffectiveState product_state(int spin_count, HalfInt m) {
  if (spin_count < 1) throw std::invalid_argument("product_state: need at least one spin");
  const HalfInt total_J = HalfInt::from_twice(spin_count);
  const HalfInt ma = abs(m);
  if (!same_ladder(total_J, ma)) {
    throw std::invalid_argument("product_state: N/2 - m must be an integer (N=" +
                                std::to_string(spin_count) + ", m=" + to_string(ma) + ")");
  }
  if (ma > total_J) throw std::invalid_argument("product_state: |m| exceeds N/2");

  const int jm = (total_J - ma).to_int();  // J - m
  const int jp = (total_J + ma).to_int();  // J + m
  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(jm) + 1);
  for (int tj = ma.twice(); tj <= spin_count; tj += 2) {
    const double ln_ratio = 0.5 * (log_factorial(jm) + log_factorial(jp) -
                                   log_factorial((total_J - HalfInt::from_twice(tj)).to_int()) -
                                   log_factorial((total_J + HalfInt::from_twice(tj)).to_int()));
    const double front = std::sqrt((1.0 + tj) / ((spin_count + tj) / 2 + 1.0));
    coeffs.push_back(front * std::exp(ln_ratio));
  }
  return EffectiveState(total_J, ma, std::move(coeffs));
}

EffectiveState antiparallel_state(int spin_count) {
  const HalfInt m = spin_count % 2 == 0 ? HalfInt(0) : HalfInt::half();
  return product_state(spin_count, m);
}

EffectiveState parallel_state(int spin_count) {
  if (spin_count < 1) throw std::invalid_argument("parallel_state: need at least one spin");
  const HalfInt total_J = HalfInt::from_twice(spin_count);
  return EffectiveState(total_J, total_J, {1.0});
}

OptimalEncoding optimal_state(int spin_count) {
  if (spin_count < 1) throw std::invalid_argument("optimal_state: need at least one spin");
  const HalfInt m = spin_count % 2 == 0 ? HalfInt(0) : HalfInt::half();
  const FidelityQuadraticForm form = quadratic_form(HalfInt::from_twice(spin_count), m);
  EigenPair pair = top_eigenpair(form.diag, form.offdiag, 1e-12);
  for (double c : pair.vector) {
    if (!(c > 0.0)) {
      throw ConvergenceError(
          "optimal_state: top eigenvector has a nonpositive component; the "
          "Perron vector was not resolved");
    }
  }
  EffectiveState state(HalfInt::from_twice(spin_count), m, std::move(pair.vector));
  return {std::move(state), pair.value};
}

}  // namespace spindir
