#pragma once

#include <cstddef>
#include <vector>

#include "spindir/halfint.hpp"

namespace spindir {

// Encoding state in effective-coefficient form: nonnegative coefficients over
// the multiplet ladder j = m, m+1, ..., J at fixed axial quantum number m.
class EffectiveState {
 public:
  // Validates J - m integral, |m| <= J, coefficients nonnegative and
  // unit-norm to 1e-12 (asserted, never renormalized). Negative m is mapped
  // to |m|: the fidelity depends on m^2 only.
  EffectiveState(HalfInt total_J, HalfInt m, std::vector<double> coeffs);

  HalfInt J() const { return J_; }
  HalfInt m() const { return m_; }
  int spin_count() const { return J_.twice(); }  // N = 2J
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  HalfInt j_at(std::size_t i) const { return HalfInt::from_twice(m_.twice() + 2 * static_cast<int>(i)); }

 private:
  HalfInt J_;
  HalfInt m_;
  std::vector<double> coeffs_;
};

// Effective measurement-state coefficients sqrt(2j+1), fixed by (J, m).
struct DecoderSeed {
  HalfInt J;
  HalfInt m;
  std::vector<double> coeffs;
};

DecoderSeed decoder_seed(HalfInt total_J, HalfInt m);

// Tridiagonal fidelity-form coefficients. mu_j = m^2 / (j(j+1)), with the
// j = 0 entry defined as 0 (the singlet carries no directional information).
double fidelity_mu(HalfInt j, HalfInt m);
// nu_j = (j^2 - m^2) / (j sqrt(4j^2 - 1)). Note the j in the denominator:
// at m = 0 this reduces to j / sqrt(4j^2 - 1), which the even-N antiparallel
// closed form requires; the quadrature oracle in the test suite pins this
// normalization down independently.
double fidelity_nu(HalfInt j, HalfInt m);

// Symmetric tridiagonal matrix whose quadratic form on a unit coefficient
// vector equals the maximal average fidelity of that encoding.
struct FidelityQuadraticForm {
  HalfInt J;
  HalfInt m;
  std::vector<double> diag;     // 1/2 + mu_j / 2 for j = m..J
  std::vector<double> offdiag;  // nu_j / 2 coupling (j-1, j) for j = m+1..J

  std::size_t dimension() const { return diag.size(); }
  double quadratic_form(const std::vector<double>& a) const;
};

FidelityQuadraticForm quadratic_form(HalfInt total_J, HalfInt m);

// Product encoding of N spins with axial eigenvalue m (log-space factorial
// evaluation; the resulting coefficients come out unit-norm on their own).
EffectiveState product_state(int spin_count, HalfInt m);

// Best product encoding: minimal |m| (0 for even N, 1/2 for odd N).
EffectiveState antiparallel_state(int spin_count);

// All spins aligned: m = J = N/2, a single multiplet.
EffectiveState parallel_state(int spin_count);

struct OptimalEncoding {
  EffectiveState state;
  double maf;
};

// Maximizes the fidelity form over unit coefficient vectors at minimal |m|:
// the top eigenpair of the tridiagonal matrix. The eigenvector is the
// componentwise-positive one (positive couplings give a Perron-type top
// eigenvector); the eigenvalue is the maximal average fidelity.
OptimalEncoding optimal_state(int spin_count);

}  // namespace spindir
