#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "spindir/angular.hpp"
#include "spindir/encoding.hpp"
#include "spindir/halfint.hpp"

namespace spindir {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
Vec3 normalized(const Vec3& v);
Vec3 direction_from_angles(double theta, double phi);
// Returns (theta in [0, pi], phi in [0, 2pi)) of a unit vector.
void angles_from_direction(const Vec3& n, double& theta, double& phi);

struct DirectionEntry {
  double theta = 0.0;   // polar angle in [0, pi]
  double phi = 0.0;     // azimuth in [0, 2pi)
  double weight = 0.0;  // strictly positive
};

// Weighted set of distinct unit directions. Candidate finite measurement or
// finite source ensemble.
class WeightedDirectionSet {
 public:
  explicit WeightedDirectionSet(std::vector<DirectionEntry> entries);

  const std::vector<DirectionEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double total_weight() const { return total_weight_; }
  Vec3 direction(std::size_t r) const;

 private:
  std::vector<DirectionEntry> entries_;
  double total_weight_ = 0.0;
};

struct MultipoleEntry {
  int L = 0;
  int M = 0;
  std::complex<double> z;
};

// Spherical moments z_L^M of a weighted direction set and the pass/fail
// verdict: all listed moments must vanish for the set to be isotropic up to
// the stated order.
struct MultipoleReport {
  HalfInt J;  // isotropy order checked: L = 1..2J
  double tolerance = 0.0;
  std::vector<MultipoleEntry> moments;  // L = 1..2J, M = 0..L
  double max_abs = 0.0;
  int worst_L = 0;
  int worst_M = 0;
  bool pass = false;
};

// Single moment z_L^M = sqrt(4pi/(2L+1)) sum_r c_r Y_L^{-M}(theta_r, phi_r),
// valid for any M in [-L, L].
std::complex<double> multipole_moment(const WeightedDirectionSet& set, int L, int M);

// All moments with L = 1..l_max, M = 0..L (negative M adds nothing for real
// weights: z_L^{-M} = (-1)^M conj(z_L^M)).
MultipoleReport multipole_moments(const WeightedDirectionSet& set, int l_max,
                                  double tolerance = 1e-10);

// Isotropy up to spin J: every multipole of order L = 1..2J vanishes.
MultipoleReport verify_isotropy(const WeightedDirectionSet& set, HalfInt J,
                                double tolerance = 1e-10);

struct OrthogonalityReport {
  HalfInt J;
  double tolerance = 0.0;
  // Worst |sum_r c_r D^j_{mk} conj(D^j'_{m'k}) - C delta delta / (2j+1)| / C
  // over all j, j' <= J (both integer and half-integer ladders), valid m, m'
  // and common k.
  double worst_deviation = 0.0;
  int worst_twice[5] = {0, 0, 0, 0, 0};  // (2j, 2j', 2m, 2m', 2k)
  bool pass = false;
};

// Direct check of the rotation-matrix orthogonality sums that make the set a
// resolution of the identity on every multiplet with j <= J. Deviations are
// reported relative to the total weight C.
OrthogonalityReport verify_wigner_orthogonality(const WeightedDirectionSet& set, HalfInt J,
                                                double tolerance = 1e-9);

// Weighted grid isotropic up to spin J (half-integer J is rounded up to the
// nearest integer): azimuths phi_s = 2 pi s / (2J+1), rings theta_k =
// k pi / (2J+1), unit pole weights, interior ring weights from the Legendre
// moment conditions. Coincident pole points are merged into single entries
// of weight 2J+1. Fails loudly on a singular system or nonpositive weight.
WeightedDirectionSet construct_isotropic_set(HalfInt J);

// Unit-weight vertex sets in a fixed orientation: "tetrahedron" has one
// vertex at the north pole, "octahedron" sits on the coordinate axes.
WeightedDirectionSet platonic_set(const std::string& name);

// The set rigidly rotated by z-y-z Euler angles (alpha, beta, gamma).
WeightedDirectionSet rotated(const WeightedDirectionSet& set, double alpha, double beta,
                             double gamma);

// Measurement evaluation context for a fixed encoding and direction set.
// Precomputes every rotation element of the set so that per-source work is a
// handful of small complex dot products.
class FiniteMeasurement {
 public:
  struct Workspace {
    std::vector<double> probabilities;
    std::vector<std::complex<double>> column;
  };

  FiniteMeasurement(EffectiveState state, WeightedDirectionSet set,
                    double closure_tolerance = 1e-10);

  const EffectiveState& state() const { return state_; }
  const WeightedDirectionSet& set() const { return set_; }
  std::size_t outcome_count() const { return set_.size(); }
  Vec3 outcome_direction(std::size_t r) const { return set_.direction(r); }

  // Outcome probabilities for a source direction. Throws ClosureError when
  // they fail to sum to one within the closure tolerance: such a set is not
  // a measurement for this state and is rejected, never renormalized.
  std::vector<double> probabilities(const Vec3& source) const;
  void probabilities(const Vec3& source, Workspace& ws) const;

  // Fixed-source fidelity sum_r p_r (1 + source . n_r) / 2.
  double fidelity(const Vec3& source) const;

 private:
  EffectiveState state_;
  WeightedDirectionSet set_;
  double closure_tolerance_;
  std::vector<int> twice_mprime_;                 // flat (j, m') layout
  std::vector<int> block_offset_;                 // start of each j block
  std::vector<WignerSmallD> rotations_;           // d^j_{m' m} per flat index
  std::vector<std::complex<double>> point_rows_;  // conj(D^j_{m'm}(n_r)) sqrt(2j+1) A_j
  std::vector<Vec3> points_;

  void rotation_column(double theta, double phi, std::vector<std::complex<double>>& out) const;
};

// p_r = (c_r/C) |sum_j sqrt(2j+1) A_j sum_m' conj(D^j_{m'm}(n_r)) D^j_{m'm}(n_src)|^2.
std::vector<double> outcome_distribution(const EffectiveState& state,
                                         const WeightedDirectionSet& set, const Vec3& source);

double fixed_source_fidelity(const EffectiveState& state, const WeightedDirectionSet& set,
                             const Vec3& source);

// Fixed-source fidelity averaged over the uniform sphere with an exact
// product quadrature (Gauss-Legendre in cos theta, uniform azimuth grid).
double averaged_finite_fidelity(const EffectiveState& state, const WeightedDirectionSet& set);

// Weighted source-moment operator M = sum_r (c_r/C) (1 + n_r.guess)/2 rho_r
// with rho_r the projector onto the rotated encoding state, compared against
// its continuous counterpart (exact spherical quadrature of the same
// integrand). The Frobenius deviation vanishes exactly when the set is
// isotropic to order 2J >= 2j+1.
struct SourceMomentComparison {
  std::size_t dim = 0;
  std::vector<std::complex<double>> finite;      // row-major dim x dim
  std::vector<std::complex<double>> continuous;  // row-major dim x dim
  double deviation = 0.0;                        // Frobenius norm of the difference
};

SourceMomentComparison source_moment_operator(const EffectiveState& state,
                                              const WeightedDirectionSet& set,
                                              const Vec3& guess);

// CSV persistence: lines "theta,phi,weight" in radians, 17 significant
// digits, optional header. Round-trips bit-exactly.
void save_direction_set(const WeightedDirectionSet& set, std::ostream& out);
void save_direction_set(const WeightedDirectionSet& set, const std::string& path);
WeightedDirectionSet load_direction_set(std::istream& in);
WeightedDirectionSet load_direction_set(const std::string& path);

}  // namespace spindir
