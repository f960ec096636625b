#include "spindir/povm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "spindir/angular.hpp"
#include "spindir/errors.hpp"

namespace spindir {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_azimuth(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

// ---------------------------------------------------------------------------
// Dense pivoted LU with iterative refinement. The Legendre moment systems are
// small (<= 16 x 16 for J <= 8) and mildly conditioned, but the isotropy
// tolerance is absolute, so the residual is polished to machine level.
// ---------------------------------------------------------------------------
class DenseLU {
 public:
  explicit DenseLU(std::vector<std::vector<double>> matrix)
      : lu_(std::move(matrix)), n_(lu_.size()), pivot_(n_) {
    for (std::size_t col = 0; col < n_; ++col) {
      std::size_t best = col;
      for (std::size_t row = col + 1; row < n_; ++row) {
        if (std::abs(lu_[row][col]) > std::abs(lu_[best][col])) best = row;
      }
      pivot_[col] = best;
      if (best != col) std::swap(lu_[best], lu_[col]);
      if (std::abs(lu_[col][col]) < 1e-14) {
        throw ConstructionError("linear system is numerically singular (pivot " +
                                std::to_string(lu_[col][col]) + ")");
      }
      for (std::size_t row = col + 1; row < n_; ++row) {
        const double factor = lu_[row][col] / lu_[col][col];
        lu_[row][col] = factor;
        for (std::size_t k = col + 1; k < n_; ++k) lu_[row][k] -= factor * lu_[col][k];
      }
    }
  }

  std::vector<double> solve(std::vector<double> b) const {
    // rows were swapped wholesale during factorization, so the permutation
    // must be applied to b in full before the triangular solves
    for (std::size_t col = 0; col < n_; ++col) {
      if (pivot_[col] != col) std::swap(b[pivot_[col]], b[col]);
    }
    for (std::size_t col = 0; col < n_; ++col) {
      for (std::size_t row = col + 1; row < n_; ++row) b[row] -= lu_[row][col] * b[col];
    }
    for (std::size_t row = n_; row-- > 0;) {
      for (std::size_t k = row + 1; k < n_; ++k) b[row] -= lu_[row][k] * b[k];
      b[row] /= lu_[row][row];
    }
    return b;
  }

 private:
  std::vector<std::vector<double>> lu_;
  std::size_t n_;
  std::vector<std::size_t> pivot_;
};

std::vector<double> solve_refined(const std::vector<std::vector<double>>& matrix,
                                  const std::vector<double>& rhs, double residual_tol) {
  const DenseLU lu(matrix);
  std::vector<double> x = lu.solve(rhs);
  for (int pass = 0;; ++pass) {
    std::vector<double> residual(rhs.size());
    double residual_norm = 0.0;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      double ax = 0.0;
      for (std::size_t k = 0; k < rhs.size(); ++k) ax += matrix[i][k] * x[k];
      residual[i] = rhs[i] - ax;
      residual_norm = std::max(residual_norm, std::abs(residual[i]));
    }
    if (residual_norm <= residual_tol) return x;
    if (pass >= 4) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", residual_norm);
      throw ConstructionError("linear solve residual " + std::string(buf) +
                              " above tolerance after refinement");
    }
    const std::vector<double> correction = lu.solve(residual);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += correction[i];
  }
}

// Flat (j, m') layout over the multiplet ladder of a state, with one
// rotation series d^j_{m'm} per flat slot. Shared by the measurement and the
// source-moment evaluation.
struct RotationColumn {
  std::vector<int> twice_mprime;
  std::vector<std::size_t> block_start;  // per multiplet
  std::vector<WignerSmallD> rotations;
  int twice_m = 0;

  explicit RotationColumn(const EffectiveState& state) : twice_m(state.m().twice()) {
    for (std::size_t b = 0; b < state.size(); ++b) {
      const HalfInt j = state.j_at(b);
      block_start.push_back(twice_mprime.size());
      for (int tmp = -j.twice(); tmp <= j.twice(); tmp += 2) {
        twice_mprime.push_back(tmp);
        rotations.emplace_back(j, HalfInt::from_twice(tmp), state.m());
      }
    }
  }

  std::size_t dim() const { return twice_mprime.size(); }

  // out[flat] = D^j_{m'm}(phi, theta, 0)
  void fill(double theta, double phi, std::vector<std::complex<double>>& out) const {
    out.resize(dim());
    const double cos_half = std::cos(0.5 * theta);
    const double sin_half = std::sin(0.5 * theta);
    for (std::size_t i = 0; i < dim(); ++i) {
      const double d = rotations[i].from_half_angle(cos_half, sin_half);
      out[i] = std::polar(d, -0.5 * twice_mprime[i] * phi);
    }
  }
};

}  // namespace

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 1e-300)) throw std::invalid_argument("normalized: zero vector");
  return {v.x / n, v.y / n, v.z / n};
}

Vec3 direction_from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

void angles_from_direction(const Vec3& n, double& theta, double& phi) {
  const Vec3 u = normalized(n);
  theta = std::acos(std::clamp(u.z, -1.0, 1.0));
  phi = std::atan2(u.y, u.x);
  if (phi < 0.0) phi += kTwoPi;
  if (std::abs(u.z) >= 1.0 - 1e-15) phi = 0.0;  // azimuth is degenerate at the poles
}

WeightedDirectionSet::WeightedDirectionSet(std::vector<DirectionEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw std::invalid_argument("WeightedDirectionSet: need at least one direction");
  }
  for (DirectionEntry& e : entries_) {
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw std::invalid_argument("WeightedDirectionSet: weights must be positive");
    }
    if (e.theta < -1e-12 || e.theta > kPi + 1e-12) {
      throw std::invalid_argument("WeightedDirectionSet: theta outside [0, pi]");
    }
    e.theta = std::clamp(e.theta, 0.0, kPi);
    e.phi = wrap_azimuth(e.phi);
    total_weight_ += e.weight;
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Vec3 a = direction(i);
    for (std::size_t k = i + 1; k < entries_.size(); ++k) {
      const Vec3 b = direction(k);
      const Vec3 d{a.x - b.x, a.y - b.y, a.z - b.z};
      if (norm(d) <= 1e-12) {
        throw std::invalid_argument(
            "WeightedDirectionSet: entries " + std::to_string(i) + " and " +
            std::to_string(k) + " point the same way; merge their weights instead");
      }
    }
  }
}

Vec3 WeightedDirectionSet::direction(std::size_t r) const {
  const DirectionEntry& e = entries_.at(r);
  return direction_from_angles(e.theta, e.phi);
}

std::complex<double> multipole_moment(const WeightedDirectionSet& set, int L, int M) {
  if (L < 1 || std::abs(M) > L) {
    throw std::invalid_argument("multipole_moment: need L >= 1 and |M| <= L");
  }
  std::complex<double> z{0.0, 0.0};
  for (const DirectionEntry& e : set.entries()) {
    z += e.weight * spherical_harmonic(L, -M, e.theta, e.phi);
  }
  return std::sqrt(4.0 * kPi / (2.0 * L + 1.0)) * z;
}

MultipoleReport multipole_moments(const WeightedDirectionSet& set, int l_max,
                                  double tolerance) {
  if (l_max < 1) throw std::invalid_argument("multipole_moments: need l_max >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("multipole_moments: tolerance must be positive");
  MultipoleReport report;
  report.J = HalfInt::from_twice(l_max);
  report.tolerance = tolerance;
  for (int L = 1; L <= l_max; ++L) {
    for (int M = 0; M <= L; ++M) {
      const std::complex<double> z = multipole_moment(set, L, M);
      report.moments.push_back({L, M, z});
      if (std::abs(z) > report.max_abs) {
        report.max_abs = std::abs(z);
        report.worst_L = L;
        report.worst_M = M;
      }
    }
  }
  report.pass = report.max_abs <= tolerance;
  return report;
}

MultipoleReport verify_isotropy(const WeightedDirectionSet& set, HalfInt J, double tolerance) {
  if (J.twice() < 1) throw std::invalid_argument("verify_isotropy: need J >= 1/2");
  MultipoleReport report = multipole_moments(set, J.twice(), tolerance);
  report.J = J;
  return report;
}

OrthogonalityReport verify_wigner_orthogonality(const WeightedDirectionSet& set, HalfInt J,
                                                double tolerance) {
  if (J.twice() < 0) throw std::invalid_argument("verify_wigner_orthogonality: negative J");
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("verify_wigner_orthogonality: tolerance must be positive");
  }
  OrthogonalityReport report;
  report.J = J;
  report.tolerance = tolerance;

  const std::size_t points = set.size();
  const double total = set.total_weight();

  // Cache D^j_{mk}(n_r) for every multiplet of both ladders up to J.
  // Block b holds 2j+1 x 2j+1 complex entries in (m, k) order.
  std::vector<int> twice_js;
  for (int tj = 0; tj <= J.twice(); ++tj) twice_js.push_back(tj);

  std::vector<std::size_t> block_offset(twice_js.size());
  std::size_t flat_size = 0;
  for (std::size_t b = 0; b < twice_js.size(); ++b) {
    block_offset[b] = flat_size;
    const std::size_t width = static_cast<std::size_t>(twice_js[b] + 1);
    flat_size += width * width;
  }

  std::vector<std::complex<double>> cache(points * flat_size);
  {
    std::vector<WignerSmallD> series;
    std::vector<std::size_t> series_offset(twice_js.size());
    for (std::size_t b = 0; b < twice_js.size(); ++b) {
      series_offset[b] = series.size();
      const int tj = twice_js[b];
      for (int tm = -tj; tm <= tj; tm += 2) {
        for (int tk = -tj; tk <= tj; tk += 2) {
          series.emplace_back(HalfInt::from_twice(tj), HalfInt::from_twice(tm),
                              HalfInt::from_twice(tk));
        }
      }
    }
    for (std::size_t r = 0; r < points; ++r) {
      const DirectionEntry& e = set.entries()[r];
      const double cos_half = std::cos(0.5 * e.theta);
      const double sin_half = std::sin(0.5 * e.theta);
      for (std::size_t b = 0; b < twice_js.size(); ++b) {
        const int tj = twice_js[b];
        std::size_t idx = 0;
        for (int tm = -tj; tm <= tj; tm += 2) {
          const std::complex<double> phase = std::polar(1.0, -0.5 * tm * e.phi);
          for (int tk = -tj; tk <= tj; tk += 2, ++idx) {
            const double d =
                series[series_offset[b] + idx].from_half_angle(cos_half, sin_half);
            cache[r * flat_size + block_offset[b] + idx] = phase * d;
          }
        }
      }
    }
  }

  const auto element = [&](std::size_t r, std::size_t b, int tj, int tm,
                           int tk) -> const std::complex<double>& {
    const std::size_t width = static_cast<std::size_t>(tj + 1);
    const std::size_t row = static_cast<std::size_t>((tm + tj) / 2);
    const std::size_t col = static_cast<std::size_t>((tk + tj) / 2);
    return cache[r * flat_size + block_offset[b] + row * width + col];
  };

  for (std::size_t b = 0; b < twice_js.size(); ++b) {
    const int tj = twice_js[b];
    for (std::size_t bp = 0; bp < twice_js.size(); ++bp) {
      const int tjp = twice_js[bp];
      if ((tj - tjp) % 2 != 0) continue;  // no common k between the two ladders
      const int tk_max = std::min(tj, tjp);
      for (int tm = -tj; tm <= tj; tm += 2) {
        for (int tmp = -tjp; tmp <= tjp; tmp += 2) {
          for (int tk = -tk_max; tk <= tk_max; tk += 2) {
            if ((tj - tk) % 2 != 0) continue;
            std::complex<double> sum{0.0, 0.0};
            for (std::size_t r = 0; r < points; ++r) {
              sum += set.entries()[r].weight * element(r, b, tj, tm, tk) *
                     std::conj(element(r, bp, tjp, tmp, tk));
            }
            const double expected =
                (tj == tjp && tm == tmp) ? total / (tj + 1.0) : 0.0;
            const double deviation = std::abs(sum - expected) / total;
            if (deviation > report.worst_deviation) {
              report.worst_deviation = deviation;
              report.worst_twice[0] = tj;
              report.worst_twice[1] = tjp;
              report.worst_twice[2] = tm;
              report.worst_twice[3] = tmp;
              report.worst_twice[4] = tk;
            }
          }
        }
      }
    }
  }
  report.pass = report.worst_deviation <= tolerance;
  return report;
}

WeightedDirectionSet construct_isotropic_set(HalfInt J) {
  if (J.twice() < 1) throw std::invalid_argument("construct_isotropic_set: need J >= 1/2");
  const int j_hat = J.is_integer() ? J.to_int() : (J.twice() + 1) / 2;
  const int ring_count = 2 * j_hat;         // interior rings k = 1..2J
  const int azimuths = 2 * j_hat + 1;       // phi_s = 2 pi s / (2J+1)

  std::vector<double> theta(static_cast<std::size_t>(ring_count) + 2);
  for (int k = 0; k <= ring_count + 1; ++k) {
    theta[static_cast<std::size_t>(k)] = k * kPi / azimuths;
  }

  // Moment conditions sum_k c_k P_L(cos theta_k) = 0 for L = 1..2J with unit
  // pole weights: P_L(1) = 1, P_L(-1) = (-1)^L.
  std::vector<std::vector<double>> matrix(static_cast<std::size_t>(ring_count),
                                          std::vector<double>(static_cast<std::size_t>(ring_count)));
  std::vector<double> rhs(static_cast<std::size_t>(ring_count));
  for (int L = 1; L <= ring_count; ++L) {
    for (int k = 1; k <= ring_count; ++k) {
      matrix[L - 1][k - 1] = legendre_p(L, std::cos(theta[static_cast<std::size_t>(k)]));
    }
    rhs[L - 1] = -(1.0 + (L % 2 == 0 ? 1.0 : -1.0));
  }

  const std::vector<double> ring_weight = solve_refined(matrix, rhs, 1e-12);
  for (std::size_t k = 0; k < ring_weight.size(); ++k) {
    if (!(ring_weight[k] > 0.0)) {
      throw ConstructionError("construct_isotropic_set: solved ring weight c_" +
                              std::to_string(k + 1) + " = " + std::to_string(ring_weight[k]) +
                              " is not positive");
    }
  }

  std::vector<DirectionEntry> entries;
  entries.reserve(static_cast<std::size_t>(ring_count * azimuths) + 2);
  // The grid formally repeats each pole once per azimuth; those coincide, so
  // they enter as single outcomes carrying the merged weight.
  entries.push_back({0.0, 0.0, static_cast<double>(azimuths)});
  entries.push_back({kPi, 0.0, static_cast<double>(azimuths)});
  for (int k = 1; k <= ring_count; ++k) {
    for (int s = 0; s < azimuths; ++s) {
      entries.push_back({theta[static_cast<std::size_t>(k)], kTwoPi * s / azimuths,
                         ring_weight[static_cast<std::size_t>(k - 1)]});
    }
  }

  WeightedDirectionSet set(std::move(entries));
  const MultipoleReport report = verify_isotropy(set, HalfInt(j_hat), 1e-10);
  if (!report.pass) {
    throw ConstructionError("construct_isotropic_set: result fails its own isotropy check "
                            "(max |z| = " + std::to_string(report.max_abs) + ")");
  }
  return set;
}

WeightedDirectionSet platonic_set(const std::string& name) {
  if (name == "tetrahedron") {
    const double ring_theta = std::acos(-1.0 / 3.0);
    std::vector<DirectionEntry> entries{{0.0, 0.0, 1.0}};
    for (int s = 0; s < 3; ++s) entries.push_back({ring_theta, kTwoPi * s / 3.0, 1.0});
    return WeightedDirectionSet(std::move(entries));
  }
  if (name == "octahedron") {
    std::vector<DirectionEntry> entries{
        {0.0, 0.0, 1.0},          {kPi, 0.0, 1.0},           {0.5 * kPi, 0.0, 1.0},
        {0.5 * kPi, 0.5 * kPi, 1.0}, {0.5 * kPi, kPi, 1.0},  {0.5 * kPi, 1.5 * kPi, 1.0}};
    return WeightedDirectionSet(std::move(entries));
  }
  throw std::invalid_argument("platonic_set: unknown name '" + name +
                              "' (expected tetrahedron or octahedron)");
}

WeightedDirectionSet rotated(const WeightedDirectionSet& set, double alpha, double beta,
                             double gamma) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double cg = std::cos(gamma), sg = std::sin(gamma);
  // R_z(alpha) R_y(beta) R_z(gamma)
  const double R[3][3] = {
      {ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb},
      {sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb},
      {-sb * cg, sb * sg, cb},
  };
  std::vector<DirectionEntry> entries;
  entries.reserve(set.size());
  for (std::size_t r = 0; r < set.size(); ++r) {
    const Vec3 n = set.direction(r);
    const Vec3 rn{R[0][0] * n.x + R[0][1] * n.y + R[0][2] * n.z,
                  R[1][0] * n.x + R[1][1] * n.y + R[1][2] * n.z,
                  R[2][0] * n.x + R[2][1] * n.y + R[2][2] * n.z};
    double theta = 0.0, phi = 0.0;
    angles_from_direction(rn, theta, phi);
    entries.push_back({theta, phi, set.entries()[r].weight});
  }
  return WeightedDirectionSet(std::move(entries));
}

FiniteMeasurement::FiniteMeasurement(EffectiveState state, WeightedDirectionSet set,
                                     double closure_tolerance)
    : state_(std::move(state)), set_(std::move(set)), closure_tolerance_(closure_tolerance) {
  if (!(closure_tolerance_ > 0.0)) {
    throw std::invalid_argument("FiniteMeasurement: closure tolerance must be positive");
  }
  const RotationColumn column(state_);
  twice_mprime_ = column.twice_mprime;
  for (std::size_t b = 0; b < column.block_start.size(); ++b) {
    block_offset_.push_back(static_cast<int>(column.block_start[b]));
  }
  rotations_ = column.rotations;

  const DecoderSeed seed = decoder_seed(state_.J(), state_.m());
  const std::size_t dim = column.dim();
  point_rows_.resize(set_.size() * dim);
  std::vector<std::complex<double>> buffer;
  for (std::size_t r = 0; r < set_.size(); ++r) {
    const DirectionEntry& e = set_.entries()[r];
    column.fill(e.theta, e.phi, buffer);
    for (std::size_t b = 0; b < state_.size(); ++b) {
      const double factor = seed.coeffs[b] * state_.coeffs()[b];
      const std::size_t begin = column.block_start[b];
      const std::size_t end =
          b + 1 < state_.size() ? column.block_start[b + 1] : dim;
      for (std::size_t i = begin; i < end; ++i) {
        point_rows_[r * dim + i] = factor * std::conj(buffer[i]);
      }
    }
    points_.push_back(set_.direction(r));
  }
}

void FiniteMeasurement::rotation_column(double theta, double phi,
                                        std::vector<std::complex<double>>& out) const {
  out.resize(twice_mprime_.size());
  const double cos_half = std::cos(0.5 * theta);
  const double sin_half = std::sin(0.5 * theta);
  for (std::size_t i = 0; i < twice_mprime_.size(); ++i) {
    const double d = rotations_[i].from_half_angle(cos_half, sin_half);
    out[i] = std::polar(d, -0.5 * twice_mprime_[i] * phi);
  }
}

void FiniteMeasurement::probabilities(const Vec3& source, Workspace& ws) const {
  double theta = 0.0, phi = 0.0;
  angles_from_direction(source, theta, phi);
  rotation_column(theta, phi, ws.column);
  const std::size_t dim = twice_mprime_.size();
  ws.probabilities.resize(set_.size());
  const double total = set_.total_weight();
  double sum = 0.0;
  for (std::size_t r = 0; r < set_.size(); ++r) {
    std::complex<double> amp{0.0, 0.0};
    const std::complex<double>* row = &point_rows_[r * dim];
    for (std::size_t i = 0; i < dim; ++i) amp += row[i] * ws.column[i];
    const double p = set_.entries()[r].weight / total * std::norm(amp);
    ws.probabilities[r] = p;
    sum += p;
  }
  if (std::abs(sum - 1.0) > closure_tolerance_) {
    throw ClosureError("outcome probabilities sum to " + std::to_string(sum) +
                       ", not 1: the direction set is not isotropic to the order this "
                       "state requires");
  }
}

std::vector<double> FiniteMeasurement::probabilities(const Vec3& source) const {
  Workspace ws;
  probabilities(source, ws);
  return std::move(ws.probabilities);
}

double FiniteMeasurement::fidelity(const Vec3& source) const {
  Workspace ws;
  probabilities(source, ws);
  const Vec3 u = normalized(source);
  double total = 0.0;
  for (std::size_t r = 0; r < set_.size(); ++r) {
    total += ws.probabilities[r] * 0.5 * (1.0 + dot(u, points_[r]));
  }
  return total;
}

std::vector<double> outcome_distribution(const EffectiveState& state,
                                         const WeightedDirectionSet& set, const Vec3& source) {
  return FiniteMeasurement(state, set).probabilities(source);
}

double fixed_source_fidelity(const EffectiveState& state, const WeightedDirectionSet& set,
                             const Vec3& source) {
  return FiniteMeasurement(state, set).fidelity(source);
}

double averaged_finite_fidelity(const EffectiveState& state, const WeightedDirectionSet& set) {
  const FiniteMeasurement measurement(state, set);
  const int gl_nodes = state.J().twice() + 2;
  const int azimuths = 2 * state.J().twice() + 3;
  const Quadrature q = gauss_legendre(gl_nodes);
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double theta = std::acos(std::clamp(q.nodes[i], -1.0, 1.0));
    for (int s = 0; s < azimuths; ++s) {
      const double phi = kTwoPi * s / azimuths;
      total += 0.5 * q.weights[i] / azimuths *
               measurement.fidelity(direction_from_angles(theta, phi));
    }
  }
  return total;
}

SourceMomentComparison source_moment_operator(const EffectiveState& state,
                                              const WeightedDirectionSet& set,
                                              const Vec3& guess) {
  const Vec3 g = normalized(guess);
  const RotationColumn column(state);
  const std::size_t dim = column.dim();

  SourceMomentComparison cmp;
  cmp.dim = dim;
  cmp.finite.assign(dim * dim, {0.0, 0.0});
  cmp.continuous.assign(dim * dim, {0.0, 0.0});

  // Rotated-state components psi_flat(n) = A_j D^j_{m'm}(n).
  std::vector<double> amplitude(dim);
  for (std::size_t b = 0; b < state.size(); ++b) {
    const std::size_t begin = column.block_start[b];
    const std::size_t end = b + 1 < state.size() ? column.block_start[b + 1] : dim;
    for (std::size_t i = begin; i < end; ++i) amplitude[i] = state.coeffs()[b];
  }
  std::vector<std::complex<double>> psi;
  const auto accumulate = [&](std::vector<std::complex<double>>& target, double weight,
                              double theta, double phi, const Vec3& n) {
    column.fill(theta, phi, psi);
    for (std::size_t i = 0; i < dim; ++i) psi[i] *= amplitude[i];
    const double factor = weight * 0.5 * (1.0 + dot(n, g));
    for (std::size_t row = 0; row < dim; ++row) {
      const std::complex<double> lhs = factor * psi[row];
      for (std::size_t col = 0; col < dim; ++col) {
        target[row * dim + col] += lhs * std::conj(psi[col]);
      }
    }
  };

  const double total = set.total_weight();
  for (std::size_t r = 0; r < set.size(); ++r) {
    const DirectionEntry& e = set.entries()[r];
    accumulate(cmp.finite, e.weight / total, e.theta, e.phi, set.direction(r));
  }

  const int gl_nodes = state.J().twice() + 2;
  const int azimuths = 2 * state.J().twice() + 3;
  const Quadrature q = gauss_legendre(gl_nodes);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double theta = std::acos(std::clamp(q.nodes[i], -1.0, 1.0));
    for (int s = 0; s < azimuths; ++s) {
      const double phi = kTwoPi * s / azimuths;
      accumulate(cmp.continuous, 0.5 * q.weights[i] / azimuths, theta, phi,
                 direction_from_angles(theta, phi));
    }
  }

  double frob = 0.0;
  for (std::size_t i = 0; i < dim * dim; ++i) {
    frob += std::norm(cmp.finite[i] - cmp.continuous[i]);
  }
  cmp.deviation = std::sqrt(frob);
  return cmp;
}

void save_direction_set(const WeightedDirectionSet& set, std::ostream& out) {
  out << "theta,phi,weight\n";
  char line[128];
  for (const DirectionEntry& e : set.entries()) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", e.theta, e.phi, e.weight);
    out << line;
  }
}

void save_direction_set(const WeightedDirectionSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  save_direction_set(set, out);
  if (!out) throw ParseError("write to '" + path + "' failed");
}

WeightedDirectionSet load_direction_set(std::istream& in) {
  std::vector<DirectionEntry> entries;
  std::string line;
  bool first = true;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    DirectionEntry e;
    char trailing = '\0';
    const int got =
        std::sscanf(line.c_str(), " %lf , %lf , %lf %c", &e.theta, &e.phi, &e.weight, &trailing);
    if (got >= 3 && (got == 3 || trailing == '\r')) {
      entries.push_back(e);
    } else if (first) {
      // header line
    } else {
      throw ParseError("direction-set line " + std::to_string(line_number) +
                       " is not 'theta,phi,weight': '" + line + "'");
    }
    first = false;
  }
  if (entries.empty()) throw ParseError("direction-set file holds no entries");
  return WeightedDirectionSet(std::move(entries));
}

WeightedDirectionSet load_direction_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return load_direction_set(in);
}

}  // namespace spindir
