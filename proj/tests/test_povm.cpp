#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "spindir/angular.hpp"
#include "spindir/errors.hpp"
#include "spindir/fidelity.hpp"
#include "spindir/povm.hpp"

using namespace spindir;

namespace {
constexpr double kPi = std::numbers::pi;
const HalfInt kHalf = HalfInt::half();
const HalfInt kThreeHalves = HalfInt::from_twice(3);

Vec3 random_unit(std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return normalized({normal(gen), normal(gen), normal(gen)});
}
}  // namespace

TEST_SUITE_BEGIN("povm");

TEST_CASE("direction set validation") {
  CHECK_THROWS_AS(WeightedDirectionSet({}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedDirectionSet({{0.3, 0.1, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedDirectionSet({{0.3, 0.1, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedDirectionSet({{3.5, 0.1, 1.0}}), std::invalid_argument);
  // coincident directions are rejected, including pole aliases with
  // different azimuths
  CHECK_THROWS_AS(WeightedDirectionSet({{0.4, 0.2, 1.0}, {0.4, 0.2, 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(WeightedDirectionSet({{0.0, 0.0, 1.0}, {0.0, 2.0, 1.0}}),
                  std::invalid_argument);
  const WeightedDirectionSet ok({{0.4, 0.2, 1.5}, {1.2, 5.9, 0.5}});
  CHECK(ok.total_weight() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("platonic sets have the documented geometry") {
  const WeightedDirectionSet tetra = platonic_set("tetrahedron");
  REQUIRE(tetra.size() == 4);
  CHECK(tetra.entries()[0].theta == 0.0);  // one vertex at the north pole
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = i + 1; k < 4; ++k) {
      CHECK(dot(tetra.direction(i), tetra.direction(k)) ==
            doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
    }
  }

  const WeightedDirectionSet octa = platonic_set("octahedron");
  REQUIRE(octa.size() == 6);
  int axis_hits = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    const Vec3 n = octa.direction(i);
    for (double target : {1.0, -1.0}) {
      if (std::abs(n.x - target) < 1e-14 && std::abs(n.y) < 1e-14 && std::abs(n.z) < 1e-14)
        ++axis_hits;
      if (std::abs(n.y - target) < 1e-14 && std::abs(n.x) < 1e-14 && std::abs(n.z) < 1e-14)
        ++axis_hits;
      if (std::abs(n.z - target) < 1e-14 && std::abs(n.x) < 1e-14 && std::abs(n.y) < 1e-14)
        ++axis_hits;
    }
  }
  CHECK(axis_hits == 6);

  CHECK_THROWS_AS(platonic_set("icosahedron"), std::invalid_argument);
}

TEST_CASE("multipole moments: simple sets") {
  // a single direction cannot be isotropic: its dipole moment is the
  // direction itself
  const WeightedDirectionSet point({{1.1, 0.7, 1.0}});
  const MultipoleReport single = verify_isotropy(point, HalfInt(1), 1e-10);
  CHECK(!single.pass);
  CHECK(std::abs(multipole_moment(point, 1, 0)) > 0.1);

  // antipodal pair kills every odd moment
  const WeightedDirectionSet pair({{0.9, 0.3, 1.0}, {kPi - 0.9, 0.3 + kPi, 1.0}});
  for (int M = 0; M <= 1; ++M) {
    CHECK(std::abs(multipole_moment(pair, 1, M)) < 1e-14);
  }

  // tetrahedron: quadrupole-clean, octupole-dirty
  const WeightedDirectionSet tetra = platonic_set("tetrahedron");
  for (int L = 1; L <= 2; ++L) {
    for (int M = 0; M <= L; ++M) {
      CHECK(std::abs(multipole_moment(tetra, L, M)) < 1e-12);
    }
  }
  CHECK(std::abs(multipole_moment(tetra, 3, 0)) > 1.0);
}

TEST_CASE("isotropy verdicts for the minimal sets") {
  const WeightedDirectionSet tetra = platonic_set("tetrahedron");
  const WeightedDirectionSet octa = platonic_set("octahedron");

  CHECK(verify_isotropy(tetra, HalfInt(1), 1e-10).pass);
  const MultipoleReport tetra_fail = verify_isotropy(tetra, kThreeHalves, 1e-10);
  CHECK(!tetra_fail.pass);
  CHECK(tetra_fail.worst_L == 3);

  CHECK(verify_isotropy(octa, kThreeHalves, 1e-10).pass);
  const MultipoleReport octa_fail = verify_isotropy(octa, HalfInt(2), 1e-10);
  CHECK(!octa_fail.pass);
  CHECK(octa_fail.worst_L == 4);
}

TEST_CASE("wigner orthogonality verdicts match the multipole ones") {
  const WeightedDirectionSet tetra = platonic_set("tetrahedron");
  const WeightedDirectionSet octa = platonic_set("octahedron");

  CHECK(verify_wigner_orthogonality(octa, kThreeHalves, 1e-9).pass);
  CHECK(verify_wigner_orthogonality(tetra, HalfInt(1), 1e-9).pass);
  const OrthogonalityReport tetra_fail = verify_wigner_orthogonality(tetra, kThreeHalves, 1e-9);
  CHECK(!tetra_fail.pass);
  CHECK(tetra_fail.worst_deviation > 1e-3);
}

TEST_CASE("constructed grid: hand-checked J = 1") {
  const WeightedDirectionSet set = construct_isotropic_set(HalfInt(1));
  REQUIRE(set.size() == 8);  // two poles + two rings of three
  CHECK(set.total_weight() == doctest::Approx(54.0).epsilon(1e-12));

  // poles carry the merged weight 2J+1 = 3
  CHECK(set.entries()[0].theta == 0.0);
  CHECK(set.entries()[0].weight == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(set.entries()[1].theta == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(set.entries()[1].weight == doctest::Approx(3.0).epsilon(1e-13));

  // interior rings at pi/3 and 2pi/3 with c_1 = c_2 = 8, azimuths 2 pi s / 3
  int ring_entries = 0;
  for (std::size_t r = 2; r < set.size(); ++r) {
    const DirectionEntry& e = set.entries()[r];
    const bool upper = std::abs(e.theta - kPi / 3.0) < 1e-13;
    const bool lower = std::abs(e.theta - 2.0 * kPi / 3.0) < 1e-13;
    CHECK((upper || lower));
    CHECK(e.weight == doctest::Approx(8.0).epsilon(1e-11));
    ++ring_entries;
  }
  CHECK(ring_entries == 6);

  CHECK(verify_isotropy(set, HalfInt(1), 1e-12).pass);
}

TEST_CASE("constructed grids pass both verifications up to J = 4") {
  for (int j = 1; j <= 4; ++j) {
    const WeightedDirectionSet set = construct_isotropic_set(HalfInt(j));
    CHECK(verify_isotropy(set, HalfInt(j), 1e-10).pass);
    CHECK(verify_wigner_orthogonality(set, HalfInt(j), 1e-9).pass);
    // interior weights exceed the pole weight 1 per grid point
    for (std::size_t r = 2; r < set.size(); ++r) {
      CHECK(set.entries()[r].weight > 1.0);
    }
  }
}

TEST_CASE("half-integer construction orders round up") {
  const WeightedDirectionSet set = construct_isotropic_set(kThreeHalves);
  // rounded up to J = 2: grid of 2 poles + 4 rings x 5 azimuths
  CHECK(set.size() == 22);
  CHECK(verify_isotropy(set, HalfInt(2), 1e-10).pass);
  CHECK(set.total_weight() == doctest::Approx(250.0).epsilon(1e-10));
}

TEST_CASE("perturbing one weight breaks both isotropy characterizations") {
  const WeightedDirectionSet set = construct_isotropic_set(HalfInt(1));
  std::vector<DirectionEntry> entries = set.entries();
  entries[3].weight *= 1.01;
  const WeightedDirectionSet broken(std::move(entries));
  CHECK(!verify_isotropy(broken, HalfInt(1), 1e-9).pass);
  CHECK(!verify_wigner_orthogonality(broken, HalfInt(1), 1e-9).pass);
}

TEST_CASE("three-j contraction of the orthogonality sums") {
  // sum_l (2l+1) (3j)(3j) z_l^{m-m'} = (-1)^(m'-k) C delta delta / (2j+1),
  // spot-checked on a constructed grid
  const WeightedDirectionSet set = construct_isotropic_set(HalfInt(2));
  const double total = set.total_weight();
  std::mt19937_64 gen(57);
  for (int trial = 0; trial < 12; ++trial) {
    const int tj = 1 + static_cast<int>(gen() % 4);
    const int tjp_candidates[] = {tj % 2, tj % 2 + 2, tj % 2 + 4};
    const int tjp = tjp_candidates[gen() % 3];
    if (tjp > 4) continue;
    const int tm = tj == 0 ? 0 : static_cast<int>(gen() % (tj + 1)) * 2 - tj;
    const int tmp = tjp == 0 ? 0 : static_cast<int>(gen() % (tjp + 1)) * 2 - tjp;
    const int tk_max = std::min(tj, tjp);
    for (int tk = -tk_max; tk <= tk_max; tk += 2) {
      if ((tj - tk) % 2 != 0) continue;
      std::complex<double> lhs{0.0, 0.0};
      for (int tl = std::abs(tj - tjp); tl <= tj + tjp; tl += 2) {
        const int l = tl / 2;
        const int big_m = (tm - tmp) / 2;
        if (std::abs(big_m) > l) continue;  // the first 3-j symbol vanishes
        const std::complex<double> z =
            l == 0 ? std::complex<double>(total, 0.0) : multipole_moment(set, l, big_m);
        lhs += (tl + 1.0) *
               three_j(HalfInt::from_twice(tj), HalfInt::from_twice(tjp),
                       HalfInt::from_twice(tl), HalfInt::from_twice(tm),
                       HalfInt::from_twice(-tmp), HalfInt::from_twice(tm - tmp)) *
               three_j(HalfInt::from_twice(tj), HalfInt::from_twice(tjp),
                       HalfInt::from_twice(tl), HalfInt::from_twice(tk),
                       HalfInt::from_twice(-tk), HalfInt(0)) *
               z;
      }
      const double phase = ((tmp - tk) / 2) % 2 ? -1.0 : 1.0;
      const std::complex<double> rhs =
          (tj == tjp && tm == tmp)
              ? std::complex<double>(phase * total / (tj + 1.0), 0.0)
              : std::complex<double>(0.0, 0.0);
      CHECK(std::abs(lhs - rhs) < 1e-9);
    }
  }
}

TEST_CASE("outcome distributions close and respect symmetry") {
  std::mt19937_64 gen(61);
  const WeightedDirectionSet tetra = platonic_set("tetrahedron");
  const WeightedDirectionSet octa = platonic_set("octahedron");

  for (int trial = 0; trial < 5; ++trial) {
    const Vec3 source = random_unit(gen);
    const std::vector<double> p = outcome_distribution(parallel_state(2), tetra, source);
    double sum = 0.0;
    for (double v : p) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }

  // source on an octahedron vertex: the four equatorial outcomes are
  // related by the stabilizer rotations and must be equally likely
  const std::vector<double> p =
      outcome_distribution(antiparallel_state(2), octa, {0.0, 0.0, 1.0});
  CHECK(p[2] == doctest::Approx(p[3]).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(p[4]).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(p[5]).epsilon(1e-12));

  // rotating the source with a set symmetry permutes the distribution
  const Vec3 source{1.0, 0.0, 0.0};
  const std::vector<double> base = outcome_distribution(antiparallel_state(2), octa, source);
  const Vec3 rotated_source{0.0, 1.0, 0.0};  // quarter turn about z
  const std::vector<double> turned =
      outcome_distribution(antiparallel_state(2), octa, rotated_source);
  // outcomes 2,3,4,5 are +x,+y,-x,-y: the quarter turn maps 2->3, 3->4, ...
  CHECK(turned[3] == doctest::Approx(base[2]).epsilon(1e-12));
  CHECK(turned[4] == doctest::Approx(base[3]).epsilon(1e-12));
  CHECK(turned[5] == doctest::Approx(base[4]).epsilon(1e-12));
  CHECK(turned[2] == doctest::Approx(base[5]).epsilon(1e-12));
  CHECK(turned[0] == doctest::Approx(base[0]).epsilon(1e-12));
}

TEST_CASE("closure violations are refused, not repaired") {
  const WeightedDirectionSet tetra = platonic_set("tetrahedron");
  // N = 3 needs isotropy through order 3; the tetrahedron stops at 2
  CHECK_THROWS_AS(outcome_distribution(antiparallel_state(3), tetra, {0.0, 0.0, 1.0}),
                  ClosureError);
  CHECK_THROWS_AS(fixed_source_fidelity(antiparallel_state(3), tetra, {0.0, 0.0, 1.0}),
                  ClosureError);
}

TEST_CASE("fixed-source fidelities with the octahedron are source-independent") {
  std::mt19937_64 gen(67);
  const WeightedDirectionSet octa = platonic_set("octahedron");
  const EffectiveState parallel = parallel_state(2);
  const EffectiveState anti = antiparallel_state(2);
  for (int trial = 0; trial < 8; ++trial) {
    const Vec3 source = random_unit(gen);
    CHECK(fixed_source_fidelity(parallel, octa, source) ==
          doctest::Approx(0.75).epsilon(1e-10));
    CHECK(fixed_source_fidelity(anti, octa, source) ==
          doctest::Approx((3.0 + std::sqrt(3.0)) / 6.0).epsilon(1e-10));
  }
}

TEST_CASE("tetrahedron fixed-source fidelity varies but averages correctly") {
  const WeightedDirectionSet tetra = platonic_set("tetrahedron");
  const EffectiveState parallel = parallel_state(2);
  const double at_vertex = fixed_source_fidelity(parallel, tetra, tetra.direction(0));
  const double off_vertex = fixed_source_fidelity(parallel, tetra, {1.0, 0.0, 0.0});
  CHECK(std::abs(at_vertex - off_vertex) > 1e-3);
  CHECK(averaged_finite_fidelity(parallel, tetra) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(averaged_finite_fidelity(antiparallel_state(2), tetra) ==
        doctest::Approx((3.0 + std::sqrt(3.0)) / 6.0).epsilon(1e-10));
}

TEST_CASE("averaged finite fidelities reproduce the continuous values") {
  const WeightedDirectionSet octa = platonic_set("octahedron");
  CHECK(averaged_finite_fidelity(antiparallel_state(3), octa) ==
        doctest::Approx(maf_closed_form(antiparallel_state(3))).epsilon(1e-10));
  CHECK(std::abs(averaged_finite_fidelity(antiparallel_state(3), octa) - 0.8444) < 5e-5);

  const WeightedDirectionSet grid = construct_isotropic_set(HalfInt(2));
  for (int n = 1; n <= 4; ++n) {
    const EffectiveState state = antiparallel_state(n);
    CHECK(averaged_finite_fidelity(state, grid) ==
          doctest::Approx(maf_closed_form(state)).epsilon(1e-10));
  }
  const OptimalEncoding best = optimal_state(4);
  CHECK(averaged_finite_fidelity(best.state, grid) == doctest::Approx(best.maf).epsilon(1e-10));
}

TEST_CASE("rigid rotations leave the averaged fidelity unchanged") {
  std::mt19937_64 gen(71);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  const WeightedDirectionSet octa = platonic_set("octahedron");
  const EffectiveState state = antiparallel_state(3);
  const double reference = averaged_finite_fidelity(state, octa);
  for (int trial = 0; trial < 3; ++trial) {
    const WeightedDirectionSet spun =
        rotated(octa, angle(gen), 0.5 * angle(gen), angle(gen));
    CHECK(averaged_finite_fidelity(state, spun) == doctest::Approx(reference).epsilon(1e-10));
  }
  // rotation preserves the pairwise geometry
  const WeightedDirectionSet spun = rotated(octa, 0.3, 1.1, 2.7);
  CHECK(dot(spun.direction(0), spun.direction(1)) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("source-moment operator distinguishes the minimal sets") {
  std::mt19937_64 gen(73);
  const WeightedDirectionSet octa = platonic_set("octahedron");
  const WeightedDirectionSet tetra = platonic_set("tetrahedron");
  const EffectiveState anti = antiparallel_state(2);

  double worst_octa = 0.0;
  double best_tetra = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const Vec3 guess = random_unit(gen);
    worst_octa = std::max(worst_octa, source_moment_operator(anti, octa, guess).deviation);
    best_tetra = std::max(best_tetra, source_moment_operator(anti, tetra, guess).deviation);
  }
  CHECK(worst_octa < 1e-10);
  CHECK(best_tetra > 1e-6);

  // the spin-0 state sees only the constant part of the integrand
  const EffectiveState singlet(HalfInt(0), HalfInt(0), {1.0});
  const WeightedDirectionSet grid = construct_isotropic_set(HalfInt(1));
  CHECK(source_moment_operator(singlet, grid, {0.0, 0.0, 1.0}).deviation < 1e-12);

  const SourceMomentComparison cmp = source_moment_operator(anti, octa, {0.0, 0.0, 1.0});
  CHECK(cmp.dim == 4);  // j = 0 block plus j = 1 block
  CHECK(cmp.finite.size() == 16);
}

TEST_CASE("direction-set CSV round-trips bit-exactly") {
  const WeightedDirectionSet set = construct_isotropic_set(HalfInt(2));
  std::stringstream buffer;
  save_direction_set(set, buffer);
  const WeightedDirectionSet loaded = load_direction_set(buffer);
  REQUIRE(loaded.size() == set.size());
  for (std::size_t r = 0; r < set.size(); ++r) {
    CHECK(loaded.entries()[r].theta == set.entries()[r].theta);
    CHECK(loaded.entries()[r].phi == set.entries()[r].phi);
    CHECK(loaded.entries()[r].weight == set.entries()[r].weight);
  }

  // header is optional on input
  std::stringstream headerless;
  headerless << "0.0,0.0,1.0\n" << kPi << ",0.0,1.0\n";
  const WeightedDirectionSet pair = load_direction_set(headerless);
  CHECK(pair.size() == 2);

  std::stringstream garbage;
  garbage << "theta,phi,weight\n0.1,0.2\n";
  CHECK_THROWS_AS(load_direction_set(garbage), ParseError);

  std::stringstream empty;
  empty << "theta,phi,weight\n";
  CHECK_THROWS_AS(load_direction_set(empty), ParseError);
}

TEST_SUITE_END();
