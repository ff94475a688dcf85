#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coporeg/errors.hpp"
#include "coporeg/omega_grid.hpp"
#include "coporeg/simplex_oracle.hpp"
#include "oracles.hpp"

namespace coporeg {
namespace {

std::vector<double> coords(const SimplexPoint& t) { return {t.coords().begin(), t.coords().end()}; }

class RandomMatrix : public ::testing::TestWithParam<int> {};

// The exact minimum never exceeds the grid minimum and is within the grid's
// Lipschitz slack of it.
TEST_P(RandomMatrix, ExactMinimumBracketsBruteGrid) {
  const int p = 2 + GetParam() % 3;
  const auto rows = testing::random_symmetric(p, -1, 1, static_cast<std::uint64_t>(GetParam()));
  const auto d = SymMatrix::from_rows(rows);
  const auto exact = min_quad_over_simplex(d);
  const int N = 64;
  const auto brute = testing::brute_grid_min(rows, N);
  EXPECT_LE(exact.value, brute.min + 1e-12);
  EXPECT_GE(exact.value, brute.min - brute.lipschitz * p / (2.0 * N));
  EXPECT_NEAR(testing::brute_quad(rows, coords(exact.argmin)), exact.value, 1e-12);
  ASSERT_TRUE(exact.exact());
}

TEST_P(RandomMatrix, GridBoundIsValid) {
  const int p = 3 + GetParam() % 2;
  const auto rows = testing::random_symmetric(p, -1, 1, 100u + static_cast<std::uint64_t>(GetParam()));
  const auto d = SymMatrix::from_rows(rows);
  const auto exact = min_quad_over_simplex(d);
  const auto grid = min_quad_over_simplex_grid(d, 1.0 / 32);
  EXPECT_LE(grid.lower_bound(), exact.value + 1e-12);
  EXPECT_GE(grid.value, exact.value - 1e-12);
  const auto& cert = std::get<GridCertificate>(grid.certificate);
  EXPECT_EQ(cert.denominator, 32);
  EXPECT_NEAR(cert.radius, p / 64.0, 1e-15);
}

TEST_P(RandomMatrix, StationaryPointsSatisfyKkt) {
  const int p = 2 + GetParam() % 3;
  const auto d = SymMatrix::from_rows(testing::random_symmetric(p, -1, 1, 200u + static_cast<std::uint64_t>(GetParam())));
  for (const auto& s : stationary_points(d)) {
    const Eigen::VectorXd g = d.matrix() * s.point.vec();
    for (int k = 0; k < p; ++k) {
      if ((s.support_mask >> k) & 1u) EXPECT_NEAR(g(k), s.multiplier, 1e-9);
    }
    EXPECT_NEAR(s.value, s.multiplier, 1e-9);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomMatrix, ::testing::Range(1, 31));

// The reference grid settles its last split in closed form; compare it with
// plain nested loops.
TEST(ReferenceGrid, MatchesFullEnumeration) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto rows = testing::random_symmetric(4, -1, 1, seed);
    const int N = 24;
    double best = 1e300;
    for (int a = 0; a <= N; ++a)
      for (int b = 0; a + b <= N; ++b)
        for (int c = 0; a + b + c <= N; ++c) {
          const std::vector<double> t{double(a) / N, double(b) / N, double(c) / N, double(N - a - b - c) / N};
          best = std::min(best, testing::brute_quad(rows, t));
        }
    EXPECT_NEAR(testing::brute_grid_min(rows, N).min, best, 1e-12);
  }
}

TEST(Copositivity, Horn) {
  const auto v = is_copositive(SymMatrix::from_rows(testing::horn()));
  ASSERT_TRUE(std::holds_alternative<Copositive>(v));
  EXPECT_LE(std::abs(std::get<Copositive>(v).margin), 1e-9);
  EXPECT_FALSE(is_strictly_copositive(SymMatrix::from_rows(testing::horn())));
}

TEST(Copositivity, WitnessIsNegative) {
  const auto d = SymMatrix::from_rows({{1, -2}, {-2, 1}});
  const auto v = is_copositive(d);
  ASSERT_TRUE(std::holds_alternative<NotCopositive>(v));
  const auto& w = std::get<NotCopositive>(v);
  EXPECT_NEAR(w.value, -0.5, 1e-12);
  EXPECT_NEAR(quad_form(d, w.witness), w.value, 1e-12);
}

TEST(Copositivity, NonnegativeAndPsdAreCopositive) {
  EXPECT_TRUE(is_strictly_copositive(SymMatrix::identity(4)));
  EXPECT_TRUE(std::holds_alternative<Copositive>(is_copositive(SymMatrix::from_rows({{0, 1}, {1, 0}}))));
  EXPECT_TRUE(std::holds_alternative<Copositive>(is_copositive(SymMatrix::from_rows({{1, -1}, {-1, 1}}))));
}

TEST(Copositivity, CapabilityLimit) {
  EXPECT_THROW(min_quad_over_simplex(SymMatrix::identity(6), 5), CapabilityError);
}

TEST(Hull, SinglePointDistance) {
  const SimplexPoint t({0.2, 0.3, 0.5});
  const SimplexPoint v({0.5, 0.5, 0.0});
  EXPECT_NEAR(l1_dist_to_hull(t, {v}), 1.0, 1e-12);
}

// Property: the segment distance matches a breakpoint enumeration.
TEST(Hull, SegmentDistanceMatchesBreakpoints) {
  std::mt19937_64 rng(5);
  std::gamma_distribution<double> g(1.0);
  auto draw = [&](int p) {
    std::vector<double> v(static_cast<std::size_t>(p));
    double s = 0;
    for (auto& x : v) s += x = g(rng);
    for (auto& x : v) x /= s;
    return v;
  };
  for (int rep = 0; rep < 200; ++rep) {
    const int p = 2 + rep % 4;
    const auto t = draw(p), a = draw(p), b = draw(p);
    EXPECT_NEAR(l1_dist_to_hull(SimplexPoint(t), {SimplexPoint(a), SimplexPoint(b)}),
                testing::l1_to_segment(t, a, b), 1e-9);
  }
}

TEST(Hull, ThreePointsViaLp) {
  const std::vector<SimplexPoint> V{SimplexPoint::vertex(3, 0), SimplexPoint::vertex(3, 1),
                                    SimplexPoint({0.5, 0.5, 0.0})};
  EXPECT_NEAR(l1_dist_to_hull(SimplexPoint::vertex(3, 2), V), 2.0, 1e-9);
  EXPECT_NEAR(l1_dist_to_hull(SimplexPoint({0.3, 0.3, 0.4}), V), 0.8, 1e-9);
}

TEST(Omega, SigmaAndEmptiness) {
  const std::vector<SimplexPoint> V{SimplexPoint({0.25, 0.75, 0.0})};
  EXPECT_DOUBLE_EQ(sigma(V), 0.25);
  const OmegaDescriptor om(V);
  EXPECT_FALSE(om.is_empty());
  EXPECT_TRUE(om.contains(SimplexPoint::vertex(3, 2)));
  EXPECT_FALSE(om.contains(SimplexPoint({0.25, 0.75, 0.0})));
  // The vertices sit at distance 1 >= sigma = 1/2 from the midpoint; a hull
  // covering all of T leaves nothing.
  EXPECT_FALSE(OmegaDescriptor({SimplexPoint({0.5, 0.5})}).is_empty());
  EXPECT_TRUE(OmegaDescriptor({SimplexPoint::vertex(2, 0), SimplexPoint::vertex(2, 1)}).is_empty());
}

TEST(Omega, GridMatchesBruteForce) {
  const std::vector<std::vector<double>> V{{0.5, 0.0, 0.5, 0.0}, {0.0, 0.5, 0.5, 0.0}};
  const OmegaDescriptor om({SimplexPoint(V[0]), SimplexPoint(V[1])});
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto rows = testing::random_symmetric(4, -1, 1, seed);
    const auto res = min_quad_over_omega(SymMatrix::from_rows(rows), om, 1.0 / 32);
    ASSERT_TRUE(std::holds_alternative<OracleResult>(res));
    const auto& r = std::get<OracleResult>(res);
    const double brute = testing::brute_omega_min(rows, V, om.sigma(), 32);
    EXPECT_NEAR(r.value, brute, 1e-12);
    EXPECT_LE(r.lower_bound(), testing::brute_omega_min(rows, V, om.sigma(), 96) + 1e-12);
  }
}

TEST(Omega, EmptyDomain) {
  const OmegaDescriptor om({SimplexPoint::vertex(2, 0), SimplexPoint::vertex(2, 1)});
  EXPECT_TRUE(std::holds_alternative<EmptyIndexSet>(min_quad_over_omega(SymMatrix::identity(2), om, 0.25)));
}

TEST(Omega, AdaptiveBoundIsValid) {
  const std::vector<std::vector<double>> V{{0.25, 0.75, 0.0}};
  const OmegaDescriptor om({SimplexPoint(V[0])});
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto rows = testing::random_symmetric(3, -1, 1, seed);
    const auto d = SymMatrix::from_rows(rows);
    const double fine = testing::brute_omega_min(rows, V, om.sigma(), 400);
    const auto b = bound_quad_over_omega(d, om, 0.0);
    EXPECT_LE(b.lower_bound, fine + 1e-12);
    if (b.certified) EXPECT_GE(fine, -1e-12);
    if (b.below) {
      EXPECT_TRUE(om.contains(*b.below));
      EXPECT_LT(quad_form(d, *b.below), 0.0);
    }
  }
}

TEST(Grid, BelowListsMostNegativeFirst) {
  const SimplexGrid grid(3, 0.25);
  const auto d = SymMatrix::from_rows({{1, -2, 0}, {-2, 1, 0}, {0, 0, 1}});
  const auto pts = grid.below(d, 0.0, 3);
  ASSERT_FALSE(pts.empty());
  EXPECT_NEAR(pts.front().second, -0.5, 1e-12);
  for (std::size_t j = 1; j < pts.size(); ++j) EXPECT_LE(pts[j - 1].second, pts[j].second);
}

// Properties.

TEST(OracleProperty, ExactAgreesWithFineGrid) {
  // h = 2^-8 for p = 3, 4; p = 5 uses 2^-6 to keep the grid enumerable.
  for (int rep = 0; rep < 200; ++rep) {
    const int p = 3 + rep % 3;
    const double h = p == 5 ? 1.0 / 64 : 1.0 / 256;
    const auto d = SymMatrix::from_rows(testing::random_symmetric(p, -1, 1, 5000u + static_cast<std::uint64_t>(rep)));
    const auto exact = min_quad_over_simplex(d);
    const auto grid = min_quad_over_simplex_grid(d, h);
    const double L = 2.0 * d.max_abs();
    EXPECT_LE(std::abs(exact.value - grid.value), L * h);
    EXPECT_LE(grid.lower_bound(), grid.value);
    EXPECT_NEAR(quad_form(d, grid.argmin), grid.value, 1e-10);
  }
}

TEST(OracleProperty, WitnessesAreNegative) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto d = SymMatrix::from_rows(testing::random_symmetric(4, -1, 1, seed));
    const auto v = is_copositive(d);
    if (const auto* w = std::get_if<NotCopositive>(&v)) {
      EXPECT_LT(quad_form(d, w->witness), 0.0);
      double s = 0;
      for (int k = 0; k < 4; ++k) {
        EXPECT_GE(w->witness[k], 0.0);
        s += w->witness[k];
      }
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(OracleProperty, ScalingCommutes) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto d = SymMatrix::from_rows(testing::random_symmetric(4, -1, 1, seed));
    const double a = 0.1 + static_cast<double>(seed) / 7.0;
    const auto r = min_quad_over_simplex(d);
    const auto ra = min_quad_over_simplex(a * d);
    EXPECT_NEAR(ra.value, a * r.value, 1e-12 * (1 + a));
    EXPECT_LE(ra.argmin.linf_distance(r.argmin), 1e-9);
  }
}

TEST(OracleProperty, OmegaExcludesItsGenerators) {
  const std::vector<SimplexPoint> V{SimplexPoint({0.5, 0.0, 0.5, 0.0}), SimplexPoint({0.0, 0.25, 0.75, 0.0}),
                                    SimplexPoint({0.2, 0.2, 0.2, 0.4})};
  const OmegaDescriptor om(V);
  for (const auto& v : V) {
    EXPECT_FALSE(om.contains(v));
    EXPECT_NEAR(l1_dist_to_hull(v, V), 0.0, 1e-9);
  }
}

TEST(OracleProperty, DuplicatePointLeavesOmegaUnchanged) {
  const std::vector<SimplexPoint> V{SimplexPoint({0.5, 0.5, 0.0, 0.0}), SimplexPoint({0.0, 0.0, 1.0, 0.0})};
  auto Vd = V;
  Vd.push_back(V[0]);
  const OmegaDescriptor a(V), b(Vd);
  EXPECT_EQ(a.sigma(), b.sigma());
  const SimplexGrid ga(a, 1.0 / 12), gb(b, 1.0 / 12);
  ASSERT_EQ(ga.size(), gb.size());
  for (std::size_t j = 0; j < ga.size(); ++j) EXPECT_EQ(ga.in_domain(j), gb.in_domain(j));
}

TEST(OracleProperty, DistanceIsOneLipschitz) {
  std::mt19937_64 rng(8);
  std::gamma_distribution<double> g(1.0);
  auto draw = [&] {
    std::vector<double> v(4);
    double s = 0;
    for (auto& x : v) s += x = g(rng);
    for (auto& x : v) x /= s;
    return SimplexPoint(v);
  };
  const std::vector<SimplexPoint> V{draw(), draw(), draw()};
  for (int rep = 0; rep < 100; ++rep) {
    const auto t = draw(), u = draw();
    EXPECT_LE(std::abs(l1_dist_to_hull(t, V) - l1_dist_to_hull(u, V)), t.l1_distance(u) + 1e-9);
  }
}

}  // namespace
}  // namespace coporeg
