#include <gtest/gtest.h>

#include "coporeg/errors.hpp"
#include "coporeg/generator.hpp"
#include "coporeg/simplex_oracle.hpp"
#include "oracles.hpp"

namespace coporeg {
namespace {

struct Case {
  int p;
  int n;
  std::vector<std::vector<double>> planted;
};

class Generated : public ::testing::TestWithParam<std::tuple<int, Case>> {};

// Planted points are immobile: the form and its rows on the support vanish
// for every A_i, and A_0 is copositive.
TEST_P(Generated, PlantedPointsAreImmobile) {
  const auto& [seed, c] = GetParam();
  std::vector<SimplexPoint> pts;
  for (const auto& v : c.planted) pts.emplace_back(v);
  const auto prog = generate_instance(static_cast<std::uint64_t>(seed), c.p, c.n, pts);
  ASSERT_EQ(prog.p(), c.p);
  ASSERT_EQ(prog.n(), c.n);
  for (const auto& v : c.planted) {
    for (int j = 0; j <= c.n; ++j) {
      const auto rows = prog.A(j).rows();
      EXPECT_NEAR(testing::brute_quad(rows, v), 0.0, 1e-12);
      if (j == 0) continue;
      for (int k = 0; k < c.p; ++k) {
        if (v[static_cast<std::size_t>(k)] <= 0) continue;
        double r = 0;
        for (int l = 0; l < c.p; ++l) r += rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] * v[static_cast<std::size_t>(l)];
        EXPECT_NEAR(r, 0.0, 1e-12);
      }
    }
  }
  const auto brute = testing::brute_grid_min(prog.A(0).rows(), 40);
  EXPECT_GE(brute.min, -1e-12);
}

INSTANTIATE_TEST_SUITE_P(
    Cases, Generated,
    ::testing::Combine(::testing::Values(1, 2, 3),
                       ::testing::Values(Case{3, 2, {{0.5, 0.5, 0}}}, Case{4, 3, {{1, 0, 0, 0}, {0, 0.5, 0.5, 0}}},
                                         Case{5, 2, {{0.25, 0.75, 0, 0, 0}}})));

TEST(Generator, Deterministic) {
  const std::vector<SimplexPoint> pts{SimplexPoint({0.5, 0.5, 0.0})};
  EXPECT_EQ(generate_instance(4, 3, 2, pts), generate_instance(4, 3, 2, pts));
  EXPECT_FALSE(generate_instance(4, 3, 2, pts) == generate_instance(5, 3, 2, pts));
}

TEST(Generator, NoPlantedPointsGivesIdentityConstant) {
  const auto prog = generate_instance(1, 3, 2, {});
  EXPECT_EQ(prog.A(0), SymMatrix::identity(3));
}

TEST(Generator, RejectsBadInput) {
  EXPECT_THROW(generate_instance(1, 1, 1, {}), GeneratorError);
  EXPECT_THROW(generate_instance(1, 3, 0, {}), GeneratorError);
  // Both vertices and the midpoint of T_2 leave only the zero matrix.
  std::vector<SimplexPoint> all{SimplexPoint::vertex(2, 0), SimplexPoint::vertex(2, 1), SimplexPoint({0.5, 0.5})};
  EXPECT_THROW(generate_instance(1, 2, 1, all), GeneratorError);
}

}  // namespace
}  // namespace coporeg
