#include <gtest/gtest.h>

#include <algorithm>

#include "coporeg/errors.hpp"
#include "coporeg/ledger.hpp"
#include "coporeg/regularizer.hpp"
#include "coporeg/sampling.hpp"
#include "oracles.hpp"

namespace coporeg {
namespace {

std::vector<FaceLedgerEntry> ledger_of(const char* fixture) {
  const auto res = reg_lcop(testing::load_fixture(fixture));
  return std::get<Regularized>(res.outcome).ledger;
}

TEST(BuildY, OuterProductsAndSymmetricTerms) {
  // One new tau = (0.5, 0.5) with gamma 4 on E3: Y = [[1, 1], [1, 1]].
  const auto prog = testing::load_fixture("e3.json");
  DualCertificate cert;
  cert.new_indices.push_back({SimplexPoint({0.5, 0.5}), 4.0});
  const auto Y = build_Y(prog, cert, {});
  EXPECT_EQ(Y.rows(), (std::vector<std::vector<double>>{{1, 1}, {1, 1}}));
  EXPECT_NEAR(kernel_residual(prog, Y), 0.0, 1e-15);

  cert.new_indices.front().tau = SimplexPoint::vertex(2, 0);
  EXPECT_THROW(build_Y(prog, cert, {}), LedgerError);
}

TEST(BuildY, SingleVertex) {
  const auto prog = testing::load_fixture("e2.json");
  DualCertificate cert;
  cert.new_indices.push_back({SimplexPoint::vertex(2, 0), 1.0});
  EXPECT_EQ(build_Y(prog, cert, {}).rows(), (std::vector<std::vector<double>>{{1, 0}, {0, 0}}));
}

TEST(BuildY, LambdaTerms) {
  // tau = e_1, lambda = (0, 1): Y = e_1 e_2' + e_2 e_1'.
  const auto prog = testing::load_fixture("e1.json");
  DualCertificate cert;
  Eigen::VectorXd lam(2);
  lam << 0.0, 1.0;
  cert.lambda.push_back(lam);
  const std::vector<IndexRecord> prior{{SimplexPoint::vertex(2, 0), IndexSet::of({0})}};
  const auto Y = build_Y(prog, cert, prior, 10.0);
  EXPECT_EQ(Y.rows(), (std::vector<std::vector<double>>{{0, 1}, {1, 0}}));
}

TEST(FaceMembership, RowsAndCopositivity) {
  const std::vector<IndexRecord> face{{SimplexPoint::vertex(2, 0), IndexSet::of({0})}};
  EXPECT_TRUE(face_membership(face, SymMatrix::from_rows({{0, 1}, {1, 1}})));
  EXPECT_FALSE(face_membership(face, SymMatrix::from_rows({{1, 0}, {0, 1}})));
  EXPECT_FALSE(face_membership(face, SymMatrix::from_rows({{0, -1}, {-1, 1}})));
  EXPECT_TRUE(face_membership(std::vector<IndexRecord>{}, SymMatrix::identity(3)));
}

class LedgerRun : public ::testing::TestWithParam<const char*> {};

TEST_P(LedgerRun, LedgerVerifies) {
  const auto prog = testing::load_fixture(GetParam());
  const auto led = ledger_of(GetParam());
  ASSERT_FALSE(led.empty());
  const auto rep = verify_ledger(led, prog);
  EXPECT_TRUE(rep.ok());
  for (const auto& c : rep.checks) EXPECT_TRUE(c.ok) << c.condition << ": " << c.detail;
  for (const auto& e : led) EXPECT_LE(e.kernel_residual, 1e-7);
}

// Property: Y_m is orthogonal to every sampled member of F_m.
TEST_P(LedgerRun, OrthogonalOnFace) {
  const auto led = ledger_of(GetParam());
  const auto& e = led.back();
  CopositiveSampler s(e.Y.dim(), 21);
  std::vector<FaceConstraint> fc;
  for (const auto& r : e.face) fc.push_back({r.tau, r.L});
  int members = 0;
  for (int j = 0; j < 100; ++j) {
    const auto D = s.on_face(fc);
    if (!face_membership(e, D)) continue;
    ++members;
    EXPECT_LE(std::abs(inner(D, e.Y)), 1e-7);
  }
  EXPECT_GT(members, 50);
}

TEST_P(LedgerRun, CompressionKeepsEverything) {
  const auto prog = testing::load_fixture(GetParam());
  const auto led = ledger_of(GetParam());
  const auto c = compress_ledger(led, prog);
  EXPECT_EQ(c.core.size(), led.size());
  EXPECT_TRUE(c.squeezed.empty());
  EXPECT_LE(c.s_star, c.ker_dim);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, LedgerRun, ::testing::Values("e2.json", "e3.json"));

TEST(Compression, SqueezesAnInjectedDependentEntry) {
  const auto prog = testing::load_fixture("e3.json");
  auto led = ledger_of("e3.json");
  auto dup = led.front();
  dup.m = 2;
  dup.Y = 3.0 * dup.Y;
  led.push_back(dup);
  const auto c = compress_ledger(led, prog);
  EXPECT_EQ(c.squeezed, std::vector<int>{2});
  EXPECT_EQ(c.core, std::vector<int>{1});
}

TEST(Compression, SingleEntryAndMultiples) {
  const auto prog = testing::load_fixture("e2.json");
  const auto led = ledger_of("e2.json");
  const auto c = compress_ledger(led, prog);
  EXPECT_EQ(c.s_star, 0);
  EXPECT_EQ(c.core.size(), 1u);
  const auto y1 = SymMatrix::from_rows({{1, 0}, {0, 0}});
  EXPECT_EQ(independent_prefix_members({y1, 2.0 * y1}), std::vector<int>{0});
  EXPECT_EQ(independent_prefix_members({y1, SymMatrix::from_rows({{0, 1}, {1, 0}})}), (std::vector<int>{0, 1}));
}

TEST(Verify, EmptyLedgerPasses) {
  EXPECT_TRUE(verify_ledger({}, testing::load_fixture("e1.json")).ok());
}

TEST(Compression, IndependentPrefix) {
  const auto a = SymMatrix::from_rows({{1, 0}, {0, 0}});
  const auto b = SymMatrix::from_rows({{0, 0}, {0, 1}});
  EXPECT_EQ(independent_prefix_members({a, b, a + b, 2.0 * b}), (std::vector<int>{0, 1}));
}

TEST(Verify, CatchesAForgedY) {
  const auto prog = testing::load_fixture("e2.json");
  auto led = ledger_of("e2.json");
  led.front().Y = SymMatrix::identity(2);
  led.front().kernel_residual = kernel_residual(prog, led.front().Y);
  EXPECT_DOUBLE_EQ(led.front().kernel_residual, 1.0);
  const auto rep = verify_ledger(led, prog);
  EXPECT_FALSE(rep.ok());
  const bool kernel_flagged = std::any_of(rep.checks.begin(), rep.checks.end(),
                                          [](const LedgerCheck& c) { return c.condition == "II" && !c.ok; });
  EXPECT_TRUE(kernel_flagged);
}

}  // namespace
}  // namespace coporeg
