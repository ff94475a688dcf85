#include <gtest/gtest.h>

#include "coporeg/errors.hpp"
#include "coporeg/minimal_face.hpp"
#include "oracles.hpp"

namespace coporeg {
namespace {

RegularizedProblem regularized(const CopositiveProgram& prog) {
  return std::get<Regularized>(reg_lcop(prog).outcome).problem;
}

TEST(ComputeM, E2) {
  const auto prog = testing::load_fixture("e2.json");
  const auto rp = regularized(prog);
  // Row 2 of A(x) e_1 is x, which is positive at the witness.
  std::vector<std::string> notes;
  EXPECT_EQ(compute_M(prog, SimplexPoint::vertex(2, 0), rp, {}, &notes), IndexSet::of({0}));
  EXPECT_EQ(notes, std::vector<std::string>{"row 2 unbounded above"});
}

TEST(ComputeM, E3) {
  const auto prog = testing::load_fixture("e3.json");
  const auto rp = regularized(prog);
  EXPECT_EQ(compute_M(prog, SimplexPoint({0.5, 0.5}), rp), IndexSet::all(2));
}

TEST(ComputeM, RowPinnedAtZeroOverTheFeasibleSet) {
  // A(x) = [[0, 0, 0], [0, 1, x], [0, x, 1]] + x (e_1 e_3' + e_3 e_1'):
  // copositivity at e_1 forces x >= 0 through row 3 and nothing pins it to
  // zero, while row 2 of A(x) e_1 vanishes identically.
  const auto a0 = SymMatrix::from_rows({{0, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const auto a1 = SymMatrix::from_rows({{0, 0, 1}, {0, 0, 0}, {1, 0, 0}});
  const CopositiveProgram prog({1.0}, {a0, a1});
  const auto rp = regularized(prog);
  const auto M = compute_M(prog, SimplexPoint::vertex(3, 0), rp);
  EXPECT_TRUE(M.contains(0));
  EXPECT_TRUE(M.contains(1));
  EXPECT_FALSE(M.contains(2));
}

class FaceRun : public ::testing::TestWithParam<const char*> {};

TEST_P(FaceRun, PredicatesAgree) {
  const auto prog = testing::load_fixture(GetParam());
  const auto rp = regularized(prog);
  const auto desc = minimal_face(prog, rp.W(), rp);
  const auto rep = cross_check(desc, 200, 5);
  EXPECT_EQ(rep.samples, 200);
  EXPECT_GT(rep.members, 50);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, FaceRun, ::testing::Values("e2.json", "e3.json"));

TEST(Predicates, SecondFormChecksSigns) {
  MinimalFaceDescriptor d;
  d.vertices = {SimplexPoint::vertex(2, 0)};
  d.M = {IndexSet::of({0})};
  const auto in = SymMatrix::from_rows({{0, 1}, {1, 1}});
  EXPECT_TRUE(d.kmin1(in));
  EXPECT_TRUE(d.kmin2(in));
  const auto off = SymMatrix::from_rows({{1, 0}, {0, 1}});
  EXPECT_FALSE(d.kmin1(off));
  EXPECT_FALSE(d.kmin2(off));
}

// With M short of P_+(t) the two forms part ways: D below is positive
// definite while D t has a negative entry.
TEST(Predicates, KnownMembers) {
  // E2: F_min = {D copositive, D_11 = 0}.
  MinimalFaceDescriptor e2;
  e2.vertices = {SimplexPoint::vertex(2, 0)};
  e2.M = {IndexSet::of({0})};
  EXPECT_TRUE(e2.kmin2(SymMatrix::from_rows({{0, 0}, {0, 1}})));
  EXPECT_FALSE(e2.kmin2(SymMatrix::from_rows({{1, 0}, {0, 0}})));
  EXPECT_TRUE(e2.kmin1(SymMatrix(2)));
  // E3: nonnegative multiples of [[1, -1], [-1, 1]].
  MinimalFaceDescriptor e3;
  e3.vertices = {SimplexPoint({0.5, 0.5})};
  e3.M = {IndexSet::all(2)};
  EXPECT_TRUE(e3.kmin1(SymMatrix::from_rows({{2, -2}, {-2, 2}})));
  EXPECT_FALSE(e3.kmin1(SymMatrix::from_rows({{-1, 1}, {1, -1}})));
  EXPECT_FALSE(e3.kmin1(SymMatrix::from_rows({{1, -1}, {-1, 2}})));
  EXPECT_TRUE(e3.kmin1(SymMatrix(2)));
}

TEST(CrossCheck, ReportsMismatch) {
  MinimalFaceDescriptor d;
  d.vertices = {SimplexPoint({0.5, 0.5})};
  d.M = {IndexSet{}};
  const auto D = SymMatrix::from_rows({{1, -2}, {-2, 5}});
  EXPECT_TRUE(d.kmin1(D));
  EXPECT_FALSE(d.kmin2(D));
  EXPECT_THROW(cross_check(d, 500, 2), MismatchError);
}

}  // namespace
}  // namespace coporeg
