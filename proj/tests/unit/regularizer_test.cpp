#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "coporeg/errors.hpp"
#include "coporeg/generator.hpp"
#include "coporeg/regularizer.hpp"
#include "coporeg/sampling.hpp"
#include "oracles.hpp"

namespace coporeg {
namespace {

TEST(RegLcop, SlaterProgramIsRegular) {
  const auto res = reg_lcop(testing::load_fixture("e1.json"));
  ASSERT_TRUE(std::holds_alternative<Regular>(res.outcome));
  const auto& r = std::get<Regular>(res.outcome);
  EXPECT_GT(r.margin, 0.0);
  EXPECT_EQ(res.cap, 4);
  EXPECT_EQ(res.trace.size(), 1u);
}

TEST(RegLcop, E2) {
  const auto prog = testing::load_fixture("e2.json");
  const auto res = reg_lcop(prog);
  ASSERT_TRUE(std::holds_alternative<Regularized>(res.outcome));
  const auto& r = std::get<Regularized>(res.outcome);
  EXPECT_EQ(r.m_star, 1);
  ASSERT_EQ(r.problem.records.size(), 1u);
  EXPECT_LE(r.problem.records[0].tau.linf_distance(SimplexPoint::vertex(2, 0)), 1e-6);
  EXPECT_EQ(r.problem.records[0].L, IndexSet::of({0}));
  // The one nontrivial row reads x >= 0.
  int nontrivial = 0;
  for (const auto& row : r.problem.rows()) {
    if (row.trivial) continue;
    ++nontrivial;
    EXPECT_FALSE(row.equality);
    EXPECT_NEAR(row.coeffs(0), 0.0, 1e-12);
    EXPECT_GT(row.coeffs(1), 0.0);
  }
  EXPECT_EQ(nontrivial, 1);
  EXPECT_GT(r.problem.margin, 0.0);
}

TEST(RegLcop, E3) {
  const auto res = reg_lcop(testing::load_fixture("e3.json"));
  ASSERT_TRUE(std::holds_alternative<Regularized>(res.outcome));
  const auto& r = std::get<Regularized>(res.outcome);
  EXPECT_EQ(r.m_star, 1);
  ASSERT_EQ(r.problem.records.size(), 1u);
  EXPECT_LE(r.problem.records[0].tau.linf_distance(SimplexPoint({0.5, 0.5})), 1e-6);
  EXPECT_EQ(r.problem.records[0].L, IndexSet::of({0, 1}));
  EXPECT_GT(r.problem.witness[0], 0.0);
}

TEST(RegLcop, CapOfOneStillRegularizesOneStepPrograms) {
  RegOptions opts;
  opts.cap = 1;
  const auto res = reg_lcop(testing::load_fixture("e2.json"), opts);
  EXPECT_TRUE(std::holds_alternative<Regularized>(res.outcome));
  EXPECT_EQ(res.cap, 1);
}

TEST(RegLcop, InfeasibleProgramFails) {
  // A(x) = -I + 0 x is never copositive.
  const CopositiveProgram prog({1.0}, {-1.0 * SymMatrix::identity(2), SymMatrix(2)});
  const auto res = reg_lcop(prog);
  EXPECT_TRUE(std::holds_alternative<Failed>(res.outcome));
}

// Generated programs: every planted point is recovered in conv of the
// detected records and the witness satisfies the regularized description.
class Planted : public ::testing::TestWithParam<int> {};

TEST_P(Planted, RecoversPlantedPoints) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  const std::vector<SimplexPoint> planted{SimplexPoint({0.5, 0.5, 0.0})};
  const auto prog = generate_instance(seed, 3, 2, planted);
  const auto res = reg_lcop(prog);
  ASSERT_TRUE(std::holds_alternative<Regularized>(res.outcome));
  const auto& r = std::get<Regularized>(res.outcome);
  std::vector<SimplexPoint> taus;
  for (const auto& rec : r.problem.records) taus.push_back(rec.tau);
  EXPECT_LE(l1_dist_to_hull(planted[0], taus), 1e-6);
  for (const auto& row : r.problem.rows()) {
    const double v = row.eval(r.problem.witness);
    if (row.equality) EXPECT_NEAR(v, 0.0, 1e-7);
    else EXPECT_GE(v, -1e-9);
  }
  // The witness is feasible for the original program.
  EXPECT_TRUE(std::holds_alternative<Copositive>(is_copositive(eval_constraint(prog, r.problem.witness))));
  const auto rep = feasibility_equiv_sample(prog, r.problem, 60, seed);
  EXPECT_EQ(rep.disagreements, 0);
}

INSTANTIATE_TEST_SUITE_P(Seeds, Planted, ::testing::Range(1, 6));

TEST(UpdateIndexSets, GrowsLAndAddsRecords) {
  IterationState st;
  st.records.push_back({SimplexPoint::vertex(3, 0), IndexSet::of({0})});
  DualCertificate cert;
  cert.new_indices.push_back({SimplexPoint({0.0, 0.5, 0.5}), 1.0});
  Eigen::VectorXd lam(3);
  lam << 0.0, 2.0, 1e-9;
  cert.lambda.push_back(lam);
  const auto up = update_index_sets(st, cert);
  EXPECT_TRUE(up.progress);
  ASSERT_EQ(up.state.records.size(), 2u);
  EXPECT_EQ(up.state.records[0].L, IndexSet::of({0, 1}));
  EXPECT_EQ(up.state.records[1].L, IndexSet::of({1, 2}));
  EXPECT_EQ(up.state.m, st.m + 1);
}

TEST(UpdateIndexSets, SmallCases) {
  IterationState st;
  st.records.push_back({SimplexPoint::vertex(2, 0), IndexSet::of({0})});
  DualCertificate grow;
  Eigen::VectorXd lam(2);
  lam << 0.0, 0.7;
  grow.lambda.push_back(lam);
  EXPECT_EQ(update_index_sets(st, grow).state.records[0].L, IndexSet::all(2));

  DualCertificate fresh;
  fresh.new_indices.push_back({SimplexPoint({0.5, 0.5}), 1.0});
  const auto up = update_index_sets(IterationState{}, fresh);
  ASSERT_EQ(up.state.records.size(), 1u);
  EXPECT_EQ(up.state.records[0].L, IndexSet::all(2));
}

TEST(UpdateIndexSets, NoChangeIsNoProgress) {
  IterationState st;
  st.records.push_back({SimplexPoint::vertex(2, 0), IndexSet::of({0})});
  DualCertificate cert;
  cert.lambda.push_back(Eigen::VectorXd::Zero(2));
  EXPECT_FALSE(update_index_sets(st, cert).progress);
}

// A new index must vanish somewhere on the support of every old one.
TEST(Disjointness, NewZerosMeetOldSupport) {
  IterationState st;
  st.records.push_back({SimplexPoint::vertex(3, 0), IndexSet::of({0})});
  DualCertificate ok;
  ok.new_indices.push_back({SimplexPoint({0.0, 0.5, 0.5}), 1.0});
  EXPECT_TRUE(check_disjointness_condition(st, ok));
  EXPECT_TRUE(check_disjointness_condition(IterationState{}, ok));
  DualCertificate bad;
  bad.new_indices.push_back({SimplexPoint({0.5, 0.5, 0.0}), 1.0});
  EXPECT_FALSE(check_disjointness_condition(st, bad));
}

TEST(OneStep, AcceptsTheImmobileSet) {
  const auto prog = testing::load_fixture("e3.json");
  for (bool strict : {false, true}) {
    const auto rp = one_step_regularize(prog, {SimplexPoint({0.5, 0.5})}, {}, strict);
    EXPECT_GE(rp.margin, 1e-6);
    ASSERT_TRUE(rp.omega.has_value());
    EXPECT_EQ(rp.records.front().L, strict ? IndexSet::all(2) : IndexSet{});
  }
}

TEST(OneStep, RejectsAnEmptySet) {
  EXPECT_THROW(one_step_regularize(testing::load_fixture("e1.json"), {}), InputError);
}

TEST(OneStep, RejectsAnIncompleteSet) {
  // E2's immobile point is e_1; offering e_2 leaves it blocking.
  const auto prog = testing::load_fixture("e2.json");
  EXPECT_THROW(one_step_regularize(prog, {SimplexPoint::vertex(2, 1)}), InputError);
}

TEST(NonImmobile, FlagsMovingPoints) {
  const auto prog = testing::load_fixture("e3.json");
  const auto bad = non_immobile(prog, {SimplexPoint({0.5, 0.5}), SimplexPoint::vertex(2, 0)}, {1.0}, 2.0, 50, 3);
  EXPECT_EQ(bad, std::vector<int>{1});
}

TEST(Equivalence, E2OnTheStatedBox) {
  const auto prog = testing::load_fixture("e2.json");
  const auto rp = std::get<Regularized>(reg_lcop(prog).outcome).problem;
  EquivOptions eo;
  eo.radius = 2.0;
  eo.center = std::vector<double>{0.0};
  const auto rep = feasibility_equiv_sample(prog, rp, 1000, 3, eo);
  EXPECT_EQ(rep.disagreements, 0);
  EXPECT_GT(rep.feasible, 300);
}

TEST(Equivalence, IdentityDescriptionAgrees) {
  const auto prog = testing::load_fixture("e1.json");
  const auto rp = identity_description(prog, {0.5}, 0.75);
  const auto rep = feasibility_equiv_sample(prog, rp, 200, 9);
  EXPECT_EQ(rep.disagreements, 0);
  EXPECT_EQ(rep.samples, 200);
  EXPECT_EQ(rep.agreements + rep.ties + rep.undecided, 200);
}

// A description missing its linear row admits infeasible points, and the
// sampler must notice.
TEST(Equivalence, DetectsAWrongDescription) {
  const auto prog = testing::load_fixture("e2.json");
  const auto res = reg_lcop(prog);
  auto rp = std::get<Regularized>(res.outcome).problem;
  rp.records.front().L = IndexSet::all(2);
  rp.records.front().tau = SimplexPoint::vertex(2, 1);
  const auto rep = feasibility_equiv_sample(prog, rp, 200, 4);
  EXPECT_GT(rep.disagreements, 0);
  EXPECT_FALSE(rep.disagreeing.empty());
}

// Properties of full runs on generated programs with one and two planted
// points.

struct PlantedRun {
  CopositiveProgram prog;
  Regularized reg;
};

PlantedRun planted_run(std::uint64_t seed, int p, int n, const std::vector<std::vector<double>>& pts) {
  std::vector<SimplexPoint> planted;
  for (const auto& v : pts) planted.emplace_back(v);
  auto prog = generate_instance(seed, p, n, planted);
  auto res = reg_lcop(prog);
  return {std::move(prog), std::get<Regularized>(std::move(res.outcome))};
}

const std::vector<PlantedRun>& planted_runs() {
  static const std::vector<PlantedRun> runs{
      planted_run(1, 3, 1, {{0.5, 0.5, 0}}),
      planted_run(2, 3, 2, {{1, 0, 0}}),
      planted_run(5, 4, 3, {{1, 0, 0, 0}, {0, 0.5, 0.5, 0}}),
      planted_run(10, 4, 2, {{1, 0, 0, 0}, {0, 0.5, 0.5, 0}}),
  };
  return runs;
}

int progress_measure(const std::vector<IndexRecord>& recs) {
  int s = static_cast<int>(recs.size());
  for (const auto& r : recs) s += r.L.size();
  return s;
}

TEST(RegProperty, StateGrowsStrictly) {
  for (const auto& r : planted_runs()) {
    for (const auto& e : r.reg.ledger) EXPECT_GT(progress_measure(e.face), progress_measure(e.prior));
  }
}

TEST(RegProperty, SupportInsideEqualityRows) {
  for (const auto& r : planted_runs()) {
    for (const auto& rec : r.reg.problem.records) EXPECT_TRUE(rec.tau.positive_support().is_subset_of(rec.L));
  }
}

TEST(RegProperty, DetectedPointsAreImmobile) {
  for (const auto& r : planted_runs()) {
    std::mt19937_64 rng(12);
    const auto& w = r.reg.problem.witness;
    std::uniform_real_distribution<double> u(-1, 1);
    int feasible = 0;
    for (int rep = 0; rep < 2000 && feasible < 100; ++rep) {
      // Rays from the witness, shortened until feasible or given up.
      std::vector<double> dir(w.size());
      for (auto& v : dir) v = u(rng);
      for (double s = 4.0; s > 1e-3; s *= 0.5) {
        std::vector<double> x(w.size());
        for (std::size_t j = 0; j < w.size(); ++j) x[j] = w[j] + s * dir[j];
        const auto a = eval_constraint(r.prog, x);
        if (!std::holds_alternative<Copositive>(is_copositive(a))) continue;
        ++feasible;
        for (const auto& rec : r.reg.problem.records) EXPECT_LE(std::abs(quad_form(a, rec.tau)), 1e-6);
        break;
      }
    }
    EXPECT_EQ(feasible, 100);
  }
}

TEST(RegProperty, WitnessMarginOnOmega) {
  for (const auto& r : planted_runs()) {
    const auto& rp = r.reg.problem;
    ASSERT_TRUE(rp.omega.has_value());
    EXPECT_GT(rp.margin, 0.0);
    if (rp.omega_empty) continue;
    const auto res = min_quad_over_omega(eval_constraint(r.prog, rp.witness), *rp.omega, 1.0 / 64);
    EXPECT_GT(std::get<OracleResult>(res).lower_bound(), 0.0);
  }
}

TEST(RegProperty, CoreFacesAreDistinct) {
  for (const auto& r : planted_runs()) {
    const auto c = compress_ledger(r.reg.ledger, r.prog);
    std::vector<const FaceLedgerEntry*> core;
    for (const auto& e : r.reg.ledger) {
      if (std::find(c.core.begin(), c.core.end(), e.m) != c.core.end()) core.push_back(&e);
    }
    if (core.size() < 2) continue;
    CopositiveSampler s(r.prog.p(), 44);
    std::vector<SymMatrix> pool;
    for (const auto* e : core) {
      std::vector<FaceConstraint> fc;
      for (const auto& rec : e->face) fc.push_back({rec.tau, rec.L});
      for (int j = 0; j < 40; ++j) pool.push_back(s.on_face(fc));
    }
    for (int j = 0; j < 40; ++j) pool.push_back(s.any());
    for (std::size_t a = 0; a < core.size(); ++a) {
      for (std::size_t b = a + 1; b < core.size(); ++b) {
        const bool differ = std::any_of(pool.begin(), pool.end(), [&](const SymMatrix& D) {
          return face_membership(*core[a], D) != face_membership(*core[b], D);
        });
        EXPECT_TRUE(differ);
      }
    }
  }
}

TEST(RegProperty, DescriptionsFromOneStepAndFullRunAgree) {
  for (const char* f : {"e2.json", "e3.json"}) {
    const auto prog = testing::load_fixture(f);
    const auto full = std::get<Regularized>(reg_lcop(prog).outcome).problem;
    const auto one = one_step_regularize(prog, full.W());
    const auto a = feasibility_equiv_sample(prog, full, 300, 8);
    const auto b = feasibility_equiv_sample(prog, one, 300, 8);
    EXPECT_EQ(a.disagreements, 0);
    EXPECT_EQ(b.disagreements, 0);
    EXPECT_EQ(a.feasible, b.feasible);
  }
}

}  // namespace
}  // namespace coporeg
