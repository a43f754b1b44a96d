#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mrta/ilp.hpp"

using namespace mrta;
using namespace mrta::ilp;
using mrta::fixtures::add_task;
using mrta::fixtures::base_scenario;
using mrta::fixtures::make_task;

namespace {

RoutePlan plan_of(std::vector<std::vector<std::vector<int>>> robots) { return RoutePlan{std::move(robots)}; }

}  // namespace

TEST(BuildInstance, NoTasks) {
  const Instance inst = build_instance(base_scenario(1, 10, 1, 1));
  EXPECT_EQ(inst.dist.size(), 2u);
  EXPECT_EQ(inst.dist(0, 1), 0.0);
  EXPECT_EQ(inst.time(1, 0), 0.0);
}

TEST(BuildInstance, HandDistances) {
  Scenario s = base_scenario(1, 30, 2, 1);
  add_task(s, make_task(1, {3, 4}, 50));
  add_task(s, make_task(2, {6, 8}, 50));
  const Instance inst = build_instance(s);
  EXPECT_DOUBLE_EQ(inst.dist(0, 1), 5);
  EXPECT_DOUBLE_EQ(inst.dist(0, 2), 10);
  EXPECT_DOUBLE_EQ(inst.dist(1, 2), 5);
  EXPECT_DOUBLE_EQ(inst.dist(1, 3), 5);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(inst.time(i, j), inst.dist(i, j));
}

TEST(ObjectiveValue, HandEvaluated) {
  EXPECT_EQ(objective_value(RoutePlan::empty(2, 2)), 0.0);
  EXPECT_DOUBLE_EQ(objective_value(plan_of({{{1, 2}, {3}}})), 2.5);
  EXPECT_DOUBLE_EQ(objective_value(plan_of({{{1}, {}}, {{2}, {}}})), 2.0);
}

TEST(CheckConstraints, EmptyPlanFeasible) {
  Scenario s = base_scenario(2, 10, 1, 2);
  add_task(s, make_task(1, {1, 0}, 10));
  EXPECT_TRUE(check_constraints(RoutePlan::empty(2, 2), build_instance(s)).feasible());
}

TEST(CheckConstraints, CapacityViolation) {
  Scenario s = base_scenario(1, 100, 3, 1);
  for (int i = 1; i <= 4; ++i) add_task(s, make_task(i, {static_cast<double>(i), 0}, 100));
  const auto report = check_constraints(plan_of({{{1, 2, 3, 4}}}), build_instance(s));
  EXPECT_EQ(report.violations.size(), 1u);
  ASSERT_EQ(report.count(Family::payload_capacity), 1);
  EXPECT_EQ(report.violations[0].lhs, 4);
  EXPECT_EQ(report.violations[0].rhs, 3);
}

TEST(CheckConstraints, RangeViolation) {
  // 0 -> (5,0) -> (7.5,0) -> 0 is 5 + 2.5 + 7.5 = 15 km.
  Scenario s = base_scenario(1, 12, 3, 1);
  add_task(s, make_task(1, {5, 0}, 100));
  add_task(s, make_task(2, {7.5, 0}, 100));
  const auto report = check_constraints(plan_of({{{1, 2}}}), build_instance(s));
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].family, Family::range_limit);
  EXPECT_DOUBLE_EQ(report.violations[0].lhs, 15);
  EXPECT_DOUBLE_EQ(report.violations[0].rhs, 12);
}

TEST(CheckConstraints, DuplicateServiceFlagged) {
  Scenario s = base_scenario(2, 30, 2, 1);
  add_task(s, make_task(1, {1, 0}, 100));
  const auto report = check_constraints(plan_of({{{1}}, {{1}}}), build_instance(s));
  EXPECT_EQ(report.count(Family::one_robot_per_task), 1);
}

TEST(CheckConstraints, RepeatedVisitInOneTour) {
  Scenario s = base_scenario(1, 30, 3, 1);
  add_task(s, make_task(1, {1, 0}, 100));
  add_task(s, make_task(2, {2, 0}, 100));
  const auto report = check_constraints(plan_of({{{1, 2, 1}}}), build_instance(s));
  EXPECT_FALSE(report.feasible());
  EXPECT_GE(report.count(Family::visit_arc_consistency), 1);
  EXPECT_GE(report.count(Family::subtour_elimination), 1);
}

TEST(CheckConstraints, DeadlineUsesWholeSchedule) {
  // The second tour starts after the first returns at t=10.
  Scenario s = base_scenario(1, 30, 1, 2);
  add_task(s, make_task(1, {5, 0}, 100));
  add_task(s, make_task(2, {0, 3}, 12));
  const Instance inst = build_instance(s);
  EXPECT_EQ(check_constraints(plan_of({{{1}, {2}}}), inst).count(Family::deadline), 1);
  EXPECT_TRUE(check_constraints(plan_of({{{2}, {1}}}), inst).feasible());
}

TEST(CheckConstraints, UnknownTaskAndTooManyTours) {
  Scenario s = base_scenario(1, 30, 1, 1);
  add_task(s, make_task(1, {1, 0}, 100));
  const auto report = check_constraints(plan_of({{{9}, {1}}}), build_instance(s));
  EXPECT_EQ(report.count(Family::structure), 2);
}

TEST(LiteralDeadlineLinking, FlagsOnTimeSecondTour) {
  Scenario s = base_scenario(1, 30, 1, 2);
  add_task(s, make_task(1, {5, 0}, 100));
  add_task(s, make_task(2, {0, 3}, 30));
  const Instance inst = build_instance(s);
  const RoutePlan p = plan_of({{{1}, {2}}});
  EXPECT_TRUE(check_constraints(p, inst).feasible());
  const auto literal = literal_deadline_linking(p, inst);
  ASSERT_EQ(literal.size(), 1u);
  EXPECT_DOUBLE_EQ(literal[0].lhs, 10);
  EXPECT_DOUBLE_EQ(literal[0].rhs, 30);
}

TEST(SolveExact, NoTasks) {
  const SolveResult r = solve_exact(build_instance(base_scenario(2, 10, 1, 2)));
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(r.objective, 0.0);
  EXPECT_EQ(r.plan.served_count(), 0);
}

TEST(SolveExact, SingleTask) {
  Scenario s = base_scenario(1, 30, 1, 1);
  add_task(s, make_task(1, {3, 4}, 30));
  const SolveResult r = solve_exact(build_instance(s));
  EXPECT_DOUBLE_EQ(r.objective, 1.0);
  EXPECT_EQ(r.plan, plan_of({{{1}}}));
}

TEST(SolveExact, TwoToursWithUnitCapacity) {
  Scenario s = base_scenario(1, 30, 1, 2);
  add_task(s, make_task(1, {3, 4}, 100));
  add_task(s, make_task(2, {-3, 4}, 100));
  const Instance inst = build_instance(s);
  const SolveResult r = solve_exact(inst);
  EXPECT_DOUBLE_EQ(r.objective, 1.5);
  EXPECT_EQ(r.plan.served_count(), 2);
  EXPECT_DOUBLE_EQ(enumerate_oracle(inst).objective, 1.5);
}

TEST(SolveExact, UnmeetableDeadlineLeftOut) {
  Scenario s = base_scenario(1, 30, 2, 1);
  add_task(s, make_task(1, {3, 4}, 100));
  add_task(s, make_task(2, {6, 8}, 5));
  const SolveResult r = solve_exact(build_instance(s));
  EXPECT_DOUBLE_EQ(r.objective, 1.0);
  EXPECT_EQ(r.plan, plan_of({{{1}}}));
}

TEST(SolveExact, RefusesOversizedInstance) {
  Scenario s = base_scenario(1, 30, 2, 1);
  for (int i = 1; i <= 64; ++i) add_task(s, make_task(i, {1, 0}, 100));
  EXPECT_THROW(solve_exact(build_instance(s)), RefusalError);
}

TEST(SolveExact, MatchesOracleOnRandomInstances) {
  Rng rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = build_instance(mrta::fixtures::random_ilp_scenario(rng));
    const SolveResult exact = solve_exact(inst);
    const OracleResult oracle = enumerate_oracle(inst);
    ASSERT_TRUE(exact.optimal);
    ASSERT_DOUBLE_EQ(exact.objective, oracle.objective) << "trial " << trial;
    ASSERT_TRUE(check_constraints(exact.plan, inst).feasible()) << "trial " << trial;
    ASSERT_DOUBLE_EQ(objective_value(exact.plan), exact.objective);
  }
}

TEST(EnumerateOracle, NoTasksAndRefusal) {
  EXPECT_EQ(enumerate_oracle(build_instance(base_scenario(2, 10, 1, 2))).objective, 0.0);
  Scenario s = base_scenario(3, 30, 3, 3);
  for (int i = 1; i <= 8; ++i) add_task(s, make_task(i, {1, 0}, 100));
  EXPECT_THROW(enumerate_oracle(build_instance(s)), RefusalError);
}

TEST(PlanDocument, RoundTrip) {
  const RoutePlan p = plan_of({{{1, 2}, {3}}, {{}, {}}});
  EXPECT_EQ(load_plan(serialize_plan(p)), p);
  EXPECT_THROW(load_plan("{\"robots\": 3}"), LoadError);
  EXPECT_THROW(load_plan("[]"), LoadError);
}
