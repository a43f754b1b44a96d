#include <gtest/gtest.h>

#include <cmath>

#include "mrta/incentive.hpp"

using namespace mrta;

namespace {

RobotState robot_at(Point p, double range, int id = 1) {
  RobotState r;
  r.id = id;
  r.label = id;
  r.location = p;
  r.remaining_range = range;
  r.payload = 3;
  r.speed = 1.0;
  return r;
}

Task active_task(int id, Point p, double deadline) {
  Task t;
  t.id = id;
  t.location = p;
  t.deadline = deadline;
  t.phase = TaskPhase::active;
  return t;
}

}  // namespace

TEST(PostTaskRange, HandEvaluated) {
  // Robot 3 km from the task, task 2 km from the depot.
  const Point depot{0, 0};
  const Task t = active_task(1, {2, 0}, 100);
  EXPECT_DOUBLE_EQ(post_task_range(robot_at({5, 0}, 10), t, depot), 5.0);
  EXPECT_DOUBLE_EQ(post_task_range(robot_at({5, 0}, 4), t, depot), -1.0);
  EXPECT_DOUBLE_EQ(post_task_range(robot_at(depot, 7), active_task(2, depot, 100), depot), 7.0);
}

TEST(CompletionTime, HandEvaluated) {
  const Task t = active_task(1, {6, 0}, 100);
  EXPECT_DOUBLE_EQ(completion_time(robot_at({0, 0}, 30), t, 0.0), 6.0);
  EXPECT_DOUBLE_EQ(completion_time(robot_at({6, 0}, 30), t, 4.0), 4.0);
  RobotState slow = robot_at({1, 0}, 30);
  slow.speed = 0.5;
  EXPECT_DOUBLE_EQ(completion_time(slow, active_task(2, {6, 0}, 100), 10.0, 2.0), 22.0);
}

TEST(IncentiveWeight, HandEvaluated) {
  const IncentiveParams p{10.0, 0.5};
  EXPECT_NEAR(incentive_weight(5.0, 5.0, 10.0, p), 4.5 * std::exp(-0.5), 1e-12);
  EXPECT_NEAR(incentive_weight(5.0, 5.0, 10.0, p), 2.72938, 1e-5);
  EXPECT_EQ(incentive_weight(5.0, 11.0, 10.0, p), 0.0);
  EXPECT_EQ(incentive_weight(0.5, 1.0, 10.0, p), 0.0);
  EXPECT_EQ(incentive_weight(0.1, 1.0, 10.0, p), 0.0);
}

TEST(FeasibleTasks, EmptyInput) {
  EXPECT_TRUE(feasible_tasks({}, robot_at({0, 0}, 10), 0, {10, 0.5}, {0, 0}).empty());
}

TEST(FeasibleTasks, RangeFailureRejected) {
  // Round trip of 12 km against 10 km of range; deadline is generous.
  const std::vector<Task> tasks{active_task(1, {6, 0}, 100)};
  EXPECT_TRUE(feasible_tasks(tasks, robot_at({0, 0}, 10), 0, {10, 0.5}, {0, 0}).empty());
}

TEST(FeasibleTasks, DeadlineFailureRejected) {
  const std::vector<Task> tasks{active_task(1, {3, 4}, 30), active_task(2, {0, 2}, 1)};
  const auto out = feasible_tasks(tasks, robot_at({0, 0}, 20), 0, {10, 0.5}, {0, 0});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].task_id, 1);
  EXPECT_DOUBLE_EQ(out[0].completion_time, 5.0);
  EXPECT_DOUBLE_EQ(out[0].post_range, 10.0);
  EXPECT_NEAR(out[0].weight, 9.5 * std::exp(-0.5), 1e-12);
}

TEST(FeasibleTasks, OnlyActiveTasksConsidered) {
  std::vector<Task> tasks{active_task(1, {1, 0}, 30), active_task(2, {2, 0}, 30), active_task(3, {3, 0}, 30)};
  tasks[0].phase = TaskPhase::committed;
  tasks[1].phase = TaskPhase::pending;
  const auto out = feasible_tasks(tasks, robot_at({0, 0}, 20), 0, {10, 0.5}, {0, 0});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].task_id, 3);
}

TEST(FeasibleTasks, ZeroMarginExcluded) {
  // range_after == epsilon exactly.
  const std::vector<Task> tasks{active_task(1, {2, 0}, 30)};
  EXPECT_TRUE(feasible_tasks(tasks, robot_at({0, 0}, 4.5), 0, {10, 0.5}, {0, 0}).empty());
}

TEST(ConstructBigraph, AllEmpty) {
  const std::vector<RobotFeasibility> in{{{1, 1}, {}}, {{2, 2}, {}}};
  const WeightedBigraph g = construct_bigraph(in);
  EXPECT_EQ(g.robots().size(), 2u);
  EXPECT_TRUE(g.tasks().empty());
  EXPECT_TRUE(g.edges().empty());
}

TEST(ConstructBigraph, SharedTask) {
  const std::vector<RobotFeasibility> in{{{1, 1}, {{7, 1, 1, 2.0}}}, {{2, 2}, {{7, 1, 1, 3.0}}}};
  const WeightedBigraph g = construct_bigraph(in);
  EXPECT_EQ(g.tasks(), std::vector<int>{7});
  EXPECT_EQ(g.edges().size(), 2u);
  EXPECT_DOUBLE_EQ(g.weight(2, 7), 3.0);
}

TEST(ConstructBigraph, DisjointSets) {
  const std::vector<RobotFeasibility> in{{{1, 2}, {{4, 1, 1, 1.0}, {5, 1, 1, 1.0}}}, {{2, 1}, {{6, 1, 1, 1.0}}}};
  const WeightedBigraph g = construct_bigraph(in);
  EXPECT_EQ(g.tasks().size(), 3u);
  EXPECT_EQ(g.edges().size(), 3u);
  // Robot vertices ordered by label.
  EXPECT_EQ(g.robots().front().id, 2);
}

TEST(WeightedBigraph, RejectsMalformedInput) {
  WeightedBigraph g;
  g.add_robot({1, 1});
  EXPECT_THROW(g.add_robot({1, 2}), std::invalid_argument);
  EXPECT_THROW(g.add_robot({2, 1}), std::invalid_argument);
  EXPECT_THROW(g.add_edge(1, 1, 0.0), std::invalid_argument);
  EXPECT_THROW(g.add_edge(3, 1, 1.0), std::invalid_argument);
  g.add_edge(1, 1, 1.0);
  EXPECT_THROW(g.add_edge(1, 1, 2.0), std::invalid_argument);
}
