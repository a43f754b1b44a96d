#pragma once

// Per-robot decision policies.
//
// decide_dec_mrta: the deciding robot computes every robot's feasible task set
// from its (possibly stale) view of the world, matches robots to tasks on the
// union bigraph, and keeps only its own assignment. All robots that see the
// same world compute the same matching, so decisions are conflict free
// without any message exchange.
//
// decide_random_feasible: uniform pick from the robot's own feasible set.

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrta/domain.hpp"
#include "mrta/incentive.hpp"
#include "mrta/matching.hpp"
#include "mrta/random.hpp"

namespace mrta {

struct Action {
  enum class Kind { go_to_task, return_to_depot };

  Kind kind = Kind::return_to_depot;
  int task_id = kDepotId;

  static Action go_to(int task) { return {Kind::go_to_task, task}; }
  static Action return_to_depot() { return {}; }

  bool is_task() const { return kind == Kind::go_to_task; }

  friend bool operator==(const Action&, const Action&) = default;
};

/// Task and robot states as known to one decider at decision time. Robot
/// states are projections to the moment each robot is next free.
struct KnownWorld {
  double now = 0.0;
  std::vector<Task> tasks;
  std::vector<RobotState> robots;
};

/// Mission-wide constants a decider needs.
struct MissionContext {
  Point depot;
  IncentiveParams incentive;
  double service_time = 0.0;

  static MissionContext from(const Scenario& s) { return {s.depot, s.incentive, s.service_time}; }
};

/// Time from which a robot can start its next leg.
inline double free_time(const RobotState& r, double now) { return std::max(now, r.busy_until); }

inline const RobotState& find_robot(const KnownWorld& world, int robot_id) {
  for (const auto& r : world.robots)
    if (r.id == robot_id) return r;
  throw std::invalid_argument("robot " + std::to_string(robot_id) + " is not part of the known world");
}

inline std::vector<FeasibleTask> feasible_for(const KnownWorld& world, const RobotState& robot,
                                              const MissionContext& ctx) {
  if (robot.payload <= 0) return {};
  return feasible_tasks(world.tasks, robot, free_time(robot, world.now), ctx.incentive, ctx.depot, ctx.service_time);
}

inline Action decide_dec_mrta(int robot_id, const KnownWorld& world, const MissionContext& ctx) {
  const RobotState& self = find_robot(world, robot_id);
  if (self.payload <= 0) return Action::return_to_depot();

  // Only active tasks can enter any feasible set; filter once.
  KnownWorld active{world.now, {}, {}};
  for (const auto& t : world.tasks)
    if (t.phase == TaskPhase::active) active.tasks.push_back(t);

  if (feasible_for(active, self, ctx).empty()) return Action::return_to_depot();

  std::vector<RobotFeasibility> per_robot;
  per_robot.reserve(world.robots.size());
  for (const auto& r : world.robots) per_robot.push_back({{r.id, r.label}, feasible_for(active, r, ctx)});

  const Matching m = max_weight_matching(construct_bigraph(per_robot));
  if (auto task = m.task_for(robot_id)) return Action::go_to(*task);
  return Action::return_to_depot();
}

inline Action decide_random_feasible(int robot_id, const KnownWorld& world, const MissionContext& ctx, Rng& rng) {
  const RobotState& self = find_robot(world, robot_id);
  const auto options = feasible_for(world, self, ctx);
  if (options.empty()) return Action::return_to_depot();
  return Action::go_to(options[rng.index(options.size())].task_id);
}

}  // namespace mrta
