#pragma once

// Robot incentive model and the weighted robot/task bigraph built from it.
//
// A robot r that is free at time `now` can take task i next. Its incentive is
//
//   w = max(0, range_after - epsilon) * exp(-finish_time / alpha)   if finish_time <= deadline
//   w = 0                                                            otherwise
//
// where range_after = remaining_range - (d(r, i) + d(i, depot)) is the range
// left once the robot has served i and flown home, and finish_time is the
// global (mission-clock) time at which i would be served.

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mrta/domain.hpp"

namespace mrta {

inline double post_task_range(const RobotState& robot, const Task& task, const Point& depot) {
  return robot.remaining_range - (distance(robot.location, task.location) + distance(task.location, depot));
}

/// Mission-clock time at which `robot`, free at `now`, finishes `task`.
inline double completion_time(const RobotState& robot, const Task& task, double now, double service_time = 0.0) {
  return now + travel_time(distance(robot.location, task.location), robot.speed) + service_time;
}

inline double incentive_weight(double range_after, double finish_time, double deadline, const IncentiveParams& p) {
  if (finish_time > deadline) return 0.0;
  return std::max(0.0, range_after - p.epsilon) * std::exp(-finish_time / p.alpha);
}

inline double edge_weight(const RobotState& robot, const Task& task, double now, const IncentiveParams& p,
                          const Point& depot, double service_time = 0.0) {
  return incentive_weight(post_task_range(robot, task, depot), completion_time(robot, task, now, service_time),
                          task.deadline, p);
}

struct FeasibleTask {
  int task_id = 0;
  double completion_time = 0.0;
  double post_range = 0.0;
  double weight = 0.0;

  friend bool operator==(const FeasibleTask&, const FeasibleTask&) = default;
};

/// Tasks that `robot` (free at `now`) can finish before their deadline while
/// keeping at least `epsilon` of range for the flight home. Only tasks in the
/// `active` phase are considered. Entries whose weight comes out as zero
/// (range_after == epsilon exactly) are dropped so that every edge carries a
/// strictly positive incentive. Output is in input order.
inline std::vector<FeasibleTask> feasible_tasks(std::span<const Task> tasks, const RobotState& robot, double now,
                                                const IncentiveParams& p, const Point& depot,
                                                double service_time = 0.0) {
  std::vector<FeasibleTask> out;
  for (const auto& task : tasks) {
    if (task.phase != TaskPhase::active) continue;
    const double finish = completion_time(robot, task, now, service_time);
    const double range_after = post_task_range(robot, task, depot);
    if (finish > task.deadline || range_after < p.epsilon) continue;
    const double w = incentive_weight(range_after, finish, task.deadline, p);
    if (!(w > 0.0)) continue;
    out.push_back({task.id, finish, range_after, w});
  }
  return out;
}

struct RobotVertex {
  int id = 0;
  int label = 0;

  friend bool operator==(const RobotVertex&, const RobotVertex&) = default;
};

struct BigraphEdge {
  int robot = 0;  // robot id
  int task = 0;   // task id
  double weight = 0.0;

  friend bool operator==(const BigraphEdge&, const BigraphEdge&) = default;
};

/// Robots on one side, tasks on the other, positive-weight edges across.
/// Robot vertices are kept sorted by label and task vertices by id.
class WeightedBigraph {
public:
  void add_robot(RobotVertex r) {
    if (labels_.contains(r.id)) throw std::invalid_argument("duplicate robot vertex " + std::to_string(r.id));
    for (const auto& existing : robots_)
      if (existing.label == r.label) throw std::invalid_argument("duplicate robot label " + std::to_string(r.label));
    robots_.insert(std::upper_bound(robots_.begin(), robots_.end(), r,
                                    [](const RobotVertex& a, const RobotVertex& b) { return a.label < b.label; }),
                   r);
    labels_.emplace(r.id, r.label);
  }

  void add_task(int task_id) {
    auto it = std::lower_bound(tasks_.begin(), tasks_.end(), task_id);
    if (it == tasks_.end() || *it != task_id) tasks_.insert(it, task_id);
  }

  /// Adds the task vertex on demand. Rejects non-positive weights, unknown
  /// robots and parallel edges.
  void add_edge(int robot_id, int task_id, double weight) {
    if (!(weight > 0.0) || !std::isfinite(weight))
      throw std::invalid_argument("bigraph edge weights must be positive and finite");
    if (!has_robot(robot_id)) throw std::invalid_argument("edge references unknown robot " + std::to_string(robot_id));
    if (!keys_.emplace(robot_id, task_id).second) throw std::invalid_argument("parallel edge");
    add_task(task_id);
    edges_.push_back({robot_id, task_id, weight});
  }

  bool has_robot(int robot_id) const { return labels_.contains(robot_id); }

  const std::vector<RobotVertex>& robots() const { return robots_; }
  const std::vector<int>& tasks() const { return tasks_; }
  const std::vector<BigraphEdge>& edges() const { return edges_; }

  /// Returns the weight of edge (robot, task), or 0 when absent.
  double weight(int robot_id, int task_id) const {
    for (const auto& e : edges_)
      if (e.robot == robot_id && e.task == task_id) return e.weight;
    return 0.0;
  }

  int label_of(int robot_id) const {
    auto it = labels_.find(robot_id);
    if (it == labels_.end()) throw std::invalid_argument("unknown robot " + std::to_string(robot_id));
    return it->second;
  }

private:
  std::vector<RobotVertex> robots_;
  std::vector<int> tasks_;
  std::vector<BigraphEdge> edges_;
  std::unordered_map<int, int> labels_;  // robot id -> label
  std::set<std::pair<int, int>> keys_;
};

struct RobotFeasibility {
  RobotVertex robot;
  std::vector<FeasibleTask> tasks;
};

/// Union bigraph: every robot becomes a vertex, the task side is the union of
/// all feasible sets, and (r, i) is an edge iff i is feasible for r.
inline WeightedBigraph construct_bigraph(std::span<const RobotFeasibility> per_robot) {
  WeightedBigraph g;
  for (const auto& entry : per_robot) g.add_robot(entry.robot);
  for (const auto& entry : per_robot)
    for (const auto& f : entry.tasks) g.add_edge(entry.robot.id, f.task_id, f.weight);
  return g;
}

}  // namespace mrta
