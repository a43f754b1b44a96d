#pragma once

// Core value types shared by the allocator, the ILP model and the simulator.
// Units: kilometres for length, minutes for time, km/min for speed.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrta/error.hpp"

namespace mrta {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Node id used for the depot wherever a task id is expected.
inline constexpr int kDepotId = 0;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Euclidean distance in the mission plane.
inline double distance(const Point& a, const Point& b) { return std::hypot(b.x - a.x, b.y - a.y); }

inline double travel_time(double length, double speed) {
  if (!(speed > 0.0)) throw InvalidParameter("travel speed must be positive, got " + std::to_string(speed));
  return length / speed;
}

enum class TaskPhase { pending, active, committed, completed, expired };

inline const char* to_string(TaskPhase p) {
  switch (p) {
    case TaskPhase::pending: return "pending";
    case TaskPhase::active: return "active";
    case TaskPhase::committed: return "committed";
    case TaskPhase::completed: return "completed";
    case TaskPhase::expired: return "expired";
  }
  return "?";
}

/// A survival-kit delivery demand.
struct Task {
  int id = 0;
  Point location;
  double deadline = 0.0;      // absolute, minutes from mission start
  double arrival_time = 0.0;  // 0 for tasks known at mission start
  bool reachable = true;      // derived: a depot round trip fits in the range budget

  TaskPhase phase = TaskPhase::pending;
  int committed_robot = 0;  // valid while phase == committed (and kept after completion)
  double completed_at = 0.0;

  friend bool operator==(const Task&, const Task&) = default;
};

inline bool transition_allowed(TaskPhase from, TaskPhase to) {
  switch (to) {
    case TaskPhase::active: return from == TaskPhase::pending;
    case TaskPhase::committed: return from == TaskPhase::active;
    case TaskPhase::completed: return from == TaskPhase::committed;
    case TaskPhase::expired: return from == TaskPhase::active || from == TaskPhase::committed;
    case TaskPhase::pending: return false;
  }
  return false;
}

/// Moves a task along its lifecycle; throws std::logic_error on an illegal edge
/// or on a completion that misses the deadline.
inline void advance(Task& task, TaskPhase to, double now, int robot = 0) {
  if (!transition_allowed(task.phase, to)) {
    throw std::logic_error("task " + std::to_string(task.id) + ": illegal transition " + to_string(task.phase) +
                           " -> " + to_string(to));
  }
  if (to == TaskPhase::committed) task.committed_robot = robot;
  if (to == TaskPhase::completed) {
    if (now > task.deadline + 1e-9) {
      throw std::logic_error("task " + std::to_string(task.id) + " completed after its deadline");
    }
    task.completed_at = now;
    task.committed_robot = robot;
  }
  task.phase = to;
}

/// A UAV's state as of the moment it becomes free for its next leg: location,
/// range and payload already account for every leg it has committed to, and
/// `busy_until` is the time it finishes them.
struct RobotState {
  int id = 0;
  int label = 0;
  Point location;
  double remaining_range = 0.0;
  int payload = 0;
  double speed = 1.0;
  double busy_until = 0.0;
  std::optional<int> commitment;  // task id, kDepotId, or nothing when idle

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

struct IncentiveParams {
  double alpha = 10.0;   // time scaling constant (min)
  double epsilon = 0.0;  // range margin (km)

  friend bool operator==(const IncentiveParams&, const IncentiveParams&) = default;
};

/// Defaults used when a scenario omits the incentive block.
inline IncentiveParams default_incentive(double max_range) { return {10.0, 0.05 * max_range}; }

struct Scenario {
  Point depot;
  std::vector<Task> tasks;
  int num_robots = 1;
  double robot_speed = 1.0;
  double max_range = 1.0;
  int payload_capacity = 1;
  int max_tours = 1;
  IncentiveParams incentive;
  double service_time = 0.0;     // spent at each task site
  double turnaround_time = 0.0;  // reload time at the depot between tours
  std::vector<int> labels;       // optional; empty means "draw at mission start"

  friend bool operator==(const Scenario&, const Scenario&) = default;

  const Task* find_task(int id) const {
    for (const auto& t : tasks)
      if (t.id == id) return &t;
    return nullptr;
  }
};

inline bool round_trip_fits(const Point& depot, const Point& site, double max_range) {
  return 2.0 * distance(depot, site) <= max_range + 1e-12;
}

/// Freshly provisioned robot at the depot.
inline RobotState robot_at_depot(const Scenario& s, int id, int label, double now = 0.0) {
  RobotState r;
  r.id = id;
  r.label = label;
  r.location = s.depot;
  r.remaining_range = s.max_range;
  r.payload = s.payload_capacity;
  r.speed = s.robot_speed;
  r.busy_until = now;
  return r;
}

}  // namespace mrta
