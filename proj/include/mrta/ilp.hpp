#pragma once

// Centralized multi-tour routing model.
//
// Node 0 is the depot a tour leaves from, nodes 1..n are tasks and node n+1 is
// the depot a tour returns to. A plan gives every robot up to h tours, each an
// ordered list of task ids. Binary variables of the integer program are
// implied by the plan:
//   y[r][s][i] = 1  iff task i is served in tour s of robot r,
//   x[r][s][i][j] = 1 iff that tour flies i -> j (an empty tour is the arc 0 -> n+1).
//
// Objective: sum over tours s of (1/s) * (tasks served in tour s), which rewards
// serving tasks in early tours.
//
// Feasibility is reported per constraint family:
//   visit-arc-consistency  every served task has exactly one outgoing arc
//   flow-balance           arcs into a task equal arcs out of it
//   depot-departure        every tour leaves the depot exactly once
//   subtour-elimination    arcs in a tour <= tasks in the tour + 1
//   one-robot-per-task     a task is served at most once overall
//   arc-once               a task-to-task arc is used at most once overall
//   payload-capacity       tasks per tour <= Q
//   range-limit            tour length <= range budget
//   deadline               chronological completion time <= task deadline
// plus two bookkeeping families: structure (unknown ids, too many robots or
// tours) and fixed-zero (self-loop arcs).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "mrta/domain.hpp"
#include "mrta/error.hpp"

namespace mrta::ilp {

class Matrix {
public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::size_t size() const { return n_; }

private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct Instance {
  int robots = 1;
  int max_tours = 1;
  int capacity = 1;
  double max_range = 0.0;
  double speed = 1.0;
  double service_time = 0.0;
  double turnaround_time = 0.0;
  std::vector<int> task_ids;     // node k (1..n) serves task_ids[k - 1]
  std::vector<double> deadline;  // by node; +inf for both depot copies
  Matrix dist;                   // km, nodes 0..n+1
  Matrix time;                   // min, dist / speed

  int n() const { return static_cast<int>(task_ids.size()); }
  int end_node() const { return n() + 1; }

  /// Node index of a task id, or -1.
  int node_of(int task_id) const {
    auto it = std::find(task_ids.begin(), task_ids.end(), task_id);
    return it == task_ids.end() ? -1 : static_cast<int>(it - task_ids.begin()) + 1;
  }
};

/// Builds distance/time matrices over {depot-out, tasks..., depot-in}. Task
/// arrival times are ignored: the centralized model plans with full knowledge.
inline Instance build_instance(const Scenario& s) {
  Instance inst;
  inst.robots = s.num_robots;
  inst.max_tours = s.max_tours;
  inst.capacity = s.payload_capacity;
  inst.max_range = s.max_range;
  inst.speed = s.robot_speed;
  inst.service_time = s.service_time;
  inst.turnaround_time = s.turnaround_time;
  std::vector<Point> where{s.depot};
  inst.deadline.push_back(kInfinity);
  for (const auto& t : s.tasks) {
    inst.task_ids.push_back(t.id);
    where.push_back(t.location);
    inst.deadline.push_back(t.deadline);
  }
  where.push_back(s.depot);
  inst.deadline.push_back(kInfinity);

  const std::size_t size = where.size();
  inst.dist = Matrix(size);
  inst.time = Matrix(size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      inst.dist(i, j) = distance(where[i], where[j]);
      inst.time(i, j) = travel_time(inst.dist(i, j), s.robot_speed);
    }
  }
  return inst;
}

/// plan.robots[r][s] is tour s+1 of robot r+1, as task ids in visiting order.
struct RoutePlan {
  std::vector<std::vector<std::vector<int>>> robots;

  static RoutePlan empty(int robots, int tours) {
    RoutePlan p;
    p.robots.assign(static_cast<std::size_t>(robots), std::vector<std::vector<int>>(static_cast<std::size_t>(tours)));
    return p;
  }

  int served_count() const {
    int n = 0;
    for (const auto& r : robots)
      for (const auto& tour : r) n += static_cast<int>(tour.size());
    return n;
  }

  /// Flat encoding used for deterministic tie-breaks: ids with 0 closing each tour.
  std::vector<int> encoding() const {
    std::vector<int> out;
    for (const auto& r : robots)
      for (const auto& tour : r) {
        out.insert(out.end(), tour.begin(), tour.end());
        out.push_back(0);
      }
    return out;
  }

  friend bool operator==(const RoutePlan&, const RoutePlan&) = default;
};

inline double objective_value(const RoutePlan& plan) {
  double total = 0.0;
  for (const auto& r : plan.robots)
    for (std::size_t s = 0; s < r.size(); ++s) total += static_cast<double>(r[s].size()) / static_cast<double>(s + 1);
  return total;
}

enum class Family {
  structure,
  fixed_zero,
  visit_arc_consistency,
  flow_balance,
  depot_departure,
  subtour_elimination,
  one_robot_per_task,
  arc_once,
  payload_capacity,
  range_limit,
  deadline,
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::structure: return "structure";
    case Family::fixed_zero: return "fixed-zero";
    case Family::visit_arc_consistency: return "visit-arc-consistency";
    case Family::flow_balance: return "flow-balance";
    case Family::depot_departure: return "depot-departure";
    case Family::subtour_elimination: return "subtour-elimination";
    case Family::one_robot_per_task: return "one-robot-per-task";
    case Family::arc_once: return "arc-once";
    case Family::payload_capacity: return "payload-capacity";
    case Family::range_limit: return "range-limit";
    case Family::deadline: return "deadline";
  }
  return "?";
}

/// One violated inequality. Indices are 1-based robot/tour numbers and task
/// ids; 0 marks an index that does not apply.
struct Violation {
  Family family = Family::structure;
  int robot = 0;
  int tour = 0;
  int i = 0;
  int j = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
};

struct ConstraintReport {
  std::vector<Violation> violations;

  bool feasible() const { return violations.empty(); }
  int count(Family f) const {
    return static_cast<int>(std::count_if(violations.begin(), violations.end(),
                                          [f](const Violation& v) { return v.family == f; }));
  }
};

inline constexpr double kFeasibilityTolerance = 1e-9;

inline ConstraintReport check_constraints(const RoutePlan& plan, const Instance& inst) {
  ConstraintReport report;
  auto flag = [&](Family f, int r, int s, int i, int j, double lhs, double rhs, std::string detail) {
    report.violations.push_back({f, r, s, i, j, lhs, rhs, std::move(detail)});
  };

  const int n = inst.n();
  const int end = inst.end_node();
  auto id_of = [&](int node) { return node >= 1 && node <= n ? inst.task_ids[static_cast<std::size_t>(node - 1)] : 0; };

  if (static_cast<int>(plan.robots.size()) > inst.robots)
    flag(Family::structure, 0, 0, 0, 0, static_cast<double>(plan.robots.size()), inst.robots, "more robots than available");

  std::map<int, int> served_total;                 // node -> tours serving it
  std::map<std::pair<int, int>, int> arc_total;    // task-task arcs over all robots and tours

  for (std::size_t ri = 0; ri < plan.robots.size(); ++ri) {
    const int r = static_cast<int>(ri) + 1;
    const auto& tours = plan.robots[ri];
    if (static_cast<int>(tours.size()) > inst.max_tours)
      flag(Family::structure, r, 0, 0, 0, static_cast<double>(tours.size()), inst.max_tours, "more tours than allowed");

    double clock = 0.0;
    for (std::size_t si = 0; si < tours.size(); ++si) {
      const int s = static_cast<int>(si) + 1;
      std::vector<int> route{0};
      for (int id : tours[si]) {
        const int node = inst.node_of(id);
        if (node < 0) {
          flag(Family::structure, r, s, id, 0, 0, 0, "unknown task id " + std::to_string(id));
          continue;
        }
        route.push_back(node);
      }
      route.push_back(end);

      std::map<std::pair<int, int>, int> x;
      for (std::size_t k = 0; k + 1 < route.size(); ++k) ++x[{route[k], route[k + 1]}];
      std::map<int, int> out_deg, in_deg;
      for (const auto& [arc, c] : x) {
        out_deg[arc.first] += c;
        in_deg[arc.second] += c;
      }
      std::vector<int> y;  // distinct served nodes
      for (std::size_t k = 1; k + 1 < route.size(); ++k)
        if (std::find(y.begin(), y.end(), route[k]) == y.end()) y.push_back(route[k]);

      for (const auto& [arc, c] : x) {
        if (arc.first == arc.second || arc.second == 0 || (arc.first == end && arc.second == 0))
          flag(Family::fixed_zero, r, s, id_of(arc.first), id_of(arc.second), c, 0, "arc variable fixed at zero");
      }
      for (int node : y) {
        if (out_deg[node] != 1)
          flag(Family::visit_arc_consistency, r, s, id_of(node), 0, out_deg[node], 1, "outgoing arcs != visit");
        if (in_deg[node] != out_deg[node])
          flag(Family::flow_balance, r, s, id_of(node), 0, in_deg[node] - out_deg[node], 0, "inflow != outflow");
        ++served_total[node];
      }
      if (out_deg[0] != 1) flag(Family::depot_departure, r, s, 0, 0, out_deg[0], 1, "depot departures != 1");

      const double arcs = static_cast<double>(route.size() - 1);
      if (arcs > static_cast<double>(y.size()) + 1)
        flag(Family::subtour_elimination, r, s, 0, 0, arcs, static_cast<double>(y.size()) + 1, "too many arcs");

      if (static_cast<int>(y.size()) > inst.capacity)
        flag(Family::payload_capacity, r, s, 0, 0, static_cast<double>(y.size()), inst.capacity, "tour over capacity");

      double length = 0.0;
      for (std::size_t k = 0; k + 1 < route.size(); ++k)
        length += inst.dist(static_cast<std::size_t>(route[k]), static_cast<std::size_t>(route[k + 1]));
      if (length > inst.max_range + kFeasibilityTolerance)
        flag(Family::range_limit, r, s, 0, 0, length, inst.max_range, "tour longer than range");

      for (std::size_t k = 0; k + 1 < route.size(); ++k) {
        const int i = route[k], j = route[k + 1];
        clock += inst.time(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (j >= 1 && j <= n) {
          clock += inst.service_time;
          const double due = inst.deadline[static_cast<std::size_t>(j)];
          if (clock > due + kFeasibilityTolerance)
            flag(Family::deadline, r, s, id_of(j), 0, clock, due, "served after deadline");
        }
        if (i >= 1 && i <= n && j >= 1 && j <= n) ++arc_total[{i, j}];
      }
      if (!tours[si].empty()) clock += inst.turnaround_time;
    }
  }

  for (const auto& [node, c] : served_total)
    if (c > 1) flag(Family::one_robot_per_task, 0, 0, id_of(node), 0, c, 1, "task served more than once");
  for (const auto& [arc, c] : arc_total)
    if (c > 1) flag(Family::arc_once, 0, 0, id_of(arc.first), id_of(arc.second), c, 1, "arc used more than once");
  return report;
}

/// The deadline-linking inequality read literally:
///   sum_{s <= s'} sum_{i,j} t_ij x_ijs  >=  deadline(i') * y_{i', s'+1}
/// i.e. the time spent in tours 1..s' must reach the deadline of every task
/// served in tour s'+1. This contradicts on-time service and is kept for
/// diagnostics only; check_constraints uses the chronological deadline test.
inline std::vector<Violation> literal_deadline_linking(const RoutePlan& plan, const Instance& inst) {
  std::vector<Violation> out;
  for (std::size_t ri = 0; ri < plan.robots.size(); ++ri) {
    const auto& tours = plan.robots[ri];
    double elapsed = 0.0;
    for (std::size_t si = 0; si + 1 < tours.size() && static_cast<int>(si) + 1 < inst.max_tours; ++si) {
      int prev = 0;
      for (int id : tours[si]) {
        const int node = inst.node_of(id);
        if (node < 0) continue;
        elapsed += inst.time(static_cast<std::size_t>(prev), static_cast<std::size_t>(node));
        prev = node;
      }
      elapsed += inst.time(static_cast<std::size_t>(prev), static_cast<std::size_t>(inst.end_node()));
      for (int id : tours[si + 1]) {
        const int node = inst.node_of(id);
        if (node < 0) continue;
        const double due = inst.deadline[static_cast<std::size_t>(node)];
        if (elapsed < due)
          out.push_back({Family::deadline, static_cast<int>(ri) + 1, static_cast<int>(si) + 2, id, 0, elapsed, due,
                         "literal deadline-linking inequality"});
      }
    }
  }
  return out;
}

struct SolveResult {
  RoutePlan plan;
  double objective = 0.0;
  bool optimal = false;
  std::uint64_t nodes = 0;
  double wall_seconds = 0.0;
};

namespace detail {

// Depth-first branch and bound. Robots are filled one after another; for the
// current robot the search either appends a task to its open tour, closes the
// tour, or (at the start of a tour) retires the robot. Pruning uses partial
// schedule feasibility and an optimistic bound that places every unserved task
// in the best still-open slot.
//
// Robots are interchangeable (same depot, same limits), so non-empty robots
// are ordered by their first task id and an empty robot ends the search branch.
// Tours never follow an empty tour; dropping it only improves later ones.
class BranchAndBound {
public:
  BranchAndBound(const Instance& inst, std::chrono::duration<double> timeout)
      : inst_(inst),
        deadline_(std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(timeout)) {
    n_ = inst.n();
    served_.assign(static_cast<std::size_t>(n_) + 2, 0);
    current_ = RoutePlan::empty(inst.robots, inst.max_tours);
    best_plan_ = current_;
    first_task_.assign(static_cast<std::size_t>(inst.robots), 0);
  }

  SolveResult run() {
    const auto start = std::chrono::steady_clock::now();
    open_tour(0, 0, 0, 0.0, 0.0, 0, 0.0);
    SolveResult res;
    res.plan = best_plan_;
    res.objective = best_;
    res.optimal = !timed_out_;
    res.nodes = nodes_;
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  }

private:
  // r, s: 0-based robot and tour; last: node the tour is at; count: tasks in tour.
  void open_tour(int r, int s, int last, double clock, double length, int count, double obj) {
    if (timed_out_) return;
    if ((++nodes_ & 0xFFF) == 0 && std::chrono::steady_clock::now() > deadline_) {
      timed_out_ = true;
      return;
    }
    if (obj > best_ + 1e-12) {
      best_ = obj;
      best_plan_ = current_;
    }
    if (bound(r, s, count, obj) <= best_ + 1e-12) return;

    const auto& d = inst_.dist;
    const auto& t = inst_.time;
    const std::size_t end = static_cast<std::size_t>(inst_.end_node());
    const std::size_t from = static_cast<std::size_t>(last);
    auto& tour = current_.robots[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];

    if (count < inst_.capacity) {
      const bool robot_first = s == 0 && count == 0;
      for (int j = 1; j <= n_; ++j) {
        const std::size_t to = static_cast<std::size_t>(j);
        if (served_[to]) continue;
        if (robot_first && r > 0 && j < first_task_[static_cast<std::size_t>(r - 1)]) continue;
        const double new_length = length + d(from, to);
        if (new_length + d(to, end) > inst_.max_range + kFeasibilityTolerance) continue;
        const double finish = clock + t(from, to) + inst_.service_time;
        if (finish > inst_.deadline[to] + kFeasibilityTolerance) continue;

        served_[to] = 1;
        tour.push_back(inst_.task_ids[to - 1]);
        if (robot_first) first_task_[static_cast<std::size_t>(r)] = j;
        open_tour(r, s, j, finish, new_length, count + 1, obj + 1.0 / (s + 1));
        tour.pop_back();
        served_[to] = 0;
        if (timed_out_) return;
      }
    }

    if (count > 0) {
      const double back = clock + t(from, end) + inst_.turnaround_time;
      if (s + 1 < inst_.max_tours)
        open_tour(r, s + 1, 0, back, 0.0, 0, obj);
      else
        next_robot(r, obj);
    } else if (s > 0) {
      next_robot(r, obj);
    }
    // count == 0 && s == 0: this robot stays empty, and so do all later ones.
  }

  void next_robot(int r, double obj) {
    if (r + 1 < inst_.robots) open_tour(r + 1, 0, 0, 0.0, 0.0, 0, obj);
  }

  double bound(int r, int s, int count, double obj) const {
    int remaining = 0;
    for (int j = 1; j <= n_; ++j) remaining += served_[static_cast<std::size_t>(j)] ? 0 : 1;
    const int later_robots = inst_.robots - r - 1;
    double extra = 0.0;
    for (int tour = 0; tour < inst_.max_tours && remaining > 0; ++tour) {
      int slots = later_robots * inst_.capacity;
      if (tour == s) slots += inst_.capacity - count;
      if (tour > s) slots += inst_.capacity;
      const int used = std::min(slots, remaining);
      extra += static_cast<double>(used) / (tour + 1);
      remaining -= used;
    }
    return obj + extra;
  }

  const Instance& inst_;
  std::chrono::steady_clock::time_point deadline_;
  int n_ = 0;
  std::vector<char> served_;
  std::vector<int> first_task_;
  RoutePlan current_;
  RoutePlan best_plan_;
  double best_ = 0.0;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

}  // namespace detail

/// Largest task count accepted by the exact solver (served-set bitmaps and
/// desk-scale runtimes).
inline constexpr int kMaxExactTasks = 63;

/// Exact optimum of the routing model. If the timeout hits, the best plan found
/// so far is returned with optimal = false (the all-empty plan is always an
/// incumbent).
inline SolveResult solve_exact(const Instance& inst,
                               std::chrono::duration<double> timeout = std::chrono::duration<double>(60.0)) {
  if (inst.n() > kMaxExactTasks)
    throw RefusalError("exact solver limited to " + std::to_string(kMaxExactTasks) + " tasks");
  return detail::BranchAndBound(inst, timeout).run();
}

struct OracleResult {
  RoutePlan plan;
  double objective = 0.0;
  std::uint64_t plans_checked = 0;
};

inline constexpr double kOraclePlanLimit = 1e6;

/// Upper bound on the number of candidate plans: ordered selections of k
/// tasks split into robots * tours ordered lists.
inline double oracle_plan_count(const Instance& inst) {
  const int n = inst.n();
  const int slots = inst.robots * inst.max_tours;
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    double arrangements = 1.0;
    for (int i = 0; i < k; ++i) arrangements *= n - i;
    double splits = 1.0;  // C(k + slots - 1, slots - 1)
    for (int i = 1; i < slots; ++i) splits = splits * (k + i) / i;
    total += arrangements * splits;
  }
  return total;
}

/// Exhaustive enumeration: every assignment of ordered task lists (each at most
/// Q long) to every robot's every tour is checked with check_constraints. Ties
/// go to the lexicographically smallest plan encoding.
inline OracleResult enumerate_oracle(const Instance& inst) {
  if (oracle_plan_count(inst) > kOraclePlanLimit)
    throw RefusalError("enumeration oracle limited to 1e6 candidate plans");

  const std::size_t slots = static_cast<std::size_t>(inst.robots * inst.max_tours);
  RoutePlan plan = RoutePlan::empty(inst.robots, inst.max_tours);
  std::vector<char> used(static_cast<std::size_t>(inst.n()), 0);
  OracleResult best;
  best.plan = plan;
  bool have = false;

  auto slot_tour = [&](std::size_t k) -> std::vector<int>& {
    return plan.robots[k / static_cast<std::size_t>(inst.max_tours)][k % static_cast<std::size_t>(inst.max_tours)];
  };

  auto visit = [&](auto&& self, std::size_t k) -> void {
    if (k == slots) {
      ++best.plans_checked;
      if (!check_constraints(plan, inst).feasible()) return;
      const double obj = objective_value(plan);
      if (!have || obj > best.objective + 1e-12 ||
          (obj > best.objective - 1e-12 && plan.encoding() < best.plan.encoding())) {
        best.objective = obj;
        best.plan = plan;
        have = true;
      }
      return;
    }
    auto& tour = slot_tour(k);
    // Close this tour here (whatever its current length), then try extending it.
    self(self, k + 1);
    if (static_cast<int>(tour.size()) >= inst.capacity) return;
    for (std::size_t i = 0; i < used.size(); ++i) {
      if (used[i]) continue;
      used[i] = 1;
      tour.push_back(inst.task_ids[i]);
      self(self, k);
      tour.pop_back();
      used[i] = 0;
    }
  };
  visit(visit, 0);
  return best;
}

// Plan documents: {"robots": [[[1, 2], [3]], [[4], []]]}

inline std::string serialize_plan(const RoutePlan& plan) {
  nlohmann::json doc;
  doc["robots"] = plan.robots;
  return doc.dump();
}

inline RoutePlan load_plan(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError("<plan>", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("robots") || !doc.at("robots").is_array())
    throw LoadError("robots", "expected an array of robots");
  RoutePlan plan;
  const auto& robots = doc.at("robots");
  for (std::size_t r = 0; r < robots.size(); ++r) {
    const std::string path = "robots[" + std::to_string(r) + "]";
    if (!robots[r].is_array()) throw LoadError(path, "expected an array of tours");
    std::vector<std::vector<int>> tours;
    for (std::size_t s = 0; s < robots[r].size(); ++s) {
      const auto& tour = robots[r][s];
      const std::string tpath = path + "[" + std::to_string(s) + "]";
      if (!tour.is_array()) throw LoadError(tpath, "expected an array of task ids");
      std::vector<int> ids;
      for (const auto& id : tour) {
        if (!id.is_number_integer()) throw LoadError(tpath, "task ids must be integers");
        ids.push_back(id.get<int>());
      }
      tours.push_back(std::move(ids));
    }
    plan.robots.push_back(std::move(tours));
  }
  return plan;
}

inline RoutePlan load_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_plan(buf.str());
}

}  // namespace mrta::ilp
