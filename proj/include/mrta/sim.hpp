#pragma once

// Discrete-event mission simulator.
//
// Robots fly straight legs at constant speed. Each robot runs its allocator
// `decision_lead` minutes before it finishes a task leg, right after reloading
// at the depot, at mission start, and after a wasted trip. A decision sees the
// world as it was `latency` minutes ago, except for the robot's own state.
// Commitments are irrevocable: a robot never diverts mid-leg.
//
// Same-time events are processed in a fixed order: task arrivals, leg
// arrivals, wake-ups, decisions, deadline expiries; ties within a class are
// broken by robot label or task id, then by scheduling order.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mrta/allocator.hpp"
#include "mrta/domain.hpp"
#include "mrta/random.hpp"

namespace mrta {

enum class Policy { dec_mrta, rnd_feas };

inline const char* to_string(Policy p) { return p == Policy::dec_mrta ? "dec-mrta" : "rnd-feas"; }

inline Policy parse_policy(const std::string& name) {
  if (name == "dec-mrta") return Policy::dec_mrta;
  if (name == "rnd-feas") return Policy::rnd_feas;
  throw InvalidParameter("unknown policy '" + name + "'");
}

struct SimConfig {
  double decision_lead = 1.0;  // min
  double latency = 0.0;        // min
  Policy policy = Policy::dec_mrta;
  std::uint64_t seed = 0;
  double horizon = kInfinity;
};

enum class EventKind { task_arrival, decide, complete, wasted_trip, depot_arrival, idle, expire };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::task_arrival: return "task_arrival";
    case EventKind::decide: return "decide";
    case EventKind::complete: return "complete";
    case EventKind::wasted_trip: return "wasted_trip";
    case EventKind::depot_arrival: return "depot_arrival";
    case EventKind::idle: return "idle";
    case EventKind::expire: return "expire";
  }
  return "?";
}

/// One log line. robot/task are 0 where they do not apply; for `decide`, task
/// is the chosen target (0 = depot).
struct LogRecord {
  double time = 0.0;
  int robot = 0;
  EventKind kind = EventKind::decide;
  int task = 0;
  double compute_ms = 0.0;
};

struct MissionLog {
  std::vector<LogRecord> records;

  /// Line-oriented export: "time robot kind task compute_ms". Wall-clock
  /// compute times are not reproducible, so `with_compute = false` prints "-"
  /// in that column; the rest of the text is a pure function of the inputs.
  std::string to_text(bool with_compute = true) const {
    std::string out = "# time robot kind task compute_ms\n";
    char line[128];
    for (const auto& r : records) {
      if (with_compute && r.kind == EventKind::decide)
        std::snprintf(line, sizeof line, "%.6f %d %s %d %.6f\n", r.time, r.robot, to_string(r.kind), r.task,
                      r.compute_ms);
      else
        std::snprintf(line, sizeof line, "%.6f %d %s %d -\n", r.time, r.robot, to_string(r.kind), r.task);
      out += line;
    }
    return out;
  }
};

struct Metrics {
  int tasks = 0;
  double completion_rate = 1.0;
  double cumulative_compute = 0.0;  // s, summed over every decision
  double mean_robot_compute = 0.0;  // s, cumulative / robots
  int tasks_completed = 0;
  int tasks_expired = 0;
  int tasks_unattempted = 0;
  int wasted_trips = 0;
  int decisions = 0;
  std::vector<double> distance_flown;  // km, by robot id - 1

  double total_distance() const {
    double d = 0.0;
    for (double x : distance_flown) d += x;
    return d;
  }
};

/// Folds a mission log into metrics. A mission without tasks has completion
/// rate 1.
inline Metrics compute_metrics(const Scenario& s, const MissionLog& log) {
  Metrics m;
  m.tasks = static_cast<int>(s.tasks.size());
  m.distance_flown.assign(static_cast<std::size_t>(s.num_robots), 0.0);
  std::vector<Point> where(static_cast<std::size_t>(s.num_robots), s.depot);
  auto move = [&](int robot, const Point& to) {
    if (robot < 1 || robot > s.num_robots) return;
    auto& at = where[static_cast<std::size_t>(robot - 1)];
    m.distance_flown[static_cast<std::size_t>(robot - 1)] += distance(at, to);
    at = to;
  };
  for (const auto& r : log.records) {
    switch (r.kind) {
      case EventKind::decide:
        ++m.decisions;
        m.cumulative_compute += r.compute_ms / 1000.0;
        break;
      case EventKind::complete:
        ++m.tasks_completed;
        if (const Task* t = s.find_task(r.task)) move(r.robot, t->location);
        break;
      case EventKind::wasted_trip:
        ++m.wasted_trips;
        if (const Task* t = s.find_task(r.task)) move(r.robot, t->location);
        break;
      case EventKind::depot_arrival: move(r.robot, s.depot); break;
      case EventKind::expire: ++m.tasks_expired; break;
      default: break;
    }
  }
  m.tasks_unattempted = m.tasks - m.tasks_completed - m.tasks_expired;
  m.completion_rate = m.tasks == 0 ? 1.0 : static_cast<double>(m.tasks_completed) / m.tasks;
  m.mean_robot_compute = m.cumulative_compute / s.num_robots;
  return m;
}

/// Timestamped history of true task and robot states, from which stale views
/// are served.
class WorldTimeline {
public:
  WorldTimeline(const std::vector<Task>& tasks, const std::vector<RobotState>& robots) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      task_index_.emplace(tasks[i].id, i);
      task_history_.push_back({{-kInfinity, tasks[i]}});
    }
    for (std::size_t i = 0; i < robots.size(); ++i) {
      robot_index_.emplace(robots[i].id, i);
      robot_history_.push_back({{-kInfinity, robots[i]}});
      claims_.emplace_back();
    }
  }

  const Task& task(int id) const { return task_history_.at(task_index_.at(id)).back().second; }
  const RobotState& robot(int id) const { return robot_history_.at(robot_index_.at(id)).back().second; }

  void record_task(double time, const Task& t) { task_history_.at(task_index_.at(t.id)).push_back({time, t}); }
  void record_robot(double time, const RobotState& r) {
    robot_history_.at(robot_index_.at(r.id)).push_back({time, r});
  }
  /// A robot always knows which tasks it has committed to itself.
  void record_claim(int robot_id, int task_id) { claims_.at(robot_index_.at(robot_id)).push_back(task_id); }

  KnownWorld truth(double now) const {
    KnownWorld w;
    w.now = now;
    for (const auto& h : task_history_) w.tasks.push_back(h.back().second);
    for (const auto& h : robot_history_) w.robots.push_back(h.back().second);
    return w;
  }

  /// The world as robot `robot_id` sees it at `now`: every change stamped
  /// later than now - latency is invisible, except the robot's own state and
  /// its own commitments. The initial state is visible from the start.
  KnownWorld view(int robot_id, double now, double latency) const {
    const double cut = now - latency;
    KnownWorld w;
    w.now = now;
    for (const auto& h : task_history_) w.tasks.push_back(as_of(h, cut));
    const std::size_t self = robot_index_.at(robot_id);
    for (std::size_t i = 0; i < robot_history_.size(); ++i)
      w.robots.push_back(i == self ? robot_history_[i].back().second : as_of(robot_history_[i], cut));
    for (int claimed : claims_[self]) {
      Task& known = w.tasks[task_index_.at(claimed)];
      const Task& actual = task(claimed);
      if (actual.phase == TaskPhase::completed && actual.committed_robot == robot_id) {
        known = actual;
      } else if (known.phase == TaskPhase::active) {
        known.phase = TaskPhase::committed;
        known.committed_robot = robot_id;
      }
    }
    return w;
  }

private:
  template <class T>
  static const T& as_of(const std::vector<std::pair<double, T>>& history, double cut) {
    auto it = std::upper_bound(history.begin(), history.end(), cut,
                               [](double c, const std::pair<double, T>& e) { return c < e.first; });
    return it == history.begin() ? history.front().second : std::prev(it)->second;
  }

  std::unordered_map<int, std::size_t> task_index_, robot_index_;
  std::vector<std::vector<std::pair<double, Task>>> task_history_;
  std::vector<std::vector<std::pair<double, RobotState>>> robot_history_;
  std::vector<std::vector<int>> claims_;
};

/// Outcome of a robot physically reaching a task site.
enum class ArrivalOutcome { completed, wasted_trip };

/// The first robot to arrive serves the task; anyone arriving after that made
/// a wasted trip.
inline ArrivalOutcome resolve_conflict_at_task(Task& task, int robot_id, double now) {
  if (task.phase == TaskPhase::completed) return ArrivalOutcome::wasted_trip;
  if (task.phase == TaskPhase::active) advance(task, TaskPhase::committed, now, robot_id);
  advance(task, TaskPhase::completed, now, robot_id);
  return ArrivalOutcome::completed;
}

/// Random permutation of 1..m.
inline std::vector<int> draw_labels(int m, Rng& rng) {
  std::vector<int> labels(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) labels[static_cast<std::size_t>(i)] = i + 1;
  for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[rng.index(i)]);
  return labels;
}

struct MissionResult {
  MissionLog log;
  Metrics metrics;
};

namespace detail {

class Simulator {
public:
  Simulator(const Scenario& s, const SimConfig& c)
      : s_(s), c_(c), ctx_(MissionContext::from(s)), rng_(c.seed), timeline_({}, {}) {
    if (c.decision_lead < 0) throw InvalidParameter("decision lead must be non-negative");
    if (c.latency < 0) throw InvalidParameter("latency must be non-negative");

    const std::vector<int> labels = s.labels.empty() ? draw_labels(s.num_robots, rng_) : s.labels;
    std::vector<RobotState> robots;
    for (int id = 1; id <= s.num_robots; ++id) {
      robots.push_back(robot_at_depot(s, id, labels[static_cast<std::size_t>(id - 1)]));
      label_.push_back(labels[static_cast<std::size_t>(id - 1)]);
      bodies_.push_back(Body{s.depot, s.payload_capacity, s.max_range, {}});
    }
    std::vector<Task> tasks = s.tasks;
    for (auto& t : tasks) {
      t.phase = t.arrival_time <= 0.0 ? TaskPhase::active : TaskPhase::pending;
      task_pos_.emplace(t.id, t.location);
    }
    timeline_ = WorldTimeline(tasks, robots);

    for (const auto& t : tasks) {
      if (t.phase == TaskPhase::pending) {
        push({t.arrival_time, kTaskArrival, t.id, Type::task_arrival, t.id, 0});
        push({t.arrival_time + c_.latency, kWake, t.id, Type::wake, t.id, 0});
      }
      push({t.deadline, kExpire, t.id, Type::expire, t.id, 0});
    }
    for (int id = 1; id <= s.num_robots; ++id) schedule_decision(id, 0.0);
  }

  MissionResult run() {
    while (!queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      if (ev.time > c_.horizon) break;
      switch (ev.type) {
        case Type::task_arrival: on_task_arrival(ev); break;
        case Type::leg_arrival: on_leg_arrival(ev); break;
        case Type::wake: on_wake(ev); break;
        case Type::decision: on_decision(ev); break;
        case Type::expire: on_expire(ev); break;
      }
    }
    MissionResult out;
    out.metrics = compute_metrics(s_, log_);
    out.log = std::move(log_);
    return out;
  }

private:
  enum class Type { task_arrival, leg_arrival, wake, decision, expire };
  static constexpr int kTaskArrival = 0, kLegArrival = 1, kWake = 2, kDecision = 3, kExpire = 4;

  struct Event {
    double time;
    int cls;
    int order;  // robot label or task id
    Type type;
    int subject;  // task id or robot id
    std::uint64_t token;
    std::uint64_t seq = 0;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.cls != b.cls) return a.cls > b.cls;
      if (a.order != b.order) return a.order > b.order;
      return a.seq > b.seq;
    }
  };

  struct Leg {
    int target;  // task id or kDepotId
    double length;
    std::uint64_t token;
  };

  struct Body {
    Point position;
    int payload;
    double range;
    std::deque<Leg> legs;
    bool idle = false;
    bool decision_pending = false;
    std::uint64_t decision_token = 0;
  };

  void push(Event ev) {
    ev.seq = seq_++;
    queue_.push(ev);
  }

  Body& body(int robot) { return bodies_[static_cast<std::size_t>(robot - 1)]; }
  int label(int robot) const { return label_[static_cast<std::size_t>(robot - 1)]; }

  void log(double t, int robot, EventKind k, int task, double ms = 0.0) { log_.records.push_back({t, robot, k, task, ms}); }

  void schedule_decision(int robot, double at) {
    Body& b = body(robot);
    b.decision_pending = true;
    push({at, kDecision, label(robot), Type::decision, robot, ++b.decision_token});
  }

  void on_task_arrival(const Event& ev) {
    Task t = timeline_.task(ev.subject);
    advance(t, TaskPhase::active, ev.time);
    timeline_.record_task(ev.time, t);
    log(ev.time, 0, EventKind::task_arrival, t.id);
  }

  void on_wake(const Event& ev) {
    // Idle robots re-check once the new task is visible to them.
    std::vector<int> order;
    for (int id = 1; id <= s_.num_robots; ++id)
      if (body(id).idle && !body(id).decision_pending) order.push_back(id);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return label(a) < label(b); });
    for (int id : order) schedule_decision(id, ev.time);
  }

  void on_expire(const Event& ev) {
    Task t = timeline_.task(ev.subject);
    if (t.phase != TaskPhase::active && t.phase != TaskPhase::committed) return;
    advance(t, TaskPhase::expired, ev.time);
    timeline_.record_task(ev.time, t);
    log(ev.time, 0, EventKind::expire, t.id);
  }

  void on_decision(const Event& ev) {
    const int id = ev.subject;
    Body& b = body(id);
    if (ev.token != b.decision_token) return;
    b.decision_pending = false;

    const KnownWorld world = timeline_.view(id, ev.time, c_.latency);
    const auto start = std::chrono::steady_clock::now();
    const Action action = c_.policy == Policy::dec_mrta ? decide_dec_mrta(id, world, ctx_)
                                                        : decide_random_feasible(id, world, ctx_, rng_);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    log(ev.time, id, EventKind::decide, action.task_id, ms);

    RobotState proj = timeline_.robot(id);
    const double depart = std::max(ev.time, proj.busy_until);

    if (action.is_task()) {
      const Point& site = task_pos_.at(action.task_id);
      const double length = distance(proj.location, site);
      const double finish = depart + travel_time(length, proj.speed) + s_.service_time;
      proj.location = site;
      proj.remaining_range -= length;
      proj.payload -= 1;
      proj.busy_until = finish;
      proj.commitment = action.task_id;
      timeline_.record_robot(ev.time, proj);
      timeline_.record_claim(id, action.task_id);

      Task t = timeline_.task(action.task_id);
      if (t.phase == TaskPhase::active) {
        advance(t, TaskPhase::committed, ev.time, id);
        timeline_.record_task(ev.time, t);
      }
      start_leg(id, action.task_id, length, finish);
      schedule_decision(id, std::max(ev.time, finish - c_.decision_lead));
      return;
    }

    if (b.legs.empty() && distance(proj.location, s_.depot) == 0.0) {
      b.idle = true;
      proj.commitment.reset();
      timeline_.record_robot(ev.time, proj);
      log(ev.time, id, EventKind::idle, 0);
      return;
    }
    const double length = distance(proj.location, s_.depot);
    const double arrive = depart + travel_time(length, proj.speed);
    proj.location = s_.depot;
    proj.remaining_range = s_.max_range;
    proj.payload = s_.payload_capacity;
    proj.busy_until = arrive + s_.turnaround_time;
    proj.commitment = kDepotId;
    timeline_.record_robot(ev.time, proj);
    start_leg(id, kDepotId, length, arrive);
    schedule_decision(id, arrive + s_.turnaround_time);
  }

  void start_leg(int robot, int target, double length, double arrive) {
    Body& b = body(robot);
    b.idle = false;
    const std::uint64_t token = ++leg_tokens_;
    b.legs.push_back({target, length, token});
    push({arrive, kLegArrival, label(robot), Type::leg_arrival, robot, token});
  }

  void on_leg_arrival(const Event& ev) {
    const int id = ev.subject;
    Body& b = body(id);
    if (b.legs.empty() || b.legs.front().token != ev.token) return;  // cancelled
    const Leg leg = b.legs.front();
    b.legs.pop_front();
    b.range -= leg.length;

    if (leg.target == kDepotId) {
      b.position = s_.depot;
      b.payload = s_.payload_capacity;
      b.range = s_.max_range;
      log(ev.time, id, EventKind::depot_arrival, 0);
      return;
    }

    b.position = task_pos_.at(leg.target);
    Task t = timeline_.task(leg.target);
    if (resolve_conflict_at_task(t, id, ev.time) == ArrivalOutcome::completed) {
      timeline_.record_task(ev.time, t);
      b.payload -= 1;
      log(ev.time, id, EventKind::complete, t.id);
      return;
    }

    log(ev.time, id, EventKind::wasted_trip, t.id);
    RobotState proj = timeline_.robot(id);
    if (!b.legs.empty() && b.legs.front().target != kDepotId) {
      // The next task is still valid; it simply has one more kit on board.
      proj.payload += 1;
      timeline_.record_robot(ev.time, proj);
      return;
    }
    // Drop a pre-decided return (or a pending decision) and decide afresh
    // from the true physical state.
    b.legs.clear();
    proj.location = b.position;
    proj.remaining_range = b.range;
    proj.payload = b.payload;
    proj.busy_until = ev.time;
    proj.commitment.reset();
    timeline_.record_robot(ev.time, proj);
    schedule_decision(id, ev.time);
  }

  Scenario s_;
  SimConfig c_;
  MissionContext ctx_;
  Rng rng_;
  WorldTimeline timeline_;
  std::vector<Body> bodies_;
  std::vector<int> label_;
  std::unordered_map<int, Point> task_pos_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  std::uint64_t leg_tokens_ = 0;
  MissionLog log_;
};

}  // namespace detail

/// Simulates one mission until the event queue drains or the horizon passes.
inline MissionResult run_mission(const Scenario& s, const SimConfig& c) { return detail::Simulator(s, c).run(); }

/// Replays a log against the scenario and lists every broken mission rule:
/// late or repeated completions, tours longer than the range budget or
/// carrying more than Q kits, positions from which the depot is out of reach,
/// legs flown faster than the robot speed, and out-of-order timestamps.
inline std::vector<std::string> check_mission_soundness(const Scenario& s, const MissionLog& log) {
  std::vector<std::string> problems;
  constexpr double tol = 1e-6;
  struct Track {
    Point at;
    double last_time = 0.0;
    double tour_length = 0.0;
    int tour_kits = 0;
  };
  std::vector<Track> robots(static_cast<std::size_t>(s.num_robots), Track{s.depot});
  std::map<int, int> completions;
  double previous = -kInfinity;

  auto note = [&](const LogRecord& r, const std::string& what) {
    char head[64];
    std::snprintf(head, sizeof head, "t=%.6f robot %d task %d: ", r.time, r.robot, r.task);
    problems.push_back(head + what);
  };
  auto reach = [&](const LogRecord& r, const Point& to, double service) {
    if (r.robot < 1 || r.robot > s.num_robots) {
      note(r, "unknown robot");
      return static_cast<Track*>(nullptr);
    }
    Track& tr = robots[static_cast<std::size_t>(r.robot - 1)];
    const double leg = distance(tr.at, to);
    if (r.time - tr.last_time < leg / s.robot_speed + service - tol) note(r, "leg flown faster than robot speed");
    tr.tour_length += leg;
    tr.at = to;
    tr.last_time = r.time;
    return &tr;
  };

  for (const auto& r : log.records) {
    if (r.time < previous) note(r, "timestamps out of order");
    previous = r.time;
    if (r.kind == EventKind::complete || r.kind == EventKind::wasted_trip) {
      const Task* t = s.find_task(r.task);
      if (!t) {
        note(r, "unknown task");
        continue;
      }
      Track* tr = reach(r, t->location, s.service_time);
      if (!tr) continue;
      if (tr->tour_length + distance(t->location, s.depot) > s.max_range + tol) note(r, "depot out of reach");
      if (r.kind == EventKind::complete) {
        if (++completions[r.task] > 1) note(r, "task completed twice");
        if (r.time > t->deadline + tol) note(r, "completed after deadline");
        if (r.time < t->arrival_time - tol) note(r, "completed before it appeared");
        if (++tr->tour_kits > s.payload_capacity) note(r, "more kits delivered than carried");
      }
    } else if (r.kind == EventKind::depot_arrival) {
      Track* tr = reach(r, s.depot, 0.0);
      if (!tr) continue;
      if (tr->tour_length > s.max_range + tol) note(r, "tour longer than range budget");
      tr->tour_length = 0.0;
      tr->tour_kits = 0;
      tr->last_time = r.time + s.turnaround_time;
    }
  }
  return problems;
}

struct SweepRow {
  int robots = 0;
  double latency = 0.0;
  std::uint64_t seed = 0;
  Metrics metrics;
};

/// Runs the same task field once per swarm size. Robot labels are redrawn
/// from the config seed for each size.
inline std::vector<SweepRow> sweep_swarm_size(const Scenario& base, std::span<const int> sizes, const SimConfig& c) {
  std::vector<SweepRow> rows;
  for (int m : sizes) {
    Scenario s = base;
    s.num_robots = m;
    s.labels.clear();
    rows.push_back({m, c.latency, c.seed, run_mission(s, c).metrics});
  }
  return rows;
}

inline std::vector<SweepRow> sweep_latency(const Scenario& base, std::span<const int> sizes,
                                           std::span<const double> latencies, const SimConfig& c) {
  std::vector<SweepRow> rows;
  for (int m : sizes) {
    for (double L : latencies) {
      SimConfig cell = c;
      cell.latency = L;
      const int one[] = {m};
      auto r = sweep_swarm_size(base, one, cell);
      rows.insert(rows.end(), r.begin(), r.end());
    }
  }
  return rows;
}

}  // namespace mrta
