#pragma once

// CSV rows for run, compare and sweep output.
//
// Header (fixed):
//   scenario_hash,policy,m,latency,seed,rep,completion_rate,tasks_completed,
//   tasks_expired,tasks_unattempted,wasted_trips,cumulative_compute_s,
//   mean_robot_compute_s,distance_flown
//
// Compute columns are wall-clock measurements; when timing is disabled they
// are left empty so the file is byte-stable across runs.

#include <cstdint>
#include <cstdio>
#include <string>

#include "mrta/ilp.hpp"
#include "mrta/sim.hpp"

namespace mrta {

struct RunReport {
  std::string scenario_hash;
  std::string policy;
  int robots = 0;
  double latency = 0.0;
  std::uint64_t seed = 0;
  int rep = 0;
  Metrics metrics;
};

inline const char* csv_header() {
  return "scenario_hash,policy,m,latency,seed,rep,completion_rate,tasks_completed,tasks_expired,"
         "tasks_unattempted,wasted_trips,cumulative_compute_s,mean_robot_compute_s,distance_flown";
}

inline std::string csv_row(const RunReport& r, bool with_timing = true) {
  const Metrics& m = r.metrics;
  char timing[64] = ",";
  if (with_timing) std::snprintf(timing, sizeof timing, "%.9g,%.9g", m.cumulative_compute, m.mean_robot_compute);
  char line[512];
  std::snprintf(line, sizeof line, "%s,%s,%d,%g,%llu,%d,%.6f,%d,%d,%d,%d,%s,%.6f", r.scenario_hash.c_str(),
                r.policy.c_str(), r.robots, r.latency, static_cast<unsigned long long>(r.seed), r.rep,
                m.completion_rate, m.tasks_completed, m.tasks_expired, m.tasks_unattempted, m.wasted_trips, timing,
                m.total_distance());
  return line;
}

/// Metrics for a centralized plan: every served task counts as completed,
/// the rest as expired, and the solver wall time is the compute cost.
inline Metrics plan_metrics(const ilp::RoutePlan& plan, const ilp::Instance& inst, double wall_seconds) {
  Metrics m;
  m.tasks = inst.n();
  m.tasks_completed = plan.served_count();
  m.tasks_expired = m.tasks - m.tasks_completed;
  m.completion_rate = m.tasks == 0 ? 1.0 : static_cast<double>(m.tasks_completed) / m.tasks;
  m.cumulative_compute = wall_seconds;
  m.mean_robot_compute = wall_seconds / inst.robots;
  m.distance_flown.assign(static_cast<std::size_t>(inst.robots), 0.0);
  for (std::size_t r = 0; r < plan.robots.size() && r < m.distance_flown.size(); ++r) {
    for (const auto& tour : plan.robots[r]) {
      if (tour.empty()) continue;
      int prev = 0;
      for (int id : tour) {
        const int node = inst.node_of(id);
        m.distance_flown[r] += inst.dist(static_cast<std::size_t>(prev), static_cast<std::size_t>(node));
        prev = node;
      }
      m.distance_flown[r] += inst.dist(static_cast<std::size_t>(prev), static_cast<std::size_t>(inst.end_node()));
    }
  }
  return m;
}

}  // namespace mrta
