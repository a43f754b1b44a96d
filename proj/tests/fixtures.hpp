#pragma once

// Scenario builders shared by the unit tests and the acceptance runner.

#include <cstdint>

#include "mrta/domain.hpp"
#include "mrta/generator.hpp"
#include "mrta/random.hpp"

namespace mrta::fixtures {

inline Task make_task(int id, Point p, double deadline, double arrival = 0.0) {
  Task t;
  t.id = id;
  t.location = p;
  t.deadline = deadline;
  t.arrival_time = arrival;
  return t;
}

inline Scenario base_scenario(int robots, double range, int capacity, int tours) {
  Scenario s;
  s.depot = {0, 0};
  s.num_robots = robots;
  s.robot_speed = 1.0;
  s.max_range = range;
  s.payload_capacity = capacity;
  s.max_tours = tours;
  s.incentive = default_incentive(range);
  return s;
}

inline void add_task(Scenario& s, Task t) {
  t.reachable = round_trip_fits(s.depot, t.location, s.max_range);
  s.tasks.push_back(t);
}

/// Small random instance for the exact solvers: n <= max_tasks, m <= 2, h <= 2,
/// deadlines tight enough that some tasks cannot all be served.
inline Scenario random_ilp_scenario(Rng& rng, int max_tasks = 5) {
  Scenario s = base_scenario(1 + static_cast<int>(rng.index(2)), rng.uniform(12, 30),
                             1 + static_cast<int>(rng.index(3)), 1 + static_cast<int>(rng.index(2)));
  const int n = static_cast<int>(rng.index(static_cast<std::size_t>(max_tasks) + 1));
  for (int i = 1; i <= n; ++i)
    add_task(s, make_task(i, {rng.uniform(-5, 5), rng.uniform(-5, 5)}, rng.uniform(3, 30)));
  return s;
}

/// Two robots, three tasks. P keeps robot 1 busy far from the depot while
/// D and C appear near the depot at t=5. With one minute of latency robot 2
/// wakes at t=6, takes D, and at t=7 picks C because it cannot yet see that
/// robot 1 committed to C at t=6.5; robot 1 then reaches C after robot 2.
inline Scenario latency_fixture() {
  Scenario s = base_scenario(2, 30, 10, 2);
  s.incentive = {10.0, 0.5};
  s.labels = {1, 2};
  add_task(s, make_task(1, {7.5, 0}, 100));      // P
  add_task(s, make_task(2, {0, 2}, 100, 5.0));   // D
  add_task(s, make_task(3, {0, 4}, 100, 5.0));   // C
  return s;
}

/// Generated field with generous deadlines (every task is individually
/// servable long before its deadline).
inline Scenario generous_scenario(int tasks, int robots, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.tasks = tasks;
  spec.robots = robots;
  spec.deadline_min = 200;
  spec.deadline_max = 400;
  return generate_scenario(spec, seed);
}

}  // namespace mrta::fixtures
