#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mrta/domain.hpp"
#include "mrta/random.hpp"

namespace mrta {

/// Parameters for a synthetic flood-response scenario. Tasks are scattered
/// uniformly over a square centred on the depot; each task's deadline window
/// (deadline minus arrival) is uniform in [deadline_min, deadline_max] but never
/// shorter than a direct flight from the depot.
struct GeneratorSpec {
  double area_side = 10.0;
  int tasks = 50;
  int robots = 5;
  double deadline_min = 30.0;
  double deadline_max = 120.0;
  double dynamic_fraction = 0.0;  // share of tasks that appear after mission start
  double arrival_horizon = 60.0;  // dynamic arrivals are uniform in (0, arrival_horizon]
  double speed = 1.0;
  double max_range = 30.0;
  int payload = 5;
  int max_tours = 2;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  double service_time = 0.0;
};

inline Scenario generate_scenario(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.tasks < 0) throw GenerationError("task count must be non-negative");
  if (spec.robots < 1) throw GenerationError("robot count must be at least 1");
  if (!(spec.area_side > 0)) throw GenerationError("area side must be positive");
  if (!(spec.speed > 0)) throw GenerationError("speed must be positive");
  if (!(spec.max_range > 0)) throw GenerationError("max range must be positive");
  if (spec.payload < 1 || spec.max_tours < 1) throw GenerationError("payload and tour limits must be at least 1");
  if (!(spec.deadline_min > 0) || spec.deadline_max < spec.deadline_min)
    throw GenerationError("deadline range must satisfy 0 < min <= max");
  if (spec.dynamic_fraction < 0 || spec.dynamic_fraction > 1)
    throw GenerationError("dynamic fraction must lie in [0, 1]");
  if (spec.dynamic_fraction > 0 && !(spec.arrival_horizon > 0))
    throw GenerationError("arrival horizon must be positive when dynamic tasks are requested");
  if (spec.service_time < 0) throw GenerationError("service time must be non-negative");
  if (spec.deadline_max < spec.service_time) {
    throw GenerationError("deadline upper bound " + std::to_string(spec.deadline_max) +
                          " is below the minimal possible service time " + std::to_string(spec.service_time));
  }

  Rng rng(seed);
  Scenario s;
  s.depot = {0.0, 0.0};
  s.num_robots = spec.robots;
  s.robot_speed = spec.speed;
  s.max_range = spec.max_range;
  s.payload_capacity = spec.payload;
  s.max_tours = spec.max_tours;
  s.incentive = default_incentive(spec.max_range);
  if (spec.alpha) s.incentive.alpha = *spec.alpha;
  if (spec.epsilon) s.incentive.epsilon = *spec.epsilon;
  if (!(s.incentive.alpha > 0) || s.incentive.epsilon < 0) throw GenerationError("invalid incentive parameters");
  s.service_time = spec.service_time;

  const int dynamic_count = static_cast<int>(std::lround(spec.dynamic_fraction * spec.tasks));
  const double half = spec.area_side / 2.0;
  constexpr int kMaxAttempts = 10000;

  for (int i = 0; i < spec.tasks; ++i) {
    Task t;
    t.id = i + 1;
    // The last `dynamic_count` tasks arrive during the mission.
    t.arrival_time = i >= spec.tasks - dynamic_count ? spec.arrival_horizon * (1.0 - rng.uniform01()) : 0.0;
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const Point p{rng.uniform(-half, half), rng.uniform(-half, half)};
      const double window = rng.uniform(spec.deadline_min, spec.deadline_max);
      const double direct = distance(s.depot, p) / spec.speed + spec.service_time;
      if (!round_trip_fits(s.depot, p, spec.max_range) || direct > window) continue;
      t.location = p;
      t.deadline = t.arrival_time + window;
      placed = true;
    }
    if (!placed) {
      throw GenerationError("could not place task " + std::to_string(t.id) +
                            " within range and deadline limits; enlarge max_range or deadline_max");
    }
    t.reachable = true;
    s.tasks.push_back(t);
  }
  return s;
}

}  // namespace mrta
