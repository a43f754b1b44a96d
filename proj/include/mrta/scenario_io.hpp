#pragma once

// Scenario documents (JSON).
//
//   { "depot": [x, y], "speed": 1.0, "max_range": 20, "payload_capacity": 3,
//     "max_tours": 2, "incentive": {"alpha": 10, "epsilon": 0.5}, "robots": 1,
//     "tasks": [{"id": 1, "loc": [3, 4], "deadline": 30, "arrival": 0}, ...] }
//
// Optional keys: "incentive" (defaults alpha = 10, epsilon = 5% of max_range),
// "labels" (a permutation of 1..robots), "service_time", "turnaround_time".

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "mrta/domain.hpp"

namespace mrta {

namespace detail {

using json = nlohmann::json;

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw LoadError(path + key, "missing");
  return obj.at(key);
}

inline double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw LoadError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw LoadError(field, "must be finite");
  return x;
}

inline int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw LoadError(field, "expected an integer");
  return v.get<int>();
}

inline Point point(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) throw LoadError(field, "expected [x, y]");
  return {number(v[0], field + "[0]"), number(v[1], field + "[1]")};
}

}  // namespace detail

/// Parses and validates a scenario document.
inline Scenario load_scenario(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw LoadError("<document>", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw LoadError("<document>", "expected an object");

  Scenario s;
  s.depot = detail::point(detail::require(doc, "depot", ""), "depot");
  s.robot_speed = detail::number(detail::require(doc, "speed", ""), "speed");
  s.max_range = detail::number(detail::require(doc, "max_range", ""), "max_range");
  s.payload_capacity = detail::integer(detail::require(doc, "payload_capacity", ""), "payload_capacity");
  s.max_tours = detail::integer(detail::require(doc, "max_tours", ""), "max_tours");
  s.num_robots = detail::integer(detail::require(doc, "robots", ""), "robots");

  if (!(s.robot_speed > 0)) throw LoadError("speed", "must be positive");
  if (!(s.max_range > 0)) throw LoadError("max_range", "must be positive");
  if (s.payload_capacity < 1) throw LoadError("payload_capacity", "must be at least 1");
  if (s.max_tours < 1) throw LoadError("max_tours", "must be at least 1");
  if (s.num_robots < 1) throw LoadError("robots", "must be at least 1");

  s.incentive = default_incentive(s.max_range);
  if (doc.contains("incentive")) {
    const auto& inc = doc.at("incentive");
    if (!inc.is_object()) throw LoadError("incentive", "expected an object");
    if (inc.contains("alpha")) s.incentive.alpha = detail::number(inc.at("alpha"), "incentive.alpha");
    if (inc.contains("epsilon")) s.incentive.epsilon = detail::number(inc.at("epsilon"), "incentive.epsilon");
  }
  if (!(s.incentive.alpha > 0)) throw LoadError("incentive.alpha", "must be positive");
  if (s.incentive.epsilon < 0) throw LoadError("incentive.epsilon", "must be non-negative");

  if (doc.contains("service_time")) s.service_time = detail::number(doc.at("service_time"), "service_time");
  if (doc.contains("turnaround_time"))
    s.turnaround_time = detail::number(doc.at("turnaround_time"), "turnaround_time");
  if (s.service_time < 0) throw LoadError("service_time", "must be non-negative");
  if (s.turnaround_time < 0) throw LoadError("turnaround_time", "must be non-negative");

  if (doc.contains("labels")) {
    const auto& labels = doc.at("labels");
    if (!labels.is_array()) throw LoadError("labels", "expected an array");
    for (std::size_t i = 0; i < labels.size(); ++i)
      s.labels.push_back(detail::integer(labels[i], "labels[" + std::to_string(i) + "]"));
    std::vector<int> sorted = s.labels;
    std::sort(sorted.begin(), sorted.end());
    bool perm = static_cast<int>(sorted.size()) == s.num_robots;
    for (int i = 0; perm && i < s.num_robots; ++i) perm = sorted[i] == i + 1;
    if (!perm) throw LoadError("labels", "must be a permutation of 1..robots");
  }

  const auto& tasks = detail::require(doc, "tasks", "");
  if (!tasks.is_array()) throw LoadError("tasks", "expected an array");
  std::set<int> seen;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string path = "tasks[" + std::to_string(i) + "].";
    const auto& tj = tasks[i];
    Task t;
    t.id = detail::integer(detail::require(tj, "id", path), path + "id");
    t.location = detail::point(detail::require(tj, "loc", path), path + "loc");
    t.deadline = detail::number(detail::require(tj, "deadline", path), path + "deadline");
    t.arrival_time = tj.contains("arrival") ? detail::number(tj.at("arrival"), path + "arrival") : 0.0;
    if (t.id < 1) throw LoadError(path + "id", "must be >= 1");
    if (!seen.insert(t.id).second) throw LoadError(path + "id", "duplicate task id " + std::to_string(t.id));
    if (t.arrival_time < 0) throw LoadError(path + "arrival", "must be non-negative");
    if (!(t.deadline > t.arrival_time)) throw LoadError(path + "deadline", "must exceed the arrival time");
    t.reachable = round_trip_fits(s.depot, t.location, s.max_range);
    s.tasks.push_back(t);
  }
  return s;
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

/// Canonical JSON form: keys sorted, no whitespace when `indent` < 0. Lifecycle
/// state and the derived reachability flag are not serialized.
inline std::string serialize_scenario(const Scenario& s, int indent = -1) {
  using detail::json;
  json doc;
  doc["depot"] = {s.depot.x, s.depot.y};
  doc["speed"] = s.robot_speed;
  doc["max_range"] = s.max_range;
  doc["payload_capacity"] = s.payload_capacity;
  doc["max_tours"] = s.max_tours;
  doc["robots"] = s.num_robots;
  doc["incentive"] = {{"alpha", s.incentive.alpha}, {"epsilon", s.incentive.epsilon}};
  doc["service_time"] = s.service_time;
  doc["turnaround_time"] = s.turnaround_time;
  if (!s.labels.empty()) doc["labels"] = s.labels;
  json tasks = json::array();
  for (const auto& t : s.tasks) {
    tasks.push_back({{"id", t.id},
                     {"loc", {t.location.x, t.location.y}},
                     {"deadline", t.deadline},
                     {"arrival", t.arrival_time}});
  }
  doc["tasks"] = std::move(tasks);
  return doc.dump(indent);
}

/// FNV-1a over the canonical serialization, as 16 hex digits.
inline std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : serialize_scenario(s)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace mrta
