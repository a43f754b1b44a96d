#pragma once

// Exact maximum-weight bipartite matching.
//
// The solver is the primal-dual (Hungarian) method on the matching LP
//
//   max sum w_e x_e   s.t. each vertex covered at most once
//   dual: u_r + v_t >= w_rt,  u, v >= 0
//
// Every robot starts at u = max weight; labelled forests are grown from all
// exposed robots at once and the search stops as soon as the exposed robots'
// duals reach zero, so unmatched vertices are allowed (maximum weight, not
// maximum cardinality).
//
// Among all optimal matchings the result is the one whose pair list, sorted by
// (robot label, task id), is lexicographically smallest. Optimal matchings are
// exactly those that use only tight edges and cover every vertex with a
// positive dual, so the tie-break walks the robots in label order and, for
// each, tries its tight tasks in id order, keeping a choice only if the rest
// can still be completed by alternating-path repair.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "mrta/error.hpp"
#include "mrta/incentive.hpp"

namespace mrta {

/// Relative tolerance (scaled by the largest edge weight) under which two
/// matchings count as tied.
inline constexpr double kMatchingTolerance = 1e-9;

struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (robot id, task id), ordered by (robot label, task id)
  double total_weight = 0.0;

  std::optional<int> task_for(int robot_id) const {
    for (const auto& [r, t] : pairs)
      if (r == robot_id) return t;
    return std::nullopt;
  }

  bool empty() const { return pairs.empty(); }
};

namespace detail {

struct DenseBigraph {
  std::vector<RobotVertex> robots;  // by label
  std::vector<int> tasks;           // by id
  std::vector<double> w;            // robots x tasks, row-major
  std::vector<char> has;
  double max_weight = 0.0;

  std::size_t a() const { return robots.size(); }
  std::size_t b() const { return tasks.size(); }
  double weight(std::size_t i, std::size_t j) const { return w[i * b() + j]; }
  bool edge(std::size_t i, std::size_t j) const { return has[i * b() + j] != 0; }

  explicit DenseBigraph(const WeightedBigraph& g) : robots(g.robots()), tasks(g.tasks()) {
    w.assign(a() * b(), 0.0);
    has.assign(a() * b(), 0);
    std::unordered_map<int, std::size_t> row, col;
    for (std::size_t i = 0; i < a(); ++i) row.emplace(robots[i].id, i);
    for (std::size_t j = 0; j < b(); ++j) col.emplace(tasks[j], j);
    for (const auto& e : g.edges()) {
      const std::size_t k = row.at(e.robot) * b() + col.at(e.task);
      w[k] = e.weight;
      has[k] = 1;
      max_weight = std::max(max_weight, e.weight);
    }
  }

  Matching to_matching(const std::vector<int>& mate_of_robot) const {
    Matching m;
    for (std::size_t i = 0; i < a(); ++i) {
      if (mate_of_robot[i] < 0) continue;
      m.pairs.emplace_back(robots[i].id, tasks[static_cast<std::size_t>(mate_of_robot[i])]);
      m.total_weight += weight(i, static_cast<std::size_t>(mate_of_robot[i]));
    }
    return m;
  }
};

class TieBreaker {
public:
  TieBreaker(const DenseBigraph& g, const std::vector<double>& u, const std::vector<double>& v,
             std::vector<int> mate_l, std::vector<int> mate_r)
      : g_(g), u_(u), v_(v), mate_l_(std::move(mate_l)), mate_r_(std::move(mate_r)) {
    tol_ = kMatchingTolerance * g.max_weight;
    locked_l_.assign(g.a(), 0);
    locked_r_.assign(g.b(), 0);
  }

  std::vector<int> run() {
    const std::size_t a = g_.a(), b = g_.b();
    for (std::size_t i = 0; i < a; ++i) {
      if (all_required_locked()) {
        for (std::size_t k = i; k < a; ++k) {
          if (mate_l_[k] >= 0) mate_r_[static_cast<std::size_t>(mate_l_[k])] = -1;
          mate_l_[k] = -1;
        }
        break;
      }
      locked_l_[i] = 1;
      const int current = mate_l_[i];
      for (std::size_t j = 0; j < b; ++j) {
        if (current >= 0 && static_cast<int>(j) >= current) break;
        if (locked_r_[j] || !tight(i, j)) continue;
        if (try_assign(i, j)) break;
      }
      if (mate_l_[i] >= 0) locked_r_[static_cast<std::size_t>(mate_l_[i])] = 1;
    }
    return mate_l_;
  }

private:
  bool tight(std::size_t i, std::size_t j) const {
    return g_.edge(i, j) && u_[i] + v_[j] - g_.weight(i, j) <= tol_;
  }
  bool required_l(std::size_t i) const { return u_[i] > tol_; }
  bool required_r(std::size_t j) const { return v_[j] > tol_; }

  bool all_required_locked() const {
    for (std::size_t i = 0; i < g_.a(); ++i)
      if (!locked_l_[i] && required_l(i)) return false;
    for (std::size_t j = 0; j < g_.b(); ++j)
      if (!locked_r_[j] && required_r(j)) return false;
    return true;
  }

  bool try_assign(std::size_t i, std::size_t j) {
    const auto saved_l = mate_l_;
    const auto saved_r = mate_r_;
    const int old_task = mate_l_[i];
    const int old_robot = mate_r_[j];
    if (old_task >= 0) mate_r_[static_cast<std::size_t>(old_task)] = -1;
    if (old_robot >= 0) mate_l_[static_cast<std::size_t>(old_robot)] = -1;
    mate_l_[i] = static_cast<int>(j);
    mate_r_[j] = static_cast<int>(i);
    locked_r_[j] = 1;

    bool ok = true;
    if (old_robot >= 0 && required_l(static_cast<std::size_t>(old_robot)))
      ok = repair_robot(static_cast<std::size_t>(old_robot));
    if (ok && old_task >= 0 && mate_r_[static_cast<std::size_t>(old_task)] < 0 &&
        required_r(static_cast<std::size_t>(old_task)))
      ok = repair_task(static_cast<std::size_t>(old_task));
    if (!ok) {
      mate_l_ = saved_l;
      mate_r_ = saved_r;
      locked_r_[j] = 0;
    }
    return ok;
  }

  // Re-covers an exposed robot: alternating search that ends at a free task or
  // at a task whose current robot is allowed to go unmatched.
  bool repair_robot(std::size_t start) {
    const std::size_t a = g_.a(), b = g_.b();
    std::vector<int> via_robot(b, -1);  // robot that reached task j
    std::vector<char> seen_robot(a, 0);
    std::queue<std::size_t> q;
    q.push(start);
    seen_robot[start] = 1;
    while (!q.empty()) {
      const std::size_t x = q.front();
      q.pop();
      for (std::size_t j = 0; j < b; ++j) {
        if (locked_r_[j] || via_robot[j] >= 0 || !tight(x, j)) continue;
        via_robot[j] = static_cast<int>(x);
        const int y = mate_r_[j];
        if (y < 0 || !required_l(static_cast<std::size_t>(y))) {
          if (y >= 0) mate_l_[static_cast<std::size_t>(y)] = -1;
          flip_from_task(j, via_robot, start);
          return true;
        }
        if (!seen_robot[static_cast<std::size_t>(y)]) {
          seen_robot[static_cast<std::size_t>(y)] = 1;
          q.push(static_cast<std::size_t>(y));
        }
      }
    }
    return false;
  }

  void flip_from_task(std::size_t j, const std::vector<int>& via_robot, std::size_t start) {
    int task = static_cast<int>(j);
    while (true) {
      const std::size_t x = static_cast<std::size_t>(via_robot[static_cast<std::size_t>(task)]);
      const int previous = mate_l_[x];
      mate_l_[x] = task;
      mate_r_[static_cast<std::size_t>(task)] = static_cast<int>(x);
      if (x == start) break;
      task = previous;
    }
  }

  bool repair_task(std::size_t start) {
    const std::size_t a = g_.a(), b = g_.b();
    std::vector<int> via_task(a, -1);  // task that reached robot i
    std::vector<char> seen_task(b, 0);
    std::queue<std::size_t> q;
    q.push(start);
    seen_task[start] = 1;
    while (!q.empty()) {
      const std::size_t t = q.front();
      q.pop();
      for (std::size_t i = 0; i < a; ++i) {
        if (locked_l_[i] || via_task[i] >= 0 || !tight(i, t)) continue;
        via_task[i] = static_cast<int>(t);
        const int y = mate_l_[i];
        if (y < 0 || !required_r(static_cast<std::size_t>(y))) {
          if (y >= 0) mate_r_[static_cast<std::size_t>(y)] = -1;
          flip_from_robot(i, via_task, start);
          return true;
        }
        if (!seen_task[static_cast<std::size_t>(y)]) {
          seen_task[static_cast<std::size_t>(y)] = 1;
          q.push(static_cast<std::size_t>(y));
        }
      }
    }
    return false;
  }

  void flip_from_robot(std::size_t i, const std::vector<int>& via_task, std::size_t start) {
    int robot = static_cast<int>(i);
    while (true) {
      const std::size_t t = static_cast<std::size_t>(via_task[static_cast<std::size_t>(robot)]);
      const int previous = mate_r_[t];
      mate_r_[t] = robot;
      mate_l_[static_cast<std::size_t>(robot)] = static_cast<int>(t);
      if (t == start) break;
      robot = previous;
    }
  }

  const DenseBigraph& g_;
  const std::vector<double>& u_;
  const std::vector<double>& v_;
  std::vector<int> mate_l_, mate_r_;
  std::vector<char> locked_l_, locked_r_;
  double tol_ = 0.0;
};

}  // namespace detail

/// Maximum-weight matching with the deterministic (label, task id) tie-break.
inline Matching max_weight_matching(const WeightedBigraph& graph) {
  const detail::DenseBigraph g(graph);
  const std::size_t a = g.a(), b = g.b();
  if (g.max_weight <= 0.0) return {};

  const double W = g.max_weight;
  const double eps = 1e-13 * W;
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(a, W), v(b, 0.0);
  std::vector<int> mate_l(a, -1), mate_r(b, -1);

  std::vector<char> in_s(a), in_t(b);
  std::vector<double> slack(b);
  std::vector<int> slack_from(b), pred(b);
  std::vector<std::size_t> s_list;

  bool finished = false;
  while (!finished) {
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < a; ++i)
      if (mate_l[i] < 0) roots.push_back(i);
    if (roots.empty() || u[roots.front()] <= 0.0) break;

    std::fill(in_s.begin(), in_s.end(), 0);
    std::fill(in_t.begin(), in_t.end(), 0);
    std::fill(slack.begin(), slack.end(), inf);
    std::fill(slack_from.begin(), slack_from.end(), -1);
    s_list.clear();

    auto add_to_forest = [&](std::size_t i) {
      in_s[i] = 1;
      s_list.push_back(i);
      for (std::size_t j = 0; j < b; ++j) {
        if (in_t[j] || !g.edge(i, j)) continue;
        const double s = u[i] + v[j] - g.weight(i, j);
        if (s < slack[j]) {
          slack[j] = s;
          slack_from[j] = static_cast<int>(i);
        }
      }
    };
    for (std::size_t r : roots) add_to_forest(r);

    while (true) {
      std::size_t tight = b;
      for (std::size_t j = 0; j < b; ++j) {
        if (!in_t[j] && slack[j] <= eps) {
          tight = j;
          break;
        }
      }
      if (tight < b) {
        in_t[tight] = 1;
        pred[tight] = slack_from[tight];
        if (mate_r[tight] < 0) {
          int j = static_cast<int>(tight);
          while (j >= 0) {
            const std::size_t i = static_cast<std::size_t>(pred[static_cast<std::size_t>(j)]);
            const int previous = mate_l[i];
            mate_l[i] = j;
            mate_r[static_cast<std::size_t>(j)] = static_cast<int>(i);
            j = previous;
          }
          break;
        }
        add_to_forest(static_cast<std::size_t>(mate_r[tight]));
        continue;
      }

      double d_robot = inf, d_edge = inf;
      for (std::size_t i : s_list) d_robot = std::min(d_robot, u[i]);
      for (std::size_t j = 0; j < b; ++j)
        if (!in_t[j]) d_edge = std::min(d_edge, slack[j]);
      const double delta = std::min(d_robot, d_edge);
      for (std::size_t i : s_list) u[i] = std::max(0.0, u[i] - delta);
      for (std::size_t j = 0; j < b; ++j) {
        if (in_t[j])
          v[j] += delta;
        else if (slack[j] < inf)
          slack[j] -= delta;
      }
      if (d_robot <= d_edge) {
        // Exposed robots reached zero dual: the current matching is optimal.
        for (std::size_t r : roots) u[r] = 0.0;
        finished = true;
        break;
      }
    }
  }

  detail::TieBreaker tie(g, u, v, std::move(mate_l), std::move(mate_r));
  return g.to_matching(tie.run());
}

/// Exhaustive oracle with the same optimality tolerance and tie-break as
/// max_weight_matching. Refuses graphs with more than 64 robot/task pairs.
inline Matching brute_force_matching(const WeightedBigraph& graph) {
  const detail::DenseBigraph g(graph);
  const std::size_t a = g.a(), b = g.b();
  if (a * b > 64) throw RefusalError("brute-force matching limited to 64 robot/task pairs");
  if (g.max_weight <= 0.0) return {};

  std::vector<int> mate(a, -1);
  std::vector<char> used(b, 0);

  double best = 0.0;
  auto find_best = [&](auto&& self, std::size_t i, double acc) -> void {
    if (i == a) {
      best = std::max(best, acc);
      return;
    }
    for (std::size_t j = 0; j < b; ++j) {
      if (used[j] || !g.edge(i, j)) continue;
      used[j] = 1;
      self(self, i + 1, acc + g.weight(i, j));
      used[j] = 0;
    }
    self(self, i + 1, acc);
  };
  find_best(find_best, 0, 0.0);

  const double floor = best - kMatchingTolerance * g.max_weight;
  std::vector<std::pair<std::size_t, std::size_t>> current, chosen;
  bool have = false;
  auto select = [&](auto&& self, std::size_t i, double acc) -> void {
    if (i == a) {
      if (acc < floor) return;
      if (!have || std::lexicographical_compare(current.begin(), current.end(), chosen.begin(), chosen.end())) {
        chosen = current;
        have = true;
      }
      return;
    }
    for (std::size_t j = 0; j < b; ++j) {
      if (used[j] || !g.edge(i, j)) continue;
      used[j] = 1;
      current.emplace_back(i, j);
      self(self, i + 1, acc + g.weight(i, j));
      current.pop_back();
      used[j] = 0;
    }
    self(self, i + 1, acc);
  };
  select(select, 0, 0.0);

  std::vector<int> mates(a, -1);
  for (const auto& [i, j] : chosen) mates[i] = static_cast<int>(j);
  return g.to_matching(mates);
}

}  // namespace mrta
