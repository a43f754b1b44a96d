// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mrta/mrta.hpp"

using namespace mrta;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Verdict& v) {
  std::printf("[%s] criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

/// Every zero-latency mission and every rerun goes through here so criteria
/// 6 and 8 see all of them.
struct MissionAudit {
  int runs = 0;
  int unsound = 0;
  int nondeterministic = 0;
  int zero_latency_runs = 0;
  int zero_latency_wasted = 0;
  int zero_latency_double = 0;
  std::string first_problem;

  Metrics run(const Scenario& s, const SimConfig& c) {
    const MissionResult a = run_mission(s, c);
    const MissionResult b = run_mission(s, c);
    ++runs;
    if (a.log.to_text(false) != b.log.to_text(false)) ++nondeterministic;
    const auto problems = check_mission_soundness(s, a.log);
    if (!problems.empty()) {
      ++unsound;
      if (first_problem.empty()) first_problem = problems.front();
    }
    if (c.latency == 0.0) {
      ++zero_latency_runs;
      zero_latency_wasted += a.metrics.wasted_trips;
      for (const auto& p : problems)
        if (p.find("completed twice") != std::string::npos) ++zero_latency_double;
    }
    return a.metrics;
  }
};

WeightedBigraph random_bigraph(Rng& rng) {
  const int a = 1 + static_cast<int>(rng.index(7));
  const int b = 1 + static_cast<int>(rng.index(7));
  const double density = rng.uniform(0.3, 1.0);
  std::vector<int> labels(static_cast<std::size_t>(a));
  for (int i = 0; i < a; ++i) labels[static_cast<std::size_t>(i)] = i + 1;
  for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[rng.index(i)]);
  WeightedBigraph g;
  for (int r = 0; r < a; ++r) g.add_robot({r + 1, labels[static_cast<std::size_t>(r)]});
  for (int r = 0; r < a; ++r)
    for (int t = 0; t < b; ++t)
      if (rng.uniform01() < density) g.add_edge(r + 1, t + 1, 10.0 * (1.0 - rng.uniform01()));
  return g;
}

Verdict matching_exactness() {
  const auto t0 = Clock::now();
  Rng rng(1001);
  constexpr int kGraphs = 1000;
  int weight_mismatch = 0, pair_mismatch = 0;
  for (int i = 0; i < kGraphs; ++i) {
    const WeightedBigraph g = random_bigraph(rng);
    const Matching fast = max_weight_matching(g), slow = brute_force_matching(g);
    if (std::abs(fast.total_weight - slow.total_weight) > 1e-9) ++weight_mismatch;
    if (fast.pairs != slow.pairs) ++pair_mismatch;
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = weight_mismatch == 0 && pair_mismatch == 0 && secs < 10.0;
  v.detail = fmt("%d graphs up to 7x7, weight mismatches %d, pair mismatches %d, %.2f s (limit 10 s)", kGraphs,
                 weight_mismatch, pair_mismatch, secs);
  return v;
}

Verdict ilp_exactness() {
  const auto t0 = Clock::now();
  Rng rng(2002);
  constexpr int kInstances = 200;
  int objective_mismatch = 0, infeasible = 0, not_optimal = 0;
  for (int i = 0; i < kInstances; ++i) {
    const ilp::Instance inst = ilp::build_instance(fixtures::random_ilp_scenario(rng));
    const ilp::SolveResult exact = ilp::solve_exact(inst);
    const ilp::OracleResult oracle = ilp::enumerate_oracle(inst);
    if (exact.objective != oracle.objective) ++objective_mismatch;
    if (!ilp::check_constraints(exact.plan, inst).feasible()) ++infeasible;
    if (!exact.optimal) ++not_optimal;
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = objective_mismatch == 0 && infeasible == 0 && not_optimal == 0 && secs < 60.0;
  v.detail = fmt("%d instances (n<=5, m<=2, h<=2), objective mismatches %d, infeasible plans %d, %.2f s (limit 60 s)",
                 kInstances, objective_mismatch, infeasible, secs);
  return v;
}

Verdict completion_dominance(MissionAudit& audit) {
  constexpr int kSeeds = 30;
  double dec = 0, rnd = 0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const Scenario s = fixtures::generous_scenario(40, 4, 3000 + static_cast<std::uint64_t>(seed));
    SimConfig c;
    c.seed = static_cast<std::uint64_t>(seed);
    dec += audit.run(s, c).completion_rate;
    c.policy = Policy::rnd_feas;
    rnd += audit.run(s, c).completion_rate;
  }
  dec /= kSeeds;
  rnd /= kSeeds;

  // Tiny instances: the tour limit equals n, so the centralized plan is never
  // short of tours.
  constexpr int kTiny = 30;
  int violated = 0, ilp_total = 0, dec_total = 0;
  for (int seed = 1; seed <= kTiny; ++seed) {
    GeneratorSpec spec;
    spec.tasks = 5;
    spec.robots = 2;
    spec.max_tours = 5;
    spec.payload = 2;
    spec.deadline_min = 200;
    spec.deadline_max = 400;
    const Scenario s = generate_scenario(spec, 3100 + static_cast<std::uint64_t>(seed));
    const int ilp_served = ilp::solve_exact(ilp::build_instance(s)).plan.served_count();
    SimConfig c;
    c.seed = static_cast<std::uint64_t>(seed);
    const int dec_served = audit.run(s, c).tasks_completed;
    ilp_total += ilp_served;
    dec_total += dec_served;
    if (ilp_served < dec_served) ++violated;
  }

  Verdict v;
  v.pass = dec >= rnd && violated == 0;
  v.detail = fmt("n=40 m=4 over %d seeds: dec-mrta %.4f vs rnd-feas %.4f; tiny n=5: ilp served %d, dec-mrta %d, "
                 "instances where ilp < dec-mrta: %d/%d",
                 kSeeds, dec, rnd, ilp_total, dec_total, violated, kTiny);
  return v;
}

Verdict compute_separation() {
  constexpr int kSeeds = 10;
  std::vector<double> ratios;
  double dec_sum = 0, ilp_sum = 0;
  int timeouts = 0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    GeneratorSpec spec;
    spec.tasks = 10;
    spec.robots = 3;
    spec.max_tours = 2;
    const Scenario s = generate_scenario(spec, 4000 + static_cast<std::uint64_t>(seed));
    SimConfig c;
    c.seed = static_cast<std::uint64_t>(seed);
    const double dec = run_mission(s, c).metrics.cumulative_compute;
    const ilp::SolveResult exact = ilp::solve_exact(ilp::build_instance(s));
    if (!exact.optimal) ++timeouts;
    dec_sum += dec;
    ilp_sum += exact.wall_seconds;
    ratios.push_back(exact.wall_seconds / std::max(dec, 1e-12));
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = (ratios[kSeeds / 2 - 1] + ratios[kSeeds / 2]) / 2.0;
  Verdict v;
  v.pass = median >= 10.0;
  v.detail = fmt("n=10 m=3 h=2 over %d seeds: median ilp/dec-mrta compute ratio %.1fx (bar 10x), range %.1fx..%.1fx, "
                 "mean dec-mrta %.3g s, mean ilp %.3g s, solver timeouts %d",
                 kSeeds, median, ratios.front(), ratios.back(), dec_sum / kSeeds, ilp_sum / kSeeds, timeouts);
  return v;
}

Verdict scalability_shape(MissionAudit& audit) {
  GeneratorSpec spec;
  spec.tasks = 200;
  const Scenario base = generate_scenario(spec, 5000);
  const std::vector<int> sizes{1, 2, 5, 10, 20, 40};
  constexpr int kSeeds = 10;
  std::vector<double> mean(sizes.size(), 0.0);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (int seed = 1; seed <= kSeeds; ++seed) {
      Scenario s = base;
      s.num_robots = sizes[i];
      SimConfig c;
      c.seed = static_cast<std::uint64_t>(seed);
      mean[i] += audit.run(s, c).completion_rate / kSeeds;
    }
  }
  bool monotone = true;
  std::string curve;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0 && mean[i] < mean[i - 1] - 0.02) monotone = false;
    curve += fmt("%sm=%d:%.3f", i ? " " : "", sizes[i], mean[i]);
  }
  const double first = mean[1] - mean[0];
  const double last = mean.back() - mean[mean.size() - 2];
  Verdict v;
  v.pass = monotone && last < first;
  v.detail = fmt("%s; first increment %.3f, last increment %.3f", curve.c_str(), first, last);
  return v;
}

Verdict zero_latency_conflict_free(const MissionAudit& audit) {
  Verdict v;
  v.pass = audit.zero_latency_wasted == 0 && audit.zero_latency_double == 0 && audit.zero_latency_runs > 0;
  v.detail = fmt("%d zero-latency missions from criteria 3 and 5: wasted trips %d, double completions %d",
                 audit.zero_latency_runs, audit.zero_latency_wasted, audit.zero_latency_double);
  return v;
}

Verdict latency_mechanism(MissionAudit& audit) {
  const Scenario fixture = fixtures::latency_fixture();
  SimConfig c;
  const int fixture_zero = audit.run(fixture, c).wasted_trips;
  c.latency = 1.0;
  const int fixture_one = audit.run(fixture, c).wasted_trips;

  GeneratorSpec spec;
  spec.tasks = 100;
  spec.robots = 10;
  spec.dynamic_fraction = 0.5;
  const Scenario mid = generate_scenario(spec, 7000);
  constexpr int kSeeds = 10;
  double wasted[2] = {0, 0};
  for (int li = 0; li < 2; ++li) {
    for (int seed = 1; seed <= kSeeds; ++seed) {
      SimConfig cell;
      cell.latency = li;
      cell.seed = static_cast<std::uint64_t>(seed);
      wasted[li] += audit.run(mid, cell).wasted_trips / static_cast<double>(kSeeds);
    }
  }
  Verdict v;
  v.pass = fixture_one >= 1 && fixture_zero == 0 && wasted[1] > wasted[0];
  v.detail = fmt("fixture wasted trips L=0: %d, L=1: %d; n=100 m=10 sweep mean wasted trips L=0: %.2f, L=1: %.2f",
                 fixture_zero, fixture_one, wasted[0], wasted[1]);
  return v;
}

Verdict mission_soundness(const MissionAudit& audit) {
  Verdict v;
  v.pass = audit.unsound == 0 && audit.nondeterministic == 0 && audit.runs > 0;
  v.detail = fmt("%d missions replayed twice: unsound logs %d, non-identical reruns %d%s%s", audit.runs, audit.unsound,
                 audit.nondeterministic, audit.first_problem.empty() ? "" : "; first problem: ",
                 audit.first_problem.c_str());
  return v;
}

}  // namespace

int main() {
  MissionAudit audit;
  report(1, "matching exactness", matching_exactness());
  report(2, "ILP exactness", ilp_exactness());
  report(3, "completion-rate dominance", completion_dominance(audit));
  report(4, "compute-time separation", compute_separation());
  report(5, "scalability saturation", scalability_shape(audit));
  report(6, "zero-latency conflict freedom", zero_latency_conflict_free(audit));
  report(7, "latency mechanism", latency_mechanism(audit));
  report(8, "mission soundness", mission_soundness(audit));
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
