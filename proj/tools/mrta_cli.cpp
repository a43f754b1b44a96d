// mrta: scenario generation, mission simulation, policy comparison, sweeps,
// and centralized plan solving/verification.
//
// Exit codes: 0 success (or feasible plan), 1 usage error, 2 domain error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrta/mrta.hpp"

namespace {

using namespace mrta;

constexpr int kUsageError = 1;
constexpr int kDomainError = 2;
constexpr int kMaxIlpTasks = 12;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Output {
public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw Error("cannot write " + path);
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    try {
      if (dash != std::string::npos && dash > 0) {
        const int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
        for (int m = lo; m <= hi; ++m) out.push_back(m);
      } else {
        out.push_back(std::stoi(item));
      }
    } catch (const std::exception&) {
      throw UsageError("bad size list entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("size list is empty");
  for (int m : out)
    if (m < 1) throw UsageError("robot counts must be at least 1");
  return out;
}

std::vector<double> parse_latencies(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("bad latency entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("latency list is empty");
  return out;
}

struct SimFlags {
  std::string scenario;
  std::string policy = "dec-mrta";
  std::uint64_t seed = 0;
  int reps = 1;
  double latency = 0.0;
  double lead = 1.0;
  std::string out;
  bool no_timing = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("-s,--scenario", scenario, "Scenario file")->required();
    cmd->add_option("--seed", seed, "Base seed (rep k uses seed + k)");
    cmd->add_option("--reps", reps, "Repetitions")->check(CLI::PositiveNumber);
    cmd->add_option("--latency", latency, "Communication latency (min)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--lead", lead, "Decision lead time (min)")->check(CLI::NonNegativeNumber);
    cmd->add_option("-o,--out", out, "CSV output path (default stdout)");
    cmd->add_flag("--no-timing", no_timing, "Leave compute-time columns empty");
  }

  SimConfig config(Policy p, std::uint64_t s) const {
    SimConfig c;
    c.policy = p;
    c.seed = s;
    c.latency = latency;
    c.decision_lead = lead;
    return c;
  }
};

void print_rows(std::ostream& os, const std::vector<RunReport>& rows, bool timing) {
  os << csv_header() << '\n';
  for (const auto& r : rows) os << csv_row(r, timing) << '\n';
}

int cmd_generate(const GeneratorSpec& spec, std::uint64_t seed, const std::string& out) {
  const Scenario s = generate_scenario(spec, seed);
  Output o(out);
  o.stream() << serialize_scenario(s, 2) << '\n';
  return 0;
}

int cmd_run(const SimFlags& f, const std::string& log_path) {
  const Scenario s = load_scenario_file(f.scenario);
  const Policy p = parse_policy(f.policy);
  const std::string hash = scenario_hash(s);
  std::vector<RunReport> rows;
  for (int rep = 0; rep < f.reps; ++rep) {
    const std::uint64_t seed = f.seed + static_cast<std::uint64_t>(rep);
    const MissionResult r = run_mission(s, f.config(p, seed));
    rows.push_back({hash, to_string(p), s.num_robots, f.latency, seed, rep, r.metrics});
    if (!log_path.empty() && rep == 0) {
      Output log(log_path);
      log.stream() << r.log.to_text(!f.no_timing);
    }
  }
  Output o(f.out);
  print_rows(o.stream(), rows, !f.no_timing);
  return 0;
}

int cmd_compare(const SimFlags& f, const std::vector<std::string>& policies) {
  const Scenario s = load_scenario_file(f.scenario);
  const std::string hash = scenario_hash(s);
  for (const auto& name : policies)
    if (name != "ilp") parse_policy(name);

  std::vector<RunReport> rows;
  std::map<std::string, std::pair<double, double>> summary;  // policy -> (sum rate, sum compute)
  for (const auto& name : policies) {
    if (name == "ilp") {
      if (static_cast<int>(s.tasks.size()) > kMaxIlpTasks)
        throw RefusalError("the exact solver is limited to " + std::to_string(kMaxIlpTasks) +
                           " tasks; drop 'ilp' from --policies or use a smaller scenario");
      const ilp::Instance inst = ilp::build_instance(s);
      const ilp::SolveResult sol = ilp::solve_exact(inst);
      const Metrics m = plan_metrics(sol.plan, inst, sol.wall_seconds);
      for (int rep = 0; rep < f.reps; ++rep) {
        rows.push_back({hash, "ilp", s.num_robots, 0.0, f.seed + static_cast<std::uint64_t>(rep), rep, m});
        summary[name].first += m.completion_rate;
        summary[name].second += m.cumulative_compute;
      }
      continue;
    }
    const Policy p = parse_policy(name);
    for (int rep = 0; rep < f.reps; ++rep) {
      const std::uint64_t seed = f.seed + static_cast<std::uint64_t>(rep);
      const Metrics m = run_mission(s, f.config(p, seed)).metrics;
      rows.push_back({hash, name, s.num_robots, f.latency, seed, rep, m});
      summary[name].first += m.completion_rate;
      summary[name].second += m.cumulative_compute;
    }
  }
  Output o(f.out);
  print_rows(o.stream(), rows, !f.no_timing);

  std::fprintf(stderr, "%-10s %16s %22s\n", "policy", "completion_rate", "cumulative_compute_s");
  for (const auto& name : policies) {
    const auto& [rate, compute] = summary[name];
    std::fprintf(stderr, "%-10s %16.4f %22.6g\n", name.c_str(), rate / f.reps, compute / f.reps);
  }
  return 0;
}

int cmd_sweep(const SimFlags& f, const std::vector<int>& sizes, const std::vector<double>& latencies) {
  const Scenario s = load_scenario_file(f.scenario);
  const Policy p = parse_policy(f.policy);
  const std::string hash = scenario_hash(s);
  std::vector<RunReport> rows;
  for (int rep = 0; rep < f.reps; ++rep) {
    const std::uint64_t seed = f.seed + static_cast<std::uint64_t>(rep);
    for (const auto& row : sweep_latency(s, sizes, latencies, f.config(p, seed)))
      rows.push_back({hash, to_string(p), row.robots, row.latency, seed, rep, row.metrics});
  }
  Output o(f.out);
  print_rows(o.stream(), rows, !f.no_timing);
  return 0;
}

int cmd_solve(const std::string& scenario, const std::string& out, double timeout) {
  const Scenario s = load_scenario_file(scenario);
  if (static_cast<int>(s.tasks.size()) > kMaxIlpTasks)
    throw RefusalError("the exact solver is limited to " + std::to_string(kMaxIlpTasks) + " tasks");
  const ilp::SolveResult r = ilp::solve_exact(ilp::build_instance(s), std::chrono::duration<double>(timeout));
  Output o(out);
  o.stream() << ilp::serialize_plan(r.plan) << '\n';
  std::fprintf(stderr, "objective %.6f served %d/%zu %s nodes %llu wall %.6fs\n", r.objective, r.plan.served_count(),
               s.tasks.size(), r.optimal ? "optimal" : "timeout", static_cast<unsigned long long>(r.nodes),
               r.wall_seconds);
  return 0;
}

int cmd_verify(const std::string& plan_path, const std::string& scenario) {
  const Scenario s = load_scenario_file(scenario);
  const ilp::RoutePlan plan = ilp::load_plan_file(plan_path);
  const ilp::ConstraintReport report = ilp::check_constraints(plan, ilp::build_instance(s));
  for (const auto& v : report.violations)
    std::printf("%s robot=%d tour=%d i=%d j=%d lhs=%g rhs=%g %s\n", ilp::family_name(v.family), v.robot, v.tour, v.i,
                v.j, v.lhs, v.rhs, v.detail.c_str());
  if (report.feasible()) {
    std::printf("feasible: objective %.6f, %d tasks served\n", ilp::objective_value(plan), plan.served_count());
    return 0;
  }
  std::printf("infeasible: %zu violations\n", report.violations.size());
  return kDomainError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized multi-robot task allocation toolkit"};
  app.require_subcommand(1);

  GeneratorSpec spec;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  double alpha = 0, epsilon = -1;
  auto* gen = app.add_subcommand("generate", "Generate a random scenario");
  gen->add_option("--tasks", spec.tasks, "Number of tasks")->check(CLI::NonNegativeNumber);
  gen->add_option("--robots", spec.robots, "Number of robots");
  gen->add_option("--area", spec.area_side, "Side of the square task area (km)");
  gen->add_option("--deadline-min", spec.deadline_min, "Shortest deadline window (min)");
  gen->add_option("--deadline-max", spec.deadline_max, "Longest deadline window (min)");
  gen->add_option("--dynamic", spec.dynamic_fraction, "Share of tasks arriving during the mission");
  gen->add_option("--arrival-horizon", spec.arrival_horizon, "Latest dynamic arrival (min)");
  gen->add_option("--speed", spec.speed, "Robot speed (km/min)");
  gen->add_option("--range", spec.max_range, "Range per tour (km)");
  gen->add_option("--payload", spec.payload, "Kits per tour");
  gen->add_option("--tours", spec.max_tours, "Tours per robot");
  gen->add_option("--alpha", alpha, "Incentive time constant");
  gen->add_option("--epsilon", epsilon, "Incentive range margin (km)");
  gen->add_option("--service", spec.service_time, "Service time at a task (min)");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("-o,--out", gen_out, "Output path (default stdout)");

  SimFlags run_flags;
  std::string log_path;
  auto* run = app.add_subcommand("run", "Simulate one mission");
  run_flags.attach(run);
  run->add_option("--policy", run_flags.policy, "dec-mrta or rnd-feas");
  run->add_option("--log", log_path, "Write the mission log of rep 0 here");

  SimFlags cmp_flags;
  cmp_flags.reps = 30;
  std::vector<std::string> policies{"dec-mrta", "rnd-feas"};
  auto* compare = app.add_subcommand("compare", "Compare policies on one scenario");
  cmp_flags.attach(compare);
  compare->add_option("--policies", policies, "Policies (dec-mrta, rnd-feas, ilp)")->delimiter(',');

  SimFlags size_flags;
  std::string size_list = "1-10";
  auto* sweep_size = app.add_subcommand("sweep-size", "Completion rate over swarm sizes");
  size_flags.attach(sweep_size);
  sweep_size->add_option("--policy", size_flags.policy, "dec-mrta or rnd-feas");
  sweep_size->add_option("--sizes", size_list, "Robot counts, e.g. 1,2,5 or 1-10");

  SimFlags lat_flags;
  std::string lat_sizes = "1,2,5,10,20", lat_list = "0,1";
  auto* sweep_lat = app.add_subcommand("sweep-latency", "Swarm sizes crossed with latencies");
  lat_flags.attach(sweep_lat);
  sweep_lat->add_option("--policy", lat_flags.policy, "dec-mrta or rnd-feas");
  sweep_lat->add_option("--sizes", lat_sizes, "Robot counts");
  sweep_lat->add_option("--latencies", lat_list, "Latencies in minutes, e.g. 0,1");

  std::string solve_scenario, solve_out;
  double solve_timeout = 60;
  auto* solve = app.add_subcommand("solve", "Solve the centralized plan exactly");
  solve->add_option("-s,--scenario", solve_scenario, "Scenario file")->required();
  solve->add_option("-o,--out", solve_out, "Plan output path (default stdout)");
  solve->add_option("--timeout", solve_timeout, "Time limit (s)")->check(CLI::PositiveNumber);

  std::string verify_plan, verify_scenario;
  auto* verify = app.add_subcommand("verify", "Check a plan against the centralized constraints");
  verify->add_option("-p,--plan", verify_plan, "Plan file")->required();
  verify->add_option("-s,--scenario", verify_scenario, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*gen) {
      if (alpha > 0) spec.alpha = alpha;
      if (epsilon >= 0) spec.epsilon = epsilon;
      return cmd_generate(spec, gen_seed, gen_out);
    }
    if (*run) return cmd_run(run_flags, log_path);
    if (*compare) return cmd_compare(cmp_flags, policies);
    if (*sweep_size) {
      const std::vector<int> sizes = parse_sizes(size_list);
      return cmd_sweep(size_flags, sizes, {size_flags.latency});
    }
    if (*sweep_lat) {
      const std::vector<int> sizes = parse_sizes(lat_sizes);
      const std::vector<double> latencies = parse_latencies(lat_list);
      return cmd_sweep(lat_flags, sizes, latencies);
    }
    if (*solve) return cmd_solve(solve_scenario, solve_out, solve_timeout);
    if (*verify) return cmd_verify(verify_plan, verify_scenario);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageError;
}
