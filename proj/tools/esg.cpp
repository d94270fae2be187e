// Command-line front end: instance generation, response and ordering
// solvers, model export, reduction construction, and the experiment runner.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "esg/generators.hpp"
#include "esg/harness.hpp"
#include "esg/json_io.hpp"
#include "esg/noncoord.hpp"
#include "esg/red_response.hpp"
#include "esg/reductions.hpp"
#include "esg/stackelberg.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

nlohmann::json report_json(const esg::SolveReport& report) {
  nlohmann::json j = report.to_json();
  j["plan"] = esg::plan_to_json(report.plan);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"escape sensing game toolkit"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  std::string gen_kind = "default", gen_out = "-", gen_tau = "0";
  esg::GeneratorConfig gen_cfg;
  gen->add_option("--kind", gen_kind, "default|euclidean|randomlevel|append");
  gen->add_option("--n", gen_cfg.n, "targets")->required();
  gen->add_option("--k", gen_cfg.k, "sensors")->required();
  gen->add_option("--tau", gen_tau, "recharge time or 'inf'")->required();
  gen->add_option("--seed", gen_cfg.seed, "seed");
  gen->add_option("--p", gen_cfg.p, "capability probability (default kind)");
  gen->add_option("--radius", gen_cfg.radius, "sensing radius (euclidean kind)");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // ---- solve-red ----
  auto* red = app.add_subcommand("solve-red", "exact/heuristic sensing response");
  std::string red_instance, red_sigma, red_solver = "dp", red_model_out;
  uint64_t red_seed = 0;
  uint64_t red_budget = esg::DpOptions{}.work_budget;
  bool red_untyped = false;
  red->add_option("--instance", red_instance, "instance JSON file")->required();
  red->add_option("--sigma", red_sigma, "comma-separated positions, e.g. 3,1,2")->required();
  red->add_option("--solver", red_solver, "dp|brute|greedy:random|greedy:remaining_value|greedy:harm");
  red->add_option("--seed", red_seed, "seed (greedy:random)");
  red->add_option("--budget", red_budget, "dp work budget");
  red->add_flag("--untyped", red_untyped, "disable sensor-class collapsing");
  red->add_option("--export-ilp", red_model_out, "also write the assignment model as text");

  // ---- solve-blue-greedy ----
  auto* blue = app.add_subcommand("solve-blue-greedy",
                                  "best ordering against independent greedy sensors");
  std::string blue_instance, blue_solver = "dp";
  uint64_t blue_seed = 0;
  esg::SaSchedule blue_schedule;
  int blue_samples = 1000;
  blue->add_option("--instance", blue_instance)->required();
  blue->add_option("--solver", blue_solver, "brute|dp|single-use|sa:relax|sa:full|random");
  blue->add_option("--samples", blue_samples, "orderings drawn by the random solver");
  blue->add_option("--seed", blue_seed);
  blue->add_option("--t0", blue_schedule.t0, "initial temperature");
  blue->add_option("--cool", blue_schedule.cool, "cooling factor");
  blue->add_option("--floor", blue_schedule.floor, "temperature floor");
  blue->add_option("--restarts", blue_schedule.restarts);
  blue->add_flag("--final-state", blue_schedule.final_state_return,
                 "return each restart's final ordering instead of best-seen");

  // ---- stackelberg ----
  auto* stack = app.add_subcommand("stackelberg", "leader optimum against exact responses");
  std::string stack_instance, stack_solver = "brute";
  uint64_t stack_seed = 0;
  esg::StackelbergSaOptions stack_opts;
  int stack_samples = 3000;
  stack->add_option("--instance", stack_instance)->required();
  stack->add_option("--solver", stack_solver, "brute|sa:relax|sa:full|random");
  stack->add_option("--samples", stack_samples, "orderings drawn by the random solver");
  stack->add_option("--seed", stack_seed);
  stack->add_option("--mu", stack_opts.mu, "exactly solved neighbor fraction (sa:full)");
  stack->add_option("--t0", stack_opts.schedule.t0);
  stack->add_option("--cool", stack_opts.schedule.cool);
  stack->add_option("--floor", stack_opts.schedule.floor);
  stack->add_option("--restarts", stack_opts.schedule.restarts);
  stack->add_flag("--always-move", stack_opts.always_move, "skip the acceptance draw");
  stack->add_flag("--final-state", stack_opts.schedule.final_state_return);

  // ---- gap ----
  auto* gap = app.add_subcommand("gap", "utility loss from sensor coordination");
  std::string gap_instance;
  bool gap_exact = false, gap_heuristic = false;
  uint64_t gap_seed = 0;
  gap->add_option("--instance", gap_instance)->required();
  gap->add_flag("--exact", gap_exact, "exhaustive orderings on both sides");
  gap->add_flag("--heuristic", gap_heuristic, "annealing on both sides");
  gap->add_option("--seed", gap_seed);

  // ---- reduce ----
  auto* reduce = app.add_subcommand("reduce", "build an adversarial instance");
  std::string reduce_kind, reduce_in, reduce_out = "-";
  reduce->add_option("--kind", reduce_kind, "hitting-set|r3sat")->required();
  reduce->add_option("--in", reduce_in, "problem JSON file")->required();
  reduce->add_option("--out", reduce_out, "instance file (default stdout)");

  // ---- experiment ----
  auto* exp = app.add_subcommand("experiment", "batch runner with CSV output");
  std::string exp_config, exp_preset, exp_out = "-";
  bool exp_list = false;
  exp->add_option("--config", exp_config, "experiment JSON file");
  exp->add_option("--preset", exp_preset, "named built-in configuration");
  exp->add_flag("--list-presets", exp_list);
  exp->add_option("--out", exp_out, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      gen_cfg.kind = esg::kind_from_name(gen_kind);
      gen_cfg.tau = gen_tau == "inf" ? esg::kInfiniteTau : std::stoi(gen_tau);
      const esg::Instance inst = esg::generate(gen_cfg);
      write_text(gen_out, esg::instance_to_json(inst).dump(2) + "\n");
      return 0;
    }

    if (red->parsed()) {
      const esg::Instance inst = esg::load_instance(red_instance);
      const esg::TargetOrdering sigma = esg::parse_ordering(red_sigma);
      if (!red_model_out.empty())
        write_text(red_model_out, esg::export_model(esg::build_red_ilp(inst, sigma)));
      esg::RedSolveResult res;
      if (red_solver == "dp") {
        res = esg::best_red_dp(inst, sigma, {red_budget, !red_untyped});
      } else if (red_solver == "brute") {
        res = esg::best_red_bruteforce(inst, sigma);
      } else if (red_solver.rfind("greedy:", 0) == 0) {
        const std::string policy = red_solver.substr(7);
        esg::GreedyPolicy p = policy == "random" ? esg::GreedyPolicy::Random
                              : policy == "remaining_value" ? esg::GreedyPolicy::RemainingValue
                              : policy == "harm" ? esg::GreedyPolicy::Harm
                                                 : throw std::invalid_argument(
                                                       "unknown greedy policy: " + policy);
        res = esg::greedy_red(inst, sigma, p, red_seed);
      } else {
        throw std::invalid_argument("unknown solver: " + red_solver);
      }
      nlohmann::json j{{"value", res.value}, {"plan", esg::plan_to_json(res.plan)}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (blue->parsed()) {
      const esg::Instance inst = esg::load_instance(blue_instance);
      if (blue_solver == "random") {
        const auto report =
            esg::random_baseline(inst, blue_samples, blue_seed, esg::Responder::Greedy);
        std::cout << report_json(report).dump(2) << "\n";
        return 0;
      }
      if (blue_solver == "sa:relax" || blue_solver == "sa:full") {
        const auto report = esg::sa_blue(
            inst, blue_solver == "sa:relax" ? esg::SaVariant::Relax : esg::SaVariant::Full,
            blue_seed, blue_schedule);
        std::cout << report_json(report).dump(2) << "\n";
        return 0;
      }
      esg::BlueSolveResult res;
      if (blue_solver == "brute")
        res = esg::best_blue_bruteforce(inst);
      else if (blue_solver == "dp")
        res = esg::best_blue_dp(inst);
      else if (blue_solver == "single-use")
        res = esg::best_blue_single_use(inst);
      else
        throw std::invalid_argument("unknown solver: " + blue_solver);
      nlohmann::json j{{"value", res.value}, {"sigma", res.sigma.positions}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (stack->parsed()) {
      const esg::Instance inst = esg::load_instance(stack_instance);
      esg::SolveReport report;
      if (stack_solver == "brute")
        report = esg::stackelberg_bruteforce(inst);
      else if (stack_solver == "random")
        report = esg::random_baseline(inst, stack_samples, stack_seed,
                                      esg::Responder::Coordinated);
      else if (stack_solver == "sa:relax")
        report = esg::sa_stackelberg(inst, esg::SaVariant::Relax, stack_seed, stack_opts);
      else if (stack_solver == "sa:full")
        report = esg::sa_stackelberg(inst, esg::SaVariant::Full, stack_seed, stack_opts);
      else
        throw std::invalid_argument("unknown solver: " + stack_solver);
      std::cout << report_json(report).dump(2) << "\n";
      return 0;
    }

    if (gap->parsed()) {
      if (gap_exact == gap_heuristic)
        throw std::invalid_argument("pass exactly one of --exact / --heuristic");
      const esg::Instance inst = esg::load_instance(gap_instance);
      const esg::GapResult g = gap_exact ? esg::coordination_gap_exact(inst)
                                         : esg::coordination_gap_heuristic(inst, gap_seed);
      nlohmann::json j{{"v_greedy", g.v_greedy},
                       {"v_coord", g.v_coord},
                       {"gap", g.gap},
                       {"solver_inconsistency", g.solver_inconsistency}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (reduce->parsed()) {
      std::ifstream in(reduce_in);
      if (!in) throw std::runtime_error("cannot open " + reduce_in);
      nlohmann::json pj;
      in >> pj;
      if (reduce_kind == "hitting-set") {
        esg::HittingSetProblem p;
        p.universe_size = pj.at("universe").get<int>();
        p.sets = pj.at("sets").get<std::vector<std::vector<int>>>();
        p.budget = pj.at("t").get<int>();
        auto red_out = esg::reduce_hitting_set(p);
        nlohmann::json j = esg::instance_to_json(red_out.instance);
        j["metadata"]["sigma"] = red_out.sigma.positions;
        j["metadata"]["threshold"] = "all targets sensed";
        write_text(reduce_out, j.dump(2) + "\n");
      } else if (reduce_kind == "r3sat") {
        esg::R3SatFormula f;
        f.num_vars = pj.at("variables").get<int>();
        for (const auto& cj : pj.at("clauses"))
          f.clauses.push_back({cj.at(0).get<int>(), cj.at(1).get<int>(), cj.at(2).get<int>()});
        auto red_out = esg::reduce_restricted_3sat(f);
        nlohmann::json j = esg::instance_to_json(red_out.instance);
        j["metadata"]["threshold"] = red_out.threshold;
        write_text(reduce_out, j.dump(2) + "\n");
      } else {
        throw std::invalid_argument("unknown reduction kind: " + reduce_kind);
      }
      return 0;
    }

    if (exp->parsed()) {
      if (exp_list) {
        for (const auto& [name, preset] : esg::experiment_presets())
          std::cout << name << (preset.long_running ? " (long-running)" : "") << "\n";
        return 0;
      }
      esg::ExperimentConfig cfg;
      if (!exp_preset.empty()) {
        const auto& presets = esg::experiment_presets();
        auto it = presets.find(exp_preset);
        if (it == presets.end())
          throw std::invalid_argument("unknown preset: " + exp_preset);
        cfg = it->second.config;
      } else if (!exp_config.empty()) {
        std::ifstream in(exp_config);
        if (!in) throw std::runtime_error("cannot open " + exp_config);
        nlohmann::json j;
        in >> j;
        cfg = esg::experiment_from_json(j);
      } else {
        throw std::invalid_argument("pass --config or --preset");
      }
      const esg::ResultsTable table = esg::run_experiment(cfg);
      write_text(exp_out, table.to_csv());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
