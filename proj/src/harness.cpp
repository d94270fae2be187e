#include "esg/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "esg/noncoord.hpp"
#include "esg/rng.hpp"
#include "esg/stackelberg.hpp"

namespace esg {

std::string format_value(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

uint64_t replica_seed(uint64_t master, const std::string& cell_id, int replica) {
  return hash_combine(hash_combine(master, fnv1a64(cell_id)),
                      static_cast<uint64_t>(replica));
}

uint64_t solver_seed(uint64_t master, const std::string& cell_id, int replica,
                     const std::string& solver) {
  return hash_combine(replica_seed(master, cell_id, replica), fnv1a64(solver));
}

SolverFn lookup_solver(const std::string& name) {
  auto starts_with = [&](const std::string& prefix) {
    return name.rfind(prefix, 0) == 0;
  };
  if (name == "stack:brute")
    return [](const Instance& inst, uint64_t) {
      return stackelberg_bruteforce(inst).value;
    };
  if (name == "stack:sa-relax")
    return [](const Instance& inst, uint64_t seed) {
      return sa_stackelberg(inst, SaVariant::Relax, seed).value;
    };
  if (name == "stack:sa-full")
    return [](const Instance& inst, uint64_t seed) {
      return sa_stackelberg(inst, SaVariant::Full, seed).value;
    };
  if (starts_with("stack:random:")) {
    const int samples = std::stoi(name.substr(13));
    return [samples](const Instance& inst, uint64_t seed) {
      return random_baseline(inst, samples, seed, Responder::Coordinated).value;
    };
  }
  if (name == "blue:brute")
    return [](const Instance& inst, uint64_t) { return best_blue_bruteforce(inst).value; };
  if (name == "blue:dp")
    return [](const Instance& inst, uint64_t) { return best_blue_dp(inst).value; };
  if (name == "blue:sa-relax")
    return [](const Instance& inst, uint64_t seed) {
      return sa_blue(inst, SaVariant::Relax, seed).value;
    };
  if (name == "blue:sa-full")
    return [](const Instance& inst, uint64_t seed) {
      return sa_blue(inst, SaVariant::Full, seed).value;
    };
  if (starts_with("blue:random:")) {
    const int samples = std::stoi(name.substr(12));
    return [samples](const Instance& inst, uint64_t seed) {
      return random_baseline(inst, samples, seed, Responder::Greedy).value;
    };
  }
  throw std::invalid_argument("unknown solver: " + name);
}

namespace {

int pool_size() {
  if (const char* env = std::getenv("ESG_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct Sample {
  double value = 0.0;
  double seconds = 0.0;
  bool present = false;
};

CellStats aggregate(const std::vector<Sample>& samples, bool record_walltime) {
  CellStats s;
  std::vector<double> vals, secs;
  for (const auto& x : samples)
    if (x.present) {
      vals.push_back(x.value);
      secs.push_back(record_walltime ? x.seconds : 0.0);
    }
  s.replicas = static_cast<int>(vals.size());
  if (vals.empty()) return s;
  auto mean_of = [](const std::vector<double>& v) {
    double sum = 0.0;
    for (const double x : v) sum += x;
    return sum / static_cast<double>(v.size());
  };
  auto std_of = [&](const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0.0;
    for (const double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
  };
  s.mean_utility = mean_of(vals);
  s.std_utility = std_of(vals, s.mean_utility);
  s.mean_seconds = mean_of(secs);
  s.std_seconds = std_of(secs, s.mean_seconds);
  return s;
}

}  // namespace

ResultsTable run_experiment(const ExperimentConfig& cfg) {
  const size_t n_cells = cfg.cells.size();
  const size_t n_solvers = cfg.solvers.size();
  std::vector<SolverFn> solvers;
  for (const auto& name : cfg.solvers) solvers.push_back(lookup_solver(name));
  if (cfg.replicas < 0) throw std::invalid_argument("replicas must be >= 0");

  // results[cell][solver][replica]
  std::vector<std::vector<std::vector<Sample>>> results(
      n_cells, std::vector<std::vector<Sample>>(
                   n_solvers, std::vector<Sample>(static_cast<size_t>(cfg.replicas))));
  std::vector<double> cell_spent(n_cells, 0.0);
  std::vector<char> cell_truncated(n_cells, 0);
  std::mutex spent_mutex;

  struct Task {
    size_t cell;
    int replica;
  };
  std::vector<Task> tasks;
  for (size_t c = 0; c < n_cells; ++c)
    for (int r = 0; r < cfg.replicas; ++r) tasks.push_back({c, r});

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task task = tasks[idx];
      const auto& cell = cfg.cells[task.cell];

      if (cfg.cell_time_budget_seconds > 0.0) {
        std::lock_guard<std::mutex> lock(spent_mutex);
        if (cell_spent[task.cell] >= cfg.cell_time_budget_seconds) {
          cell_truncated[task.cell] = 1;
          continue;
        }
      }

      GeneratorConfig gen = cell.gen;
      gen.seed = replica_seed(cfg.master_seed, cell.id, task.replica);
      const Instance inst = generate(gen);
      double spent_here = 0.0;
      for (size_t s = 0; s < n_solvers; ++s) {
        const auto t0 = std::chrono::steady_clock::now();
        const double value = solvers[s](
            inst, solver_seed(cfg.master_seed, cell.id, task.replica, cfg.solvers[s]));
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results[task.cell][s][static_cast<size_t>(task.replica)] = {value, dt, true};
        spent_here += dt;
      }
      if (cfg.cell_time_budget_seconds > 0.0) {
        std::lock_guard<std::mutex> lock(spent_mutex);
        cell_spent[task.cell] += spent_here;
      }
    }
  };

  const int threads =
      std::min(pool_size(), static_cast<int>(std::max<size_t>(tasks.size(), 1)));
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  auto guarded = [&]() {
    try {
      worker();
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(tasks.size());
    }
  };
  for (int i = 1; i < threads; ++i) pool.emplace_back(guarded);
  guarded();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  ResultsTable table;
  if (cfg.replicas == 0) return table;
  for (size_t c = 0; c < n_cells; ++c) {
    const auto& cell = cfg.cells[c];
    for (size_t s = 0; s < n_solvers; ++s) {
      ResultsTable::Row row;
      row.cell_id = cell.id;
      row.n = cell.gen.n;
      row.k = cell.gen.k;
      row.tau = cell.gen.tau == kInfiniteTau ? "inf" : std::to_string(cell.gen.tau);
      row.generator = kind_name(cell.gen.kind);
      row.solver = cfg.solvers[s];
      row.stats = aggregate(results[c][s], cfg.record_walltime);
      row.complete = !cell_truncated[c];
      table.rows.push_back(row);

      std::vector<double> raw;
      for (const auto& sample : results[c][s])
        if (sample.present) raw.push_back(sample.value);
      table.raw[{cell.id, cfg.solvers[s]}] = std::move(raw);
    }
  }
  return table;
}

std::string ResultsTable::to_csv() const {
  std::ostringstream os;
  os << "# aggregation: mean over replicas, sample standard deviation (n-1)\n";
  os << "cell_id,n,k,tau,generator,solver,mean_utility,std_utility,mean_seconds,"
        "std_seconds,replicas\n";
  for (const auto& r : rows) {
    os << r.cell_id << "," << r.n << "," << r.k << "," << r.tau << "," << r.generator << ","
       << r.solver << "," << format_value(r.stats.mean_utility) << ","
       << format_value(r.stats.std_utility) << "," << format_value(r.stats.mean_seconds)
       << "," << format_value(r.stats.std_seconds) << "," << r.stats.replicas << "\n";
  }
  return os.str();
}

PairedComparison paired_compare(const ResultsTable& table, const std::string& solver_a,
                                const std::string& solver_b) {
  PairedComparison out;
  std::vector<std::string> cell_order;
  for (const auto& row : table.rows)
    if (cell_order.empty() || cell_order.back() != row.cell_id)
      cell_order.push_back(row.cell_id);

  for (const auto& cell : cell_order) {
    auto ita = table.raw.find({cell, solver_a});
    auto itb = table.raw.find({cell, solver_b});
    if (ita == table.raw.end() || itb == table.raw.end())
      throw std::invalid_argument("paired_compare: solver missing from table");
    const auto& a = ita->second;
    const auto& b = itb->second;
    if (a.size() != b.size())
      throw std::invalid_argument("paired_compare: unmatched replica sets");
    PairedCell pc;
    pc.cell_id = cell;
    for (size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      pc.mean_diff += d;
      if (std::abs(d) <= kValueTolerance)
        ++pc.equal;
      else if (d > 0)
        ++pc.a_greater;
      else
        ++pc.b_greater;
    }
    if (!a.empty()) pc.mean_diff /= static_cast<double>(a.size());
    out.cells.push_back(pc);
  }
  return out;
}

ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.master_seed = j.value("master_seed", 0ull);
  cfg.replicas = j.value("replicas", 50);
  cfg.cell_time_budget_seconds = j.value("time_budget_seconds", 0.0);
  cfg.record_walltime = j.value("record_walltime", false);
  cfg.solvers = j.at("solvers").get<std::vector<std::string>>();
  for (const auto& cj : j.at("cells")) {
    CellConfig cell;
    cell.id = cj.at("id").get<std::string>();
    cell.gen.kind = kind_from_name(cj.at("kind").get<std::string>());
    cell.gen.n = cj.at("n").get<int>();
    cell.gen.k = cj.at("k").get<int>();
    const auto& tau = cj.at("tau");
    cell.gen.tau = tau.is_string() ? kInfiniteTau : tau.get<int>();
    cell.gen.p = cj.value("p", 0.2);
    cell.gen.radius = cj.value("radius", 0.3);
    cfg.cells.push_back(std::move(cell));
  }
  return cfg;
}

nlohmann::json experiment_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["master_seed"] = cfg.master_seed;
  j["replicas"] = cfg.replicas;
  j["time_budget_seconds"] = cfg.cell_time_budget_seconds;
  j["record_walltime"] = cfg.record_walltime;
  j["solvers"] = cfg.solvers;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : cfg.cells) {
    nlohmann::json cj;
    cj["id"] = cell.id;
    cj["kind"] = kind_name(cell.gen.kind);
    cj["n"] = cell.gen.n;
    cj["k"] = cell.gen.k;
    if (cell.gen.tau == kInfiniteTau)
      cj["tau"] = "inf";
    else
      cj["tau"] = cell.gen.tau;
    cj["p"] = cell.gen.p;
    cj["radius"] = cell.gen.radius;
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  return j;
}

const std::map<std::string, Preset>& experiment_presets() {
  static const std::map<std::string, Preset> presets = [] {
    std::map<std::string, Preset> m;
    auto def_cell = [](std::string id, int n, int k, int tau) {
      CellConfig c;
      c.id = std::move(id);
      c.gen.kind = GeneratorConfig::Kind::Default;
      c.gen.n = n;
      c.gen.k = k;
      c.gen.tau = tau;
      return c;
    };
    {
      ExperimentConfig cfg;
      cfg.cells = {def_cell("def-n5-k2-tau2", 5, 2, 2), def_cell("def-n5-k3-tau2", 5, 3, 2),
                   def_cell("def-n5-k5-tau2", 5, 5, 2)};
      cfg.solvers = {"stack:brute"};
      m["coordinated-small-exact"] = {cfg, false};
      cfg.solvers = {"blue:brute"};
      m["greedy-small-exact"] = {cfg, false};
      cfg.solvers = {"blue:brute", "stack:brute"};
      m["coordination-gap-small"] = {cfg, false};
    }
    {
      ExperimentConfig cfg;
      cfg.cells = {def_cell("def-n7-k3-tau2", 7, 3, 2)};
      cfg.solvers = {"stack:brute", "stack:sa-relax", "stack:sa-full", "stack:random:1",
                     "stack:random:3000"};
      m["coordinated-medium-heuristics"] = {cfg, false};
    }
    {
      ExperimentConfig cfg;
      cfg.cells = {def_cell("def-n10-k5-tau2", 10, 5, 2)};
      cfg.solvers = {"blue:brute", "blue:sa-relax", "blue:sa-full", "blue:random:1",
                     "blue:random:1000"};
      m["greedy-medium-heuristics"] = {cfg, false};
    }
    {
      ExperimentConfig cfg;
      cfg.cells = {def_cell("def-n75-k10-tau5", 75, 10, 5)};
      cfg.replicas = 9;
      cfg.solvers = {"stack:sa-relax", "stack:sa-full", "stack:random:1",
                     "stack:random:30000000"};
      m["coordinated-large-heuristics"] = {cfg, true};
    }
    {
      ExperimentConfig cfg;
      cfg.cells = {def_cell("def-n75-k10-tau5", 75, 10, 5)};
      cfg.solvers = {"blue:sa-relax", "blue:sa-full", "blue:random:1", "blue:random:500000"};
      m["greedy-large-heuristics"] = {cfg, true};
    }
    return m;
  }();
  return presets;
}

}  // namespace esg
