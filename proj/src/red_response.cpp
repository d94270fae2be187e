#include "esg/red_response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "esg/rng.hpp"

namespace esg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string idx2(const char* stem, int a, int b) {
  return std::string(stem) + "_" + std::to_string(a) + "_" + std::to_string(b);
}

// ---------------------------------------------------------------------------
// Brute force
// ---------------------------------------------------------------------------

struct BruteSearch {
  const Instance& inst;
  const std::vector<int>& order;  // target per position
  int tau;
  std::vector<int> last_pos;  // per sensor, last fired position (0 = never)
  std::vector<int> assign;    // per target, 0 or 1..k
  double partial = 0.0;       // value of surviving targets so far
  bool found = false;
  double best_value = kInf;
  std::vector<int> best_assign;

  void dfs(int pos) {
    if (found && partial > best_value) return;
    if (pos > inst.n) {
      if (!found || partial < best_value ||
          (partial == best_value && assign < best_assign)) {
        best_value = partial;
        best_assign = assign;
        found = true;
      }
      return;
    }
    const int t = order[static_cast<size_t>(pos - 1)];
    for (int j = 1; j <= inst.k; ++j) {
      if (!inst.capable(t, j - 1)) continue;
      int& last = last_pos[static_cast<size_t>(j - 1)];
      if (last != 0 && pos - last <= tau) continue;
      const int saved = last;
      last = pos;
      assign[static_cast<size_t>(t)] = j;
      dfs(pos + 1);
      last = saved;
    }
    assign[static_cast<size_t>(t)] = 0;
    partial += inst.values[static_cast<size_t>(t)];
    dfs(pos + 1);
    partial -= inst.values[static_cast<size_t>(t)];
  }
};

}  // namespace

RedSolveResult best_red_bruteforce(const Instance& inst, const TargetOrdering& sigma) {
  check_instance(inst);
  if (sigma.n() != inst.n || !sigma.is_permutation())
    throw std::invalid_argument("sigma is not a permutation of 1..n");
  if (inst.n > 12 || inst.k > 6)
    throw SizeGuardError("best_red_bruteforce is guarded to n <= 12, k <= 6");

  const auto order = sigma.targets_by_position();
  BruteSearch search{inst, order, inst.effective_tau(),
                     std::vector<int>(static_cast<size_t>(inst.k), 0),
                     std::vector<int>(static_cast<size_t>(inst.n), 0),
                     0.0,
                     false,
                     kInf,
                     {}};
  search.dfs(1);
  RedSolveResult res;
  res.value = search.best_value;
  res.plan.sensor_of = search.best_assign;
  return res;
}

// ---------------------------------------------------------------------------
// Dynamic program over sensor-class windows
// ---------------------------------------------------------------------------

namespace {

struct DpContext {
  int n = 0;
  int window = 0;  // tau + 1 slots
  int alphabet = 0;  // class count + 1; the largest digit means "unsensed"
  int empty = 0;
  std::vector<int> cap;                       // per class: member count
  std::vector<std::vector<uint8_t>> capable;  // per position, per class
  std::vector<double> value_at;               // per position
};

// Class sequence per position (empty = ctx.empty), cheapest total first.
struct DpOutcome {
  double value = kInf;
  std::vector<int> class_at;  // per position
};

DpOutcome run_dense(const DpContext& ctx, size_t states) {
  const int A = ctx.alphabet;
  const size_t high = states / static_cast<size_t>(A);  // A^(window-1)
  std::vector<double> cur(states, kInf), nxt(states, kInf);
  std::vector<std::vector<uint8_t>> dropped(static_cast<size_t>(ctx.n),
                                            std::vector<uint8_t>(states, 255));
  size_t all_empty = 0;
  for (int d = 0; d < ctx.window; ++d)
    all_empty = all_empty * static_cast<size_t>(A) + static_cast<size_t>(ctx.empty);
  cur[all_empty] = 0.0;

  for (int i = 0; i < ctx.n; ++i) {
    std::fill(nxt.begin(), nxt.end(), kInf);
    for (size_t w = 0; w < states; ++w) {
      if (cur[w] == kInf) continue;
      const size_t drop = w / high;
      const size_t base = (w % high) * static_cast<size_t>(A);
      for (int b = 0; b < A; ++b) {
        double v = cur[w];
        if (b != ctx.empty) {
          if (!ctx.capable[static_cast<size_t>(i)][static_cast<size_t>(b)]) continue;
          // Class occupancy in the incoming window: digits of w below the
          // dropped slot, plus the new assignment.
          int count = 1;
          size_t rest = w % high;
          for (int d = 1; d < ctx.window; ++d) {
            if (static_cast<int>(rest % static_cast<size_t>(A)) == b) ++count;
            rest /= static_cast<size_t>(A);
          }
          if (count > ctx.cap[static_cast<size_t>(b)]) continue;
        } else {
          v += ctx.value_at[static_cast<size_t>(i)];
        }
        const size_t nw = base + static_cast<size_t>(b);
        if (v < nxt[nw]) {
          nxt[nw] = v;
          dropped[static_cast<size_t>(i)][nw] = static_cast<uint8_t>(drop);
        }
      }
    }
    cur.swap(nxt);
  }

  DpOutcome out;
  size_t best_w = 0;
  for (size_t w = 0; w < states; ++w)
    if (cur[w] < out.value) {
      out.value = cur[w];
      best_w = w;
    }
  if (out.value == kInf) return out;  // n = 0 never reaches here
  out.class_at.resize(static_cast<size_t>(ctx.n));
  size_t w = best_w;
  for (int i = ctx.n - 1; i >= 0; --i) {
    out.class_at[static_cast<size_t>(i)] = static_cast<int>(w % static_cast<size_t>(A));
    const size_t drop = dropped[static_cast<size_t>(i)][w];
    w = w / static_cast<size_t>(A) + drop * high;
  }
  return out;
}

DpOutcome run_sparse(const DpContext& ctx, uint64_t budget) {
  struct Ent {
    double value;
    uint8_t dropped;
  };
  // Keys hold window digits most-significant first so that lexicographic
  // order equals the dense numeric order (identical tie-breaking).
  std::vector<std::map<std::string, Ent>> layers(static_cast<size_t>(ctx.n) + 1);
  layers[0].emplace(std::string(static_cast<size_t>(ctx.window),
                                static_cast<char>(ctx.empty)),
                    Ent{0.0, 255});

  uint64_t work = 0;
  for (int i = 0; i < ctx.n; ++i) {
    auto& next = layers[static_cast<size_t>(i) + 1];
    for (const auto& [key, ent] : layers[static_cast<size_t>(i)]) {
      for (int b = 0; b < ctx.alphabet; ++b) {
        if (++work > budget) throw BudgetExceeded("red DP work budget exceeded");
        double v = ent.value;
        if (b != ctx.empty) {
          if (!ctx.capable[static_cast<size_t>(i)][static_cast<size_t>(b)]) continue;
          int count = 1;
          for (size_t d = 1; d < key.size(); ++d)
            if (key[d] == static_cast<char>(b)) ++count;
          if (count > ctx.cap[static_cast<size_t>(b)]) continue;
        } else {
          v += ctx.value_at[static_cast<size_t>(i)];
        }
        std::string nk = key.substr(1) + static_cast<char>(b);
        auto [it, inserted] = next.try_emplace(std::move(nk), Ent{v, static_cast<uint8_t>(key[0])});
        if (!inserted && v < it->second.value)
          it->second = Ent{v, static_cast<uint8_t>(key[0])};
      }
    }
  }

  DpOutcome out;
  const std::map<std::string, Ent>& last = layers[static_cast<size_t>(ctx.n)];
  const std::string* best_key = nullptr;
  for (const auto& [key, ent] : last)
    if (ent.value < out.value) {
      out.value = ent.value;
      best_key = &key;
    }
  if (!best_key) return out;
  out.class_at.resize(static_cast<size_t>(ctx.n));
  std::string key = *best_key;
  for (int i = ctx.n - 1; i >= 0; --i) {
    out.class_at[static_cast<size_t>(i)] =
        static_cast<int>(static_cast<unsigned char>(key.back()));
    const auto& ent = layers[static_cast<size_t>(i) + 1].at(key);
    key = std::string(1, static_cast<char>(ent.dropped)) + key.substr(0, key.size() - 1);
  }
  return out;
}

}  // namespace

RedSolveResult best_red_dp(const Instance& inst, const TargetOrdering& sigma,
                           const DpOptions& opts) {
  check_instance(inst);
  if (sigma.n() != inst.n || !sigma.is_permutation())
    throw std::invalid_argument("sigma is not a permutation of 1..n");

  const auto order = sigma.targets_by_position();
  const TypePartition types = opts.use_types ? compute_types(inst) : singleton_types(inst);

  DpContext ctx;
  ctx.n = inst.n;
  ctx.window = inst.effective_tau() + 1;
  ctx.alphabet = types.k_chi() + 1;
  ctx.empty = types.k_chi();
  ctx.cap.resize(static_cast<size_t>(types.k_chi()));
  for (int c = 0; c < types.k_chi(); ++c)
    ctx.cap[static_cast<size_t>(c)] =
        static_cast<int>(types.sensor_classes[static_cast<size_t>(c)].size());
  ctx.capable.assign(static_cast<size_t>(ctx.n),
                     std::vector<uint8_t>(static_cast<size_t>(types.k_chi()), 0));
  ctx.value_at.resize(static_cast<size_t>(ctx.n));
  for (int i = 0; i < ctx.n; ++i) {
    const int t = order[static_cast<size_t>(i)];
    ctx.value_at[static_cast<size_t>(i)] = inst.values[static_cast<size_t>(t)];
    for (int c = 0; c < types.k_chi(); ++c) {
      const int rep = types.sensor_classes[static_cast<size_t>(c)][0];
      ctx.capable[static_cast<size_t>(i)][static_cast<size_t>(c)] =
          inst.capable(t, rep) ? 1 : 0;
    }
  }

  if (inst.n == 0) return {0.0, SensingPlan::empty(0)};
  if (ctx.alphabet > 250) throw BudgetExceeded("red DP: too many sensor classes");

  // Dense when the full table is small; otherwise reachable-state maps.
  double dense_states = 1.0;
  for (int d = 0; d < ctx.window; ++d) dense_states *= ctx.alphabet;
  const double dense_work = dense_states * ctx.alphabet * ctx.n;
  const double dense_bytes = dense_states * (ctx.n + 16.0);

  DpOutcome out;
  if (dense_states <= double(1 << 18) && dense_work <= double(opts.work_budget) &&
      dense_bytes <= 256e6) {
    out = run_dense(ctx, static_cast<size_t>(dense_states));
  } else {
    out = run_sparse(ctx, opts.work_budget);
  }
  if (out.value == kInf) throw std::logic_error("red DP found no state");

  // Classes back to concrete sensors: within a class, the longest-idle
  // sensor takes the next assignment, ties to the lowest index.
  RedSolveResult res;
  res.value = out.value;
  res.plan = SensingPlan::empty(inst.n);
  std::vector<int> last_used(static_cast<size_t>(inst.k), 0);
  for (int i = 0; i < ctx.n; ++i) {
    const int c = out.class_at[static_cast<size_t>(i)];
    if (c == ctx.empty) continue;
    int pick = -1;
    for (const int j : types.sensor_classes[static_cast<size_t>(c)])
      if (pick == -1 || last_used[static_cast<size_t>(j)] < last_used[static_cast<size_t>(pick)])
        pick = j;
    res.plan.sensor_of[static_cast<size_t>(order[static_cast<size_t>(i)])] = pick + 1;
    last_used[static_cast<size_t>(pick)] = i + 1;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Greedy heuristics
// ---------------------------------------------------------------------------

const char* policy_name(GreedyPolicy p) {
  switch (p) {
    case GreedyPolicy::Random: return "random";
    case GreedyPolicy::RemainingValue: return "remaining_value";
    case GreedyPolicy::Harm: return "harm";
  }
  return "?";
}

RedSolveResult greedy_red(const Instance& inst, const TargetOrdering& sigma,
                          GreedyPolicy policy, uint64_t seed) {
  check_instance(inst);
  if (sigma.n() != inst.n || !sigma.is_permutation())
    throw std::invalid_argument("sigma is not a permutation of 1..n");

  const int tau = inst.effective_tau();
  std::vector<int> by_value(static_cast<size_t>(inst.n));
  for (int t = 0; t < inst.n; ++t) by_value[static_cast<size_t>(t)] = t;
  std::stable_sort(by_value.begin(), by_value.end(), [&](int a, int b) {
    const double va = inst.values[static_cast<size_t>(a)];
    const double vb = inst.values[static_cast<size_t>(b)];
    if (va != vb) return va > vb;
    return a < b;
  });

  auto rng = keyed_stream(seed, "greedy-red");
  std::vector<std::set<int>> fired(static_cast<size_t>(inst.k));
  std::vector<char> processed(static_cast<size_t>(inst.n), 0);
  SensingPlan plan = SensingPlan::empty(inst.n);

  for (const int t : by_value) {
    const int p = sigma.positions[static_cast<size_t>(t)];
    std::vector<int> free_sensors;
    for (int j = 0; j < inst.k; ++j) {
      if (!inst.capable(t, j)) continue;
      const auto& f = fired[static_cast<size_t>(j)];
      auto it = f.lower_bound(p - tau);
      if (it != f.end() && *it <= p + tau) continue;
      free_sensors.push_back(j);
    }
    if (!free_sensors.empty()) {
      int pick = free_sensors[0];
      if (policy == GreedyPolicy::Random) {
        pick = free_sensors[static_cast<size_t>(rng.next_below(free_sensors.size()))];
      } else {
        double best_score = kInf;
        for (const int j : free_sensors) {
          double score = 0.0;
          for (int u = 0; u < inst.n; ++u) {
            if (processed[static_cast<size_t>(u)] || !inst.capable(u, j)) continue;
            if (policy == GreedyPolicy::Harm &&
                std::abs(sigma.positions[static_cast<size_t>(u)] - p) > tau)
              continue;
            score += inst.values[static_cast<size_t>(u)];
          }
          if (score < best_score) {
            best_score = score;
            pick = j;
          }
        }
      }
      plan.sensor_of[static_cast<size_t>(t)] = pick + 1;
      fired[static_cast<size_t>(pick)].insert(p);
    }
    processed[static_cast<size_t>(t)] = 1;
  }

  return {plan_value(inst, plan), plan};
}

// ---------------------------------------------------------------------------
// Integer model
// ---------------------------------------------------------------------------

IntegerModel build_red_ilp(const Instance& inst, const TargetOrdering& sigma) {
  check_instance(inst);
  if (sigma.n() != inst.n || !sigma.is_permutation())
    throw std::invalid_argument("sigma is not a permutation of 1..n");

  // Position gaps never exceed n-1, so wider recharge times clamp to n-1;
  // without the clamp the window family goes empty and the model admits
  // same-sensor pairs the game forbids.
  const int tau = std::min(inst.effective_tau(), std::max(0, inst.n - 1));
  const auto order = sigma.targets_by_position();

  IntegerModel m;
  m.sense = ObjectiveSense::Minimize;
  std::vector<std::vector<int>> x(static_cast<size_t>(inst.n),
                                  std::vector<int>(static_cast<size_t>(inst.k) + 1, -1));
  for (int r = 1; r <= inst.n; ++r)
    for (int j = 1; j <= inst.k + 1; ++j)
      x[static_cast<size_t>(r - 1)][static_cast<size_t>(j - 1)] = m.add_binary(idx2("x", r, j));

  for (int r = 1; r <= inst.n; ++r)
    m.objective.push_back({x[static_cast<size_t>(r - 1)][static_cast<size_t>(inst.k)],
                           inst.values[static_cast<size_t>(order[static_cast<size_t>(r - 1)])]});

  for (int r = 1; r <= inst.n; ++r) {
    std::vector<LinearTerm> terms;
    for (int j = 1; j <= inst.k + 1; ++j)
      terms.push_back({x[static_cast<size_t>(r - 1)][static_cast<size_t>(j - 1)], 1.0});
    m.add_constraint("assign_" + std::to_string(r), std::move(terms), Relation::Equal, 1.0);
  }
  for (int r = 1; r <= inst.n; ++r)
    for (int j = 1; j <= inst.k; ++j)
      m.add_constraint(idx2("cap", r, j),
                       {{x[static_cast<size_t>(r - 1)][static_cast<size_t>(j - 1)], 1.0}},
                       Relation::LessEq,
                       inst.capable(order[static_cast<size_t>(r - 1)], j - 1) ? 1.0 : 0.0);
  for (int j = 1; j <= inst.k; ++j)
    for (int i = 1; i + tau <= inst.n; ++i) {
      std::vector<LinearTerm> terms;
      for (int l = i; l <= i + tau; ++l)
        terms.push_back({x[static_cast<size_t>(l - 1)][static_cast<size_t>(j - 1)], 1.0});
      m.add_constraint(idx2("window", j, i), std::move(terms), Relation::LessEq, 1.0);
    }
  return m;
}

}  // namespace esg
