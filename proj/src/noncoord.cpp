#include "esg/noncoord.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "esg/rng.hpp"

namespace esg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared fast path: sensors grab the first passing target they can; only a
// sensor's latest firing position matters because positions only grow.
double simulate_on(const Instance& inst, const std::vector<int>& order,
                   std::vector<int>& last_fire, SensingPlan* out) {
  const int tau = inst.effective_tau();
  std::fill(last_fire.begin(), last_fire.end(), 0);
  double survive = 0.0;
  for (int pos = 1; pos <= inst.n; ++pos) {
    const int t = order[static_cast<size_t>(pos - 1)];
    const auto& row = inst.matrix[static_cast<size_t>(t)];
    int hit = 0;
    for (int j = 0; j < inst.k; ++j) {
      if (!row[static_cast<size_t>(j)]) continue;
      const int last = last_fire[static_cast<size_t>(j)];
      if (last == 0 || pos - last > tau) {
        last_fire[static_cast<size_t>(j)] = pos;
        hit = j + 1;
        break;
      }
    }
    if (out) out->sensor_of[static_cast<size_t>(t)] = hit;
    if (hit == 0) survive += inst.values[static_cast<size_t>(t)];
  }
  return survive;
}

}  // namespace

std::pair<double, SensingPlan> simulate_greedy(const Instance& inst,
                                               const TargetOrdering& sigma) {
  check_instance(inst);
  if (sigma.n() != inst.n || !sigma.is_permutation())
    throw std::invalid_argument("sigma is not a permutation of 1..n");
  const auto order = sigma.targets_by_position();
  std::vector<int> scratch(static_cast<size_t>(inst.k), 0);
  SensingPlan plan = SensingPlan::empty(inst.n);
  simulate_on(inst, order, scratch, &plan);
  // Canonical target-index summation so both event orders report the same
  // double.
  return {plan_value(inst, plan), plan};
}

std::pair<double, SensingPlan> simulate_greedy_stepwise(const Instance& inst,
                                                        const TargetOrdering& sigma) {
  check_instance(inst);
  if (sigma.n() != inst.n || !sigma.is_permutation())
    throw std::invalid_argument("sigma is not a permutation of 1..n");
  const auto order = sigma.targets_by_position();
  const int tau = inst.effective_tau();
  SensingPlan plan = SensingPlan::empty(inst.n);
  std::vector<int> last_fire(static_cast<size_t>(inst.k), 0);
  std::vector<char> taken(static_cast<size_t>(inst.n), 0);
  // The target at position i meets sensor j at step i+j-1. Same-step events
  // involve pairwise distinct sensors and targets, so processing order
  // within a step is immaterial.
  for (int step = 1; step <= inst.n + inst.k - 1; ++step) {
    for (int j = 1; j <= inst.k; ++j) {
      const int pos = step - j + 1;
      if (pos < 1 || pos > inst.n) continue;
      const int t = order[static_cast<size_t>(pos - 1)];
      if (taken[static_cast<size_t>(t)] || !inst.capable(t, j - 1)) continue;
      const int last = last_fire[static_cast<size_t>(j - 1)];
      if (last != 0 && pos - last <= tau) continue;
      last_fire[static_cast<size_t>(j - 1)] = pos;
      taken[static_cast<size_t>(t)] = 1;
      plan.sensor_of[static_cast<size_t>(t)] = j;
    }
  }
  return {plan_value(inst, plan), plan};
}

BlueSolveResult best_blue_bruteforce(const Instance& inst) {
  check_instance(inst);
  if (inst.n > 10) throw SizeGuardError("best_blue_bruteforce is guarded to n <= 10");

  std::vector<int> order(static_cast<size_t>(inst.n));
  for (int i = 0; i < inst.n; ++i) order[static_cast<size_t>(i)] = i;
  std::vector<int> scratch(static_cast<size_t>(inst.k), 0);

  double best = -kInf;
  std::vector<int> best_positions;
  auto positions_of = [&](const std::vector<int>& ord) {
    std::vector<int> pos(ord.size());
    for (size_t p = 0; p < ord.size(); ++p) pos[static_cast<size_t>(ord[p])] = static_cast<int>(p) + 1;
    return pos;
  };
  do {
    const double v = simulate_on(inst, order, scratch, nullptr);
    if (v > best) {
      best = v;
      best_positions = positions_of(order);
    } else if (v == best) {
      auto pos = positions_of(order);
      if (pos < best_positions) best_positions = std::move(pos);
    }
  } while (std::next_permutation(order.begin(), order.end()));

  BlueSolveResult res;
  res.value = best;
  res.sigma.positions = std::move(best_positions);
  return res;
}

// ---------------------------------------------------------------------------
// Type dynamic program
// ---------------------------------------------------------------------------

namespace {

struct BlueDpContext {
  int n = 0, k = 0, window = 0;
  int n_chi = 0;
  int none_digit = 0;  // == k
  std::vector<int> class_size;
  std::vector<double> class_value;
  std::vector<std::vector<uint8_t>> class_row;  // capability row per class
  std::vector<uint64_t> count_stride;           // mixed-radix stride per class

  // First ready capable sensor in channel order, or none_digit.
  int forced_sensor(int cls, uint64_t blocked_mask) const {
    const auto& row = class_row[static_cast<size_t>(cls)];
    for (int j = 0; j < k; ++j)
      if (row[static_cast<size_t>(j)] && !(blocked_mask >> j & 1)) return j;
    return none_digit;
  }
};

struct BlueDpOutcome {
  double value = -kInf;
  std::vector<int> class_at;   // per position
};

// Blocked sensors are those in the youngest tau window digits; the window
// holds tau+1 digits with the most recent in the least significant slot.
uint64_t mask_of_window_dense(uint64_t w, int window, int alphabet, int none_digit) {
  uint64_t mask = 0;
  for (int d = 0; d < window - 1; ++d) {
    const int digit = static_cast<int>(w % static_cast<uint64_t>(alphabet));
    if (digit != none_digit) mask |= 1ull << digit;
    w /= static_cast<uint64_t>(alphabet);
  }
  return mask;
}

BlueDpOutcome blue_dense(const BlueDpContext& ctx, uint64_t counts_total, uint64_t win_total) {
  const uint64_t S = counts_total * win_total;
  const int B = ctx.k + 1;
  const uint64_t win_high = win_total / static_cast<uint64_t>(B);
  std::vector<double> val(S, -kInf);
  std::vector<uint8_t> bp_type(S, 255), bp_drop(S, 255);

  // Bucket count indices by how many targets they have sent.
  std::vector<std::vector<uint32_t>> layer(static_cast<size_t>(ctx.n) + 1);
  for (uint64_t ci = 0; ci < counts_total; ++ci) {
    uint64_t rest = ci;
    int sum = 0;
    for (int c = ctx.n_chi - 1; c >= 0; --c) {
      const uint64_t radix = static_cast<uint64_t>(ctx.class_size[static_cast<size_t>(c)]) + 1;
      sum += static_cast<int>(rest % radix);
      rest /= radix;
    }
    layer[static_cast<size_t>(sum)].push_back(static_cast<uint32_t>(ci));
  }

  uint64_t all_none = 0;
  for (int d = 0; d < ctx.window; ++d)
    all_none = all_none * static_cast<uint64_t>(B) + static_cast<uint64_t>(ctx.none_digit);
  val[all_none] = 0.0;

  std::vector<int> counts(static_cast<size_t>(ctx.n_chi));
  for (int s = 0; s < ctx.n; ++s) {
    for (const uint32_t ci : layer[static_cast<size_t>(s)]) {
      // Unpack counts once per counts index.
      {
        uint64_t rest = ci;
        for (int c = ctx.n_chi - 1; c >= 0; --c) {
          const uint64_t radix = static_cast<uint64_t>(ctx.class_size[static_cast<size_t>(c)]) + 1;
          counts[static_cast<size_t>(c)] = static_cast<int>(rest % radix);
          rest /= radix;
        }
      }
      const uint64_t base_state = static_cast<uint64_t>(ci) * win_total;
      for (uint64_t w = 0; w < win_total; ++w) {
        const double cur = val[base_state + w];
        if (cur == -kInf) continue;
        const uint64_t blocked = mask_of_window_dense(w, ctx.window, B, ctx.none_digit);
        const uint64_t drop = w / win_high;
        const uint64_t shifted = (w % win_high) * static_cast<uint64_t>(B);
        for (int c = 0; c < ctx.n_chi; ++c) {
          if (counts[static_cast<size_t>(c)] >= ctx.class_size[static_cast<size_t>(c)]) continue;
          const int out = ctx.forced_sensor(c, blocked);
          const double v = cur + (out == ctx.none_digit ? ctx.class_value[static_cast<size_t>(c)] : 0.0);
          const uint64_t nstate =
              (static_cast<uint64_t>(ci) + ctx.count_stride[static_cast<size_t>(c)]) * win_total +
              shifted + static_cast<uint64_t>(out);
          if (v > val[nstate]) {
            val[nstate] = v;
            bp_type[nstate] = static_cast<uint8_t>(c);
            bp_drop[nstate] = static_cast<uint8_t>(drop);
          }
        }
      }
    }
  }

  BlueDpOutcome res;
  const uint64_t full_base = (counts_total - 1) * win_total;
  uint64_t best_w = 0;
  for (uint64_t w = 0; w < win_total; ++w)
    if (val[full_base + w] > res.value) {
      res.value = val[full_base + w];
      best_w = w;
    }
  if (res.value == -kInf) return res;

  res.class_at.resize(static_cast<size_t>(ctx.n));
  uint64_t ci = counts_total - 1, w = best_w;
  for (int s = ctx.n - 1; s >= 0; --s) {
    const uint64_t state = ci * win_total + w;
    const int c = bp_type[state];
    res.class_at[static_cast<size_t>(s)] = c;
    const uint64_t drop = bp_drop[state];
    w = w / static_cast<uint64_t>(B) + drop * win_high;
    ci -= ctx.count_stride[static_cast<size_t>(c)];
  }
  return res;
}

BlueDpOutcome blue_sparse(const BlueDpContext& ctx, uint64_t budget) {
  struct Ent {
    double value;
    uint8_t type;
    uint8_t dropped;
  };
  // Key: class counts (class 0 first), then window digits most-significant
  // first; lexicographic order matches the dense numeric order.
  const size_t count_len = static_cast<size_t>(ctx.n_chi);
  std::vector<std::map<std::string, Ent>> layers(static_cast<size_t>(ctx.n) + 1);
  {
    std::string key(count_len, '\0');
    key += std::string(static_cast<size_t>(ctx.window), static_cast<char>(ctx.none_digit));
    layers[0].emplace(std::move(key), Ent{0.0, 255, 255});
  }

  uint64_t work = 0;
  for (int s = 0; s < ctx.n; ++s) {
    auto& next = layers[static_cast<size_t>(s) + 1];
    for (const auto& [key, ent] : layers[static_cast<size_t>(s)]) {
      uint64_t blocked = 0;
      for (size_t d = count_len + 1; d < key.size(); ++d) {
        const int digit = static_cast<int>(static_cast<unsigned char>(key[d]));
        if (digit != ctx.none_digit) blocked |= 1ull << digit;
      }
      for (int c = 0; c < ctx.n_chi; ++c) {
        if (++work > budget) throw BudgetExceeded("blue DP work budget exceeded");
        const int have = static_cast<int>(static_cast<unsigned char>(key[static_cast<size_t>(c)]));
        if (have >= ctx.class_size[static_cast<size_t>(c)]) continue;
        const int out = ctx.forced_sensor(c, blocked);
        const double v =
            ent.value + (out == ctx.none_digit ? ctx.class_value[static_cast<size_t>(c)] : 0.0);
        std::string nk = key;
        nk[static_cast<size_t>(c)] = static_cast<char>(have + 1);
        nk.erase(count_len, 1);  // drop the oldest window digit
        nk += static_cast<char>(out);
        const uint8_t dropped = static_cast<uint8_t>(key[count_len]);
        auto [it, inserted] = next.try_emplace(std::move(nk), Ent{v, static_cast<uint8_t>(c), dropped});
        if (!inserted && v > it->second.value)
          it->second = Ent{v, static_cast<uint8_t>(c), dropped};
      }
    }
  }

  BlueDpOutcome res;
  const auto& last = layers[static_cast<size_t>(ctx.n)];
  const std::string* best_key = nullptr;
  for (const auto& [key, ent] : last)
    if (ent.value > res.value) {
      res.value = ent.value;
      best_key = &key;
    }
  if (!best_key) return res;

  res.class_at.resize(static_cast<size_t>(ctx.n));
  std::string key = *best_key;
  for (int s = ctx.n - 1; s >= 0; --s) {
    const Ent& ent = layers[static_cast<size_t>(s) + 1].at(key);
    res.class_at[static_cast<size_t>(s)] = ent.type;
    key[static_cast<size_t>(ent.type)] =
        static_cast<char>(static_cast<unsigned char>(key[static_cast<size_t>(ent.type)]) - 1);
    key.pop_back();
    key.insert(count_len, 1, static_cast<char>(ent.dropped));
  }
  return res;
}

}  // namespace

BlueSolveResult best_blue_dp(const Instance& inst, const DpOptions& opts) {
  check_instance(inst);
  const TypePartition types = opts.use_types ? compute_types(inst) : singleton_types(inst);

  BlueDpContext ctx;
  ctx.n = inst.n;
  ctx.k = inst.k;
  ctx.window = inst.effective_tau() + 1;
  ctx.n_chi = types.n_chi();
  ctx.none_digit = inst.k;
  ctx.class_size.resize(static_cast<size_t>(ctx.n_chi));
  ctx.class_value.resize(static_cast<size_t>(ctx.n_chi));
  ctx.class_row.resize(static_cast<size_t>(ctx.n_chi));
  for (int c = 0; c < ctx.n_chi; ++c) {
    const int rep = types.target_classes[static_cast<size_t>(c)][0];
    ctx.class_size[static_cast<size_t>(c)] =
        static_cast<int>(types.target_classes[static_cast<size_t>(c)].size());
    ctx.class_value[static_cast<size_t>(c)] = inst.values[static_cast<size_t>(rep)];
    ctx.class_row[static_cast<size_t>(c)] = inst.matrix[static_cast<size_t>(rep)];
  }
  ctx.count_stride.assign(static_cast<size_t>(ctx.n_chi), 1);
  for (int c = ctx.n_chi - 2; c >= 0; --c)
    ctx.count_stride[static_cast<size_t>(c)] =
        ctx.count_stride[static_cast<size_t>(c) + 1] *
        (static_cast<uint64_t>(ctx.class_size[static_cast<size_t>(c) + 1]) + 1);

  if (inst.n == 0) return {0.0, TargetOrdering::identity(0)};
  if (inst.k > 62) throw BudgetExceeded("blue DP: too many sensors for window masks");
  for (const int sz : ctx.class_size)
    if (sz > 250) throw BudgetExceeded("blue DP: class too large for byte-packed counts");

  double counts_total = 1.0;
  for (const int sz : ctx.class_size) counts_total *= sz + 1;
  double win_total = 1.0;
  for (int d = 0; d < ctx.window; ++d) win_total *= ctx.k + 1;
  const double dense_states = counts_total * win_total;
  const double dense_work = dense_states * ctx.n_chi;
  const double budget = static_cast<double>(opts.work_budget);

  BlueDpOutcome out;
  if (dense_states <= double(1 << 22) && dense_work <= budget) {
    out = blue_dense(ctx, static_cast<uint64_t>(counts_total), static_cast<uint64_t>(win_total));
  } else {
    out = blue_sparse(ctx, opts.work_budget);
  }
  if (out.value == -kInf) throw std::logic_error("blue DP found no state");

  // Class sequence to a concrete ordering: members of a class enter in
  // ascending index order.
  BlueSolveResult res;
  res.value = out.value;
  res.sigma.positions.assign(static_cast<size_t>(inst.n), 0);
  std::vector<size_t> next_member(static_cast<size_t>(ctx.n_chi), 0);
  for (int pos = 1; pos <= inst.n; ++pos) {
    const int c = out.class_at[static_cast<size_t>(pos - 1)];
    const int t = types.target_classes[static_cast<size_t>(c)][next_member[static_cast<size_t>(c)]++];
    res.sigma.positions[static_cast<size_t>(t)] = pos;
  }
  return res;
}

// ---------------------------------------------------------------------------
// One-shot exact search
// ---------------------------------------------------------------------------

namespace {

struct PairHash {
  size_t operator()(const std::pair<uint64_t, uint64_t>& p) const {
    return static_cast<size_t>(hash_combine(p.first, p.second));
  }
};

struct SingleUseSearch {
  const Instance& inst;
  uint64_t budget;
  uint64_t full = 0;
  std::vector<std::vector<int>> capable;  // per target, ascending sensors
  std::unordered_map<std::pair<uint64_t, uint64_t>, std::pair<double, int8_t>, PairHash> memo;

  std::pair<double, int8_t> solve(uint64_t sent, uint64_t spent) {
    if (sent == full) return {0.0, -1};
    const auto key = std::make_pair(sent, spent);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    double best = -kInf;
    int8_t choice = -1;
    for (int t = 0; t < inst.n; ++t) {
      if (sent >> t & 1) continue;
      int sensor = -1;
      for (const int j : capable[static_cast<size_t>(t)])
        if (!(spent >> j & 1)) {
          sensor = j;
          break;
        }
      const uint64_t nspent = sensor < 0 ? spent : spent | (1ull << sensor);
      const double gained = sensor < 0 ? inst.values[static_cast<size_t>(t)] : 0.0;
      const double v = gained + solve(sent | (1ull << t), nspent).first;
      if (v > best) {
        best = v;
        choice = static_cast<int8_t>(t);
      }
    }
    if (memo.size() >= budget) throw BudgetExceeded("one-shot search state budget exceeded");
    memo.emplace(key, std::make_pair(best, choice));
    return {best, choice};
  }
};

}  // namespace

BlueSolveResult best_blue_single_use(const Instance& inst, const SingleUseOptions& opts) {
  check_instance(inst);
  if (inst.n > 62 || inst.k > 62)
    throw SizeGuardError("one-shot search is guarded to n, k <= 62");
  if (inst.effective_tau() < inst.n - 1)
    throw std::invalid_argument("one-shot search requires tau >= n-1");

  SingleUseSearch search{inst, opts.state_budget, 0, {}, {}};
  search.full = inst.n == 0 ? 0 : (~0ull >> (64 - inst.n));
  search.capable.resize(static_cast<size_t>(inst.n));
  for (int t = 0; t < inst.n; ++t)
    for (int j = 0; j < inst.k; ++j)
      if (inst.capable(t, j)) search.capable[static_cast<size_t>(t)].push_back(j);

  BlueSolveResult res;
  res.value = search.solve(0, 0).first;
  res.sigma.positions.assign(static_cast<size_t>(inst.n), 0);
  uint64_t sent = 0, spent = 0;
  for (int pos = 1; pos <= inst.n; ++pos) {
    const int t = search.solve(sent, spent).second;
    res.sigma.positions[static_cast<size_t>(t)] = pos;
    int sensor = -1;
    for (const int j : search.capable[static_cast<size_t>(t)])
      if (!(spent >> j & 1)) {
        sensor = j;
        break;
      }
    sent |= 1ull << t;
    if (sensor >= 0) spent |= 1ull << sensor;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Integer model of the greedy pipeline
// ---------------------------------------------------------------------------

namespace {

struct BlueIlpLayout {
  int n, k;
  int z(int i) const { return i - 1; }
  int x(int i, int j) const { return n + (i - 1) * (k + 1) + (j - 1); }
  int y(int i, int i2, int j) const {
    return n + n * (k + 1) + ((i - 1) * n + (i2 - 1)) * k + (j - 1);
  }
  int o(int i, int i2) const { return n + n * (k + 1) + n * n * k + (i - 1) * n + (i2 - 1); }
  int d(int i, int i2) const { return o(i, i2) + n * n; }
};

std::string idx3(const char* stem, int a, int b, int c) {
  return std::string(stem) + "_" + std::to_string(a) + "_" + std::to_string(b) + "_" +
         std::to_string(c);
}

std::string idx2s(const char* stem, int a, int b) {
  return std::string(stem) + "_" + std::to_string(a) + "_" + std::to_string(b);
}

}  // namespace

IntegerModel build_blue_ilp(const Instance& inst) {
  check_instance(inst);
  const int n = inst.n, k = inst.k;
  const int tau = inst.effective_tau();
  const double big_m_gap = n + tau;       // recharge-distance disjunction
  const double big_m_force = n + k + 1;   // greedy-forcing deactivation

  IntegerModel m;
  m.sense = ObjectiveSense::Maximize;
  BlueIlpLayout L{n, k};

  for (int i = 1; i <= n; ++i) m.add_integer("z_" + std::to_string(i), 1, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= k + 1; ++j) m.add_binary(idx2s("x", i, j));
  for (int i = 1; i <= n; ++i)
    for (int i2 = 1; i2 <= n; ++i2)
      for (int j = 1; j <= k; ++j) m.add_binary(idx3("y", i, i2, j));
  for (int i = 1; i <= n; ++i)
    for (int i2 = 1; i2 <= n; ++i2) m.add_binary(idx2s("o", i, i2));
  for (int i = 1; i <= n; ++i)
    for (int i2 = 1; i2 <= n; ++i2) m.add_binary(idx2s("d", i, i2));

  for (int i = 1; i <= n; ++i)
    m.objective.push_back({L.x(i, k + 1), inst.values[static_cast<size_t>(i - 1)]});

  // Pairwise-distinct positions via the d binaries.
  for (int i = 1; i <= n; ++i)
    for (int i2 = i + 1; i2 <= n; ++i2) {
      m.add_constraint(idx2s("distinct_lo", i, i2),
                       {{L.z(i), 1.0}, {L.z(i2), -1.0}, {L.d(i, i2), -double(n)}},
                       Relation::LessEq, -1.0);
      m.add_constraint(idx2s("distinct_hi", i, i2),
                       {{L.z(i), 1.0}, {L.z(i2), -1.0}, {L.d(i, i2), -double(n)}},
                       Relation::GreaterEq, 1.0 - n);
    }

  for (int i = 1; i <= n; ++i) {
    std::vector<LinearTerm> terms;
    for (int j = 1; j <= k + 1; ++j) terms.push_back({L.x(i, j), 1.0});
    m.add_constraint("assign_" + std::to_string(i), std::move(terms), Relation::Equal, 1.0);
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= k; ++j)
      m.add_constraint(idx2s("cap", i, j), {{L.x(i, j), 1.0}}, Relation::LessEq,
                       inst.capable(i - 1, j - 1) ? 1.0 : 0.0);

  // Two targets on one sensor sit at least tau apart; the o binary selects
  // the orientation of the absolute value.
  for (int i = 1; i <= n; ++i)
    for (int i2 = i + 1; i2 <= n; ++i2)
      for (int j = 1; j <= k; ++j) {
        m.add_constraint(idx3("rech_lo", i, i2, j),
                         {{L.z(i2), 1.0},
                          {L.z(i), -1.0},
                          {L.o(i, i2), big_m_gap},
                          {L.x(i, j), -double(n)},
                          {L.x(i2, j), -double(n)}},
                         Relation::GreaterEq, tau - 2.0 * n);
        m.add_constraint(idx3("rech_hi", i, i2, j),
                         {{L.z(i), 1.0},
                          {L.z(i2), -1.0},
                          {L.o(i, i2), -big_m_gap},
                          {L.x(i, j), -double(n)},
                          {L.x(i2, j), -double(n)}},
                         Relation::GreaterEq, tau - 2.0 * n - big_m_gap);
      }

  // A target only protects others on a sensor that actually senses it.
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= k; ++j) {
      std::vector<LinearTerm> terms;
      for (int i2 = 1; i2 <= n; ++i2) terms.push_back({L.y(i, i2, j), 1.0});
      terms.push_back({L.x(i, j), -double(n)});
      m.add_constraint(idx2s("budget", i, j), std::move(terms), Relation::LessEq, 0.0);
    }

  // Protection window: y_{i,i',j} = 1 requires 0 <= z_{i'} - z_i <= tau.
  for (int i = 1; i <= n; ++i)
    for (int i2 = 1; i2 <= n; ++i2)
      for (int j = 1; j <= k; ++j) {
        m.add_constraint(idx3("cover_lo", i, i2, j),
                         {{L.z(i2), 1.0}, {L.z(i), -1.0}, {L.y(i, i2, j), -double(n)}},
                         Relation::GreaterEq, -double(n));
        m.add_constraint(idx3("cover_hi", i, i2, j),
                         {{L.z(i2), 1.0}, {L.z(i), -1.0}, {L.y(i, i2, j), double(n)}},
                         Relation::LessEq, double(n) + tau);
      }

  // Greedy forcing: if target i is unsensed or sensed at sensor j or later,
  // every earlier capable sensor must be protected by some other target.
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= k + 1; ++j) {
      std::vector<LinearTerm> terms;
      int incapable = 0;
      for (int t = 1; t < j; ++t) {
        if (!inst.capable(i - 1, t - 1)) {
          ++incapable;
          continue;
        }
        for (int i2 = 1; i2 <= n; ++i2) terms.push_back({L.y(i2, i, t), 1.0});
      }
      for (int t = j; t <= k + 1; ++t) terms.push_back({L.x(i, t), -big_m_force});
      m.add_constraint(idx2s("greedy", i, j), std::move(terms), Relation::GreaterEq,
                       (j - 1) - incapable - big_m_force);
    }

  return m;
}

std::vector<long> blue_ilp_witness(const IntegerModel& model, const Instance& inst,
                                   const TargetOrdering& sigma, const SensingPlan& psi) {
  const int n = inst.n, k = inst.k;
  const int tau = inst.effective_tau();
  BlueIlpLayout L{n, k};
  std::vector<long> v(model.variables.size(), 0);
  for (int i = 1; i <= n; ++i) v[static_cast<size_t>(L.z(i))] = sigma.positions[static_cast<size_t>(i - 1)];
  for (int i = 1; i <= n; ++i) {
    const int s = psi.sensor_of[static_cast<size_t>(i - 1)];
    v[static_cast<size_t>(L.x(i, s == 0 ? k + 1 : s))] = 1;
  }
  for (int i = 1; i <= n; ++i)
    for (int i2 = 1; i2 <= n; ++i2) {
      const long zi = sigma.positions[static_cast<size_t>(i - 1)];
      const long zi2 = sigma.positions[static_cast<size_t>(i2 - 1)];
      const int s = psi.sensor_of[static_cast<size_t>(i - 1)];
      if (s != 0 && zi2 - zi >= 0 && zi2 - zi <= tau) v[static_cast<size_t>(L.y(i, i2, s))] = 1;
      if (zi > zi2) {
        v[static_cast<size_t>(L.o(i, i2))] = 1;
        v[static_cast<size_t>(L.d(i, i2))] = 1;
      }
    }
  return v;
}

IlpCheck check_blue_ilp(const Instance& inst, const TargetOrdering& sigma,
                        const SensingPlan& psi) {
  check_instance(inst);
  if (sigma.n() != inst.n || psi.n() != inst.n)
    throw std::invalid_argument("ordering/plan dimensions do not match instance");
  if (!sigma.is_permutation())
    throw std::invalid_argument("sigma is not a permutation of 1..n");
  const IntegerModel model = build_blue_ilp(inst);
  const auto witness = blue_ilp_witness(model, inst, sigma, psi);
  const auto check = check_assignment(model, witness);
  return {check.feasible, check.violated_constraint};
}

// ---------------------------------------------------------------------------
// Simulated annealing
// ---------------------------------------------------------------------------

void check_schedule(const SaSchedule& schedule) {
  if (!(schedule.t0 > 0.0) || !(schedule.floor > 0.0) || !(schedule.cool > 0.0) ||
      !(schedule.cool < 1.0) || schedule.restarts < 1)
    throw std::invalid_argument("annealing schedule requires t0,floor > 0, cool in (0,1), restarts >= 1");
}

SolveReport sa_blue(const Instance& inst, SaVariant variant, uint64_t seed,
                    const SaSchedule& schedule) {
  check_instance(inst);
  check_schedule(schedule);
  const auto start = std::chrono::steady_clock::now();
  auto rng = keyed_stream(seed, "sa-blue");
  const int n = inst.n;
  std::vector<int> scratch(static_cast<size_t>(inst.k), 0);

  SolveReport report;
  report.solver = variant == SaVariant::Relax ? "sa-blue-relax" : "sa-blue-full";
  report.seed = seed;

  double best = -kInf;
  std::vector<int> best_positions;
  auto consider = [&](double v, const std::vector<int>& positions) {
    if (v > best) {
      best = v;
      best_positions = positions;
    }
  };

  double final_best = -kInf;
  std::vector<int> final_positions;

  auto value_of = [&](const std::vector<int>& positions) {
    TargetOrdering s;
    s.positions = positions;
    const auto order = s.targets_by_position();
    ++report.inner_solves;
    return simulate_on(inst, order, scratch, nullptr);
  };

  for (int r = 0; r < schedule.restarts; ++r) {
    std::vector<int> positions = random_positions(n, rng);
    double v = value_of(positions);
    consider(v, positions);

    if (n >= 2) {
      for (double temp = schedule.t0; temp > schedule.floor; temp *= schedule.cool) {
        ++report.iterations;
        std::vector<int> candidate = positions;
        double vc;
        if (variant == SaVariant::Relax) {
          const int a = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
          int b = static_cast<int>(rng.next_below(static_cast<uint64_t>(n) - 1));
          if (b >= a) ++b;
          std::swap(candidate[static_cast<size_t>(a)], candidate[static_cast<size_t>(b)]);
          vc = value_of(candidate);
          consider(vc, candidate);
        } else {
          double nb_best = -kInf;
          int pick_a = 0, pick_b = 1;
          for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
              std::swap(positions[static_cast<size_t>(a)], positions[static_cast<size_t>(b)]);
              const double nv = value_of(positions);
              consider(nv, positions);
              std::swap(positions[static_cast<size_t>(a)], positions[static_cast<size_t>(b)]);
              if (nv > nb_best) {
                nb_best = nv;
                pick_a = a;
                pick_b = b;
              }
            }
          std::swap(candidate[static_cast<size_t>(pick_a)], candidate[static_cast<size_t>(pick_b)]);
          vc = nb_best;
        }
        const double dv = vc - v;
        const double u = rng.next_real();
        if (dv >= 0.0 || std::exp(dv / temp) > u) {
          positions = std::move(candidate);
          v = vc;
        }
      }
    }
    if (v > final_best) {
      final_best = v;
      final_positions = positions;
    }
  }

  if (schedule.final_state_return) {
    report.value = final_best;
    report.sigma.positions = final_positions;
  } else {
    report.value = best;
    report.sigma.positions = best_positions;
  }
  {
    TargetOrdering s;
    s.positions = report.sigma.positions;
    report.plan = simulate_greedy(inst, s).second;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace esg
