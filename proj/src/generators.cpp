#include "esg/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "esg/rng.hpp"

namespace esg {

const char* kind_name(GeneratorConfig::Kind kind) {
  switch (kind) {
    case GeneratorConfig::Kind::Default: return "default";
    case GeneratorConfig::Kind::Euclidean: return "euclidean";
    case GeneratorConfig::Kind::RandomLevel: return "randomlevel";
    case GeneratorConfig::Kind::Append: return "append";
  }
  return "?";
}

GeneratorConfig::Kind kind_from_name(const std::string& name) {
  if (name == "default") return GeneratorConfig::Kind::Default;
  if (name == "euclidean") return GeneratorConfig::Kind::Euclidean;
  if (name == "randomlevel") return GeneratorConfig::Kind::RandomLevel;
  if (name == "append") return GeneratorConfig::Kind::Append;
  throw std::invalid_argument("unknown generator kind: " + name);
}

namespace {

void check_config(const GeneratorConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("generator requires n >= 1");
  if (cfg.k < 0) throw std::invalid_argument("generator requires k >= 0");
  if (cfg.tau != kInfiniteTau && cfg.tau < 0)
    throw std::invalid_argument("tau must be non-negative or infinite");
  if (cfg.kind == GeneratorConfig::Kind::Default && (cfg.p < 0.0 || cfg.p > 1.0))
    throw std::invalid_argument("p must lie in [0,1]");
  if (cfg.kind == GeneratorConfig::Kind::Euclidean && !(cfg.radius > 0.0))
    throw std::invalid_argument("radius must be positive");
}

void fill_bernoulli_matrix(Instance& inst, double p, uint64_t seed) {
  auto rng = keyed_stream(seed, "matrix");
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.k; ++j)
      inst.matrix[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          rng.next_real() < p ? 1 : 0;
}

}  // namespace

Instance generate(const GeneratorConfig& cfg) {
  check_config(cfg);

  Instance inst;
  inst.n = cfg.n;
  inst.k = cfg.k;
  inst.tau = cfg.tau;
  inst.values.resize(static_cast<size_t>(cfg.n));
  inst.matrix.assign(static_cast<size_t>(cfg.n),
                     std::vector<uint8_t>(static_cast<size_t>(cfg.k), 0));

  // Stream "values": one uniform per target, i = 1..n.
  {
    auto rng = keyed_stream(cfg.seed, "values");
    for (int i = 0; i < cfg.n; ++i) inst.values[static_cast<size_t>(i)] = rng.next_real();
  }

  inst.metadata = {{"generator", kind_name(cfg.kind)}, {"seed", cfg.seed}};

  switch (cfg.kind) {
    case GeneratorConfig::Kind::Default: {
      // Stream "matrix": one uniform per entry, row-major; entry is 1 iff
      // the uniform falls strictly below p.
      fill_bernoulli_matrix(inst, cfg.p, cfg.seed);
      inst.metadata["p"] = cfg.p;
      break;
    }
    case GeneratorConfig::Kind::Append: {
      // Identical to Default with p = 0.5, draw for draw.
      fill_bernoulli_matrix(inst, 0.5, cfg.seed);
      inst.metadata["p"] = 0.5;
      break;
    }
    case GeneratorConfig::Kind::Euclidean: {
      // Stream "points": (x, y) per target i = 1..n, then per sensor
      // j = 1..k. Capability iff the distance is strictly below the radius.
      auto rng = keyed_stream(cfg.seed, "points");
      std::vector<std::pair<double, double>> tp(static_cast<size_t>(cfg.n));
      std::vector<std::pair<double, double>> sp(static_cast<size_t>(cfg.k));
      for (auto& q : tp) {
        q.first = rng.next_real();
        q.second = rng.next_real();
      }
      for (auto& q : sp) {
        q.first = rng.next_real();
        q.second = rng.next_real();
      }
      for (int i = 0; i < cfg.n; ++i)
        for (int j = 0; j < cfg.k; ++j) {
          const double dx = tp[static_cast<size_t>(i)].first - sp[static_cast<size_t>(j)].first;
          const double dy = tp[static_cast<size_t>(i)].second - sp[static_cast<size_t>(j)].second;
          inst.matrix[static_cast<size_t>(i)][static_cast<size_t>(j)] =
              std::sqrt(dx * dx + dy * dy) < cfg.radius ? 1 : 0;
        }
      inst.metadata["radius"] = cfg.radius;
      nlohmann::json tj = nlohmann::json::array(), sj = nlohmann::json::array();
      for (const auto& q : tp) tj.push_back({q.first, q.second});
      for (const auto& q : sp) sj.push_back({q.first, q.second});
      inst.metadata["target_points"] = std::move(tj);
      inst.metadata["sensor_points"] = std::move(sj);
      break;
    }
    case GeneratorConfig::Kind::RandomLevel: {
      // Stream "levels": difficulty d_i for i = 1..n, skill s_j for
      // j = 1..k. Stream "matrix": one uniform per entry, row-major; entry
      // is 1 iff the uniform falls strictly below (1 - d_i) * s_j.
      auto levels = keyed_stream(cfg.seed, "levels");
      std::vector<double> d(static_cast<size_t>(cfg.n)), s(static_cast<size_t>(cfg.k));
      for (auto& x : d) x = levels.next_real();
      for (auto& x : s) x = levels.next_real();
      if (cfg.forced_difficulty) {
        if (static_cast<int>(cfg.forced_difficulty->size()) != cfg.n)
          throw std::invalid_argument("forced_difficulty length != n");
        d = *cfg.forced_difficulty;
      }
      auto rng = keyed_stream(cfg.seed, "matrix");
      for (int i = 0; i < cfg.n; ++i)
        for (int j = 0; j < cfg.k; ++j)
          inst.matrix[static_cast<size_t>(i)][static_cast<size_t>(j)] =
              rng.next_real() < (1.0 - d[static_cast<size_t>(i)]) * s[static_cast<size_t>(j)]
                  ? 1
                  : 0;
      inst.metadata["difficulty"] = d;
      inst.metadata["skill"] = s;
      break;
    }
  }

  check_instance(inst);
  return inst;
}

}  // namespace esg
