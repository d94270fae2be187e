#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esg/core.hpp"

namespace esg {

// Seeded instance generation for the four simulated game settings.
//
// Draw order is fixed for cross-implementation determinism: target values
// first (i = 1..n, one uniform each), then the kind-specific draws in the
// documented order. All uniforms come from SplitMix64 streams keyed by
// (seed, purpose tag); see generate() for the tags.
struct GeneratorConfig {
  enum class Kind { Default, Euclidean, RandomLevel, Append };

  Kind kind = Kind::Default;
  int n = 0;
  int k = 0;
  int tau = 0;  // kInfiniteTau allowed
  uint64_t seed = 0;

  double p = 0.2;        // Default: entry probability
  double radius = 0.3;   // Euclidean: strict distance threshold

  // Test hook: overrides the sampled difficulty levels of RandomLevel after
  // they are drawn (stream alignment is preserved).
  std::optional<std::vector<double>> forced_difficulty;
};

const char* kind_name(GeneratorConfig::Kind kind);
GeneratorConfig::Kind kind_from_name(const std::string& name);

// Deterministic function of cfg: equal configs produce bit-identical
// instances on every platform. Append is Default with p = 0.5 and the same
// draw streams, so the two coincide bit-exactly seed for seed.
Instance generate(const GeneratorConfig& cfg);

}  // namespace esg
