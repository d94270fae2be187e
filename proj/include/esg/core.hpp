#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace esg {

// Sentinel for an unbounded recharge time; every sensor then senses at most
// one target. Normalized to n before any window arithmetic.
inline constexpr int kInfiniteTau = -1;

inline constexpr double kValueTolerance = 1e-9;

inline bool value_eq(double a, double b) {
  return std::abs(a - b) <= kValueTolerance;
}

struct SizeGuardError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A game instance: n targets with non-negative values, k sensors, one shared
// recharge time, and an n-by-k 0/1 capability matrix (row i = target i,
// column j = sensor j). Treated as immutable after construction; all
// operations on it are pure.
struct Instance {
  int n = 0;
  int k = 0;
  int tau = 0;  // non-negative, or kInfiniteTau
  std::vector<double> values;
  std::vector<std::vector<uint8_t>> matrix;
  nlohmann::json metadata = nlohmann::json::object();

  bool capable(int target, int sensor) const {
    return matrix[static_cast<size_t>(target)][static_cast<size_t>(sensor)] != 0;
  }

  double total_value() const;

  // Recharge time with the infinity sentinel (and oversized finite values)
  // collapsed to n. Position gaps never exceed n-1, so behavior is
  // unchanged and window arithmetic stays bounded.
  int effective_tau() const {
    if (tau == kInfiniteTau || tau > n) return n;
    return tau;
  }
};

// Throws std::invalid_argument when dimensions, value signs, or tau are
// inconsistent.
void check_instance(const Instance& inst);

// Assignment of positions 1..n to targets; positions are 1-based throughout.
struct TargetOrdering {
  std::vector<int> positions;  // positions[t] in 1..n

  static TargetOrdering identity(int n) {
    TargetOrdering o;
    o.positions.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) o.positions[static_cast<size_t>(i)] = i + 1;
    return o;
  }

  int n() const { return static_cast<int>(positions.size()); }
  bool is_permutation() const;

  // Inverse view: element p-1 is the target moving at position p.
  std::vector<int> targets_by_position() const;
};

// Target-indexed sensing plan: sensor_of[t] is 0 when target t is unsensed,
// otherwise the 1-based sensor index. Target indexing makes the pairwise
// disjointness of the sensor-to-target-set view structural.
struct SensingPlan {
  std::vector<int> sensor_of;

  static SensingPlan empty(int n) {
    SensingPlan p;
    p.sensor_of.assign(static_cast<size_t>(n), 0);
    return p;
  }

  int n() const { return static_cast<int>(sensor_of.size()); }
  bool sensed(int target) const { return sensor_of[static_cast<size_t>(target)] != 0; }

  // Sensor-to-targets view: element j-1 lists the targets sensor j senses,
  // ascending. Pairwise disjoint by construction.
  std::vector<std::vector<int>> targets_by_sensor(int k) const;
};

struct PlanViolation {
  enum class Kind { Capability, Recharge };
  Kind kind;
  int target = -1;        // 0-based
  int sensor = -1;        // 1-based
  int other_target = -1;  // 0-based; recharge violations only
  std::string describe() const;
};

struct PlanVerdict {
  std::optional<PlanViolation> violation;
  bool valid() const { return !violation.has_value(); }
  explicit operator bool() const { return valid(); }
};

// Valid iff every assigned pair is capable and any two targets assigned to
// one sensor sit strictly more than tau positions apart. Reports the first
// violation: capability scanned by target index, then recharge scanned by
// sensor index and position. Dimension mismatches throw.
PlanVerdict validate_plan(const Instance& inst, const TargetOrdering& sigma,
                          const SensingPlan& psi);

// Summed value of unsensed targets (the ordering never enters).
double plan_value(const Instance& inst, const SensingPlan& psi);

// Equivalence classes: sensors with identical matrix columns, targets with
// identical rows and equal values. Classes are ordered by smallest member.
struct TypePartition {
  std::vector<std::vector<int>> target_classes;
  std::vector<std::vector<int>> sensor_classes;
  std::vector<int> target_class_of;
  std::vector<int> sensor_class_of;

  int n_chi() const { return static_cast<int>(target_classes.size()); }
  int k_chi() const { return static_cast<int>(sensor_classes.size()); }
};

TypePartition compute_types(const Instance& inst);

// Degenerate partition with singleton classes; used to bypass type
// collapsing when comparing against the untyped recurrence.
TypePartition singleton_types(const Instance& inst);

}  // namespace esg
