#include "esg/core.hpp"

#include <map>
#include <sstream>

namespace esg {

double Instance::total_value() const {
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum;
}

void check_instance(const Instance& inst) {
  if (inst.n < 0 || inst.k < 0) throw std::invalid_argument("negative dimensions");
  if (inst.tau != kInfiniteTau && inst.tau < 0)
    throw std::invalid_argument("tau must be non-negative or infinite");
  if (static_cast<int>(inst.values.size()) != inst.n)
    throw std::invalid_argument("values length != n");
  if (static_cast<int>(inst.matrix.size()) != inst.n)
    throw std::invalid_argument("matrix row count != n");
  for (const auto& row : inst.matrix) {
    if (static_cast<int>(row.size()) != inst.k)
      throw std::invalid_argument("matrix row length != k");
    for (const uint8_t b : row)
      if (b != 0 && b != 1) throw std::invalid_argument("matrix entries must be 0/1");
  }
  for (const double v : inst.values)
    if (!(v >= 0.0)) throw std::invalid_argument("target values must be >= 0");
}

bool TargetOrdering::is_permutation() const {
  const int m = n();
  std::vector<char> seen(static_cast<size_t>(m), 0);
  for (const int p : positions) {
    if (p < 1 || p > m || seen[static_cast<size_t>(p - 1)]) return false;
    seen[static_cast<size_t>(p - 1)] = 1;
  }
  return true;
}

std::vector<int> TargetOrdering::targets_by_position() const {
  std::vector<int> order(positions.size(), -1);
  for (int t = 0; t < n(); ++t)
    order[static_cast<size_t>(positions[static_cast<size_t>(t)] - 1)] = t;
  return order;
}

std::vector<std::vector<int>> SensingPlan::targets_by_sensor(int k) const {
  std::vector<std::vector<int>> by_sensor(static_cast<size_t>(k));
  for (int t = 0; t < n(); ++t) {
    const int s = sensor_of[static_cast<size_t>(t)];
    if (s != 0) by_sensor[static_cast<size_t>(s - 1)].push_back(t);
  }
  return by_sensor;
}

std::string PlanViolation::describe() const {
  std::ostringstream os;
  if (kind == Kind::Capability) {
    os << "sensor s" << sensor << " cannot sense target t" << (target + 1);
  } else {
    os << "sensor s" << sensor << " senses t" << (other_target + 1) << " and t"
       << (target + 1) << " within the recharge window";
  }
  return os.str();
}

PlanVerdict validate_plan(const Instance& inst, const TargetOrdering& sigma,
                          const SensingPlan& psi) {
  check_instance(inst);
  if (sigma.n() != inst.n || psi.n() != inst.n)
    throw std::invalid_argument("ordering/plan dimensions do not match instance");
  if (!sigma.is_permutation())
    throw std::invalid_argument("ordering is not a permutation of 1..n");
  for (const int s : psi.sensor_of)
    if (s < 0 || s > inst.k) throw std::invalid_argument("plan references unknown sensor");

  for (int t = 0; t < inst.n; ++t) {
    const int s = psi.sensor_of[static_cast<size_t>(t)];
    if (s != 0 && !inst.capable(t, s - 1)) {
      PlanViolation v{PlanViolation::Kind::Capability, t, s, -1};
      return PlanVerdict{v};
    }
  }

  const int tau = inst.effective_tau();
  // Per sensor, sorted positions; adjacent gaps must exceed tau.
  std::vector<std::vector<std::pair<int, int>>> used(static_cast<size_t>(inst.k));
  for (int t = 0; t < inst.n; ++t) {
    const int s = psi.sensor_of[static_cast<size_t>(t)];
    if (s != 0)
      used[static_cast<size_t>(s - 1)].push_back({sigma.positions[static_cast<size_t>(t)], t});
  }
  for (int j = 0; j < inst.k; ++j) {
    auto& v = used[static_cast<size_t>(j)];
    std::sort(v.begin(), v.end());
    for (size_t i = 1; i < v.size(); ++i) {
      if (v[i].first - v[i - 1].first <= tau) {
        PlanViolation viol{PlanViolation::Kind::Recharge, v[i].second, j + 1,
                           v[i - 1].second};
        return PlanVerdict{viol};
      }
    }
  }
  return PlanVerdict{};
}

double plan_value(const Instance& inst, const SensingPlan& psi) {
  if (psi.n() != inst.n) throw std::invalid_argument("plan dimension mismatch");
  double sum = 0.0;
  for (int t = 0; t < inst.n; ++t)
    if (!psi.sensed(t)) sum += inst.values[static_cast<size_t>(t)];
  return sum;
}

TypePartition compute_types(const Instance& inst) {
  TypePartition part;
  part.target_class_of.assign(static_cast<size_t>(inst.n), -1);
  part.sensor_class_of.assign(static_cast<size_t>(inst.k), -1);

  // Keys preserve first-seen order, which matches "smallest member first"
  // because rows/columns are scanned in index order.
  std::map<std::pair<std::vector<uint8_t>, double>, int> target_key;
  for (int t = 0; t < inst.n; ++t) {
    auto key = std::make_pair(inst.matrix[static_cast<size_t>(t)],
                              inst.values[static_cast<size_t>(t)]);
    auto it = target_key.find(key);
    if (it == target_key.end()) {
      it = target_key.emplace(std::move(key), part.n_chi()).first;
      part.target_classes.emplace_back();
    }
    part.target_class_of[static_cast<size_t>(t)] = it->second;
    part.target_classes[static_cast<size_t>(it->second)].push_back(t);
  }

  std::map<std::vector<uint8_t>, int> sensor_key;
  for (int j = 0; j < inst.k; ++j) {
    std::vector<uint8_t> col(static_cast<size_t>(inst.n));
    for (int t = 0; t < inst.n; ++t)
      col[static_cast<size_t>(t)] = inst.matrix[static_cast<size_t>(t)][static_cast<size_t>(j)];
    auto it = sensor_key.find(col);
    if (it == sensor_key.end()) {
      it = sensor_key.emplace(std::move(col), part.k_chi()).first;
      part.sensor_classes.emplace_back();
    }
    part.sensor_class_of[static_cast<size_t>(j)] = it->second;
    part.sensor_classes[static_cast<size_t>(it->second)].push_back(j);
  }

  // First-seen order equals smallest-member order by construction; classes
  // were appended when their smallest member appeared.
  return part;
}

TypePartition singleton_types(const Instance& inst) {
  TypePartition part;
  part.target_classes.resize(static_cast<size_t>(inst.n));
  part.sensor_classes.resize(static_cast<size_t>(inst.k));
  part.target_class_of.resize(static_cast<size_t>(inst.n));
  part.sensor_class_of.resize(static_cast<size_t>(inst.k));
  for (int t = 0; t < inst.n; ++t) {
    part.target_classes[static_cast<size_t>(t)] = {t};
    part.target_class_of[static_cast<size_t>(t)] = t;
  }
  for (int j = 0; j < inst.k; ++j) {
    part.sensor_classes[static_cast<size_t>(j)] = {j};
    part.sensor_class_of[static_cast<size_t>(j)] = j;
  }
  return part;
}

}  // namespace esg
