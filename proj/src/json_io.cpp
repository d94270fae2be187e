#include "esg/json_io.hpp"

#include <fstream>
#include <sstream>

namespace esg {

nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["n"] = inst.n;
  j["k"] = inst.k;
  if (inst.tau == kInfiniteTau)
    j["tau"] = "inf";
  else
    j["tau"] = inst.tau;
  j["values"] = inst.values;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : inst.matrix) {
    nlohmann::json r = nlohmann::json::array();
    for (const uint8_t b : row) r.push_back(static_cast<int>(b));
    rows.push_back(std::move(r));
  }
  j["matrix"] = std::move(rows);
  j["metadata"] = inst.metadata;
  return j;
}

Instance instance_from_json(const nlohmann::json& j) {
  Instance inst;
  inst.n = j.at("n").get<int>();
  inst.k = j.at("k").get<int>();
  const auto& tau = j.at("tau");
  if (tau.is_string()) {
    if (tau.get<std::string>() != "inf")
      throw std::invalid_argument("tau must be an integer or \"inf\"");
    inst.tau = kInfiniteTau;
  } else {
    inst.tau = tau.get<int>();
  }
  inst.values = j.at("values").get<std::vector<double>>();
  inst.matrix.clear();
  for (const auto& row : j.at("matrix")) {
    std::vector<uint8_t> r;
    for (const auto& b : row) r.push_back(static_cast<uint8_t>(b.get<int>()));
    inst.matrix.push_back(std::move(r));
  }
  if (j.contains("metadata")) inst.metadata = j.at("metadata");
  check_instance(inst);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return instance_from_json(j);
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << instance_to_json(inst).dump(2) << "\n";
}

nlohmann::json plan_to_json(const SensingPlan& psi) {
  nlohmann::json arr = nlohmann::json::array();
  for (const int s : psi.sensor_of) {
    if (s == 0)
      arr.push_back(nullptr);
    else
      arr.push_back(s);
  }
  return arr;
}

SensingPlan plan_from_json(const nlohmann::json& j) {
  SensingPlan psi;
  for (const auto& e : j) psi.sensor_of.push_back(e.is_null() ? 0 : e.get<int>());
  return psi;
}

nlohmann::json ordering_to_json(const TargetOrdering& sigma) {
  return nlohmann::json(sigma.positions);
}

TargetOrdering ordering_from_json(const nlohmann::json& j) {
  TargetOrdering sigma;
  sigma.positions = j.get<std::vector<int>>();
  return sigma;
}

TargetOrdering parse_ordering(const std::string& text) {
  TargetOrdering sigma;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    sigma.positions.push_back(std::stoi(tok));
  }
  if (!sigma.is_permutation())
    throw std::invalid_argument("ordering is not a permutation of 1..n");
  return sigma;
}

}  // namespace esg
