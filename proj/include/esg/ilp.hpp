#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace esg {

// Solver-agnostic integer program: named bounded integer/binary variables,
// linear constraints, and a linear objective. Built by the model
// constructors, validated against witness assignments, exported as text,
// and solved at toy scale by branch-and-bound enumeration. Never handed to
// an external engine.

struct ModelVariable {
  enum class Type { Binary, Integer };
  std::string name;
  Type type = Type::Binary;
  long lower = 0;
  long upper = 1;
  bool operator==(const ModelVariable&) const = default;
};

struct LinearTerm {
  int var = -1;
  double coef = 0.0;
  bool operator==(const LinearTerm&) const = default;
};

enum class Relation { LessEq, GreaterEq, Equal };
enum class ObjectiveSense { Minimize, Maximize };

struct LinearConstraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
  bool operator==(const LinearConstraint&) const = default;
};

struct IntegerModel {
  ObjectiveSense sense = ObjectiveSense::Minimize;
  std::vector<LinearTerm> objective;
  std::vector<ModelVariable> variables;
  std::vector<LinearConstraint> constraints;

  int add_binary(std::string name);
  int add_integer(std::string name, long lower, long upper);
  void add_constraint(std::string name, std::vector<LinearTerm> terms, Relation rel,
                      double rhs);

  int variable_index(std::string_view name) const;  // -1 when absent
  size_t count_variables(ModelVariable::Type type) const;

  bool operator==(const IntegerModel&) const = default;
};

// Human-readable LP-style text with stable naming; parse_model inverts it
// structurally (same order, names, coefficients, bounds).
std::string export_model(const IntegerModel& model);
IntegerModel parse_model(const std::string& text);

struct WitnessCheck {
  bool feasible = true;
  std::string violated_constraint;  // first violated, in construction order
};

// Bounds and every constraint evaluated against a full assignment.
WitnessCheck check_assignment(const IntegerModel& model, const std::vector<long>& values);

double evaluate_objective(const IntegerModel& model, const std::vector<long>& values);

struct ModelSolution {
  double objective = 0.0;
  std::vector<long> assignment;
};

struct EnumerationOptions {
  uint64_t node_budget = 2'000'000'000;
};

// Exhaustive optimum by depth-first enumeration with constraint and bound
// pruning. Partition rows (equality constraints forcing exactly one of a
// group of binaries to 1) are branched group-wise. Returns nullopt when
// infeasible; throws BudgetExceeded past the node budget.
std::optional<ModelSolution> enumerate_optimum(const IntegerModel& model,
                                               const EnumerationOptions& opts = {});

}  // namespace esg
