#include "esg/ilp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "esg/core.hpp"

namespace esg {

namespace {

constexpr double kFeasTol = 1e-9;

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

int IntegerModel::add_binary(std::string name) {
  variables.push_back({std::move(name), ModelVariable::Type::Binary, 0, 1});
  return static_cast<int>(variables.size()) - 1;
}

int IntegerModel::add_integer(std::string name, long lower, long upper) {
  variables.push_back({std::move(name), ModelVariable::Type::Integer, lower, upper});
  return static_cast<int>(variables.size()) - 1;
}

void IntegerModel::add_constraint(std::string name, std::vector<LinearTerm> terms,
                                  Relation rel, double rhs) {
  for (const auto& t : terms)
    if (t.var < 0 || t.var >= static_cast<int>(variables.size()))
      throw std::invalid_argument("constraint references undeclared variable");
  constraints.push_back({std::move(name), std::move(terms), rel, rhs});
}

int IntegerModel::variable_index(std::string_view name) const {
  for (size_t i = 0; i < variables.size(); ++i)
    if (variables[i].name == name) return static_cast<int>(i);
  return -1;
}

size_t IntegerModel::count_variables(ModelVariable::Type type) const {
  size_t c = 0;
  for (const auto& v : variables)
    if (v.type == type) ++c;
  return c;
}

std::string export_model(const IntegerModel& model) {
  std::ostringstream os;
  os << (model.sense == ObjectiveSense::Minimize ? "minimize" : "maximize") << "\n";
  os << "obj:";
  for (const auto& t : model.objective)
    os << " + " << format_double(t.coef) << " " << model.variables[static_cast<size_t>(t.var)].name;
  os << "\n";
  os << "subject to\n";
  for (const auto& c : model.constraints) {
    os << c.name << ":";
    for (const auto& t : c.terms)
      os << " + " << format_double(t.coef) << " "
         << model.variables[static_cast<size_t>(t.var)].name;
    switch (c.rel) {
      case Relation::LessEq: os << " <= "; break;
      case Relation::GreaterEq: os << " >= "; break;
      case Relation::Equal: os << " = "; break;
    }
    os << format_double(c.rhs) << "\n";
  }
  os << "bounds\n";
  for (const auto& v : model.variables)
    if (v.type == ModelVariable::Type::Integer)
      os << v.lower << " <= " << v.name << " <= " << v.upper << "\n";
  os << "binaries\n";
  int per_line = 0;
  for (const auto& v : model.variables) {
    if (v.type != ModelVariable::Type::Binary) continue;
    os << v.name << ((++per_line % 12 == 0) ? "\n" : " ");
  }
  if (per_line % 12 != 0) os << "\n";
  os << "end\n";
  return os.str();
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

// "+ coef name + coef name ..." -> terms; requires the name->index map.
std::vector<LinearTerm> parse_terms(const std::vector<std::string>& toks, size_t begin,
                                    size_t end,
                                    const std::unordered_map<std::string, int>& index) {
  std::vector<LinearTerm> terms;
  size_t i = begin;
  while (i < end) {
    if (toks[i] == "+") {
      ++i;
      continue;
    }
    if (i + 1 >= end) throw std::invalid_argument("dangling coefficient in model text");
    LinearTerm t;
    t.coef = std::stod(toks[i]);
    auto it = index.find(toks[i + 1]);
    if (it == index.end())
      throw std::invalid_argument("unknown variable in model text: " + toks[i + 1]);
    t.var = it->second;
    terms.push_back(t);
    i += 2;
  }
  return terms;
}

}  // namespace

IntegerModel parse_model(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
      if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw std::invalid_argument("empty model text");

  IntegerModel model;
  if (lines[0] == "minimize")
    model.sense = ObjectiveSense::Minimize;
  else if (lines[0] == "maximize")
    model.sense = ObjectiveSense::Maximize;
  else
    throw std::invalid_argument("model text must start with minimize/maximize");

  // First pass: variable declarations, preserving integers-then-binaries
  // declaration order (every constructor in this project declares that way).
  size_t bounds_at = 0, binaries_at = 0, end_at = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i] == "bounds") bounds_at = i;
    if (lines[i] == "binaries") binaries_at = i;
    if (lines[i] == "end") end_at = i;
  }
  if (bounds_at == 0 || binaries_at == 0 || end_at == 0)
    throw std::invalid_argument("model text is missing sections");

  std::unordered_map<std::string, int> index;
  for (size_t i = bounds_at + 1; i < binaries_at; ++i) {
    const auto toks = tokenize(lines[i]);  // lo <= name <= hi
    if (toks.size() != 5 || toks[1] != "<=" || toks[3] != "<=")
      throw std::invalid_argument("bad bounds line: " + lines[i]);
    index[toks[2]] = model.add_integer(toks[2], std::stol(toks[0]), std::stol(toks[4]));
  }
  for (size_t i = binaries_at + 1; i < end_at; ++i)
    for (const auto& name : tokenize(lines[i])) index[name] = model.add_binary(name);

  // Second pass: objective and constraints.
  size_t subject_at = 0;
  for (size_t i = 0; i < lines.size(); ++i)
    if (lines[i] == "subject to") subject_at = i;
  if (subject_at == 0) throw std::invalid_argument("model text is missing constraints");

  {
    const auto toks = tokenize(lines[1]);
    if (toks.empty() || toks[0] != "obj:")
      throw std::invalid_argument("second line must hold the objective");
    model.objective = parse_terms(toks, 1, toks.size(), index);
  }
  for (size_t i = subject_at + 1; i < bounds_at; ++i) {
    auto toks = tokenize(lines[i]);
    if (toks.size() < 3 || toks[0].back() != ':')
      throw std::invalid_argument("bad constraint line: " + lines[i]);
    LinearConstraint c;
    c.name = toks[0].substr(0, toks[0].size() - 1);
    size_t rel_at = 0;
    for (size_t t = 1; t < toks.size(); ++t)
      if (toks[t] == "<=" || toks[t] == ">=" || toks[t] == "=") rel_at = t;
    if (rel_at == 0) throw std::invalid_argument("constraint without relation: " + lines[i]);
    c.rel = toks[rel_at] == "<=" ? Relation::LessEq
            : toks[rel_at] == ">=" ? Relation::GreaterEq
                                   : Relation::Equal;
    c.terms = parse_terms(toks, 1, rel_at, index);
    c.rhs = std::stod(toks[rel_at + 1]);
    model.constraints.push_back(std::move(c));
  }
  return model;
}

WitnessCheck check_assignment(const IntegerModel& model, const std::vector<long>& values) {
  if (values.size() != model.variables.size())
    throw std::invalid_argument("assignment length != variable count");
  for (size_t i = 0; i < model.variables.size(); ++i) {
    const auto& v = model.variables[i];
    if (values[i] < v.lower || values[i] > v.upper)
      return {false, "bounds(" + v.name + ")"};
  }
  for (const auto& c : model.constraints) {
    double lhs = 0.0;
    for (const auto& t : c.terms)
      lhs += t.coef * static_cast<double>(values[static_cast<size_t>(t.var)]);
    const bool ok = c.rel == Relation::LessEq      ? lhs <= c.rhs + kFeasTol
                    : c.rel == Relation::GreaterEq ? lhs >= c.rhs - kFeasTol
                                                   : std::abs(lhs - c.rhs) <= kFeasTol;
    if (!ok) return {false, c.name};
  }
  return {};
}

double evaluate_objective(const IntegerModel& model, const std::vector<long>& values) {
  if (values.size() != model.variables.size())
    throw std::invalid_argument("assignment length != variable count");
  double obj = 0.0;
  for (const auto& t : model.objective)
    obj += t.coef * static_cast<double>(values[static_cast<size_t>(t.var)]);
  return obj;
}

namespace {

struct Slot {
  // Either a partition group (choose exactly one member to set to 1) or a
  // single variable iterated over its bounds.
  bool is_group = false;
  std::vector<int> members;  // group: variable ids; single: one id
};

struct Touch {
  int constraint;  // -1 = objective
  double min_contrib;
  double max_contrib;
};

struct Enumerator {
  const IntegerModel& model;
  const uint64_t budget;
  uint64_t nodes = 0;

  std::vector<Slot> slots;
  std::vector<std::vector<Touch>> slot_touch;
  // Per slot, per choice: (constraint, delta) effects; constraint -1 is the
  // objective.
  std::vector<std::vector<std::vector<std::pair<int, double>>>> choice_effects;

  std::vector<double> act;     // current LHS per constraint
  std::vector<double> rem_lo;  // min remaining contribution per constraint
  std::vector<double> rem_hi;
  double obj_act = 0.0;
  double obj_rem_lo = 0.0;

  std::vector<long> current;
  bool found = false;
  double best = 0.0;
  std::vector<long> best_assign;

  explicit Enumerator(const IntegerModel& m, uint64_t node_budget)
      : model(m), budget(node_budget) {}

  bool feasible_after(int constraint_id) const {
    const auto& c = model.constraints[static_cast<size_t>(constraint_id)];
    const double lo = act[static_cast<size_t>(constraint_id)] + rem_lo[static_cast<size_t>(constraint_id)];
    const double hi = act[static_cast<size_t>(constraint_id)] + rem_hi[static_cast<size_t>(constraint_id)];
    switch (c.rel) {
      case Relation::LessEq: return lo <= c.rhs + kFeasTol;
      case Relation::GreaterEq: return hi >= c.rhs - kFeasTol;
      case Relation::Equal: return lo <= c.rhs + kFeasTol && hi >= c.rhs - kFeasTol;
    }
    return true;
  }

  void dfs(size_t depth) {
    if (found && obj_act + obj_rem_lo >= best) return;
    if (depth == slots.size()) {
      best = obj_act;
      best_assign = current;
      found = true;
      return;
    }
    const auto& touches = slot_touch[depth];
    for (const auto& t : touches) {
      if (t.constraint < 0) {
        obj_rem_lo -= t.min_contrib;
      } else {
        rem_lo[static_cast<size_t>(t.constraint)] -= t.min_contrib;
        rem_hi[static_cast<size_t>(t.constraint)] -= t.max_contrib;
      }
    }
    const size_t n_choices = choice_effects[depth].size();
    for (size_t c = 0; c < n_choices; ++c) {
      if (++nodes > budget) throw BudgetExceeded("enumeration node budget exceeded");
      for (const auto& [cid, delta] : choice_effects[depth][c]) {
        if (cid < 0)
          obj_act += delta;
        else
          act[static_cast<size_t>(cid)] += delta;
      }
      for (const auto& [var, val] : choice_assign_for(depth, c))
        current[static_cast<size_t>(var)] = val;
      bool ok = true;
      for (const auto& t : touches)
        if (t.constraint >= 0 && !feasible_after(t.constraint)) {
          ok = false;
          break;
        }
      if (ok) dfs(depth + 1);
      for (const auto& [cid, delta] : choice_effects[depth][c]) {
        if (cid < 0)
          obj_act -= delta;
        else
          act[static_cast<size_t>(cid)] -= delta;
      }
    }
    for (const auto& t : touches) {
      if (t.constraint < 0) {
        obj_rem_lo += t.min_contrib;
      } else {
        rem_lo[static_cast<size_t>(t.constraint)] += t.min_contrib;
        rem_hi[static_cast<size_t>(t.constraint)] += t.max_contrib;
      }
    }
  }

  std::vector<std::pair<int, long>> choice_assign_for(size_t depth, size_t choice) const {
    const auto& slot = slots[depth];
    std::vector<std::pair<int, long>> out;
    if (slot.is_group) {
      for (size_t m = 0; m < slot.members.size(); ++m)
        out.push_back({slot.members[m], m == choice ? 1L : 0L});
    } else {
      const auto& v = model.variables[static_cast<size_t>(slot.members[0])];
      out.push_back({slot.members[0], v.lower + static_cast<long>(choice)});
    }
    return out;
  }
};

}  // namespace

std::optional<ModelSolution> enumerate_optimum(const IntegerModel& model,
                                               const EnumerationOptions& opts) {
  // Work on a minimizing view; flip the objective back at the end.
  const double flip = model.sense == ObjectiveSense::Minimize ? 1.0 : -1.0;

  Enumerator en(model, opts.node_budget);

  // Partition-row detection.
  std::vector<char> grouped(model.variables.size(), 0);
  for (const auto& c : model.constraints) {
    if (c.rel != Relation::Equal || c.rhs != 1.0) continue;
    bool candidate = !c.terms.empty();
    for (const auto& t : c.terms) {
      if (t.coef != 1.0 ||
          model.variables[static_cast<size_t>(t.var)].type != ModelVariable::Type::Binary ||
          grouped[static_cast<size_t>(t.var)]) {
        candidate = false;
        break;
      }
    }
    if (!candidate) continue;
    Slot s;
    s.is_group = true;
    for (const auto& t : c.terms) {
      s.members.push_back(t.var);
      grouped[static_cast<size_t>(t.var)] = 1;
    }
    en.slots.push_back(std::move(s));
  }
  for (size_t v = 0; v < model.variables.size(); ++v)
    if (!grouped[v]) en.slots.push_back({false, {static_cast<int>(v)}});

  // Per-variable objective coefficients (minimizing view).
  std::vector<double> obj_coef(model.variables.size(), 0.0);
  for (const auto& t : model.objective)
    obj_coef[static_cast<size_t>(t.var)] += flip * t.coef;
  // Per-variable constraint incidence.
  std::vector<std::vector<std::pair<int, double>>> var_constraints(model.variables.size());
  for (size_t ci = 0; ci < model.constraints.size(); ++ci)
    for (const auto& t : model.constraints[ci].terms)
      var_constraints[static_cast<size_t>(t.var)].push_back({static_cast<int>(ci), t.coef});

  en.slot_touch.resize(en.slots.size());
  en.choice_effects.resize(en.slots.size());
  en.act.assign(model.constraints.size(), 0.0);
  en.rem_lo.assign(model.constraints.size(), 0.0);
  en.rem_hi.assign(model.constraints.size(), 0.0);
  en.current.assign(model.variables.size(), 0);

  for (size_t s = 0; s < en.slots.size(); ++s) {
    const auto& slot = en.slots[s];
    // Effects per choice.
    size_t n_choices;
    if (slot.is_group) {
      n_choices = slot.members.size();
    } else {
      const auto& v = model.variables[static_cast<size_t>(slot.members[0])];
      n_choices = static_cast<size_t>(v.upper - v.lower + 1);
    }
    std::vector<std::unordered_map<int, double>> deltas(n_choices);
    for (size_t c = 0; c < n_choices; ++c) {
      for (const auto& [var, val] : en.choice_assign_for(s, c)) {
        if (val == 0) continue;
        for (const auto& [ci, coef] : var_constraints[static_cast<size_t>(var)])
          deltas[c][ci] += coef * static_cast<double>(val);
        if (obj_coef[static_cast<size_t>(var)] != 0.0)
          deltas[c][-1] += obj_coef[static_cast<size_t>(var)] * static_cast<double>(val);
      }
    }
    // Touched constraints with min/max over choices.
    std::unordered_map<int, std::pair<double, double>> bounds;
    for (size_t c = 0; c < n_choices; ++c)
      for (const auto& kv : deltas[c]) bounds[kv.first] = {0, 0};
    for (auto& [ci, mm] : bounds) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (size_t c = 0; c < n_choices; ++c) {
        auto it = deltas[c].find(ci);
        const double d = it == deltas[c].end() ? 0.0 : it->second;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      mm = {lo, hi};
    }
    for (const auto& [ci, mm] : bounds) {
      en.slot_touch[s].push_back({ci, mm.first, mm.second});
      if (ci < 0)
        en.obj_rem_lo += mm.first;
      else {
        en.rem_lo[static_cast<size_t>(ci)] += mm.first;
        en.rem_hi[static_cast<size_t>(ci)] += mm.second;
      }
    }
    std::sort(en.slot_touch[s].begin(), en.slot_touch[s].end(),
              [](const Touch& a, const Touch& b) { return a.constraint < b.constraint; });
    en.choice_effects[s].resize(n_choices);
    for (size_t c = 0; c < n_choices; ++c) {
      for (const auto& [ci, d] : deltas[c]) en.choice_effects[s][c].push_back({ci, d});
      std::sort(en.choice_effects[s][c].begin(), en.choice_effects[s][c].end());
    }
  }

  // Constraints may be unsatisfiable even before branching.
  for (size_t ci = 0; ci < model.constraints.size(); ++ci)
    if (!en.feasible_after(static_cast<int>(ci))) return std::nullopt;

  en.dfs(0);
  if (!en.found) return std::nullopt;
  return ModelSolution{flip * en.best, en.best_assign};
}

}  // namespace esg
