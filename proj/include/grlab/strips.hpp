#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "grlab/fact_set.hpp"

namespace grlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse failure with source position (1-based line/column).
struct ParseError : Error {
  ParseError(const std::string& msg, int line, int col)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

// Semantic failure: undeclared predicate, type mismatch, unknown object.
struct ModelError : Error {
  using Error::Error;
};

struct TypedVar {
  std::string name;
  std::string type;
};

struct Predicate {
  std::string name;
  std::vector<TypedVar> params;
};

// Atom over a predicate; args are variables (leading '?') or constants.
struct Atom {
  std::string pred;
  std::vector<std::string> args;

  bool operator==(const Atom& o) const {
    return pred == o.pred && args == o.args;
  }
  std::string str() const {
    std::string s = "(" + pred;
    for (const auto& a : args) s += " " + a;
    return s + ")";
  }
};

struct Operator {
  std::string name;
  std::vector<TypedVar> params;
  std::vector<Atom> pre;
  std::vector<Atom> add;
  std::vector<Atom> del;
};

struct DomainModel {
  std::string name;
  std::vector<std::string> requirements;
  // type -> parent type; the implicit root is "object".
  std::map<std::string, std::string> type_parent;
  std::vector<Predicate> predicates;
  std::vector<Operator> operators;

  const Predicate* find_predicate(const std::string& n) const {
    for (const auto& p : predicates) {
      if (p.name == n) return &p;
    }
    return nullptr;
  }

  bool type_declared(const std::string& t) const {
    return t == "object" || type_parent.count(t) > 0;
  }

  // True when an object of type `have` satisfies a parameter of type `want`.
  bool type_ok(const std::string& have, const std::string& want) const {
    if (want == "object") return true;
    std::string t = have;
    while (true) {
      if (t == want) return true;
      auto it = type_parent.find(t);
      if (it == type_parent.end()) return false;
      t = it->second;
      if (t == "object") return t == want;
    }
  }
};

struct ProblemSpec {
  std::string name;
  std::string domain_name;
  std::vector<TypedVar> objects;
  std::vector<Atom> init;
  std::vector<Atom> goal;
  // Candidate goal sets from the (:candidates ...) extension block.
  std::vector<std::vector<Atom>> candidates;

  const TypedVar* find_object(const std::string& n) const {
    for (const auto& o : objects) {
      if (o.name == n) return &o;
    }
    return nullptr;
  }
};

struct GroundAction {
  std::string name;  // e.g. "(slide t3 c4 c5)"
  FactSet pre;
  FactSet add;
  FactSet del;
  int id = -1;
  int cost = 1;
};

using State = FactSet;

struct GroundTask {
  std::vector<std::string> fact_names;  // id -> "(pred arg ...)"
  std::unordered_map<std::string, int> fact_index;
  std::vector<GroundAction> actions;
  State init;
  FactSet goal;
  std::vector<FactSet> candidates;

  int num_facts() const { return static_cast<int>(fact_names.size()); }

  int fact_id(const std::string& name) const {
    auto it = fact_index.find(name);
    return it == fact_index.end() ? -1 : it->second;
  }

  std::string fact_list(const FactSet& fs) const {
    std::string out;
    for (int id : fs.ids()) {
      if (!out.empty()) out += " ";
      out += fact_names[id];
    }
    return out;
  }
};

inline bool applicable(const State& s, const GroundAction& a) {
  return s.contains(a.pre);
}

// Progression: (s ∪ add) \ del. Throws listing the unmet preconditions.
inline State apply(const GroundTask& task, const State& s,
                   const GroundAction& a) {
  if (!applicable(s, a)) {
    FactSet missing = a.pre;
    for (int id : a.pre.ids()) {
      if (s.test(id)) missing.reset(id);
    }
    throw Error("action " + a.name +
                " not applicable; missing: " + task.fact_list(missing));
  }
  State next = s;
  next.unite(a.add);
  next.subtract(a.del);
  return next;
}

}  // namespace grlab
