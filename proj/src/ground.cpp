#include "grlab/ground.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace grlab {
namespace {

struct ProtoAction {
  std::string name;
  std::vector<std::string> pre;
  std::vector<std::string> add;
  std::vector<std::string> del;
};

std::string atom_key(const std::string& pred,
                     const std::vector<std::string>& args) {
  std::string s = "(" + pred;
  for (const auto& a : args) s += " " + a;
  return s + ")";
}

}  // namespace

GroundTask ground(const DomainModel& dom, const ProblemSpec& prob) {
  // Predicates never touched by an effect are static.
  std::set<std::string> fluent_preds;
  for (const auto& op : dom.operators) {
    for (const auto& a : op.add) fluent_preds.insert(a.pred);
    for (const auto& a : op.del) fluent_preds.insert(a.pred);
  }
  auto is_static = [&](const std::string& pred) {
    return fluent_preds.count(pred) == 0;
  };

  std::unordered_set<std::string> init_atoms;
  for (const auto& a : prob.init) init_atoms.insert(a.str());

  // Enumerate typed bindings per operator, in declaration order.
  std::vector<ProtoAction> protos;
  for (const auto& op : dom.operators) {
    std::vector<std::vector<std::string>> domains;
    for (const auto& param : op.params) {
      std::vector<std::string> objs;
      for (const auto& o : prob.objects) {
        if (dom.type_ok(o.type, param.type)) objs.push_back(o.name);
      }
      domains.push_back(std::move(objs));
    }

    std::vector<std::size_t> idx(op.params.size(), 0);
    bool exhausted = std::any_of(domains.begin(), domains.end(),
                                 [](const auto& d) { return d.empty(); });
    if (exhausted && !op.params.empty()) continue;
    while (true) {
      auto subst = [&](const Atom& a) {
        std::vector<std::string> args;
        args.reserve(a.args.size());
        for (const auto& arg : a.args) {
          if (!arg.empty() && arg[0] == '?') {
            std::size_t p = 0;
            while (p < op.params.size() && op.params[p].name != arg) ++p;
            args.push_back(domains[p][idx[p]]);
          } else {
            if (!prob.find_object(arg)) {
              throw ModelError("operator '" + op.name +
                               "' references unknown constant '" + arg + "'");
            }
            args.push_back(arg);
          }
        }
        return atom_key(a.pred, args);
      };

      ProtoAction pa;
      pa.name = "(" + op.name;
      for (std::size_t p = 0; p < op.params.size(); ++p) {
        pa.name += " " + domains[p][idx[p]];
      }
      pa.name += ")";

      bool statically_dead = false;
      for (const auto& a : op.pre) {
        std::string key = subst(a);
        if (is_static(a.pred)) {
          if (!init_atoms.count(key)) {
            statically_dead = true;
            break;
          }
          // Invariantly true; no need to carry it.
        } else {
          pa.pre.push_back(key);
        }
      }
      if (!statically_dead) {
        for (const auto& a : op.add) pa.add.push_back(subst(a));
        for (const auto& a : op.del) pa.del.push_back(subst(a));
        std::set<std::string> adds(pa.add.begin(), pa.add.end());
        bool overlap = std::any_of(pa.del.begin(), pa.del.end(),
                                   [&](const auto& d) { return adds.count(d); });
        if (!overlap) protos.push_back(std::move(pa));
      }

      // Next binding.
      std::size_t p = 0;
      for (; p < idx.size(); ++p) {
        if (++idx[p] < domains[p].size()) break;
        idx[p] = 0;
      }
      if (p == idx.size()) break;
      if (op.params.empty()) break;
    }
  }

  // Fact table: init atoms first, then atoms as relaxed reachability
  // discovers them (action order), then any unreached goal/candidate atoms.
  GroundTask task;
  auto intern = [&task](const std::string& key) {
    auto it = task.fact_index.find(key);
    if (it != task.fact_index.end()) return it->second;
    int id = static_cast<int>(task.fact_names.size());
    task.fact_names.push_back(key);
    task.fact_index.emplace(key, id);
    return id;
  };
  for (const auto& a : prob.init) intern(a.str());

  std::vector<bool> fired(protos.size(), false);
  std::unordered_set<std::string> reached(init_atoms);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < protos.size(); ++i) {
      if (fired[i]) continue;
      const ProtoAction& pa = protos[i];
      bool ok = std::all_of(pa.pre.begin(), pa.pre.end(), [&](const auto& f) {
        return reached.count(f) > 0;
      });
      if (!ok) continue;
      fired[i] = true;
      changed = true;
      for (const auto& f : pa.add) {
        intern(f);
        reached.insert(f);
      }
    }
  }
  for (const auto& a : prob.goal) intern(a.str());
  for (const auto& cand : prob.candidates) {
    for (const auto& a : cand) intern(a.str());
  }

  std::size_t n = task.fact_names.size();
  task.init = FactSet(n);
  for (const auto& a : prob.init) task.init.set(task.fact_index.at(a.str()));
  task.goal = FactSet(n);
  for (const auto& a : prob.goal) task.goal.set(task.fact_index.at(a.str()));
  for (const auto& cand : prob.candidates) {
    FactSet g(n);
    for (const auto& a : cand) g.set(task.fact_index.at(a.str()));
    task.candidates.push_back(std::move(g));
  }

  for (std::size_t i = 0; i < protos.size(); ++i) {
    if (!fired[i]) continue;
    const ProtoAction& pa = protos[i];
    GroundAction ga;
    ga.name = pa.name;
    ga.pre = FactSet(n);
    ga.add = FactSet(n);
    ga.del = FactSet(n);
    for (const auto& f : pa.pre) ga.pre.set(task.fact_index.at(f));
    for (const auto& f : pa.add) ga.add.set(task.fact_index.at(f));
    for (const auto& f : pa.del) {
      auto it = task.fact_index.find(f);
      // A delete of a never-reachable atom is vacuous.
      if (it != task.fact_index.end()) ga.del.set(it->second);
    }
    ga.id = static_cast<int>(task.actions.size());
    task.actions.push_back(std::move(ga));
  }
  return task;
}

}  // namespace grlab
