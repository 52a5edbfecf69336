#include "grlab/planner.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>
#include <unordered_map>

namespace grlab {
namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

// Delete-relaxation fact costs from s (unit action costs). `additive`
// selects sum-combination for preconditions, otherwise max.
std::vector<int> relaxed_fact_costs(const GroundTask& task, const State& s,
                                    bool additive) {
  std::vector<int> cost(task.num_facts(), kInf);
  for (int id : s.ids()) cost[id] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const GroundAction& a : task.actions) {
      int pre_cost = 0;
      bool reachable = true;
      for (int p : a.pre.ids()) {
        if (cost[p] >= kInf) {
          reachable = false;
          break;
        }
        pre_cost = additive ? pre_cost + cost[p] : std::max(pre_cost, cost[p]);
      }
      if (!reachable) continue;
      int via = pre_cost + a.cost;
      for (int f : a.add.ids()) {
        if (via < cost[f]) {
          cost[f] = via;
          changed = true;
        }
      }
    }
  }
  return cost;
}

int combine_goal(const std::vector<int>& cost, const FactSet& goal,
                 bool additive) {
  int v = 0;
  for (int g : goal.ids()) {
    if (cost[g] >= kInf) return -1;
    v = additive ? v + cost[g] : std::max(v, cost[g]);
  }
  return v;
}

int heuristic(const GroundTask& task, const State& s, const FactSet& goal,
              HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::GoalCount: {
      int n = 0;
      for (int g : goal.ids()) {
        if (!s.test(g)) ++n;
      }
      return n;
    }
    case HeuristicKind::HMax:
      return combine_goal(relaxed_fact_costs(task, s, false), goal, false);
    case HeuristicKind::HAdd:
      return combine_goal(relaxed_fact_costs(task, s, true), goal, true);
  }
  return 0;
}

struct Node {
  State s;
  int g;
  int parent;
  int action;
};

SolveResult best_first(const GroundTask& task, const FactSet& goal,
                       const SearchConfig& cfg) {
  const bool greedy = cfg.mode == SearchMode::SatisficingGbfs;
  const HeuristicKind hk = cfg.mode == SearchMode::OptimalBfs
                               ? HeuristicKind::GoalCount
                               : cfg.heuristic;
  const bool use_h = cfg.mode != SearchMode::OptimalBfs;

  SolveResult res;
  std::vector<Node> nodes;
  std::unordered_map<FactSet, int, FactSetHash> best_g;

  // (f, h, tie) min ordering; tie counter preserves generation order, which
  // itself follows ascending action id.
  using Entry = std::tuple<int, int, long, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  long tie = 0;

  int h0 = use_h ? heuristic(task, task.init, goal, hk) : 0;
  if (use_h && h0 < 0) {
    res.status = SolveStatus::Unsolvable;
    return res;
  }
  nodes.push_back({task.init, 0, -1, -1});
  best_g[task.init] = 0;
  open.emplace(greedy ? h0 : h0, h0, tie++, 0);

  while (!open.empty()) {
    auto [f, h, t, idx] = open.top();
    open.pop();
    const Node node = nodes[idx];
    auto it = best_g.find(node.s);
    if (it != best_g.end() && it->second < node.g) continue;  // stale

    if (node.s.contains(goal)) {
      res.status = SolveStatus::Solved;
      for (int cur = idx; nodes[cur].action >= 0; cur = nodes[cur].parent) {
        res.plan.action_ids.push_back(nodes[cur].action);
      }
      std::reverse(res.plan.action_ids.begin(), res.plan.action_ids.end());
      return res;
    }

    if (res.expanded >= cfg.node_limit) {
      res.status = SolveStatus::LimitExceeded;
      return res;
    }
    ++res.expanded;

    for (const GroundAction& a : task.actions) {
      if (!applicable(node.s, a)) continue;
      State succ = node.s;
      succ.unite(a.add);
      succ.subtract(a.del);
      int g2 = node.g + a.cost;
      auto [sit, fresh] = best_g.try_emplace(succ, g2);
      if (!fresh && sit->second <= g2) continue;
      sit->second = g2;
      int h2 = use_h ? heuristic(task, succ, goal, hk) : 0;
      if (use_h && h2 < 0) continue;  // relaxed dead end
      nodes.push_back({std::move(succ), g2, idx, a.id});
      int f2 = greedy ? h2 : g2 + h2;
      open.emplace(f2, h2, tie++, static_cast<int>(nodes.size() - 1));
    }
  }
  res.status = SolveStatus::Unsolvable;
  return res;
}

}  // namespace

SolveResult solve(const GroundTask& task, const SearchConfig& cfg) {
  return solve_to(task, task.goal, cfg);
}

SolveResult solve_to(const GroundTask& task, const FactSet& goal,
                     const SearchConfig& cfg) {
  return best_first(task, goal, cfg);
}

CostResult optimal_cost(const GroundTask& task, const FactSet& goal_override,
                        long node_limit) {
  SearchConfig cfg;
  cfg.mode = SearchMode::OptimalAstar;
  cfg.heuristic = HeuristicKind::HMax;
  cfg.node_limit = node_limit;
  SolveResult r = solve_to(task, goal_override, cfg);
  return {r.status, r.status == SolveStatus::Solved ? r.plan.cost() : -1,
          r.expanded};
}

Validation validate_to(const GroundTask& task, const FactSet& goal,
                       const Plan& plan) {
  State s = task.init;
  for (std::size_t i = 0; i < plan.action_ids.size(); ++i) {
    int aid = plan.action_ids[i];
    if (aid < 0 || aid >= static_cast<int>(task.actions.size())) {
      return {false, static_cast<int>(i), "unknown action id"};
    }
    const GroundAction& a = task.actions[aid];
    if (!applicable(s, a)) {
      return {false, static_cast<int>(i),
              "action " + a.name + " inapplicable"};
    }
    s.unite(a.add);
    s.subtract(a.del);
  }
  if (!s.contains(goal)) {
    return {false, -1, "final state does not satisfy the goal"};
  }
  return {};
}

Validation validate(const GroundTask& task, const Plan& plan) {
  return validate_to(task, task.goal, plan);
}

int hmax_value(const GroundTask& task, const State& s, const FactSet& goal) {
  return combine_goal(relaxed_fact_costs(task, s, false), goal, false);
}

int hadd_value(const GroundTask& task, const State& s, const FactSet& goal) {
  return combine_goal(relaxed_fact_costs(task, s, true), goal, true);
}

}  // namespace grlab
