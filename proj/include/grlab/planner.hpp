#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grlab/strips.hpp"

namespace grlab {

enum class SearchMode { OptimalAstar, OptimalBfs, SatisficingGbfs };
enum class HeuristicKind { GoalCount, HMax, HAdd };

struct SearchConfig {
  SearchMode mode = SearchMode::OptimalAstar;
  HeuristicKind heuristic = HeuristicKind::HMax;
  long node_limit = 5'000'000;
  unsigned seed = 0;
};

struct Plan {
  std::vector<int> action_ids;
  int cost() const { return static_cast<int>(action_ids.size()); }
};

enum class SolveStatus { Solved, Unsolvable, LimitExceeded };

struct SolveResult {
  SolveStatus status = SolveStatus::Unsolvable;
  Plan plan;
  long expanded = 0;
};

// Forward search from task.init to task.goal. Optimal modes return a
// minimum-length plan; ties broken by lower f, lower h, smaller action id,
// then FIFO, so results are fully deterministic.
SolveResult solve(const GroundTask& task, const SearchConfig& cfg);

// Same search against an alternative goal.
SolveResult solve_to(const GroundTask& task, const FactSet& goal,
                     const SearchConfig& cfg);

struct CostResult {
  SolveStatus status;
  int cost = -1;
  long expanded = 0;
};

// Shortest-plan length from task.init to goal_override (A*, h_max).
CostResult optimal_cost(const GroundTask& task, const FactSet& goal_override,
                        long node_limit = 5'000'000);

struct Validation {
  bool ok = true;
  int bad_step = -1;  // first offending step, -1 when the goal is unmet
  std::string reason;
};

Validation validate(const GroundTask& task, const Plan& plan);
Validation validate_to(const GroundTask& task, const FactSet& goal,
                       const Plan& plan);

// Delete-relaxation heuristics, exposed for the admissibility checks.
// Return -1 when the goal is relaxed-unreachable.
int hmax_value(const GroundTask& task, const State& s, const FactSet& goal);
int hadd_value(const GroundTask& task, const State& s, const FactSet& goal);

}  // namespace grlab
