#pragma once

#include <unordered_map>
#include <vector>

#include "grlab/landmarks.hpp"
#include "grlab/planner.hpp"
#include "grlab/strips.hpp"

namespace grlab {

// Observation compilation: one marker fact per observation plus a marked copy
// of each observed action. Any plan achieving the last marker embeds the
// observation sequence as a subsequence.
struct CompiledTask {
  GroundTask task;
  std::vector<int> marker_ids;  // p_0 .. p_n
  int last_marker() const { return marker_ids.back(); }
};

CompiledTask compile_observations(const GroundTask& task,
                                  const std::vector<int>& observed_actions);

// Memoizes optimal base-task costs per goal across observability levels.
class CostCache {
 public:
  CostResult get(const GroundTask& task, const FactSet& goal,
                 long node_limit) {
    auto it = cache_.find(goal);
    if (it != cache_.end()) return it->second;
    CostResult r = optimal_cost(task, goal, node_limit);
    cache_.emplace(goal, r);
    return r;
  }

 private:
  std::unordered_map<FactSet, CostResult, FactSetHash> cache_;
};

// Cost-difference recognizer: delta(G) = cost(G | O) - cost(G); returns the
// argmin-delta set. Scores are 1/(1+delta) so higher is better.
RecognitionResult recognize_rg(const RecognitionProblem& problem,
                               CostCache* base_cache = nullptr,
                               long node_limit = 5'000'000);

}  // namespace grlab
