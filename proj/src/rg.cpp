#include "grlab/rg.hpp"

#include <chrono>
#include <limits>

namespace grlab {

CompiledTask compile_observations(const GroundTask& task,
                                  const std::vector<int>& observed_actions) {
  CompiledTask out;
  out.task = task;
  GroundTask& t = out.task;

  int n_obs = static_cast<int>(observed_actions.size());
  int base_facts = t.num_facts();
  std::size_t total = base_facts + n_obs + 1;

  for (int i = 0; i <= n_obs; ++i) {
    int id = base_facts + i;
    t.fact_names.push_back("(obs-marker p" + std::to_string(i) + ")");
    t.fact_index.emplace(t.fact_names.back(), id);
    out.marker_ids.push_back(id);
  }

  t.init.resize_grow(total);
  t.goal.resize_grow(total);
  for (auto& c : t.candidates) c.resize_grow(total);
  for (auto& a : t.actions) {
    a.pre.resize_grow(total);
    a.add.resize_grow(total);
    a.del.resize_grow(total);
  }
  t.init.set(out.marker_ids[0]);

  for (int i = 0; i < n_obs; ++i) {
    int aid = observed_actions[i];
    if (aid < 0 || aid >= static_cast<int>(task.actions.size())) {
      throw Error("observed action id " + std::to_string(aid) +
                  " not in the task");
    }
    GroundAction copy = t.actions[aid];
    copy.name = copy.name + "@o" + std::to_string(i + 1);
    copy.pre.set(out.marker_ids[i]);
    copy.add.set(out.marker_ids[i + 1]);
    copy.id = static_cast<int>(t.actions.size());
    t.actions.push_back(std::move(copy));
  }
  return out;
}

RecognitionResult recognize_rg(const RecognitionProblem& problem,
                               CostCache* base_cache, long node_limit) {
  auto t0 = std::chrono::steady_clock::now();
  RecognitionResult res;
  const GroundTask& task = *problem.task;

  CostCache local;
  CostCache& cache = base_cache ? *base_cache : local;

  CompiledTask compiled = compile_observations(task, problem.observed_actions);

  std::vector<int> delta(problem.candidates.size(), -1);
  std::vector<bool> usable(problem.candidates.size(), false);

  for (std::size_t i = 0; i < problem.candidates.size(); ++i) {
    CostResult base = cache.get(task, problem.candidates[i], node_limit);
    if (base.status != SolveStatus::Solved) continue;

    FactSet cgoal = problem.candidates[i];
    cgoal.resize_grow(compiled.task.num_facts());
    cgoal.set(compiled.last_marker());
    CostResult constrained = optimal_cost(compiled.task, cgoal, node_limit);
    if (constrained.status != SolveStatus::Solved) continue;

    delta[i] = constrained.cost - base.cost;
    usable[i] = true;
  }

  int best = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (usable[i]) best = std::min(best, delta[i]);
  }
  res.all_unsolvable = best == std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (res.all_unsolvable) {
      res.scores.push_back(0.0);
      res.returned.push_back(static_cast<int>(i));
    } else {
      res.scores.push_back(usable[i] ? 1.0 / (1.0 + delta[i]) : 0.0);
      if (usable[i] && delta[i] == best) {
        res.returned.push_back(static_cast<int>(i));
      }
    }
  }
  res.elapsed_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  return res;
}

}  // namespace grlab
