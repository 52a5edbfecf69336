#include "grlab/landmarks.hpp"

#include <algorithm>
#include <chrono>
#include <deque>

namespace grlab {
namespace {

// Facts relaxed-reachable from init when every achiever of `forbidden` is
// disabled (-1 disables nothing).
FactSet relaxed_reachable_without(const GroundTask& task, int forbidden) {
  FactSet reached = task.init;
  bool changed = true;
  std::vector<bool> fired(task.actions.size(), false);
  while (changed) {
    changed = false;
    for (const GroundAction& a : task.actions) {
      if (fired[a.id]) continue;
      if (forbidden >= 0 && a.add.test(forbidden)) continue;
      if (!reached.contains(a.pre)) continue;
      fired[a.id] = true;
      FactSet before = reached;
      reached.unite(a.add);
      if (reached != before) changed = true;
    }
  }
  return reached;
}

}  // namespace

LandmarkSet extract_landmarks(const GroundTask& task, const FactSet& goal) {
  LandmarkSet out;
  FactSet reachable = relaxed_reachable_without(task, -1);
  if (!reachable.contains(goal)) {
    out.unsolvable = true;
    return out;
  }

  FactSet in_set(task.num_facts());
  std::deque<int> queue;
  for (int g : goal.ids()) queue.push_back(g);

  while (!queue.empty()) {
    int f = queue.front();
    queue.pop_front();
    if (in_set.test(f)) continue;
    in_set.set(f);
    out.facts.push_back(f);
    if (task.init.test(f)) continue;

    FactSet pre_f = relaxed_reachable_without(task, f);
    FactSet inter;
    bool first = true;
    for (const GroundAction& a : task.actions) {
      if (!a.add.test(f)) continue;
      if (!pre_f.contains(a.pre)) continue;  // not a first achiever
      if (first) {
        inter = a.pre;
        first = false;
      } else {
        FactSet keep(task.num_facts());
        for (int p : inter.ids()) {
          if (a.pre.test(p)) keep.set(p);
        }
        inter = keep;
      }
      if (inter.empty()) break;
    }
    if (first) {
      // No achiever can fire before f: f is unreachable after all.
      out.unsolvable = true;
      continue;
    }
    for (int p : inter.ids()) {
      if (!in_set.test(p)) queue.push_back(p);
    }
  }
  std::sort(out.facts.begin(), out.facts.end());
  return out;
}

std::vector<int> achieved_landmarks(const LandmarkSet& lms,
                                    const GroundTask& task,
                                    const std::vector<int>& observed_actions) {
  FactSet seen = task.init;
  for (int aid : observed_actions) {
    const GroundAction& a = task.actions.at(aid);
    seen.unite(a.pre);
    seen.unite(a.add);
  }
  std::vector<int> achieved;
  for (int f : lms.facts) {
    if (seen.test(f)) achieved.push_back(f);
  }
  return achieved;
}

namespace {

std::vector<LandmarkSet> all_landmarks(const RecognitionProblem& problem) {
  std::vector<LandmarkSet> sets;
  sets.reserve(problem.candidates.size());
  for (const FactSet& g : problem.candidates) {
    sets.push_back(extract_landmarks(*problem.task, g));
  }
  return sets;
}

}  // namespace

std::vector<double> goal_completion_scores(const RecognitionProblem& problem) {
  std::vector<double> scores;
  for (const FactSet& g : problem.candidates) {
    LandmarkSet lms = extract_landmarks(*problem.task, g);
    if (lms.unsolvable || lms.facts.empty()) {
      scores.push_back(0.0);
      continue;
    }
    auto achieved =
        achieved_landmarks(lms, *problem.task, problem.observed_actions);
    scores.push_back(static_cast<double>(achieved.size()) /
                     static_cast<double>(lms.facts.size()));
  }
  return scores;
}

std::vector<double> uniqueness_scores(const RecognitionProblem& problem) {
  std::vector<LandmarkSet> sets = all_landmarks(problem);
  // uniqueness(l) = 1 / #candidates whose landmark set contains l.
  std::vector<int> sharers(problem.task->num_facts(), 0);
  for (const LandmarkSet& lms : sets) {
    if (lms.unsolvable) continue;
    for (int f : lms.facts) ++sharers[f];
  }
  std::vector<double> scores;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const LandmarkSet& lms = sets[i];
    if (lms.unsolvable || lms.facts.empty()) {
      scores.push_back(0.0);
      continue;
    }
    double total = 0.0;
    for (int f : lms.facts) total += 1.0 / sharers[f];
    auto achieved =
        achieved_landmarks(lms, *problem.task, problem.observed_actions);
    double got = 0.0;
    for (int f : achieved) got += 1.0 / sharers[f];
    scores.push_back(total > 0.0 ? got / total : 0.0);
  }
  return scores;
}

RecognitionResult recognize_pom(const RecognitionProblem& problem,
                                PomHeuristic heuristic, double theta_percent) {
  auto t0 = std::chrono::steady_clock::now();
  RecognitionResult res;
  std::vector<LandmarkSet> sets = all_landmarks(problem);

  std::vector<int> sharers(problem.task->num_facts(), 0);
  if (heuristic == PomHeuristic::Uniqueness) {
    for (const LandmarkSet& lms : sets) {
      if (lms.unsolvable) continue;
      for (int f : lms.facts) ++sharers[f];
    }
  }
  for (const LandmarkSet& lms : sets) {
    if (lms.unsolvable || lms.facts.empty()) {
      res.scores.push_back(0.0);
      continue;
    }
    auto achieved =
        achieved_landmarks(lms, *problem.task, problem.observed_actions);
    if (heuristic == PomHeuristic::GoalCompletion) {
      res.scores.push_back(static_cast<double>(achieved.size()) /
                           static_cast<double>(lms.facts.size()));
    } else {
      double total = 0.0, got = 0.0;
      for (int f : lms.facts) total += 1.0 / sharers[f];
      for (int f : achieved) got += 1.0 / sharers[f];
      res.scores.push_back(total > 0.0 ? got / total : 0.0);
    }
  }

  res.all_unsolvable = std::all_of(sets.begin(), sets.end(),
                                   [](const auto& s) { return s.unsolvable; });
  if (res.all_unsolvable) {
    for (std::size_t i = 0; i < res.scores.size(); ++i) {
      res.returned.push_back(static_cast<int>(i));
    }
  } else {
    double best = 0.0;
    for (std::size_t i = 0; i < res.scores.size(); ++i) {
      if (!sets[i].unsolvable) best = std::max(best, res.scores[i]);
    }
    double cutoff = best - theta_percent / 100.0;
    for (std::size_t i = 0; i < res.scores.size(); ++i) {
      if (!sets[i].unsolvable && res.scores[i] >= cutoff - 1e-12) {
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
