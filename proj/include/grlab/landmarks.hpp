#pragma once

#include <vector>

#include "grlab/strips.hpp"

namespace grlab {

// Fact landmarks for one candidate goal. `unsolvable` flags goals that are
// not even delete-relaxation reachable; their landmark set is meaningless.
struct LandmarkSet {
  std::vector<int> facts;
  bool unsolvable = false;
};

// Backchaining over the delete relaxation: goal facts are landmarks, and the
// intersection of the precondition sets of all first achievers of a landmark
// yields further landmarks, to fixpoint. Sound but not complete.
LandmarkSet extract_landmarks(const GroundTask& task, const FactSet& goal);

// A landmark counts as achieved when it holds in init or appears in the
// precondition or add set of any observed action. Monotone in the
// observation set.
std::vector<int> achieved_landmarks(const LandmarkSet& lms,
                                    const GroundTask& task,
                                    const std::vector<int>& observed_actions);

struct RecognitionProblem {
  const GroundTask* task = nullptr;
  std::vector<FactSet> candidates;
  std::vector<int> observed_actions;  // action ids, trace order
};

struct RecognitionResult {
  std::vector<double> scores;  // per candidate, in [0,1]
  std::vector<int> returned;   // candidate indices, ascending
  double elapsed_s = 0.0;
  bool all_unsolvable = false;
  int spread() const { return static_cast<int>(returned.size()); }
};

enum class PomHeuristic { GoalCompletion, Uniqueness };

// Achieved/total landmark ratio per candidate.
std::vector<double> goal_completion_scores(const RecognitionProblem& problem);

// Landmarks weighted by 1/(number of candidates sharing them).
std::vector<double> uniqueness_scores(const RecognitionProblem& problem);

// Returns every candidate scoring within theta_percent/100 of the best.
// Candidates with unsolvable goals score 0 and are excluded unless all are.
RecognitionResult recognize_pom(const RecognitionProblem& problem,
                                PomHeuristic heuristic, double theta_percent);

}  // namespace grlab
