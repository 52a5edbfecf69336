#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "grlab/codec.hpp"
#include "grlab/domains.hpp"
#include "grlab/planner.hpp"

namespace grlab {

struct PlanTrace {
  FactSet goal;
  Plan plan;
  std::vector<State> states;  // init first; states[i+1] = result of action i
};

// Solves task.init -> goal and replays the plan into a state trace.
PlanTrace generate_trace(const GroundTask& task, const FactSet& goal,
                         const SearchConfig& cfg);

enum class ObsKind { ActionObs, StateObs };
enum class RoundRule { Round, Ceil };

// Uniformly samples max(1, round(level/100 * len)) positions without
// replacement, ascending. level=100 keeps everything; len=0 yields nothing.
std::vector<int> sample_kept_indices(int len, int level, std::mt19937& rng,
                                     RoundRule rule = RoundRule::Round);

struct ObservationSequence {
  ObsKind kind;
  int level;
  std::vector<int> kept_indices;          // positions into the action list
  std::vector<int> action_ids;            // ActionObs payload
  std::vector<StateCode> state_codes;     // StateObs payload
};

// One dataset line: a trace at one observability level.
struct TraceRecord {
  std::string domain;
  int problem_id = 0;
  std::string split;  // train | validation | test | unknown_goal_test
  StateCode goal_code = 0;
  std::vector<StateCode> candidates;  // empty for plain training traces
  std::vector<StateCode> trace_states;
  std::vector<std::string> trace_actions;
  int level = 100;
  std::vector<int> kept_indices;

  std::vector<StateCode> observed_states() const {
    std::vector<StateCode> out;
    for (int i : kept_indices) out.push_back(trace_states[i + 1]);
    return out;
  }
  std::vector<std::string> observed_actions() const {
    std::vector<std::string> out;
    for (int i : kept_indices) out.push_back(trace_actions[i]);
    return out;
  }
};

struct Dataset {
  std::vector<TraceRecord> records;
  std::string manifest_json;
};

struct DatasetConfig {
  DomainKind kind = DomainKind::Hanoi34;
  int n_problems = 6;       // benchmark problems (test split)
  int n_candidates = 4;     // goals per benchmark problem, G* included once
  int n_unknown = 6;        // unknown-goal problems; 0 disables the split
  int n_train_traces = 500;
  bool all_goals = false;   // hanoi only: cover all 64 goals in training
  std::vector<int> levels = {10, 30, 50, 70, 100};
  double validation_fraction = 0.1;
  unsigned seed = 7;
  RoundRule round_rule = RoundRule::Round;
  int min_walk = 3;   // goal sampling: random-walk distance bounds
  int max_walk = 10;
  long node_limit = 5'000'000;
};

// Generates traces, benchmark problems and the unknown-goal split, and
// checks split hygiene. Deterministic per (config, seed).
Dataset build_dataset(const DatasetConfig& cfg);

// Throws when split invariants are violated (shared goals, duplicated
// traces, malformed subsequences).
void check_dataset(const Dataset& ds);

void save_dataset(const Dataset& ds, const std::string& dir);
Dataset load_dataset(const std::string& dir);

}  // namespace grlab
