#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "grlab/codec.hpp"
#include "grlab/domains.hpp"
#include "grlab/ground.hpp"
#include "grlab/pddl.hpp"
#include "grlab/trace.hpp"

using namespace grlab;

namespace {

GroundTask ground_board_task(DomainKind kind, const Board& init,
                             const Board& goal) {
  DomainModel dom = parse_domain(domain_pddl(kind));
  ProblemSpec prob = parse_problem(problem_pddl("t", init, {goal}, 0), dom);
  return ground(dom, prob);
}

DatasetConfig small_config() {
  DatasetConfig cfg;
  cfg.kind = DomainKind::Hanoi34;
  cfg.n_problems = 3;
  cfg.n_candidates = 3;
  cfg.n_unknown = 2;
  cfg.n_train_traces = 20;
  cfg.seed = 17;
  return cfg;
}

}  // namespace

TEST_CASE("generated traces replay from init to the goal") {
  std::mt19937 rng(71);
  Board init = random_board(DomainKind::Hanoi34, rng);
  Board goal = random_walk(init, 6, rng);
  while (goal == init) goal = random_walk(init, 6, rng);
  GroundTask task = ground_board_task(DomainKind::Hanoi34, init, goal);

  PlanTrace trace = generate_trace(task, task.goal, {});
  CHECK(trace.states.size() == trace.plan.action_ids.size() + 1);
  CHECK(trace.states.front() == task.init);
  CHECK(trace.states.back().contains(task.goal));
}

TEST_CASE("unreachable goals raise instead of looping") {
  Board init = canonical_init(DomainKind::EightPuzzle);
  Board goal = init;
  std::swap(goal.cells[7], goal.cells[8]);
  GroundTask task = ground_board_task(DomainKind::EightPuzzle, init, goal);
  CHECK_THROWS_AS(generate_trace(task, task.goal, {}), Error);
}

TEST_CASE("sample_kept_indices honors level and rounding") {
  std::mt19937 rng(72);
  CHECK(sample_kept_indices(0, 50, rng).empty());
  CHECK(sample_kept_indices(10, 100, rng) ==
        std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  // At least one observation survives any level.
  for (int trial = 0; trial < 20; ++trial) {
    CHECK(sample_kept_indices(3, 10, rng).size() == 1);
  }
  // round(0.5) vs ceil(0.5) on a 5-step trace at 10%.
  CHECK(sample_kept_indices(5, 10, rng, RoundRule::Round).size() == 1);
  CHECK(sample_kept_indices(5, 30, rng, RoundRule::Round).size() == 2);
  CHECK(sample_kept_indices(5, 50, rng, RoundRule::Ceil).size() == 3);

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> kept = sample_kept_indices(12, 50, rng);
    CHECK(kept.size() == 6);
    for (std::size_t i = 1; i < kept.size(); ++i) {
      CHECK(kept[i] > kept[i - 1]);
    }
    CHECK(kept.back() < 12);
  }
}

TEST_CASE("observed views are consistent subsequences") {
  TraceRecord r;
  r.trace_states = {1, 2, 3, 4};
  r.trace_actions = {"x", "y", "z"};
  r.kept_indices = {0, 2};
  CHECK(r.observed_actions() == std::vector<std::string>{"x", "z"});
  CHECK(r.observed_states() == std::vector<StateCode>{2, 4});
}

TEST_CASE("build_dataset produces consistent splits") {
  Dataset ds = build_dataset(small_config());
  check_dataset(ds);

  std::set<std::string> splits;
  std::set<StateCode> train_goals, unknown_goals;
  for (const TraceRecord& r : ds.records) {
    splits.insert(r.split);
    CHECK(r.domain == "hanoi34");
    CHECK(r.trace_states.size() == r.trace_actions.size() + 1);
    if (r.split == "train" || r.split == "validation") {
      CHECK(r.candidates.empty());
      train_goals.insert(r.goal_code);
    }
    if (r.split == "unknown_goal_test") unknown_goals.insert(r.goal_code);
    if (r.split == "test" || r.split == "unknown_goal_test") {
      CHECK(r.candidates.size() == 3);
      CHECK(std::count(r.candidates.begin(), r.candidates.end(),
                       r.goal_code) == 1);
    }
    // Traces end at the stated goal.
    CHECK(r.trace_states.back() == r.goal_code);
  }
  CHECK(splits == std::set<std::string>{"train", "validation", "test",
                                        "unknown_goal_test"});
  for (StateCode g : unknown_goals) CHECK(train_goals.count(g) == 0);
}

TEST_CASE("check_dataset rejects corrupted records") {
  Dataset ds = build_dataset(small_config());

  Dataset bad = ds;
  for (TraceRecord& r : bad.records) {
    if (r.split == "train") {
      r.trace_states.pop_back();
      break;
    }
  }
  CHECK_THROWS_AS(check_dataset(bad), Error);

  bad = ds;
  for (TraceRecord& r : bad.records) {
    if (r.split == "unknown_goal_test") {
      // Smuggle a trained goal into the unknown split.
      for (const TraceRecord& t : ds.records) {
        if (t.split == "train") {
          r.goal_code = t.goal_code;
          r.candidates = {r.goal_code};
          break;
        }
      }
      break;
    }
  }
  CHECK_THROWS_AS(check_dataset(bad), Error);

  bad = ds;
  for (TraceRecord& r : bad.records) {
    if (!r.kept_indices.empty()) {
      r.kept_indices.push_back(r.kept_indices.back());  // not increasing
      break;
    }
  }
  CHECK_THROWS_AS(check_dataset(bad), Error);
}

TEST_CASE("datasets serialize deterministically and round-trip") {
  Dataset a = build_dataset(small_config());
  Dataset b = build_dataset(small_config());
  std::string dir_a = std::filesystem::temp_directory_path() / "grlab_ds_a";
  std::string dir_b = std::filesystem::temp_directory_path() / "grlab_ds_b";
  save_dataset(a, dir_a);
  save_dataset(b, dir_b);

  auto slurp = [](const std::string& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
  };
  CHECK(slurp(dir_a + "/dataset.jsonl") == slurp(dir_b + "/dataset.jsonl"));
  CHECK(slurp(dir_a + "/manifest.json") == slurp(dir_b + "/manifest.json"));

  Dataset loaded = load_dataset(dir_a);
  REQUIRE(loaded.records.size() == a.records.size());
  check_dataset(loaded);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(loaded.records[i].goal_code == a.records[i].goal_code);
    CHECK(loaded.records[i].trace_states == a.records[i].trace_states);
    CHECK(loaded.records[i].kept_indices == a.records[i].kept_indices);
    CHECK(loaded.records[i].split == a.records[i].split);
  }
}

TEST_CASE("corrupted dataset lines are reported with their line number") {
  Dataset ds = build_dataset(small_config());
  std::string dir = std::filesystem::temp_directory_path() / "grlab_ds_bad";
  save_dataset(ds, dir);
  {
    std::ofstream os(dir + "/dataset.jsonl", std::ios::app);
    os << "{not json\n";
  }
  std::string expect =
      "line " + std::to_string(ds.records.size() + 1);
  CHECK_THROWS_WITH_AS(load_dataset(dir), doctest::Contains(expect.c_str()),
                       Error);
}

TEST_CASE("different seeds give different corpora") {
  DatasetConfig cfg = small_config();
  Dataset a = build_dataset(cfg);
  cfg.seed = 18;
  Dataset b = build_dataset(cfg);
  bool differs = a.records.size() != b.records.size();
  for (std::size_t i = 0; !differs && i < a.records.size(); ++i) {
    differs = a.records[i].trace_states != b.records[i].trace_states;
  }
  CHECK(differs);
}
