#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "grlab/codec.hpp"
#include "grlab/domains.hpp"
#include "grlab/ground.hpp"
#include "grlab/landmarks.hpp"
#include "grlab/pddl.hpp"
#include "grlab/planner.hpp"

using namespace grlab;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

GroundTask chain_task() {
  DomainModel dom = parse_domain(read_file(FIXTURE_DIR "/chain.pddl"));
  ProblemSpec prob =
      parse_problem(read_file(FIXTURE_DIR "/chain_example.pddl"), dom);
  return ground(dom, prob);
}

GroundTask ground_board_task(DomainKind kind, const Board& init,
                             const std::vector<Board>& cands) {
  DomainModel dom = parse_domain(domain_pddl(kind));
  ProblemSpec prob = parse_problem(problem_pddl("t", init, cands, 0), dom);
  return ground(dom, prob);
}

}  // namespace

TEST_CASE("chain landmarks are exactly a, b, c") {
  GroundTask task = chain_task();
  LandmarkSet lms = extract_landmarks(task, task.goal);
  REQUIRE_FALSE(lms.unsolvable);
  std::vector<int> expect = {task.fact_id("(a)"), task.fact_id("(b)"),
                             task.fact_id("(c)")};
  std::sort(expect.begin(), expect.end());
  CHECK(lms.facts == expect);
}

TEST_CASE("unreachable goals are flagged unsolvable") {
  DomainModel dom = parse_domain(read_file(FIXTURE_DIR "/chain.pddl"));
  ProblemSpec prob = parse_problem(
      "(define (problem p) (:domain chain) (:objects)"
      " (:init (b)) (:goal (and (a))))",
      dom);
  GroundTask task = ground(dom, prob);
  CHECK(extract_landmarks(task, task.goal).unsolvable);
}

TEST_CASE("landmarks pass the achiever-removal oracle") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    Board init = random_board(DomainKind::Hanoi34, rng);
    Board goal = random_walk(init, 6, rng);
    while (goal == init) goal = random_walk(init, 6, rng);
    GroundTask task = ground_board_task(DomainKind::Hanoi34, init, {goal});
    LandmarkSet lms = extract_landmarks(task, task.goal);
    REQUIRE_FALSE(lms.unsolvable);
    for (int f : lms.facts) {
      if (task.init.test(f)) continue;
      GroundTask cut = task;
      cut.actions.clear();
      for (const GroundAction& a : task.actions) {
        if (a.add.test(f)) continue;
        GroundAction copy = a;
        copy.id = static_cast<int>(cut.actions.size());
        cut.actions.push_back(std::move(copy));
      }
      SearchConfig bfs;
      bfs.mode = SearchMode::OptimalBfs;
      CHECK(solve(cut, bfs).status == SolveStatus::Unsolvable);
    }
  }
}

TEST_CASE("achieved landmarks grow monotonically with observations") {
  std::mt19937 rng(42);
  Board init = random_board(DomainKind::Hanoi34, rng);
  Board goal = random_walk(init, 7, rng);
  while (goal == init) goal = random_walk(init, 7, rng);
  GroundTask task = ground_board_task(DomainKind::Hanoi34, init, {goal});
  SolveResult r = solve(task, {});
  REQUIRE(r.status == SolveStatus::Solved);

  LandmarkSet lms = extract_landmarks(task, task.goal);
  std::size_t prev = 0;
  for (std::size_t k = 0; k <= r.plan.action_ids.size(); ++k) {
    std::vector<int> obs(r.plan.action_ids.begin(),
                         r.plan.action_ids.begin() + k);
    std::size_t now = achieved_landmarks(lms, task, obs).size();
    CHECK(now >= prev);
    prev = now;
  }
  // The full plan achieves every landmark.
  CHECK(prev == lms.facts.size());
}

TEST_CASE("uniqueness weights shared landmarks at one half") {
  GroundTask task = chain_task();  // candidates: {(c)}, {(d)}
  REQUIRE(task.candidates.size() == 2);

  RecognitionProblem rp;
  rp.task = &task;
  rp.candidates = task.candidates;
  // Landmarks: {a,b,c} and {a,b,d}; a and b are shared, c and d unique.
  // After observing (step-b): achieved {a,b} of each set.
  int step_b = -1;
  for (const GroundAction& a : task.actions) {
    if (a.name == "(step-b)") step_b = a.id;
  }
  REQUIRE(step_b >= 0);
  rp.observed_actions = {step_b};

  std::vector<double> gc = goal_completion_scores(rp);
  CHECK(gc[0] == doctest::Approx(2.0 / 3.0));
  CHECK(gc[1] == doctest::Approx(2.0 / 3.0));

  std::vector<double> uq = uniqueness_scores(rp);
  // got = 1/2 + 1/2 = 1; total = 1/2 + 1/2 + 1 = 2.
  CHECK(uq[0] == doctest::Approx(0.5));
  CHECK(uq[1] == doctest::Approx(0.5));
}

TEST_CASE("recognition scores separate goals once a unique step is seen") {
  GroundTask task = chain_task();
  RecognitionProblem rp;
  rp.task = &task;
  rp.candidates = task.candidates;
  int step_c = -1;
  for (const GroundAction& a : task.actions) {
    if (a.name == "(step-c)") step_c = a.id;
  }
  REQUIRE(step_c >= 0);
  rp.observed_actions = {step_c};

  RecognitionResult res = recognize_pom(rp, PomHeuristic::GoalCompletion, 0.0);
  CHECK(res.scores[0] == doctest::Approx(1.0));
  CHECK(res.scores[1] == doctest::Approx(2.0 / 3.0));
  CHECK(res.returned == std::vector<int>{0});
  CHECK(res.spread() == 1);
}

TEST_CASE("theta widens the returned set monotonically") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 4; ++trial) {
    Board init = random_board(DomainKind::Hanoi34, rng);
    std::vector<Board> cands;
    while (cands.size() < 4) {
      Board g = random_walk(init, 6, rng);
      if (g == init) continue;
      bool dup = false;
      for (const Board& c : cands) dup = dup || c == g;
      if (!dup) cands.push_back(g);
    }
    GroundTask task = ground_board_task(DomainKind::Hanoi34, init, cands);
    SolveResult r = solve_to(task, task.candidates[0], {});
    REQUIRE(r.status == SolveStatus::Solved);
    RecognitionProblem rp;
    rp.task = &task;
    rp.candidates = task.candidates;
    rp.observed_actions.assign(r.plan.action_ids.begin(),
                               r.plan.action_ids.begin() +
                                   (r.plan.action_ids.size() + 1) / 2);

    for (PomHeuristic h :
         {PomHeuristic::GoalCompletion, PomHeuristic::Uniqueness}) {
      std::vector<int> prev;
      for (double theta : {0.0, 10.0, 20.0, 100.0}) {
        RecognitionResult res = recognize_pom(rp, h, theta);
        CHECK(res.spread() >= 1);
        for (int i : prev) {
          CHECK(std::count(res.returned.begin(), res.returned.end(), i) == 1);
        }
        prev = res.returned;
      }
      // theta = 100 returns every solvable candidate.
      CHECK(prev.size() == rp.candidates.size());
    }
  }
}

TEST_CASE("all-unsolvable candidate sets return everything") {
  DomainModel dom = parse_domain(read_file(FIXTURE_DIR "/chain.pddl"));
  ProblemSpec prob = parse_problem(
      "(define (problem p) (:domain chain) (:objects)"
      " (:init (c)) (:goal (and (a)))"
      " (:candidates ((a)) ((b))))",
      dom);
  GroundTask task = ground(dom, prob);
  RecognitionProblem rp;
  rp.task = &task;
  rp.candidates = task.candidates;
  RecognitionResult res = recognize_pom(rp, PomHeuristic::GoalCompletion, 0.0);
  CHECK(res.all_unsolvable);
  CHECK(res.returned.size() == 2);
}
