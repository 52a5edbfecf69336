#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "grlab/codec.hpp"
#include "grlab/domains.hpp"
#include "grlab/ground.hpp"
#include "grlab/pddl.hpp"
#include "grlab/planner.hpp"
#include "grlab/rg.hpp"

using namespace grlab;

namespace {

GroundTask ground_board_task(DomainKind kind, const Board& init,
                             const std::vector<Board>& cands) {
  DomainModel dom = parse_domain(domain_pddl(kind));
  ProblemSpec prob = parse_problem(problem_pddl("t", init, cands, 0), dom);
  return ground(dom, prob);
}

struct Fixture {
  GroundTask task;
  std::vector<int> plan;  // optimal plan for candidate 0
};

Fixture hanoi_fixture(unsigned seed, int n_cands) {
  std::mt19937 rng(seed);
  Board init = random_board(DomainKind::Hanoi34, rng);
  std::vector<Board> cands;
  while (static_cast<int>(cands.size()) < n_cands) {
    Board g = random_walk(init, 6, rng);
    if (g == init) continue;
    bool dup = false;
    for (const Board& c : cands) dup = dup || c == g;
    if (!dup) cands.push_back(g);
  }
  Fixture fx{ground_board_task(DomainKind::Hanoi34, init, cands), {}};
  SolveResult r = solve_to(fx.task, fx.task.candidates[0], {});
  REQUIRE(r.status == SolveStatus::Solved);
  fx.plan = r.plan.action_ids;
  return fx;
}

}  // namespace

TEST_CASE("compilation layout: markers, copies, initial marker") {
  Fixture fx = hanoi_fixture(51, 2);
  std::vector<int> obs(fx.plan.begin(),
                       fx.plan.begin() + (fx.plan.size() + 1) / 2);
  CompiledTask ct = compile_observations(fx.task, obs);
  CHECK(ct.marker_ids.size() == obs.size() + 1);
  CHECK(ct.task.num_facts() == fx.task.num_facts() +
                                   static_cast<int>(obs.size()) + 1);
  CHECK(ct.task.actions.size() == fx.task.actions.size() + obs.size());
  CHECK(ct.task.init.test(ct.marker_ids.front()));
  CHECK_FALSE(ct.task.init.test(ct.last_marker()));
}

TEST_CASE("plans for the compiled task embed the observations in order") {
  Fixture fx = hanoi_fixture(52, 2);
  std::vector<int> obs(fx.plan.begin(),
                       fx.plan.begin() + (fx.plan.size() + 1) / 2);
  CompiledTask ct = compile_observations(fx.task, obs);

  FactSet goal = fx.task.candidates[0];
  goal.resize_grow(ct.task.num_facts());
  goal.set(ct.last_marker());
  SolveResult r = solve_to(ct.task, goal, {});
  REQUIRE(r.status == SolveStatus::Solved);
  CHECK(validate_to(ct.task, goal, r.plan).ok);

  // The marked copies appear as a subsequence matching the observations.
  std::size_t at = 0;
  for (int aid : r.plan.action_ids) {
    const std::string& name = ct.task.actions[aid].name;
    auto pos = name.find("@o");
    if (pos == std::string::npos) continue;
    REQUIRE(at < obs.size());
    CHECK(name.substr(0, pos) == fx.task.actions[obs[at]].name);
    ++at;
  }
  CHECK(at == obs.size());
}

TEST_CASE("observations along an optimal plan leave delta at zero") {
  Fixture fx = hanoi_fixture(53, 3);
  RecognitionProblem rp;
  rp.task = &fx.task;
  rp.candidates = fx.task.candidates;
  rp.observed_actions = fx.plan;  // the whole optimal plan for candidate 0

  RecognitionResult res = recognize_rg(rp);
  CHECK(res.scores[0] == doctest::Approx(1.0));  // delta == 0
  CHECK(std::count(res.returned.begin(), res.returned.end(), 0) == 1);
}

TEST_CASE("delta is nonnegative and grows with longer observation prefixes") {
  Fixture fx = hanoi_fixture(54, 2);
  CostResult base = optimal_cost(fx.task, fx.task.candidates[1]);
  REQUIRE(base.status == SolveStatus::Solved);

  int prev_cost = base.cost;
  for (std::size_t k = 1; k <= fx.plan.size(); ++k) {
    std::vector<int> obs(fx.plan.begin(), fx.plan.begin() + k);
    CompiledTask ct = compile_observations(fx.task, obs);
    FactSet goal = fx.task.candidates[1];
    goal.resize_grow(ct.task.num_facts());
    goal.set(ct.last_marker());
    CostResult constrained = optimal_cost(ct.task, goal);
    REQUIRE(constrained.status == SolveStatus::Solved);
    CHECK(constrained.cost >= base.cost);   // delta >= 0
    CHECK(constrained.cost >= prev_cost);   // monotone in the prefix
    prev_cost = constrained.cost;
  }
}

TEST_CASE("base costs are memoized across calls") {
  Fixture fx = hanoi_fixture(55, 2);
  CostCache cache;
  CostResult first = cache.get(fx.task, fx.task.candidates[0], 1'000'000);
  REQUIRE(first.status == SolveStatus::Solved);
  // A second lookup with a prohibitive limit must hit the cache.
  CostResult second = cache.get(fx.task, fx.task.candidates[0], 0);
  CHECK(second.status == SolveStatus::Solved);
  CHECK(second.cost == first.cost);
}

TEST_CASE("rg scores are 1/(1+delta) and bounded by one") {
  Fixture fx = hanoi_fixture(56, 4);
  RecognitionProblem rp;
  rp.task = &fx.task;
  rp.candidates = fx.task.candidates;
  rp.observed_actions.assign(fx.plan.begin(),
                             fx.plan.begin() + (fx.plan.size() + 1) / 2);
  RecognitionResult res = recognize_rg(rp);
  REQUIRE(res.scores.size() == 4);
  for (double s : res.scores) {
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
  // Returned candidates all share the top score.
  double best = *std::max_element(res.scores.begin(), res.scores.end());
  for (int i : res.returned) CHECK(res.scores[i] == doctest::Approx(best));
  CHECK(res.spread() >= 1);
}

TEST_CASE("invalid observed action ids are rejected") {
  Fixture fx = hanoi_fixture(57, 2);
  CHECK_THROWS_AS(
      compile_observations(fx.task,
                           {static_cast<int>(fx.task.actions.size())}),
      Error);
}
