#include "grlab/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "grlab/ground.hpp"
#include "grlab/landmarks.hpp"
#include "grlab/pddl.hpp"
#include "grlab/planner.hpp"
#include "grlab/rg.hpp"
#include "json.hpp"

namespace grlab {
namespace {

std::string fmt(const char* spec, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

struct RecognizerSpec {
  std::string name;
  double theta = 0.0;
};

std::vector<RecognizerSpec> expand_recognizers(const BenchConfig& cfg) {
  if (cfg.recognizers.empty()) throw Error("no recognizers selected");
  std::vector<RecognizerSpec> specs;
  for (const std::string& r : cfg.recognizers) {
    if (r == "pom_gc" || r == "pom_uniq") {
      if (cfg.thetas.empty()) throw Error("pom recognizers need a theta list");
      for (double th : cfg.thetas) specs.push_back({r, th});
    } else if (r == "rg" || r == "lstm") {
      specs.push_back({r, 0.0});
    } else {
      throw Error("unknown recognizer: " + r);
    }
  }
  return specs;
}

}  // namespace

std::vector<StateCode> lstm_input_codes(const TraceRecord& r) {
  std::vector<StateCode> codes = {r.trace_states.at(0)};
  for (StateCode c : r.observed_states()) codes.push_back(c);
  return codes;
}

std::vector<BenchProblem> collect_problems(const Dataset& ds,
                                           const std::string& split) {
  std::map<std::pair<std::string, int>, std::vector<const TraceRecord*>>
      groups;
  for (const TraceRecord& r : ds.records) {
    if (r.split == split) groups[{r.domain, r.problem_id}].push_back(&r);
  }
  std::vector<BenchProblem> problems;
  int name_counter = 0;
  for (auto& [key, recs] : groups) {
    const TraceRecord& first = *recs.front();
    BenchProblem bp;
    bp.kind = domain_from_name(first.domain);
    Board init = decode_board(bp.kind, first.trace_states.at(0));
    std::vector<Board> cands;
    for (std::size_t i = 0; i < first.candidates.size(); ++i) {
      cands.push_back(decode_board(bp.kind, first.candidates[i]));
      if (first.candidates[i] == first.goal_code) {
        bp.goal_index = static_cast<int>(i);
      }
    }
    if (bp.goal_index < 0) {
      throw Error("benchmark record without its goal in the candidate set");
    }
    DomainModel dom = parse_domain(domain_pddl(bp.kind));
    ProblemSpec prob = parse_problem(
        problem_pddl("bench" + std::to_string(name_counter++), init, cands,
                     bp.goal_index),
        dom);
    bp.task = ground(dom, prob);
    bp.records = std::move(recs);
    problems.push_back(std::move(bp));
  }
  return problems;
}

std::vector<int> observed_action_ids(const GroundTask& task,
                                     const TraceRecord& r) {
  std::unordered_map<std::string, int> by_name;
  for (const GroundAction& a : task.actions) by_name[a.name] = a.id;
  std::vector<int> ids;
  for (const std::string& name : r.observed_actions()) {
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw Error("observed action not in the ground task: " + name);
    }
    ids.push_back(it->second);
  }
  return ids;
}

BenchReport run_bench(const Dataset& ds, const Checkpoint* checkpoint,
                      const BenchConfig& cfg) {
  std::vector<RecognizerSpec> specs = expand_recognizers(cfg);
  bool wants_lstm = std::any_of(specs.begin(), specs.end(), [](const auto& s) {
    return s.name == "lstm";
  });
  if (wants_lstm && !checkpoint) {
    throw Error("lstm recognizer selected but no checkpoint given");
  }

  std::vector<BenchProblem> problems = collect_problems(ds, "test");
  if (problems.empty()) throw Error("dataset has no test problems");

  BenchReport report;
  struct Agg {
    double n_goals = 0, obs = 0, set = 0, top1 = 0, spread = 0, time = 0;
    int n = 0;
  };
  std::map<std::tuple<std::string, int, std::string, double>, Agg> aggs;

  for (BenchProblem& bp : problems) {
    CostCache rg_cache;  // base costs shared across observability levels
    for (const TraceRecord* rec : bp.records) {
      RecognitionProblem rp;
      rp.task = &bp.task;
      rp.candidates = bp.task.candidates;
      rp.observed_actions = observed_action_ids(bp.task, *rec);

      for (const RecognizerSpec& spec : specs) {
        RecognitionResult res;
        if (spec.name == "pom_gc") {
          res = recognize_pom(rp, PomHeuristic::GoalCompletion, spec.theta);
        } else if (spec.name == "pom_uniq") {
          res = recognize_pom(rp, PomHeuristic::Uniqueness, spec.theta);
        } else if (spec.name == "rg") {
          res = recognize_rg(rp, &rg_cache, cfg.node_limit);
        } else {
          auto t0 = std::chrono::steady_clock::now();
          Prediction pred =
              predict_goal(checkpoint->params, checkpoint->vocab,
                           lstm_input_codes(*rec), rec->candidates);
          res.returned = {pred.candidate_index};
          res.elapsed_s = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        }

        bool set_hit = std::count(res.returned.begin(), res.returned.end(),
                                  bp.goal_index) > 0;
        bool top1_hit = set_hit && res.returned.size() == 1;

        BenchDetail d;
        d.domain = rec->domain;
        d.problem_id = rec->problem_id;
        d.level = rec->level;
        d.recognizer = spec.name;
        d.theta = spec.theta;
        d.n_obs = static_cast<int>(rec->kept_indices.size());
        d.set_hit = set_hit;
        d.top1_hit = top1_hit;
        d.spread = res.spread();
        d.time_s = res.elapsed_s;
        report.details.push_back(d);

        Agg& a = aggs[{rec->domain, rec->level, spec.name, spec.theta}];
        a.n_goals += rec->candidates.size();
        a.obs += d.n_obs;
        a.set += set_hit ? 1 : 0;
        a.top1 += top1_hit ? 1 : 0;
        a.spread += d.spread;
        a.time += d.time_s;
        ++a.n;
      }
    }
  }

  for (const auto& [key, a] : aggs) {
    BenchRow row;
    row.domain = std::get<0>(key);
    row.level = std::get<1>(key);
    row.recognizer = std::get<2>(key);
    row.theta = std::get<3>(key);
    row.n_goals = a.n_goals / a.n;
    row.mean_obs = a.obs / a.n;
    row.acc_set = 100.0 * a.set / a.n;
    row.acc_top1 = 100.0 * a.top1 / a.n;
    row.mean_spread = a.spread / a.n;
    row.mean_time_s = a.time / a.n;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string bench_csv(const std::vector<BenchRow>& rows, bool with_timing) {
  std::string out =
      "domain,n_goals,level,mean_obs,recognizer,theta,acc_set,acc_top1,"
      "mean_spread";
  if (with_timing) out += ",mean_time_s";
  out += "\n";
  for (const BenchRow& r : rows) {
    out += r.domain + "," + fmt("%.1f", r.n_goals) + "," +
           std::to_string(r.level) + "," + fmt("%.2f", r.mean_obs) + "," +
           r.recognizer + "," + fmt("%.0f", r.theta) + "," +
           fmt("%.1f", r.acc_set) + "," + fmt("%.1f", r.acc_top1) + "," +
           fmt("%.2f", r.mean_spread);
    if (with_timing) out += "," + fmt("%.6f", r.mean_time_s);
    out += "\n";
  }
  return out;
}

std::string details_csv(const std::vector<BenchDetail>& details,
                        bool with_timing) {
  std::string out =
      "domain,problem_id,level,recognizer,theta,n_obs,set_hit,top1_hit,"
      "spread";
  if (with_timing) out += ",time_s";
  out += "\n";
  for (const BenchDetail& d : details) {
    out += d.domain + "," + std::to_string(d.problem_id) + "," +
           std::to_string(d.level) + "," + d.recognizer + "," +
           fmt("%.0f", d.theta) + "," + std::to_string(d.n_obs) + "," +
           (d.set_hit ? "1" : "0") + "," + (d.top1_hit ? "1" : "0") + "," +
           std::to_string(d.spread);
    if (with_timing) out += "," + fmt("%.6f", d.time_s);
    out += "\n";
  }
  return out;
}

std::string bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof(line), "%-13s %4s %5s %6s %-9s %5s %8s %8s %7s %10s\n",
                "domain", "|G|", "level", "|O|", "recognizer", "theta",
                "acc_set", "acc_top1", "spread", "time_s");
  os << line;
  for (const BenchRow& r : rows) {
    std::snprintf(line, sizeof(line),
                  "%-13s %4.1f %5d %6.2f %-9s %5.0f %7.1f%% %7.1f%% %7.2f %10.6f\n",
                  r.domain.c_str(), r.n_goals, r.level, r.mean_obs,
                  r.recognizer.c_str(), r.theta, r.acc_set, r.acc_top1,
                  r.mean_spread, r.mean_time_s);
    os << line;
  }
  return os.str();
}

std::string bench_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const BenchRow& r : report.rows) {
    rows.push_back({{"domain", r.domain},
                    {"n_goals", r.n_goals},
                    {"level", r.level},
                    {"mean_obs", r.mean_obs},
                    {"recognizer", r.recognizer},
                    {"theta", r.theta},
                    {"acc_set", r.acc_set},
                    {"acc_top1", r.acc_top1},
                    {"mean_spread", r.mean_spread},
                    {"mean_time_s", r.mean_time_s}});
  }
  return nlohmann::json{{"rows", rows}}.dump(2) + "\n";
}

std::vector<UnknownRow> run_unknown(const Dataset& ds, const Checkpoint& ck) {
  struct Agg {
    double bits = 0;
    int exact = 0;
    int n = 0;
  };
  std::map<std::string, Agg> per_domain;
  for (const TraceRecord& r : ds.records) {
    if (r.split != "unknown_goal_test" || r.level != 100) continue;
    std::vector<int> ids;
    for (StateCode c : lstm_input_codes(r)) ids.push_back(ck.vocab.id(c));
    ForwardCache cache = forward(ck.params, ids);
    int match = 0;
    for (int b = 0; b < kGoalBits; ++b) {
      int bit = cache.probs[b] >= 0.5 ? 1 : 0;
      if (bit == code_bit(r.goal_code, b)) ++match;
    }
    Agg& a = per_domain[r.domain];
    a.bits += match / 36.0;
    if (match == kGoalBits) ++a.exact;
    ++a.n;
  }
  if (per_domain.empty()) {
    throw Error("dataset has no unknown_goal_test records");
  }
  std::vector<UnknownRow> rows;
  for (const auto& [domain, a] : per_domain) {
    UnknownRow row;
    row.domain = domain;
    row.n_problems = a.n;
    row.reconstruction_acc = 100.0 * a.bits / a.n;
    row.correct_rate = 100.0 * a.exact / a.n;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string unknown_csv(const std::vector<UnknownRow>& rows) {
  std::string out = "domain,n_problems,reconstruction_acc,correct_rate\n";
  for (const UnknownRow& r : rows) {
    out += r.domain + "," + std::to_string(r.n_problems) + "," +
           fmt("%.1f", r.reconstruction_acc) + "," +
           fmt("%.1f", r.correct_rate) + "\n";
  }
  return out;
}

std::string unknown_table(const std::vector<UnknownRow>& rows) {
  std::ostringstream os;
  char line[120];
  std::snprintf(line, sizeof(line), "%-13s %10s %16s %14s\n", "domain",
                "problems", "reconstruction", "correct");
  os << line;
  for (const UnknownRow& r : rows) {
    std::snprintf(line, sizeof(line), "%-13s %10d %15.1f%% %13.1f%%\n",
                  r.domain.c_str(), r.n_problems, r.reconstruction_acc,
                  r.correct_rate);
    os << line;
  }
  return os.str();
}

namespace {

GroundTask make_board_task(DomainKind kind, const Board& init,
                           const Board& goal, const std::string& name) {
  DomainModel dom = parse_domain(domain_pddl(kind));
  ProblemSpec prob =
      parse_problem(problem_pddl(name, init, {goal}, 0), dom);
  return ground(dom, prob);
}

struct SuiteTask {
  std::string name;
  GroundTask task;
};

// Small deterministic problems solvable by plain BFS in well under a second.
std::vector<SuiteTask> small_task_suite() {
  std::vector<SuiteTask> suite;
  std::mt19937 rng(1234);
  Board far_goal = canonical_init(DomainKind::Hanoi34);
  for (int d = 0; d < 3; ++d) far_goal.cells[d] = 3;
  suite.push_back({"hanoi-far-peg",
                   make_board_task(DomainKind::Hanoi34,
                                   canonical_init(DomainKind::Hanoi34),
                                   far_goal, "hanoi-far-peg")});
  for (int k = 0; k < 6; ++k) {
    Board init = random_board(DomainKind::Hanoi34, rng);
    Board goal = random_board(DomainKind::Hanoi34, rng);
    while (goal == init) goal = random_board(DomainKind::Hanoi34, rng);
    suite.push_back({"hanoi-rand" + std::to_string(k),
                     make_board_task(DomainKind::Hanoi34, init, goal,
                                     "hanoi-rand" + std::to_string(k))});
  }
  for (int k = 0; k < 4; ++k) {
    Board init = canonical_init(DomainKind::EightPuzzle);
    init = random_walk(init, 20, rng);
    Board goal = random_walk(init, 6, rng);
    while (goal == init) goal = random_walk(init, 6, rng);
    suite.push_back({"puzzle-rand" + std::to_string(k),
                     make_board_task(DomainKind::EightPuzzle, init, goal,
                                     "puzzle-rand" + std::to_string(k))});
  }
  for (int k = 0; k < 4; ++k) {
    Board init = random_board(DomainKind::LightsOut4, rng);
    Board goal = random_walk(init, 4, rng);
    while (goal == init) goal = random_walk(init, 4, rng);
    suite.push_back({"lights-rand" + std::to_string(k),
                     make_board_task(DomainKind::LightsOut4, init, goal,
                                     "lights-rand" + std::to_string(k))});
  }
  return suite;
}

OracleCheck planner_oracle() {
  OracleCheck check{"planner-bfs-vs-astar", true, ""};
  for (const SuiteTask& st : small_task_suite()) {
    SearchConfig astar;
    SearchConfig bfs;
    bfs.mode = SearchMode::OptimalBfs;
    SolveResult ra = solve(st.task, astar);
    SolveResult rb = solve(st.task, bfs);
    if (ra.status != rb.status) {
      check.ok = false;
      check.detail += st.name + ": status mismatch; ";
      continue;
    }
    if (ra.status != SolveStatus::Solved) continue;
    if (ra.plan.cost() != rb.plan.cost()) {
      check.ok = false;
      check.detail += st.name + ": cost " + std::to_string(ra.plan.cost()) +
                      " vs " + std::to_string(rb.plan.cost()) + "; ";
    }
    if (!validate(st.task, ra.plan).ok) {
      check.ok = false;
      check.detail += st.name + ": invalid plan; ";
    }
    if (st.name == "hanoi-far-peg" && ra.plan.cost() != 5) {
      check.ok = false;
      check.detail +=
          "far-peg cost " + std::to_string(ra.plan.cost()) + " != 5; ";
    }
  }
  if (check.ok) check.detail = "costs agree on the full small-task suite";
  return check;
}

// Removing every achiever of a landmark must make the goal unreachable.
OracleCheck landmark_oracle() {
  OracleCheck check{"landmark-achiever-removal", true, ""};
  int audited = 0;
  for (const SuiteTask& st : small_task_suite()) {
    LandmarkSet lms = extract_landmarks(st.task, st.task.goal);
    if (lms.unsolvable) continue;
    for (int f : lms.facts) {
      if (st.task.init.test(f)) continue;  // trivially holds
      GroundTask cut = st.task;
      cut.actions.clear();
      for (const GroundAction& a : st.task.actions) {
        if (a.add.test(f)) continue;
        GroundAction copy = a;
        copy.id = static_cast<int>(cut.actions.size());
        cut.actions.push_back(std::move(copy));
      }
      SearchConfig bfs;
      bfs.mode = SearchMode::OptimalBfs;
      ++audited;
      if (solve(cut, bfs).status != SolveStatus::Unsolvable) {
        check.ok = false;
        check.detail += st.name + ": " + st.task.fact_names[f] +
                        " is not a landmark; ";
      }
    }
  }
  if (check.ok) {
    check.detail =
        "all " + std::to_string(audited) + " extracted landmarks confirmed";
  }
  return check;
}

OracleCheck gradient_oracle() {
  OracleCheck check{"gradient-finite-difference", true, ""};
  double worst = 0.0;
  for (unsigned seed = 1; seed <= 20; ++seed) {
    worst = std::max(worst,
                     finite_difference_max_error(7, 4, 5, 3, seed));
  }
  check.ok = worst < 1e-4;
  check.detail = "max relative error " + fmt("%.3e", worst) +
                 (check.ok ? " < 1e-4" : " >= 1e-4");
  return check;
}

OracleCheck codec_oracle() {
  OracleCheck check{"codec-round-trip", true, ""};
  for (const Board& b : enumerate_hanoi_boards()) {
    if (!(decode_board(DomainKind::Hanoi34, encode_board(b)) == b)) {
      check.ok = false;
      check.detail += "hanoi round-trip failure; ";
    }
  }
  std::mt19937 rng(99);
  for (int k = 0; k < 10'000; ++k) {
    Board bp = random_board(DomainKind::EightPuzzle, rng);
    Board bl = random_board(DomainKind::LightsOut4, rng);
    if (!(decode_board(DomainKind::EightPuzzle, encode_board(bp)) == bp) ||
        !(decode_board(DomainKind::LightsOut4, encode_board(bl)) == bl)) {
      check.ok = false;
      check.detail += "random round-trip failure; ";
      break;
    }
  }
  for (int k = 0; k < 100'000; ++k) {
    Board a = random_board(DomainKind::EightPuzzle, rng);
    Board b = random_board(DomainKind::EightPuzzle, rng);
    if (!(a == b) && encode_board(a) == encode_board(b)) {
      check.ok = false;
      check.detail += "collision between distinct boards; ";
      break;
    }
  }
  if (check.ok) check.detail = "round-trips exact, no collisions";
  return check;
}

}  // namespace

OracleReport run_oracles(const std::string& suite) {
  OracleReport report;
  bool all = suite == "all";
  if (all || suite == "planner") report.checks.push_back(planner_oracle());
  if (all || suite == "landmarks") report.checks.push_back(landmark_oracle());
  if (all || suite == "gradient") report.checks.push_back(gradient_oracle());
  if (all || suite == "codec") report.checks.push_back(codec_oracle());
  if (report.checks.empty()) throw Error("unknown oracle suite: " + suite);
  return report;
}

std::string oracle_text(const OracleReport& report) {
  std::string out;
  for (const OracleCheck& c : report.checks) {
    out += (c.ok ? "PASS " : "FAIL ") + c.name + ": " + c.detail + "\n";
  }
  out += report.ok() ? "all oracle checks passed\n"
                     : "oracle checks FAILED\n";
  return out;
}

TrainedModel train_on_dataset(const Dataset& ds, int embed_dim, int hidden_dim,
                              const TrainConfig& cfg) {
  TrainedModel model;
  std::vector<Sample> train_s, val_s;
  for (const TraceRecord& r : ds.records) {
    if (r.split != "train" && r.split != "validation") continue;
    for (StateCode c : r.trace_states) model.vocab.add(c);
  }
  model.vocab.freeze();
  for (const TraceRecord& r : ds.records) {
    if (r.split != "train" && r.split != "validation") continue;
    Sample s;
    for (StateCode c : lstm_input_codes(r)) s.ids.push_back(model.vocab.id(c));
    s.target = target_from_code(r.goal_code);
    (r.split == "train" ? train_s : val_s).push_back(std::move(s));
  }
  if (train_s.empty()) throw Error("dataset has no training records");

  std::set<StateCode> goals;
  for (const TraceRecord& r : ds.records) {
    if (r.split == "train") goals.insert(r.goal_code);
  }
  if (goals.size() < 2) throw Error("training split needs at least two goals");

  model.params =
      LstmParams::init(model.vocab.size(), embed_dim, hidden_dim, cfg.seed);
  model.report = train(model.params, train_s, val_s, cfg);
  return model;
}

}  // namespace grlab
