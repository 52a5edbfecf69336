#include "grlab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "grlab/ground.hpp"
#include "grlab/pddl.hpp"
#include "json.hpp"

namespace grlab {

PlanTrace generate_trace(const GroundTask& task, const FactSet& goal,
                         const SearchConfig& cfg) {
  SolveResult r = solve_to(task, goal, cfg);
  if (r.status == SolveStatus::LimitExceeded) {
    throw Error("trace generation hit the node limit after " +
                std::to_string(r.expanded) + " expansions");
  }
  if (r.status == SolveStatus::Unsolvable) {
    throw Error("trace goal is unreachable");
  }
  PlanTrace trace;
  trace.goal = goal;
  trace.plan = r.plan;
  trace.states.push_back(task.init);
  for (int aid : r.plan.action_ids) {
    trace.states.push_back(
        apply(task, trace.states.back(), task.actions[aid]));
  }
  return trace;
}

std::vector<int> sample_kept_indices(int len, int level, std::mt19937& rng,
                                     RoundRule rule) {
  if (len == 0) return {};
  double want = level / 100.0 * len;
  long k = rule == RoundRule::Round ? std::lround(want)
                                    : static_cast<long>(std::ceil(want));
  k = std::clamp(k, 1l, static_cast<long>(len));
  std::vector<int> idx(len);
  std::iota(idx.begin(), idx.end(), 0);
  for (long i = 0; i < k; ++i) {
    long j = std::uniform_int_distribution<long>(i, len - 1)(rng);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

namespace {

std::string trace_key(StateCode init, const std::vector<std::string>& actions) {
  std::string key = code_hex(init);
  for (const auto& a : actions) key += "|" + a;
  return key;
}

struct Builder {
  const DatasetConfig& cfg;
  DomainModel dom;
  std::mt19937 rng;
  Dataset out;
  int next_problem_id = 0;
  std::set<StateCode> known_goals;
  std::set<std::string> train_keys;

  explicit Builder(const DatasetConfig& c)
      : cfg(c), dom(parse_domain(domain_pddl(c.kind))), rng(c.seed) {}

  GroundTask make_task(const Board& init, const std::vector<Board>& candidates,
                       int goal_index) {
    ProblemSpec prob = parse_problem(
        problem_pddl("p" + std::to_string(next_problem_id), init, candidates,
                     goal_index),
        dom);
    return ground(dom, prob);
  }

  Board sample_goal_from(const Board& init) {
    for (int tries = 0; tries < 64; ++tries) {
      int steps = std::uniform_int_distribution<int>(cfg.min_walk,
                                                     cfg.max_walk)(rng);
      Board g = random_walk(init, steps, rng);
      if (!(g == init)) return g;
    }
    throw Error("could not sample a goal distinct from init");
  }

  // Emits one record per observability level for a solved trace.
  void emit_records(const std::string& split, int problem_id,
                    const Board& init, const GroundTask& task,
                    const PlanTrace& trace, StateCode goal_code,
                    const std::vector<StateCode>& candidate_codes) {
    TraceRecord base;
    base.domain = domain_name(cfg.kind);
    base.problem_id = problem_id;
    base.split = split;
    base.goal_code = goal_code;
    base.candidates = candidate_codes;
    for (const State& s : trace.states) {
      base.trace_states.push_back(encode(cfg.kind, task, s));
    }
    for (int aid : trace.plan.action_ids) {
      base.trace_actions.push_back(task.actions[aid].name);
    }
    for (int level : cfg.levels) {
      TraceRecord rec = base;
      rec.level = level;
      rec.kept_indices = sample_kept_indices(
          static_cast<int>(trace.plan.action_ids.size()), level, rng,
          cfg.round_rule);
      out.records.push_back(std::move(rec));
    }
  }

  void build_training_corpus() {
    std::vector<std::pair<Board, Board>> pairs;  // (init, goal)
    if (cfg.all_goals) {
      if (cfg.kind != DomainKind::Hanoi34) {
        throw Error("all_goals is only supported for hanoi34");
      }
      std::vector<Board> goals = enumerate_hanoi_boards();
      int per_goal = (cfg.n_train_traces + 63) / 64;
      for (const Board& g : goals) {
        for (int i = 0; i < per_goal; ++i) {
          Board init = random_board(cfg.kind, rng);
          while (init == g) init = random_board(cfg.kind, rng);
          pairs.emplace_back(init, g);
        }
      }
    } else {
      for (int i = 0; i < cfg.n_train_traces; ++i) {
        Board init = random_board(cfg.kind, rng);
        pairs.emplace_back(init, sample_goal_from(init));
      }
    }

    SearchConfig scfg;
    scfg.node_limit = cfg.node_limit;
    int trace_idx = 0;
    int val_stride = cfg.validation_fraction > 0.0
                         ? std::max(2, static_cast<int>(
                                           1.0 / cfg.validation_fraction))
                         : 0;
    for (const auto& [init, goal] : pairs) {
      std::vector<Board> cands = {goal};
      GroundTask task = make_task(init, cands, 0);
      PlanTrace trace;
      try {
        trace = generate_trace(task, task.candidates[0], scfg);
      } catch (const Error&) {
        continue;  // unreachable goal: skip
      }
      StateCode gcode = encode_board(goal);
      known_goals.insert(gcode);
      train_keys.insert(trace_key(encode_board(init),
                                  [&] {
                                    std::vector<std::string> names;
                                    for (int aid : trace.plan.action_ids) {
                                      names.push_back(task.actions[aid].name);
                                    }
                                    return names;
                                  }()));
      bool is_val = val_stride > 0 && trace_idx % val_stride == 0;
      emit_records(is_val ? "validation" : "train", next_problem_id, init,
                   task, trace, gcode, {});
      ++next_problem_id;
      ++trace_idx;
    }
  }

  void build_problem_split(const std::string& split, int count,
                           bool goal_must_be_fresh) {
    SearchConfig scfg;
    scfg.node_limit = cfg.node_limit;
    for (int p = 0; p < count; ++p) {
      for (int attempt = 0;; ++attempt) {
        if (attempt > 200) {
          throw Error("could not build a valid problem for split " + split);
        }
        Board init = random_board(cfg.kind, rng);
        Board gstar = sample_goal_from(init);
        StateCode gcode = encode_board(gstar);
        if (goal_must_be_fresh && known_goals.count(gcode)) continue;
        if (!goal_must_be_fresh && cfg.all_goals &&
            !known_goals.count(gcode)) {
          continue;  // keep benchmark goals inside the trained goal set
        }

        std::vector<Board> cands = {gstar};
        std::set<StateCode> used = {gcode, encode_board(init)};
        int guard = 0;
        while (static_cast<int>(cands.size()) < cfg.n_candidates) {
          if (++guard > 500) break;
          Board alt = sample_goal_from(init);
          if (used.insert(encode_board(alt)).second) cands.push_back(alt);
        }
        if (static_cast<int>(cands.size()) < cfg.n_candidates) {
          throw Error("not enough distinct candidate goals available");
        }
        std::shuffle(cands.begin(), cands.end(), rng);
        int goal_index = 0;
        for (std::size_t i = 0; i < cands.size(); ++i) {
          if (encode_board(cands[i]) == gcode) goal_index = static_cast<int>(i);
        }

        GroundTask task = make_task(init, cands, goal_index);
        PlanTrace trace;
        try {
          trace = generate_trace(task, task.candidates[goal_index], scfg);
        } catch (const Error&) {
          continue;
        }
        std::vector<std::string> names;
        for (int aid : trace.plan.action_ids) {
          names.push_back(task.actions[aid].name);
        }
        if (train_keys.count(trace_key(encode_board(init), names))) {
          continue;  // identical trace already used for training
        }
        std::vector<StateCode> cand_codes;
        for (const Board& c : cands) cand_codes.push_back(encode_board(c));
        emit_records(split, next_problem_id, init, task, trace, gcode,
                     cand_codes);
        ++next_problem_id;
        break;
      }
    }
  }
};

}  // namespace

Dataset build_dataset(const DatasetConfig& cfg) {
  if (cfg.all_goals && cfg.n_unknown > 0) {
    throw Error(
        "all_goals trains on every reachable goal, leaving none for the "
        "unknown-goal split; set n_unknown to 0");
  }
  Builder b(cfg);
  b.build_training_corpus();
  b.build_problem_split("test", cfg.n_problems, false);
  if (cfg.n_unknown > 0) {
    b.build_problem_split("unknown_goal_test", cfg.n_unknown, true);
  }

  nlohmann::json counts;
  for (const char* split :
       {"train", "validation", "test", "unknown_goal_test"}) {
    counts[split] = std::count_if(
        b.out.records.begin(), b.out.records.end(),
        [&](const TraceRecord& r) { return r.split == split; });
  }
  nlohmann::json manifest = {
      {"domain", domain_name(cfg.kind)},
      {"seed", cfg.seed},
      {"levels", cfg.levels},
      {"n_problems", cfg.n_problems},
      {"n_candidates", cfg.n_candidates},
      {"n_unknown", cfg.n_unknown},
      {"n_train_traces", cfg.n_train_traces},
      {"all_goals", cfg.all_goals},
      {"validation_fraction", cfg.validation_fraction},
      {"round_rule", cfg.round_rule == RoundRule::Round ? "round" : "ceil"},
      {"record_counts", counts},
  };
  b.out.manifest_json = manifest.dump(2) + "\n";
  check_dataset(b.out);
  return b.out;
}

void check_dataset(const Dataset& ds) {
  std::set<StateCode> train_goals;
  std::set<std::string> train_trace_keys;
  for (const TraceRecord& r : ds.records) {
    if (r.split == "train" || r.split == "validation") {
      train_goals.insert(r.goal_code);
      train_trace_keys.insert(trace_key(r.trace_states.at(0), r.trace_actions));
    }
  }
  for (const TraceRecord& r : ds.records) {
    if (r.trace_states.size() != r.trace_actions.size() + 1) {
      throw Error("record with inconsistent trace lengths");
    }
    int prev = -1;
    for (int k : r.kept_indices) {
      if (k <= prev || k >= static_cast<int>(r.trace_actions.size())) {
        throw Error("kept_indices not an increasing subsequence");
      }
      prev = k;
    }
    if (!r.trace_actions.empty() && r.kept_indices.empty()) {
      throw Error("empty observation for a nonempty trace");
    }
    if (r.split == "unknown_goal_test" && train_goals.count(r.goal_code)) {
      throw Error("unknown_goal_test goal appears in the training goals");
    }
    if (r.split == "test" &&
        train_trace_keys.count(trace_key(r.trace_states.at(0),
                                         r.trace_actions))) {
      throw Error("test trace duplicates a training trace");
    }
    if (!r.candidates.empty()) {
      long hits = std::count(r.candidates.begin(), r.candidates.end(),
                             r.goal_code);
      if (hits != 1) {
        throw Error("candidate set must contain the hidden goal exactly once");
      }
    }
  }
}

namespace {

nlohmann::json record_to_json(const TraceRecord& r) {
  nlohmann::json j;
  j["domain"] = r.domain;
  j["problem_id"] = r.problem_id;
  j["split"] = r.split;
  j["goal_code"] = code_hex(r.goal_code);
  nlohmann::json cands = nlohmann::json::array();
  for (StateCode c : r.candidates) cands.push_back(code_hex(c));
  j["candidates"] = cands;
  nlohmann::json states = nlohmann::json::array();
  for (StateCode s : r.trace_states) states.push_back(code_hex(s));
  j["trace_states"] = states;
  j["trace_actions"] = r.trace_actions;
  j["level"] = r.level;
  j["kept_indices"] = r.kept_indices;
  return j;
}

TraceRecord record_from_json(const nlohmann::json& j) {
  TraceRecord r;
  r.domain = j.at("domain").get<std::string>();
  r.problem_id = j.at("problem_id").get<int>();
  r.split = j.at("split").get<std::string>();
  r.goal_code = code_from_hex(j.at("goal_code").get<std::string>());
  for (const auto& c : j.at("candidates")) {
    r.candidates.push_back(code_from_hex(c.get<std::string>()));
  }
  for (const auto& s : j.at("trace_states")) {
    r.trace_states.push_back(code_from_hex(s.get<std::string>()));
  }
  r.trace_actions = j.at("trace_actions").get<std::vector<std::string>>();
  r.level = j.at("level").get<int>();
  r.kept_indices = j.at("kept_indices").get<std::vector<int>>();
  return r;
}

}  // namespace

void save_dataset(const Dataset& ds, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream jl(dir + "/dataset.jsonl", std::ios::binary);
  if (!jl) throw Error("cannot write " + dir + "/dataset.jsonl");
  for (const TraceRecord& r : ds.records) {
    jl << record_to_json(r).dump() << "\n";
  }
  std::ofstream mf(dir + "/manifest.json", std::ios::binary);
  mf << ds.manifest_json;
}

Dataset load_dataset(const std::string& dir) {
  Dataset ds;
  std::ifstream jl(dir + "/dataset.jsonl");
  if (!jl) throw Error("cannot read " + dir + "/dataset.jsonl");
  std::string line;
  long line_no = 0;
  while (std::getline(jl, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      ds.records.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw Error("bad dataset record at line " + std::to_string(line_no) +
                  ": " + e.what());
    }
  }
  std::ifstream mf(dir + "/manifest.json");
  if (mf) {
    std::ostringstream ss;
    ss << mf.rdbuf();
    ds.manifest_json = ss.str();
  }
  return ds;
}

}  // namespace grlab
