#pragma once

#include <string>
#include <vector>

#include "grlab/lstm.hpp"
#include "grlab/trace.hpp"

namespace grlab {

struct BenchConfig {
  std::vector<std::string> recognizers = {"pom_gc", "pom_uniq", "rg", "lstm"};
  std::vector<double> thetas = {0.0, 10.0};  // pom recognizers only
  long node_limit = 5'000'000;
};

// One aggregate line per (domain, level, recognizer, theta).
struct BenchRow {
  std::string domain;
  double n_goals = 0.0;
  int level = 0;
  double mean_obs = 0.0;
  std::string recognizer;
  double theta = 0.0;
  double acc_set = 0.0;     // % of problems with G* in the returned set
  double acc_top1 = 0.0;    // % of problems where returned == {G*}
  double mean_spread = 0.0;
  double mean_time_s = 0.0;
};

struct BenchDetail {
  std::string domain;
  int problem_id = 0;
  int level = 0;
  std::string recognizer;
  double theta = 0.0;
  int n_obs = 0;
  bool set_hit = false;
  bool top1_hit = false;
  int spread = 0;
  double time_s = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchDetail> details;
};

// Evaluates the selected recognizers over the dataset's test problems.
// `checkpoint` may be null unless "lstm" is selected. Timing covers the
// recognition call only, never task setup or I/O.
BenchReport run_bench(const Dataset& ds, const Checkpoint* checkpoint,
                      const BenchConfig& cfg);

// `with_timing=false` drops the timing column so the remaining bytes are
// reproducible across runs.
std::string bench_csv(const std::vector<BenchRow>& rows,
                      bool with_timing = true);
std::string details_csv(const std::vector<BenchDetail>& details,
                        bool with_timing = true);
std::string bench_table(const std::vector<BenchRow>& rows);
std::string bench_json(const BenchReport& report);

struct UnknownRow {
  std::string domain;
  int n_problems = 0;
  double reconstruction_acc = 0.0;  // mean % of goal bits recovered
  double correct_rate = 0.0;        // % of exact 36-bit reconstructions
};

// Unknown-goal protocol: the network never sees the candidate list; its
// thresholded output is compared against the hidden goal's code directly.
std::vector<UnknownRow> run_unknown(const Dataset& ds, const Checkpoint& ck);
std::string unknown_csv(const std::vector<UnknownRow>& rows);
std::string unknown_table(const std::vector<UnknownRow>& rows);

struct OracleCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool ok() const {
    for (const auto& c : checks) {
      if (!c.ok) return false;
    }
    return true;
  }
};

// suite: all | planner | landmarks | gradient | codec.
OracleReport run_oracles(const std::string& suite);
std::string oracle_text(const OracleReport& report);

// Sequence fed to the network: the initial state followed by the observed
// states at the record's observability level.
std::vector<StateCode> lstm_input_codes(const TraceRecord& r);

struct TrainedModel {
  LstmParams params;
  Vocabulary vocab;
  TrainReport report;
};

// Builds the vocabulary from the train+validation states and trains on those
// splits; the dataset's own validation records drive early stopping.
TrainedModel train_on_dataset(const Dataset& ds, int embed_dim, int hidden_dim,
                              const TrainConfig& cfg);

// Rebuilds the ground task behind a benchmark record group (all levels of one
// problem share it). Exposed for the acceptance suite.
struct BenchProblem {
  DomainKind kind = DomainKind::Hanoi34;
  GroundTask task;
  int goal_index = -1;
  std::vector<const TraceRecord*> records;  // one per level
};
std::vector<BenchProblem> collect_problems(const Dataset& ds,
                                           const std::string& split);
std::vector<int> observed_action_ids(const GroundTask& task,
                                     const TraceRecord& r);

}  // namespace grlab
