// End-to-end acceptance gate. Each criterion prints exactly one line:
//   criterion N PASS|FAIL: <detail>
// All tolerances are pinned here as constants.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "grlab/bench.hpp"
#include "grlab/trace.hpp"

using namespace grlab;

namespace {

// Pinned tolerances.
constexpr double kFullObsSetAccuracy = 100.0;  // criterion 1, exact
constexpr double kRgOverPomRatio = 5.0;        // criterion 3
constexpr double kLstmTop1HighObs = 80.0;      // criterion 4, levels >= 50
constexpr double kLstmTop1LowObs = 60.0;       // criterion 4, level 10
constexpr double kUnknownCorrectMax = 20.0;    // criterion 5
constexpr double kReconstructionLo = 35.0;     // criterion 5
constexpr double kReconstructionHi = 75.0;     // criterion 5

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d %s: %s\n", id, ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", v);
  return buf;
}

DatasetConfig hanoi_config() {
  DatasetConfig cfg;
  cfg.kind = DomainKind::Hanoi34;
  cfg.all_goals = true;
  cfg.n_train_traces = 512;
  cfg.n_problems = 30;
  cfg.n_candidates = 4;
  cfg.n_unknown = 0;
  cfg.seed = 7;
  return cfg;
}

DatasetConfig puzzle_config() {
  DatasetConfig cfg;
  cfg.kind = DomainKind::EightPuzzle;
  cfg.n_train_traces = 200;
  cfg.n_problems = 6;
  cfg.n_candidates = 6;
  cfg.n_unknown = 30;
  cfg.seed = 7;
  return cfg;
}

TrainConfig hanoi_train_config() {
  TrainConfig cfg;
  cfg.max_epochs = 200;
  cfg.patience = 25;
  cfg.seed = 3;
  return cfg;
}

const BenchRow* find_row(const std::vector<BenchRow>& rows, int level,
                         const std::string& recognizer, double theta) {
  for (const BenchRow& r : rows) {
    if (r.level == level && r.recognizer == recognizer && r.theta == theta) {
      return &r;
    }
  }
  return nullptr;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

int main() {
  // Shared artifacts, built once.
  Dataset hanoi_ds = build_dataset(hanoi_config());
  Dataset puzzle_ds = build_dataset(puzzle_config());

  TrainedModel hanoi_model =
      train_on_dataset(hanoi_ds, 64, 128, hanoi_train_config());
  Checkpoint hanoi_ck{hanoi_model.params, hanoi_model.vocab, "{}"};

  TrainConfig puzzle_tc;
  puzzle_tc.max_epochs = 100;
  puzzle_tc.patience = 20;
  puzzle_tc.seed = 3;
  TrainedModel puzzle_model = train_on_dataset(puzzle_ds, 64, 128, puzzle_tc);
  Checkpoint puzzle_ck{puzzle_model.params, puzzle_model.vocab, "{}"};

  BenchConfig full;  // pom_gc, pom_uniq, rg, lstm at theta 0 and 10
  BenchReport hanoi_bench = run_bench(hanoi_ds, &hanoi_ck, full);
  BenchConfig planning_only;
  planning_only.recognizers = {"pom_gc", "pom_uniq", "rg"};
  BenchReport puzzle_bench = run_bench(puzzle_ds, nullptr, planning_only);

  // 1. Full-observability recognition: POM(h_gc, theta=0) and RG reach 100%
  //    set-membership accuracy on both handmade benchmarks.
  {
    bool ok = true;
    std::string detail;
    for (const auto* bench : {&hanoi_bench, &puzzle_bench}) {
      for (const char* rec : {"pom_gc", "rg"}) {
        const BenchRow* row = find_row(bench->rows, 100, rec, 0.0);
        if (!row || row->acc_set != kFullObsSetAccuracy) {
          ok = false;
        }
        if (row) {
          detail += row->domain + "/" + rec + " " + pct(row->acc_set) + " ";
        }
      }
    }
    report(1, ok, detail + "(need exactly 100% set accuracy at level 100)");
  }

  // 2. Theta monotonicity on every (domain, level) row.
  {
    bool ok = true;
    int rows_checked = 0;
    for (const auto* bench : {&hanoi_bench, &puzzle_bench}) {
      for (const char* rec : {"pom_gc", "pom_uniq"}) {
        for (int level : {10, 30, 50, 70, 100}) {
          const BenchRow* t0 = find_row(bench->rows, level, rec, 0.0);
          const BenchRow* t10 = find_row(bench->rows, level, rec, 10.0);
          if (!t0 || !t10) {
            ok = false;
            continue;
          }
          ++rows_checked;
          if (t10->acc_set < t0->acc_set ||
              t10->mean_spread < t0->mean_spread) {
            ok = false;
          }
        }
      }
    }
    report(2, ok,
           "theta=10 accuracy and spread dominate theta=0 on " +
               std::to_string(rows_checked) + " rows");
  }

  // 3. RG recognition is at least 5x slower than POM on the 8-puzzle.
  {
    double pom_time = 0, rg_time = 0;
    int pom_n = 0, rg_n = 0;
    for (const BenchDetail& d : puzzle_bench.details) {
      if (d.recognizer == "pom_gc" && d.theta == 0.0) {
        pom_time += d.time_s;
        ++pom_n;
      }
      if (d.recognizer == "rg") {
        rg_time += d.time_s;
        ++rg_n;
      }
    }
    double ratio =
        (pom_time / pom_n) > 0 ? (rg_time / rg_n) / (pom_time / pom_n) : 0;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "mean RG / mean POM time = %.1fx (need >= %.0fx)",
                  ratio, kRgOverPomRatio);
    report(3, ratio >= kRgOverPomRatio, buf);
  }

  // 4. LSTM known-goal top-1 accuracy on held-out Hanoi problems.
  {
    bool ok = true;
    std::string detail;
    for (int level : {10, 50, 70, 100}) {
      const BenchRow* row = find_row(hanoi_bench.rows, level, "lstm", 0.0);
      double need = level >= 50 ? kLstmTop1HighObs : kLstmTop1LowObs;
      if (!row || row->acc_top1 < need) ok = false;
      if (row) {
        detail += "L" + std::to_string(level) + "=" + pct(row->acc_top1) + " ";
      }
    }
    report(4, ok, detail + "(need >= 80% at levels >= 50, >= 60% at level 10)");
  }

  // 5. Unknown-goal failure mode on the 8-puzzle.
  {
    std::vector<UnknownRow> rows = run_unknown(puzzle_ds, puzzle_ck);
    bool ok = rows.size() == 1 &&
              rows[0].correct_rate <= kUnknownCorrectMax &&
              rows[0].reconstruction_acc >= kReconstructionLo &&
              rows[0].reconstruction_acc <= kReconstructionHi;
    std::string detail = rows.empty()
                             ? "no unknown split"
                             : "correct " + pct(rows[0].correct_rate) +
                                   ", reconstruction " +
                                   pct(rows[0].reconstruction_acc) +
                                   " over " +
                                   std::to_string(rows[0].n_problems) +
                                   " problems (need <= 20% and [35%, 75%])";
    report(5, ok, detail);
  }

  // 6-9. Oracle suites: gradient, planner optimality, landmark soundness,
  //      codec integrity.
  {
    OracleReport g = run_oracles("gradient");
    report(6, g.ok(), g.checks[0].detail);
    OracleReport p = run_oracles("planner");
    report(7, p.ok(), p.checks[0].detail);
    OracleReport l = run_oracles("landmarks");
    report(8, l.ok(), l.checks[0].detail);
    OracleReport c = run_oracles("codec");
    report(9, c.ok(), c.checks[0].detail);
  }

  // 10. End-to-end determinism on a reduced corpus: identical seeds give
  //     byte-identical datasets, checkpoints and CSVs (timing excluded).
  {
    DatasetConfig small = hanoi_config();
    small.n_train_traces = 64;
    small.n_problems = 6;
    TrainConfig tc;
    tc.max_epochs = 20;
    tc.patience = 20;
    tc.seed = 3;

    auto run_once = [&](const std::string& tag) {
      std::string dir =
          (std::filesystem::temp_directory_path() / ("grlab_acc_" + tag))
              .string();
      Dataset ds = build_dataset(small);
      save_dataset(ds, dir);
      TrainedModel m = train_on_dataset(ds, 32, 64, tc);
      save_checkpoint(dir + "/model.ckpt", m.params, m.vocab, "{}");
      Checkpoint ck{m.params, m.vocab, "{}"};
      BenchReport rep = run_bench(ds, &ck, full);
      return std::tuple<std::string, std::string, std::string>{
          slurp(dir + "/dataset.jsonl"), slurp(dir + "/model.ckpt"),
          bench_csv(rep.rows, false) + details_csv(rep.details, false)};
    };
    auto [ds1, ck1, csv1] = run_once("a");
    auto [ds2, ck2, csv2] = run_once("b");
    bool ok = ds1 == ds2 && ck1 == ck2 && csv1 == csv2 && !ds1.empty();
    report(10, ok,
           std::string("dataset bytes ") + (ds1 == ds2 ? "match" : "differ") +
               ", checkpoint bytes " + (ck1 == ck2 ? "match" : "differ") +
               ", csv bytes " + (csv1 == csv2 ? "match" : "differ"));
  }

  if (failures) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 2;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
