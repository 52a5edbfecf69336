#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grlab/bench.hpp"
#include "json.hpp"

namespace {

using namespace grlab;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path);
  os << content;
}

int cmd_gen(const DatasetConfig& cfg, const std::string& out_dir) {
  Dataset ds = build_dataset(cfg);
  save_dataset(ds, out_dir);
  std::cout << "wrote " << ds.records.size() << " records to " << out_dir
            << "\n";
  return 0;
}

int cmd_train(const std::string& data_dir, const std::string& out_path,
              int embed, int hidden, const TrainConfig& cfg) {
  Dataset ds = load_dataset(data_dir);
  check_dataset(ds);
  TrainedModel model = train_on_dataset(ds, embed, hidden, cfg);

  nlohmann::json meta = {
      {"embed_dim", embed},
      {"hidden_dim", hidden},
      {"learning_rate", cfg.learning_rate},
      {"rmsprop_decay", cfg.rmsprop_decay},
      {"rmsprop_epsilon", cfg.rmsprop_epsilon},
      {"max_epochs", cfg.max_epochs},
      {"patience", cfg.patience},
      {"batch_size", cfg.batch_size},
      {"grad_clip_norm", cfg.grad_clip_norm},
      {"seed", cfg.seed},
      {"best_epoch", model.report.best_epoch},
      {"stopped_epoch", model.report.stopped_epoch},
  };
  save_checkpoint(out_path, model.params, model.vocab, meta.dump());

  const TrainReport& r = model.report;
  std::cout << "checkpoint: " << out_path << "\n"
            << "vocabulary: " << model.vocab.size() << " state codes\n"
            << "epochs: stopped at " << r.stopped_epoch << ", best "
            << r.best_epoch << "\n"
            << "validation loss: " << r.val_loss.front() << " -> "
            << r.val_loss[r.best_epoch] << "\n"
            << "training time (seconds): " << r.seconds << "\n"
            << "parameter checksum: " << std::hex << r.checksum << std::dec
            << "\n";
  return 0;
}

int cmd_bench(const std::string& data_dir, const std::string& ckpt_path,
              const BenchConfig& cfg, const std::string& out_dir,
              const std::string& format) {
  Dataset ds = load_dataset(data_dir);
  check_dataset(ds);
  Checkpoint ck;
  bool have_ck = false;
  for (const std::string& r : cfg.recognizers) {
    if (r == "lstm") {
      if (ckpt_path.empty()) throw Error("--checkpoint required for lstm");
      ck = load_checkpoint(ckpt_path);
      have_ck = true;
    }
  }
  BenchReport report = run_bench(ds, have_ck ? &ck : nullptr, cfg);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/results.csv", bench_csv(report.rows));
    write_file(out_dir + "/details.csv", details_csv(report.details));
  }
  if (format == "csv") {
    std::cout << bench_csv(report.rows);
  } else if (format == "json") {
    std::cout << bench_json(report);
  } else {
    std::cout << bench_table(report.rows);
  }
  return 0;
}

int cmd_unknown(const std::string& data_dir, const std::string& ckpt_path,
                const std::string& out_dir, const std::string& format) {
  Dataset ds = load_dataset(data_dir);
  check_dataset(ds);
  Checkpoint ck = load_checkpoint(ckpt_path);
  std::vector<UnknownRow> rows = run_unknown(ds, ck);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/unknown.csv", unknown_csv(rows));
  }
  std::cout << (format == "csv" ? unknown_csv(rows) : unknown_table(rows));
  return 0;
}

int cmd_oracle(const std::string& suite) {
  OracleReport report = run_oracles(suite);
  std::cout << oracle_text(report);
  return report.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"goal-recognition workbench"};
  app.require_subcommand(1);

  std::string domain = "hanoi34";
  std::string data_dir = "data";
  std::string out;
  std::string ckpt;
  std::string format = "table";
  std::string suite = "all";
  unsigned seed = 7;
  bool full_scale = false;

  DatasetConfig dcfg;
  std::string round_rule = "round";
  auto* gen = app.add_subcommand("gen", "generate a plan-trace dataset");
  gen->add_option("--domain", domain, "hanoi34 | eight_puzzle | lights_out4");
  gen->add_option("--problems", dcfg.n_problems, "benchmark problems");
  gen->add_option("--candidates", dcfg.n_candidates, "goals per problem");
  gen->add_option("--unknown", dcfg.n_unknown, "unknown-goal problems");
  gen->add_option("--train-traces", dcfg.n_train_traces, "training traces");
  gen->add_flag("--all-goals", dcfg.all_goals,
                "cover every goal in training (hanoi34)");
  gen->add_option("--levels", dcfg.levels, "observability levels");
  gen->add_option("--val-fraction", dcfg.validation_fraction,
                  "validation share of training traces");
  gen->add_option("--round", round_rule, "round | ceil observation counts");
  gen->add_option("--min-walk", dcfg.min_walk, "goal sampling walk, lower");
  gen->add_option("--max-walk", dcfg.max_walk, "goal sampling walk, upper");
  gen->add_option("--node-limit", dcfg.node_limit, "search node limit");
  gen->add_option("--seed", seed, "rng seed");
  gen->add_option("--out", data_dir, "output directory");

  TrainConfig tcfg;
  int embed = 64, hidden = 128;
  auto* train = app.add_subcommand("train", "train the sequence model");
  train->add_option("--data", data_dir, "dataset directory");
  train->add_option("--out", out, "checkpoint path")->required();
  train->add_option("--embed", embed, "embedding dimension");
  train->add_option("--hidden", hidden, "hidden units");
  train->add_flag("--full-scale", full_scale, "embed 1000, hidden 512");
  train->add_option("--lr", tcfg.learning_rate, "learning rate");
  train->add_option("--epochs", tcfg.max_epochs, "epoch cap");
  train->add_option("--patience", tcfg.patience, "early-stopping patience");
  train->add_option("--batch", tcfg.batch_size, "batch size");
  train->add_option("--clip", tcfg.grad_clip_norm, "gradient norm clip");
  train->add_option("--seed", seed, "rng seed");

  BenchConfig bcfg;
  auto* bench = app.add_subcommand("bench", "evaluate recognizers");
  bench->add_option("--data", data_dir, "dataset directory");
  bench->add_option("--checkpoint", ckpt, "model checkpoint (lstm)");
  bench->add_option("--recognizers", bcfg.recognizers,
                    "pom_gc pom_uniq rg lstm");
  bench->add_option("--theta", bcfg.thetas, "theta thresholds (pom)");
  bench->add_option("--node-limit", bcfg.node_limit, "search node limit");
  bench->add_option("--out", out, "directory for results.csv/details.csv");
  bench->add_option("--format", format, "csv | table | json");

  auto* unknown = app.add_subcommand("unknown", "unknown-goal study");
  unknown->add_option("--data", data_dir, "dataset directory");
  unknown->add_option("--checkpoint", ckpt, "model checkpoint")->required();
  unknown->add_option("--out", out, "directory for unknown.csv");
  unknown->add_option("--format", format, "csv | table");

  auto* oracle = app.add_subcommand("oracle", "verification suites");
  oracle->add_option("--suite", suite,
                     "all | planner | landmarks | gradient | codec");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      dcfg.kind = domain_from_name(domain);
      dcfg.seed = seed;
      if (round_rule == "ceil") {
        dcfg.round_rule = RoundRule::Ceil;
      } else if (round_rule != "round") {
        throw Error("--round must be round or ceil");
      }
      return cmd_gen(dcfg, data_dir);
    }
    if (train->parsed()) {
      tcfg.seed = seed;
      if (full_scale) {
        embed = 1000;
        hidden = 512;
      }
      return cmd_train(data_dir, out, embed, hidden, tcfg);
    }
    if (bench->parsed()) return cmd_bench(data_dir, ckpt, bcfg, out, format);
    if (unknown->parsed()) return cmd_unknown(data_dir, ckpt, out, format);
    if (oracle->parsed()) return cmd_oracle(suite);
  } catch (const grlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
