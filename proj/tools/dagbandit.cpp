#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dagbandit/dataset.hpp"
#include "dagbandit/errors.hpp"
#include "dagbandit/harness.hpp"

namespace {

using namespace dagbandit;

constexpr int kConfigError = 1;
constexpr int kAllFailed = 2;

std::vector<double> read_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scores file " + path);
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    for (char& ch : token) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream parts(token);
    double v;
    while (parts >> v) out.push_back(v);
  }
  if (out.empty()) throw InputError("no scores in " + path);
  return out;
}

struct Common {
  std::uint64_t seed = 0;
  std::size_t reps = 1;
  std::size_t jobs = 1;
  std::string out;
  std::string scores_file;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "base seed; replication i uses seed+i");
  cmd->add_option("--reps", c.reps, "replications")->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", c.jobs, "concurrent replications")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "JSON-lines report path");
}

void add_search(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--epsilon", cfg.epsilon, "accuracy")->check(CLI::NonNegativeNumber);
  cmd->add_option("--delta", cfg.delta, "risk level")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--b", cfg.b, "expansion parameter")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--beta", cfg.beta, "exploration function")->check(CLI::IsMember({"theory", "practical"}));
  cmd->add_option("--max-steps", cfg.max_steps, "safety cap on samples")->check(CLI::PositiveNumber);
}

void add_data(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--dataset", cfg.dataset, "'linear', a CSV file, or a Madelon .data file");
  cmd->add_option("--madelon-labels", cfg.madelon_labels, "Madelon .labels file");
  cmd->add_option("--checksum", cfg.checksum, "expected dataset checksum");
  cmd->add_option("--data-seed", cfg.data_seed, "seed of the generated linear dataset");
  cmd->add_option("--m", cfg.fs.m, "subsample size of intermediate evaluations");
  cmd->add_option("--k", cfg.fs.k, "neighbors");
  cmd->add_option("--q", cfg.fs.q, "rollout continuation")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--c-l", cfg.c_l, "RAVE blending constant")->check(CLI::NonNegativeNumber);
}

int finish(const std::vector<RunRecord>& records, const Common& common) {
  if (!common.out.empty()) {
    std::ofstream out(common.out);
    if (!out) throw InputError("cannot write " + common.out);
    for (const auto& r : records) out << to_json_line(r) << '\n';
  }
  const Summary s = summarize(records);
  print_summary(std::cout, s);
  for (const auto& r : records) {
    if (!r.error.empty()) std::cerr << "rep " << r.rep << ": " << r.error << '\n';
  }
  return s.failures == s.runs ? kAllFailed : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo search in growing DAGs"};
  app.require_subcommand(1);

  Common common;
  ExperimentConfig cfg;
  std::vector<double> b_values{0.25, 0.3, 0.35, 0.4};

  auto* gen = app.add_subcommand("gen", "write the linear dataset as CSV");
  gen->add_option("--seed", common.seed, "generator seed");
  gen->add_option("--out", common.out, "CSV path (stdout if omitted)");

  auto* bai = app.add_subcommand("bai", "best-arm identification at the root");
  add_common(bai, common);
  add_search(bai, cfg);
  add_data(bai, cfg);
  bai->add_option("--domain", cfg.domain)->check(CLI::IsMember({"lattice", "tree", "flat", "fs"}));
  bai->add_option("--scores", common.scores_file, "file of per-feature scores");
  bai->add_option("--d-l", cfg.leaf_depth, "leaf depth of lattice/tree domains");
  bai->add_option("--features", cfg.n_features, "feature count of the flat domain");

  auto* bli = app.add_subcommand("bli", "best-leaf identification");
  add_common(bli, common);
  add_search(bli, cfg);
  add_data(bli, cfg);
  bli->add_option("--domain", cfg.domain)->check(CLI::IsMember({"lattice", "tree", "fs"}));
  bli->add_option("--scores", common.scores_file, "file of per-feature scores");
  bli->add_option("--d-l", cfg.leaf_depth, "leaf depth of lattice/tree domains");
  bli->add_option("--init-width", cfg.init_width, "features initialized below each new stage (0 = off)");

  auto* fuse = app.add_subcommand("fuse", "UCT feature-selection baseline");
  add_common(fuse, common);
  add_data(fuse, cfg);
  fuse->add_option("--budget", cfg.budget, "iterations")->required()->check(CLI::NonNegativeNumber);
  fuse->add_option("--widening", cfg.widening, "progressive widening exponent")->check(CLI::Range(0.0, 1.0));

  auto* theory = app.add_subcommand("theory", "exact complexity terms and bounds");
  theory->add_option("--domain", cfg.domain)->check(CLI::IsMember({"lattice", "tree", "flat"}));
  theory->add_option("--scores", common.scores_file, "file of per-feature scores");
  theory->add_option("--d-l", cfg.leaf_depth, "leaf depth");
  theory->add_option("--epsilon", cfg.epsilon)->check(CLI::NonNegativeNumber);
  theory->add_option("--delta", cfg.delta)->check(CLI::Range(0.0, 1.0));
  theory->add_option("--b", cfg.b)->check(CLI::Range(0.0, 1.0));

  auto* sweep = app.add_subcommand("sweep", "samples and tau_max across expansion parameters");
  add_common(sweep, common);
  add_search(sweep, cfg);
  sweep->add_option("--domain", cfg.domain)->check(CLI::IsMember({"lattice", "tree", "flat"}));
  sweep->add_option("--features", cfg.n_features, "feature count of the flat domain");
  sweep->add_option("--b-values", b_values, "expansion parameters")->delimiter(',');

  // Subcommand-specific defaults before parsing.
  sweep->preparse_callback([&](std::size_t) {
    cfg.domain = "flat";
    cfg.n_features = 15;
    cfg.epsilon = 0.05;
    common.reps = 10;
  });
  bli->preparse_callback([&](std::size_t) {
    cfg.domain = "fs";
    cfg.epsilon = 0.005;
    cfg.b = 0.3;
    cfg.beta = "practical";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    cfg.base_seed = common.seed;
    cfg.reps = common.reps;
    cfg.jobs = common.jobs;
    if (!common.scores_file.empty()) cfg.scores = read_scores(common.scores_file);

    if (gen->parsed()) {
      const Dataset d = gen_linear(common.seed);
      if (common.out.empty()) {
        write_csv(d, std::cout);
      } else {
        std::ofstream out(common.out);
        if (!out) throw InputError("cannot write " + common.out);
        write_csv(d, out);
      }
      return 0;
    }
    if (theory->parsed()) {
      print_theory(std::cout, run_theory(cfg));
      return 0;
    }
    if (bai->parsed()) {
      cfg.algorithm = Algorithm::kBai;
      return finish(run_experiment(cfg), common);
    }
    if (bli->parsed()) {
      cfg.algorithm = Algorithm::kBli;
      return finish(run_experiment(cfg), common);
    }
    if (fuse->parsed()) {
      cfg.algorithm = Algorithm::kFuse;
      cfg.domain = "fs";
      return finish(run_experiment(cfg), common);
    }
    if (sweep->parsed()) {
      cfg.algorithm = Algorithm::kBai;
      std::ofstream out;
      if (!common.out.empty()) {
        out.open(common.out);
        if (!out) throw InputError("cannot write " + common.out);
      }
      const auto rows = sweep_b(cfg, b_values, common.out.empty() ? nullptr : &out);
      std::cout << std::setw(6) << "b" << std::setw(16) << "mean_samples" << std::setw(14) << "sd"
                << std::setw(18) << "tau_max" << std::setw(18) << "tau_max_cf" << '\n';
      bool any = false;
      for (const auto& row : rows) {
        any = any || row.summary.failures < row.summary.runs;
        std::cout << std::fixed << std::setprecision(2) << std::setw(6) << row.b << std::setprecision(1)
                  << std::setw(16) << row.summary.mean_samples << std::setw(14) << row.summary.sd_samples;
        if (row.bound) {
          std::cout << std::setw(18) << row.bound->exact << std::setw(18) << row.bound->closed_form << '\n';
        } else {
          std::cout << std::setw(18) << "n/a" << std::setw(18) << "n/a" << '\n';
        }
      }
      return any ? 0 : kAllFailed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return 0;
}
