#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dagbandit/dataset.hpp"
#include "dagbandit/domain.hpp"
#include "dagbandit/fs_oracle.hpp"
#include "dagbandit/oracle.hpp"
#include "dagbandit/search_dag.hpp"
#include "dagbandit/theory.hpp"

namespace dagbandit {

/// 300 rows over 30 columns: x, y, z uniform on [0,1]; r0..r6 noisy copies
/// of x, y, z in turn (Gaussian noise, sd 0.05, clamped to [0,1]); u0..u19
/// uniform noise. Label: 0.1x - 0.8y + 0.6z > 0.
Dataset gen_linear(std::uint64_t seed);

/// Feature scores of the six-feature synthetic benchmark.
SyntheticScores benchmark_scores();

/// Inserts every state of a finite domain.
void build_full(SearchDag& dag);
/// Inserts the root's children; the stopping child only if `include_stop`.
void build_depth_one(SearchDag& dag, bool include_stop);

enum class Algorithm { kBai, kBli, kFuse };

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kBai;
  /// lattice | tree (fixed-depth synthetic), flat (all values 0.5), fs (dataset).
  std::string domain = "lattice";
  std::size_t n_features = 6;
  std::size_t leaf_depth = 3;
  std::vector<double> scores;  // empty: benchmark_scores()

  /// "linear" (generated with data_seed), a CSV path, or a Madelon data path.
  std::string dataset = "linear";
  std::string madelon_labels;
  std::string checksum;  // verified when set
  std::uint64_t data_seed = 0;
  FsOracleParams fs;

  double epsilon = 0.0;
  double delta = 0.1;
  double b = 0.0;
  std::string beta = "theory";
  std::size_t init_width = 7;
  double c_l = 100.0;
  std::uint64_t budget = 0;  // FUSE iterations
  double widening = 0.5;
  std::uint64_t max_steps = 100'000'000;

  std::size_t reps = 1;
  std::uint64_t base_seed = 0;
  std::size_t jobs = 1;
};

struct RunRecord {
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::uint64_t node_updates = 0;
  std::uint64_t node_updates_full = 0;
  std::uint64_t expansions = 0;
  std::string recommendation;
  double value_estimate = 0.0;
  std::size_t n_features = 0;
  bool stopped = false;
  double wall_time = 0.0;
  std::string error;  // empty on success
};

/// One JSON object, no trailing newline.
std::string to_json_line(const RunRecord& record);

struct Summary {
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::size_t stopped = 0;
  double mean_samples = 0.0;
  double sd_samples = 0.0;
  double mean_node_updates = 0.0;
  double mean_node_updates_full = 0.0;
  double mean_value = 0.0;
  double mean_features = 0.0;
  std::map<std::string, std::size_t> recommendations;
};

Summary summarize(const std::vector<RunRecord>& records);
void print_summary(std::ostream& out, const Summary& summary);

/// Loads or generates the dataset named by the config.
std::shared_ptr<const Dataset> load_dataset(const ExperimentConfig& config);

/// Runs config.reps replications with seeds base_seed + i on up to
/// config.jobs threads. Records come back, and are written, in rep order.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, std::ostream* jsonl = nullptr);

struct SweepRow {
  double b;
  Summary summary;
  std::optional<TauMax> bound;
};

/// Runs the experiment once per b value and pairs it with tau_max.
std::vector<SweepRow> sweep_b(const ExperimentConfig& config, const std::vector<double>& b_values,
                              std::ostream* jsonl = nullptr);

struct TheoryReport {
  std::size_t leaf_count = 0;
  std::optional<double> delta_star;
  std::optional<double> h;
  std::optional<double> tau_ub;
  std::optional<double> second_term;
  std::optional<TauMax> tau_max;  // when b > 0
};

TheoryReport run_theory(const ExperimentConfig& config);
void print_theory(std::ostream& out, const TheoryReport& report);

}  // namespace dagbandit
