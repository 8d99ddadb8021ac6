#include "dagbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <ostream>
#include <random>
#include <thread>

#include <json.hpp>

#include "dagbandit/bai.hpp"
#include "dagbandit/bli.hpp"
#include "dagbandit/errors.hpp"
#include "dagbandit/fuse.hpp"
#include "dagbandit/rave.hpp"

namespace dagbandit {

Dataset gen_linear(std::uint64_t seed) {
  constexpr std::size_t kRows = 300;
  constexpr std::size_t kRedundant = 7;
  constexpr std::size_t kNoise = 20;
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 0.05);

  Dataset d;
  d.rows = kRows;
  d.cols = 3 + kRedundant + kNoise;
  d.feature_names = {"x", "y", "z"};
  for (std::size_t i = 0; i < kRedundant; ++i) d.feature_names.push_back("r" + std::to_string(i));
  for (std::size_t i = 0; i < kNoise; ++i) d.feature_names.push_back("u" + std::to_string(i));
  d.values.reserve(d.rows * d.cols);
  d.labels.reserve(d.rows);
  for (std::size_t r = 0; r < kRows; ++r) {
    const double xyz[3] = {unit(rng), unit(rng), unit(rng)};
    d.values.insert(d.values.end(), xyz, xyz + 3);
    for (std::size_t i = 0; i < kRedundant; ++i) {
      d.values.push_back(std::clamp(xyz[i % 3] + jitter(rng), 0.0, 1.0));
    }
    for (std::size_t i = 0; i < kNoise; ++i) d.values.push_back(unit(rng));
    d.labels.push_back(0.1 * xyz[0] - 0.8 * xyz[1] + 0.6 * xyz[2] > 0.0 ? 1 : 0);
  }
  d.validate();
  return d;
}

SyntheticScores benchmark_scores() { return {{-0.3, 0.0, 0.03, 0.3, 0.4, 0.5}}; }

void build_full(SearchDag& dag) {
  for (const auto& s : enumerate_states(dag.domain())) {
    if (!dag.contains(s)) dag.insert_node(s);
  }
}

void build_depth_one(SearchDag& dag, bool include_stop) {
  const Domain& domain = dag.domain();
  for (const auto& c : domain.children(domain.root())) {
    if (!include_stop && c.stop) continue;
    if (!dag.contains(c)) dag.insert_node(c);
  }
}

std::string to_json_line(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["rep"] = r.rep;
  j["seed"] = r.seed;
  if (!r.error.empty()) {
    j["error"] = r.error;
    return j.dump();
  }
  j["samples"] = r.samples;
  j["node_updates"] = r.node_updates;
  j["node_updates_full"] = r.node_updates_full;
  j["expansions"] = r.expansions;
  j["recommendation"] = r.recommendation;
  j["value_estimate"] = r.value_estimate;
  j["n_features"] = r.n_features;
  j["stopped"] = r.stopped;
  j["wall_time"] = r.wall_time;
  return j.dump();
}

Summary summarize(const std::vector<RunRecord>& records) {
  Summary s;
  s.runs = records.size();
  std::vector<double> samples;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++s.failures;
      continue;
    }
    s.stopped += r.stopped ? 1 : 0;
    samples.push_back(static_cast<double>(r.samples));
    s.mean_node_updates += static_cast<double>(r.node_updates);
    s.mean_node_updates_full += static_cast<double>(r.node_updates_full);
    s.mean_value += r.value_estimate;
    s.mean_features += static_cast<double>(r.n_features);
    ++s.recommendations[r.recommendation];
  }
  const double n = static_cast<double>(samples.size());
  if (samples.empty()) return s;
  for (double x : samples) s.mean_samples += x;
  s.mean_samples /= n;
  for (double x : samples) s.sd_samples += (x - s.mean_samples) * (x - s.mean_samples);
  s.sd_samples = samples.size() > 1 ? std::sqrt(s.sd_samples / (n - 1.0)) : 0.0;
  s.mean_node_updates /= n;
  s.mean_node_updates_full /= n;
  s.mean_value /= n;
  s.mean_features /= n;
  return s;
}

void print_summary(std::ostream& out, const Summary& s) {
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(1);
  out << "runs          " << s.runs << " (" << s.failures << " failed, " << s.stopped << " stopped)\n";
  out << "samples       " << s.mean_samples << " +- " << s.sd_samples << '\n';
  out << "node_updates  " << s.mean_node_updates << " (full " << s.mean_node_updates_full << ")\n";
  out << std::setprecision(4);
  out << "value         " << s.mean_value << '\n';
  out << "n_features    " << s.mean_features << '\n';
  for (const auto& [key, count] : s.recommendations) {
    out << "recommend     " << std::left << std::setw(24) << key << std::right << ' ' << count << '\n';
  }
  out.flags(flags);
}

std::shared_ptr<const Dataset> load_dataset(const ExperimentConfig& config) {
  if (config.dataset == "linear") return std::make_shared<const Dataset>(gen_linear(config.data_seed));
  if (!config.checksum.empty() && file_checksum(config.dataset) != config.checksum) {
    throw InputError("checksum mismatch for " + config.dataset);
  }
  if (!config.madelon_labels.empty()) {
    return std::make_shared<const Dataset>(load_madelon(config.dataset, config.madelon_labels));
  }
  return std::make_shared<const Dataset>(load_csv(config.dataset));
}

namespace {

struct Setup {
  std::unique_ptr<Domain> domain;
  OracleSpec oracles;
};

Setup make_setup(const ExperimentConfig& c) {
  Setup s;
  if (c.domain == "lattice" || c.domain == "tree") {
    SyntheticScores scores = c.scores.empty() ? benchmark_scores() : SyntheticScores{c.scores};
    const std::size_t n = scores.score.size();
    if (c.domain == "lattice") {
      s.domain = std::make_unique<FixedDepthLattice>(n, c.leaf_depth);
    } else {
      s.domain = std::make_unique<FixedDepthTree>(n, c.leaf_depth);
    }
    s.oracles = sigmoid_bernoulli_oracle(std::move(scores));
  } else if (c.domain == "flat") {
    s.domain = std::make_unique<FeatureLattice>(c.n_features);
    s.oracles = sigmoid_bernoulli_oracle({std::vector<double>(c.n_features, 0.0)});
  } else if (c.domain == "fs") {
    auto data = load_dataset(c);
    s.domain = std::make_unique<FeatureLattice>(data->cols);
    s.oracles = fs_oracle(std::move(data), c.fs);
  } else {
    throw InputError("unknown domain: " + c.domain);
  }
  return s;
}

void initial_dag(const ExperimentConfig& c, SearchDag& dag) {
  if ((c.domain == "lattice" || c.domain == "tree") && c.b == 0.0) {
    build_full(dag);
  } else {
    build_depth_one(dag, c.domain == "fs");
  }
}

RunRecord run_one(const ExperimentConfig& c, const Setup& setup, std::size_t rep, std::atomic<bool>& small_l0) {
  RunRecord r;
  r.rep = rep;
  r.seed = c.base_seed + rep;
  try {
    if (c.algorithm == Algorithm::kFuse) {
      if (c.domain != "fs") throw InputError("fuse runs on the fs domain");
      const BliReport rep_fuse = fuse_run(*setup.domain, setup.oracles,
                                          FuseParams{c.budget, c.widening, std::sqrt(2.0), c.c_l, r.seed});
      r.samples = rep_fuse.samples;
      r.expansions = rep_fuse.expansions;
      r.recommendation = to_string(rep_fuse.recommendation);
      r.value_estimate = rep_fuse.value_estimate;
      r.n_features = rep_fuse.n_features;
      r.stopped = rep_fuse.stopped;
      r.wall_time = rep_fuse.wall_time;
      return r;
    }
    SearchDag dag(*setup.domain, ExplorationFn::parse(c.beta, c.delta));
    initial_dag(c, dag);
    if (c.beta == "theory" && c.delta > 0.1 * static_cast<double>(dag.temp_leaf_count())) small_l0 = true;
    if (c.algorithm == Algorithm::kBai) {
      const BaiReport br = run_bai(dag, setup.oracles, BaiParams{c.epsilon, c.b, c.max_steps, r.seed});
      r.samples = br.samples;
      r.node_updates = br.node_updates;
      r.node_updates_full = br.node_updates_full;
      r.expansions = br.expansions;
      r.recommendation = to_string(br.recommendation);
      r.value_estimate = dag.stats(dag.representative_leaf(br.recommended)).mean;
      r.n_features = br.recommendation.items.size();
      r.stopped = br.stopped;
      r.wall_time = br.wall_time;
    } else {
      std::unique_ptr<RaveTable> rave;
      if (c.domain == "fs") rave = std::make_unique<RaveTable>(setup.domain->feature_count(), c.c_l);
      const BliReport lr =
          run_bli(dag, setup.oracles, BliParams{c.epsilon, c.b, c.max_steps, r.seed, c.init_width}, rave.get());
      r.samples = lr.samples;
      r.node_updates = lr.node_updates;
      r.node_updates_full = lr.node_updates_full;
      r.expansions = lr.expansions;
      r.recommendation = to_string(lr.recommendation);
      r.value_estimate = lr.value_estimate;
      r.n_features = lr.n_features;
      r.stopped = lr.stopped;
      r.wall_time = lr.wall_time;
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, std::ostream* jsonl) {
  if (config.reps == 0) throw InputError("reps must be at least 1");
  const Setup setup = make_setup(config);
  std::vector<RunRecord> records(config.reps);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> small_l0{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.reps; i = next++) records[i] = run_one(config, setup, i, small_l0);
  };
  const std::size_t jobs = std::clamp<std::size_t>(config.jobs, 1, config.reps);
  {
    std::vector<std::jthread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  if (small_l0) std::cerr << "warning: delta exceeds 0.1 |L_0| under the theory exploration function\n";
  if (jsonl) {
    for (const auto& r : records) *jsonl << to_json_line(r) << '\n';
  }
  return records;
}

std::vector<SweepRow> sweep_b(const ExperimentConfig& config, const std::vector<double>& b_values,
                              std::ostream* jsonl) {
  std::vector<SweepRow> rows;
  for (double b : b_values) {
    ExperimentConfig c = config;
    c.b = b;
    const auto records = run_experiment(c, jsonl);
    ExperimentConfig tc = c;
    rows.push_back({b, summarize(records), run_theory(tc).tau_max});
  }
  return rows;
}

TheoryReport run_theory(const ExperimentConfig& c) {
  TheoryReport out;
  std::optional<double> gap;
  if (c.domain == "lattice" || c.domain == "tree") {
    const SyntheticScores scores = c.scores.empty() ? benchmark_scores() : SyntheticScores{c.scores};
    std::unique_ptr<Domain> domain;
    if (c.domain == "lattice") {
      domain = std::make_unique<FixedDepthLattice>(scores.score.size(), c.leaf_depth);
    } else {
      domain = std::make_unique<FixedDepthTree>(scores.score.size(), c.leaf_depth);
    }
    const ValueMap values = compute_values(*domain, [&](const StateKey& s) { return sigmoid_mean(scores, s); });
    const Gaps g = gaps(*domain, values);
    out.leaf_count = g.leaves.size();
    out.delta_star = g.delta_star;
    out.h = h_eps(g, c.epsilon);
    out.tau_ub = tau_ub_thm1(*out.h, out.leaf_count, c.delta);
    out.second_term = thm1_second_term(g, c.epsilon);
    gap = std::max(g.delta_star.value_or(0.0), c.epsilon);
  } else if (c.domain == "flat") {
    // Every value is 0.5: no gap beyond epsilon.
    gap = c.epsilon;
  } else {
    throw InputError("theory supports the lattice, tree and flat domains");
  }
  if (c.b > 0.0 && gap && *gap > 0.0) out.tau_max = tau_max_thm2(c.delta, *gap, c.b);
  return out;
}

void print_theory(std::ostream& out, const TheoryReport& r) {
  const auto flags = out.flags();
  out << std::setprecision(12);
  auto line = [&](const char* label, const std::optional<double>& v) {
    out << std::left << std::setw(14) << label << std::right;
    if (v) {
      out << *v << '\n';
    } else {
      out << "undefined\n";
    }
  };
  if (r.leaf_count > 0) {
    out << std::left << std::setw(14) << "leaves" << std::right << r.leaf_count << '\n';
    line("delta_star", r.delta_star);
    line("H_eps", r.h);
    line("tau_ub", r.tau_ub);
    if (r.tau_ub) out << std::left << std::setw(14) << "tau_ub_floor" << std::right << std::floor(*r.tau_ub) << '\n';
    line("second_term", r.second_term);
  }
  if (r.tau_max) {
    line("tau_max", r.tau_max->exact);
    line("tau_max_cf", r.tau_max->closed_form);
  }
  out.flags(flags);
}

}  // namespace dagbandit
