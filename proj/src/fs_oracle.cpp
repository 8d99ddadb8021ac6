#include "dagbandit/fs_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "dagbandit/errors.hpp"
#include "dagbandit/knn.hpp"

namespace dagbandit {

StateKey intermediate_rollout(const StateKey& state, double q, std::size_t n_features, Rng& rng) {
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("rollout parameter q must lie in [0,1]");
  StateKey out = state;
  std::sort(out.items.begin(), out.items.end());
  if (out.stop) return out;

  std::vector<Feature> unused;
  for (std::size_t f = 0; f < n_features; ++f) {
    if (!std::binary_search(out.items.begin(), out.items.end(), static_cast<Feature>(f))) {
      unused.push_back(static_cast<Feature>(f));
    }
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (!unused.empty()) {
    const double stop_prob = 1.0 - std::pow(q, static_cast<double>(out.items.size()));
    if (unit(rng) < stop_prob) break;
    std::uniform_int_distribution<std::size_t> pick(0, unused.size() - 1);
    const std::size_t i = pick(rng);
    out = with_feature_sorted(out, unused[i]);
    unused[i] = unused.back();
    unused.pop_back();
  }
  out.stop = true;
  return out;
}

double terminal_fs_sample(const StateKey& state, const Dataset& data, std::size_t k) {
  // No features: every example gets the same score and no pair is concordant.
  if (state.items.empty()) return 0.0;
  Rng unused_rng(0);
  return knn_auc(state.items, data.rows, data, k, unused_rng);
}

Evaluation intermediate_fs_sample(const StateKey& state, const FsOracleParams& params, const Dataset& data,
                                  Rng& rng) {
  StateKey done = intermediate_rollout(state, params.q, data.cols, rng);
  if (done.items.empty()) return {0.0, std::move(done)};
  const std::size_t m = std::min(params.m, data.rows);
  const double value = knn_auc(done.items, m, data, params.k, rng);
  return {value, std::move(done)};
}

OracleSpec fs_oracle(std::shared_ptr<const Dataset> data, FsOracleParams params) {
  if (!data) throw InputError("feature-selection oracle needs a dataset");
  data->validate();
  if (params.k == 0 || params.k >= data->rows) throw InputError("k must lie in [1, n-1]");
  if (params.m < 2) throw InputError("subsample size must be at least 2");
  OracleSpec spec;
  spec.terminal = [data, params](const StateKey& state, Rng&) {
    return Evaluation{terminal_fs_sample(state, *data, params.k), state};
  };
  spec.intermediate = [data, params](const StateKey& state, Rng& rng) {
    return intermediate_fs_sample(state, params, *data, rng);
  };
  spec.deterministic_terminal = true;
  return spec;
}

}  // namespace dagbandit
