#pragma once

#include <cstddef>
#include <memory>

#include "dagbandit/dataset.hpp"
#include "dagbandit/oracle.hpp"
#include "dagbandit/state_key.hpp"

namespace dagbandit {

/// Completes `state` into a terminal set: while features remain, stop with
/// probability 1 - q^|F|, otherwise add a uniformly chosen unused feature.
/// The result is sorted and carries the stopping move.
StateKey intermediate_rollout(const StateKey& state, double q, std::size_t n_features, Rng& rng);

/// Evaluation parameters of the feature-selection oracles.
struct FsOracleParams {
  std::size_t m = 50;  // subsample size for intermediate calls
  std::size_t k = 5;   // neighbors
  double q = 0.9;      // rollout continuation
};

/// k-NN AUC of F on the full dataset. A set with no features scores 0.
double terminal_fs_sample(const StateKey& state, const Dataset& data, std::size_t k);

/// One rollout from F, then k-NN AUC of the endpoint on an m-subsample.
Evaluation intermediate_fs_sample(const StateKey& state, const FsOracleParams& params, const Dataset& data,
                                  Rng& rng);

/// Terminal and intermediate feature-selection oracles over a shared dataset.
OracleSpec fs_oracle(std::shared_ptr<const Dataset> data, FsOracleParams params);

}  // namespace dagbandit
