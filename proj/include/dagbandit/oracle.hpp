#pragma once

#include <functional>
#include <random>
#include <vector>

#include "dagbandit/state_key.hpp"

namespace dagbandit {

using Rng = std::mt19937_64;

/// One oracle answer. `evaluated` is the state actually scored, which differs
/// from the queried state when the oracle rolls out first.
struct Evaluation {
  double value = 0.0;
  StateKey evaluated;
};

using Evaluator = std::function<Evaluation(const StateKey&, Rng&)>;

/// Leaf evaluators: `terminal` for states in L, `intermediate` for temporary
/// leaves outside L. All values lie in [0,1].
struct OracleSpec {
  Evaluator terminal;
  Evaluator intermediate;
  /// The terminal oracle returns the same value on every call.
  bool deterministic_terminal = false;
};

/// Per-feature scores of the synthetic benchmark.
struct SyntheticScores {
  std::vector<double> score;
};

double sigmoid(double x);

/// sig(sum of scores over the state's features), summed in ascending feature
/// order so that transposed states get bit-identical means.
double sigmoid_mean(const SyntheticScores& scores, const StateKey& state);

/// 1 with probability `mu`, else 0.
double bernoulli_sample(double mu, Rng& rng);

/// Bernoulli(mean(state)) for both terminal and intermediate leaves.
OracleSpec bernoulli_oracle(std::function<double(const StateKey&)> mean);

/// Bernoulli(sigmoid_mean(state)) for both terminal and intermediate leaves.
OracleSpec sigmoid_bernoulli_oracle(SyntheticScores scores);

}  // namespace dagbandit
