#include "dagbandit/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "dagbandit/errors.hpp"

namespace dagbandit {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double sigmoid_mean(const SyntheticScores& scores, const StateKey& state) {
  std::vector<Feature> features = state.items;
  std::sort(features.begin(), features.end());
  double sum = 0.0;
  for (Feature f : features) sum += scores.score.at(f);
  return sigmoid(sum);
}

double bernoulli_sample(double mu, Rng& rng) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw InputError("bernoulli mean must lie in [0,1]");
  std::bernoulli_distribution draw(mu);
  return draw(rng) ? 1.0 : 0.0;
}

OracleSpec bernoulli_oracle(std::function<double(const StateKey&)> mean) {
  auto eval = [mean = std::move(mean)](const StateKey& state, Rng& rng) {
    return Evaluation{bernoulli_sample(mean(state), rng), state};
  };
  return OracleSpec{eval, eval, false};
}

OracleSpec sigmoid_bernoulli_oracle(SyntheticScores scores) {
  for (double s : scores.score) {
    if (!std::isfinite(s)) throw InputError("synthetic scores must be finite");
  }
  return bernoulli_oracle([scores = std::move(scores)](const StateKey& state) { return sigmoid_mean(scores, state); });
}

}  // namespace dagbandit
