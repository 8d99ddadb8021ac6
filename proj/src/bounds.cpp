#include "dagbandit/bounds.hpp"

#include <cmath>
#include <numbers>

#include "dagbandit/errors.hpp"

namespace dagbandit {

double beta_theory(std::uint64_t n, std::uint64_t leaf_count, double delta) {
  if (n < 1) throw InputError("beta_theory: n must be >= 1");
  if (leaf_count < 1) throw InputError("beta_theory: leaf count must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("beta_theory: delta must lie in (0,1)");
  const double ratio = static_cast<double>(leaf_count) / delta;
  if (!(ratio > std::numbers::e)) throw InputError("beta_theory: |L|/delta must exceed e");
  const double log_ratio = std::log(ratio);
  return log_ratio + 3.0 * std::log(log_ratio) +
         1.5 * std::log(std::log(static_cast<double>(n)) + 1.0);
}

double beta_practical(std::uint64_t n, double delta) {
  if (n < 1) throw InputError("beta_practical: n must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("beta_practical: delta must lie in (0,1)");
  // ln(e N) = 1 + ln N
  return std::log((1.0 + std::log(static_cast<double>(n))) / delta);
}

Interval leaf_interval(double mean, std::uint64_t n, double beta) {
  if (n < 1) throw InputError("leaf_interval: n must be >= 1");
  if (beta < 0.0) throw InputError("leaf_interval: beta must be >= 0");
  const double h = std::sqrt(beta / (2.0 * static_cast<double>(n)));
  return {mean - h, mean + h};
}

ExplorationFn::ExplorationFn(Kind kind, double delta) : kind_(kind), delta_(delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0,1)");
}

ExplorationFn ExplorationFn::parse(const std::string& name, double delta) {
  if (name == "theory") return theory(delta);
  if (name == "practical") return practical(delta);
  throw InputError("unknown exploration function '" + name + "' (expected theory|practical)");
}

double ExplorationFn::operator()(std::uint64_t n, std::uint64_t leaf_count) const {
  return kind_ == Kind::kTheory ? beta_theory(n, leaf_count, delta_) : beta_practical(n, delta_);
}

}  // namespace dagbandit
