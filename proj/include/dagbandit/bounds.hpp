#pragma once

#include <cstdint>
#include <string>

namespace dagbandit {

/// Confidence interval on a node value. Stored unclamped.
struct Interval {
  double lower;
  double upper;

  double width() const { return upper - lower; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Bounds given to a leaf that has never been sampled.
inline constexpr Interval kUnvisitedInterval{-1.0, 2.0};

// beta_1 = ln(|L|/d) + 3 ln ln(|L|/d) + 1.5 ln(ln N + 1). Requires |L|/d > e.
double beta_theory(std::uint64_t n, std::uint64_t leaf_count, double delta);

// beta_2 = ln(ln(e N) / d).
double beta_practical(std::uint64_t n, double delta);

/// [mean - h, mean + h] with h = sqrt(beta / (2 n)).
Interval leaf_interval(double mean, std::uint64_t n, double beta);

/// Exploration function selected for a run.
class ExplorationFn {
 public:
  enum class Kind { kTheory, kPractical };

  ExplorationFn(Kind kind, double delta);

  static ExplorationFn theory(double delta) { return {Kind::kTheory, delta}; }
  static ExplorationFn practical(double delta) { return {Kind::kPractical, delta}; }
  /// Parses "theory" or "practical".
  static ExplorationFn parse(const std::string& name, double delta);

  double operator()(std::uint64_t n, std::uint64_t leaf_count) const;

  Kind kind() const { return kind_; }
  double delta() const { return delta_; }
  /// True when the value depends on the current leaf count.
  bool depends_on_leaf_count() const { return kind_ == Kind::kTheory; }
  std::string name() const { return kind_ == Kind::kTheory ? "theory" : "practical"; }

 private:
  Kind kind_;
  double delta_;
};

}  // namespace dagbandit
