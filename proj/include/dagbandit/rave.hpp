#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "dagbandit/state_key.hpp"

namespace dagbandit {

/// Running average.
struct Accumulator {
  double sum = 0.0;
  std::uint64_t count = 0;

  void add(double v) {
    sum += v;
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
};

/// Global and node-local RAVE statistics over feature sets.
///
/// g-RAVE_f averages every recorded value whose set contains f. l-RAVE_{F,f}
/// averages the values of recorded sets F_t with F strictly inside F_t and
/// f in F_t, for nodes F registered through track().
class RaveTable {
 public:
  static constexpr double kNeutral = 0.5;
  static constexpr double kStopScore = std::numeric_limits<double>::infinity();

  explicit RaveTable(std::size_t n_features, double c_l = 100.0);

  std::size_t feature_count() const { return global_.size(); }
  double c_l() const { return c_l_; }

  /// Starts local statistics for node F (stopping flag ignored).
  void track(const StateKey& node);
  bool tracked(const StateKey& node) const;
  std::size_t tracked_count() const { return local_.size(); }

  void record(const StateKey& evaluated, double value);

  const Accumulator& global(Feature f) const { return global_.at(f); }
  /// Local accumulator of (F, f); empty if F is untracked.
  Accumulator local(const StateKey& node, Feature f) const;

  /// g-RAVE_f, or the neutral prior if f was never seen.
  double global_score(Feature f) const;
  /// (1 - b) l-RAVE + b g-RAVE with b = c_l / (c_l + t_{F,f}). The stopping
  /// move (f == feature_count()) scores +infinity.
  double score(const StateKey& node, Feature f) const;

 private:
  static StateKey strip(const StateKey& key);

  double c_l_;
  std::vector<Accumulator> global_;
  std::unordered_map<StateKey, std::vector<Accumulator>, StateKeyHash> local_;
};

}  // namespace dagbandit
