#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dagbandit {

using Feature = std::uint16_t;

/// Canonical identity of a search state.
///
/// `items` holds the moves that led to the state. Set-like domains keep them
/// sorted so that transpositions collapse to one key; sequence domains keep
/// them in play order so that they never do. `stop` marks the virtual
/// stopping move of the feature-selection domain.
struct StateKey {
  std::vector<Feature> items;
  bool stop = false;

  /// Number of moves, counting the stopping move.
  std::size_t size() const { return items.size() + (stop ? 1 : 0); }
  bool empty() const { return items.empty() && !stop; }

  bool contains(Feature f) const {
    return std::find(items.begin(), items.end(), f) != items.end();
  }

  friend bool operator==(const StateKey&, const StateKey&) = default;
  friend auto operator<=>(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& key) const noexcept {
    // FNV-1a over the move list.
    std::uint64_t h = 1469598103934665603ULL;
    for (Feature f : key.items) {
      h ^= static_cast<std::uint64_t>(f) + 1;
      h *= 1099511628211ULL;
    }
    h ^= key.stop ? 0x9e3779b97f4a7c15ULL : 0;
    h *= 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

/// Returns a copy of `key` with `f` inserted in sorted position.
inline StateKey with_feature_sorted(const StateKey& key, Feature f) {
  StateKey out = key;
  out.items.insert(std::upper_bound(out.items.begin(), out.items.end(), f), f);
  return out;
}

inline StateKey with_move_appended(const StateKey& key, Feature f) {
  StateKey out = key;
  out.items.push_back(f);
  return out;
}

inline StateKey with_stop(const StateKey& key) {
  StateKey out = key;
  out.stop = true;
  return out;
}

/// Text form used in dumps and reports, e.g. "{}", "{0,4}", "{2,stop}".
std::string to_string(const StateKey& key);

/// Inverse of to_string.
StateKey parse_state_key(const std::string& text);

}  // namespace dagbandit
