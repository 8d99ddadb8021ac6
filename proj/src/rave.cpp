#include "dagbandit/rave.hpp"

#include <algorithm>

#include "dagbandit/errors.hpp"

namespace dagbandit {

RaveTable::RaveTable(std::size_t n_features, double c_l) : c_l_(c_l), global_(n_features) {
  if (!(c_l >= 0.0)) throw InputError("c_l must be nonnegative");
}

StateKey RaveTable::strip(const StateKey& key) {
  StateKey out{key.items, false};
  std::sort(out.items.begin(), out.items.end());
  return out;
}

void RaveTable::track(const StateKey& node) {
  local_.try_emplace(strip(node), global_.size());
}

bool RaveTable::tracked(const StateKey& node) const { return local_.contains(strip(node)); }

void RaveTable::record(const StateKey& evaluated, double value) {
  if (!(value >= 0.0 && value <= 1.0)) throw InputError("RAVE values must lie in [0,1]");
  const StateKey set = strip(evaluated);
  for (Feature f : set.items) global_.at(f).add(value);

  auto update = [&](const StateKey& node, std::vector<Accumulator>& acc) {
    for (Feature f : set.items) {
      if (!std::binary_search(node.items.begin(), node.items.end(), f)) acc[f].add(value);
    }
  };

  const std::size_t n = set.items.size();
  // Enumerate the subsets of the evaluated set when that is cheaper than
  // scanning every tracked node.
  if (n < 63 && (std::uint64_t{1} << n) <= local_.size()) {
    const std::uint64_t full = std::uint64_t{1} << n;
    StateKey sub;
    for (std::uint64_t mask = 0; mask + 1 < full; ++mask) {
      sub.items.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) sub.items.push_back(set.items[i]);
      }
      if (auto it = local_.find(sub); it != local_.end()) update(it->first, it->second);
    }
  } else {
    for (auto& [node, acc] : local_) {
      if (node.items.size() < n &&
          std::includes(set.items.begin(), set.items.end(), node.items.begin(), node.items.end())) {
        update(node, acc);
      }
    }
  }
}

Accumulator RaveTable::local(const StateKey& node, Feature f) const {
  auto it = local_.find(strip(node));
  if (it == local_.end() || f >= it->second.size()) return {};
  return it->second[f];
}

double RaveTable::global_score(Feature f) const {
  const Accumulator& g = global_.at(f);
  return g.count == 0 ? kNeutral : g.mean();
}

double RaveTable::score(const StateKey& node, Feature f) const {
  if (f == global_.size()) return kStopScore;
  if (f > global_.size()) throw InputError("feature index out of range");
  const double g = global_score(f);
  const Accumulator l = local(node, f);
  if (l.count == 0) return g;
  const double beta = c_l_ / (c_l_ + static_cast<double>(l.count));
  return (1.0 - beta) * l.mean() + beta * g;
}

}  // namespace dagbandit
