#include "dagbandit/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "dagbandit/errors.hpp"
#include "dagbandit/lambert.hpp"

namespace dagbandit {

ValueMap compute_values(const Domain& domain, const std::function<double(const StateKey&)>& leaf_mean) {
  ValueMap out;
  out.states = enumerate_states(domain);
  for (auto it = out.states.rbegin(); it != out.states.rend(); ++it) {
    const auto kids = domain.children(*it);
    double v;
    if (kids.empty()) {
      v = leaf_mean(*it);
      if (!(v >= 0.0 && v <= 1.0)) throw InputError("leaf means must lie in [0,1]");
    } else {
      v = -1.0;
      for (const auto& c : kids) v = std::max(v, out.value.at(c));
    }
    out.value.emplace(*it, v);
  }
  return out;
}

double value_step(const Domain& domain, const ValueMap& values, const StateKey& state) {
  const double v = values.at(state);
  double step = 0.0;
  for (const auto& p : domain.parents(state)) step = std::max(step, std::abs(v - values.at(p)));
  return step;
}

Gaps gaps(const Domain& domain, const ValueMap& values) {
  Gaps out;
  const StateKey root = domain.root();
  const double v0 = values.at(root);
  std::optional<double> second;
  for (const auto& c : domain.children(root)) {
    const double v = values.at(c);
    if (v == v0) continue;
    if (!second || v > *second) second = v;
  }
  if (second) out.delta_star = v0 - *second;

  // Largest step over ancestors-or-self, filled parents first.
  std::unordered_map<StateKey, double, StateKeyHash> upto;
  for (const auto& s : values.states) {
    if (s == root) {
      upto.emplace(s, 0.0);
      continue;
    }
    double g = value_step(domain, values, s);
    for (const auto& p : domain.parents(s)) g = std::max(g, upto.at(p));
    upto.emplace(s, g);
  }
  for (const auto& s : values.states) {
    if (domain.children(s).empty()) out.leaves.push_back({s, upto.at(s)});
  }
  return out;
}

double path_gap(const Domain& domain, const ValueMap& values, const StateKey& leaf) {
  // Max over paths of max over edges equals max over all edges on any path,
  // i.e. the largest |V(child) - V(parent)| among edges ending at an
  // ancestor-or-self of the leaf.
  const StateKey root = domain.root();
  double best = 0.0;
  std::vector<StateKey> stack{leaf};
  std::unordered_set<StateKey, StateKeyHash> seen{leaf};
  while (!stack.empty()) {
    const StateKey s = stack.back();
    stack.pop_back();
    for (const auto& p : domain.parents(s)) {
      best = std::max(best, std::abs(values.at(s) - values.at(p)));
      if (p != root && seen.insert(p).second) stack.push_back(p);
    }
  }
  return best;
}

namespace {

double bar_gap_sq(const LeafGap& leaf, const Gaps& g, double epsilon) {
  const double ds = g.delta_star.value_or(0.0);
  return std::max({leaf.gap * leaf.gap, ds * ds, epsilon * epsilon});
}

}  // namespace

double h_eps(const Gaps& g, double epsilon) {
  double h = 0.0;
  for (const auto& leaf : g.leaves) {
    const double d2 = bar_gap_sq(leaf, g, epsilon);
    if (d2 <= 0.0) throw InputError("zero gap: H is unbounded");
    h += 1.0 / d2;
  }
  return h;
}

double tau_ub_thm1(double h, std::size_t leaf_count, double delta) {
  return 8.0 * h * std::log(static_cast<double>(leaf_count) / delta);
}

std::optional<double> thm1_second_term(const Gaps& g, double epsilon) {
  double sum = 0.0;
  for (const auto& leaf : g.leaves) {
    const double d2 = bar_gap_sq(leaf, g, epsilon);
    if (d2 <= 0.0) return std::nullopt;
    const double inner = std::log(1.0 / d2);
    if (!(inner > 1.0)) return std::nullopt;
    sum += 16.0 / d2 * std::log(inner);
  }
  return sum;
}

std::optional<TauMax> tau_max_thm2(double delta, double gap, double b) {
  if (!(b > 0.0 && b < 1.0) || !(delta > 0.0 && delta < 1.0) || !(gap > 0.0)) return std::nullopt;
  const double scale = std::pow(delta, (b - 1.0) / b);
  const double arg = gap * gap * (b - 1.0) / (8.0 * b * scale);
  if (!(arg >= -1.0 / std::numbers::e && arg < 0.0)) return std::nullopt;
  TauMax out;
  out.w_argument = arg;
  out.u = std::log(8.0 * b * scale / (gap * gap * (1.0 - b))) - 1.0;
  out.exact = std::pow(scale * std::exp(lambert_wm1(arg)), 1.0 / (b - 1.0));
  out.closed_form = std::pow(scale * std::exp(chatzigeorgiou_bound(out.u)), 1.0 / (b - 1.0));
  return out;
}

}  // namespace dagbandit
