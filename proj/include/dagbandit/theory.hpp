#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dagbandit/domain.hpp"
#include "dagbandit/state_key.hpp"

namespace dagbandit {

/// Exact node values of a finite domain: leaf means, and max over children above.
struct ValueMap {
  std::vector<StateKey> states;  // parents before children
  std::unordered_map<StateKey, double, StateKeyHash> value;

  double at(const StateKey& key) const { return value.at(key); }
};

ValueMap compute_values(const Domain& domain, const std::function<double(const StateKey&)>& leaf_mean);

struct LeafGap {
  StateKey leaf;
  double gap;  // Delta_l
};

struct Gaps {
  /// V(s*) - V(s*_2) over root children; empty when every child ties with the root.
  std::optional<double> delta_star;
  std::vector<LeafGap> leaves;
};

/// Delta V(s) = max over parents p of |V(s) - V(p)|.
double value_step(const Domain& domain, const ValueMap& values, const StateKey& state);

/// Delta_l = max of Delta V over the leaf and its ancestors, root excluded.
Gaps gaps(const Domain& domain, const ValueMap& values);

/// Delta_l maximized over root-to-leaf paths of the per-path step maximum.
double path_gap(const Domain& domain, const ValueMap& values, const StateKey& leaf);

/// sum over leaves of 1 / max(Delta_l^2, Delta*^2, eps^2).
double h_eps(const Gaps& gaps, double epsilon);

/// First term of the fixed-DAG bound: 8 H ln(|L| / delta).
double tau_ub_thm1(double h, std::size_t leaf_count, double delta);

/// sum over leaves of 16 / D^2 ln ln(1 / D^2), D = max(Delta_l, Delta*, eps).
/// Empty when some ln ln argument is not above 1.
std::optional<double> thm1_second_term(const Gaps& gaps, double epsilon);

struct TauMax {
  double exact;        // via W_{-1}
  double closed_form;  // with W_{-1} replaced by its upper bound
  double w_argument;
  double u;
};

/// tau_max = [d^{(b-1)/b} exp(W_{-1}(gap^2 (b-1) / (8 b d^{(b-1)/b})))]^{1/(b-1)}.
/// Empty when b is outside (0,1) or the W argument is outside [-1/e, 0).
std::optional<TauMax> tau_max_thm2(double delta, double gap, double b);

}  // namespace dagbandit
