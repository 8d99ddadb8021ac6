#include "dagbandit/fuse.hpp"

#include <chrono>
#include <limits>
#include <unordered_map>
#include <vector>

#include "dagbandit/bai.hpp"
#include "dagbandit/errors.hpp"
#include "dagbandit/rave.hpp"

namespace dagbandit {

namespace {

struct FuseNode {
  std::uint64_t visits = 0;
  double reward_sum = 0.0;
  std::vector<StateKey> arms;  // in the order they were opened

  double average() const { return visits == 0 ? RaveTable::kNeutral : reward_sum / static_cast<double>(visits); }
};

}  // namespace

BliReport fuse_run(const Domain& domain, const OracleSpec& oracles, const FuseParams& params) {
  if (!(params.widening >= 0.0 && params.widening <= 1.0)) throw InputError("widening must lie in [0,1]");
  const auto start = std::chrono::steady_clock::now();
  Rng rng(params.seed);
  RaveTable rave(domain.feature_count(), params.c_l);
  std::unordered_map<StateKey, FuseNode, StateKeyHash> table;
  const StateKey root = domain.root();
  table[root];
  rave.track(root);

  // The stopping arm is scored by the node's own average reward: the value
  // of the sets that pass through it.
  auto arm_score = [&](const StateKey& node, const StateKey& child) {
    const Feature f = domain.added_move(node, child);
    if (f == domain.stop_move()) return table[node].average();
    return rave.score(node, f);
  };

  BliReport report;
  std::vector<StateKey> path;
  for (std::uint64_t it = 0; it < params.budget; ++it) {
    path.assign(1, root);
    for (;;) {
      const StateKey cur = path.back();
      if (domain.is_terminal(cur)) break;
      FuseNode& node = table[cur];
      const auto allowed = floor_pow(node.visits + 1, params.widening);
      if (node.arms.size() < allowed && node.arms.size() < domain.child_count(cur)) {
        std::vector<StateKey> fresh;
        for (auto& c : domain.children(cur)) {
          if (std::find(node.arms.begin(), node.arms.end(), c) == node.arms.end()) fresh.push_back(std::move(c));
        }
        std::size_t pick = 0;
        double best = -std::numeric_limits<double>::infinity();
        std::size_t ties = 0;
        for (std::size_t i = 0; i < fresh.size(); ++i) {
          const double s = arm_score(cur, fresh[i]);
          if (s > best) {
            best = s;
            pick = i;
            ties = 1;
          } else if (s == best) {
            ++ties;
            std::uniform_int_distribution<std::size_t> d(0, ties - 1);
            if (d(rng) == 0) pick = i;
          }
        }
        table[cur].arms.push_back(fresh[pick]);
      }
      const FuseNode& parent = table[cur];
      const double log_t = std::log(static_cast<double>(std::max<std::uint64_t>(parent.visits, 1)));
      const StateKey* chosen = nullptr;
      double chosen_ucb = -std::numeric_limits<double>::infinity();
      for (const StateKey& arm : parent.arms) {
        auto found = table.find(arm);
        const std::uint64_t n = found == table.end() ? 0 : found->second.visits;
        const double ucb = n == 0 ? std::numeric_limits<double>::infinity()
                                  : found->second.average() + params.ucb_c * std::sqrt(log_t / static_cast<double>(n));
        if (ucb > chosen_ucb) {
          chosen_ucb = ucb;
          chosen = &arm;
        }
      }
      const StateKey next = *chosen;
      const bool is_new = !table.contains(next) || table[next].visits == 0;
      if (!table.contains(next)) {
        table[next];
        ++report.expansions;
        if (!domain.is_terminal(next)) rave.track(next);
      }
      path.push_back(next);
      if (is_new) break;
    }

    const Evaluation eval = oracles.intermediate(path.back(), rng);
    for (const StateKey& key : path) {
      FuseNode& node = table[key];
      ++node.visits;
      node.reward_sum += eval.value;
    }
    rave.record(eval.evaluated, eval.value);
  }

  // Recommendation: highest average reward at each stage.
  StateKey cur = root;
  while (!domain.is_terminal(cur)) {
    auto found = table.find(cur);
    if (found == table.end()) break;
    const StateKey* best = nullptr;
    double best_avg = -1.0;
    for (const StateKey& arm : found->second.arms) {
      auto a = table.find(arm);
      if (a == table.end() || a->second.visits == 0) continue;
      if (a->second.average() > best_avg) {
        best_avg = a->second.average();
        best = &arm;
      }
    }
    if (!best) break;
    cur = *best;
  }
  if (!domain.is_terminal(cur)) cur = with_stop(cur);
  std::sort(cur.items.begin(), cur.items.end());

  report.recommendation = cur;
  report.value_estimate = oracles.terminal(cur, rng).value;
  report.n_features = cur.items.size();
  report.samples = params.budget;
  report.stopped = true;
  report.stages = cur.size();
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace dagbandit
