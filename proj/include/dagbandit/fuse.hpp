#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "dagbandit/bli.hpp"
#include "dagbandit/domain.hpp"
#include "dagbandit/oracle.hpp"

namespace dagbandit {

/// UCT baseline for feature selection. Reference implementation, not a
/// reproduction of any particular published code.
struct FuseParams {
  std::uint64_t budget = 0;     // iterations
  double widening = 0.5;        // a node with T visits may hold floor((T+1)^w) arms
  double ucb_c = std::sqrt(2.0);
  double c_l = 100.0;
  std::uint64_t seed = 0;
};

/// Searches from the root with a transposition table, UCB1 over the current
/// arms, RAVE-chosen new arms, one intermediate-oracle reward per iteration
/// and update-descent backpropagation. The recommendation follows the
/// highest-average arm from the root and is scored by the terminal oracle.
BliReport fuse_run(const Domain& domain, const OracleSpec& oracles, const FuseParams& params);

}  // namespace dagbandit
