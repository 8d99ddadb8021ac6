#include "dagbandit/lambert.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dagbandit/errors.hpp"

namespace dagbandit {

double chatzigeorgiou_bound(double u) { return -1.0 - std::sqrt(2.0 * u) - 2.0 * u / 3.0; }

double lambert_wm1(double y) {
  constexpr double kBranch = -1.0 / std::numbers::e;
  if (!(y >= kBranch && y < 0.0)) throw InputError("W_{-1} is defined on [-1/e, 0)");
  const double log_neg_y = std::log(-y);
  const double u = -log_neg_y - 1.0;
  if (u <= 0.0) return -1.0;

  // Root of f(w) = w + ln(-w) - ln(-y), increasing on w < -1. Log form keeps
  // tiny |y| in range.
  auto f = [&](double w) { return w + std::log(-w) - log_neg_y; };

  // The bound gives f(hi) >= 0; walk down until f changes sign.
  double hi = chatzigeorgiou_bound(u);
  if (f(hi) < 0.0) hi = -1.0;
  double lo = hi;
  for (double step = 1.0; f(lo) > 0.0; step *= 2.0) lo -= step;

  // Safeguarded Newton, seeded at the bound.
  double w = hi;
  for (int it = 0; it < 100; ++it) {
    const double fw = f(w);
    if (fw == 0.0) break;
    if (fw > 0.0) {
      hi = w;
    } else {
      lo = w;
    }
    double next = w - fw / (1.0 + 1.0 / w);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - w) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(w);
    w = next;
    if (done || hi - lo <= std::numeric_limits<double>::epsilon() * std::abs(w)) break;
  }
  return w;
}

}  // namespace dagbandit
