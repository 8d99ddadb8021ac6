#pragma once

namespace dagbandit {

/// Lower real branch of the Lambert W function: the w <= -1 with
/// w e^w = y, for y in [-1/e, 0). Throws InputError outside that range.
double lambert_wm1(double y);

/// Upper bound -1 - sqrt(2u) - 2u/3 on W_{-1}(-e^{-u-1}), valid for u > 0.
double chatzigeorgiou_bound(double u);

}  // namespace dagbandit
