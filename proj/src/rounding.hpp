#pragma once

#include <algorithm>
#include <cmath>

namespace petdse::detail {

// Ceiling that ignores floating noise just above an integer, so that
// 45 kV / 2 kV lands on 23 and 60 kV / 5 kV on 12 rather than 13.
inline int ceil_count(double x)
{
    return static_cast<int>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x))));
}

}  // namespace petdse::detail
