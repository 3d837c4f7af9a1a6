#pragma once

#include <cmath>

namespace corrdesign {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const {
    const double slack = 1e-12 * (1.0 + std::abs(lo) + std::abs(hi));
    return x >= lo - slack && x <= hi + slack;
  }
  bool operator==(const Interval&) const = default;
};

}  // namespace corrdesign
