#pragma once

#include <vector>

namespace chiral {

/// Scalar samples on a time grid, e.g. P_tot(t).
struct TimeSeries {
  std::vector<double> t;
  std::vector<double> value;

  std::size_t size() const noexcept { return t.size(); }
};

}  // namespace chiral
