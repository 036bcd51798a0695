#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "mlbase/error.hpp"

namespace mlbase {

struct five_number_summary {
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double max = 0;

  friend bool operator==(const five_number_summary&, const five_number_summary&) = default;
};

namespace detail {

// Quantile by linear interpolation between closest ranks (the "type 7"
// rule of R/numpy). Input must be sorted and non-empty.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double rank = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(rank);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

/// Min, quartiles, and max of a sample.
inline five_number_summary five_numbers(std::vector<double> values) {
  if (values.empty()) throw argument_error("five_numbers: empty sample");
  std::sort(values.begin(), values.end());
  return five_number_summary{
      values.front(),
      detail::quantile_sorted(values, 0.25),
      detail::quantile_sorted(values, 0.50),
      detail::quantile_sorted(values, 0.75),
      values.back(),
  };
}

}  // namespace mlbase
