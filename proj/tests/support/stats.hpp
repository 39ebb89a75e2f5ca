#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pte::testing {

inline double chi_square_stat(const std::vector<std::uint64_t>& counts,
                              const std::vector<double>& probs, std::uint64_t draws) {
  double stat = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    double expected = probs[i] * static_cast<double>(draws);
    double diff = static_cast<double>(counts[i]) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

/// Upper 0.01 quantiles of the chi-square distribution; a goodness-of-fit
/// statistic below the value for k-1 degrees of freedom means p > 0.01.
inline double chi_square_critical_01(int df) {
  static const double table[] = {6.634897, 9.210340, 11.344867, 13.276704, 15.086272,
                                 16.811894, 18.475307, 20.090235, 21.665994};
  if (df < 1 || df > 9) throw std::invalid_argument("chi_square_critical_01: df out of table");
  return table[df - 1];
}

}  // namespace pte::testing
