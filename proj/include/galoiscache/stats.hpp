#pragma once

#include <cstdint>
#include <vector>

namespace galoiscache {

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// 95% Wilson score interval for a binomial proportion. [0, 1] when trials == 0.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

// Standard deviation of the sample proportion of n Bernoulli(p) draws.
double binomial_sd(double p, std::uint64_t n);

struct ChiSquareResult {
  double statistic = 0.0;
  unsigned dof = 0;
  double p_value = 1.0;
};

// Pearson test of independence on a rows x cols contingency table. Columns
// whose total is zero are dropped before the test.
ChiSquareResult chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table);

}  // namespace galoiscache
