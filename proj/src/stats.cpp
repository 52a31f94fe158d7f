#include "galoiscache/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "galoiscache/errors.hpp"

namespace galoiscache {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  // The bounds are exact at the extremes; rounding would otherwise leave them a hair off.
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

double binomial_sd(double p, std::uint64_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

ChiSquareResult chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table) {
  if (table.empty()) throw DomainError("contingency table is empty");
  const std::size_t cols = table.front().size();
  for (const auto& row : table)
    if (row.size() != cols) throw DomainError("contingency table rows differ in length");

  std::vector<double> row_tot(table.size(), 0.0), col_tot(cols, 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < table.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      row_tot[r] += static_cast<double>(table[r][c]);
      col_tot[c] += static_cast<double>(table[r][c]);
      total += static_cast<double>(table[r][c]);
    }

  std::size_t live_rows = 0, live_cols = 0;
  for (double v : row_tot) live_rows += v > 0;
  for (double v : col_tot) live_cols += v > 0;

  ChiSquareResult res;
  if (live_rows < 2 || live_cols < 2) return res;
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (row_tot[r] == 0) continue;
    for (std::size_t c = 0; c < cols; ++c) {
      if (col_tot[c] == 0) continue;
      const double expected = row_tot[r] * col_tot[c] / total;
      const double diff = static_cast<double>(table[r][c]) - expected;
      res.statistic += diff * diff / expected;
    }
  }
  res.dof = static_cast<unsigned>((live_rows - 1) * (live_cols - 1));
  boost::math::chi_squared dist(res.dof);
  res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
  return res;
}

}  // namespace galoiscache
