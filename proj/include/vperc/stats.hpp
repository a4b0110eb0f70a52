#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace vperc {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Two-sided standard normal quantile for the given confidence (0.99 -> 2.5758).
double normal_z(double confidence);

/// Wilson score interval for k successes out of n.
Interval wilson(std::size_t k, std::size_t n, double confidence = 0.99);

/// Weighted isotonic (nondecreasing) regression by pool-adjacent-violators.
std::vector<double> isotonic(const std::vector<double>& y, const std::vector<double>& w);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares of y on x; slope_se is the usual homoscedastic
/// standard error (zero with fewer than three points).
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// Pearson correlation of paired indicators with a standard error that
/// accounts for repeated units: pairs sharing the same `group` id are treated
/// as one cluster when estimating the variance of the covariance.
struct Correlation {
  double r = 0.0;
  double se = 0.0;
  std::size_t pairs = 0;
};
Correlation clustered_correlation(const std::vector<double>& a, const std::vector<double>& b,
                                  const std::vector<std::uint64_t>& group);

/// Linear interpolation of the p at which a nondecreasing curve first reaches
/// `level`; clamps to the grid ends.
double crossing_point(const std::vector<double>& p, const std::vector<double>& f, double level);

}  // namespace vperc
