#pragma once

#include <utility>
#include <vector>

namespace kflow {

/// Least-squares slope on transformed data, plus fit quality.
struct FitResult {
  double rate = 0.0;      // slope
  double constant = 0.0;  // multiplicative constant
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // raw (x, y)
};

/// Fit y = constant * x^rate (linear regression of log y on log x).
/// Requires at least 3 points with positive x and y.
FitResult fit_power(const std::vector<std::pair<double, double>>& points);

/// Fit y = constant * exp(rate * x) (linear regression of log y on x).
/// Requires at least 3 points with positive y.
FitResult fit_exponential(const std::vector<std::pair<double, double>>& points);

}  // namespace kflow
