#include "kflow/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace kflow {

namespace {

FitResult linear_fit(const std::vector<std::pair<double, double>>& xy,
                     const std::vector<std::pair<double, double>>& raw) {
  const auto n = static_cast<double>(xy.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : xy) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("degenerate abscissae in fit");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;

  const double ymean = sy / n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& [x, y] : xy) {
    const double e = y - (slope * x + intercept);
    ss_res += e * e;
    ss_tot += (y - ymean) * (y - ymean);
  }
  FitResult fit;
  fit.rate = slope;
  fit.constant = std::exp(intercept);
  fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  fit.points = raw;
  return fit;
}

}  // namespace

FitResult fit_power(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("fit needs >= 3 points");
  std::vector<std::pair<double, double>> xy;
  xy.reserve(points.size());
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0))
      throw std::invalid_argument("power fit needs positive data");
    xy.emplace_back(std::log(x), std::log(y));
  }
  return linear_fit(xy, points);
}

FitResult fit_exponential(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("fit needs >= 3 points");
  std::vector<std::pair<double, double>> xy;
  xy.reserve(points.size());
  for (const auto& [x, y] : points) {
    if (!(y > 0.0))
      throw std::invalid_argument("exponential fit needs positive data");
    xy.emplace_back(x, std::log(y));
  }
  return linear_fit(xy, points);
}

}  // namespace kflow
