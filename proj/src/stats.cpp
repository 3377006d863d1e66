#include "simorder/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "simorder/error.hpp"

namespace simorder {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("correlation inputs differ in length (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw std::invalid_argument("correlation needs at least 2 points");

  // Single pass co-moment update (Welford).
  double mean_x = 0.0, mean_y = 0.0, m2x = 0.0, m2y = 0.0, cxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    const double w = (n - 1.0) / n;  // symmetric in x and y
    m2x += w * (dx * dx);
    m2y += w * (dy * dy);
    cxy += w * (dx * dy);
    mean_x += dx / n;
    mean_y += dy / n;
  }
  // A spread at rounding level (e.g. cosines of identical vectors landing one
  // ulp either side of 1) counts as zero variance.
  const double n = static_cast<double>(x.size());
  auto degenerate = [n](double m2, std::span<const double> v) {
    double peak = 0.0;
    for (double e : v) peak = std::max(peak, std::abs(e));
    return !(m2 > 0.0) || std::sqrt(m2 / n) <= 1e-14 * peak;
  };
  if (degenerate(m2x, x) || degenerate(m2y, y)) {
    throw UndefinedCorrelation("correlation undefined: zero variance input");
  }
  const double r = cxy / (std::sqrt(m2x) * std::sqrt(m2y));
  return std::clamp(r, -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("correlation inputs differ in length (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

}  // namespace simorder
