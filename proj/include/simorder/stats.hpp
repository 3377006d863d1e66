#pragma once

#include <span>
#include <vector>

namespace simorder {

/// 1-based fractional ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Product-moment correlation. Throws std::invalid_argument on length mismatch
/// or fewer than 2 points, UndefinedCorrelation if either side has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace simorder
