#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace excesslex {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double sse = 0.0;
};

// Ordinary least squares y = intercept + slope * x. With fewer than two
// distinct x values the slope is 0 and the intercept is the mean of y.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Least squares over the given design columns (all of equal length).
// Returns the coefficients and writes the residual sum of squares.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  std::span<const double> y, double* sse = nullptr);

}  // namespace excesslex
