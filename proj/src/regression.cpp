#include "excesslex/regression.hpp"

#include <Eigen/Dense>

namespace excesslex {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  LinearFit fit;
  if (m == 0) return fit;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    fit.sse += r * r;
  }
  return fit;
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  std::span<const double> y, double* sse) {
  const Eigen::Index m = static_cast<Eigen::Index>(y.size());
  const Eigen::Index k = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd a(m, k);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    b(i) = y[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
  if (sse) *sse = (a * coef - b).squaredNorm();
  return std::vector<double>(coef.data(), coef.data() + k);
}

}  // namespace excesslex
