#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ternary_qec/errors.hpp"

namespace tqec::stats {

struct FitResult {
  std::vector<double> coefficients;  // ascending degree
  double r_squared = 0.0;

  double operator()(double x) const {
    double y = 0.0;
    for (std::size_t k = coefficients.size(); k-- > 0;) y = y * x + coefficients[k];
    return y;
  }
};

/// Ordinary least squares polynomial fit (degree 1 or 2) by column-pivoted QR.
inline FitResult fit_polynomial(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  if (degree != 1 && degree != 2) throw ArgumentError("degree must be 1 or 2");
  if (x.size() != y.size()) throw ArgumentError("x and y differ in length");
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < degree + 1)
    throw ArgumentError("need at least " + std::to_string(degree + 1) + " points for degree " +
                        std::to_string(degree));

  Eigen::MatrixXd a(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int k = 0; k <= degree; ++k, p *= x[static_cast<std::size_t>(i)]) a(i, k) = p;
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < degree + 1) throw ArgumentError("singular design matrix");
  const Eigen::VectorXd c = qr.solve(b);

  FitResult fit;
  fit.coefficients.assign(c.data(), c.data() + c.size());
  const double ss_res = (a * c - b).squaredNorm();
  const double ss_tot = (b.array() - b.mean()).square().sum();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace tqec::stats
