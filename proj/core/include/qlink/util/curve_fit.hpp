#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace qlink {

struct FitResult {
  Eigen::VectorXd params;
  Eigen::VectorXd errors;  // 1-sigma from the residual-scaled covariance
  double residual_rms = 0.0;
  bool converged = false;
};

using FitModel = std::function<double(double x, const Eigen::VectorXd& p)>;

/// Least-squares fit of model(x, p) to (xs, ys) with Levenberg-Marquardt and
/// forward-difference Jacobians. Throws FitError when the solver fails or the
/// result is not finite.
FitResult curve_fit(const FitModel& model, const std::vector<double>& xs,
                    const std::vector<double>& ys, const Eigen::VectorXd& p0);

/// Ordinary polynomial least squares, coefficients lowest order first.
Eigen::VectorXd polyfit(const std::vector<double>& xs, const std::vector<double>& ys, int degree);

}  // namespace qlink
