#include "qlink/util/curve_fit.hpp"

#include <cmath>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "qlink/error.hpp"

namespace qlink {

namespace {

struct Residual {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const FitModel* model;
  const std::vector<double>* xs;
  const std::vector<double>* ys;
  int n_params;

  int inputs() const { return n_params; }
  int values() const { return static_cast<int>(xs->size()); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
    for (std::size_t i = 0; i < xs->size(); ++i) r[i] = (*model)((*xs)[i], p) - (*ys)[i];
    return 0;
  }
};

}  // namespace

FitResult curve_fit(const FitModel& model, const std::vector<double>& xs,
                    const std::vector<double>& ys, const Eigen::VectorXd& p0) {
  const auto np = static_cast<int>(p0.size());
  if (xs.size() != ys.size()) throw DimensionMismatch("curve_fit: xs and ys differ in length");
  if (static_cast<int>(xs.size()) <= np) {
    throw InvalidParameter("curve_fit: need more points than parameters");
  }

  Residual functor{&model, &xs, &ys, np};
  Eigen::NumericalDiff<Residual> numdiff(functor);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Residual>> lm(numdiff);
  lm.parameters.maxfev = 4000;
  lm.parameters.xtol = 1e-12;
  lm.parameters.ftol = 1e-14;

  FitResult out;
  out.params = p0;
  const auto status = lm.minimize(out.params);

  Eigen::VectorXd r(xs.size());
  functor(out.params, r);
  const double dof = static_cast<double>(xs.size()) - np;
  out.residual_rms = std::sqrt(r.squaredNorm() / static_cast<double>(xs.size()));
  if (!out.params.allFinite() || !std::isfinite(out.residual_rms) ||
      status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters) {
    throw FitError("curve_fit: solver diverged", out.residual_rms);
  }
  out.converged = status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation;

  Eigen::MatrixXd J(xs.size(), np);
  numdiff.df(out.params, J);
  const Eigen::MatrixXd JtJ = J.transpose() * J;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(JtJ);
  out.errors = Eigen::VectorXd::Constant(np, std::numeric_limits<double>::infinity());
  if (lu.isInvertible()) {
    const Eigen::MatrixXd cov = lu.inverse() * (r.squaredNorm() / dof);
    for (int k = 0; k < np; ++k) out.errors[k] = std::sqrt(std::max(0.0, cov(k, k)));
  }
  return out;
}

Eigen::VectorXd polyfit(const std::vector<double>& xs, const std::vector<double>& ys, int degree) {
  if (xs.size() != ys.size()) throw DimensionMismatch("polyfit: xs and ys differ in length");
  if (degree < 0 || static_cast<int>(xs.size()) <= degree) {
    throw InvalidParameter("polyfit: need more points than the degree");
  }
  Eigen::MatrixXd V(xs.size(), degree + 1);
  Eigen::VectorXd y(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double p = 1.0;
    for (int k = 0; k <= degree; ++k, p *= xs[i]) V(i, k) = p;
    y[i] = ys[i];
  }
  return V.colPivHouseholderQr().solve(y);
}

}  // namespace qlink
