#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qlink/util/rng.hpp"

// Hand-rolled random generators for the property tests and acceptance checks.

namespace qlink::prop {

using cdouble = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>()(rng_); }
  cdouble complex_normal() { return {normal(), normal()}; }

  Vector state(int d) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = complex_normal();
    return v.normalized();
  }

  Matrix ginibre(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = complex_normal();
    }
    return m;
  }

  /// Random mixed state of the given rank.
  Matrix density(int d, int rank) {
    const Matrix g = ginibre(d, rank);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
  }

  Matrix unitary(int d) {
    Eigen::HouseholderQR<Matrix> qr(ginibre(d, d));
    return qr.householderQ() * Matrix::Identity(d, d);
  }

  /// k Kraus operators from a random isometry d -> k d.
  std::vector<Matrix> kraus(int d, int k) {
    Eigen::HouseholderQR<Matrix> qr(ginibre(k * d, d));
    const Matrix V = qr.householderQ() * Matrix::Identity(k * d, d);
    std::vector<Matrix> out;
    for (int i = 0; i < k; ++i) out.push_back(V.block(i * d, 0, d, d));
    return out;
  }

  /// Column-stochastic matrix with diagonal in [lo, 1].
  Eigen::MatrixXd confusion(int d, double lo) {
    Eigen::MatrixXd c(d, d);
    for (int j = 0; j < d; ++j) {
      const double diag = uniform(lo, 1.0);
      double sum = 0.0;
      for (int i = 0; i < d; ++i) {
        c(i, j) = i == j ? 0.0 : uniform(0.0, 1.0);
        sum += c(i, j);
      }
      for (int i = 0; i < d; ++i) c(i, j) = i == j ? diag : c(i, j) / sum * (1.0 - diag);
    }
    return c;
  }

  Rng& rng() { return rng_; }

 private:
  Rng rng_;
};

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qlink::prop
