#pragma once

#include <stdexcept>
#include <string>

namespace qlink {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter record violates its invariants.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Inconsistent simulation setup (grid alignment, negative rates, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical method did not converge or lost accuracy.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Requested value exceeds what the hardware model can deliver.
class OutOfRange : public Error {
 public:
  OutOfRange(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class FitError : public Error {
 public:
  FitError(const std::string& what, double residual_rms)
      : Error(what), residual_rms_(residual_rms) {}
  double residual_rms() const { return residual_rms_; }

 private:
  double residual_rms_;
};

/// Tomographic data does not determine the unknown (incomplete settings).
class RankDeficiency : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace qlink
