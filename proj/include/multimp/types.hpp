#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace multimp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

/// Base class for recoverable statistical failures. The simulation harness
/// catches these per replication; everything else is a programming error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class SingularDesign : public Error {
 public:
  using Error::Error;
};

class TooFewObserved : public Error {
 public:
  using Error::Error;
};

class TooFewDatasets : public Error {
 public:
  using Error::Error;
};

class EmptyColumn : public Error {
 public:
  using Error::Error;
};

class UnreachableTarget : public Error {
 public:
  using Error::Error;
};

class MissingCellRead : public Error {
 public:
  using Error::Error;
};

}  // namespace multimp
