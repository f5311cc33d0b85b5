#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace pgmult {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IVec = Eigen::VectorXi;
using IMat = Eigen::MatrixXi;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameter domain (negative shape, nonpositive concentration, ...).
struct ParameterError : Error {
  using Error::Error;
};

// Simplex boundary hit where an interior point is required.
struct BoundaryError : Error {
  using Error::Error;
};

// Cholesky or related factorization failure; message names module and op.
struct LinAlgError : Error {
  using Error::Error;
};

struct DataError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace pgmult
