#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace ttsw {

using Index = Eigen::Index;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = DenseMatrix<double>;
using VectorXd = DenseVector<double>;

// Cell-average field on a uniform grid; row index is x, column index is y.
using DenseField = MatrixXd;

// Ghost-cell width shared by every scheme (the widest stencil needs 3).
inline constexpr Index kGhost = 3;

enum class Axis { X, Y };

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct StateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double achieved_residual, int iters)
      : std::runtime_error(what), residual(achieved_residual), iterations(iters) {}
  double residual;
  int iterations;
};

struct EvaluationError : std::runtime_error {
  EvaluationError(const std::string& what, Index i, Index j)
      : std::runtime_error(what), row(i), col(j) {}
  Index row;
  Index col;
};

}  // namespace ttsw
