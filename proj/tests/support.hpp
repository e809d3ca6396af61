#pragma once

#include <random>

#include "ttsw/tt.hpp"
#include "ttsw/types.hpp"

namespace ttsw::testing {

inline MatrixXd random_matrix(Index rows, Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> dist(0.0, 1.0);
  MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = dist(gen);
  return m;
}

inline TTMatrix<double> random_tt(Index rows, Index cols, Index rank,
                                  std::mt19937_64& gen) {
  return TTMatrix<double>(random_matrix(rows, rank, gen), random_matrix(rank, cols, gen));
}

// Orthonormal columns via QR of a Gaussian matrix.
inline MatrixXd random_orthonormal(Index rows, Index cols, std::mt19937_64& gen) {
  MatrixXd a = random_matrix(rows, cols, gen);
  Eigen::HouseholderQR<MatrixXd> qr(a);
  return qr.householderQ() * MatrixXd::Identity(rows, cols);
}

inline double rel_error(const MatrixXd& approx, const MatrixXd& exact) {
  const double scale = exact.norm();
  return scale == 0 ? approx.norm() : (approx - exact).norm() / scale;
}

// Exact cell average of x^degree over [center - h/2, center + h/2].
inline double monomial_cell_average(int degree, double center, double h) {
  const double a = center - 0.5 * h;
  const double b = center + 0.5 * h;
  return (std::pow(b, degree + 1) - std::pow(a, degree + 1)) / ((degree + 1) * h);
}

}  // namespace ttsw::testing
