#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <Eigen/Core>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "ttsw/types.hpp"

namespace ttsw {

/// Two-core tensor train of a matrix: X(i,j) = sum_a core_x(i,a) * core_y(a,j).
/// The boundary ranks of the general TT format are unit and kept implicit, so
/// the cores are plain matrices and the single TT rank is their inner dimension.
template <typename Scalar = double>
class TTMatrix {
 public:
  using Matrix = DenseMatrix<Scalar>;

  TTMatrix() : core_x_(Matrix::Zero(1, 1)), core_y_(Matrix::Zero(1, 1)) {}

  TTMatrix(Matrix core_x, Matrix core_y)
      : core_x_(std::move(core_x)), core_y_(std::move(core_y)) {
    if (core_x_.cols() != core_y_.rows())
      throw ShapeError("TTMatrix: core inner dimensions do not match");
    if (core_x_.cols() < 1) throw ShapeError("TTMatrix: rank must be positive");
    if (!core_x_.allFinite() || !core_y_.allFinite())
      throw InputError("TTMatrix: cores contain non-finite entries");
  }

  static TTMatrix zero(Index rows, Index cols) {
    return TTMatrix(Matrix::Zero(rows, 1), Matrix::Zero(1, cols));
  }

  static TTMatrix constant(Index rows, Index cols, Scalar value) {
    return TTMatrix(Matrix::Constant(rows, 1, value), Matrix::Ones(1, cols));
  }

  Index rows() const { return core_x_.rows(); }
  Index cols() const { return core_y_.cols(); }
  Index rank() const { return core_x_.cols(); }

  const Matrix& core_x() const { return core_x_; }
  const Matrix& core_y() const { return core_y_; }

 private:
  Matrix core_x_;  // (rows, rank)
  Matrix core_y_;  // (rank, cols)
};

namespace detail {

/// Smallest kept rank such that the discarded singular-value tail stays below
/// eps * ||sigma||. The tail is kept slightly away from the bound so the
/// relative Frobenius contract survives reconstruction round-off; exact zero
/// singular values are always discarded.
template <typename Scalar>
Index truncation_rank(const DenseVector<Scalar>& sv, double eps) {
  const Index n = sv.size();
  long double total2 = 0;
  for (Index k = 0; k < n; ++k) total2 += static_cast<long double>(sv[k]) * sv[k];
  if (total2 == 0) return 1;
  const long double budget = static_cast<long double>(0.9 * eps) * (0.9 * eps) * total2;
  Index keep = n;
  long double tail2 = 0;
  while (keep > 1) {
    const long double s = sv[keep - 1];
    if (s != 0 && tail2 + s * s > budget) break;
    tail2 += s * s;
    --keep;
  }
  return keep;
}

}  // namespace detail

/// Compress a dense matrix into TT form with ||dense(result) - A||_F <= eps * ||A||_F.
template <typename Derived>
TTMatrix<typename Derived::Scalar> tt_from_full(const Eigen::MatrixBase<Derived>& a,
                                                double eps) {
  using Scalar = typename Derived::Scalar;
  using Matrix = DenseMatrix<Scalar>;
  Matrix A = a.derived();
  if (!A.allFinite()) throw InputError("tt_from_full: non-finite entries");
  if (eps < 0) throw InputError("tt_from_full: eps must be non-negative");
  if (A.norm() == Scalar(0)) return TTMatrix<Scalar>::zero(A.rows(), A.cols());

  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index r = detail::truncation_rank<Scalar>(svd.singularValues(), eps);
  Matrix cx = svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal();
  Matrix cy = svd.matrixV().leftCols(r).transpose();
  return TTMatrix<Scalar>(std::move(cx), std::move(cy));
}

template <typename Scalar>
DenseMatrix<Scalar> to_full(const TTMatrix<Scalar>& x) {
  return x.core_x() * x.core_y();
}

/// Frobenius norm from the core Gram matrices, without densifying.
template <typename Scalar>
Scalar norm_fro(const TTMatrix<Scalar>& x) {
  DenseMatrix<Scalar> gx = x.core_x().transpose() * x.core_x();
  DenseMatrix<Scalar> gy = x.core_y() * x.core_y().transpose();
  const Scalar v = (gx.array() * gy.array()).sum();
  return std::sqrt(std::max(v, Scalar(0)));
}

template <typename Scalar>
Scalar sum_entries(const TTMatrix<Scalar>& x) {
  return x.core_x().colwise().sum() * x.core_y().rowwise().sum();
}

/// TT rounding: orthogonalize the second core (LQ via QR of its transpose),
/// then SVD-truncate the first core folded with the triangular factor.
template <typename Scalar>
TTMatrix<Scalar> round(const TTMatrix<Scalar>& x, double eps) {
  using Matrix = DenseMatrix<Scalar>;
  if (eps < 0) throw InputError("round: eps must be non-negative");
  if (norm_fro(x) == Scalar(0)) return TTMatrix<Scalar>::zero(x.rows(), x.cols());

  const Index r = x.rank();
  const Index q = std::min(x.cols(), r);
  Eigen::HouseholderQR<Matrix> qr(x.core_y().transpose());
  Matrix Q = qr.householderQ() * Matrix::Identity(x.cols(), q);
  Matrix R = qr.matrixQR().topRows(q).template triangularView<Eigen::Upper>();

  Matrix W = x.core_x() * R.transpose();  // ||W||_F == ||X||_F
  Eigen::BDCSVD<Matrix> svd(W, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index keep = detail::truncation_rank<Scalar>(svd.singularValues(), eps);
  Matrix cx = svd.matrixU().leftCols(keep) * svd.singularValues().head(keep).asDiagonal();
  Matrix cy = (Q * svd.matrixV().leftCols(keep)).transpose();
  return TTMatrix<Scalar>(std::move(cx), std::move(cy));
}

namespace detail {

template <typename Scalar>
void check_same_shape(const TTMatrix<Scalar>& x, const TTMatrix<Scalar>& y,
                      const char* where) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw ShapeError(std::string(where) + ": operand shapes do not match");
}

}  // namespace detail

/// Exact sum by block core concatenation; rank is the sum of operand ranks.
template <typename Scalar>
TTMatrix<Scalar> add(const TTMatrix<Scalar>& x, const TTMatrix<Scalar>& y) {
  using Matrix = DenseMatrix<Scalar>;
  detail::check_same_shape(x, y, "add");
  Matrix cx(x.rows(), x.rank() + y.rank());
  cx << x.core_x(), y.core_x();
  Matrix cy(x.rank() + y.rank(), x.cols());
  cy << x.core_y(), y.core_y();
  return TTMatrix<Scalar>(std::move(cx), std::move(cy));
}

template <typename Scalar>
TTMatrix<Scalar> scale(const TTMatrix<Scalar>& x, Scalar a) {
  return TTMatrix<Scalar>(x.core_x() * a, x.core_y());
}

/// Exact elementwise product via row/column-wise Kronecker cores; rank r_x * r_y.
template <typename Scalar>
TTMatrix<Scalar> hadamard(const TTMatrix<Scalar>& x, const TTMatrix<Scalar>& y) {
  using Matrix = DenseMatrix<Scalar>;
  detail::check_same_shape(x, y, "hadamard");
  const Index rx = x.rank(), ry = y.rank();
  Matrix cx(x.rows(), rx * ry);
  Matrix cy(rx * ry, x.cols());
  for (Index a = 0; a < rx; ++a) {
    cx.middleCols(a * ry, ry) = y.core_x().array().colwise() * x.core_x().col(a).array();
    cy.middleRows(a * ry, ry) = y.core_y().array().rowwise() * x.core_y().row(a).array();
  }
  return TTMatrix<Scalar>(std::move(cx), std::move(cy));
}

/// Apply a one-mode linear operator: dense(out) = M * dense(x) for Axis::X,
/// dense(x) * M^T for Axis::Y. Rank is preserved.
template <typename Scalar>
TTMatrix<Scalar> apply_core_map(const TTMatrix<Scalar>& x, Axis axis,
                                const DenseMatrix<Scalar>& m) {
  if (axis == Axis::X) {
    if (m.cols() != x.rows()) throw ShapeError("apply_core_map: operator/mode size mismatch");
    return TTMatrix<Scalar>(m * x.core_x(), x.core_y());
  }
  if (m.cols() != x.cols()) throw ShapeError("apply_core_map: operator/mode size mismatch");
  return TTMatrix<Scalar>(x.core_x(), x.core_y() * m.transpose());
}

struct ReciprocalStats {
  int iterations = 0;
};

/// Taylor-series reciprocal of a TT field about its mean value. Iterates
/// y <- round(y + dy, eps) with dy <- round(dy .* xt, eps), xt = 1 - x / x_avg,
/// until ||dy||_F / sqrt(N) <= eps. Diverging increments over five consecutive
/// iterations or hitting the cap raises a ConvergenceError naming max|xt|.
template <typename Scalar>
TTMatrix<Scalar> reciprocal_taylor(const TTMatrix<Scalar>& x, double eps,
                                   int max_iterations = 200,
                                   ReciprocalStats* stats = nullptr) {
  if (eps <= 0) throw InputError("reciprocal_taylor: eps must be positive");
  const double n_entries = static_cast<double>(x.rows()) * static_cast<double>(x.cols());
  const Scalar x_avg = sum_entries(x) / Scalar(n_entries);
  if (x_avg == Scalar(0))
    throw ConvergenceError("reciprocal_taylor: field has zero mean", 1.0, 0);

  const TTMatrix<Scalar> ones = TTMatrix<Scalar>::constant(x.rows(), x.cols(), Scalar(1));
  const TTMatrix<Scalar> xt =
      round(add(ones, scale(x, Scalar(-1) / x_avg)), eps);

  auto fail = [&](const char* reason, double err, int it) -> ConvergenceError {
    const Scalar max_xt = to_full(xt).array().abs().maxCoeff();
    std::ostringstream os;
    os << "reciprocal_taylor: " << reason << " after " << it
       << " iterations (max|1 - x/x_avg| = " << max_xt << ", residual = " << err << ")";
    return ConvergenceError(os.str(), err, it);
  };

  TTMatrix<Scalar> y = ones;
  TTMatrix<Scalar> dy = ones;
  double prev_err = std::numeric_limits<double>::infinity();
  int growth_streak = 0;
  for (int it = 1; it <= max_iterations; ++it) {
    dy = round(hadamard(dy, xt), eps);
    y = round(add(y, dy), eps);
    const double err = norm_fro(dy) / std::sqrt(n_entries);
    if (stats) stats->iterations = it;
    if (err <= eps) return scale(y, Scalar(1) / x_avg);
    growth_streak = (err > prev_err) ? growth_streak + 1 : 0;
    if (growth_streak >= 5) throw fail("diverging increments", err, it);
    prev_err = err;
  }
  throw fail("iteration cap exceeded", prev_err, max_iterations);
}

}  // namespace ttsw
