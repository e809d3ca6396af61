#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/LU>

#include "ttsw/tt.hpp"
#include "ttsw/types.hpp"

namespace ttsw {

struct CrossConfig {
  double eps = 1e-10;
  Index max_rank = 128;
  int max_sweeps = 30;
  Index rank_increment = 2;
  int validation_sample = 1000;
  std::uint64_t seed = 0x5eed5eedULL;  // drives the validation sampler
};

/// Quasi-dominant row subset of a tall full-rank matrix: greedy swaps until no
/// single exchange can grow |det| by more than 1%. Returns sorted row indices,
/// one per column.
template <typename Scalar>
std::vector<Index> maxvol(const DenseMatrix<Scalar>& m) {
  using Matrix = DenseMatrix<Scalar>;
  const Index n = m.rows(), r = m.cols();
  if (n < r) throw ShapeError("maxvol: matrix must have at least as many rows as columns");

  Eigen::FullPivLU<Matrix> lu(m);
  if (lu.rank() < r) throw DegeneracyError("maxvol: matrix is rank deficient");

  // Initial pivot rows from the LU row permutation.
  std::vector<Index> rows(r);
  const auto& perm = lu.permutationP().indices();
  std::vector<Index> inverse(n);
  for (Index i = 0; i < n; ++i) inverse[perm[i]] = i;
  for (Index k = 0; k < r; ++k) rows[k] = inverse[k];

  constexpr double kGrowth = 1.01;
  for (int iter = 0; iter < 500; ++iter) {
    Matrix pivot(r, r);
    for (Index k = 0; k < r; ++k) pivot.row(k) = m.row(rows[k]);
    Matrix b = pivot.transpose().partialPivLu().solve(m.transpose()).transpose();
    Index bi = 0, bj = 0;
    const double best = b.array().abs().maxCoeff(&bi, &bj);
    if (best <= kGrowth) {
      std::sort(rows.begin(), rows.end());
      return rows;
    }
    rows[bj] = bi;
  }
  throw ConvergenceError("maxvol: swap iteration failed to settle", 0.0, 500);
}

/// Entrywise function of k operand values.
template <typename Scalar>
using EntryFn = std::function<Scalar(std::span<const Scalar>)>;

template <typename Scalar>
struct CrossResult {
  TTMatrix<Scalar> tt;
  long evaluations = 0;
  int sweeps = 0;
  double residual = 0.0;  // last validation RMS relative to the sampled field RMS
};

namespace detail {

template <typename Scalar>
class CrossSampler {
 public:
  CrossSampler(const EntryFn<Scalar>& f, std::span<const TTMatrix<Scalar>> ops)
      : f_(f), ops_(ops), values_(ops.size()) {}

  Scalar entry(Index i, Index j) {
    for (std::size_t k = 0; k < ops_.size(); ++k)
      values_[k] = ops_[k].core_x().row(i) * ops_[k].core_y().col(j);
    ++count_;
    try {
      return f_(std::span<const Scalar>(values_));
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "cross_elementwise: function failed at entry (" << i << ", " << j
         << "): " << e.what();
      throw EvaluationError(os.str(), i, j);
    }
  }

  DenseVector<Scalar> column(Index j) {
    const Index n = ops_[0].rows();
    std::vector<DenseVector<Scalar>> cols(ops_.size());
    for (std::size_t k = 0; k < ops_.size(); ++k)
      cols[k] = ops_[k].core_x() * ops_[k].core_y().col(j);
    DenseVector<Scalar> out(n);
    for (Index i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < ops_.size(); ++k) values_[k] = cols[k][i];
      ++count_;
      try {
        out[i] = f_(std::span<const Scalar>(values_));
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "cross_elementwise: function failed at entry (" << i << ", " << j
           << "): " << e.what();
        throw EvaluationError(os.str(), i, j);
      }
    }
    return out;
  }

  DenseVector<Scalar> row(Index i) {
    const Index n = ops_[0].cols();
    std::vector<DenseVector<Scalar>> rows(ops_.size());
    for (std::size_t k = 0; k < ops_.size(); ++k)
      rows[k] = (ops_[k].core_x().row(i) * ops_[k].core_y()).transpose();
    DenseVector<Scalar> out(n);
    for (Index j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < ops_.size(); ++k) values_[k] = rows[k][j];
      ++count_;
      try {
        out[j] = f_(std::span<const Scalar>(values_));
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "cross_elementwise: function failed at entry (" << i << ", " << j
           << "): " << e.what();
        throw EvaluationError(os.str(), i, j);
      }
    }
    return out;
  }

  long count() const { return count_; }

 private:
  const EntryFn<Scalar>& f_;
  std::span<const TTMatrix<Scalar>> ops_;
  std::vector<Scalar> values_;
  long count_ = 0;
};

template <typename Scalar>
DenseMatrix<Scalar> thin_q(const DenseMatrix<Scalar>& m) {
  const Index q = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<DenseMatrix<Scalar>> qr(m);
  return qr.householderQ() * DenseMatrix<Scalar>::Identity(m.rows(), q);
}

}  // namespace detail

/// Rank-adaptive skeleton (CUR) interpolation of Z(i,j) = f(operand values at
/// (i,j)), built from alternating maxvol sweeps over lazily evaluated fibers.
/// Terminates when the seeded validation sample meets cfg.eps in relative RMS;
/// rank grows by cfg.rank_increment along residual-maximizing columns whenever
/// validation fails.
template <typename Scalar>
CrossResult<Scalar> cross_elementwise_stats(const EntryFn<Scalar>& f,
                                            std::span<const TTMatrix<Scalar>> operands,
                                            const TTMatrix<Scalar>& guess,
                                            const CrossConfig& cfg) {
  using Matrix = DenseMatrix<Scalar>;
  if (operands.empty()) throw InputError("cross_elementwise: no operands");
  const Index n_rows = operands[0].rows(), n_cols = operands[0].cols();
  for (const auto& op : operands)
    if (op.rows() != n_rows || op.cols() != n_cols)
      throw ShapeError("cross_elementwise: operand shapes differ");
  if (guess.rows() != n_rows || guess.cols() != n_cols)
    throw ShapeError("cross_elementwise: guess shape differs from operands");
  if (cfg.eps <= 0) throw InputError("cross_elementwise: eps must be positive");

  const Index rank_cap = std::min({cfg.max_rank, n_rows, n_cols});
  detail::CrossSampler<Scalar> sampler(f, operands);
  std::mt19937_64 gen(cfg.seed);
  std::uniform_int_distribution<Index> row_dist(0, n_rows - 1), col_dist(0, n_cols - 1);

  // Initial column set from the guess, deduplicated and clamped to the cap.
  std::vector<Index> cols = maxvol(detail::thin_q<Scalar>(guess.core_y().transpose()));
  if (static_cast<Index>(cols.size()) > rank_cap) cols.resize(rank_cap);

  CrossResult<Scalar> result;
  result.tt = TTMatrix<Scalar>::zero(n_rows, n_cols);
  double residual = std::numeric_limits<double>::infinity();

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    result.sweeps = sweep;

    Matrix c(n_rows, static_cast<Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) c.col(k) = sampler.column(cols[k]);

    std::vector<Index> rows;
    Matrix row_values;
    if (c.norm() == Scalar(0)) {
      result.tt = TTMatrix<Scalar>::zero(n_rows, n_cols);
    } else {
      Matrix q = detail::thin_q<Scalar>(c);
      rows = maxvol(q);
      Matrix pivot(q.cols(), q.cols());
      for (Index k = 0; k < q.cols(); ++k) pivot.row(k) = q.row(rows[k]);
      Matrix basis = pivot.transpose().partialPivLu().solve(q.transpose()).transpose();
      row_values.resize(static_cast<Index>(rows.size()), n_cols);
      for (std::size_t k = 0; k < rows.size(); ++k)
        row_values.row(k) = sampler.row(rows[k]).transpose();
      result.tt = TTMatrix<Scalar>(std::move(basis), row_values);
    }

    // Validation on a fresh seeded sample.
    double err2 = 0, mag2 = 0;
    std::vector<std::pair<double, Index>> column_residuals;
    column_residuals.reserve(cfg.validation_sample);
    for (int s = 0; s < cfg.validation_sample; ++s) {
      const Index i = row_dist(gen), j = col_dist(gen);
      const Scalar z = sampler.entry(i, j);
      const Scalar zh = result.tt.core_x().row(i) * result.tt.core_y().col(j);
      const double d = static_cast<double>(z - zh);
      err2 += d * d;
      mag2 += static_cast<double>(z) * static_cast<double>(z);
      column_residuals.emplace_back(std::abs(d), j);
    }
    const double rms_err = std::sqrt(err2 / cfg.validation_sample);
    const double rms_mag = std::sqrt(mag2 / cfg.validation_sample);
    residual = rms_mag == 0 ? (rms_err == 0 ? 0.0 : std::numeric_limits<double>::infinity())
                            : rms_err / rms_mag;
    result.residual = residual;
    result.evaluations = sampler.count();
    if (residual <= cfg.eps) return result;

    // Refine the column set through the evaluated rows, then grow it along the
    // worst validation columns.
    if (!rows.empty())
      cols = maxvol(detail::thin_q<Scalar>(row_values.transpose().eval()));
    std::sort(column_residuals.begin(), column_residuals.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    Index added = 0;
    for (const auto& [res, j] : column_residuals) {
      if (static_cast<Index>(cols.size()) >= rank_cap || added >= cfg.rank_increment) break;
      if (res == 0) break;
      if (std::find(cols.begin(), cols.end(), j) == cols.end()) {
        cols.push_back(j);
        ++added;
      }
    }
  }

  std::ostringstream os;
  os << "cross_elementwise: tolerance " << cfg.eps << " not met after "
     << cfg.max_sweeps << " sweeps (achieved relative RMS " << residual << ")";
  throw ConvergenceError(os.str(), residual, cfg.max_sweeps);
}

template <typename Scalar>
TTMatrix<Scalar> cross_elementwise(const EntryFn<Scalar>& f,
                                   std::span<const TTMatrix<Scalar>> operands,
                                   const TTMatrix<Scalar>& guess, const CrossConfig& cfg) {
  return cross_elementwise_stats(f, operands, guess, cfg).tt;
}

}  // namespace ttsw
