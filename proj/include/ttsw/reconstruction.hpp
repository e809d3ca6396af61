#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ttsw/cross.hpp"
#include "ttsw/tt.hpp"
#include "ttsw/types.hpp"

namespace ttsw {

enum class Scheme { Upwind3, Upwind5, Weno5 };
enum class Side { Minus, Plus };

constexpr int order(Scheme s) { return s == Scheme::Upwind3 ? 3 : 5; }
constexpr int stencil_radius(Scheme s) { return s == Scheme::Upwind3 ? 1 : 2; }
constexpr int quadrature_points(Scheme s) { return s == Scheme::Upwind3 ? 2 : 3; }
constexpr bool is_weno(Scheme s) { return s == Scheme::Weno5; }

/// Gauss-Legendre rule scaled to the cell-normalized interval [-1/2, 1/2];
/// weights sum to one.
template <typename Scalar = double>
struct QuadratureRule {
  int n = 0;
  std::array<Scalar, 3> offset{};
  std::array<Scalar, 3> weight{};
};

template <typename Scalar = double>
QuadratureRule<Scalar> gauss_rule(int n_q) {
  QuadratureRule<Scalar> rule;
  rule.n = n_q;
  if (n_q == 2) {
    const Scalar a = Scalar(1) / (Scalar(2) * std::sqrt(Scalar(3)));
    rule.offset = {-a, a, Scalar(0)};
    rule.weight = {Scalar(0.5), Scalar(0.5), Scalar(0)};
  } else if (n_q == 3) {
    const Scalar b = std::sqrt(Scalar(3) / Scalar(5)) / Scalar(2);
    rule.offset = {-b, Scalar(0), b};
    rule.weight = {Scalar(5) / Scalar(18), Scalar(8) / Scalar(18), Scalar(5) / Scalar(18)};
  } else {
    throw InputError("gauss_rule: only 2- and 3-point rules are supported");
  }
  return rule;
}

namespace detail {

/// Coefficients c_l such that sum_l c_l * avg_{cell s_l}(p) = p(delta) for all
/// polynomials p of degree < cells.size(), on unit cells centered at integers.
template <typename Scalar>
DenseVector<Scalar> point_reconstruction_coefficients(std::span<const int> cells,
                                                      Scalar delta) {
  const Index k = static_cast<Index>(cells.size());
  DenseMatrix<Scalar> a(k, k);
  DenseVector<Scalar> rhs(k);
  for (Index q = 0; q < k; ++q) {
    for (Index l = 0; l < k; ++l) {
      const Scalar lo = Scalar(cells[l]) - Scalar(0.5);
      const Scalar hi = Scalar(cells[l]) + Scalar(0.5);
      a(q, l) = (std::pow(hi, Scalar(q + 1)) - std::pow(lo, Scalar(q + 1))) / Scalar(q + 1);
    }
    rhs[q] = std::pow(delta, Scalar(q));
  }
  return a.fullPivLu().solve(rhs);
}

/// Ideal weights combining the k+1 candidate reconstructions into the wide
/// stencil reconstruction at the same point.
template <typename Scalar>
DenseVector<Scalar> ideal_weights(const DenseMatrix<Scalar>& candidates,
                                  const DenseVector<Scalar>& wide, int radius) {
  const Index n_cand = radius + 1;
  DenseMatrix<Scalar> a(wide.size(), n_cand);
  a.setZero();
  for (Index r = 0; r < n_cand; ++r)
    a.col(r).segment(radius - r, radius + 1) = candidates.row(r).head(radius + 1);
  return a.colPivHouseholderQr().solve(wide);
}

}  // namespace detail

/// Reconstruction coefficient tables for one scheme, generated once from the
/// quadrature offsets. Candidate stencil r covers cells i-r .. i-r+radius.
template <typename Scalar = double>
struct ReconTables {
  Scheme scheme{};
  int radius = 0;
  QuadratureRule<Scalar> quad;

  // Step 1 (interface value at i+1/2, minus side).
  DenseMatrix<Scalar> step1_c;       // (radius+1) x (radius+1), row r
  DenseVector<Scalar> step1_ideal;   // radius+1
  DenseVector<Scalar> step1_row;     // combined, cells i-radius .. i+radius

  // Step 2 (value at cell center + offset[m]).
  std::array<DenseMatrix<Scalar>, 3> c;      // C^m, (radius+1) x (radius+1)
  std::array<DenseVector<Scalar>, 3> gamma;  // ideal weights per point (signed at center)
  std::array<DenseVector<Scalar>, 3> point_row;  // combined, width 2*radius+1

  // Negative-weight split at the 5th-order center point.
  DenseVector<Scalar> gamma_plus, gamma_minus;
  Scalar sigma_plus = Scalar(107) / Scalar(40);
  Scalar sigma_minus = Scalar(67) / Scalar(40);

  DenseVector<Scalar> weno_d;  // step-1 WENO ideal weights
};

template <typename Scalar = double>
ReconTables<Scalar> make_recon_tables(Scheme scheme) {
  ReconTables<Scalar> t;
  t.scheme = scheme;
  t.radius = stencil_radius(scheme);
  t.quad = gauss_rule<Scalar>(quadrature_points(scheme));
  const int k = t.radius;

  auto cells = [](int first, int count) {
    std::vector<int> v(count);
    for (int i = 0; i < count; ++i) v[i] = first + i;
    return v;
  };

  const auto wide_cells = cells(-k, 2 * k + 1);
  t.step1_c.resize(k + 1, k + 1);
  for (int r = 0; r <= k; ++r) {
    const auto c = cells(-r, k + 1);
    t.step1_c.row(r) =
        detail::point_reconstruction_coefficients<Scalar>(c, Scalar(0.5)).transpose();
  }
  t.step1_row =
      detail::point_reconstruction_coefficients<Scalar>(wide_cells, Scalar(0.5));
  t.step1_ideal = detail::ideal_weights<Scalar>(t.step1_c, t.step1_row, k);

  for (int m = 0; m < t.quad.n; ++m) {
    const Scalar delta = t.quad.offset[m];
    t.c[m].resize(k + 1, k + 1);
    for (int r = 0; r <= k; ++r) {
      const auto c = cells(-r, k + 1);
      t.c[m].row(r) =
          detail::point_reconstruction_coefficients<Scalar>(c, delta).transpose();
    }
    t.point_row[m] =
        detail::point_reconstruction_coefficients<Scalar>(wide_cells, delta);
    t.gamma[m] = detail::ideal_weights<Scalar>(t.c[m], t.point_row[m], k);
  }

  if (k == 2) {
    t.gamma_plus.resize(3);
    t.gamma_plus << Scalar(9) / 214, Scalar(98) / 107, Scalar(9) / 214;
    t.gamma_minus.resize(3);
    t.gamma_minus << Scalar(9) / 67, Scalar(49) / 67, Scalar(9) / 67;
    t.weno_d.resize(3);
    t.weno_d << Scalar(3) / 10, Scalar(3) / 5, Scalar(1) / 10;
  }
  return t;
}

inline const ReconTables<double>& recon_tables(Scheme scheme) {
  static const ReconTables<double> u3 = make_recon_tables<double>(Scheme::Upwind3);
  static const ReconTables<double> u5 = make_recon_tables<double>(Scheme::Upwind5);
  static const ReconTables<double> w5 = make_recon_tables<double>(Scheme::Weno5);
  switch (scheme) {
    case Scheme::Upwind3: return u3;
    case Scheme::Upwind5: return u5;
    default: return w5;
  }
}

/// Jiang-Shu smoothness indicators of a 5-cell stencil (v_{i-2} .. v_{i+2}).
template <typename Scalar>
std::array<Scalar, 3> smoothness_indicators(std::span<const Scalar, 5> v) {
  const Scalar c = Scalar(13) / Scalar(12);
  std::array<Scalar, 3> beta;
  beta[0] = c * std::pow(v[2] - 2 * v[3] + v[4], 2) +
            Scalar(0.25) * std::pow(3 * v[2] - 4 * v[3] + v[4], 2);
  beta[1] = c * std::pow(v[1] - 2 * v[2] + v[3], 2) +
            Scalar(0.25) * std::pow(v[1] - v[3], 2);
  beta[2] = c * std::pow(v[0] - 2 * v[1] + v[2], 2) +
            Scalar(0.25) * std::pow(v[0] - 4 * v[1] + 3 * v[2], 2);
  return beta;
}

/// Normalized nonlinear weights: alpha_r = d_r / (beta_r + eps)^2.
template <typename Scalar>
std::array<Scalar, 3> weno_weights(const std::array<Scalar, 3>& beta,
                                   const std::array<Scalar, 3>& ideal, Scalar eps) {
  std::array<Scalar, 3> alpha;
  Scalar total = 0;
  for (int r = 0; r < 3; ++r) {
    const Scalar d = beta[r] + eps;
    alpha[r] = ideal[r] / (d * d);
    total += alpha[r];
  }
  for (auto& a : alpha) a /= total;
  return alpha;
}

namespace detail {

/// Minus-biased WENO5 step-1 value at i+1/2 from (v_{i-2} .. v_{i+2}).
template <typename Scalar>
Scalar weno5_step1_value(std::span<const Scalar, 5> v, const ReconTables<Scalar>& t,
                         Scalar eps) {
  const auto beta = smoothness_indicators<Scalar>(v);
  std::array<Scalar, 3> d{t.weno_d[0], t.weno_d[1], t.weno_d[2]};
  const auto w = weno_weights<Scalar>(beta, d, eps);
  Scalar out = 0;
  for (int r = 0; r < 3; ++r) {
    Scalar cand = 0;
    for (int l = 0; l < 3; ++l) cand += t.step1_c(r, l) * v[2 - r + l];
    out += w[r] * cand;
  }
  return out;
}

/// WENO5 step-2 value at quadrature point m from the centered 5-cell stencil.
template <typename Scalar>
Scalar weno5_step2_value(std::span<const Scalar, 5> v, int m,
                         const ReconTables<Scalar>& t, Scalar eps) {
  const auto beta = smoothness_indicators<Scalar>(v);
  std::array<Scalar, 3> cand;
  for (int r = 0; r < 3; ++r) {
    cand[r] = 0;
    for (int l = 0; l < 3; ++l) cand[r] += t.c[m](r, l) * v[2 - r + l];
  }
  if (m == 1) {
    std::array<Scalar, 3> gp{t.gamma_plus[0], t.gamma_plus[1], t.gamma_plus[2]};
    std::array<Scalar, 3> gm{t.gamma_minus[0], t.gamma_minus[1], t.gamma_minus[2]};
    const auto wp = weno_weights<Scalar>(beta, gp, eps);
    const auto wm = weno_weights<Scalar>(beta, gm, eps);
    Scalar up = 0, um = 0;
    for (int r = 0; r < 3; ++r) {
      up += wp[r] * cand[r];
      um += wm[r] * cand[r];
    }
    return t.sigma_plus * up - t.sigma_minus * um;
  }
  std::array<Scalar, 3> g{t.gamma[m][0], t.gamma[m][1], t.gamma[m][2]};
  const auto w = weno_weights<Scalar>(beta, g, eps);
  Scalar out = 0;
  for (int r = 0; r < 3; ++r) out += w[r] * cand[r];
  return out;
}

using ArrayXX = Eigen::ArrayXXd;

/// Vectorized step 1 on stencil blocks given in minus orientation:
/// blocks[s] holds v_{i-radius+s} for every interface at once.
inline ArrayXX step1_blocks(const std::vector<ArrayXX>& v, Scheme scheme, double eps) {
  const auto& t = recon_tables(scheme);
  if (scheme == Scheme::Upwind3) {
    ArrayXX out = ArrayXX::Zero(v[0].rows(), v[0].cols());
    for (int r = 0; r <= 1; ++r)
      for (int l = 0; l <= 1; ++l)
        out += t.step1_ideal[r] * t.step1_c(r, l) * v[1 - r + l];
    return out;
  }
  if (scheme == Scheme::Upwind5) {
    ArrayXX out = ArrayXX::Zero(v[0].rows(), v[0].cols());
    for (int r = 0; r <= 2; ++r)
      for (int l = 0; l <= 2; ++l)
        out += t.step1_ideal[r] * t.step1_c(r, l) * v[2 - r + l];
    return out;
  }
  // WENO5
  const double c1312 = 13.0 / 12.0;
  ArrayXX b0 = c1312 * (v[2] - 2 * v[3] + v[4]).square() +
               0.25 * (3 * v[2] - 4 * v[3] + v[4]).square();
  ArrayXX b1 = c1312 * (v[1] - 2 * v[2] + v[3]).square() + 0.25 * (v[1] - v[3]).square();
  ArrayXX b2 = c1312 * (v[0] - 2 * v[1] + v[2]).square() +
               0.25 * (v[0] - 4 * v[1] + 3 * v[2]).square();
  ArrayXX a0 = t.weno_d[0] / (b0 + eps).square();
  ArrayXX a1 = t.weno_d[1] / (b1 + eps).square();
  ArrayXX a2 = t.weno_d[2] / (b2 + eps).square();
  ArrayXX total = a0 + a1 + a2;
  ArrayXX cand0 = t.step1_c(0, 0) * v[2] + t.step1_c(0, 1) * v[3] + t.step1_c(0, 2) * v[4];
  ArrayXX cand1 = t.step1_c(1, 0) * v[1] + t.step1_c(1, 1) * v[2] + t.step1_c(1, 2) * v[3];
  ArrayXX cand2 = t.step1_c(2, 0) * v[0] + t.step1_c(2, 1) * v[1] + t.step1_c(2, 2) * v[2];
  return (a0 * cand0 + a1 * cand1 + a2 * cand2) / total;
}

/// Vectorized step 2 at quadrature point m on centered stencil blocks.
inline ArrayXX step2_blocks(const std::vector<ArrayXX>& v, Scheme scheme, int m,
                            double eps) {
  const auto& t = recon_tables(scheme);
  const int k = t.radius;
  std::vector<ArrayXX> cand(k + 1);
  for (int r = 0; r <= k; ++r) {
    cand[r] = ArrayXX::Zero(v[0].rows(), v[0].cols());
    for (int l = 0; l <= k; ++l) cand[r] += t.c[m](r, l) * v[k - r + l];
  }
  if (scheme == Scheme::Upwind3) return 0.5 * cand[0] + 0.5 * cand[1];
  if (scheme == Scheme::Upwind5) {
    if (m == 1) {
      ArrayXX up = t.gamma_plus[0] * cand[0] + t.gamma_plus[1] * cand[1] +
                   t.gamma_plus[2] * cand[2];
      ArrayXX um = t.gamma_minus[0] * cand[0] + t.gamma_minus[1] * cand[1] +
                   t.gamma_minus[2] * cand[2];
      return t.sigma_plus * up - t.sigma_minus * um;
    }
    return t.gamma[m][0] * cand[0] + t.gamma[m][1] * cand[1] + t.gamma[m][2] * cand[2];
  }
  // WENO5
  const double c1312 = 13.0 / 12.0;
  ArrayXX b0 = c1312 * (v[2] - 2 * v[3] + v[4]).square() +
               0.25 * (3 * v[2] - 4 * v[3] + v[4]).square();
  ArrayXX b1 = c1312 * (v[1] - 2 * v[2] + v[3]).square() + 0.25 * (v[1] - v[3]).square();
  ArrayXX b2 = c1312 * (v[0] - 2 * v[1] + v[2]).square() +
               0.25 * (v[0] - 4 * v[1] + 3 * v[2]).square();
  auto combine = [&](const DenseVector<double>& g) {
    ArrayXX a0 = g[0] / (b0 + eps).square();
    ArrayXX a1 = g[1] / (b1 + eps).square();
    ArrayXX a2 = g[2] / (b2 + eps).square();
    return ((a0 * cand[0] + a1 * cand[1] + a2 * cand[2]) / (a0 + a1 + a2)).eval();
  };
  if (m == 1)
    return t.sigma_plus * combine(t.gamma_plus) - t.sigma_minus * combine(t.gamma_minus);
  return combine(t.gamma[m]);
}

}  // namespace detail

/// Step 1 along `axis`: interface-line cell averages on the biased side.
/// Consumes the ghosts of that axis; the transverse ghosts pass through.
inline MatrixXd step1_dense(const MatrixXd& ghosted, Axis axis, Scheme scheme, Side side,
                            double eps_weno) {
  const int k = stencil_radius(scheme);
  const Index span = 2 * kGhost;
  const Index n = (axis == Axis::X ? ghosted.rows() : ghosted.cols()) - span;
  if (n < 1) throw ShapeError("step1_dense: not enough cells for the ghost layout");
  const Index base = (side == Side::Minus) ? kGhost - k - 1 : kGhost - k;

  std::vector<detail::ArrayXX> blocks(2 * k + 1);
  for (int s = 0; s < 2 * k + 1; ++s) {
    const Index off = base + s;
    if (axis == Axis::X)
      blocks[s] = ghosted.middleRows(off, n + 1).array();
    else
      blocks[s] = ghosted.middleCols(off, n + 1).array();
  }
  if (side == Side::Plus) std::reverse(blocks.begin(), blocks.end());
  return detail::step1_blocks(blocks, scheme, eps_weno).matrix();
}

/// Step 2 along `axis`: quadrature-point values from interface-line averages.
/// Output interleaves the axis as (cell, point), cell-major.
inline MatrixXd step2_dense(const MatrixXd& lines, Axis axis, Scheme scheme,
                            double eps_weno) {
  const int k = stencil_radius(scheme);
  const int n_q = quadrature_points(scheme);
  const Index span = 2 * kGhost;
  const Index n = (axis == Axis::X ? lines.rows() : lines.cols()) - span;
  if (n < 1) throw ShapeError("step2_dense: not enough cells for the ghost layout");

  std::vector<detail::ArrayXX> blocks(2 * k + 1);
  for (int s = 0; s < 2 * k + 1; ++s) {
    const Index off = kGhost - k + s;
    if (axis == Axis::X)
      blocks[s] = lines.middleRows(off, n).array();
    else
      blocks[s] = lines.middleCols(off, n).array();
  }
  MatrixXd out = (axis == Axis::X) ? MatrixXd(n * n_q, lines.cols())
                                   : MatrixXd(lines.rows(), n * n_q);
  for (int m = 0; m < n_q; ++m) {
    MatrixXd vals = detail::step2_blocks(blocks, scheme, m, eps_weno).matrix();
    if (axis == Axis::X)
      out(Eigen::seqN(m, n, n_q), Eigen::all) = vals;
    else
      out(Eigen::all, Eigen::seqN(m, n, n_q)) = vals;
  }
  return out;
}

/// 1D step-1 reconstruction of a ghosted cell-average line.
inline VectorXd step1_interface(const VectorXd& line, Scheme scheme, Side side,
                                double eps_weno) {
  if (line.size() < 2 * kGhost + 1)
    throw ShapeError("step1_interface: line too short for the ghost layout");
  MatrixXd column = line;
  return step1_dense(column, Axis::X, scheme, side, eps_weno).col(0);
}

/// 1D step-2 reconstruction at quadrature point m.
inline VectorXd step2_quadrature(const VectorXd& line, Scheme scheme, int m,
                                 double eps_weno) {
  if (m < 0 || m >= quadrature_points(scheme))
    throw InputError("step2_quadrature: invalid quadrature index");
  if (line.size() < 2 * kGhost + 1)
    throw ShapeError("step2_quadrature: line too short for the ghost layout");
  MatrixXd row = line.transpose();
  MatrixXd all = step2_dense(row, Axis::Y, scheme, eps_weno);
  const Index n = line.size() - 2 * kGhost;
  VectorXd out(n);
  for (Index j = 0; j < n; ++j) out[j] = all(0, j * quadrature_points(scheme) + m);
  return out;
}

template <typename Field>
struct FacePair {
  Field minus;
  Field plus;
};

/// Dense dimension-by-dimension reconstruction to the interface quadrature
/// points with faces normal to `axis`. Output shapes: (n_axis+1) interfaces by
/// (n_transverse * N_q) points, transverse cell-major and quadrature-minor.
inline FacePair<MatrixXd> reconstruct_faces(const MatrixXd& ghosted, Axis axis,
                                            Scheme scheme, double dx, double dy) {
  const double eps1 = (axis == Axis::X) ? dx * dx : dy * dy;
  const double eps2 = (axis == Axis::X) ? dy * dy : dx * dx;
  const Axis transverse = (axis == Axis::X) ? Axis::Y : Axis::X;
  FacePair<MatrixXd> out;
  out.minus = step2_dense(step1_dense(ghosted, axis, scheme, Side::Minus, eps1),
                          transverse, scheme, eps2);
  out.plus = step2_dense(step1_dense(ghosted, axis, scheme, Side::Plus, eps1),
                         transverse, scheme, eps2);
  return out;
}

// --- Grid operator matrices (one-mode linear maps for the TT path) ---------

/// Combined step-1 interface stencil: (n+1) x (n+6).
inline MatrixXd step1_matrix(Scheme scheme, Side side, Index n) {
  const auto& t = recon_tables(scheme);
  const int k = t.radius;
  MatrixXd m = MatrixXd::Zero(n + 1, n + 2 * kGhost);
  VectorXd row = t.step1_row;
  if (side == Side::Plus) row.reverseInPlace();
  const Index base = (side == Side::Minus) ? kGhost - k - 1 : kGhost - k;
  for (Index i = 0; i <= n; ++i)
    for (int l = 0; l < 2 * k + 1; ++l) m(i, i + base + l) = row[l];
  return m;
}

/// Combined quadrature-point resampling: (n * N_q) x (n + 6), cell-major rows.
inline MatrixXd quadrature_point_matrix(Scheme scheme, Index n) {
  const auto& t = recon_tables(scheme);
  const int k = t.radius;
  const int n_q = t.quad.n;
  MatrixXd m = MatrixXd::Zero(n * n_q, n + 2 * kGhost);
  for (Index j = 0; j < n; ++j)
    for (int q = 0; q < n_q; ++q)
      for (int l = 0; l < 2 * k + 1; ++l)
        m(j * n_q + q, j + kGhost - k + l) = t.point_row[q][l];
  return m;
}

/// Quadrature weight contraction over the point-minor mode: n x (n * N_q).
inline MatrixXd quadrature_sum_matrix(Scheme scheme, Index n) {
  const auto& t = recon_tables(scheme);
  MatrixXd m = MatrixXd::Zero(n, n * t.quad.n);
  for (Index j = 0; j < n; ++j)
    for (int q = 0; q < t.quad.n; ++q) m(j, j * t.quad.n + q) = t.quad.weight[q];
  return m;
}

/// Interface difference (T - 1): n x (n+1), out_i = in_{i+1} - in_i.
inline MatrixXd interface_difference_matrix(Index n) {
  MatrixXd m = MatrixXd::Zero(n, n + 1);
  for (Index i = 0; i < n; ++i) {
    m(i, i) = -1.0;
    m(i, i + 1) = 1.0;
  }
  return m;
}

/// Periodic ghost augmentation: (n+6) x n.
inline MatrixXd periodic_pad_matrix(Index n) {
  MatrixXd m = MatrixXd::Zero(n + 2 * kGhost, n);
  for (Index i = 0; i < n + 2 * kGhost; ++i)
    m(i, ((i - kGhost) % n + n) % n) = 1.0;
  return m;
}

/// Ghost augmentation with zero ghost rows: (n+6) x n.
inline MatrixXd interior_pad_matrix(Index n) {
  MatrixXd m = MatrixXd::Zero(n + 2 * kGhost, n);
  for (Index i = 0; i < n; ++i) m(i + kGhost, i) = 1.0;
  return m;
}

/// Contiguous row selection: rows x in_rows picking offset .. offset+rows-1.
inline MatrixXd row_slice_matrix(Index offset, Index rows, Index in_rows) {
  MatrixXd m = MatrixXd::Zero(rows, in_rows);
  for (Index i = 0; i < rows; ++i) m(i, offset + i) = 1.0;
  return m;
}

/// Stencil slice duplicated across quadrature points: (n * N_q) x (n + 6),
/// row (j, q) picks ghosted cell j + offset + s of a 5-cell stencil.
inline MatrixXd quadrature_slice_matrix(Index s, Index n, int n_q, int radius) {
  MatrixXd m = MatrixXd::Zero(n * n_q, n + 2 * kGhost);
  for (Index j = 0; j < n; ++j)
    for (int q = 0; q < n_q; ++q) m(j * n_q + q, j + kGhost - radius + s) = 1.0;
  return m;
}

// --- TT reconstruction ------------------------------------------------------

struct TTReconContext {
  Scheme scheme{};
  double eps_tt = 1e-12;  // cross tolerance for the WENO path
  CrossConfig cross;
  double dx = 1.0;
  double dy = 1.0;
};

namespace detail {

inline FacePair<TTMatrix<double>> tt_recon_linear(const TTMatrix<double>& ghosted,
                                                  Axis axis, Scheme scheme) {
  const Index nx = ghosted.rows() - 2 * kGhost;
  const Index ny = ghosted.cols() - 2 * kGhost;
  const Index n_axis = (axis == Axis::X) ? nx : ny;
  const Index n_trans = (axis == Axis::X) ? ny : nx;
  const Axis trans = (axis == Axis::X) ? Axis::Y : Axis::X;
  MatrixXd q = quadrature_point_matrix(scheme, n_trans);
  FacePair<TTMatrix<double>> out{
      apply_core_map(apply_core_map(ghosted, axis, step1_matrix(scheme, Side::Minus, n_axis)),
                     trans, q),
      apply_core_map(apply_core_map(ghosted, axis, step1_matrix(scheme, Side::Plus, n_axis)),
                     trans, q)};
  return out;
}

inline FacePair<TTMatrix<double>> tt_recon_weno(const TTMatrix<double>& ghosted,
                                                Axis axis, const TTReconContext& ctx) {
  const auto& t = recon_tables(Scheme::Weno5);
  const Index nx = ghosted.rows() - 2 * kGhost;
  const Index ny = ghosted.cols() - 2 * kGhost;
  const Index n_axis = (axis == Axis::X) ? nx : ny;
  const Index n_trans = (axis == Axis::X) ? ny : nx;
  const Axis trans = (axis == Axis::X) ? Axis::Y : Axis::X;
  const int n_q = t.quad.n;

  const double eps1 = (axis == Axis::X) ? ctx.dx * ctx.dx : ctx.dy * ctx.dy;
  const double eps2 = (axis == Axis::X) ? ctx.dy * ctx.dy : ctx.dx * ctx.dx;
  CrossConfig cfg = ctx.cross;
  cfg.eps = ctx.eps_tt;

  EntryFn<double> fun_minus = [&t, eps1](std::span<const double> v) {
    return weno5_step1_value<double>(std::span<const double, 5>(v.data(), 5), t, eps1);
  };
  EntryFn<double> fun_plus = [&t, eps1](std::span<const double> v) {
    const std::array<double, 5> rev{v[4], v[3], v[2], v[1], v[0]};
    return weno5_step1_value<double>(std::span<const double, 5>(rev.data(), 5), t, eps1);
  };
  EntryFn<double> fun_quad = [&t, eps2](std::span<const double> v) {
    const int m = static_cast<int>(v[5] + 0.5);
    return weno5_step2_value<double>(std::span<const double, 5>(v.data(), 5), m, t, eps2);
  };

  auto step1 = [&](Side side) {
    std::vector<TTMatrix<double>> ops;
    ops.reserve(5);
    const Index base = (side == Side::Minus) ? 0 : 1;
    for (Index s = 0; s < 5; ++s)
      ops.push_back(apply_core_map(
          ghosted, axis,
          row_slice_matrix(base + s, n_axis + 1, n_axis + 2 * kGhost)));
    const auto& fun = (side == Side::Minus) ? fun_minus : fun_plus;
    try {
      return cross_elementwise<double>(fun, ops, ops[2], cfg);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string("tt WENO step 1 (") +
                                 (side == Side::Minus ? "minus" : "plus") +
                                 " side): " + e.what(),
                             e.residual, e.iterations);
    }
  };

  auto step2 = [&](const TTMatrix<double>& lines, Side side) {
    std::vector<TTMatrix<double>> ops;
    ops.reserve(6);
    for (Index s = 0; s < 5; ++s)
      ops.push_back(apply_core_map(
          lines, trans, quadrature_slice_matrix(s, n_trans, n_q, t.radius)));
    // Rank-1 quadrature-index pattern so the functor can select the point.
    MatrixXd pattern(1, n_trans * n_q);
    for (Index j = 0; j < n_trans; ++j)
      for (int q = 0; q < n_q; ++q) pattern(0, j * n_q + q) = q;
    if (trans == Axis::Y)
      ops.emplace_back(MatrixXd::Ones(n_axis + 1, 1), pattern);
    else
      ops.emplace_back(pattern.transpose(), MatrixXd::Ones(1, n_axis + 1));
    try {
      return cross_elementwise<double>(fun_quad, ops, ops[2], cfg);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string("tt WENO step 2 (") +
                                 (side == Side::Minus ? "minus" : "plus") +
                                 " side): " + e.what(),
                             e.residual, e.iterations);
    }
  };

  FacePair<TTMatrix<double>> out{step2(step1(Side::Minus), Side::Minus),
                                 step2(step1(Side::Plus), Side::Plus)};
  return out;
}

}  // namespace detail

/// TT reconstruction to interface quadrature points. Linear schemes act on the
/// cores through one-mode stencil maps (rank preserving, no rounding); WENO5
/// cross-interpolates the nonlinear kernels over shifted-operand sets.
inline FacePair<TTMatrix<double>> reconstruct_faces(const TTMatrix<double>& ghosted,
                                                    Axis axis,
                                                    const TTReconContext& ctx) {
  if (is_weno(ctx.scheme)) return detail::tt_recon_weno(ghosted, axis, ctx);
  return detail::tt_recon_linear(ghosted, axis, ctx.scheme);
}

}  // namespace ttsw
