#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "ttsw/reconstruction.hpp"

using namespace ttsw;
using ttsw::testing::monomial_cell_average;
using ttsw::testing::random_tt;
using ttsw::testing::rel_error;

namespace {

// Exact cell average of sin(2 pi x) over [c - h/2, c + h/2].
double sine_cell_average(double c, double h) {
  return (std::cos(2 * M_PI * (c - 0.5 * h)) - std::cos(2 * M_PI * (c + 0.5 * h))) /
         (2 * M_PI * h);
}

VectorXd ghosted_line(Index n, const std::function<double(Index)>& cell_value) {
  VectorXd v(n + 2 * kGhost);
  for (Index i = 0; i < v.size(); ++i) v[i] = cell_value(i - kGhost);
  return v;
}

}  // namespace

TEST_CASE("gauss_rule: frozen nodes and weights on the unit cell") {
  auto g2 = gauss_rule(2);
  CHECK(g2.offset[0] == doctest::Approx(-0.28867513459481287).epsilon(1e-15));
  CHECK(g2.offset[1] == doctest::Approx(0.28867513459481287).epsilon(1e-15));
  CHECK(g2.weight[0] == 0.5);
  CHECK(g2.weight[1] == 0.5);

  auto g3 = gauss_rule(3);
  CHECK(g3.offset[0] == doctest::Approx(-0.3872983346207417).epsilon(1e-15));
  CHECK(g3.offset[1] == 0.0);
  CHECK(g3.offset[2] == doctest::Approx(0.3872983346207417).epsilon(1e-15));
  CHECK(g3.weight[0] == doctest::Approx(5.0 / 18.0).epsilon(1e-15));
  CHECK(g3.weight[1] == doctest::Approx(8.0 / 18.0).epsilon(1e-15));

  for (auto& g : {g2, g3}) {
    double sum = 0;
    for (int m = 0; m < g.n; ++m) sum += g.weight[m];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(gauss_rule(4), InputError);
}

TEST_CASE("tables: step-1 stencils and ideal weights match the published values") {
  const auto& u3 = recon_tables(Scheme::Upwind3);
  CHECK(u3.step1_c(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(u3.step1_c(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(u3.step1_c(1, 0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(u3.step1_c(1, 1) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(u3.step1_ideal[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(u3.step1_ideal[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  const auto& u5 = recon_tables(Scheme::Upwind5);
  MatrixXd expected(3, 3);
  expected << 2, 5, -1, -1, 5, 2, 2, -7, 11;
  expected /= 6.0;
  CHECK((u5.step1_c - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(u5.step1_ideal[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(u5.step1_ideal[1] == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(u5.step1_ideal[2] == doctest::Approx(0.1).epsilon(1e-14));

  VectorXd combined(5);
  combined << 2, -13, 47, 27, -3;
  combined /= 60.0;
  CHECK((u5.step1_row - combined).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("tables: quadrature coefficient rows preserve constants") {
  for (Scheme s : {Scheme::Upwind3, Scheme::Upwind5, Scheme::Weno5}) {
    const auto& t = recon_tables(s);
    for (int m = 0; m < t.quad.n; ++m) {
      for (int r = 0; r <= t.radius; ++r)
        CHECK(std::abs(t.c[m].row(r).sum() - 1.0) < 1e-12);
      CHECK(std::abs(t.point_row[m].sum() - 1.0) < 1e-12);
      CHECK(std::abs(t.gamma[m].sum() - 1.0) < 1e-12);
    }
    CHECK(std::abs(t.step1_row.sum() - 1.0) < 1e-12);
    CHECK(std::abs(t.step1_ideal.sum() - 1.0) < 1e-12);
  }
}

TEST_CASE("tables: generated coefficients agree with the printed rationals") {
  // The printed tables are rational approximations of the Gauss-point
  // reconstruction coefficients; the generated values must match them at
  // their printing precision.
  const auto& u3 = recon_tables(Scheme::Upwind3);
  MatrixXd paper_m1(2, 2), paper_m2(2, 2);
  paper_m1 << 808.0 / 627, -390.0 / 1351, 390.0 / 1351, 961.0 / 1351;
  paper_m2 << 961.0 / 1351, 390.0 / 1351, -390.0 / 1351, 808.0 / 627;
  CHECK((u3.c[0] - paper_m1).cwiseAbs().maxCoeff() < 2e-6);
  CHECK((u3.c[1] - paper_m2).cwiseAbs().maxCoeff() < 2e-6);

  const auto& u5 = recon_tables(Scheme::Upwind5);
  MatrixXd p1(3, 3), p2(3, 3), p3(3, 3);
  p1 << 4725.0 / 2927, -2051.0 / 2438, 249.0 / 1097,
        249.0 / 1097, 14.0 / 15, -467.0 / 2913,
        -467.0 / 2913, 366.0 / 517, 2209.0 / 4883;
  p2 << 23.0 / 24, 1.0 / 12, -1.0 / 24,
        -1.0 / 24, 13.0 / 12, -1.0 / 24,
        -1.0 / 24, 1.0 / 12, 23.0 / 24;
  p3 << 2209.0 / 4883, 366.0 / 517, -467.0 / 2913,
        -467.0 / 2913, 14.0 / 15, 249.0 / 1097,
        249.0 / 1097, -2051.0 / 2438, 4725.0 / 2927;
  CHECK((u5.c[0] - p1).cwiseAbs().maxCoeff() < 2e-6);
  CHECK((u5.c[1] - p2).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((u5.c[2] - p3).cwiseAbs().maxCoeff() < 2e-6);

  VectorXd g1(3), g3(3);
  g1 << 882.0 / 6305, 403.0 / 655, 463.0 / 1891;
  g3 << 463.0 / 1891, 403.0 / 655, 882.0 / 6305;
  CHECK((u5.gamma[0] - g1).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((u5.gamma[2] - g3).cwiseAbs().maxCoeff() < 1e-6);

  // Center point: signed ideal weights and their positive/negative split.
  VectorXd signed_center(3);
  signed_center << -9.0 / 80, 49.0 / 40, -9.0 / 80;
  CHECK((u5.gamma[1] - signed_center).cwiseAbs().maxCoeff() < 1e-12);
  VectorXd recombined =
      u5.sigma_plus * u5.gamma_plus - u5.sigma_minus * u5.gamma_minus;
  CHECK((recombined - signed_center).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(u5.sigma_plus - u5.sigma_minus == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(u5.gamma_plus.sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(u5.gamma_minus.sum() == doctest::Approx(1.0).epsilon(1e-14));
  // sigma+ * sum(gamma+) - sigma- * sum(gamma-) = 107/40 - 67/40 = 1.
  CHECK(u5.sigma_plus * u5.gamma_plus.sum() - u5.sigma_minus * u5.gamma_minus.sum() ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("step1_interface: constants and linear data") {
  for (Scheme s : {Scheme::Upwind3, Scheme::Upwind5, Scheme::Weno5}) {
    auto v = ghosted_line(12, [](Index) { return 4.25; });
    for (Side side : {Side::Minus, Side::Plus}) {
      VectorXd out = step1_interface(v, s, side, 1e-4);
      CHECK((out.array() - 4.25).abs().maxCoeff() < 1e-13);
    }
  }

  auto linear = ghosted_line(12, [](Index i) { return static_cast<double>(i); });
  VectorXd out = step1_interface(linear, Scheme::Upwind3, Side::Minus, 0.0);
  for (Index k = 0; k <= 12; ++k)
    CHECK(out[k] == doctest::Approx(k - 0.5).epsilon(1e-14));
  // Both candidate stencils already reproduce linear data at the interface.
  const auto& t = recon_tables(Scheme::Upwind3);
  const double v0 = t.step1_c(0, 0) * 3.0 + t.step1_c(0, 1) * 4.0;
  const double v1 = t.step1_c(1, 0) * 2.0 + t.step1_c(1, 1) * 3.0;
  CHECK(v0 == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(v1 == doctest::Approx(3.5).epsilon(1e-15));
}

TEST_CASE("step1_interface: Upwind5 reproduces quartic cell averages exactly") {
  // Oracle: symbolic cell averages of monomials x^0 .. x^4.
  const Index n = 16;
  const double h = 1.0 / n;
  for (int deg = 0; deg <= 4; ++deg) {
    auto line = ghosted_line(
        n, [&](Index i) { return monomial_cell_average(deg, (i + 0.5) * h, h); });
    for (Side side : {Side::Minus, Side::Plus}) {
      VectorXd out = step1_interface(line, Scheme::Upwind5, side, 0.0);
      for (Index k = 0; k <= n; ++k)
        CHECK(out[k] == doctest::Approx(std::pow(k * h, deg)).epsilon(1e-12));
    }
  }
}

TEST_CASE("smoothness_indicators: hand-evaluated cases") {
  std::array<double, 5> constant{2, 2, 2, 2, 2};
  auto b = smoothness_indicators<double>(constant);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == 0.0);
  CHECK(b[2] == 0.0);

  std::array<double, 5> linear{0, 1, 2, 3, 4};
  b = smoothness_indicators<double>(linear);
  CHECK(b[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b[2] == doctest::Approx(1.0).epsilon(1e-14));

  std::array<double, 5> step{0, 0, 0, 1, 1};
  b = smoothness_indicators<double>(step);
  CHECK(b[2] == 0.0);
  CHECK(b[0] > 1.0);
}

TEST_CASE("weno_weights: ideal recovery and discontinuity suppression") {
  std::array<double, 3> ideal{0.3, 0.6, 0.1};
  auto w = weno_weights<double>({0, 0, 0}, ideal, 1e-4);
  CHECK(w[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(w[2] == doctest::Approx(0.1).epsilon(1e-14));

  w = weno_weights<double>({7.5, 7.5, 7.5}, ideal, 1e-4);
  CHECK(w[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(w[2] == doctest::Approx(0.1).epsilon(1e-14));

  w = weno_weights<double>({0.0, 0.0, 1e6}, ideal, 1e-4);
  CHECK(w[2] <= 1e-19);
}

TEST_CASE("step2_quadrature: constants, linear exactness, and m validation") {
  for (Scheme s : {Scheme::Upwind3, Scheme::Upwind5, Scheme::Weno5}) {
    auto v = ghosted_line(10, [](Index) { return -1.75; });
    for (int m = 0; m < quadrature_points(s); ++m) {
      VectorXd out = step2_quadrature(v, s, m, 1e-4);
      CHECK((out.array() + 1.75).abs().maxCoeff() < 1e-13);
    }
  }

  auto linear = ghosted_line(10, [](Index j) { return static_cast<double>(j); });
  auto quad = gauss_rule(2);
  for (int m = 0; m < 2; ++m) {
    VectorXd out = step2_quadrature(linear, Scheme::Upwind3, m, 0.0);
    for (Index j = 0; j < 10; ++j)
      CHECK(out[j] == doctest::Approx(j + quad.offset[m]).epsilon(1e-13));
  }

  CHECK_THROWS_AS(step2_quadrature(linear, Scheme::Upwind3, 2, 0.0), InputError);
  CHECK_THROWS_AS(step2_quadrature(linear, Scheme::Upwind5, 3, 0.0), InputError);
}

TEST_CASE("step2: split formula equals the signed ideal combination") {
  std::mt19937_64 gen(41);
  std::normal_distribution<double> dist(0.0, 1.0);
  const auto& t = recon_tables(Scheme::Upwind5);
  for (int trial = 0; trial < 20; ++trial) {
    auto v = ghosted_line(8, [&](Index) { return dist(gen); });
    VectorXd split = step2_quadrature(v, Scheme::Upwind5, 1, 0.0);
    // Direct evaluation with the signed ideal weights.
    VectorXd direct(8);
    for (Index j = 0; j < 8; ++j) {
      double acc = 0;
      for (int r = 0; r <= 2; ++r) {
        double cand = 0;
        for (int l = 0; l <= 2; ++l) cand += t.c[1](r, l) * v[j + kGhost - r + l];
        acc += t.gamma[1][r] * cand;
      }
      direct[j] = acc;
    }
    CHECK((split - direct).cwiseAbs().maxCoeff() <
          1e-12 * (1.0 + direct.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("reconstruct_faces: constant field gives constants everywhere") {
  for (Scheme s : {Scheme::Upwind3, Scheme::Upwind5, Scheme::Weno5}) {
    MatrixXd ghosted = MatrixXd::Constant(14, 12, 0.7);
    for (Axis axis : {Axis::X, Axis::Y}) {
      auto faces = reconstruct_faces(ghosted, axis, s, 0.1, 0.1);
      CHECK((faces.minus.array() - 0.7).abs().maxCoeff() < 1e-13);
      CHECK((faces.plus.array() - 0.7).abs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("reconstruct_faces: separable quadratic field, Upwind5 exact") {
  const Index n = 12;
  const double h = 1.0 / n;
  auto a = [](double x) { return 1.0 + 2.0 * x - x * x; };
  auto b = [](double y) { return 2.0 - y + 0.3 * y * y; };
  // Cell average of a quadratic: value at center + (h^2/24) * second derivative.
  auto avg_a = [&](Index i) { return a((i + 0.5) * h) + h * h / 24.0 * (-2.0); };
  auto avg_b = [&](Index j) { return b((j + 0.5) * h) + h * h / 24.0 * 0.6; };
  MatrixXd ghosted(n + 6, n + 6);
  for (Index i = 0; i < n + 6; ++i)
    for (Index j = 0; j < n + 6; ++j)
      ghosted(i, j) = avg_a(i - kGhost) * avg_b(j - kGhost);

  auto faces = reconstruct_faces(ghosted, Axis::X, Scheme::Upwind5, h, h);
  auto quad = gauss_rule(3);
  for (Index k = 0; k <= n; ++k)
    for (Index j = 0; j < n; ++j)
      for (int m = 0; m < 3; ++m) {
        const double exact = a(k * h) * b((j + 0.5 + quad.offset[m]) * h);
        CHECK(faces.minus(k, j * 3 + m) == doctest::Approx(exact).epsilon(1e-11));
        CHECK(faces.plus(k, j * 3 + m) == doctest::Approx(exact).epsilon(1e-11));
      }
}

TEST_CASE("reconstruct_faces: WENO5 approaches Upwind5 at fifth order") {
  // Richardson comparison on a smooth sine field at two grids.
  auto max_gap = [](Index n) {
    const double h = 1.0 / n;
    MatrixXd ghosted(n + 6, n + 6);
    for (Index i = 0; i < n + 6; ++i)
      for (Index j = 0; j < n + 6; ++j)
        ghosted(i, j) = sine_cell_average((i - kGhost + 0.5) * h, h) *
                        (1.2 + sine_cell_average((j - kGhost + 0.5) * h, h));
    auto w = reconstruct_faces(ghosted, Axis::X, Scheme::Weno5, h, h);
    auto u = reconstruct_faces(ghosted, Axis::X, Scheme::Upwind5, h, h);
    return (w.minus - u.minus).cwiseAbs().maxCoeff();
  };
  const double gap32 = max_gap(32);
  const double gap64 = max_gap(64);
  const double rate = std::log2(gap32 / gap64);
  CHECK(rate > 4.0);
  CHECK(rate < 6.5);
}

TEST_CASE("weno weights converge to ideal at second order") {
  // Largest weight deviation over all stencils of a sine line.
  auto weight_gap = [](Index n) {
    const double h = 1.0 / n;
    auto line = ghosted_line(
        n, [&](Index i) { return sine_cell_average((i + 0.5) * h, h); });
    double gap = 0;
    for (Index i = 0; i < n; ++i) {
      std::array<double, 5> v;
      for (int s = 0; s < 5; ++s) v[s] = line[i + kGhost - 2 + s];
      auto beta = smoothness_indicators<double>(v);
      auto w = weno_weights<double>(beta, {0.3, 0.6, 0.1}, h * h);
      gap = std::max({gap, std::abs(w[0] - 0.3), std::abs(w[1] - 0.6),
                      std::abs(w[2] - 0.1)});
    }
    return gap;
  };
  const double g64 = weight_gap(64);
  const double g128 = weight_gap(128);
  const double rate = std::log2(g64 / g128);
  CHECK(rate > 1.6);
  CHECK(rate < 2.4);
}

TEST_CASE("interface reconstruction converges at the formal order") {
  for (Scheme s : {Scheme::Upwind3, Scheme::Upwind5, Scheme::Weno5}) {
    const int p = order(s);
    std::vector<double> errors;
    for (Index n : {32, 64, 128, 256}) {
      const double h = 1.0 / n;
      auto line = ghosted_line(
          n, [&](Index i) { return sine_cell_average((i + 0.5) * h, h); });
      VectorXd s1 = step1_interface(line, s, Side::Minus, h * h);
      double err = 0;
      for (Index k = 0; k <= n; ++k)
        err = std::max(err, std::abs(s1[k] - std::sin(2 * M_PI * k * h)));
      VectorXd s2 = step2_quadrature(line, s, 0, h * h);
      const double delta = gauss_rule(quadrature_points(s)).offset[0];
      for (Index j = 0; j < n; ++j)
        err = std::max(err,
                       std::abs(s2[j] - std::sin(2 * M_PI * (j + 0.5 + delta) * h)));
      errors.push_back(err);
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
      const double rate = std::log2(errors[i - 1] / errors[i]);
      CHECK(rate > p - 0.3);
      CHECK(rate < p + 0.7);
    }
  }
}

TEST_CASE("tt linear reconstruction equals the dense path") {
  std::mt19937_64 gen(42);
  const Index n = 20;
  auto interior = random_tt(n, n, 3, gen);
  MatrixXd pad = periodic_pad_matrix(n);
  auto ghosted = apply_core_map(apply_core_map(interior, Axis::X, pad), Axis::Y, pad);
  MatrixXd ghosted_dense = to_full(ghosted);

  for (Scheme s : {Scheme::Upwind3, Scheme::Upwind5}) {
    TTReconContext ctx;
    ctx.scheme = s;
    for (Axis axis : {Axis::X, Axis::Y}) {
      auto tt_faces = reconstruct_faces(ghosted, axis, ctx);
      auto dn_faces = reconstruct_faces(ghosted_dense, axis, s, 1.0 / n, 1.0 / n);
      CHECK(tt_faces.minus.rank() == interior.rank());
      CHECK(tt_faces.plus.rank() == interior.rank());
      CHECK(rel_error(to_full(tt_faces.minus), dn_faces.minus) < 1e-12);
      CHECK(rel_error(to_full(tt_faces.plus), dn_faces.plus) < 1e-12);
    }
  }
}

TEST_CASE("tt linear reconstruction: rank-1 separable stays rank 1") {
  std::mt19937_64 gen(43);
  auto interior = random_tt(16, 16, 1, gen);
  MatrixXd pad = periodic_pad_matrix(16);
  auto ghosted = apply_core_map(apply_core_map(interior, Axis::X, pad), Axis::Y, pad);
  TTReconContext ctx;
  ctx.scheme = Scheme::Upwind5;
  auto faces = reconstruct_faces(ghosted, Axis::X, ctx);
  CHECK(faces.minus.rank() == 1);
  CHECK(faces.plus.rank() == 1);

  auto constant = TTMatrix<double>::constant(16 + 6, 16 + 6, 3.5);
  auto cfaces = reconstruct_faces(constant, Axis::Y, ctx);
  CHECK(cfaces.minus.rank() == 1);
  CHECK((to_full(cfaces.minus).array() - 3.5).abs().maxCoeff() < 1e-13);
}

TEST_CASE("tt WENO reconstruction matches the dense WENO path on smooth data") {
  const Index n = 24;
  const double h = 1.0 / n;
  MatrixXd interior(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      interior(i, j) = sine_cell_average((i + 0.5) * h, h) *
                       (2.0 + sine_cell_average((j + 0.5) * h, h));
  auto tt = tt_from_full(interior, 1e-13);
  MatrixXd pad = periodic_pad_matrix(n);
  auto ghosted = apply_core_map(apply_core_map(tt, Axis::X, pad), Axis::Y, pad);
  MatrixXd ghosted_dense = pad * interior * pad.transpose();

  TTReconContext ctx;
  ctx.scheme = Scheme::Weno5;
  ctx.eps_tt = 1e-10;
  ctx.dx = h;
  ctx.dy = h;
  for (Axis axis : {Axis::X, Axis::Y}) {
    auto tt_faces = reconstruct_faces(ghosted, axis, ctx);
    auto dn_faces = reconstruct_faces(ghosted_dense, axis, Scheme::Weno5, h, h);
    const double denom = std::sqrt(static_cast<double>(dn_faces.minus.size()));
    CHECK((to_full(tt_faces.minus) - dn_faces.minus).norm() / denom <= 1e-8);
    CHECK((to_full(tt_faces.plus) - dn_faces.plus).norm() / denom <= 1e-8);
  }
}

TEST_CASE("tt WENO reconstruction: constant field is exact at rank 1") {
  auto constant = TTMatrix<double>::constant(20 + 6, 20 + 6, -2.25);
  TTReconContext ctx;
  ctx.scheme = Scheme::Weno5;
  ctx.eps_tt = 1e-11;
  auto faces = reconstruct_faces(constant, Axis::X, ctx);
  CHECK(faces.minus.rank() == 1);
  CHECK((to_full(faces.minus).array() + 2.25).abs().maxCoeff() < 1e-12);
}

TEST_CASE("tt WENO reconstruction: no new extrema across a y-aligned step") {
  const Index n = 128;
  MatrixXd interior(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) interior(i, j) = (i < n / 2) ? 0.0 : 1.0;
  auto tt = tt_from_full(interior, 1e-14);
  MatrixXd pad_y = periodic_pad_matrix(n);
  // Extend the step field in x by replicating the boundary cells.
  MatrixXd pad_x = MatrixXd::Zero(n + 6, n);
  for (Index i = 0; i < n + 6; ++i)
    pad_x(i, std::clamp<Index>(i - kGhost, 0, n - 1)) = 1.0;
  auto ghosted = apply_core_map(apply_core_map(tt, Axis::X, pad_x), Axis::Y, pad_y);

  TTReconContext ctx;
  ctx.scheme = Scheme::Weno5;
  ctx.eps_tt = 1e-10;
  ctx.dx = 1.0 / n;
  ctx.dy = 1.0 / n;
  auto faces = reconstruct_faces(ghosted, Axis::X, ctx);
  MatrixXd minus = to_full(faces.minus);
  CHECK(minus.minCoeff() >= -1e-8);
  CHECK(minus.maxCoeff() <= 1.0 + 1e-8);

  // Dense WENO oracle on the same data.
  MatrixXd dense = reconstruct_faces(pad_x * interior * pad_y.transpose(), Axis::X,
                                     Scheme::Weno5, 1.0 / n, 1.0 / n)
                       .minus;
  CHECK((minus - dense).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("operator matrices: linear step maps reproduce the dense kernels") {
  std::mt19937_64 gen(44);
  const Index n = 10;
  MatrixXd ghosted = ttsw::testing::random_matrix(n + 6, n + 6, gen);
  for (Scheme s : {Scheme::Upwind3, Scheme::Upwind5}) {
    for (Side side : {Side::Minus, Side::Plus}) {
      MatrixXd via_matrix = step1_matrix(s, side, n) * ghosted;
      MatrixXd via_kernel = step1_dense(ghosted, Axis::X, s, side, 0.0);
      CHECK(rel_error(via_matrix, via_kernel) < 1e-13);
    }
    MatrixXd via_matrix = ghosted * quadrature_point_matrix(s, n).transpose();
    MatrixXd via_kernel = step2_dense(ghosted, Axis::Y, s, 0.0);
    CHECK(rel_error(via_matrix, via_kernel) < 1e-13);
  }
}

TEST_CASE("operator matrices: difference and periodic pad") {
  MatrixXd d = interface_difference_matrix(4);
  VectorXd v(5);
  v << 1, 3, 6, 10, 15;
  VectorXd dv = d * v;
  CHECK(dv[0] == 2.0);
  CHECK(dv[3] == 5.0);

  MatrixXd p = periodic_pad_matrix(5);
  VectorXd w(5);
  w << 0, 1, 2, 3, 4;
  VectorXd pw = p * w;
  CHECK(pw[0] == 2.0);  // ghost -3 wraps to cell 2
  CHECK(pw[kGhost] == 0.0);
  CHECK(pw[kGhost + 5] == 0.0);  // ghost n wraps to cell 0
  CHECK(pw[kGhost + 7] == 2.0);
}
