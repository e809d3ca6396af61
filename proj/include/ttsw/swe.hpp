#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <variant>

#include "ttsw/cross.hpp"
#include "ttsw/reconstruction.hpp"
#include "ttsw/tt.hpp"
#include "ttsw/types.hpp"

namespace ttsw {

enum class Model { Linear, Nonlinear };

/// Nondimensional physical parameters (the same structure holds the
/// dimensional ones before scaling).
struct PhysParams {
  double g = 10.0;   // gravity
  double f = 1e-4;   // Coriolis parameter
  double H = 1000.0; // mean rest depth

  double gravity_wave_speed() const { return std::sqrt(g * H); }
  double rossby_radius() const { return gravity_wave_speed() / f; }
};

struct Grid {
  Index nx = 0, ny = 0;
  double x0 = 0.0, y0 = 0.0;
  double lx = 1.0, ly = 1.0;

  double dx() const { return lx / static_cast<double>(nx); }
  double dy() const { return ly / static_cast<double>(ny); }
  double volume() const { return lx * ly; }
  double x_center(Index i) const { return x0 + (static_cast<double>(i) + 0.5) * dx(); }
  double y_center(Index j) const { return y0 + (static_cast<double>(j) + 0.5) * dy(); }
};

// Negative tolerance disables rounding in the TT representation.
inline constexpr double kNoRound = -1.0;

/// Full-tensor representation: fields are dense cell-average matrices and all
/// tolerance arguments are ignored.
struct DenseRep {
  using Field = MatrixXd;
  static constexpr bool is_tt = false;

  static Index rows(const Field& x) { return x.rows(); }
  static Index cols(const Field& x) { return x.cols(); }
  static Index rank(const Field&) { return 0; }
  static double norm(const Field& x) { return x.norm(); }
  static MatrixXd dense(const Field& x) { return x; }
  static Field compress(const MatrixXd& x, double) { return x; }
  static Field round_to(const Field& x, double) { return x; }
  static Field zero_like(const Field& x) { return MatrixXd::Zero(x.rows(), x.cols()); }
  static Field scaled(const Field& x, double a) { return a * x; }
  static Field axpy(double a, const Field& x, double b, const Field& y, double) {
    return a * x + b * y;
  }
  static Field mul(const Field& x, const Field& y, double) { return x.cwiseProduct(y); }
  static Field lin(Axis axis, const MatrixXd& m, const Field& x) {
    return axis == Axis::X ? Field(m * x) : Field(x * m.transpose());
  }
  static Field recip(const Field& x, double) {
    if ((x.array() == 0.0).any()) throw StateError("recip: field has zero entries");
    return x.cwiseInverse();
  }
  static Field elementwise(const EntryFn<double>& f, std::span<const Field> ops,
                           const Field&, double, const CrossConfig&) {
    Field out(ops[0].rows(), ops[0].cols());
    std::vector<double> v(ops.size());
    for (Index j = 0; j < out.cols(); ++j)
      for (Index i = 0; i < out.rows(); ++i) {
        for (std::size_t k = 0; k < ops.size(); ++k) v[k] = ops[k](i, j);
        out(i, j) = f(std::span<const double>(v));
      }
    return out;
  }
};

/// Tensor-train representation: fields are two-core TT matrices, rounded at
/// the tolerance passed to each operation.
struct TTRep {
  using Field = TTMatrix<double>;
  static constexpr bool is_tt = true;

  static Index rows(const Field& x) { return x.rows(); }
  static Index cols(const Field& x) { return x.cols(); }
  static Index rank(const Field& x) { return x.rank(); }
  static double norm(const Field& x) { return norm_fro(x); }
  static MatrixXd dense(const Field& x) { return to_full(x); }
  static Field compress(const MatrixXd& x, double eps) {
    return tt_from_full(x, eps < 0 ? 0.0 : eps);
  }
  static Field round_to(const Field& x, double eps) {
    return eps < 0 ? x : round(x, eps);
  }
  static Field zero_like(const Field& x) {
    return TTMatrix<double>::zero(x.rows(), x.cols());
  }
  static Field scaled(const Field& x, double a) { return scale(x, a); }
  static Field axpy(double a, const Field& x, double b, const Field& y, double eps) {
    return round_to(add(scale(x, a), scale(y, b)), eps);
  }
  static Field mul(const Field& x, const Field& y, double eps) {
    return round_to(hadamard(x, y), eps);
  }
  static Field lin(Axis axis, const MatrixXd& m, const Field& x) {
    return apply_core_map(x, axis, m);
  }
  static Field recip(const Field& x, double eps) { return reciprocal_taylor(x, eps); }
  static Field elementwise(const EntryFn<double>& f, std::span<const Field> ops,
                           const Field& guess, double eps, const CrossConfig& base) {
    CrossConfig cfg = base;
    cfg.eps = eps;
    return cross_elementwise(f, ops, guess, cfg);
  }
};

/// Three-component conserved state: (eta, u, v) for the linear model,
/// (h, hu, hv) for the nonlinear one.
template <class Rep>
struct State {
  Model model = Model::Linear;
  std::array<typename Rep::Field, 3> q;
};

using DenseState = State<DenseRep>;
using TTState = State<TTRep>;

// --- epsilon policy ---------------------------------------------------------

struct EpsPolicy {
  double c_eps = 1.0;
  int order = 3;        // scheme order p
  double volume = 1.0;  // domain volume
  double clip = 1e-3;
};

/// Shared rounding tolerance: C_eps V^(1/2) dx^(p-1/2) / max_q ||q||_F,
/// falling back to the clip value when every component vanishes.
inline double eps_global(const EpsPolicy& p, double dx, double max_norm) {
  if (max_norm <= 0.0) return p.clip;
  return p.c_eps * std::sqrt(p.volume) * std::pow(dx, p.order - 0.5) / max_norm;
}

/// Per-variable tolerance, clipped so a vanishing component cannot drive the
/// tolerance into the numerical noise.
inline double eps_for_variable(double q_norm, const EpsPolicy& p, double dx) {
  if (q_norm <= 0.0) return p.clip;
  const double value = p.c_eps * std::sqrt(p.volume) * std::pow(dx, p.order - 0.5) / q_norm;
  return std::min(p.clip, value);
}

struct EpsSchedule {
  std::array<double, 3> var{kNoRound, kNoRound, kNoRound};
  double global = kNoRound;
};

struct EpsCounters {
  long per_variable_calls = 0;
  long schedules = 0;
};

/// Tolerances for one time step: recomputed once per step, per component.
template <class Rep>
EpsSchedule compute_eps_schedule(const State<Rep>& u, const EpsPolicy& policy, double dx,
                                 EpsCounters* counters = nullptr) {
  EpsSchedule eps;
  double max_norm = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double n = Rep::norm(u.q[c]);
    eps.var[c] = eps_for_variable(n, policy, dx);
    max_norm = std::max(max_norm, n);
  }
  eps.global = eps_global(policy, dx, max_norm);
  if (counters) {
    counters->per_variable_calls += 3;
    counters->schedules += 1;
  }
  return eps;
}

// --- physics ----------------------------------------------------------------

/// Physical flux triple in one direction at given state values. The linear
/// fluxes are plain component scalings; the nonlinear ones are assembled from
/// elementwise products, rounded at eps after each product and sum.
template <class Rep>
std::array<typename Rep::Field, 3> physical_flux(
    const std::array<typename Rep::Field, 3>& u, Axis direction, Model model,
    const PhysParams& p, double eps) {
  using F = typename Rep::Field;
  if (model == Model::Linear) {
    // F = (H u, g eta, 0), G = (H v, 0, g eta)
    const F zero = Rep::zero_like(u[0]);
    if (direction == Axis::X)
      return {Rep::scaled(u[1], p.H), Rep::scaled(u[0], p.g), zero};
    return {Rep::scaled(u[2], p.H), zero, Rep::scaled(u[0], p.g)};
  }
  // Nonlinear: u = (h, hu, hv).
  const F inv_h = Rep::recip(u[0], eps);
  const F vel_x = Rep::mul(u[1], inv_h, eps);
  const F vel_y = Rep::mul(u[2], inv_h, eps);
  const F pressure = Rep::scaled(Rep::mul(u[0], u[0], eps), 0.5 * p.g);
  if (direction == Axis::X) {
    return {u[1], Rep::axpy(1.0, Rep::mul(u[1], vel_x, eps), 1.0, pressure, eps),
            Rep::mul(u[1], vel_y, eps)};
  }
  return {u[2], Rep::mul(u[2], vel_x, eps),
          Rep::axpy(1.0, Rep::mul(u[2], vel_y, eps), 1.0, pressure, eps)};
}

/// Linear-model wave speed sqrt(gH); constant over the field.
inline double wave_speed(const PhysParams& p) { return p.gravity_wave_speed(); }

/// Nonlinear wave speed field |vel| + sqrt(g h), elementwise in the dense
/// representation and via cross interpolation in TT.
template <class Rep>
typename Rep::Field wave_speed(const std::array<typename Rep::Field, 3>& u,
                               Axis direction, const PhysParams& p, double eps,
                               const CrossConfig& cross = {}) {
  const double g = p.g;
  EntryFn<double> f = [g](std::span<const double> v) {
    if (v[0] <= 0.0) throw std::domain_error("nonpositive layer thickness");
    return std::abs(v[1] / v[0]) + std::sqrt(g * v[0]);
  };
  const auto& mom = (direction == Axis::X) ? u[1] : u[2];
  std::array<typename Rep::Field, 2> ops{u[0], mom};
  return Rep::elementwise(f, std::span<const typename Rep::Field>(ops), u[0], eps, cross);
}

/// Local Lax-Friedrichs flux with a scalar dissipation speed.
template <class Rep>
std::array<typename Rep::Field, 3> llf_flux(
    const std::array<typename Rep::Field, 3>& u_minus,
    const std::array<typename Rep::Field, 3>& u_plus,
    const std::array<typename Rep::Field, 3>& f_minus,
    const std::array<typename Rep::Field, 3>& f_plus, double lambda, double eps) {
  std::array<typename Rep::Field, 3> out;
  for (int c = 0; c < 3; ++c) {
    auto central = Rep::axpy(0.5, f_minus[c], 0.5, f_plus[c], eps);
    auto jump = Rep::axpy(1.0, u_plus[c], -1.0, u_minus[c], eps);
    out[c] = Rep::axpy(1.0, central, -0.5 * lambda, jump, eps);
  }
  return out;
}

/// Local Lax-Friedrichs flux with a dissipation-speed field.
template <class Rep>
std::array<typename Rep::Field, 3> llf_flux(
    const std::array<typename Rep::Field, 3>& u_minus,
    const std::array<typename Rep::Field, 3>& u_plus,
    const std::array<typename Rep::Field, 3>& f_minus,
    const std::array<typename Rep::Field, 3>& f_plus,
    const typename Rep::Field& lambda, double eps) {
  std::array<typename Rep::Field, 3> out;
  for (int c = 0; c < 3; ++c) {
    auto central = Rep::axpy(0.5, f_minus[c], 0.5, f_plus[c], eps);
    auto jump = Rep::axpy(1.0, u_plus[c], -1.0, u_minus[c], eps);
    out[c] = Rep::axpy(1.0, central, -0.5, Rep::mul(lambda, jump, eps), eps);
  }
  return out;
}

/// Coriolis source (0, f q3, -f q2); the same component pattern covers both
/// models.
template <class Rep>
std::array<typename Rep::Field, 3> coriolis_source(
    const std::array<typename Rep::Field, 3>& u, Model, const PhysParams& p) {
  return {Rep::zero_like(u[0]), Rep::scaled(u[2], p.f), Rep::scaled(u[1], -p.f)};
}

// --- semidiscrete right-hand side --------------------------------------------

template <class Rep>
struct RhsHooks {
  /// Ghost-augmented fields of the state at time t, (nx+6) x (ny+6) each.
  std::function<std::array<typename Rep::Field, 3>(const State<Rep>&, double)> fill_ghost;
  /// Optional extra cell-average source (manufactured forcing) at time t.
  std::function<std::array<typename Rep::Field, 3>(double)> extra_source;
};

struct SolverOptions {
  Scheme scheme = Scheme::Upwind3;
  Model model = Model::Linear;
  PhysParams params;
  CrossConfig cross;
  bool debug_positivity = false;
  // Tolerance floor for the dissipation-speed cross. The speed field carries
  // |u| kinks that a low-rank interpolant cannot resolve to state-rounding
  // accuracy, while the flux only needs it at dissipation-term accuracy.
  double lambda_eps_floor = 1e-6;
};

namespace detail {

template <class Rep>
std::array<typename Rep::Field, 3> reconstruct_components(
    const std::array<typename Rep::Field, 3>& ghosted, Axis axis, Side side,
    const SolverOptions& opt, const Grid& grid, double eps_tt) {
  std::array<typename Rep::Field, 3> out;
  for (int c = 0; c < 3; ++c) {
    if constexpr (Rep::is_tt) {
      TTReconContext ctx;
      ctx.scheme = opt.scheme;
      ctx.eps_tt = eps_tt < 0 ? 1e-14 : eps_tt;
      ctx.cross = opt.cross;
      ctx.dx = grid.dx();
      ctx.dy = grid.dy();
      auto faces = reconstruct_faces(ghosted[c], axis, ctx);
      out[c] = (side == Side::Minus) ? faces.minus : faces.plus;
    } else {
      auto faces = reconstruct_faces(ghosted[c], axis, opt.scheme, grid.dx(), grid.dy());
      out[c] = (side == Side::Minus) ? faces.minus : faces.plus;
    }
  }
  return out;
}

/// Dissipation speed for one face batch: the max over both reconstructed
/// sides (a scalar) in the dense representation, a pointwise max field built
/// by cross interpolation in TT.
template <class Rep>
std::variant<double, typename Rep::Field> face_wave_speed(
    const std::array<typename Rep::Field, 3>& u_minus,
    const std::array<typename Rep::Field, 3>& u_plus, Axis axis,
    const SolverOptions& opt, double eps) {
  if (opt.model == Model::Linear) return wave_speed(opt.params);
  const int mom = (axis == Axis::X) ? 1 : 2;
  const double g = opt.params.g;
  if constexpr (!Rep::is_tt) {
    auto side_max = [&](const auto& u) {
      const auto& h = u[0];
      if ((h.array() <= 0.0).any())
        throw StateError("face_wave_speed: nonpositive layer thickness");
      return ((u[mom].array() / h.array()).abs() + (g * h.array()).sqrt()).maxCoeff();
    };
    return std::max(side_max(u_minus), side_max(u_plus));
  } else {
    EntryFn<double> f = [g](std::span<const double> v) {
      if (v[0] <= 0.0 || v[2] <= 0.0)
        throw std::domain_error("nonpositive layer thickness");
      return std::max(std::abs(v[1] / v[0]) + std::sqrt(g * v[0]),
                      std::abs(v[3] / v[2]) + std::sqrt(g * v[2]));
    };
    std::array<typename Rep::Field, 4> ops{u_minus[0], u_minus[mom], u_plus[0],
                                           u_plus[mom]};
    const double lambda_eps = std::max(eps, opt.lambda_eps_floor);
    return Rep::elementwise(f, std::span<const typename Rep::Field>(ops), u_minus[0],
                            lambda_eps, opt.cross);
  }
}

}  // namespace detail

/// Semidiscrete tendency -(T^x - 1) Fhat / dx - (T^y - 1) Ghat / dy + S with
/// quadrature-summed LLF interface fluxes. TT fields are rounded at the global
/// tolerance inside the flux assembly (nonlinear model only) and at the
/// per-variable tolerance for the final tendency of each component.
template <class Rep>
State<Rep> rhs(const State<Rep>& u, double t, const Grid& grid, const SolverOptions& opt,
               const RhsHooks<Rep>& hooks, const EpsSchedule& eps) {
  using F = typename Rep::Field;
  const double flux_eps = (opt.model == Model::Nonlinear) ? eps.global : kNoRound;

  auto ghosted = hooks.fill_ghost(u, t);

  if (opt.debug_positivity && opt.model == Model::Nonlinear) {
    const MatrixXd h = Rep::dense(u.q[0]);
    if ((h.array() <= 0.0).any())
      throw StateError("rhs: nonpositive layer thickness in the interior");
  }

  std::array<F, 3> flux_div;
  for (Axis axis : {Axis::X, Axis::Y}) {
    auto u_minus = detail::reconstruct_components<Rep>(ghosted, axis, Side::Minus, opt,
                                                       grid, eps.global);
    auto u_plus = detail::reconstruct_components<Rep>(ghosted, axis, Side::Plus, opt,
                                                      grid, eps.global);
    auto f_minus = physical_flux<Rep>(u_minus, axis, opt.model, opt.params, flux_eps);
    auto f_plus = physical_flux<Rep>(u_plus, axis, opt.model, opt.params, flux_eps);
    auto lambda = detail::face_wave_speed<Rep>(u_minus, u_plus, axis, opt, eps.global);

    std::array<F, 3> fhat;
    if (std::holds_alternative<double>(lambda))
      fhat = llf_flux<Rep>(u_minus, u_plus, f_minus, f_plus, std::get<double>(lambda),
                           flux_eps);
    else
      fhat = llf_flux<Rep>(u_minus, u_plus, f_minus, f_plus,
                           std::get<F>(lambda), flux_eps);

    const Index n_axis = (axis == Axis::X) ? grid.nx : grid.ny;
    const Index n_trans = (axis == Axis::X) ? grid.ny : grid.nx;
    const Axis trans = (axis == Axis::X) ? Axis::Y : Axis::X;
    const MatrixXd w = quadrature_sum_matrix(opt.scheme, n_trans);
    const MatrixXd d = interface_difference_matrix(n_axis);
    const double inv_spacing = (axis == Axis::X) ? 1.0 / grid.dx() : 1.0 / grid.dy();

    for (int c = 0; c < 3; ++c) {
      F integrated = Rep::lin(trans, w, fhat[c]);
      F difference = Rep::lin(axis, d, integrated);
      if (axis == Axis::X)
        flux_div[c] = Rep::scaled(difference, inv_spacing);
      else
        flux_div[c] = Rep::axpy(1.0, flux_div[c], inv_spacing, difference, flux_eps);
    }
  }

  auto source = coriolis_source<Rep>(u.q, opt.model, opt.params);
  if (hooks.extra_source) {
    auto extra = hooks.extra_source(t);
    for (int c = 0; c < 3; ++c)
      source[c] = Rep::axpy(1.0, source[c], 1.0, extra[c], flux_eps);
  }

  State<Rep> out;
  out.model = u.model;
  for (int c = 0; c < 3; ++c)
    out.q[c] = Rep::axpy(-1.0, flux_div[c], 1.0, source[c], eps.var[c]);
  return out;
}

/// Third-order strong-stability-preserving Runge-Kutta step. Each forward
/// Euler stage and each stage combination is rounded at the per-variable
/// tolerances, which stay frozen for the whole step.
template <class Rep, class RhsFn>
State<Rep> ssprk3(const State<Rep>& u, double t, double dt, const RhsFn& rhs_fn,
                  const EpsSchedule& eps) {
  if (!(dt > 0)) throw InputError("ssprk3: dt must be positive");
  auto euler = [&](const State<Rep>& w, double tw) {
    State<Rep> k = rhs_fn(w, tw);
    State<Rep> out;
    out.model = u.model;
    for (int c = 0; c < 3; ++c)
      out.q[c] = Rep::axpy(1.0, w.q[c], dt, k.q[c], eps.var[c]);
    return out;
  };

  State<Rep> u1 = euler(u, t);
  State<Rep> f1 = euler(u1, t + dt);
  State<Rep> u2;
  u2.model = u.model;
  for (int c = 0; c < 3; ++c)
    u2.q[c] = Rep::axpy(0.75, u.q[c], 0.25, f1.q[c], eps.var[c]);

  State<Rep> f2 = euler(u2, t + 0.5 * dt);
  State<Rep> out;
  out.model = u.model;
  for (int c = 0; c < 3; ++c)
    out.q[c] = Rep::axpy(1.0 / 3.0, u.q[c], 2.0 / 3.0, f2.q[c], eps.var[c]);
  return out;
}

}  // namespace ttsw
