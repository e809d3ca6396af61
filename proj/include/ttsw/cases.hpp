#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttsw/swe.hpp"

namespace ttsw {

enum class CaseId { Kelvin, InertiaGravity, BarotropicTide, Manufactured };
enum class Boundary { Periodic, DirichletExact };

/// Characteristic scales of a verification case (dimensional, SI units).
struct RefScales {
  double length = 1.0;    // L* (m)
  double velocity = 1.0;  // U* (m/s)
  double height = 1.0;    // H* (m)

  double time() const { return length / velocity; }
  double gravity() const { return velocity * velocity / height; }
  double frequency() const { return velocity / length; }
};

/// Two-way scaling between dimensional and nondimensional quantities.
struct Nondimensionalizer {
  RefScales ref;

  double length(double m) const { return m / check(ref.length); }
  double velocity(double v) const { return v / check(ref.velocity); }
  double height(double h) const { return h / check(ref.height); }
  double time(double s) const { return s / check(ref.time()); }
  double gravity(double g) const { return g / check(ref.gravity()); }
  double frequency(double f) const { return f / check(ref.frequency()); }

  double length_dim(double x) const { return x * ref.length; }
  double velocity_dim(double u) const { return u * ref.velocity; }
  double height_dim(double h) const { return h * ref.height; }
  double time_dim(double t) const { return t * ref.time(); }
  double gravity_dim(double g) const { return g * ref.gravity(); }
  double frequency_dim(double f) const { return f * ref.frequency(); }

  PhysParams params(const PhysParams& dim) const {
    return {gravity(dim.g), frequency(dim.f), height(dim.H)};
  }

 private:
  static double check(double scale) {
    if (scale <= 0.0) throw InputError("Nondimensionalizer: scale must be positive");
    return scale;
  }
};

struct WaveMode {
  double amp = 0.0;    // nondimensional amplitude
  double kx = 0.0;     // nondimensional wavenumbers
  double ky = 0.0;
  double omega = 0.0;  // nondimensional frequency
};

/// One verification case: model, scales, nondimensional parameters, wave
/// content, boundary treatment, and the published run constants per scheme.
struct CaseSpec {
  CaseId id = CaseId::Kelvin;
  std::string name;
  Model model = Model::Linear;
  RefScales scales;
  PhysParams dimensional;  // g*, f*, H* in SI units
  PhysParams params;       // nondimensional counterparts
  double domain_length_m = 1.0;
  double final_time_s = 0.0;
  Boundary bc_x = Boundary::Periodic;
  Boundary bc_y = Boundary::Periodic;
  std::array<double, 3> dt_ratio{};  // indexed by Scheme
  std::array<double, 3> c_eps{};
  std::vector<WaveMode> modes;
  double u_amp = 0.0;        // manufactured velocity amplitude (nondimensional)
  bool mms_source = false;   // manufactured forcing active

  double length() const { return domain_length_m / scales.length; }
  double final_time() const { return final_time_s / scales.time(); }
  double dt_ratio_for(Scheme s) const { return dt_ratio[static_cast<int>(s)]; }
  double c_eps_for(Scheme s) const { return c_eps[static_cast<int>(s)]; }
};

CaseSpec case_spec(CaseId id);
const std::vector<std::pair<std::string, CaseId>>& case_registry();
std::optional<CaseId> parse_case_id(std::string_view name);

struct PrimitiveState {
  double eta = 0.0;
  double u = 0.0;
  double v = 0.0;
};

/// Closed-form exact solution in nondimensional variables.
PrimitiveState exact_solution(const CaseSpec& spec, double x, double y, double t);

/// Conserved components of the exact solution: (eta, u, v) linear,
/// (h, hu, hv) nonlinear.
std::array<double, 3> exact_conserved(const CaseSpec& spec, double x, double y, double t);

/// Manufactured-solution source for the nonlinear system (nondimensional
/// closed form); zero for the other cases.
std::array<double, 3> mms_source(const CaseSpec& spec, double x, double y, double t);

/// Tensor-product Gauss cell averages of a pointwise function.
MatrixXd cell_average_field(const Grid& grid, int n_q,
                            const std::function<double(double, double)>& f);

/// Exact cell averages of conserved component c at time t.
MatrixXd exact_cell_averages(const CaseSpec& spec, const Grid& grid, double t, int n_q,
                             int component);

/// Quadrature initial condition; the TT variant compresses it at eps_tt.
template <class Rep>
State<Rep> init_cell_averages(const CaseSpec& spec, const Grid& grid, Scheme scheme,
                              double eps_tt) {
  State<Rep> state;
  state.model = spec.model;
  const int n_q = quadrature_points(scheme);
  for (int c = 0; c < 3; ++c)
    state.q[c] = Rep::compress(exact_cell_averages(spec, grid, 0.0, n_q, c), eps_tt);
  return state;
}

namespace detail {

MatrixXd dense_ghosted(const MatrixXd& interior, const CaseSpec& spec, const Grid& grid,
                       double t, int n_q, int component);

TTMatrix<double> tt_ghosted(const TTMatrix<double>& interior, const CaseSpec& spec,
                            const Grid& grid, double t, int n_q, int component,
                            double eps_tt);

}  // namespace detail

/// Ghost-augmented fields: periodic axes copy wrapped interior averages;
/// Dirichlet axes take exact-solution cell averages at time t. The TT path
/// pads the axis core and adds a rank-additive exact strip, rounded at eps_tt.
template <class Rep>
std::array<typename Rep::Field, 3> fill_ghost(const State<Rep>& u, const CaseSpec& spec,
                                              const Grid& grid, double t, int n_q,
                                              double eps_tt) {
  std::array<typename Rep::Field, 3> out;
  for (int c = 0; c < 3; ++c) {
    if constexpr (Rep::is_tt)
      out[c] = detail::tt_ghosted(u.q[c], spec, grid, t, n_q, c, eps_tt);
    else
      out[c] = detail::dense_ghosted(u.q[c], spec, grid, t, n_q, c);
  }
  return out;
}

/// Cell-averaged manufactured forcing at time t (zero triple when inactive).
template <class Rep>
std::array<typename Rep::Field, 3> mms_source_averages(const CaseSpec& spec,
                                                       const Grid& grid, Scheme scheme,
                                                       double t, double eps_tt) {
  std::array<typename Rep::Field, 3> out;
  const int n_q = quadrature_points(scheme);
  for (int c = 0; c < 3; ++c) {
    MatrixXd avg = cell_average_field(grid, n_q, [&](double x, double y) {
      return mms_source(spec, x, y, t)[c];
    });
    out[c] = Rep::compress(avg, eps_tt);
  }
  return out;
}

/// Hooks binding a case to the semidiscrete right-hand side; rebuilt whenever
/// the rounding tolerance changes (once per step in TT runs).
template <class Rep>
RhsHooks<Rep> make_rhs_hooks(const CaseSpec& spec, const Grid& grid, Scheme scheme,
                             double eps_global) {
  RhsHooks<Rep> hooks;
  const int n_q = quadrature_points(scheme);
  hooks.fill_ghost = [&spec, &grid, n_q, eps_global](const State<Rep>& u, double t) {
    return fill_ghost<Rep>(u, spec, grid, t, n_q, eps_global);
  };
  if (spec.mms_source) {
    hooks.extra_source = [&spec, &grid, scheme, eps_global](double t) {
      return mms_source_averages<Rep>(spec, grid, scheme, t, eps_global);
    };
  }
  return hooks;
}

}  // namespace ttsw
