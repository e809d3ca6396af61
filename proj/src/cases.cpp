#include "ttsw/cases.hpp"

#include <cmath>

namespace ttsw {

namespace {

constexpr double kPi = 3.14159265358979323846;

CaseSpec make_kelvin() {
  CaseSpec s;
  s.id = CaseId::Kelvin;
  s.name = "kelvin";
  s.model = Model::Linear;
  s.scales = {5e6, 5e-3, 0.1};
  s.dimensional = {10.0, 1e-4, 1000.0};
  s.domain_length_m = 5e6;
  s.final_time_s = 3.0 * 3600.0;
  s.bc_x = Boundary::DirichletExact;
  s.bc_y = Boundary::Periodic;
  s.dt_ratio = {5e-5, 2.5e-4, 2.5e-4};
  s.c_eps = {1.0, 1.0, 1000.0};
  // Two wave modes; the amplitudes enter the solution multiplied by H.
  s.modes = {{1e-4, 0.0, 2.0 * kPi, 0.0}, {2e-4, 0.0, 4.0 * kPi, 0.0}};
  return s;
}

CaseSpec make_inertia_gravity() {
  CaseSpec s;
  s.id = CaseId::InertiaGravity;
  s.name = "inertia-gravity";
  s.model = Model::Linear;
  s.scales = {1e7, 1.622e-3, 0.2};
  s.dimensional = {10.0, 1e-4, 1000.0};
  s.domain_length_m = 1e7;
  s.final_time_s = 3.0 * 3600.0;
  s.bc_x = Boundary::Periodic;
  s.bc_y = Boundary::Periodic;
  s.dt_ratio = {1e-4, 1e-3, 1e-3};
  s.c_eps = {1.0, 1.0, 500.0};
  s.modes = {{0.1, 2.0 * kPi, 2.0 * kPi, 0.0}, {0.2, 4.0 * kPi, 4.0 * kPi, 0.0}};
  return s;
}

CaseSpec make_barotropic_tide() {
  CaseSpec s;
  s.id = CaseId::BarotropicTide;
  s.name = "barotropic-tide";
  s.model = Model::Linear;
  s.scales = {25e4, 3.163e-3, 0.2};
  s.dimensional = {10.0, 1e-4, 200.0};
  s.domain_length_m = 25e4;
  s.final_time_s = 30.0 * 60.0;
  s.bc_x = Boundary::DirichletExact;
  s.bc_y = Boundary::Periodic;
  s.dt_ratio = {2.5e-4, 5e-4, 5e-4};
  s.c_eps = {1.0, 1.0, 1.0};
  // Wavelengths 4L/5 and 4L/9 chosen for tidal resonance.
  s.modes = {{0.2, 2.5 * kPi, 0.0, 0.0}, {0.4, 4.5 * kPi, 0.0, 0.0}};
  return s;
}

CaseSpec make_manufactured() {
  CaseSpec s;
  s.id = CaseId::Manufactured;
  s.name = "manufactured";
  s.model = Model::Nonlinear;
  s.scales = {1e7, 1e-2, 500.0};
  s.dimensional = {10.0, 1e-4, 1000.0};
  s.domain_length_m = 1e7;
  s.final_time_s = 3.0 * 3600.0;
  s.bc_x = Boundary::Periodic;
  s.bc_y = Boundary::Periodic;
  s.dt_ratio = {5e-5, 5e-3, 5e-3};
  s.c_eps = {1e-4, 1.0, 1.0};
  s.modes = {{1e-2, 2.0 * kPi, 2.0 * kPi, 0.0}};
  s.u_amp = 1e-2;  // m/s, scaled in finalize()
  s.mms_source = true;
  return s;
}

void finalize(CaseSpec& s) {
  const Nondimensionalizer nd{s.scales};
  s.params = nd.params(s.dimensional);
  const double c = s.params.gravity_wave_speed();
  const double f = s.params.f;
  switch (s.id) {
    case CaseId::Kelvin:
      break;  // nondispersive: the phase speed c enters the formulas directly
    case CaseId::InertiaGravity:
      for (auto& m : s.modes) {
        m.amp = nd.height(m.amp);
        m.omega = std::sqrt(c * c * (m.kx * m.kx + m.ky * m.ky) + f * f);
      }
      break;
    case CaseId::BarotropicTide:
      for (auto& m : s.modes) {
        m.amp = nd.height(m.amp);
        m.omega = std::sqrt(s.params.g * s.params.H * m.kx * m.kx + f * f);
      }
      break;
    case CaseId::Manufactured:
      for (auto& m : s.modes) {
        m.amp = nd.height(m.amp);
        m.omega = std::sqrt(c * c * (m.kx * m.kx + m.ky * m.ky));
      }
      s.u_amp = nd.velocity(s.u_amp);
      break;
  }
}

}  // namespace

CaseSpec case_spec(CaseId id) {
  CaseSpec s;
  switch (id) {
    case CaseId::Kelvin: s = make_kelvin(); break;
    case CaseId::InertiaGravity: s = make_inertia_gravity(); break;
    case CaseId::BarotropicTide: s = make_barotropic_tide(); break;
    case CaseId::Manufactured: s = make_manufactured(); break;
  }
  finalize(s);
  return s;
}

const std::vector<std::pair<std::string, CaseId>>& case_registry() {
  static const std::vector<std::pair<std::string, CaseId>> registry{
      {"kelvin", CaseId::Kelvin},
      {"inertia-gravity", CaseId::InertiaGravity},
      {"barotropic-tide", CaseId::BarotropicTide},
      {"manufactured", CaseId::Manufactured},
  };
  return registry;
}

std::optional<CaseId> parse_case_id(std::string_view name) {
  for (const auto& [key, id] : case_registry())
    if (key == name) return id;
  return std::nullopt;
}

PrimitiveState exact_solution(const CaseSpec& spec, double x, double y, double t) {
  const PhysParams& p = spec.params;
  const double c = p.gravity_wave_speed();
  PrimitiveState out;
  switch (spec.id) {
    case CaseId::Kelvin: {
      // Coastline at x = 0; the wave travels in -y and decays offshore.
      const double envelope = std::exp(-x / p.rossby_radius());
      double carrier = 0.0;
      for (const auto& m : spec.modes) carrier += m.amp * std::sin(m.ky * (y + c * t));
      out.eta = -p.H * carrier * envelope;
      out.u = 0.0;
      out.v = c * carrier * envelope;
      break;
    }
    case CaseId::InertiaGravity: {
      for (const auto& m : spec.modes) {
        const double phase = m.kx * x + m.ky * y - m.omega * t;
        const double cp = std::cos(phase), sp = std::sin(phase);
        const double amp = p.g * m.amp / (m.omega * m.omega - p.f * p.f);
        out.eta += m.amp * cp;
        out.u += amp * (m.omega * m.kx * cp - p.f * m.ky * sp);
        out.v += amp * (m.omega * m.ky * cp + p.f * m.kx * sp);
      }
      break;
    }
    case CaseId::BarotropicTide: {
      for (const auto& m : spec.modes) {
        const double amp = p.g * m.amp * m.kx / (m.omega * m.omega - p.f * p.f);
        out.eta += m.amp * std::cos(m.kx * x) * std::cos(m.omega * t);
        out.u += amp * m.omega * std::sin(m.kx * x) * std::sin(m.omega * t);
        out.v += amp * p.f * std::sin(m.kx * x) * std::cos(m.omega * t);
      }
      break;
    }
    case CaseId::Manufactured: {
      const auto& m = spec.modes[0];
      const double phase = m.kx * x + m.ky * y - m.omega * t;
      out.eta = m.amp * std::sin(phase);
      out.u = spec.u_amp * std::cos(phase);
      out.v = 0.0;
      break;
    }
  }
  return out;
}

std::array<double, 3> exact_conserved(const CaseSpec& spec, double x, double y,
                                      double t) {
  const PrimitiveState s = exact_solution(spec, x, y, t);
  if (spec.model == Model::Linear) return {s.eta, s.u, s.v};
  const double h = spec.params.H + s.eta;
  return {h, h * s.u, h * s.v};
}

std::array<double, 3> mms_source(const CaseSpec& spec, double x, double y, double t) {
  if (!spec.mms_source) return {0.0, 0.0, 0.0};
  const PhysParams& p = spec.params;
  const auto& m = spec.modes[0];
  const double A = m.amp, B = spec.u_amp;
  const double phase = m.kx * x + m.ky * y - m.omega * t;
  const double cp = std::cos(phase), sp = std::sin(phase);
  const double h = p.H + A * sp;

  // Residual of the nonlinear system on h = H + A sin, u = B cos, v = 0.
  const double h_t = -m.omega * A * cp;
  const double hu_x = m.kx * B * (A * cp * cp - h * sp);
  const double s1 = h_t + hu_x;

  const double hu_t = B * m.omega * (-A * cp * cp + h * sp);
  const double huu_x = m.kx * B * B * (A * cp * cp * cp - 2.0 * h * cp * sp);
  const double ghh_x = p.g * h * A * m.kx * cp;
  const double s2 = hu_t + huu_x + ghh_x;

  const double ghh_y = p.g * h * A * m.ky * cp;
  const double s3 = ghh_y + p.f * h * B * cp;
  return {s1, s2, s3};
}

MatrixXd cell_average_field(const Grid& grid, int n_q,
                            const std::function<double(double, double)>& f) {
  const auto quad = gauss_rule(n_q);
  MatrixXd out(grid.nx, grid.ny);
  for (Index i = 0; i < grid.nx; ++i) {
    const double xc = grid.x_center(i);
    for (Index j = 0; j < grid.ny; ++j) {
      const double yc = grid.y_center(j);
      double acc = 0.0;
      for (int a = 0; a < n_q; ++a)
        for (int b = 0; b < n_q; ++b)
          acc += quad.weight[a] * quad.weight[b] *
                 f(xc + quad.offset[a] * grid.dx(), yc + quad.offset[b] * grid.dy());
      out(i, j) = acc;
    }
  }
  return out;
}

namespace {

double exact_cell_average_at(const CaseSpec& spec, const Grid& grid, double t, int n_q,
                             int component, Index ii, Index jj) {
  const auto quad = gauss_rule(n_q);
  const double xc = grid.x0 + (static_cast<double>(ii) + 0.5) * grid.dx();
  const double yc = grid.y0 + (static_cast<double>(jj) + 0.5) * grid.dy();
  double acc = 0.0;
  for (int a = 0; a < n_q; ++a)
    for (int b = 0; b < n_q; ++b)
      acc += quad.weight[a] * quad.weight[b] *
             exact_conserved(spec, xc + quad.offset[a] * grid.dx(),
                             yc + quad.offset[b] * grid.dy(), t)[component];
  return acc;
}

}  // namespace

MatrixXd exact_cell_averages(const CaseSpec& spec, const Grid& grid, double t, int n_q,
                             int component) {
  MatrixXd out(grid.nx, grid.ny);
  for (Index i = 0; i < grid.nx; ++i)
    for (Index j = 0; j < grid.ny; ++j)
      out(i, j) = exact_cell_average_at(spec, grid, t, n_q, component, i, j);
  return out;
}

namespace detail {

MatrixXd dense_ghosted(const MatrixXd& interior, const CaseSpec& spec, const Grid& grid,
                       double t, int n_q, int component) {
  const Index nx = grid.nx, ny = grid.ny;
  MatrixXd out(nx + 2 * kGhost, ny + 2 * kGhost);
  for (Index i = 0; i < nx + 2 * kGhost; ++i) {
    for (Index j = 0; j < ny + 2 * kGhost; ++j) {
      Index ii = i - kGhost, jj = j - kGhost;
      bool exact = false;
      if (ii < 0 || ii >= nx) {
        if (spec.bc_x == Boundary::Periodic)
          ii = ((ii % nx) + nx) % nx;
        else
          exact = true;
      }
      if (jj < 0 || jj >= ny) {
        if (spec.bc_y == Boundary::Periodic)
          jj = ((jj % ny) + ny) % ny;
        else
          exact = true;
      }
      out(i, j) = exact ? exact_cell_average_at(spec, grid, t, n_q, component,
                                                i - kGhost, j - kGhost)
                        : interior(ii, jj);
    }
  }
  return out;
}

TTMatrix<double> tt_ghosted(const TTMatrix<double>& interior, const CaseSpec& spec,
                            const Grid& grid, double t, int n_q, int component,
                            double eps_tt) {
  const Index nx = grid.nx, ny = grid.ny;
  TTMatrix<double> padded = apply_core_map(interior, Axis::Y,
                                           spec.bc_y == Boundary::Periodic
                                               ? periodic_pad_matrix(ny)
                                               : interior_pad_matrix(ny));
  padded = apply_core_map(padded, Axis::X,
                          spec.bc_x == Boundary::Periodic ? periodic_pad_matrix(nx)
                                                          : interior_pad_matrix(nx));

  bool corrected = false;
  if (spec.bc_x == Boundary::DirichletExact) {
    // Rank-additive exact strip over the six x-ghost rows, all ghosted columns.
    MatrixXd selector = MatrixXd::Zero(nx + 2 * kGhost, 2 * kGhost);
    MatrixXd strip(2 * kGhost, ny + 2 * kGhost);
    for (Index s = 0; s < 2 * kGhost; ++s) {
      const Index row = (s < kGhost) ? s : nx + kGhost + (s - kGhost);
      selector(row, s) = 1.0;
      for (Index j = 0; j < ny + 2 * kGhost; ++j)
        strip(s, j) = exact_cell_average_at(spec, grid, t, n_q, component, row - kGhost,
                                            j - kGhost);
    }
    padded = add(padded, TTMatrix<double>(selector, strip));
    corrected = true;
  }
  if (spec.bc_y == Boundary::DirichletExact) {
    MatrixXd selector = MatrixXd::Zero(ny + 2 * kGhost, 2 * kGhost);
    MatrixXd strip(nx + 2 * kGhost, 2 * kGhost);
    for (Index s = 0; s < 2 * kGhost; ++s) {
      const Index col = (s < kGhost) ? s : ny + kGhost + (s - kGhost);
      selector(col, s) = 1.0;
      for (Index i = 0; i < nx + 2 * kGhost; ++i)
        strip(i, s) = exact_cell_average_at(spec, grid, t, n_q, component, i - kGhost,
                                            col - kGhost);
    }
    // Corner cells already carry the x-strip values.
    if (spec.bc_x == Boundary::DirichletExact) {
      strip.topRows(kGhost).setZero();
      strip.bottomRows(kGhost).setZero();
    }
    padded = add(padded, TTMatrix<double>(strip, selector.transpose()));
    corrected = true;
  }
  if (corrected && eps_tt >= 0.0) padded = round(padded, eps_tt);
  return padded;
}

}  // namespace detail

}  // namespace ttsw
