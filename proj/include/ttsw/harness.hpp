#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ttsw/cases.hpp"
#include "ttsw/swe.hpp"

namespace ttsw {

enum class Representation { Dense, TT };

std::string scheme_name(Scheme s);
std::string representation_name(Representation r);
std::optional<Scheme> parse_scheme(std::string_view name);
std::optional<Representation> parse_representation(std::string_view name);

struct RunConfig {
  CaseId case_id = CaseId::Kelvin;
  Scheme scheme = Scheme::Upwind3;
  Representation rep = Representation::Dense;
  int n = 40;
  std::optional<double> dt_ratio;  // overrides the published default
  std::optional<double> c_eps;
  unsigned long long seed = 1;
  std::string out;
  bool json = false;
  bool debug_positivity = false;
  bool debug_log = false;  // keep per-step rank and tolerance logs
  std::optional<double> final_time;  // nondimensional override (testing)
  std::optional<long> max_steps;     // testing hook
};

struct RunReport {
  std::string case_name;
  std::string scheme_label;
  std::string rep_label;
  int n = 0;
  double dt = 0.0;
  long steps = 0;
  std::array<double, 3> l2{};
  std::array<double, 3> rel_l2{1.0, 1.0, 1.0};  // vs the coarsest run of a batch
  std::optional<double> order_c1;               // vs the next-coarser run
  std::array<Index, 3> max_rank{};
  double wall_s = 0.0;
  double eps_min = 0.0, eps_max = 0.0;
  // Per-step logs, populated when debug_log is set.
  std::vector<std::array<Index, 3>> rank_log;
  std::vector<double> eps_log;
};

/// Cell-average L2 error per component: sqrt(dx dy sum (num - exact)^2) with
/// the exact averages taken by the scheme's quadrature.
template <class Rep>
std::array<double, 3> l2_error(const State<Rep>& u, const CaseSpec& spec,
                               const Grid& grid, double t, int n_q) {
  std::array<double, 3> out{};
  for (int c = 0; c < 3; ++c) {
    const MatrixXd diff =
        Rep::dense(u.q[c]) - exact_cell_averages(spec, grid, t, n_q, c);
    out[c] = std::sqrt(grid.dx() * grid.dy() * diff.squaredNorm());
  }
  return out;
}

/// Integrate one configuration to its final time and report errors, ranks,
/// tolerances, and timing.
RunReport run(const RunConfig& config);
RunReport run(const RunConfig& config, const CaseSpec& spec);

/// Runs over strictly doubling grids with observed orders between levels.
/// Levels may execute concurrently when TTSWE_THREADS allows it.
std::vector<RunReport> convergence(const RunConfig& base, const std::vector<int>& grids);
std::vector<RunReport> convergence(const RunConfig& base, const std::vector<int>& grids,
                                   const CaseSpec& spec);

void write_csv(std::ostream& os, std::span<const RunReport> reports);
void write_json(std::ostream& os, std::span<const RunReport> reports);

int run_cli(int argc, const char* const* argv);

}  // namespace ttsw
