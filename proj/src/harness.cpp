#include "ttsw/harness.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace ttsw {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Upwind3: return "upwind3";
    case Scheme::Upwind5: return "upwind5";
    default: return "weno5";
  }
}

std::string representation_name(Representation r) {
  return r == Representation::Dense ? "dense" : "tt";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "upwind3") return Scheme::Upwind3;
  if (name == "upwind5") return Scheme::Upwind5;
  if (name == "weno5") return Scheme::Weno5;
  return std::nullopt;
}

std::optional<Representation> parse_representation(std::string_view name) {
  if (name == "dense") return Representation::Dense;
  if (name == "tt") return Representation::TT;
  return std::nullopt;
}

namespace {

double nominal_dt(const CaseSpec& spec, const RunConfig& cfg, double dx) {
  const double ratio = cfg.dt_ratio.value_or(spec.dt_ratio_for(cfg.scheme));
  if (ratio <= 0) throw InputError("run: dt ratio must be positive");
  return order(cfg.scheme) == 3 ? ratio * dx : ratio * std::pow(dx, 5.0 / 3.0);
}

template <class Rep>
RunReport run_impl(const RunConfig& cfg, const CaseSpec& spec) {
  if (cfg.n < 16) throw InputError("run: grid must have at least 16 cells per axis");
  Grid grid;
  grid.nx = cfg.n;
  grid.ny = cfg.n;
  grid.lx = spec.length();
  grid.ly = spec.length();

  SolverOptions opt;
  opt.scheme = cfg.scheme;
  opt.model = spec.model;
  opt.params = spec.params;
  opt.cross.seed = cfg.seed;
  opt.debug_positivity = cfg.debug_positivity;

  EpsPolicy policy;
  policy.c_eps = cfg.c_eps.value_or(spec.c_eps_for(cfg.scheme));
  if (policy.c_eps <= 0) throw InputError("run: C_eps must be positive");
  policy.order = order(cfg.scheme);
  policy.volume = grid.volume();

  const int n_q = quadrature_points(cfg.scheme);
  const double final_time = cfg.final_time.value_or(spec.final_time());
  const double dt_nominal = nominal_dt(spec, cfg, grid.dx());

  RunReport report;
  report.case_name = spec.name;
  report.scheme_label = scheme_name(cfg.scheme);
  report.rep_label = representation_name(cfg.rep);
  report.n = cfg.n;
  report.dt = dt_nominal;

  const auto start = std::chrono::steady_clock::now();

  // Quadrature initial condition; the TT state is compressed at the global
  // tolerance implied by the initial field norms.
  State<DenseRep> dense_init;
  dense_init.model = spec.model;
  for (int c = 0; c < 3; ++c)
    dense_init.q[c] = exact_cell_averages(spec, grid, 0.0, n_q, c);

  State<Rep> state;
  state.model = spec.model;
  if constexpr (Rep::is_tt) {
    const EpsSchedule eps0 = compute_eps_schedule(dense_init, policy, grid.dx());
    for (int c = 0; c < 3; ++c) state.q[c] = Rep::compress(dense_init.q[c], eps0.global);
  } else {
    state = dense_init;
  }

  EpsCounters counters;
  double t = 0.0;
  long steps = 0;
  bool eps_seen = false;
  while (t < final_time * (1.0 - 1e-12)) {
    if (cfg.max_steps && steps >= *cfg.max_steps) break;
    const double dt = std::min(dt_nominal, final_time - t);
    EpsSchedule eps;
    if constexpr (Rep::is_tt) {
      eps = compute_eps_schedule(state, policy, grid.dx(), &counters);
      for (double e : {eps.var[0], eps.var[1], eps.var[2], eps.global}) {
        report.eps_min = eps_seen ? std::min(report.eps_min, e) : e;
        report.eps_max = eps_seen ? std::max(report.eps_max, e) : e;
        eps_seen = true;
      }
      if (cfg.debug_log) report.eps_log.push_back(eps.global);
    }
    auto hooks = make_rhs_hooks<Rep>(spec, grid, cfg.scheme,
                                     Rep::is_tt ? eps.global : kNoRound);
    auto rhs_fn = [&](const State<Rep>& w, double tw) {
      return rhs<Rep>(w, tw, grid, opt, hooks, eps);
    };
    try {
      state = ssprk3(state, t, dt, rhs_fn, eps);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "run: " << spec.name << " failed at step " << steps << " (t = " << t
         << "): " << e.what();
      throw StateError(os.str());
    }
    t += dt;
    ++steps;
    if constexpr (Rep::is_tt) {
      std::array<Index, 3> ranks{state.q[0].rank(), state.q[1].rank(),
                                 state.q[2].rank()};
      for (int c = 0; c < 3; ++c)
        report.max_rank[c] = std::max(report.max_rank[c], ranks[c]);
      if (cfg.debug_log) report.rank_log.push_back(ranks);
    }
  }
  report.steps = steps;
  report.l2 = l2_error<Rep>(state, spec, grid, t, n_q);
  report.wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

int thread_budget() {
  if (const char* env = std::getenv("TTSWE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

RunReport run(const RunConfig& config) { return run(config, case_spec(config.case_id)); }

RunReport run(const RunConfig& config, const CaseSpec& spec) {
  return config.rep == Representation::Dense ? run_impl<DenseRep>(config, spec)
                                             : run_impl<TTRep>(config, spec);
}

std::vector<RunReport> convergence(const RunConfig& base, const std::vector<int>& grids) {
  return convergence(base, grids, case_spec(base.case_id));
}

std::vector<RunReport> convergence(const RunConfig& base, const std::vector<int>& grids,
                                   const CaseSpec& spec) {
  if (grids.size() < 2) throw InputError("convergence: need at least two grids");
  for (std::size_t i = 1; i < grids.size(); ++i)
    if (grids[i] != 2 * grids[i - 1])
      throw InputError("convergence: grids must double between levels");

  std::vector<RunReport> reports(grids.size());
  const int budget = thread_budget();
  if (budget <= 1) {
    for (std::size_t i = 0; i < grids.size(); ++i) {
      RunConfig cfg = base;
      cfg.n = grids[i];
      reports[i] = run(cfg, spec);
    }
  } else {
    for (std::size_t first = 0; first < grids.size();
         first += static_cast<std::size_t>(budget)) {
      const std::size_t last =
          std::min(grids.size(), first + static_cast<std::size_t>(budget));
      std::vector<std::future<RunReport>> wave;
      for (std::size_t i = first; i < last; ++i) {
        RunConfig cfg = base;
        cfg.n = grids[i];
        wave.push_back(
            std::async(std::launch::async, [cfg, &spec] { return run(cfg, spec); }));
      }
      for (std::size_t i = first; i < last; ++i) reports[i] = wave[i - first].get();
    }
  }

  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (int c = 0; c < 3; ++c)
      reports[i].rel_l2[c] =
          reports[0].l2[c] > 0 ? reports[i].l2[c] / reports[0].l2[c] : 1.0;
    if (i > 0 && reports[i].l2[0] > 0)
      reports[i].order_c1 = std::log2(reports[i - 1].l2[0] / reports[i].l2[0]);
  }
  return reports;
}

void write_csv(std::ostream& os, std::span<const RunReport> reports) {
  os << "case,scheme,rep,N,dt,steps,l2_c1,l2_c2,l2_c3,rel_l2_c1,order_c1,max_rank,"
        "wall_s,eps_min,eps_max\n";
  for (const auto& r : reports) {
    const Index max_rank = std::max({r.max_rank[0], r.max_rank[1], r.max_rank[2]});
    os << r.case_name << ',' << r.scheme_label << ',' << r.rep_label << ',' << r.n << ','
       << format_double(r.dt) << ',' << r.steps << ',' << format_double(r.l2[0]) << ','
       << format_double(r.l2[1]) << ',' << format_double(r.l2[2]) << ','
       << format_double(r.rel_l2[0]) << ','
       << (r.order_c1 ? format_double(*r.order_c1) : std::string()) << ',' << max_rank
       << ',' << format_double(r.wall_s) << ',' << format_double(r.eps_min) << ','
       << format_double(r.eps_max) << '\n';
  }
}

void write_json(std::ostream& os, std::span<const RunReport> reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json row{
        {"case", r.case_name},
        {"scheme", r.scheme_label},
        {"rep", r.rep_label},
        {"N", r.n},
        {"dt", r.dt},
        {"steps", r.steps},
        {"l2_c1", r.l2[0]},
        {"l2_c2", r.l2[1]},
        {"l2_c3", r.l2[2]},
        {"rel_l2_c1", r.rel_l2[0]},
        {"max_rank", std::max({r.max_rank[0], r.max_rank[1], r.max_rank[2]})},
        {"wall_s", r.wall_s},
        {"eps_min", r.eps_min},
        {"eps_max", r.eps_max},
    };
    row["order_c1"] = r.order_c1 ? nlohmann::json(*r.order_c1) : nlohmann::json();
    out.push_back(std::move(row));
  }
  os << out.dump(2) << '\n';
}

namespace {

int emit_reports(const RunConfig& cfg, const std::vector<RunReport>& reports) {
  if (!cfg.out.empty()) {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open output file '" << cfg.out << "'\n";
      return 1;
    }
    write_csv(file, reports);
    if (cfg.json) {
      std::ofstream json_file(cfg.out + ".json", std::ios::binary);
      write_json(json_file, reports);
    }
  }
  if (cfg.json && cfg.out.empty())
    write_json(std::cout, reports);
  else
    write_csv(std::cout, reports);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Tensor-train finite volume solver for the shallow water equations"};
  app.require_subcommand(1);

  std::string case_name = "kelvin";
  std::string scheme = "upwind3";
  std::string rep = "dense";
  RunConfig cfg;
  int n = 40;
  std::string grids_arg;
  double dt_ratio = 0.0, c_eps = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--case", case_name, "Test case")
        ->check(CLI::IsMember({"kelvin", "inertia-gravity", "barotropic-tide",
                               "manufactured"}));
    cmd->add_option("--scheme", scheme, "Reconstruction scheme")
        ->check(CLI::IsMember({"upwind3", "upwind5", "weno5"}));
    cmd->add_option("--rep", rep, "State representation")
        ->check(CLI::IsMember({"dense", "tt"}));
    cmd->add_option("--dt-ratio", dt_ratio, "Time-step ratio override");
    cmd->add_option("--c-eps", c_eps, "C_eps override");
    cmd->add_option("--out", cfg.out, "CSV output path");
    cmd->add_option("--seed", cfg.seed, "Sampler seed");
    cmd->add_flag("--json", cfg.json, "Emit a JSON report on stdout");
    cmd->add_flag("--debug-positivity", cfg.debug_positivity,
                  "Check layer-thickness positivity each evaluation");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Integrate one configuration");
  add_common(run_cmd);
  run_cmd->add_option("--n", n, "Cells per axis")->check(CLI::PositiveNumber);

  CLI::App* conv_cmd =
      app.add_subcommand("convergence", "Grid-doubling convergence study");
  add_common(conv_cmd);
  conv_cmd->add_option("--grids", grids_arg, "Comma-separated doubling grid sizes")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cfg.case_id = *parse_case_id(case_name);
  cfg.scheme = *parse_scheme(scheme);
  cfg.rep = *parse_representation(rep);
  cfg.n = n;
  if (dt_ratio != 0.0) cfg.dt_ratio = dt_ratio;
  if (c_eps != 0.0) cfg.c_eps = c_eps;

  try {
    if (run_cmd->parsed()) {
      std::vector<RunReport> reports{run(cfg)};
      return emit_reports(cfg, reports);
    }
    std::vector<int> grids;
    std::stringstream ss(grids_arg);
    std::string token;
    while (std::getline(ss, token, ',')) {
      int value = 0;
      const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
      if (res.ec != std::errc() || res.ptr != token.data() + token.size() || value <= 0) {
        std::cerr << "error: invalid grid size '" << token << "'\n";
        return 1;
      }
      grids.push_back(value);
    }
    auto reports = convergence(cfg, grids);
    return emit_reports(cfg, reports);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ttsw
