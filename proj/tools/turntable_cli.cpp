// turntable: command-line front end.
//
// Parameter precedence: built-in reference constants < --config file < flags.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fmt/format.h>
#include <iostream>
#include <numbers>
#include <optional>

#include "CLI11.hpp"
#include "turntable/ensemble.hpp"
#include "turntable/io.hpp"
#include "turntable/scan.hpp"
#include "turntable/singularity.hpp"
#include "turntable/tyre.hpp"

using namespace turntable;

namespace {

struct ParamFlags {
  std::string config;
  std::optional<double> d, m, beta, c1, c2, k2, r0, omega0, mu, gamma, kappa;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "flat JSON object with system parameters")->check(CLI::ExistingFile);
    app->add_option("--d", d, "slider axis offset");
    app->add_option("--m", m, "slider mass");
    app->add_option("--beta", beta, "radius of gyration of the top disc");
    app->add_option("--c1", c1, "viscous coupling between the discs");
    app->add_option("--c2", c2, "slider damping");
    app->add_option("--k2", k2, "slider spring stiffness");
    app->add_option("--r0", r0, "spring equilibrium offset");
    app->add_option("--omega0", omega0, "bottom disc angular speed");
    app->add_option("--mu", mu, "kinetic friction magnitude");
    app->add_option("--gamma", gamma, "wheel mounting angle (rad)");
    app->add_option("--kappa", kappa, "friction moment arm");
  }

  SystemParams resolve() const {
    SystemParams p = SystemParams::reference_partial();
    if (!config.empty()) p = params_from_json(read_json_file(config), p);
    auto put = [](double& dst, const std::optional<double>& v) {
      if (v) dst = *v;
    };
    put(p.d, d), put(p.m, m), put(p.beta, beta), put(p.c1, c1), put(p.c2, c2), put(p.k2, k2);
    put(p.r0, r0), put(p.omega0, omega0), put(p.mu, mu), put(p.gamma, gamma), put(p.kappa, kappa);
    return p;
  }
};

struct SolverFlags {
  IntegratorOptions o;
  void attach(CLI::App* app, double t_max_default) {
    o.t_max = t_max_default;
    app->add_option("--t-max", o.t_max, "time budget (rescaled time)")->capture_default_str();
    app->add_option("--rtol", o.rtol)->capture_default_str();
    app->add_option("--atol", o.atol)->capture_default_str();
    app->add_option("--max-step", o.max_step)->capture_default_str();
    app->add_option("--tol-event", o.tol_event)->capture_default_str();
    app->add_option("--tol-sing", o.tol_sing)->capture_default_str();
    app->add_option("--max-events", o.max_events)->capture_default_str();
    app->add_flag("--allow-escaping-stick", o.allow_escaping_stick, "permit stick in the escaping region");
  }
};

struct DesignFlags {
  std::optional<double> r_star, omega_star;
  void attach(CLI::App* app) {
    app->add_option("--r-star", r_star, "design a two-fold at this r (sets kappa, k2)");
    app->add_option("--omega-star", omega_star, "design a two-fold at this omega (sets kappa, k2)");
  }
  std::optional<DesignResult> apply(SystemParams& p) const {
    if (r_star.has_value() != omega_star.has_value())
      throw ConfigError("--r-star and --omega-star must be given together");
    if (!r_star) return std::nullopt;
    DesignResult d = design_singularity(*r_star, *omega_star, p);
    p = d.params;
    return d;
  }
};

struct Run {
  std::string command;
  std::string out;
  ParamFlags params;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

void finish(OutputSet& files, const Run& run, const SystemParams& p, const Json& options, const Json& tolerances) {
  RunConfig cfg{run.command, p, options, run.out};
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - run.start).count();
  Json outputs = Json::array();
  for (const auto& path : files.paths()) outputs.push_back(path.string());
  const Json meta = {{"tool", "turntable"},
                     {"version", kToolVersion},
                     {"command", run.command},
                     {"config", run_config_to_json(cfg)},
                     {"config_hash", config_hash(cfg)},
                     {"tolerances", tolerances},
                     {"outputs", outputs},
                     {"wall_time_s", wall}};
  files.add(run.out + ".meta.json", meta.dump(2) + "\n");
  files.commit();
}

std::string member_path(const std::string& prefix, std::size_t id) { return fmt::format("{}_member_{:04d}.csv", prefix, id); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-fold singularity and stick-slip simulation of the wheel-on-turntable system"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // simulate
  Run sim_run{"simulate", "trajectory.csv"};
  SolverFlags sim_solver;
  DesignFlags sim_design;
  double sim_r = 0.1859, sim_v = -0.03, sim_omega = -1.037;
  std::string sim_mode = "auto";
  auto* sim = app.add_subcommand("simulate", "integrate one trajectory and write it as CSV");
  sim_run.params.attach(sim);
  sim_solver.attach(sim, 100.0);
  sim_design.attach(sim);
  sim->add_option("--r", sim_r, "initial r")->capture_default_str();
  sim->add_option("--v", sim_v, "initial v")->capture_default_str();
  sim->add_option("--omega", sim_omega, "initial omega")->capture_default_str();
  sim->add_option("--mode", sim_mode, "initial contact mode")
      ->check(CLI::IsMember({"auto", "slip+", "slip-", "stick"}))
      ->capture_default_str();
  sim->add_option("--out", sim_run.out, "trajectory CSV path")->capture_default_str();

  // scan
  Run scan_run{"scan", "scan"};
  ScanWindow window;
  std::size_t grid = 8;
  auto* sc = app.add_subcommand("scan", "evaluate the case-1 conditions over a grid of designed two-folds");
  scan_run.params.attach(sc);
  sc->add_option("--grid", grid, "cells per axis")->check(CLI::PositiveNumber)->capture_default_str();
  sc->add_option("--r-min", window.r_min)->capture_default_str();
  sc->add_option("--r-max", window.r_max)->capture_default_str();
  sc->add_option("--omega-min", window.omega_min)->capture_default_str();
  sc->add_option("--omega-max", window.omega_max)->capture_default_str();
  sc->add_option("--out", scan_run.out, "output prefix; writes <prefix>_<mask>.csv")->capture_default_str();

  // design
  Run design_run{"design", "design.json"};
  double d_r = 0.0, d_omega = 0.0;
  auto* des = app.add_subcommand("design", "choose kappa and k2 so that (r*, omega*) is a two-fold point");
  design_run.params.attach(des);
  des->add_option("--r-star", d_r)->required();
  des->add_option("--omega-star", d_omega)->required();
  des->add_option("--out", design_run.out, "JSON result path")->capture_default_str();

  // classify
  Run cls_run{"classify", "classify.json"};
  DesignFlags cls_design;
  std::optional<double> cls_r, cls_v, cls_omega;
  auto* cls = app.add_subcommand("classify", "normal form and case of two-fold singularities");
  cls_run.params.attach(cls);
  cls_design.attach(cls);
  cls->add_option("--r", cls_r, "two-fold point r (with --v, --omega)");
  cls->add_option("--v", cls_v);
  cls->add_option("--omega", cls_omega);
  cls->add_option("--out", cls_run.out, "JSON result path")->capture_default_str();

  // tyre-curve
  Run tyre_run{"tyre-curve", "tyre_curve.csv"};
  std::optional<double> t_kappa;
  TyreParams tp{1.0, 1.0, 1.0, 1.0, 1.0};
  double t_mu = 1.0;
  std::size_t t_n = 181;
  bool t_rescale = false;
  auto* ty = app.add_subcommand("tyre-curve", "tabulate tyre force and moment against slip angle");
  ty->add_option("--kappa", t_kappa, "use the specialised tyre for this kappa");
  ty->add_option("--k", tp.k)->capture_default_str();
  ty->add_option("--a", tp.a)->capture_default_str();
  ty->add_option("--sigma", tp.sigma)->capture_default_str();
  ty->add_option("--delta", tp.delta)->capture_default_str();
  ty->add_option("--rho", tp.rho)->capture_default_str();
  ty->add_option("--mu", t_mu, "scale factor applied to F and M")->capture_default_str();
  ty->add_option("--n", t_n, "number of phi samples on [0, pi/2]")->check(CLI::Range(2, 1000000))->capture_default_str();
  ty->add_flag("--rescale", t_rescale, "evaluate at the rescaled angle psi(phi) (needs --kappa)");
  ty->add_option("--out", tyre_run.out, "CSV path")->capture_default_str();

  // ensemble
  Run ens_run{"ensemble", "ensemble"};
  EnsembleConfig ens_cfg;
  SolverFlags ens_solver;
  DesignFlags ens_design;
  ens_design.r_star = 0.1859;
  ens_design.omega_star = -1.037;
  auto* ens = app.add_subcommand("ensemble", "re-inject members next to the singularity and follow them");
  ens_run.params.attach(ens);
  ens_solver.attach(ens, ens_cfg.t_max);
  ens_design.attach(ens);
  ens->add_option("--n", ens_cfg.n)->check(CLI::PositiveNumber)->capture_default_str();
  ens->add_option("--eps", ens_cfg.eps, "injection radius")->capture_default_str();
  ens->add_option("--seed", ens_cfg.seed)->capture_default_str();
  ens->add_option("--return-radius", ens_cfg.return_radius)->capture_default_str();
  ens->add_option("--out", ens_run.out, "output prefix; writes <prefix>_summary.csv and member CSVs")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    std::fprintf(stderr, "error: usage: %s\n", msg.c_str());
    return 2;
  }

  try {
    if (*sim) {
      SystemParams p = sim_run.params.resolve();
      sim_design.apply(p);
      p.validate();
      if (p.kappa == 0.0)
        throw ConfigError("kappa is zero; give --kappa and --k2 or design with --r-star/--omega-star");
      const State s0{sim_r, sim_v, sim_omega};
      ContactMode mode;
      if (sim_mode == "stick") mode = ContactMode::stick(0.0);
      else if (sim_mode == "slip+") mode = ContactMode::slip(1);
      else if (sim_mode == "slip-") mode = ContactMode::slip(-1);
      else mode = ContactMode::slip(eval_h(s0, p) >= 0.0 ? 1 : -1);
      if (mode.tag == ContactTag::Stick &&
          !(std::abs(eval_h(s0, p)) <= 1e-8 * velocity_scale(s0, p)))
        throw ConfigError("--mode stick needs an initial state on the switching surface");
      const Trajectory traj = integrate(s0, mode, p, sim_solver.o);
      OutputSet files;
      files.add(sim_run.out, trajectory_csv(traj, p));
      const Json opts = {{"initial_state", {sim_r, sim_v, sim_omega}}, {"mode", sim_mode},
                         {"integrator", options_to_json(sim_solver.o)}};
      finish(files, sim_run, p, opts, options_to_json(sim_solver.o));
    } else if (*sc) {
      const SystemParams p = scan_run.params.resolve();
      const ScanResult res = scan(p, window, grid);
      OutputSet files;
      for (ScanMask m : kAllScanMasks) files.add(fmt::format("{}_{}.csv", scan_run.out, to_string(m)), scan_mask_csv(res, m));
      const Json opts = {{"grid", grid},
                         {"window", {window.r_min, window.r_max, window.omega_min, window.omega_max}}};
      finish(files, scan_run, p, opts, {{"design_residual", 1e-9}, {"degenerate_det", 1e-12}});
    } else if (*des) {
      const SystemParams p = design_run.params.resolve();
      const DesignResult d = design_singularity(d_r, d_omega, p);
      const std::string body = design_to_json(d).dump(2) + "\n";
      std::fputs(body.c_str(), stdout);
      OutputSet files;
      files.add(design_run.out, body);
      finish(files, design_run, p, {{"r_star", d_r}, {"omega_star", d_omega}}, {{"design_residual", 1e-9}});
    } else if (*cls) {
      SystemParams p = cls_run.params.resolve();
      const std::optional<DesignResult> d = cls_design.apply(p);
      std::vector<State> points;
      const bool explicit_point = cls_r || cls_v || cls_omega;
      if (explicit_point) {
        if (!(cls_r && cls_v && cls_omega)) throw ConfigError("--r, --v and --omega must be given together");
        points.push_back({*cls_r, *cls_v, *cls_omega});
      } else if (d) {
        points.push_back(d->x_star);
      } else {
        points = find_singularities(p);
      }
      Json reports = Json::array();
      for (const State& x : points) reports.push_back(report_to_json(normal_form(x, p)));
      const Json result = {{"params", params_to_json(p)}, {"singularities", reports}};
      const std::string body = result.dump(2) + "\n";
      std::fputs(body.c_str(), stdout);
      OutputSet files;
      files.add(cls_run.out, body);
      finish(files, cls_run, p, {{"points", explicit_point ? "explicit" : d ? "designed" : "searched"}},
             {{"newton_residual", 1e-12}, {"dedup", 1e-8}});
    } else if (*ty) {
      if (t_rescale && !t_kappa) throw ConfigError("--rescale needs --kappa");
      const TyreParams used = t_kappa ? TyreParams::specialized(*t_kappa) : tp;
      used.validate();
      std::vector<TyreCurvePoint> pts;
      for (std::size_t i = 0; i < t_n; ++i) {
        const double phi = std::numbers::pi / 2 * static_cast<double>(i) / static_cast<double>(t_n - 1);
        const double at = t_rescale ? rescale_slip_angle(phi, *t_kappa) : phi;
        TyreOutput o = force_moment_raw(std::min(at, std::numbers::pi / 2), used);
        o.force *= t_mu;
        o.moment *= t_mu;
        pts.push_back({phi, o});
      }
      OutputSet files;
      files.add(tyre_run.out, tyre_curve_csv(pts));
      const Json opts = {{"tyre", {{"k", used.k}, {"a", used.a}, {"sigma", used.sigma}, {"delta", used.delta}, {"rho", used.rho}}},
                         {"mu", t_mu}, {"n", t_n}, {"rescale", t_rescale}};
      finish(files, tyre_run, SystemParams{}, opts, Json::object());
    } else if (*ens) {
      SystemParams p = ens_run.params.resolve();
      const std::optional<DesignResult> d = ens_design.apply(p);
      if (!d) throw ConfigError("ensemble needs --r-star and --omega-star");
      p.validate();
      ens_cfg.t_max = ens_solver.o.t_max;
      ens_cfg.integrator = ens_solver.o;
      const std::vector<EnsembleOutcome> outcomes = run_ensemble(d->x_star, p, ens_cfg);
      OutputSet files;
      files.add(ens_run.out + "_summary.csv", ensemble_summary_csv(outcomes));
      for (const auto& o : outcomes) files.add(member_path(ens_run.out, o.member_id), trajectory_csv(o.trajectory, p));
      const Json opts = {{"n", ens_cfg.n}, {"eps", ens_cfg.eps}, {"seed", ens_cfg.seed}, {"t_max", ens_cfg.t_max},
                         {"return_radius", ens_cfg.return_radius}, {"x_star", {d->x_star.r, d->x_star.v, d->x_star.omega}}};
      finish(files, ens_run, p, opts, options_to_json(ens_cfg.integrator));
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return 1;
  } catch (const DesignError& e) {
    std::fprintf(stderr, "error: design: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: runtime: %s\n", e.what());
    return 1;
  }
  return 0;
}
