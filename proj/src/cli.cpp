#include <algorithm>
#include <atomic>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "spincal/cli.hpp"
#include "spincal/projection.hpp"

namespace spincal::cli {

using nlohmann::json;

namespace {

struct RunOutcome {
  int code = kOk;
  std::string message;
};

json drift_json(const DriftReport& d) {
  json inv = json::array();
  for (const auto& s : d.invariants)
    inv.push_back({{"invariant", s.spec.label()}, {"initial", s.initial}, {"max_relative_drift", s.max_relative_drift}});
  json spec = json::array();
  for (const auto& s : d.spectra) spec.push_back({{"x", s.x}, {"max_relative_drift", s.max_relative_drift}});
  return {{"energy_initial", d.energy_initial},
          {"energy_relative_drift", d.energy_relative_drift},
          {"invariants", inv},
          {"spectra", spec},
          {"worst", d.worst()}};
}

json stats_json(const IntegrationStats& s) {
  return {{"accepted_steps", s.accepted},
          {"rejected_steps", s.rejected},
          {"rhs_evaluations", s.evaluations},
          {"max_orbit_correction", s.max_orbit_correction},
          {"max_dropped_m", s.max_dropped_m},
          {"min_root_seen", s.min_root_seen}};
}

Trajectory integrate(const RunConfig& cfg, const SymmetricSpace& space, const PhasePoint& pt0) {
  IntegrateOptions opts;
  opts.t_end = cfg.t_end;
  opts.tol = cfg.tol;
  opts.sample_dt = cfg.sample_dt;
  opts.gauge = cfg.gauge;
  if (cfg.method == "projection")
    return integrate_projection(space, pt0, InvariantSpec::trace_power(2), opts);
  return integrate_direct(space, pt0, opts);
}

RunOutcome execute(const RunConfig& cfg, const std::filesystem::path& out_dir, bool spectrum_mode) {
  RunOutcome res;
  const SpacePtr space = build_space(cfg.space);
  const PhasePoint pt0 = initial_point(cfg, *space);

  Trajectory traj;
  std::string status = "ok";
  std::optional<double> last_safe_t;
  std::string detail;
  try {
    traj = integrate(cfg, *space, pt0);
  } catch (const TrajectoryWallError& e) {
    traj = e.partial();
    status = "wall_collision";
    last_safe_t = e.last_safe_t();
    detail = e.what();
    res.code = kWallCollision;
  } catch (const NumericalError& e) {
    res.code = kNumericalFailure;
    res.message = cfg.name + ": numerical failure: " + e.what();
    return res;
  }

  const std::vector<double> xs = spectrum_mode ? cfg.spectrum_x : std::vector<double>{0.0, 1.0};
  const DriftReport drift = monitor(*space, traj, cfg.monitors, xs);
  json report = {{"tool", "spincal"},
                 {"version", kVersion},
                 {"config_hash", hex64(fnv1a64(cfg.canonical))},
                 {"name", cfg.name},
                 {"space", cfg.space.name()},
                 {"method", cfg.method},
                 {"gauge", cfg.gauge == Gauge::Thick ? "thick" : "frozen"},
                 {"seed", cfg.seed},
                 {"t_end", cfg.t_end},
                 {"tol", cfg.tol},
                 {"samples", traj.size()},
                 {"status", status},
                 {"last_safe_t", last_safe_t ? json(*last_safe_t) : json(nullptr)},
                 {"drift", drift_json(drift)},
                 {"stats", stats_json(traj.stats)}};
  if (cfg.model) report["model"] = cfg.model->name();
  if (!detail.empty()) report["detail"] = detail;

  std::ostringstream msg;
  msg << cfg.name << ": " << status << ", " << traj.size() << " samples";
  if (last_safe_t) msg << ", last safe t = " << format_double(*last_safe_t);
  if (spectrum_mode) {
    write_atomic(out_dir / cfg.spectrum_path, spectrum_csv(*space, traj, cfg.spectrum_x));
    write_atomic(out_dir / cfg.spectrum_report_path, report.dump(2) + "\n");
    double worst = 0.0;
    for (const auto& s : drift.spectra) worst = std::max(worst, s.max_relative_drift);
    msg << ", max spectral drift " << format_double(worst);
  } else {
    write_atomic(out_dir / cfg.trajectory_path, trajectory_csv(*space, traj));
    write_atomic(out_dir / cfg.report_path, report.dump(2) + "\n");
    msg << ", energy drift " << format_double(drift.energy_relative_drift) << ", worst invariant drift "
        << format_double(drift.worst());
  }
  res.message = msg.str();
  return res;
}

int run_many(std::vector<RunConfig> runs, const std::filesystem::path& out_dir, bool spectrum_mode,
             int jobs, std::ostream& out, std::ostream& err) {
  std::vector<RunOutcome> outcomes(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        outcomes[i] = execute(runs[i], out_dir, spectrum_mode);
      } catch (const std::exception& e) {
        outcomes[i] = {kNumericalFailure, runs[i].name + ": " + e.what()};
      }
    }
  };
  const int n = std::clamp<int>(jobs, 1, static_cast<int>(runs.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  int code = kOk;
  for (const auto& o : outcomes) {
    (o.code == kOk || o.code == kWallCollision ? out : err) << o.message << "\n";
    code = std::max(code, o.code);
  }
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin Calogero-Moser systems from Hamiltonian reduction"};
  app.set_version_flag("--version", std::string("spincal ") + kVersion);
  app.require_subcommand(1);

  std::string config, method, out_dir = ".";
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--method", method, "direct or projection (overrides the config)")
        ->check(CLI::IsMember({"direct", "projection"}));
    sub->add_option("--seed", seed, "seed for random spin data (overrides the config)");
    sub->add_option("--jobs", jobs, "parallel runs for {\"runs\": [...]} configs")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "integrate a trajectory and write CSV plus drift report");
  add_run_options(simulate);
  CLI::App* spectrum = app.add_subcommand("spectrum", "integrate and record sorted Lax spectra");
  add_run_options(spectrum);
  CLI::App* verify = app.add_subcommand("verify", "run the invariant check suite");
  verify->add_option("--config", config, "JSON verify configuration")->required()->check(CLI::ExistingFile);
  verify->add_option("--seed", seed, "seed (overrides the config)");
  verify->add_option("--out", out_dir, "output directory");
  CLI::App* couplings = app.add_subcommand("couplings", "print (g, g1, g2) of the BC model");
  int n = 0;
  double kappa = 0.0, x = 0.0;
  couplings->add_option("--n", n, "rank")->required();
  couplings->add_option("--kappa", kappa, "kappa")->required();
  couplings->add_option("--x", x, "central parameter")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (couplings->parsed()) {
      if (auto v = bc_violation(n, kappa, x)) {
        err << "error: " << *v << "\n";
        return kConfigError;
      }
      const BcCouplings c = bc_couplings(n, kappa, x);
      out << "g = " << format_double(c.g) << "\n"
          << "g1 = " << format_double(c.g1) << "\n"
          << "g2 = " << format_double(c.g2) << "\n"
          << "relation residual = " << format_double(c.relation_residual()) << "\n";
      return kOk;
    }

    json doc = read_json_file(config);
    if (verify->parsed()) {
      if (seed) doc["seed"] = *seed;
      const VerifyConfig vc = parse_verify(doc);
      const json result = run_verify(vc);
      for (const auto& row : result["checks"]) {
        out << (row["pass"].get<bool>() ? "PASS " : "FAIL ") << row["scope"].get<std::string>() << "  "
            << row["check"].get<std::string>();
        if (row.contains("residual"))
          out << "  residual " << format_double(row["residual"].get<double>()) << " (tol "
              << format_double(row["tol"].get<double>()) << ")";
        else
          out << "  " << row["violation"].get<std::string>();
        out << "\n";
      }
      write_atomic(std::filesystem::path(out_dir) / "verify.json", result.dump(2) + "\n");
      const bool pass = result["pass"].get<bool>();
      out << (pass ? "verify: all checks passed" : "verify: some checks failed") << "\n";
      return pass ? kOk : kVerifyFailed;
    }

    auto patch = [&](json& run) {
      if (!run.is_object()) return;
      if (seed) run["seed"] = *seed;
      if (!method.empty()) run["method"] = method;
    };
    if (doc.is_object() && doc.contains("runs") && doc["runs"].is_array())
      for (auto& r : doc["runs"]) patch(r);
    else
      patch(doc);
    std::vector<RunConfig> runs = parse_runs(doc);
    return run_many(std::move(runs), out_dir, spectrum->parsed(), jobs, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace spincal::cli
