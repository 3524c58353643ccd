#include "afem/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include <CLI11.hpp>

namespace afem {

namespace {

constexpr std::array<std::pair<Experiment, const char*>, 5> kExperimentNames{{
    {Experiment::project_convergence, "project-convergence"},
    {Experiment::time_convergence, "time-convergence"},
    {Experiment::space_convergence, "space-convergence"},
    {Experiment::self_organization, "self-organization"},
    {Experiment::adaptive_compare, "adaptive-compare"},
}};

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, name] : kExperimentNames) {
    if (k == e) return name;
  }
  return "unknown";
}

Experiment experiment_from_string(const std::string& name) {
  for (const auto& [k, n] : kExperimentNames) {
    if (name == n) return k;
  }
  std::string known;
  for (const auto& [k, n] : kExperimentNames) known += std::string(known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown experiment '" + name + "' (expected one of: " + known + ")");
}

RunConfig default_config(Experiment e, bool full_scale) {
  RunConfig c;
  c.experiment = e;
  c.full_scale = full_scale;
  switch (e) {
    case Experiment::project_convergence:
      c.n_list = full_scale ? std::vector<int>{64, 128, 256, 512} : std::vector<int>{8, 16, 32, 64, 128};
      c.T = 0;
      break;
    case Experiment::time_convergence:
      c.n_list = {full_scale ? 128 : 64};
      c.dt_list = {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32};
      break;
    case Experiment::space_convergence:
      c.n_list = full_scale ? std::vector<int>{16, 32, 64, 128} : std::vector<int>{8, 16, 32, 64};
      c.dt_list = {full_scale ? 1e-5 : 1e-4};
      c.T = full_scale ? 1e-4 : 1e-3;
      break;
    case Experiment::self_organization:
      c.n_list = {64};
      c.dt_list = {0.01};
      c.params = {0.045, 0.045 * 0.045 * 0.045, 0.003, -0.81, 0.5};
      c.snapshot_times = {0.0, 0.03, 0.1, 0.3, 1.0};
      break;
    case Experiment::adaptive_compare:
      c.n_list = {64};
      c.params = {1.0 / 300, 0.045 * 0.045 * 0.045, 0.003, -0.81, 0.5};
      c.re_list = {300, 500, 3000, 5000, 10000, 50000};
      break;
  }
  return c;
}

void RunConfig::validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in [0, 1], got " + std::to_string(theta));
  if (n_list.empty()) throw ConfigError("at least one mesh size is required");
  for (int n : n_list) {
    if (n < 1) throw ConfigError("mesh sizes must be positive, got " + std::to_string(n));
  }
  for (double dt : dt_list) {
    if (!(dt > 0)) throw ConfigError("time steps must be positive, got " + std::to_string(dt));
  }
  if (experiment != Experiment::project_convergence && !(T > 0)) throw ConfigError("final time must be positive");
  if (!(bounds.k_min > 0) || !(bounds.k_max > 0)) throw ConfigError("controller step bounds must be positive");
  if (bounds.k_min > bounds.k_max) throw ConfigError("kmin must not exceed kmax");
  if (!(delta > 0)) throw ConfigError("controller tolerance delta must be positive");
  if (!(constant_dt > 0)) throw ConfigError("constant comparison step must be positive");
  for (double re : re_list) {
    if (!(re > 0)) throw ConfigError("Reynolds numbers must be positive");
  }
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (experiment == Experiment::project_convergence && (!(params.mu > 0) || !(params.gamma > 0))) {
    throw ConfigError("projection needs mu and gamma positive");
  }
}

RunConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"Mixed finite element solver for the active fluid equations with DLN time stepping", "afem"};
  app.set_config("--config", "", "flat key=value file; command line and AFEM_* variables take precedence");
  app.set_help_flag("-h,--help", "print this help");

  std::optional<std::string> experiment;
  bool full_scale = false;
  std::optional<double> theta, tmax, mu, gamma, nu, rho, lambda, delta, kmin, kmax, kconst;
  std::optional<int> nx, workers;
  std::optional<std::vector<int>> nx_list;
  std::optional<double> dt;
  std::optional<std::vector<double>> dt_list, re, snapshots;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;

  auto env = [](CLI::Option* o, const char* name) { o->envname(std::string("AFEM_") + name); };
  env(app.add_option("--experiment", experiment, "project-convergence | time-convergence | space-convergence | "
                                                  "self-organization | adaptive-compare"),
      "EXPERIMENT");
  env(app.add_flag("--full-scale", full_scale, "use the large grids and small steps"), "FULL_SCALE");
  env(app.add_option("--theta", theta, "DLN parameter in [0, 1]"), "THETA");
  env(app.add_option("--nx", nx, "cells per side of a single mesh"), "NX");
  env(app.add_option("--nx-list", nx_list, "cells per side of each mesh")->delimiter(','), "NX_LIST");
  env(app.add_option("--dt", dt, "single time step"), "DT");
  env(app.add_option("--dt-list", dt_list, "time steps")->delimiter(','), "DT_LIST");
  env(app.add_option("--tmax", tmax, "final time"), "TMAX");
  env(app.add_option("--mu", mu), "MU");
  env(app.add_option("--gamma", gamma), "GAMMA");
  env(app.add_option("--nu", nu), "NU");
  env(app.add_option("--rho", rho), "RHO");
  env(app.add_option("--lambda", lambda), "LAMBDA");
  env(app.add_option("--re", re, "Reynolds numbers (mu = 1/Re)")->delimiter(','), "RE");
  env(app.add_option("--seed", seed, "seed of the initial-data generator"), "SEED");
  env(app.add_option("--delta", delta, "controller tolerance"), "DELTA");
  env(app.add_option("--kmin", kmin), "KMIN");
  env(app.add_option("--kmax", kmax), "KMAX");
  env(app.add_option("--kconst", kconst, "step of the constant-step comparison"), "KCONST");
  env(app.add_option("--snapshots", snapshots, "VTK snapshot times")->delimiter(','), "SNAPSHOTS");
  env(app.add_option("--workers", workers, "concurrent sweep cases"), "WORKERS");
  env(app.add_option("--out", out, "output directory"), "OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ConfigError& e) {
    throw ConfigError(std::string("malformed config file: ") + e.what());
  } catch (const CLI::FileError& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("bad command line: ") + e.what());
  }

  if (!experiment) throw ConfigError("no experiment given (use --experiment)");
  RunConfig c = default_config(experiment_from_string(*experiment), full_scale);
  if (theta) c.theta = *theta;
  if (nx_list) c.n_list = *nx_list;
  if (nx) c.n_list = {*nx};
  if (dt_list) c.dt_list = *dt_list;
  if (dt) c.dt_list = {*dt};
  if (tmax) c.T = *tmax;
  if (re) {
    c.re_list = *re;
    if (!c.re_list.empty() && c.re_list.front() > 0) c.params.mu = 1.0 / c.re_list.front();
  }
  if (mu) c.params.mu = *mu;
  if (gamma) c.params.gamma = *gamma;
  if (nu) c.params.nu = *nu;
  if (rho) c.params.rho = *rho;
  if (lambda) c.params.lambda = *lambda;
  if (seed) c.seed = *seed;
  if (delta) c.delta = *delta;
  if (kmin) c.bounds.k_min = *kmin;
  if (kmax) c.bounds.k_max = *kmax;
  if (kconst) c.constant_dt = *kconst;
  if (snapshots) c.snapshot_times = *snapshots;
  if (workers) c.workers = *workers;
  if (out) c.out_dir = *out;
  c.validate();
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["experiment"] = to_string(c.experiment);
  j["full_scale"] = c.full_scale;
  j["theta"] = c.theta;
  j["n_list"] = c.n_list;
  j["dt_list"] = c.dt_list;
  j["T"] = c.T;
  j["params"] = {{"mu", c.params.mu},
                 {"gamma", c.params.gamma},
                 {"nu", c.params.nu},
                 {"rho", c.params.rho},
                 {"lambda", c.params.lambda}};
  j["re_list"] = c.re_list;
  j["seed"] = c.seed;
  j["rng"] = "mt19937_64, 53-bit mantissa mapped to [-1, 1)";
  j["controller"] = {{"delta", c.delta}, {"k_min", c.bounds.k_min}, {"k_max", c.bounds.k_max}};
  j["constant_dt"] = c.constant_dt;
  j["snapshot_times"] = c.snapshot_times;
  j["out_dir"] = c.out_dir;
  j["workers"] = c.workers;
  return j;
}

}  // namespace afem
