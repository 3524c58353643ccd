#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "afem/config.hpp"
#include "afem/experiments.hpp"
#include "afem/io.hpp"

namespace fs = std::filesystem;
using namespace afem;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kIo = 3, kNumerical = 4 };

std::string tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", t);
  return buf;
}

void print_report(const ErrorReport& r, Norm norm) {
  std::printf("%-8s", r.step_label.c_str());
  for (const char* name : kComponentNames) std::printf(" %12s %8s", name, "rate");
  std::printf("\n");
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    std::printf("%-8.4g", 1.0 / r.rows[i].step);
    for (int c = 0; c < 4; ++c) {
      const auto comp = static_cast<Component>(c);
      std::printf(" %12.4e", r.value(i, comp, norm));
      if (i == 0) {
        std::printf(" %8s", "-");
      } else {
        std::printf(" %8.4f", r.rate(i, comp, norm));
      }
    }
    std::printf("\n");
  }
}

void write_report(const ErrorReport& r, const fs::path& dir) {
  write_error_table(r, Norm::l2, (dir / "errors_L2.csv").string());
  write_error_table(r, Norm::h1, (dir / "errors_H1.csv").string());
  std::printf("L2 errors\n");
  print_report(r, Norm::l2);
  std::printf("H1 errors\n");
  print_report(r, Norm::h1);
}

void run(const RunConfig& cfg, const fs::path& dir) {
  switch (cfg.experiment) {
    case Experiment::project_convergence: {
      write_report(run_projection_convergence(cfg.n_list, cfg.params.mu, cfg.params.gamma, projection_solution(),
                                              cfg.workers),
                   dir);
      break;
    }
    case Experiment::time_convergence:
    case Experiment::space_convergence: {
      std::vector<ManufacturedRun> runs;
      const ManufacturedSolution ms = time_dependent_solution();
      const bool in_time = cfg.experiment == Experiment::time_convergence;
      const ErrorReport r =
          in_time ? run_scheme_convergence_time(cfg.n_list.front(), cfg.dt_list, cfg.theta, cfg.T, cfg.params, ms,
                                                &runs, cfg.workers)
                  : run_scheme_convergence_space(cfg.n_list, cfg.dt_list.front(), cfg.theta, cfg.T, cfg.params, ms,
                                                 &runs, cfg.workers);
      write_report(r, dir);
      for (std::size_t i = 0; i < runs.size(); ++i) {
        write_step_diagnostics(runs[i].steps, (dir / ("diagnostics_" + std::to_string(i) + ".csv")).string());
      }
      break;
    }
    case Experiment::self_organization: {
      SelfOrganizationConfig sc;
      sc.n = cfg.n_list.front();
      sc.dt = cfg.dt_list.front();
      sc.T = cfg.T;
      sc.theta = cfg.theta;
      sc.seed = cfg.seed;
      sc.params = cfg.params;
      sc.snapshot_times = cfg.snapshot_times;
      const SelfOrganizationResult res = run_self_organization(sc, [](const StepDiagnostics& d, const auto&) {
        std::printf("step %5d  t=%.4f  |u|^2=%.6e  newton=%d\n", d.step, d.time, d.kinetic, d.newton_iterations);
      });
      write_step_diagnostics(res.steps, (dir / "diagnostics.csv").string());
      const Discretization disc(sc.n);
      for (const Snapshot& s : res.snapshots) {
        write_vtk_state(disc, s.state, s.time, (dir / ("snapshot_t" + tag(s.time) + ".vtk")).string());
      }
      break;
    }
    case Experiment::adaptive_compare: {
      AdaptiveConfig ac;
      ac.n = cfg.n_list.front();
      ac.T = cfg.T;
      ac.theta = cfg.theta;
      ac.bounds = cfg.bounds;
      ac.delta = cfg.delta;
      ac.constant_dt = cfg.constant_dt;
      ac.seed = cfg.seed;
      ac.base = cfg.params;
      std::vector<AdaptiveRun> runs;
      for (double re : cfg.re_list) {
        runs.push_back(run_adaptive(ac, re));
        const AdaptiveRun& r = runs.back();
        std::printf("Re=%g adaptive=%d constant=%d\n", r.re, r.adaptive_steps, r.constant_steps);
        write_step_diagnostics(r.steps, (dir / ("diagnostics_re" + tag(re) + ".csv")).string());
      }
      write_step_count_table(runs, (dir / "step_counts.csv").string());
      break;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const HelpRequested& h) {
    std::cout << h.what();
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  }

  const fs::path dir(cfg.out_dir);
  nlohmann::json manifest = to_json(cfg);
  try {
    fs::create_directories(dir);
    manifest["status"] = "started";
    write_json(manifest, (dir / "manifest.json").string());
  } catch (const std::exception& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  }

  int code = kOk;
  try {
    run(cfg, dir);
    manifest["status"] = "completed";
  } catch (const NewtonFailure& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    manifest["status"] = std::string("failed: ") + e.what();
    code = kNumerical;
  } catch (const SingularSystemError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    manifest["status"] = std::string("failed: ") + e.what();
    code = kNumerical;
  } catch (const std::runtime_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    manifest["status"] = std::string("failed: ") + e.what();
    code = kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    manifest["status"] = std::string("failed: ") + e.what();
    code = kFailure;
  }
  try {
    write_json(manifest, (dir / "manifest.json").string());
  } catch (const std::exception&) {
  }
  return code;
}
