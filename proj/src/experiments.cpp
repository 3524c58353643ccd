#include "afem/experiments.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <string>

namespace afem {

UniformSource::UniformSource(std::uint64_t seed) : engine_(seed) {}

double UniformSource::next() {
  // 53 high bits to [0, 1), then to [-1, 1).
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

Field random_velocity(const Discretization& disc, std::uint64_t seed) {
  const SpacePtr& V = disc.velocity_space();
  Field u(V);
  UniformSource rng(seed);
  const int ns = V->scalar_dof_count();
  for (int s = 0; s < ns; ++s) {
    const double a = rng.next(), b = rng.next();
    if (V->is_boundary_scalar_dof(s)) continue;
    u.coeffs[s] = a;
    u.coeffs[ns + s] = b;
  }
  return u;
}

namespace {

// Runs job(i) for i in [0, count) with at most `workers` in flight; results in order.
template <class R, class Job>
std::vector<R> parallel_map(std::size_t count, int workers, Job job) {
  std::vector<R> out(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = job(i);
    return out;
  }
  std::size_t next = 0;
  while (next < count) {
    std::vector<std::future<R>> batch;
    const std::size_t end = std::min(count, next + static_cast<std::size_t>(workers));
    for (std::size_t i = next; i < end; ++i) batch.push_back(std::async(std::launch::async, job, i));
    for (std::size_t i = next; i < end; ++i) out[i] = batch[i - next].get();
    next = end;
  }
  return out;
}

int step_count(double T, double dt) {
  if (!(dt > 0) || !(T > 0)) throw std::invalid_argument("time step and final time must be positive");
  const double r = T / dt;
  const int n = static_cast<int>(std::lround(r));
  if (n < 2 || std::abs(r - n) > 1e-9 * r) throw std::invalid_argument("final time must be a multiple (>= 2) of dt");
  return n;
}

}  // namespace

ErrorReport run_projection_convergence(const std::vector<int>& n_list, double mu, double gamma,
                                       const ManufacturedSolution& ms, int workers) {
  if (!(mu > 0) || !(gamma > 0)) throw std::invalid_argument("projection needs mu, gamma > 0");
  ErrorReport report;
  report.step_label = "1/h";
  report.rows = parallel_map<ErrorRow>(n_list.size(), workers, [&](std::size_t i) {
    const Discretization disc(n_list[i]);
    ModelParams prm;
    prm.mu = mu;
    prm.gamma = gamma;
    const DlnStepper stepper(disc, prm, {});
    const Eigen::VectorXd x = stepper.project(ms.at(0.0));
    return ErrorRow{1.0 / n_list[i], solution_errors(disc, x, ms, 0.0)};
  });
  return report;
}

ManufacturedRun run_manufactured(const Discretization& disc, const ManufacturedSolution& ms,
                                 const ModelParams& params, double theta, double dt, double T,
                                 const NewtonConfig& newton) {
  const int n_steps = step_count(T, dt);
  DlnStepper stepper(disc, params, manufactured_problem(ms, params), newton);
  const Eigen::VectorXd level0 = stepper.project(ms.at(0.0));

  ManufacturedRun run;
  StepOutcome o = stepper.bootstrap_first_step(level0, 0.0, dt);
  run.steps.push_back(o.diagnostics);
  SolutionHistory h = std::move(o.history);
  for (int m = 2; m <= n_steps; ++m) {
    // Land exactly on m * dt to avoid drift in the final time.
    const double k = m * dt - h.t_curr;
    o = stepper.advance(h, k, theta);
    run.steps.push_back(o.diagnostics);
    h = std::move(o.history);
  }
  run.t_final = h.t_curr;
  run.errors = solution_errors(disc, h.curr, ms, run.t_final);
  run.solution = std::move(h.curr);
  return run;
}

ErrorReport run_scheme_convergence_time(int n, const std::vector<double>& dt_list, double theta, double T,
                                        const ModelParams& params, const ManufacturedSolution& ms,
                                        std::vector<ManufacturedRun>* runs, int workers) {
  const Discretization disc(n);
  auto all = parallel_map<ManufacturedRun>(dt_list.size(), workers, [&](std::size_t i) {
    return run_manufactured(disc, ms, params, theta, dt_list[i], T);
  });
  ErrorReport report;
  report.step_label = "1/dt";
  for (std::size_t i = 0; i < all.size(); ++i) report.rows.push_back({dt_list[i], all[i].errors});
  if (runs) *runs = std::move(all);
  return report;
}

ErrorReport run_scheme_convergence_space(const std::vector<int>& n_list, double dt, double theta, double T,
                                         const ModelParams& params, const ManufacturedSolution& ms,
                                         std::vector<ManufacturedRun>* runs, int workers) {
  auto all = parallel_map<ManufacturedRun>(n_list.size(), workers, [&](std::size_t i) {
    const Discretization disc(n_list[i]);
    return run_manufactured(disc, ms, params, theta, dt, T);
  });
  ErrorReport report;
  report.step_label = "1/h";
  for (std::size_t i = 0; i < all.size(); ++i) report.rows.push_back({1.0 / n_list[i], all[i].errors});
  if (runs) *runs = std::move(all);
  return report;
}

ModelParams active_fluid_params(double mu) {
  ModelParams p;
  p.mu = mu;
  p.gamma = mu * mu * mu;
  p.nu = 0.003;
  p.rho = -0.81;
  p.lambda = 0.5;
  return p;
}

namespace {

bool due(double t, double target, double k) { return std::abs(t - target) <= 0.5 * k; }

// Wraps a step so failures carry the index of the level being computed.
template <class F>
StepOutcome checked_step(int index, F&& step) {
  try {
    return step();
  } catch (const NewtonFailure& e) {
    throw NewtonFailure("step " + std::to_string(index) + ": " + e.what());
  } catch (const SingularSystemError& e) {
    throw SingularSystemError("step " + std::to_string(index) + ": " + e.what(), e.pivot());
  }
}

}  // namespace

SelfOrganizationResult run_self_organization(const SelfOrganizationConfig& cfg, const StepObserver& observer) {
  const int n_steps = step_count(cfg.T, cfg.dt);
  const Discretization disc(cfg.n);
  DlnStepper stepper(disc, cfg.params, {}, cfg.newton);

  SelfOrganizationResult res;
  const Field u0 = random_velocity(disc, cfg.seed);
  res.initial = u0.coeffs;
  res.level0 = stepper.project_velocity(u0);
  const Eigen::VectorXd u_level0 = res.level0.segment(disc.layout().u(), disc.layout().vel);
  res.initial_kinetic = disc.l2_norm_squared(u_level0);
  for (double ts : cfg.snapshot_times) {
    if (due(0.0, ts, cfg.dt)) res.snapshots.push_back({0.0, res.level0});
  }

  auto record = [&](const StepOutcome& o) {
    res.steps.push_back(o.diagnostics);
    if (observer) observer(o.diagnostics, o.history);
    for (double ts : cfg.snapshot_times) {
      if (ts > 0 && due(o.history.t_curr, ts, cfg.dt)) res.snapshots.push_back({o.history.t_curr, o.history.curr});
    }
  };

  StepOutcome o = checked_step(1, [&] { return stepper.bootstrap_first_step(res.level0, 0.0, cfg.dt); });
  record(o);
  SolutionHistory h = std::move(o.history);
  for (int m = 2; m <= n_steps; ++m) {
    o = checked_step(m, [&] { return stepper.advance(h, m * cfg.dt - h.t_curr, cfg.theta); });
    record(o);
    h = std::move(o.history);
  }
  return res;
}

AdaptiveRun run_adaptive(const AdaptiveConfig& cfg, double re, const StepObserver& observer) {
  if (!(re > 0)) throw std::invalid_argument("Reynolds number must be positive");
  if (!(cfg.bounds.k_min > 0) || cfg.bounds.k_min > cfg.bounds.k_max) {
    throw std::invalid_argument("controller bounds need 0 < k_min <= k_max");
  }
  const Discretization disc(cfg.n);
  ModelParams prm = cfg.base;
  prm.mu = 1.0 / re;
  DlnStepper stepper(disc, prm, {}, cfg.newton);

  AdaptiveRun run;
  run.re = re;
  run.constant_steps = static_cast<int>(std::lround(cfg.T / cfg.constant_dt));
  const Eigen::VectorXd level0 = stepper.project_velocity(random_velocity(disc, cfg.seed));

  double k = std::min(cfg.bounds.k_min, cfg.T);
  StepOutcome o = checked_step(1, [&] { return stepper.bootstrap_first_step(level0, 0.0, k); });
  SolutionHistory h;
  // Ends the run when the remaining interval is a rounding remnant.
  const double t_eps = 1e-12 * cfg.T;
  for (int m = 1;; ++m) {
    run.steps.push_back(o.diagnostics);
    if (observer) observer(o.diagnostics, o.history);
    h = std::move(o.history);
    if (h.t_curr >= cfg.T - t_eps) {
      run.completed = true;
      break;
    }
    if (cfg.max_steps > 0 && m >= cfg.max_steps) break;
    k = adapt_step(o.diagnostics.rates, o.diagnostics.k, cfg.bounds, cfg.delta);
    k = std::min(k, cfg.T - h.t_curr);
    o = checked_step(m + 1, [&] { return stepper.advance(h, k, cfg.theta); });
  }
  run.adaptive_steps = static_cast<int>(run.steps.size());
  return run;
}

std::vector<AdaptiveRun> run_adaptive_comparison(const AdaptiveConfig& cfg, const std::vector<double>& re_list) {
  std::vector<AdaptiveRun> out;
  for (double re : re_list) out.push_back(run_adaptive(cfg, re));
  return out;
}

}  // namespace afem
