#include "gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "errors.hpp"
#include "threading.hpp"

namespace mmes {

namespace {

void check_mode_count(int modes) {
  if (modes < 1 || modes > 16) {
    throw std::invalid_argument("gaussian: mode count out of range: " +
                                std::to_string(modes));
  }
}

std::size_t param_count(int modes) {
  return static_cast<std::size_t>(modes) * (2 * modes + 1);
}

}  // namespace

Eigen::MatrixXd symplectic_form(int modes) {
  check_mode_count(modes);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

GaussianState GaussianState::from_covariance(int modes, Eigen::MatrixXd v) {
  check_mode_count(modes);
  const int d = 2 * modes;
  if (v.rows() != d || v.cols() != d) {
    throw DimensionError("gaussian: covariance must be 2n x 2n");
  }
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw CovarianceError("gaussian: covariance is not symmetric");
  }
  v = ((v + v.transpose()) / 2.0).eval();

  // Uncertainty relation: V + (i/2) Omega must be positive semidefinite.
  Eigen::MatrixXcd h = v.cast<std::complex<double>>();
  const Eigen::MatrixXd omega = symplectic_form(modes);
  h += std::complex<double>(0.0, 0.5) * omega.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericError("gaussian: eigenvalue check failed");
  }
  if (solver.eigenvalues().minCoeff() < -1e-9) {
    throw CovarianceError("gaussian: uncertainty relation violated");
  }
  return GaussianState(modes, std::move(v));
}

double GaussianState::global_purity() const {
  const double det = v_.determinant();
  if (det <= 0.0) throw CovarianceError("gaussian: non-positive determinant");
  return 1.0 / (std::ldexp(1.0, modes_) * std::sqrt(det));
}

bool GaussianState::is_pure(double tol) const {
  return std::abs(global_purity() - 1.0) <= tol;
}

namespace {

std::vector<int> mask_rows(int modes, std::uint64_t mode_mask) {
  std::vector<int> rows;
  for (int k = 0; k < modes; ++k) {
    if (mode_mask >> k & 1) {
      rows.push_back(2 * k);
      rows.push_back(2 * k + 1);
    }
  }
  return rows;
}

double subset_purity(const Eigen::MatrixXd& v, const std::vector<int>& rows) {
  const int d = static_cast<int>(rows.size());
  Eigen::MatrixXd sub(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      sub(i, j) = v(rows[static_cast<std::size_t>(i)],
                    rows[static_cast<std::size_t>(j)]);
    }
  }
  const double det = sub.determinant();
  if (det <= 0.0) {
    throw CovarianceError("gaussian_purity: non-positive subdeterminant");
  }
  return 1.0 / (std::ldexp(1.0, d / 2) * std::sqrt(det));
}

}  // namespace

double gaussian_purity(const GaussianState& state, std::uint64_t mode_mask) {
  const std::uint64_t full = (std::uint64_t{1} << state.modes()) - 1;
  if (mode_mask == 0 || (mode_mask & ~full) != 0) {
    throw std::invalid_argument("gaussian_purity: empty or out-of-range mask");
  }
  return subset_purity(state.covariance(), mask_rows(state.modes(), mode_mask));
}

double gaussian_purity(const GaussianState& state, const Bipartition& b) {
  if (b.n != state.modes()) {
    throw DimensionError("gaussian_purity: bipartition mode count mismatch");
  }
  return gaussian_purity(state, b.mask);
}

double thermal_bound(int modes, double nbar) {
  check_mode_count(modes);
  if (nbar < 0.0) throw std::invalid_argument("thermal_bound: nbar must be >= 0");
  const int half = modes / 2;
  return 1.0 / (std::ldexp(1.0, half) * std::pow(nbar + 0.5, half));
}

bool constraint_satisfied(const GaussianState& state,
                          const ExcitationConstraint& c, double slack) {
  if (c.nbar < 0.0) throw std::invalid_argument("constraint: nbar must be >= 0");
  const Eigen::MatrixXd& v = state.covariance();
  for (int k = 0; k < state.modes(); ++k) {
    const double excitation = (v(2 * k, 2 * k) + v(2 * k + 1, 2 * k + 1)) / 2.0;
    if (excitation > c.nbar + 0.5 + slack) return false;
  }
  return true;
}

namespace {

Eigen::MatrixXd generator_from_params(int modes,
                                      const std::vector<double>& params) {
  const int d = 2 * modes;
  Eigen::MatrixXd a(d, d);
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      a(i, j) = params[idx];
      a(j, i) = params[idx];
      ++idx;
    }
  }
  // X = Omega A is the general element of the symplectic algebra.
  Eigen::MatrixXd x = symplectic_form(modes) * a;
  if (!x.allFinite() || x.norm() > 60.0) {
    throw NumericError("gaussian: generator norm too large for exp");
  }
  return x;
}

Eigen::MatrixXd covariance_from_params_raw(int modes,
                                           const std::vector<double>& params) {
  const Eigen::MatrixXd s = generator_from_params(modes, params).exp();
  return (s * s.transpose() / 2.0).eval();
}

}  // namespace

Eigen::MatrixXd symplectic_from_params(int modes,
                                       const std::vector<double>& params) {
  check_mode_count(modes);
  if (params.size() != param_count(modes)) {
    throw DimensionError("gaussian: expected n(2n+1) parameters");
  }
  for (double p : params) {
    if (!std::isfinite(p)) {
      throw std::invalid_argument("gaussian: parameters must be finite");
    }
  }
  return generator_from_params(modes, params).exp();
}

GaussianState pure_gaussian_from_params(int modes,
                                        const std::vector<double>& params) {
  const Eigen::MatrixXd s = symplectic_from_params(modes, params);
  return GaussianState::from_covariance(modes, s * s.transpose() / 2.0);
}

namespace {

// Constrained objective in the parameter chart: balanced-average purity
// plus a quadratic exterior penalty on per-mode excitation overshoot.
struct GaussianObjective {
  int modes = 0;
  double cap = 0.0;  // nbar + 1/2
  std::vector<std::vector<int>> subset_rows;
  double weight = 10.0;

  struct Eval {
    double purity_mean = 0.0;
    double violation = 0.0;  // max per-mode overshoot
    double penalized = 0.0;
  };

  Eval eval(const Eigen::MatrixXd& v) const {
    Eval e;
    double sum = 0.0;
    double carry = 0.0;
    for (const auto& rows : subset_rows) {
      const double y = subset_purity(v, rows) - carry;
      const double t = sum + y;
      carry = (t - sum) - y;
      sum = t;
    }
    e.purity_mean = sum / static_cast<double>(subset_rows.size());
    double penalty = 0.0;
    for (int k = 0; k < modes; ++k) {
      const double over =
          (v(2 * k, 2 * k) + v(2 * k + 1, 2 * k + 1)) / 2.0 - cap;
      if (over > e.violation) e.violation = over;
      if (over > 0.0) penalty += over * over;
    }
    e.penalized = e.purity_mean + weight * penalty;
    return e;
  }

  double value(const std::vector<double>& params) const {
    return eval(covariance_from_params_raw(modes, params)).penalized;
  }

  // Central finite differences; the chart is smooth and cheap to probe.
  void gradient(const std::vector<double>& params,
                std::vector<double>& grad) const {
    grad.resize(params.size());
    std::vector<double> probe = params;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(params[i]));
      probe[i] = params[i] + h;
      const double fp = value(probe);
      probe[i] = params[i] - h;
      const double fm = value(probe);
      probe[i] = params[i];
      grad[i] = (fp - fm) / (2.0 * h);
    }
  }
};

double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// BB + Armijo descent in the unconstrained chart; monotone.
double descend(const GaussianObjective& obj, std::vector<double>& params,
               int max_iters, double tol, std::vector<TracePoint>* trace,
               long offset, int stride) {
  std::vector<double> grad, grad_new, trial(params.size());
  double f = obj.value(params);
  obj.gradient(params, grad);
  double gnorm = vec_norm(grad);
  double alpha = 1.0 / std::max(1.0, gnorm);
  constexpr double kArmijo = 1e-4;

  for (int it = 0; it < max_iters; ++it) {
    if (trace && it % stride == 0) trace->push_back({offset + it, f});
    if (gnorm <= tol) break;

    double step = alpha;
    bool accepted = false;
    double ft = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < params.size(); ++i) {
        trial[i] = params[i] - step * grad[i];
      }
      ft = obj.value(trial);
      if (ft <= f - kArmijo * step * gnorm * gnorm) {
        accepted = true;
        break;
      }
      step *= 0.5;
      if (step * gnorm < 1e-16) break;
    }
    if (!accepted) break;

    obj.gradient(trial, grad_new);
    double ss = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double s = trial[i] - params[i];
      ss += s * s;
      sy += s * (grad_new[i] - grad[i]);
    }
    alpha = sy > 1e-18 ? std::clamp(ss / sy, 1e-10, 1e3)
                       : std::min(step * 2.0, 1e3);
    params.swap(trial);
    grad.swap(grad_new);
    f = ft;
    gnorm = vec_norm(grad);
  }
  return f;
}

struct GaussianChain {
  std::vector<double> params;
  double e0 = std::numeric_limits<double>::infinity();
  bool feasible = false;
  std::vector<TracePoint> trace;
};

GaussianChain run_gaussian_chain(GaussianObjective obj,
                                 const OptimizerConfig& cfg, Rng rng) {
  const std::size_t d = param_count(obj.modes);
  const int stride = std::max(1, (cfg.anneal_steps + cfg.polish_max_iters) / 256);
  GaussianChain out;
  out.params.resize(d);
  for (double& p : out.params) p = 0.5 * rng.normal();

  // Annealing in the chart.
  obj.weight = 10.0;
  double f = obj.value(out.params);
  std::vector<double> best = out.params;
  double best_f = f;
  std::vector<double> prop(d);
  double temperature = cfg.initial_temperature;
  for (int step = 0; step < cfg.anneal_steps; ++step) {
    if (step % stride == 0) out.trace.push_back({step, f});
    const double sigma =
        cfg.proposal_stddev * (temperature / cfg.initial_temperature);
    for (std::size_t i = 0; i < d; ++i) {
      prop[i] = out.params[i] + sigma * rng.normal();
    }
    double fp;
    try {
      fp = obj.value(prop);
    } catch (const NumericError&) {
      fp = std::numeric_limits<double>::infinity();  // wandered too far
    }
    bool accept = fp <= f;
    if (!accept) accept = rng.uniform() < std::exp(-(fp - f) / temperature);
    if (accept) {
      out.params = prop;
      f = fp;
      if (f < best_f) {
        best = out.params;
        best_f = f;
      }
    }
    temperature *= cfg.cooling_factor;
  }
  out.params = best;

  // Penalty ramp: x10 per stage until the worst per-mode overshoot is
  // within 1e-6 of the cap.
  long offset = cfg.anneal_steps;
  for (int stage = 0; stage < 8; ++stage) {
    obj.weight = 10.0 * std::pow(10.0, stage);
    descend(obj, out.params, cfg.polish_max_iters, cfg.polish_tolerance,
            &out.trace, offset, stride);
    offset += cfg.polish_max_iters;
    const auto e = obj.eval(covariance_from_params_raw(obj.modes, out.params));
    if (e.violation <= 1e-6) break;
  }

  // Shrink onto the feasible set; pulling the chart toward the vacuum only
  // raises purities, so this errs on the feasible side.
  const double nbar = obj.cap - 0.5;
  std::vector<double> snapped = out.params;
  for (double eps : {0.0, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2}) {
    for (std::size_t i = 0; i < d; ++i) snapped[i] = out.params[i] * (1.0 - eps);
    const Eigen::MatrixXd v = covariance_from_params_raw(obj.modes, snapped);
    bool ok = true;
    for (int k = 0; k < obj.modes; ++k) {
      if ((v(2 * k, 2 * k) + v(2 * k + 1, 2 * k + 1)) / 2.0 > nbar + 0.5) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.params = snapped;
      out.feasible = true;
      break;
    }
  }

  const auto final_eval =
      obj.eval(covariance_from_params_raw(obj.modes, out.params));
  out.e0 = final_eval.purity_mean;
  out.trace.push_back({offset, out.e0});
  return out;
}

}  // namespace

GaussianOptimizationResult minimize_gaussian_potential(
    int modes, const ExcitationConstraint& c, const OptimizerConfig& config) {
  config.validate();
  if (modes < 2 || modes > 8) {
    throw std::invalid_argument(
        "minimize_gaussian_potential: modes must be in [2, 8]");
  }
  if (!(c.nbar > 0.0)) {
    throw std::invalid_argument(
        "minimize_gaussian_potential: nbar must be positive (nbar = 0 pins "
        "the vacuum)");
  }

  GaussianObjective obj;
  obj.modes = modes;
  obj.cap = c.nbar + 0.5;
  const BipartitionSet set = enumerate_balanced(modes);
  obj.subset_rows.reserve(set.size());
  for (const Bipartition& b : set.members) {
    obj.subset_rows.push_back(mask_rows(modes, b.mask));
  }

  const std::size_t total = static_cast<std::size_t>(config.restarts);
  std::vector<GaussianChain> chains(total);
  Rng root(config.seed);
  parallel_for_index(total, config.threads, [&](std::size_t i) {
    chains[i] = run_gaussian_chain(obj, config, root.stream(i));
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < total; ++i) {
    // Infeasible chains lose to any feasible one.
    const bool better =
        (chains[i].feasible && !chains[best].feasible) ||
        (chains[i].feasible == chains[best].feasible &&
         chains[i].e0 < chains[best].e0);
    if (better) best = i;
  }
  GaussianChain& winner = chains[best];
  if (!std::isfinite(winner.e0)) {
    throw NumericError("minimize_gaussian_potential: non-finite objective");
  }

  const double bound = thermal_bound(modes, c.nbar);
  GaussianOptimizationResult result{
      .best_state = pure_gaussian_from_params(modes, winner.params)};
  result.best_params = winner.params;

  std::vector<double> purities(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    purities[i] = gaussian_purity(result.best_state, set.members[i]);
  }
  PurityReport report;
  report.n = modes;
  for (std::size_t i = 0; i < set.size(); ++i) {
    report.per_bipartition.emplace_back(set.members[i], purities[i]);
  }
  report.mean = compensated_mean(purities);
  double sq = 0.0;
  for (double p : purities) sq += (p - report.mean) * (p - report.mean);
  report.stdev = std::sqrt(sq / static_cast<double>(purities.size()));
  report.min = *std::min_element(purities.begin(), purities.end());
  report.max = *std::max_element(purities.begin(), purities.end());
  report.histogram = bin_values(purities, std::min(bound, report.min), 1.0, 16);

  result.e0_estimate = report.mean;
  result.bound = bound;
  result.frustration =
      result.e0_estimate <= bound ? 0.0
                                  : (result.e0_estimate - bound) /
                                        result.e0_estimate;
  result.sigma = report.stdev;
  result.classification = classify_with_bound(report, bound, 1e-6);
  result.report = std::move(report);
  result.objective_trace = std::move(winner.trace);
  result.feasible = winner.feasible;
  result.seed = config.seed;
  result.restarts_used = static_cast<int>(total);
  return result;
}

SweepResult frustration_sweep(int modes,
                              const std::vector<double>& nbar_schedule,
                              const OptimizerConfig& config) {
  if (nbar_schedule.empty()) {
    throw std::invalid_argument("frustration_sweep: empty schedule");
  }
  double prev = 0.0;
  for (std::size_t i = 0; i < nbar_schedule.size(); ++i) {
    if (!(nbar_schedule[i] > 0.0) || (i > 0 && nbar_schedule[i] <= prev)) {
      throw std::invalid_argument(
          "frustration_sweep: schedule must be strictly increasing and "
          "positive");
    }
    prev = nbar_schedule[i];
  }

  SweepResult sweep;
  for (std::size_t i = 0; i < nbar_schedule.size(); ++i) {
    OptimizerConfig point_cfg = config;
    point_cfg.seed = splitmix64(config.seed + 0x5EEDULL + i);
    const GaussianOptimizationResult res = minimize_gaussian_potential(
        modes, ExcitationConstraint{nbar_schedule[i]}, point_cfg);
    sweep.points.push_back(
        {nbar_schedule[i], res.e0_estimate, res.bound, res.frustration});
    sweep.saturated_f = res.frustration;
    if (i > 0 && std::abs(sweep.points[i].frustration -
                          sweep.points[i - 1].frustration) < 1e-3) {
      sweep.saturated = true;
      break;
    }
  }
  return sweep;
}

}  // namespace mmes
