#include "optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "errors.hpp"
#include "threading.hpp"

namespace mmes {

void OptimizerConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("config: restarts must be >= 1");
  if (anneal_steps < 1) {
    throw std::invalid_argument("config: anneal_steps must be >= 1");
  }
  if (polish_max_iters < 1) {
    throw std::invalid_argument("config: polish_max_iters must be >= 1");
  }
  if (!(initial_temperature > 0.0)) {
    throw std::invalid_argument("config: initial_temperature must be > 0");
  }
  if (!(proposal_stddev > 0.0)) {
    throw std::invalid_argument("config: proposal_stddev must be > 0");
  }
  if (!(cooling_factor > 0.0) || !(cooling_factor < 1.0)) {
    throw std::invalid_argument("config: cooling_factor must be in (0, 1)");
  }
  if (!(polish_tolerance > 0.0)) {
    throw std::invalid_argument("config: polish_tolerance must be > 0");
  }
  if (!(feasibility_tolerance > 0.0)) {
    throw std::invalid_argument("config: feasibility_tolerance must be > 0");
  }
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
  if (target && !std::isfinite(*target)) {
    throw std::invalid_argument("config: target must be finite");
  }
}

namespace {

using Vector = Eigen::VectorXcd;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b) {
  return splitmix64(splitmix64(seed + a * 0x9E3779B97F4A7C15ULL) +
                    b * 0xD1B54A32D192ED03ULL);
}

// Mean purity over a fixed list of bipartition plans. Summation is Kahan in
// plan order, so a value never depends on scheduling.
struct SubsetObjective {
  std::size_t dim = 0;
  std::vector<PurityPlan> plans;

  static SubsetObjective build(int n, const std::vector<Bipartition>& set) {
    SubsetObjective obj;
    obj.dim = std::size_t{1} << n;
    obj.plans.reserve(set.size());
    for (const Bipartition& b : set) obj.plans.push_back(make_purity_plan(b));
    return obj;
  }

  double value(const Complex* amp, KernelWorkspace& ws) const {
    double sum = 0.0;
    double carry = 0.0;
    for (const PurityPlan& plan : plans) {
      const double y = purity_kernel(amp, plan, ws) - carry;
      const double t = sum + y;
      carry = (t - sum) - y;
      sum = t;
    }
    return sum / static_cast<double>(plans.size());
  }

  // Returns the value and writes the ambient steepest-ascent gradient.
  double value_and_gradient(const Complex* amp, Vector& grad,
                            KernelWorkspace& ws) const {
    grad.setZero(static_cast<Eigen::Index>(dim));
    const double w = 1.0 / static_cast<double>(plans.size());
    double sum = 0.0;
    double carry = 0.0;
    for (const PurityPlan& plan : plans) {
      const double y = purity_kernel_grad(amp, plan, ws, grad.data(), w) - carry;
      const double t = sum + y;
      carry = (t - sum) - y;
      sum = t;
    }
    return sum * w;
  }
};

// Removes the radial component; the tangent lives on the real sphere in
// C^N, and phase invariance of the objective kills the imaginary part too.
void project_tangent(const Vector& psi, Vector& g) {
  const double radial = psi.dot(g).real();
  g -= radial * psi;
}

struct PolishOutcome {
  double objective = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Projected gradient descent with Barzilai-Borwein steps and Armijo
// backtracking. Monotone: a step is taken only if it decreases the
// objective.
PolishOutcome polish(const SubsetObjective& obj, Vector& psi, int max_iters,
                     double tol, std::vector<TracePoint>* trace,
                     long iteration_offset, int trace_stride) {
  KernelWorkspace ws;
  Vector grad(psi.size());
  Vector tangent(psi.size());
  Vector tangent_new(psi.size());
  Vector trial(psi.size());

  double f = obj.value_and_gradient(psi.data(), grad, ws);
  if (!std::isfinite(f)) throw NumericError("polish: non-finite objective");
  tangent = grad;
  project_tangent(psi, tangent);
  double gnorm = tangent.norm();
  double alpha = 1.0 / std::max(1.0, gnorm);

  constexpr double kArmijo = 1e-4;
  PolishOutcome out;
  int it = 0;
  for (; it < max_iters; ++it) {
    if (trace && it % trace_stride == 0) {
      trace->push_back({iteration_offset + it, f});
    }
    if (gnorm <= tol) {
      out.converged = true;
      break;
    }

    double step = alpha;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      trial = psi - step * tangent;
      trial.normalize();
      const double ft = obj.value(trial.data(), ws);
      if (ft <= f - kArmijo * step * gnorm * gnorm) {
        accepted = true;
        break;
      }
      step *= 0.5;
      if (step * gnorm < 1e-18) break;
    }
    if (!accepted) break;  // no descent at any representable step

    const double f_new = obj.value_and_gradient(trial.data(), grad, ws);
    if (!std::isfinite(f_new)) {
      throw NumericError("polish: non-finite objective");
    }
    tangent_new = grad;
    project_tangent(trial, tangent_new);

    const Vector s = trial - psi;
    const Vector y = tangent_new - tangent;
    const double sy = s.dot(y).real();
    alpha = sy > 1e-18 ? std::clamp(s.squaredNorm() / sy, 1e-10, 1e4)
                       : std::min(step * 2.0, 1e4);

    psi.swap(trial);
    f = f_new;
    tangent.swap(tangent_new);
    gnorm = tangent.norm();
  }

  if (trace) trace->push_back({iteration_offset + it, f});
  out.objective = f;
  out.gradient_norm = gnorm;
  out.iterations = it;
  return out;
}

// Metropolis walk on the sphere: complex Gaussian kicks whose size shrinks
// with the temperature, geometric cooling once per proposal.
double anneal(const SubsetObjective& obj, Vector& psi,
              const OptimizerConfig& cfg, Rng& rng,
              std::vector<TracePoint>* trace, int trace_stride) {
  KernelWorkspace ws;
  double f = obj.value(psi.data(), ws);
  if (!std::isfinite(f)) throw NumericError("anneal: non-finite objective");
  Vector best = psi;
  double best_f = f;
  Vector prop(psi.size());
  double temperature = cfg.initial_temperature;

  for (int step = 0; step < cfg.anneal_steps; ++step) {
    if (trace && step % trace_stride == 0) trace->push_back({step, f});
    const double sigma =
        cfg.proposal_stddev * (temperature / cfg.initial_temperature);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      prop[i] = psi[i] + sigma * rng.complex_normal();
    }
    prop.normalize();
    const double fp = obj.value(prop.data(), ws);
    bool accept = fp <= f;
    if (!accept) {
      accept = rng.uniform() < std::exp(-(fp - f) / temperature);
    }
    if (accept) {
      psi = prop;
      f = fp;
      if (f < best_f) {
        best = psi;
        best_f = f;
      }
    }
    temperature *= cfg.cooling_factor;
  }

  psi = best;
  return best_f;
}

struct ChainOutcome {
  Vector psi;
  double objective = std::numeric_limits<double>::infinity();
  double gradient_norm = 0.0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

// One restart: Haar start + annealing + polish for fresh chains, polish
// only for warm-started chains.
ChainOutcome run_chain(const SubsetObjective& obj, const OptimizerConfig& cfg,
                       const Vector* warm, Rng rng) {
  const int trace_stride =
      std::max(1, (cfg.anneal_steps + cfg.polish_max_iters) / 256);
  ChainOutcome out;
  long offset = 0;
  if (warm) {
    out.psi = *warm;
  } else {
    out.psi.resize(static_cast<Eigen::Index>(obj.dim));
    for (Eigen::Index i = 0; i < out.psi.size(); ++i) {
      out.psi[i] = rng.complex_normal();
    }
    out.psi.normalize();
    anneal(obj, out.psi, cfg, rng, &out.trace, trace_stride);
    offset = cfg.anneal_steps;
  }
  const PolishOutcome p = polish(obj, out.psi, cfg.polish_max_iters,
                                 cfg.polish_tolerance, &out.trace, offset,
                                 trace_stride);
  out.objective = p.objective;
  out.gradient_norm = p.gradient_norm;
  out.converged = p.converged;
  return out;
}

// Restart driver. Chains are fully independent with pre-split RNG streams
// and are merged by argmin with ties going to the lowest index, so the
// result is identical for any thread count. When a target is set, chains
// are launched in fixed batches of 8 and scheduling stops after the first
// batch whose best reaches it.
OptimizationResult minimize_core(int n,
                                 const std::vector<Bipartition>& objective_set,
                                 const OptimizerConfig& cfg,
                                 const std::vector<PureState>& warm_starts) {
  cfg.validate();
  const SubsetObjective obj = SubsetObjective::build(n, objective_set);

  std::vector<Vector> warm;
  warm.reserve(warm_starts.size());
  for (const PureState& w : warm_starts) {
    if (w.qubits() != n) throw DimensionError("minimize: warm start mismatch");
    warm.push_back(Eigen::Map<const Vector>(w.amplitudes().data(),
                                            static_cast<Eigen::Index>(w.dim())));
  }

  const std::size_t total = warm.size() + static_cast<std::size_t>(cfg.restarts);
  std::vector<ChainOutcome> outcomes(total);
  Rng root(cfg.seed);

  const std::size_t batch = cfg.target ? 8 : total;
  std::size_t launched = 0;
  while (launched < total) {
    const std::size_t end = std::min(total, launched + batch);
    parallel_for_index(end - launched, cfg.threads, [&](std::size_t j) {
      const std::size_t i = launched + j;
      const Vector* w = i < warm.size() ? &warm[i] : nullptr;
      outcomes[i] = run_chain(obj, cfg, w, root.stream(i));
    });
    launched = end;
    if (cfg.target) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < launched; ++i) {
        best = std::min(best, outcomes[i].objective);
      }
      if (best <= *cfg.target) break;
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < launched; ++i) {
    if (outcomes[i].objective < outcomes[best].objective) best = i;
  }
  ChainOutcome& winner = outcomes[best];
  if (!std::isfinite(winner.objective)) {
    throw NumericError("minimize: non-finite objective");
  }

  OptimizationResult result{
      .best_state = PureState::normalized(
          n, std::vector<Complex>(winner.psi.data(),
                                  winner.psi.data() + winner.psi.size()))};
  result.report = make_report(result.best_state);
  result.e0_estimate = result.report.mean;
  result.objective_value = winner.objective;
  result.classification = classify(result.report);
  result.objective_trace = std::move(winner.trace);
  result.final_gradient_norm = winner.gradient_norm;
  result.polish_converged = winner.converged;
  result.seed = cfg.seed;
  result.restarts_used = static_cast<int>(launched);
  result.best_restart = static_cast<int>(best);
  return result;
}

}  // namespace

std::vector<Complex> gradient(const PureState& state) {
  const BipartitionSet set = enumerate_balanced(state.qubits());
  const SubsetObjective obj = SubsetObjective::build(state.qubits(), set.members);
  KernelWorkspace ws;
  Vector grad;
  Eigen::Map<const Vector> psi(state.amplitudes().data(),
                               static_cast<Eigen::Index>(state.dim()));
  obj.value_and_gradient(psi.data(), grad, ws);
  const double radial = psi.dot(grad).real();
  grad -= radial * psi;
  return {grad.data(), grad.data() + grad.size()};
}

OptimizationResult minimize_potential(int n, const OptimizerConfig& config) {
  if (n < 2 || n > 10) {
    throw std::invalid_argument("minimize_potential: n must be in [2, 10]");
  }
  return minimize_core(n, enumerate_balanced(n).members, config, {});
}

OptimizationResult minimize_subset(int n,
                                   const std::vector<Bipartition>& subset,
                                   const OptimizerConfig& config) {
  if (n < 2 || n > 10) {
    throw std::invalid_argument("minimize_subset: n must be in [2, 10]");
  }
  if (subset.empty()) {
    throw std::invalid_argument("minimize_subset: subset must be non-empty");
  }
  for (const Bipartition& b : subset) {
    if (b.n != n || !is_canonical_balanced(b)) {
      throw std::invalid_argument(
          "minimize_subset: subset members must be canonical balanced "
          "bipartitions of n");
    }
  }
  return minimize_core(n, subset, config, {});
}

std::vector<ScanResult> greedy_scan(int n, const OptimizerConfig& config) {
  config.validate();
  if (n < 4 || n > 8) {
    throw std::invalid_argument("greedy_scan: n must be in [4, 8]");
  }
  const BipartitionSet full = enumerate_balanced(n);
  const std::size_t count = full.size();
  const double bound = purity_lower_bound(n);
  const double select_tol = std::min(1e-6, config.feasibility_tolerance);
  constexpr double kTieEps = 1e-9;

  std::vector<char> used(count, 0);
  std::vector<Bipartition> chosen;
  std::vector<PureState> warm;
  std::vector<ScanResult> out;
  out.reserve(count);

  // Candidate evaluation at reduced effort; escalated only when no
  // extension keeps the average on the bound.
  OptimizerConfig cheap = config;
  cheap.restarts = std::min(config.restarts, 2);
  cheap.anneal_steps = std::min(config.anneal_steps, 300);

  for (std::size_t k = 1; k <= count; ++k) {
    std::optional<std::size_t> pick;
    OptimizationResult pick_result;
    double fallback_value = std::numeric_limits<double>::infinity();

    for (int effort = 0; effort < 2 && !pick; ++effort) {
      std::optional<std::size_t> best_idx;
      for (std::size_t idx = 0; idx < count; ++idx) {
        if (used[idx]) continue;
        std::vector<Bipartition> trial = chosen;
        trial.push_back(full.members[idx]);
        OptimizerConfig sub = effort == 0 ? cheap : config;
        sub.seed = derive_seed(config.seed, k * 2 + effort, idx);
        OptimizationResult res = minimize_core(n, trial, sub, warm);
        if (res.objective_value <= bound + select_tol) {
          pick = idx;
          pick_result = std::move(res);
          break;
        }
        if (effort == 1 && res.objective_value < fallback_value - kTieEps) {
          fallback_value = res.objective_value;
          best_idx = idx;
          pick_result = std::move(res);
        }
      }
      if (!pick && effort == 1) pick = best_idx;
    }

    used[*pick] = 1;
    chosen.push_back(full.members[*pick]);
    warm.assign(1, pick_result.best_state);

    ScanResult row;
    row.k = static_cast<int>(k);
    row.alpha = static_cast<double>(k) / static_cast<double>(count);
    row.min_avg_purity = pick_result.objective_value;
    row.chosen = chosen;
    KernelWorkspace ws;
    row.purity_multiset.reserve(chosen.size());
    for (const Bipartition& b : chosen) {
      row.purity_multiset.push_back(
          purity_kernel(pick_result.best_state.amplitudes().data(),
                        make_purity_plan(b), ws));
    }
    std::sort(row.purity_multiset.begin(), row.purity_multiset.end());
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

double interpolated_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.size() == 1) return sorted.front();
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::vector<RandomScanRow> random_scan(int n, const std::vector<int>& k_values,
                                       int samples_per_k,
                                       const OptimizerConfig& config) {
  config.validate();
  if (n < 2 || n > 10) {
    throw std::invalid_argument("random_scan: n must be in [2, 10]");
  }
  if (samples_per_k < 1) {
    throw std::invalid_argument("random_scan: samples_per_k must be >= 1");
  }
  const BipartitionSet full = enumerate_balanced(n);
  const int count = static_cast<int>(full.size());
  for (int k : k_values) {
    if (k < 1 || k > count) {
      throw std::invalid_argument("random_scan: k out of range [1, K]");
    }
  }

  const std::size_t tasks =
      k_values.size() * static_cast<std::size_t>(samples_per_k);
  std::vector<double> values(tasks);

  parallel_for_index(tasks, config.threads, [&](std::size_t t) {
    const std::size_t ki = t / static_cast<std::size_t>(samples_per_k);
    const int k = k_values[ki];

    // Uniform k-subset via partial Fisher-Yates, then canonical order.
    Rng pick(derive_seed(config.seed, 0xBD5ULL, t));
    std::vector<int> indices(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) indices[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(pick.uniform_index(
                            static_cast<std::uint64_t>(count - i)));
      std::swap(indices[static_cast<std::size_t>(i)],
                indices[static_cast<std::size_t>(j)]);
    }
    std::vector<int> subset_idx(indices.begin(), indices.begin() + k);
    std::sort(subset_idx.begin(), subset_idx.end());
    std::vector<Bipartition> subset;
    subset.reserve(subset_idx.size());
    for (int i : subset_idx) {
      subset.push_back(full.members[static_cast<std::size_t>(i)]);
    }

    OptimizerConfig sub = config;
    sub.threads = 1;  // grid is already parallel
    sub.seed = derive_seed(config.seed, 0x5CA1ULL, t);
    values[t] = minimize_core(n, subset, sub, {}).objective_value;
  });

  std::vector<RandomScanRow> rows;
  rows.reserve(k_values.size());
  for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
    std::vector<double> sample(
        values.begin() + static_cast<std::ptrdiff_t>(
                             ki * static_cast<std::size_t>(samples_per_k)),
        values.begin() + static_cast<std::ptrdiff_t>(
                             (ki + 1) * static_cast<std::size_t>(samples_per_k)));
    RandomScanRow row;
    row.k = k_values[ki];
    row.alpha = static_cast<double>(row.k) / static_cast<double>(count);
    row.mean_min_avg_purity = compensated_mean(sample);
    std::sort(sample.begin(), sample.end());
    row.q16 = interpolated_quantile(sample, 0.16);
    row.q84 = interpolated_quantile(sample, 0.84);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mmes
