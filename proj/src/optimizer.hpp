#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "metrics.hpp"
#include "state.hpp"

namespace mmes {

/// Tuning knobs for the annealing + polishing search. Every chain is an
/// independent restart with its own deterministic substream of `seed`, so a
/// fixed (seed, config) pair reproduces results bit for bit regardless of
/// the thread count.
struct OptimizerConfig {
  int restarts = 32;
  std::uint64_t seed = 1;
  int anneal_steps = 1200;
  double initial_temperature = 0.12;
  double cooling_factor = 0.995;   // applied once per proposal
  double proposal_stddev = 0.35;   // scaled by T / initial_temperature
  int polish_max_iters = 8000;
  double polish_tolerance = 1e-8;  // tangent gradient norm stop
  std::optional<double> target;    // stop scheduling once reached
  double feasibility_tolerance = 1e-3;  // "purity sits on the bound" band
  int threads = 0;                 // 0: hardware concurrency

  void validate() const;
};

struct TracePoint {
  long iteration = 0;
  double objective = 0.0;
};

struct OptimizationResult {
  PureState best_state;
  double e0_estimate = 0.0;    // balanced-average purity of best_state
  double objective_value = 0.0;  // minimized objective (restricted mean)
  PurityReport report;         // always over the full balanced set
  Classification classification;
  std::vector<TracePoint> objective_trace;  // winning chain only
  double final_gradient_norm = 0.0;
  bool polish_converged = false;
  std::uint64_t seed = 0;
  int restarts_used = 0;
  int best_restart = 0;
};

/// Riemannian gradient of the balanced-average purity on the unit sphere:
/// ambient steepest-ascent direction with its radial component projected
/// out. Orthogonal to the state within roundoff.
std::vector<Complex> gradient(const PureState& state);

/// Searches for the minimum of the balanced-average purity over normalized
/// pure states of n qubits. 2 <= n <= 10.
OptimizationResult minimize_potential(int n, const OptimizerConfig& config);

/// Same machinery, but the objective is the mean purity over `subset`
/// only. The returned report still covers every balanced bipartition.
OptimizationResult minimize_subset(int n,
                                   const std::vector<Bipartition>& subset,
                                   const OptimizerConfig& config);

/// One step of the incremental scan: the subset chosen so far, the
/// minimized restricted average, and the purities of the chosen
/// bipartitions at that minimizer (sorted ascending).
struct ScanResult {
  int k = 0;
  double alpha = 0.0;
  double min_avg_purity = 0.0;
  std::vector<double> purity_multiset;
  std::vector<Bipartition> chosen;
};

/// Grows the bipartition subset one element per step, k = 1..K. Each step
/// picks the candidate whose minimized restricted average is lowest, with
/// ties (within 1e-6 of each other, in particular everything sitting on
/// the purity bound) broken by canonical enumeration order. The k+1
/// problem is warm-started from the k minimizer plus fresh restarts.
std::vector<ScanResult> greedy_scan(int n, const OptimizerConfig& config);

struct RandomScanRow {
  int k = 0;
  double alpha = 0.0;
  double mean_min_avg_purity = 0.0;
  double q16 = 0.0;  // central 68% band of the per-sample minima
  double q84 = 0.0;
};

/// For each k, draws `samples_per_k` uniform k-subsets of the canonical
/// balanced set (seeded) and minimizes the restricted average for each.
std::vector<RandomScanRow> random_scan(int n, const std::vector<int>& k_values,
                                       int samples_per_k,
                                       const OptimizerConfig& config);

}  // namespace mmes
