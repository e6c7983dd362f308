#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bipartitions.hpp"
#include "metrics.hpp"
#include "optimizer.hpp"

namespace mmes {

/// Standard symplectic form for n modes in (q1, p1, ..., qn, pn) ordering:
/// block diagonal copies of [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int modes);

/// Zero-mean Gaussian state of n modes represented by its 2n x 2n
/// covariance matrix (vacuum = identity / 2, hbar = 1). Construction checks
/// symmetry and the uncertainty relation V + (i/2) Omega >= 0.
class GaussianState {
 public:
  static GaussianState from_covariance(int modes, Eigen::MatrixXd v);

  int modes() const { return modes_; }
  const Eigen::MatrixXd& covariance() const { return v_; }

  /// 1 / (2^n sqrt(det V)); equals 1 exactly when det(2V) = 1.
  double global_purity() const;
  bool is_pure(double tol = 1e-8) const;

 private:
  GaussianState(int modes, Eigen::MatrixXd v)
      : modes_(modes), v_(std::move(v)) {}

  int modes_ = 0;
  Eigen::MatrixXd v_;
};

/// Cap on the average number of excitations per mode:
/// (<q_k^2> + <p_k^2>) / 2 <= nbar + 1/2 for every mode k.
struct ExcitationConstraint {
  double nbar = 0.0;
};

/// Purity of the reduction to `mode_mask` (bit k-1 = mode k):
/// 1 / (2^{n_A} sqrt(det V_A)) with V_A the principal submatrix of the
/// chosen modes' (q, p) rows and columns.
double gaussian_purity(const GaussianState& state, std::uint64_t mode_mask);
double gaussian_purity(const GaussianState& state, const Bipartition& b);

/// Purity of the thermal state with nbar excitations per mode, reduced to
/// floor(n/2) modes: the constrained lower bound for balanced reductions.
double thermal_bound(int modes, double nbar);

bool constraint_satisfied(const GaussianState& state,
                          const ExcitationConstraint& c, double slack = 1e-9);

/// Pure-state chart: params fill the upper triangle (row-major) of a
/// symmetric matrix 'A', S = exp(Omega A) is symplectic, and V = S S^T / 2
/// is an exactly pure covariance. params must have length n(2n + 1).
Eigen::MatrixXd symplectic_from_params(int modes,
                                       const std::vector<double>& params);
GaussianState pure_gaussian_from_params(int modes,
                                        const std::vector<double>& params);

struct GaussianOptimizationResult {
  GaussianState best_state;
  std::vector<double> best_params;
  double e0_estimate = 0.0;  // balanced-average purity at the minimizer
  double bound = 0.0;        // thermal_bound(modes, nbar)
  double frustration = 0.0;  // (e0 - bound) / e0, clamped at 0
  double sigma = 0.0;
  PurityReport report;       // bipartitions are mode subsets here
  Classification classification;
  std::vector<TracePoint> objective_trace;
  bool feasible = false;
  std::uint64_t seed = 0;
  int restarts_used = 0;
};

/// Minimizes the balanced-average purity over pure Gaussian states subject
/// to the excitation cap. Iterates move in the symplectic-algebra chart;
/// the cap is enforced by a quadratic exterior penalty whose weight ramps
/// x10 per stage until the violation is below 1e-6, then the parameters
/// are shrunk onto the feasible set. nbar must be positive (nbar = 0 pins
/// the state to the vacuum).
GaussianOptimizationResult minimize_gaussian_potential(
    int modes, const ExcitationConstraint& c, const OptimizerConfig& config);

struct SweepPoint {
  double nbar = 0.0;
  double e0 = 0.0;
  double bound = 0.0;
  double frustration = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double saturated_f = 0.0;
  bool saturated = false;  // false: schedule ran out first
};

/// Relaxes the excitation cap along `nbar_schedule` (strictly increasing)
/// and stops once two successive frustration ratios agree within 1e-3.
SweepResult frustration_sweep(int modes,
                              const std::vector<double>& nbar_schedule,
                              const OptimizerConfig& config);

}  // namespace mmes
