#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bipartitions.hpp"
#include "state.hpp"

namespace mmes {

/// 2^{-floor(n/2)}: the smallest purity a balanced reduction can reach.
double purity_lower_bound(int n);

/// Counts over uniform bins spanning [lo, hi]; the last bin is closed so a
/// purity of exactly 1 is counted.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::size_t> counts;

  std::vector<double> edges() const;
};

enum class MmesClass { Perfect, UniformlyOptimal, Frustrated };

const char* mmes_class_name(MmesClass c);

struct Classification {
  MmesClass value = MmesClass::Frustrated;
  double tolerance = 0.0;
};

/// Per-bipartition purities of one state together with their summary
/// statistics. `mean` is the balanced-average purity; `stdev` the
/// population standard deviation over the same set.
struct PurityReport {
  int n = 0;
  std::vector<std::pair<Bipartition, double>> per_bipartition;
  double mean = 0.0;
  double stdev = 0.0;
  double min = 0.0;
  double max = 0.0;
  Histogram histogram;
};

PurityReport make_report(const PureState& state, int bins = 16);

/// Average purity over all balanced bipartitions (compensated summation in
/// canonical enumeration order, so the value does not depend on how the
/// per-bipartition purities were scheduled).
double potential(const PureState& state);

/// Population standard deviation of the balanced-bipartition purities.
double variance_sigma(const PureState& state);

/// Mean purity of a Haar-random state over balanced bipartitions:
/// (N_A + N_Abar) / (N + 1) with N_A = 2^{floor(n/2)}.
double typical_mean(int n);

/// Normalized gap between an achieved minimum e0 and the ideal bound,
/// (e0 - 2^{-floor(n/2)}) / e0, clamped to 0 when e0 sits on the bound
/// within 1e-9. Throws if e0 is below the bound beyond that slack.
double frustration_ratio(double e0, int n);

/// Same ratio in exact integer arithmetic: e0 = num/den, result as a
/// reduced fraction.
std::pair<long long, long long> frustration_ratio_exact(long long num,
                                                        long long den, int n);

/// Perfect if the mean sits on the lower bound within tol, else uniformly
/// optimal if the purities coincide within tol, else frustrated.
Classification classify(const PurityReport& report, double tol = 1e-6);

/// Same decision against an arbitrary lower bound (constrained settings).
Classification classify_with_bound(const PurityReport& report, double bound,
                                   double tol);

/// Balanced-bipartition purities binned over the theoretical range
/// [2^{-floor(n/2)}, 1]; counts sum to the number of bipartitions.
Histogram purity_histogram(const PureState& state, int bins);

/// Helpers shared with the optimizer: summary statistics over an existing
/// list of purities in fixed order.
double compensated_mean(const std::vector<double>& values);
Histogram bin_values(const std::vector<double>& values, double lo, double hi,
                     int bins);

}  // namespace mmes
