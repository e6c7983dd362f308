#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace mmes {

double purity_lower_bound(int n) { return std::ldexp(1.0, -(n / 2)); }

std::vector<double> Histogram::edges() const {
  std::vector<double> e(counts.size() + 1);
  const double width = (hi - lo) / static_cast<double>(counts.size());
  for (std::size_t i = 0; i <= counts.size(); ++i) {
    e[i] = lo + width * static_cast<double>(i);
  }
  e.back() = hi;
  return e;
}

const char* mmes_class_name(MmesClass c) {
  switch (c) {
    case MmesClass::Perfect:
      return "perfect";
    case MmesClass::UniformlyOptimal:
      return "uniformly_optimal";
    case MmesClass::Frustrated:
      return "frustrated";
  }
  return "unknown";
}

double compensated_mean(const std::vector<double>& values) {
  // Kahan summation in the given order.
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(values.size());
}

Histogram bin_values(const std::vector<double>& values, double lo, double hi,
                     int bins) {
  if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    int idx = static_cast<int>(std::floor((v - lo) / width));
    idx = std::clamp(idx, 0, bins - 1);  // closed last bin, clamp roundoff
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

namespace {

std::vector<double> balanced_purities(const PureState& state,
                                      const BipartitionSet& set) {
  std::vector<double> purities(set.size());
  KernelWorkspace ws;
  for (std::size_t i = 0; i < set.size(); ++i) {
    purities[i] = purity_kernel(state.amplitudes().data(),
                                make_purity_plan(set.members[i]), ws);
  }
  return purities;
}

}  // namespace

PurityReport make_report(const PureState& state, int bins) {
  const BipartitionSet set = enumerate_balanced(state.qubits());
  const std::vector<double> purities = balanced_purities(state, set);

  PurityReport report;
  report.n = state.qubits();
  report.per_bipartition.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    report.per_bipartition.emplace_back(set.members[i], purities[i]);
  }
  report.mean = compensated_mean(purities);
  double sq = 0.0;
  for (double p : purities) sq += (p - report.mean) * (p - report.mean);
  report.stdev = std::sqrt(sq / static_cast<double>(purities.size()));
  report.min = *std::min_element(purities.begin(), purities.end());
  report.max = *std::max_element(purities.begin(), purities.end());
  report.histogram =
      bin_values(purities, purity_lower_bound(state.qubits()), 1.0, bins);
  return report;
}

double potential(const PureState& state) {
  const BipartitionSet set = enumerate_balanced(state.qubits());
  return compensated_mean(balanced_purities(state, set));
}

double variance_sigma(const PureState& state) {
  const BipartitionSet set = enumerate_balanced(state.qubits());
  const std::vector<double> purities = balanced_purities(state, set);
  const double mean = compensated_mean(purities);
  double sq = 0.0;
  for (double p : purities) sq += (p - mean) * (p - mean);
  return std::sqrt(sq / static_cast<double>(purities.size()));
}

double typical_mean(int n) {
  if (n < 2) throw std::invalid_argument("typical_mean: need n >= 2");
  const double na = std::ldexp(1.0, n / 2);
  const double nb = std::ldexp(1.0, n - n / 2);
  return (na + nb) / (na * nb + 1.0);
}

double frustration_ratio(double e0, int n) {
  const double bound = purity_lower_bound(n);
  if (e0 < bound - 1e-9) {
    throw std::invalid_argument(
        "frustration_ratio: e0 below the purity bound: " + std::to_string(e0));
  }
  if (e0 <= bound) return 0.0;
  return (e0 - bound) / e0;
}

std::pair<long long, long long> frustration_ratio_exact(long long num,
                                                        long long den,
                                                        int n) {
  if (den <= 0 || num <= 0) {
    throw std::invalid_argument("frustration_ratio_exact: need e0 > 0");
  }
  const long long na = 1LL << (n / 2);  // e0 = num/den, bound = 1/na
  const long long top = num * na - den;
  if (top < 0) {
    throw std::invalid_argument(
        "frustration_ratio_exact: e0 below the purity bound");
  }
  const long long bottom = num * na;
  const long long g = std::gcd(top, bottom);  // gcd(0, x) == x
  return {top / g, bottom / g};
}

Classification classify(const PurityReport& report, double tol) {
  return classify_with_bound(report, purity_lower_bound(report.n), tol);
}

Classification classify_with_bound(const PurityReport& report, double bound,
                                   double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classify: tol must be > 0");
  Classification c;
  c.tolerance = tol;
  if (report.mean <= bound + tol) {
    c.value = MmesClass::Perfect;
  } else if (report.stdev <= tol) {
    c.value = MmesClass::UniformlyOptimal;
  } else {
    c.value = MmesClass::Frustrated;
  }
  return c;
}

Histogram purity_histogram(const PureState& state, int bins) {
  const BipartitionSet set = enumerate_balanced(state.qubits());
  return bin_values(balanced_purities(state, set),
                    purity_lower_bound(state.qubits()), 1.0, bins);
}

}  // namespace mmes
