#pragma once

#include <string>
#include <vector>

#include "gaussian.hpp"
#include "metrics.hpp"
#include "optimizer.hpp"
#include "state.hpp"

namespace mmes {

// JSON schemas (stable, documented in the README):
//   state:  {"n": int, "amplitudes": [[re, im], ...]}
//   report: {"n", "mean", "stdev", "min", "max",
//            "purities": [{"A": [1-based indices], "pi": value}, ...]}
// The state reader rejects wrong lengths and norms off by more than 1e-6.

std::string state_to_json(const PureState& state);
PureState state_from_json(const std::string& text);

std::string report_to_json(const PurityReport& report);

std::string result_to_json(const OptimizationResult& result);

std::string gaussian_state_to_json(const GaussianState& state);
GaussianState gaussian_state_from_json(const std::string& text);

std::string gaussian_result_to_json(const GaussianOptimizationResult& result,
                                    double nbar);

// CSV renderings of the scan tables. Numbers are printed with %.17g so a
// rerun with the same seed reproduces files byte for byte.
//   greedy/random scan: k,alpha,min_avg_purity,q16,q84
//   scan purities:      k,purity,count
//   gaussian sweep:     n,nbar,e0,bound,F
std::string scan_to_csv(const std::vector<ScanResult>& rows);
std::string scan_purities_to_csv(const std::vector<ScanResult>& rows);
std::string random_scan_to_csv(const std::vector<RandomScanRow>& rows);
std::string sweep_to_csv(int modes, const SweepResult& sweep);

std::string format_double(double v);  // %.17g

}  // namespace mmes
