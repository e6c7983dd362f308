#pragma once

#include <vector>

namespace mmes {

/// Symmetric coupling matrix with zero diagonal: J(i, k) rewards aligned
/// spins when positive.
struct CouplingMatrix {
  int m = 0;
  std::vector<double> j;  // row-major m x m

  static CouplingMatrix uniform(int m, double value);
  static CouplingMatrix from_matrix(int m, std::vector<double> entries);

  double at(int i, int k) const { return j[static_cast<std::size_t>(i) *
                                           static_cast<std::size_t>(m) + k]; }
};

/// H = -(1/2) sum_{i != k} J_ik S_i S_k for spins S_i = +-1.
double ising_cost(const CouplingMatrix& j, const std::vector<int>& spins);

struct IsingMinimum {
  double cost = 0.0;
  std::vector<int> spins;
};

/// Exhaustive minimum over the 2^m spin configurations (m <= 24); bit k-1
/// of the enumeration encodes S_k = +1, and ties go to the lowest code.
IsingMinimum ising_min(const CouplingMatrix& j);

}  // namespace mmes
