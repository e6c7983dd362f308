#include "ising.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace mmes {

namespace {

void check_agents(int m) {
  if (m < 2 || m > 24) {
    throw std::invalid_argument("ising: agent count out of range: " +
                                std::to_string(m));
  }
}

}  // namespace

CouplingMatrix CouplingMatrix::uniform(int m, double value) {
  check_agents(m);
  CouplingMatrix j;
  j.m = m;
  j.j.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), value);
  for (int i = 0; i < m; ++i) {
    j.j[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) + i] = 0.0;
  }
  return j;
}

CouplingMatrix CouplingMatrix::from_matrix(int m, std::vector<double> entries) {
  check_agents(m);
  if (entries.size() !=
      static_cast<std::size_t>(m) * static_cast<std::size_t>(m)) {
    throw DimensionError("ising: expected m x m coupling entries");
  }
  CouplingMatrix j;
  j.m = m;
  j.j = std::move(entries);
  for (int i = 0; i < m; ++i) {
    if (j.at(i, i) != 0.0) {
      throw std::invalid_argument("ising: diagonal must be zero");
    }
    for (int k = 0; k < m; ++k) {
      if (j.at(i, k) != j.at(k, i)) {
        throw std::invalid_argument("ising: couplings must be symmetric");
      }
      if (!std::isfinite(j.at(i, k))) {
        throw std::invalid_argument("ising: couplings must be finite");
      }
    }
  }
  return j;
}

double ising_cost(const CouplingMatrix& j, const std::vector<int>& spins) {
  if (spins.size() != static_cast<std::size_t>(j.m)) {
    throw DimensionError("ising_cost: spin vector length mismatch");
  }
  for (int s : spins) {
    if (s != 1 && s != -1) {
      throw std::invalid_argument("ising_cost: spins must be +-1");
    }
  }
  double h = 0.0;
  for (int i = 0; i < j.m; ++i) {
    for (int k = 0; k < j.m; ++k) {
      if (i == k) continue;
      h += j.at(i, k) * spins[static_cast<std::size_t>(i)] *
           spins[static_cast<std::size_t>(k)];
    }
  }
  return -0.5 * h;
}

IsingMinimum ising_min(const CouplingMatrix& j) {
  check_agents(j.m);
  const std::uint64_t configs = std::uint64_t{1} << j.m;
  IsingMinimum best;
  std::vector<int> spins(static_cast<std::size_t>(j.m));
  for (std::uint64_t code = 0; code < configs; ++code) {
    for (int k = 0; k < j.m; ++k) {
      spins[static_cast<std::size_t>(k)] = (code >> k & 1) ? 1 : -1;
    }
    const double h = ising_cost(j, spins);
    if (code == 0 || h < best.cost) {
      best.cost = h;
      best.spins = spins;
    }
  }
  return best;
}

}  // namespace mmes
