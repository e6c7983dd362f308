#include "state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace mmes {

namespace {

void check_qubit_count(int n) {
  if (n < 1 || n > 24) {
    throw std::invalid_argument("state: qubit count out of range: " +
                                std::to_string(n));
  }
}

double vector_norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const Complex& a : v) s += std::norm(a);
  return std::sqrt(s);
}

}  // namespace

PureState PureState::from_amplitudes(int n, std::vector<Complex> amplitudes,
                                     double tol) {
  check_qubit_count(n);
  if (amplitudes.size() != (std::size_t{1} << n)) {
    throw DimensionError("state: expected 2^" + std::to_string(n) +
                         " amplitudes, got " +
                         std::to_string(amplitudes.size()));
  }
  const double norm = vector_norm(amplitudes);
  if (std::abs(norm - 1.0) > tol) {
    throw NormalizationError("state: norm " + std::to_string(norm) +
                             " deviates from 1 beyond tolerance");
  }
  for (Complex& a : amplitudes) a /= norm;
  return PureState(n, std::move(amplitudes));
}

PureState PureState::normalized(int n, std::vector<Complex> amplitudes) {
  check_qubit_count(n);
  if (amplitudes.size() != (std::size_t{1} << n)) {
    throw DimensionError("state: expected 2^" + std::to_string(n) +
                         " amplitudes, got " +
                         std::to_string(amplitudes.size()));
  }
  const double norm = vector_norm(amplitudes);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw NormalizationError("state: cannot normalize a zero vector");
  }
  for (Complex& a : amplitudes) a /= norm;
  return PureState(n, std::move(amplitudes));
}

PureState PureState::basis_state(int n, std::uint64_t b) {
  check_qubit_count(n);
  const std::uint64_t dim = std::uint64_t{1} << n;
  if (b >= dim) {
    throw std::invalid_argument("state: basis index out of range");
  }
  std::vector<Complex> amp(dim, Complex{0.0, 0.0});
  amp[b] = Complex{1.0, 0.0};
  return PureState(n, std::move(amp));
}

double PureState::norm() const { return vector_norm(amplitudes_); }

PureState random_haar_state(int n, std::uint64_t seed) {
  Rng rng(seed);
  return random_haar_state(n, rng);
}

PureState random_haar_state(int n, Rng& rng) {
  check_qubit_count(n);
  std::vector<Complex> amp(std::size_t{1} << n);
  for (Complex& a : amp) a = rng.complex_normal();
  return PureState::normalized(n, std::move(amp));
}

PurityPlan make_purity_plan(const Bipartition& b) {
  // Rows index the smaller party so the Gram product is N_A^2 * N_Abar.
  const std::uint64_t row_mask =
      2 * b.size_a() <= b.n ? b.mask : b.complement_mask();
  const std::uint64_t col_mask = ((std::uint64_t{1} << b.n) - 1) & ~row_mask;

  PurityPlan plan;
  plan.n = b.n;
  plan.row_mask = row_mask;
  plan.rows = 1 << std::popcount(row_mask);
  plan.cols = 1 << std::popcount(col_mask);

  auto deposit = [](std::uint64_t mask, int count) {
    std::vector<int> positions;
    for (int k = 0; k < 64; ++k) {
      if (mask >> k & 1) positions.push_back(k);
    }
    std::vector<std::uint32_t> table(static_cast<std::size_t>(count));
    for (int v = 0; v < count; ++v) {
      std::uint32_t out = 0;
      for (std::size_t i = 0; i < positions.size(); ++i) {
        if (v >> i & 1) out |= std::uint32_t{1} << positions[i];
      }
      table[static_cast<std::size_t>(v)] = out;
    }
    return table;
  };

  plan.row_base = deposit(row_mask, plan.rows);
  plan.col_base = deposit(col_mask, plan.cols);
  return plan;
}

namespace {

void gather(const Complex* amplitudes, const PurityPlan& plan,
            Eigen::MatrixXcd& m) {
  m.resize(plan.rows, plan.cols);
  for (int c = 0; c < plan.cols; ++c) {
    const std::uint32_t base = plan.col_base[static_cast<std::size_t>(c)];
    for (int r = 0; r < plan.rows; ++r) {
      m(r, c) = amplitudes[plan.row_base[static_cast<std::size_t>(r)] | base];
    }
  }
}

}  // namespace

double purity_kernel(const Complex* amplitudes, const PurityPlan& plan,
                     KernelWorkspace& ws) {
  gather(amplitudes, plan, ws.m);
  ws.g.resize(plan.rows, plan.rows);
  ws.g.noalias() = ws.m * ws.m.adjoint();
  return ws.g.squaredNorm();
}

double purity_kernel_grad(const Complex* amplitudes, const PurityPlan& plan,
                          KernelWorkspace& ws, Complex* grad, double weight) {
  gather(amplitudes, plan, ws.m);
  ws.g.resize(plan.rows, plan.rows);
  ws.g.noalias() = ws.m * ws.m.adjoint();
  // d tr((M M*)^2) / d conj(M) = 2 (M M*) M; steepest ascent doubles it.
  ws.p.resize(plan.rows, plan.cols);
  ws.p.noalias() = ws.g * ws.m;
  const double w = 4.0 * weight;
  for (int c = 0; c < plan.cols; ++c) {
    const std::uint32_t base = plan.col_base[static_cast<std::size_t>(c)];
    for (int r = 0; r < plan.rows; ++r) {
      grad[plan.row_base[static_cast<std::size_t>(r)] | base] += w * ws.p(r, c);
    }
  }
  return ws.g.squaredNorm();
}

double purity(const PureState& state, const Bipartition& b) {
  if (b.n != state.qubits()) {
    throw DimensionError("purity: bipartition is over " + std::to_string(b.n) +
                         " qubits but state has " +
                         std::to_string(state.qubits()));
  }
  if (std::abs(state.norm() - 1.0) > 1e-9) {
    throw NormalizationError("purity: state is not normalized");
  }
  const PurityPlan plan = make_purity_plan(b);
  KernelWorkspace ws;
  return purity_kernel(state.amplitudes().data(), plan, ws);
}

double purity_oracle(const PureState& state, const Bipartition& b) {
  if (b.n != state.qubits()) {
    throw DimensionError("purity_oracle: dimension mismatch");
  }
  const int n = state.qubits();
  if (n > 13) {
    throw std::invalid_argument("purity_oracle: too large for the dense path");
  }
  const std::size_t dim = state.dim();
  const auto& amp = state.amplitudes();

  // Full density matrix rho = |psi><psi|.
  Eigen::MatrixXcd rho(static_cast<Eigen::Index>(dim),
                       static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          amp[i] * std::conj(amp[j]);
    }
  }

  // Explicit partial trace over the complement: basis indices are rebuilt
  // bit by bit, independently of the gather tables used by the fast path.
  const std::uint64_t a_mask = b.mask;
  const int na = b.size_a();
  const int nb = b.n - na;
  const std::size_t dim_a = std::size_t{1} << na;
  const std::size_t dim_b = std::size_t{1} << nb;

  auto compose = [&](std::uint64_t a_bits, std::uint64_t b_bits) {
    std::uint64_t index = 0;
    int ai = 0;
    int bi = 0;
    for (int k = 0; k < n; ++k) {
      if (a_mask >> k & 1) {
        index |= ((a_bits >> ai) & 1) << k;
        ++ai;
      } else {
        index |= ((b_bits >> bi) & 1) << k;
        ++bi;
      }
    }
    return index;
  };

  Eigen::MatrixXcd rho_a = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_a));
  for (std::size_t i = 0; i < dim_a; ++i) {
    for (std::size_t j = 0; j < dim_a; ++j) {
      Complex sum{0.0, 0.0};
      for (std::size_t t = 0; t < dim_b; ++t) {
        sum += rho(static_cast<Eigen::Index>(compose(i, t)),
                   static_cast<Eigen::Index>(compose(j, t)));
      }
      rho_a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sum;
    }
  }

  return (rho_a * rho_a).trace().real();
}

}  // namespace mmes
