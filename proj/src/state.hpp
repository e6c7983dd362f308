#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bipartitions.hpp"
#include "rng.hpp"

namespace mmes {

using Complex = std::complex<double>;

/// Normalized pure state of n qubits.
///
/// Basis convention (fixed): basis index b in [0, 2^n) stores qubit k
/// (1-based) in bit k-1, little endian. So |q_n ... q_2 q_1> has index
/// sum_k q_k 2^(k-1), and a bipartition mask addresses the same bits.
///
/// Instances are immutable after construction and hold an exactly
/// renormalized amplitude vector. All operations here are pure functions;
/// values are safe to share across threads.
class PureState {
 public:
  /// Accepts a vector whose norm is within `tol` of 1 (default 1e-9) and
  /// renormalizes it exactly.
  static PureState from_amplitudes(int n, std::vector<Complex> amplitudes,
                                   double tol = 1e-9);

  /// Renormalizes any nonzero vector.
  static PureState normalized(int n, std::vector<Complex> amplitudes);

  /// Computational basis state |b>.
  static PureState basis_state(int n, std::uint64_t b);

  int qubits() const { return n_; }
  std::size_t dim() const { return amplitudes_.size(); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  double norm() const;

  bool operator==(const PureState&) const = default;

 private:
  PureState(int n, std::vector<Complex> amplitudes)
      : n_(n), amplitudes_(std::move(amplitudes)) {}

  int n_ = 0;
  std::vector<Complex> amplitudes_;
};

/// Amplitudes drawn as independent standard complex Gaussians, then
/// normalized: the unitarily invariant measure on the sphere. Deterministic
/// for a fixed seed.
PureState random_haar_state(int n, std::uint64_t seed);
PureState random_haar_state(int n, Rng& rng);

/// Precomputed gather tables turning an amplitude vector into the
/// row-party x column-party matrix M of one bipartition. Rows always index
/// the smaller (or equal) party, so the Gram matrix M M^dagger is as small
/// as possible.
struct PurityPlan {
  int n = 0;
  std::uint64_t row_mask = 0;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint32_t> row_base;  // row bits deposited into row_mask
  std::vector<std::uint32_t> col_base;  // column bits deposited into the rest
};

PurityPlan make_purity_plan(const Bipartition& b);

/// Scratch buffers for the purity kernel; reuse across calls on one thread.
struct KernelWorkspace {
  Eigen::MatrixXcd m;  // rows x cols reshaped state
  Eigen::MatrixXcd g;  // rows x rows Gram matrix
  Eigen::MatrixXcd p;  // rows x cols gradient staging
};

/// tr(rho_A^2) evaluated as the squared Frobenius norm of M M^dagger; the
/// reduced density matrix is never materialized at full dimension.
double purity_kernel(const Complex* amplitudes, const PurityPlan& plan,
                     KernelWorkspace& ws);

/// Same value, and additionally accumulates `weight` times the ambient
/// steepest-ascent gradient of tr(rho_A^2) (twice the Wirtinger derivative
/// with respect to the conjugate amplitudes) into `grad`.
double purity_kernel_grad(const Complex* amplitudes, const PurityPlan& plan,
                          KernelWorkspace& ws, Complex* grad, double weight);

/// Purity of the reduced state of party A. Requires matching qubit counts
/// and a normalized state.
double purity(const PureState& state, const Bipartition& b);

/// Independent check: forms the full density matrix, partial-traces over
/// the complement by explicit index summation, squares and traces. Meant
/// for small n; O(4^n) time and memory.
double purity_oracle(const PureState& state, const Bipartition& b);

}  // namespace mmes
