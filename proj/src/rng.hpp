#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace mmes {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used to decorrelate
/// stream keys derived from a single user seed.
std::uint64_t splitmix64(std::uint64_t x);

/// Seeded random generator with deterministic stream splitting.
///
/// Every source of randomness in the library flows through this class so
/// that results are reproducible from a single 64-bit seed. The generator
/// is std::mt19937_64 (fully specified by the standard); child streams are
/// keyed by SplitMix64 so that stream(i) and stream(j) are independent for
/// i != j. Normal deviates use Box-Muller rather than
/// std::normal_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent child stream; derivation depends only on (seed, index).
  Rng stream(std::uint64_t index) const;

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal deviate (Box-Muller, pairs cached).
  double normal();

  /// Complex value with independent standard normal real/imaginary parts.
  std::complex<double> complex_normal();

  /// Uniform integer in [0, bound); rejection sampling, bound >= 1.
  std::uint64_t uniform_index(std::uint64_t bound);

  std::uint64_t raw() { return gen_(); }
  std::uint64_t key() const { return key_; }

 private:
  Rng(std::uint64_t key, int);  // internal: key already mixed

  std::uint64_t key_ = 0;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mmes
