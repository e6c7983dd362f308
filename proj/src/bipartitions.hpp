#pragma once

#include <cstdint>
#include <vector>

namespace mmes {

/// A bipartition (A, complement of A) of n subsystems. Bit k-1 of `mask`
/// set means subsystem k (1-based) belongs to party A. The mask must be a
/// proper nonempty subset of the n subsystems.
struct Bipartition {
  int n = 0;
  std::uint64_t mask = 0;

  int size_a() const;
  int size_b() const { return n - size_a(); }
  std::uint64_t full_mask() const { return (std::uint64_t{1} << n) - 1; }
  std::uint64_t complement_mask() const { return full_mask() & ~mask; }

  /// Party A as sorted 1-based subsystem indices (the serialized form).
  std::vector<int> indices() const;

  bool operator==(const Bipartition&) const = default;
};

/// Validates n >= 1 and that mask names a proper nonempty subset.
Bipartition make_bipartition(int n, std::uint64_t mask);

/// The literal complement (A bar); no reorientation is applied.
Bipartition complement(const Bipartition& b);

/// Preferred orientation: A is the smaller party; on a balanced split of an
/// even n, the party containing subsystem 1.
Bipartition canonical(const Bipartition& b);

/// True if b is balanced (|A| = floor(n/2)) and canonically oriented.
bool is_canonical_balanced(const Bipartition& b);

/// The canonical set of balanced bipartitions, lexicographic by mask.
struct BipartitionSet {
  int n = 0;
  std::vector<Bipartition> members;

  std::size_t size() const { return members.size(); }
};

/// Enumerates every balanced bipartition once. For odd n these are all
/// subsets of size (n-1)/2, K = C(n, (n-1)/2); for even n each unordered
/// pair is represented by the half containing subsystem 1, K = C(n, n/2)/2.
BipartitionSet enumerate_balanced(int n);

/// Number of set members without materializing them.
std::uint64_t balanced_count(int n);

}  // namespace mmes
