#include "bipartitions.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace mmes {

int Bipartition::size_a() const { return std::popcount(mask); }

std::vector<int> Bipartition::indices() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size_a()));
  for (int k = 0; k < n; ++k) {
    if (mask >> k & 1) out.push_back(k + 1);
  }
  return out;
}

Bipartition make_bipartition(int n, std::uint64_t mask) {
  if (n < 1 || n > 62) {
    throw std::invalid_argument("bipartition: subsystem count out of range: " +
                                std::to_string(n));
  }
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  if (mask == 0 || (mask & ~full) != 0 || mask == full) {
    throw std::invalid_argument(
        "bipartition: mask must be a proper nonempty subset");
  }
  return Bipartition{n, mask};
}

Bipartition complement(const Bipartition& b) {
  return Bipartition{b.n, b.complement_mask()};
}

Bipartition canonical(const Bipartition& b) {
  const int a = b.size_a();
  if (2 * a > b.n) return complement(b);
  if (2 * a == b.n && !(b.mask & 1)) return complement(b);
  return b;
}

bool is_canonical_balanced(const Bipartition& b) {
  return b.size_a() == b.n / 2 && canonical(b) == b;
}

BipartitionSet enumerate_balanced(int n) {
  if (n < 2) {
    throw std::invalid_argument(
        "enumerate_balanced: need at least two subsystems");
  }
  const int half = n / 2;
  BipartitionSet set;
  set.n = n;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    if (std::popcount(mask) != half) continue;
    if (n % 2 == 0 && !(mask & 1)) continue;  // one orientation per pair
    set.members.push_back(Bipartition{n, mask});
  }
  return set;
}

std::uint64_t balanced_count(int n) {
  if (n < 2) {
    throw std::invalid_argument(
        "balanced_count: need at least two subsystems");
  }
  const int half = n / 2;
  std::uint64_t c = 1;
  for (int i = 0; i < half; ++i) c = c * static_cast<std::uint64_t>(n - i) / (i + 1);
  return n % 2 == 0 ? c / 2 : c;
}

}  // namespace mmes
