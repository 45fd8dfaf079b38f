#pragma once

#include <cstdint>

#include "powerdiv/model.hpp"

namespace powerdiv {

inline constexpr std::uint64_t kDefaultSupportCap = 50'000'000;

// Number of weak compositions of n into r parts, C(n+r-1, r-1).
// Throws SupportTooLarge if the count does not fit in 63 bits.
std::uint64_t composition_count(long long n, int r);

// In-place odometer over all weak compositions of n into r nonnegative
// parts, ascending lexicographic order: (0,...,0,n) first, (n,0,...,0) last.
// Advancing is O(1) amortized; the common step moves one unit from the last
// cell to its neighbour.
class CompositionIter {
 public:
  CompositionIter(long long n, int r);
  // Positions the iterator at the composition with the given rank.
  CompositionIter(long long n, int r, std::uint64_t rank);

  const Counts& value() const { return c_; }
  bool done() const { return done_; }
  void advance();

 private:
  Counts c_;
  bool done_ = false;
};

// Rank of a composition in the iteration order, and its inverse. Used to cut
// the support into fixed chunks for deterministic parallel reduction.
std::uint64_t composition_rank(const Counts& c);
Counts composition_unrank(long long n, int r, std::uint64_t rank);

}  // namespace powerdiv
