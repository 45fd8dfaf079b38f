#include "powerdiv/enumeration.hpp"

namespace powerdiv {

namespace {

constexpr std::uint64_t kCountLimit = (std::uint64_t{1} << 62);

// C(m, k) with overflow guard; exact integer arithmetic.
std::uint64_t binom_checked(std::uint64_t m, std::uint64_t k) {
  if (k > m) return 0;
  if (k > m - k) k = m - k;
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (m - k + i) / i;
    if (c > kCountLimit) fail(errc::support_too_large, "composition count exceeds 2^62");
  }
  return static_cast<std::uint64_t>(c);
}

}  // namespace

std::uint64_t composition_count(long long n, int r) {
  if (n < 0 || r < 1) fail(errc::support_too_large, "invalid enumeration parameters");
  return binom_checked(static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(r) - 1,
                       static_cast<std::uint64_t>(r) - 1);
}

CompositionIter::CompositionIter(long long n, int r) : c_(static_cast<size_t>(r), 0) {
  c_.back() = n;
}

CompositionIter::CompositionIter(long long n, int r, std::uint64_t rank)
    : c_(composition_unrank(n, r, rank)) {}

void CompositionIter::advance() {
  const int r = static_cast<int>(c_.size());
  if (c_[static_cast<size_t>(r - 1)] > 0) {
    c_[static_cast<size_t>(r - 2)] += 1;
    c_[static_cast<size_t>(r - 1)] -= 1;
    return;
  }
  long long suffix = 0;
  for (int j = r - 2; j >= 0; --j) {
    suffix += c_[static_cast<size_t>(j + 1)];
    if (suffix > 0) {
      c_[static_cast<size_t>(j)] += 1;
      for (int k = j + 1; k < r - 1; ++k) c_[static_cast<size_t>(k)] = 0;
      c_[static_cast<size_t>(r - 1)] = suffix - 1;
      return;
    }
  }
  done_ = true;
}

std::uint64_t composition_rank(const Counts& c) {
  const int r = static_cast<int>(c.size());
  long long rem = 0;
  for (long long v : c) rem += v;
  std::uint64_t rank = 0;
  for (int j = 0; j < r - 1; ++j) {
    // Compositions at this position with a smaller leading value come first.
    for (long long w = 0; w < c[static_cast<size_t>(j)]; ++w) {
      rank += binom_checked(static_cast<std::uint64_t>(rem - w) + static_cast<std::uint64_t>(r - j) - 2,
                            static_cast<std::uint64_t>(r - j) - 2);
    }
    rem -= c[static_cast<size_t>(j)];
  }
  return rank;
}

Counts composition_unrank(long long n, int r, std::uint64_t rank) {
  Counts c(static_cast<size_t>(r), 0);
  long long rem = n;
  for (int j = 0; j < r - 1; ++j) {
    long long w = 0;
    for (;;) {
      std::uint64_t block =
          binom_checked(static_cast<std::uint64_t>(rem - w) + static_cast<std::uint64_t>(r - j) - 2,
                        static_cast<std::uint64_t>(r - j) - 2);
      if (rank < block) break;
      rank -= block;
      ++w;
    }
    c[static_cast<size_t>(j)] = w;
    rem -= w;
  }
  c[static_cast<size_t>(r - 1)] = rem;
  return c;
}

}  // namespace powerdiv
