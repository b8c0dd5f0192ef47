#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string_view>
#include <vector>

namespace confuse {

// mt19937_64 output is fixed by the standard; the distributions below are
// hand-rolled so seeded results do not depend on the standard library.
using Rng = std::mt19937_64;

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  // Reject the low 2^64 mod n values so every residue is equally likely.
  const std::uint64_t threshold = (0 - n) % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x < threshold);
  return x % n;
}

inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform_unit(rng) < p; }

// k distinct indices from [0, n) via a partial Fisher-Yates shuffle,
// returned in ascending order.
inline std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// FNV-1a; stable across platforms, used to derive per-record seeds.
inline std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace confuse
