#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace esg {

// SplitMix64 (Steele/Lea/Vigna). The whole generator is three
// xorshift-multiply lines, so independent reimplementations in other
// languages produce bit-identical streams.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1), produced as the top 53 bits over 2^53. Every value is
  // an exact dyadic rational, so text round-trips are lossless.
  double next_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound). Rejection sampling; unbiased and portable.
  uint64_t next_below(uint64_t bound) {
    // 2^64 mod bound, computed without 128-bit arithmetic.
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  uint64_t state_;
};

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// SplitMix64 finalizer applied to a single word.
inline uint64_t scramble64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline uint64_t hash_combine(uint64_t a, uint64_t b) {
  return scramble64(a ^ (b * 0x9e3779b97f4a7c15ull + 0x7f4a7c15ull));
}

// Independent stream keyed by (seed, purpose tag). Draw orders within a
// stream are fixed and documented at each call site.
inline SplitMix64 keyed_stream(uint64_t seed, std::string_view tag) {
  return SplitMix64(hash_combine(seed, fnv1a64(tag)));
}

// Fisher-Yates shuffle driven by `rng`: for i = n-1 .. 1 swap a[i] with
// a[rng.next_below(i+1)].
template <class T>
void shuffle_in_place(std::vector<T>& a, SplitMix64& rng) {
  for (size_t i = a.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.next_below(i));
    std::swap(a[i - 1], a[j]);
  }
}

// Uniform random assignment of positions 1..n to targets 0..n-1.
inline std::vector<int> random_positions(int n, SplitMix64& rng) {
  std::vector<int> pos(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) pos[static_cast<size_t>(i)] = i + 1;
  shuffle_in_place(pos, rng);
  return pos;
}

}  // namespace esg
