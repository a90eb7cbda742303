#pragma once

#include <cstdint>
#include <random>

namespace mwpkit {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seeded generator with portable bounded sampling. std::mt19937_64 output is
/// fixed by the standard; the helpers below avoid std::uniform_int_distribution,
/// whose mapping is implementation-defined, so streams are byte-stable across
/// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Independent per-item stream: item k of a run is a pure function of
  /// (seed, k) no matter how work is split across threads.
  static Rng for_item(std::uint64_t seed, std::uint64_t item_index) {
    return Rng(splitmix64(seed) ^ splitmix64(item_index + 0x51ed2701ULL));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, n). Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /// Uniform in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool chance(double p) {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 < p;
  }

  template <typename Seq>
  auto& pick(Seq& seq) {
    return seq[below(seq.size())];
  }

  template <typename Seq>
  const auto& pick(const Seq& seq) {
    return seq[below(seq.size())];
  }

  /// Fisher-Yates with the portable sampler, independent of std::shuffle.
  template <typename Vec>
  void shuffle(Vec& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mwpkit
