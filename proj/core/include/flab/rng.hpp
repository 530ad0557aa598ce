#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace flab {

// Identifier recorded in every report so runs can be replayed bit-exactly.
inline constexpr std::string_view kPrngId =
    "mt19937_64/splitmix64-derive/lemire-bounded";

// SplitMix64 finalizer (Steele, Lea, Flood). Full 64-bit avalanche.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// derive_seed(base, {t1, t2, ...}) = mix(...mix(mix(base) ^ t1) ^ t2 ...).
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t tag : tags) h = splitmix64(h ^ tag);
  return h;
}

// Thin wrapper over std::mt19937_64, whose output sequence is fixed by the
// standard. Bounded and real draws are implemented here instead of through
// <random> distributions, which are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 2^bits), bits in [0, 64].
  std::uint64_t bits(unsigned count) {
    if (count == 0) return 0;
    return engine_() >> (64 - count);
  }

  // Uniform in [0, bound), bound >= 1. Lemire's multiply-shift with rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    __extension__ using u128 = unsigned __int128;
    u128 m = static_cast<u128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<u128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace flab
