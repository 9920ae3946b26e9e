#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace walk2sat {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Folds a sequence of words into a single stream key. Order matters.
constexpr std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
  return h;
}

// Roles distinguish independent streams derived from the same run seed.
enum class StreamRole : std::uint64_t {
  Generator = 1,
  Walk = 2,
  Sampling = 3,
  Test = 4,
};

/// Counter-based 64-bit generator. The i-th output is a pure function of
/// (key, i), so a stream can be forked or replayed without shared state.
/// Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  constexpr explicit Stream(std::uint64_t key = 0) noexcept : key_(mix64(key)) {}

  static constexpr Stream derive(std::uint64_t seed, std::uint64_t index, StreamRole role) noexcept {
    return Stream(hash_words({seed, index, static_cast<std::uint64_t>(role)}));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    return mix64(key_ + 0x9e3779b97f4a7c15ULL * counter_++);
  }

  /// Exactly uniform integer in [0, bound). bound must be > 0.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection of the biased low zone.
    unsigned __int128 product = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  constexpr bool coin() noexcept { return ((*this)() >> 63) != 0; }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace walk2sat
