#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string_view>

namespace agc {

inline constexpr std::string_view kRngName = "philox4x32-10";
inline constexpr int kRngVersion = 1;

// One Philox4x32 block with 10 rounds.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// SplitMix64 finalizer; used for seed derivation only.
std::uint64_t mix64(std::uint64_t x);

// Derives a child seed from a parent seed and a path of stream ids.
// derive_seed(s, {a, b}) == derive_seed(derive_seed(s, {a}), {b}).
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path);

// Counter-based generator: the n-th output is a pure function of (seed, n),
// so streams can be split by seed derivation instead of sequential draws.
// Satisfies UniformRandomBitGenerator, but all distributions used in this
// project are implemented below so results do not depend on the standard
// library vendor.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) noexcept;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  CounterRng split(std::uint64_t stream) const noexcept { return CounterRng(derive_seed(seed_, {stream})); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept;
  // Uniform on {0, ..., bound - 1}; bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;
  bool bernoulli(double p) noexcept;
  double normal() noexcept;

  template <class T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

}  // namespace agc
