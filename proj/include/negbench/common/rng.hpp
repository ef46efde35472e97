#pragma once

#include <cstdint>
#include <string_view>

namespace negbench {

// 64-bit FNV-1a over the bytes of `text`.
std::uint64_t fnv1a64(std::string_view text) noexcept;

// One SplitMix64 step; also used as a 64-bit finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Derives an independent stream seed from a root seed, a stage name and an
// item id: splitmix64(splitmix64(seed ^ fnv1a64(stage)) ^ fnv1a64(item)).
// Streams for different (stage, item) pairs do not depend on the order in
// which they are requested.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stage,
                          std::string_view item = {}) noexcept;

// xoshiro256** seeded through SplitMix64. All distributions are implemented
// here rather than through <random> so that streams are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;
  // Uniform integer in [0, bound); bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;
  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept;
  // Standard normal via Box-Muller (no cached spare, so draws are stateless
  // beyond the generator).
  double normal() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

  template <typename Container>
  void shuffle(Container& items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(uniform_below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

}  // namespace negbench
