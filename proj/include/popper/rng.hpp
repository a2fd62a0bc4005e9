#pragma once

#include <cstdint>

namespace popper {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent random channels of one trial. Each arm draws from its own
/// channel, so arm A sees the same numbers whatever happens on arm B.
enum class Channel : std::uint64_t { Source = 1, ArmA = 2, ArmB = 3 };

/// Counter-based stream: the k-th draw is a hash of (key, k). No state is
/// shared between streams.
class RandomStream {
public:
  explicit constexpr RandomStream(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t next_u64() noexcept { return mix64(key_ ^ mix64(counter_++)); }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Randomness of trial `trial_index` under `master_seed`: a pure function
/// of the pair, independent of which worker runs the trial or when.
struct TrialRng {
  std::uint64_t master_seed;
  std::uint64_t trial_index;

  [[nodiscard]] constexpr RandomStream stream(Channel ch) const noexcept {
    const std::uint64_t k = mix64(mix64(master_seed) ^ trial_index);
    return RandomStream(mix64(k ^ (static_cast<std::uint64_t>(ch) * 0xd1b54a32d192ed03ULL)));
  }
};

} // namespace popper
