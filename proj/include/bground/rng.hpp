#ifndef BGROUND_RNG_HPP
#define BGROUND_RNG_HPP

#include <cstdint>

namespace bground {

/// Weyl increment of SplitMix64.
inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer (Stafford variant 13). Bijective avalanche mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream keyed by (seed, stream index).
///
/// Draw i of stream k under seed s is
///   mix64(key + (i + 1) * gamma),  key = mix64(mix64(s) + (k + 1) * gamma),
/// i.e. a SplitMix64 sequence whose starting state is itself a mixed function
/// of the seed and the stream index. Every draw is a pure function of
/// (s, k, i), so results do not depend on evaluation order or thread layout.
class CounterStream {
 public:
  constexpr CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix64(mix64(seed) + (stream + 1) * kGoldenGamma)) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * kGoldenGamma);
  }

  /// Uniform double in [0, 1) built from the top 53 bits.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
};

}  // namespace bground

#endif  // BGROUND_RNG_HPP
