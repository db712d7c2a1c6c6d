#pragma once

#include <cstdint>
#include <random>

namespace ramanpol {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; decorrelates nearby integers.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent per-item seeds from one master seed. `stream` separates uses
/// (noise, digitizer, shuffles, ...) so that they never share a sequence.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) {
  return splitmix64(splitmix64(master ^ splitmix64(stream)) + index);
}

namespace streams {
inline constexpr std::uint64_t kNoise = 0x6e6f697365ULL;
inline constexpr std::uint64_t kDigitizer = 0x6469676974ULL;
inline constexpr std::uint64_t kShuffle = 0x73687566ULL;
inline constexpr std::uint64_t kSynthetic = 0x73796e74ULL;
}  // namespace streams

}  // namespace ramanpol
