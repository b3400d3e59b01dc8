#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, replication, stream, index), so results do not depend on the
// order in which replications or cells are evaluated.

#include <cstdint>

namespace separa {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Named sub-streams of one replication.
enum class StreamId : std::uint64_t {
  Persons = 1,
  Cells = 2,
  Resample = 3,
};

class RandomStream {
 public:
  constexpr RandomStream(std::uint64_t seed, std::uint64_t replication, StreamId stream) noexcept
      : key_(splitmix64(splitmix64(splitmix64(seed) ^ replication) ^ static_cast<std::uint64_t>(stream))) {}

  constexpr std::uint64_t bits(std::uint64_t index) const noexcept {
    return splitmix64(key_ ^ splitmix64(index));
  }

  /// Uniform on the open interval (0,1); never returns 0 or 1.
  constexpr double uniform(std::uint64_t index) const noexcept {
    return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be positive.
  constexpr std::uint64_t below(std::uint64_t index, std::uint64_t n) const noexcept {
    // multiply-shift; bias is below 2^-64 * n and irrelevant at our sizes
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits(index)) * n) >> 64);
  }

 private:
  std::uint64_t key_;
};

}  // namespace separa
