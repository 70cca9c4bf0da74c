#pragma once

#include <array>
#include <cstdint>

namespace collapse {

/// Philox4x32-10 block cipher (Salmon et al., SC'11). Stateless: the output
/// is a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

/// Reproducible Gaussian/uniform source keyed by (seed, stream_index).
///
/// Sample number `counter` of a stream is a pure function of
/// (seed, stream_index, counter), so streams can be consumed on any thread in
/// any order with identical results. Every draw consumes exactly one counter.
class NoiseStream {
 public:
  NoiseStream() = default;
  NoiseStream(std::uint64_t seed, std::uint64_t stream_index, std::uint64_t counter = 0)
      : seed_(seed), stream_index_(stream_index), counter_(counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }
  std::uint64_t counter() const { return counter_; }

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Standard exponential (unit mean).
  double exponential();

 private:
  Philox4x32::Counter next_block();

  std::uint64_t seed_ = 0;
  std::uint64_t stream_index_ = 0;
  std::uint64_t counter_ = 0;
};

/// Stream indices are packed as (purpose tag, trajectory, slot) so distinct
/// experiments sharing a seed never share a stream.
constexpr std::uint64_t stream_id(std::uint32_t purpose, std::uint64_t trajectory,
                                  std::uint32_t slot = 0) {
  return (static_cast<std::uint64_t>(purpose & 0xffffu) << 48) |
         ((trajectory & 0xffffffffffull) << 8) | (slot & 0xffu);
}

namespace purpose {
inline constexpr std::uint32_t centroid = 1;
inline constexpr std::uint32_t grid = 2;
inline constexpr std::uint32_t jump = 3;
inline constexpr std::uint32_t lattice = 4;
inline constexpr std::uint32_t probe = 5;
inline constexpr std::uint32_t gas = 6;
inline constexpr std::uint32_t branch = 7;
inline constexpr std::uint32_t check = 8;
}  // namespace purpose

}  // namespace collapse
