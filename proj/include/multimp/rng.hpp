#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace multimp {

/// Splittable random stream keyed by (master_seed, path).
///
/// A stream is identified by a 64-bit sponge value obtained by absorbing the
/// master seed and every path component through the SplitMix64 finalizer.
/// The sponge seeds a xoshiro256++ generator for the actual draws. `child(i)`
/// derives the stream for path + [i] from the sponge alone, so the tree of
/// streams is independent of how many draws were consumed anywhere.
///
/// Identical (seed, path) pairs produce identical draw sequences; distinct
/// paths produce statistically independent streams. Values are copyable and
/// may be handed to other threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed);
  RngStream(std::uint64_t master_seed, std::span<const std::uint64_t> path);
  RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path);

  /// Stream for this path extended by one component.
  RngStream child(std::uint64_t index) const;

  std::uint64_t next_u64();

  /// Uniform draw on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal draw (Marsaglia polar method, spare value cached).
  double normal();

  /// Uniform integer in [0, bound). bound must be positive.
  int uniform_int(int bound);

 private:
  struct FromSponge {};
  RngStream(std::uint64_t sponge, FromSponge);
  void seed_state();

  std::uint64_t sponge_;
  std::array<std::uint64_t, 4> state_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace multimp
