#include "multimp/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace multimp {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t absorb(std::uint64_t sponge, std::uint64_t value) {
  return mix64(sponge ^ (value + kGolden + (sponge << 6) + (sponge >> 2)));
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t master_seed)
    : RngStream(absorb(kGolden, master_seed), FromSponge{}) {}

RngStream::RngStream(std::uint64_t master_seed, std::span<const std::uint64_t> path)
    : RngStream(master_seed) {
  for (std::uint64_t component : path) {
    sponge_ = absorb(sponge_, component);
  }
  seed_state();
}

RngStream::RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path)
    : RngStream(master_seed, std::span<const std::uint64_t>(path.begin(), path.size())) {}

RngStream::RngStream(std::uint64_t sponge, FromSponge) : sponge_(sponge) { seed_state(); }

void RngStream::seed_state() {
  std::uint64_t s = sponge_;
  for (auto& word : state_) {
    s += kGolden;
    word = mix64(s);
  }
  has_spare_ = false;
}

RngStream RngStream::child(std::uint64_t index) const {
  return RngStream(absorb(sponge_, index), FromSponge{});
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256++ 1.0
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  has_spare_ = true;
  return u * f;
}

int RngStream::uniform_int(int bound) {
  if (bound <= 0) throw std::domain_error("uniform_int: bound must be positive");
  const int draw = static_cast<int>(uniform() * static_cast<double>(bound));
  return draw < bound ? draw : bound - 1;
}

}  // namespace multimp
