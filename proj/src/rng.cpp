#include "spikelab/rng.hpp"

#include <cmath>

namespace spikelab {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

RngStream::RngStream(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& w : s_) {
    s += 0x9E3779B97F4A7C15ULL;
    w = mix64(s);
  }
}

RngStream RngStream::derived(std::uint64_t master, std::uint64_t index) {
  return RngStream(mix64(master + 0x9E3779B97F4A7C15ULL * (index + 1)));
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::next_unit() {
  const std::uint64_t bits = next_u64() >> 11;  // 53 bits
  double u = static_cast<double>(bits) * 0x1.0p-53;
  return u > 0.0 ? u : 0x1.0p-53;
}

double RngStream::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

double RngStream::next_rademacher() {
  return (next_u64() >> 63) ? 1.0 : -1.0;
}

}  // namespace spikelab
