#pragma once

#include <cstdint>

namespace spikelab {

// 64-bit finalizer (splitmix64); also used to derive per-replication seeds.
std::uint64_t mix64(std::uint64_t x);

// Deterministic xoshiro256++ stream with Box-Muller Gaussian draws.
// Streams are owned by a single caller; derive one per replication.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  // Stream for replication `index` of a run keyed by `master`.
  static RngStream derived(std::uint64_t master, std::uint64_t index);

  std::uint64_t next_u64();
  double next_unit();        // uniform on (0, 1)
  double next_gaussian();    // standard normal
  double next_rademacher(); // +1 or -1

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace spikelab
