#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spikelab {

// One line of a verification table: |value - reference| <= tolerance.
struct CheckRow {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Closed forms vs quadrature (m-transforms, Stieltjes transform) and the
// variance identities, over the alpha x y verification grid.
std::vector<CheckRow> verify_identities();

// Resolvent statistics against their limits: p = 200, n = 400, lambda = 5,
// y = 1/2, median over 8 seeded draws.
std::vector<CheckRow> verify_lemma61(std::uint64_t master_seed = 0xBA1);

// Sesquilinear-form CLT battery: empirical covariance of Z_n against B for
// K = 2 at n = 2000 (500 replications), plus the identity-weight and
// zero-diagonal special cases.
std::vector<CheckRow> verify_sesquiform(std::uint64_t master_seed = 0x5E5);

}  // namespace spikelab
