#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <vector>

#include "spikelab/rng.hpp"
#include "spikelab/spectra.hpp"

namespace spikelab {

struct Spike {
  double alpha;      // spike eigenvalue, > 0
  int multiplicity;  // n_k >= 1
};

// Spike eigenvalues with multiplicities, ordered strictly descending.
class SpikeSpec {
 public:
  explicit SpikeSpec(std::vector<Spike> spikes);

  const std::vector<Spike>& spikes() const noexcept { return spikes_; }
  int count() const noexcept { return static_cast<int>(spikes_.size()); }
  int total_multiplicity() const noexcept { return total_; }  // M

 private:
  std::vector<Spike> spikes_;
  int total_ = 0;
};

enum class EntryFamily { Gaussian, Rademacher, Custom };

// Zero-mean unit-variance entry distribution with its fourth-moment
// adjustment: beta = E[xi^4] - 3 in the real case (0 Gaussian, -2
// Rademacher), beta' = E[|xi|^4] - 2 in the complex case.
struct EntryLaw {
  EntryFamily family = EntryFamily::Gaussian;
  bool is_complex = false;
  double beta = 0.0;

  static EntryLaw gaussian(bool complex_entries = false) {
    return {EntryFamily::Gaussian, complex_entries, 0.0};
  }
  static EntryLaw rademacher() { return {EntryFamily::Rademacher, false, -2.0}; }
  static EntryLaw custom(double beta) { return {EntryFamily::Custom, false, beta}; }
};

// Population specification: spike block Sigma (diagonal, optionally rotated
// by U), bulk block with ESD converging to `bulk`, entry law and ratio y.
struct SpikedModel {
  SpikeSpec spikes;
  BulkSpectrum bulk;
  EntryLaw entry;
  MpParams params;

  // Optional rotation applied to the spike block (U in the spectral
  // decomposition of Sigma); identity when absent.
  std::optional<Eigen::MatrixXd> rotation;

  SpikedModel(SpikeSpec s, BulkSpectrum b, EntryLaw e, MpParams p)
      : spikes(std::move(s)), bulk(std::move(b)), entry(e), params(p) {}

  // A spike is tracked when it lies outside the critical interval.
  bool tracked(int spike_index) const;
};

// Sampled data (x_1, ..., x_n) with p total coordinates: M spike
// coordinates on top, p - M bulk coordinates below.
struct DataMatrix {
  Eigen::MatrixXd real;
  Eigen::MatrixXcd complex;
  bool is_complex = false;
  int p = 0;
  int n = 0;
};

// Draws n i.i.d. copies of the population vector.  Bulk coordinates are
// apportioned across atoms by largest remainder.  Deterministic given
// (model, p, n, stream).
DataMatrix sample_data(const SpikedModel& model, int p, int n, RngStream& rng);

// Bulk coordinate counts per atom for a bulk block of the given size.
std::vector<int> bulk_atom_counts(const BulkSpectrum& bulk, int coords);

// S_n = (1/n) X X^*.
Eigen::MatrixXd sample_cov(const DataMatrix& data);
Eigen::MatrixXcd sample_cov_complex(const DataMatrix& data);

// Packed index sets J_k into the descending-sorted spectrum of length p.
// Spikes above the critical interval take the top indices, spikes below the
// bottom ones; spikes inside map to the empty set.
std::map<int, std::vector<int>> packed_index_sets(const SpikeSpec& spec,
                                                  const MpParams& params,
                                                  int p);

}  // namespace spikelab
