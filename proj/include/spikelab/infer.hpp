#pragma once

#include <string>
#include <vector>

#include "spikelab/model.hpp"
#include "spikelab/spectra.hpp"

namespace spikelab {

enum class BandTag { Above, Below, InterBand };

struct SpikeCandidate {
  double lambda = 0.0;
  BandTag tag = BandTag::Above;
};

// Sample eigenvalues lying outside the support inflated by a separation
// margin (0.05 of the nearest interval width per side).
std::vector<SpikeCandidate> detect_spikes(const std::vector<double>& eigs,
                                          const MpParams& params,
                                          const BulkSpectrum& bulk);

struct SpikeEstimate {
  double alpha_hat = 0.0;
  double lambda_observed = 0.0;
  Side side = Side::Above;
  double ci_lo = 0.0, ci_hi = 0.0;                // alpha-space interval
  double lambda_ci_lo = 0.0, lambda_ci_hi = 0.0;  // lambda-space interval
  double confidence = 0.95;
  std::string variance_model;  // "gaussian" | "binary" | "custom"
};

// Point estimate alpha_hat = phi^-1(lambda) with the CLT interval built in
// lambda space and mapped through the monotone inverse.
SpikeEstimate estimate_spike(double lambda_obs, int n, const MpParams& params,
                             const EntryLaw& variance_model,
                             double confidence = 0.95);

// Descriptive grouping of near-equal outliers (gap threshold
// 3 sigma_hat / sqrt(n)); multiplicities > 1 have non-Gaussian limits, so
// the groups never feed confidence intervals.
std::vector<int> cluster_candidates(const std::vector<SpikeCandidate>& candidates,
                                    int n, const MpParams& params,
                                    const EntryLaw& variance_model);

}  // namespace spikelab
