#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "spikelab/limits.hpp"
#include "spikelab/model.hpp"

namespace spikelab {

// Seeded replication experiment mirroring the paper-style runs.
struct ExperimentConfig {
  SpikedModel model;
  int p = 0;
  int n = 0;
  int replications = 0;
  int rep_begin = 0;  // replication index offset (for mergeable sub-runs)
  std::vector<int> tracked;  // spike indices; empty selects all tracked spikes
  std::uint64_t master_seed = 0;
  enum class Mode { Fast, PaperScale };
  Mode mode = Mode::Fast;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
  std::vector<int> tracked_or_default() const;
  std::string digest() const;
};

struct DeltaColumn {
  int spike_index = 0;  // 0-based into model.spikes
  int j = 0;            // 1-based position in the descending spectrum
  double center = 0.0;  // phi or psi value
  double alpha = 0.0;
  int multiplicity = 1;

  std::string label() const;  // "k<spike_index+1>_j<j>"
};

// Per-replication delta values for all tracked eigenvalue positions.
struct ReplicationSet {
  std::vector<DeltaColumn> columns;
  Eigen::MatrixXd lambdas;  // replications x columns
  Eigen::MatrixXd deltas;   // sqrt(n) (lambda - center)
  std::vector<int> rep_indices;
  std::vector<std::uint64_t> rep_seeds;
  int p = 0, n = 0;
  std::uint64_t master_seed = 0;
  std::string config_digest;

  int count() const { return static_cast<int>(rep_indices.size()); }
  std::vector<double> column(int c) const;
};

// Tracked eigenvalue positions: the population-eigenvalue rank of each
// spike's block (coincides with packed_index_sets for the unit bulk and with
// the middle-of-spectrum positions for gapped bulks).
std::vector<DeltaColumn> tracked_columns(const ExperimentConfig& config);

ReplicationSet run_replications(const ExperimentConfig& config);

// Concatenation of two sub-runs with the same configuration digest and
// disjoint replication index ranges.
ReplicationSet merge_replications(const ReplicationSet& a,
                                  const ReplicationSet& b);

// ---------------------------------------------------------------------------
// statistics

struct ColumnSummary {
  double mean = 0.0, variance = 0.0, skewness = 0.0;
  double mean_se = 0.0, variance_se = 0.0, skewness_se = 0.0;  // jackknife
  bool skew_defined = true;
};

struct MomentsReport {
  std::vector<ColumnSummary> columns;
  // empirical covariance per spike group, keyed by spike index
  std::map<int, Eigen::MatrixXd> group_covariance;
};

MomentsReport empirical_summary(const ReplicationSet& reps);

// Column-wise summary of raw samples (used by tests and reports).
ColumnSummary summarize(const std::vector<double>& sample);

// One-sample KS against a cdf; asymptotic p-value from the Kolmogorov
// series (100 terms).
std::pair<double, double> ks_test(std::vector<double> sample,
                                  const std::function<double(double)>& cdf);

// Two-sample KS with the effective-size correction.
std::pair<double, double> ks_test(std::vector<double> a, std::vector<double> b);

struct KdeGrid {
  std::vector<double> x, density;
  double bandwidth = 0.0;
};

// Gaussian-kernel estimate on a regular grid spanning the sample range
// +- 3 bandwidths; bandwidth 0 selects Silverman's rule.
KdeGrid kde(const std::vector<double>& sample, double bandwidth = 0.0,
            int grid_size = 512);

struct Kde2Grid {
  std::vector<double> x, y;
  Eigen::MatrixXd density;  // density(i, j) at (x[i], y[j])
  double bandwidth_x = 0.0, bandwidth_y = 0.0;
};

Kde2Grid kde2(const std::vector<std::array<double, 2>>& sample,
              double bandwidth_x = 0.0, double bandwidth_y = 0.0,
              int grid_size = 128);

// ---------------------------------------------------------------------------
// goodness of fit

struct GofThresholds {
  double p_min = 0.01;
  double variance_tol = 0.20;     // relative variance tolerance
  double mean_tol_sigmas = 0.15;  // |mean| <= tol * sigma

  static GofThresholds for_mode(ExperimentConfig::Mode mode,
                                const EntryLaw& entry);
};

struct GofColumn {
  std::string column;
  double ks_stat = 0.0;
  double p_value = 0.0;
  double emp_mean = 0.0;
  double emp_var = 0.0;
  std::string verdict;  // "pass" | "fail"
};

struct GofReport {
  std::vector<GofColumn> columns;
  bool all_pass = true;
};

// Scalar columns: one-sample KS against the scalar Gaussian limit plus
// mean/variance checks.  Multiplicity groups: per-coordinate two-sample KS
// against sampled law draws plus a trace-variance row.
GofReport compare_to_limit(const ReplicationSet& reps,
                           const std::map<int, LimitLaw>& laws, RngStream& rng,
                           const GofThresholds& thresholds,
                           int law_draws = 100000);

// ---------------------------------------------------------------------------
// file schemas (CSV/JSON emission used by the CLI)

void write_replications_csv(const ReplicationSet& reps, std::ostream& os);
void write_gof_json(const GofReport& report, std::ostream& os);
void write_kde_csv(const KdeGrid& grid, std::ostream& os);
void write_kde2_csv(const Kde2Grid& grid, std::ostream& os);

}  // namespace spikelab
