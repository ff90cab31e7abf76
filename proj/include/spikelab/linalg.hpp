#pragma once

#include <Eigen/Dense>
#include <vector>

namespace spikelab {

// Descending-sorted spectrum of a sample covariance matrix.
struct EigenSample {
  std::vector<double> values;
};

// Full spectrum of a Hermitian matrix, descending.  Rejects inputs whose
// relative asymmetry exceeds 1e-10.
EigenSample hermitian_eigs(const Eigen::MatrixXd& a);
EigenSample hermitian_eigs(const Eigen::MatrixXcd& a);

// Eigen-decomposition variant for callers that verify residuals.
struct EigenPairs {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns aligned with values
};
EigenPairs hermitian_eigs_with_vectors(const Eigen::MatrixXd& a);

// Normalized statistics of A_n = X2^* (lambda I - X2 X2^*)^-1 X2 formed
// through the p x p eigendecomposition, never materializing the n x n
// matrix:  tr A / n,  tr A A^* / n,  sum_i a_ii^2 / n.
struct ResolventStats {
  double tr_a_over_n;
  double tr_aa_over_n;
  double sum_aii_sq_over_n;
};
ResolventStats resolvent_stats(const Eigen::MatrixXd& x2, double lambda);

}  // namespace spikelab
