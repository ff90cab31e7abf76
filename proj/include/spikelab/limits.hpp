#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "spikelab/model.hpp"
#include "spikelab/rng.hpp"
#include "spikelab/spectra.hpp"

namespace spikelab {

// Constants controlling the fluctuation covariances, evaluated at
// lambda = phi(alpha):
//   theta = 1 + 2 y m1 + y m2,
//   omega = 1 + 2 y m1 + (y(1+m1)/(lambda - y(1+m1)))^2,
//   tau   = 1 + 2 y m1 + m4   (complex case; caller supplied).
struct ThetaOmega {
  double theta = 0.0;
  double omega = 0.0;
  std::optional<double> tau;
};

ThetaOmega theta_omega(double alpha, const MpParams& params);

// Limit variance of sqrt(n)(lambda_n - phi(alpha)) for a simple spike with
// Gaussian entries:  2 alpha^2 [(alpha-1)^2 - y] / (alpha-1)^2.
double sigma2(double alpha, const MpParams& params);

// Binary-entry (beta = -2) variant:  sigma2 * y / (alpha-1)^2.
double s2_binary(double alpha, const MpParams& params);

// Moments of the spike-block coordinates (real case): second moments
// E[xi_i xi_j] and the full fourth-moment table E[xi_i xi_j xi_k xi_l].
class CoordinateMoments {
 public:
  CoordinateMoments(Eigen::MatrixXd second, std::vector<double> fourth);

  static CoordinateMoments gaussian(const Eigen::MatrixXd& sigma);
  static CoordinateMoments independent(const std::vector<double>& variances,
                                       const std::vector<double>& fourths);

  int dim() const noexcept { return m_; }
  double second(int i, int j) const { return second_(i, j); }
  double fourth(int i, int j, int k, int l) const;

 private:
  int m_;
  Eigen::MatrixXd second_;
  std::vector<double> fourth_;
};

// Complex-case coordinate moments: E[xi_i conj(xi_j)], pseudo moments
// E[xi_i xi_j], mixed fourth moments and |.|^2 pair moments.
class CoordinateMomentsComplex {
 public:
  // Independent complex entries with E[xi^2] = 0 and E[|xi|^4] implied by
  // the Gaussian law.
  static CoordinateMomentsComplex gaussian(const Eigen::VectorXd& variances);

  int dim() const noexcept { return m_; }
  std::complex<double> second(int i, int j) const { return sigma_(i, j); }
  std::complex<double> pseudo(int i, int j) const { return pseudo_(i, j); }
  std::complex<double> fourth(int i, int j, int k, int l) const;
  double abs_sq_pair(int i, int k) const { return abs_sq_(i, k); }

 private:
  CoordinateMomentsComplex() = default;
  int m_ = 0;
  Eigen::MatrixXcd sigma_, pseudo_;
  std::vector<std::complex<double>> fourth_;
  Eigen::MatrixXd abs_sq_;
};

// Covariance of the Gaussian limit matrix R over vectorized upper-triangle
// entry pairs.  The complex case stores the 2K x 2K real/imaginary block
// form of Proposition 3.2.
struct RCovariance {
  int dim = 0;  // M
  bool hermitian = false;
  Eigen::MatrixXd matrix;

  // flat index of the upper-triangle pair (i, j), i <= j, 0-based
  int pair_index(int i, int j) const;
  // covariance of (R_ij, R_i'j') in the real case
  double cov(int i, int j, int i2, int j2) const;
};

// Real-case covariance assembly of the limit matrix R.
RCovariance r_covariance_real(const CoordinateMoments& moments,
                              const ThetaOmega& to);

// Complex-case Gamma assembly: covariance of (Re R_ij; Im R_ij).
RCovariance gamma_complex(const CoordinateMomentsComplex& moments,
                          const ThetaOmega& to);

// Limiting fluctuation law of the n_k packed sample eigenvalues of one
// spike: a scalar Gaussian for multiplicity 1, otherwise the eigenvalue law
// of scale * R_kk with independent Gaussian entries.
struct LimitLaw {
  enum class Kind { ScalarGaussian, MatrixEigLaw };
  Kind kind = Kind::ScalarGaussian;
  int block = 1;             // n_k
  double scale = 1.0;        // 1 / (1 + y m3 alpha)
  double diag_var = 0.0;     // var of R_kk diagonal entries
  double offdiag_var = 0.0;  // var of R_kk off-diagonal entries
  bool hermitian = false;

  // provenance
  double alpha = 0.0, y = 0.0, beta = 0.0;

  // variance of the scalar limit (block == 1): scale^2 * diag_var
  double scalar_variance() const { return scale * scale * diag_var; }
};

LimitLaw limit_law(double alpha, int multiplicity, const MpParams& params,
                   const EntryLaw& entry);

// Ordered eigenvalue tuples of `count` independent draws of the law.
std::vector<std::vector<double>> sample_limit_law(const LimitLaw& law,
                                                  int count, RngStream& rng);

// Unordered joint density of the eigenvalue pair of sigma * W for the
// 2 x 2 Gaussian-Wigner limit.
double wigner_pair_density(double delta, double gamma, double sigma);

}  // namespace spikelab
