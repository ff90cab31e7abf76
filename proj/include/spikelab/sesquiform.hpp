#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "spikelab/rng.hpp"

namespace spikelab {

// Finite-n statistics of a Hermitian weight matrix A:
//   omega = (1/n) sum a_uu^2,  theta = (1/n) tr A^2 = (1/n) sum |a_uv|^2,
//   tau   = (1/n) tr A A^T    = (1/n) sum a_uv^2.
// For real symmetric A, tau == theta exactly.
struct FormStats {
  double omega = 0.0;
  double theta = 0.0;
  std::complex<double> tau;
};

FormStats form_stats(const Eigen::MatrixXd& a);
FormStats form_stats(const Eigen::MatrixXcd& a);

// Per-pair moment tables of the i.i.d. coordinate pairs (x_l, y_l),
// 0 <= l < K, feeding the covariance assemblies of the sesquilinear CLT.
class MomentSpec {
 public:
  int dim() const noexcept { return k_; }

  std::complex<double> rho(int l) const { return rho_[l]; }
  // E[conj(x_l) y_l conj(x_m) y_m]
  std::complex<double> quad(int l, int m) const { return quad_(l, m); }
  // E[conj(x_l) y_m]
  std::complex<double> cross(int l, int m) const { return cross_(l, m); }
  // E[conj(x_l) conj(x_m)], E[y_l y_m]
  std::complex<double> xbar_xbar(int l, int m) const { return xbxb_(l, m); }
  std::complex<double> y_y(int l, int m) const { return yy_(l, m); }
  // E[conj(x_l) x_m], E[conj(y_l) y_m]
  std::complex<double> xbar_x(int l, int m) const { return xbx_(l, m); }
  std::complex<double> ybar_y(int l, int m) const { return yby_(l, m); }
  // E[|x_l|^2 |x_m|^2], E[|y_l|^2 |y_m|^2]
  double abs_xx(int l, int m) const { return absxx_(l, m); }
  double abs_yy(int l, int m) const { return absyy_(l, m); }

  bool is_real() const;

  // All moments via Isserlis from the joint covariance of the real Gaussian
  // vector (x; y) (2K x 2K).
  static MomentSpec gaussian_real(const Eigen::MatrixXd& cov_xy);

  // Estimated from i.i.d. draws; standard errors recorded.
  using PairSampler =
      std::function<void(RngStream&, Eigen::VectorXcd&, Eigen::VectorXcd&)>;
  static MomentSpec estimate(int k, const PairSampler& sampler,
                             std::size_t draws, RngStream& rng);

  std::size_t draws() const noexcept { return draws_; }
  double max_standard_error() const noexcept { return max_se_; }

 private:
  int k_ = 0;
  Eigen::VectorXcd rho_;
  Eigen::MatrixXcd quad_, cross_, xbxb_, yy_, xbx_, yby_;
  Eigen::MatrixXd absxx_, absyy_;
  std::size_t draws_ = 0;   // 0 for analytic specs
  double max_se_ = 0.0;
};

// Centered forms Z_l = n^{-1/2} [X(l)^* A Y(l) - rho(l) tr A]; X and Y hold
// one coordinate per row.
struct ZVector {
  Eigen::VectorXcd values;
  int n = 0;
};

ZVector z_vector(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y,
                 const Eigen::MatrixXcd& a, const Eigen::VectorXcd& rho);
ZVector z_vector(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                 const Eigen::MatrixXd& a, const Eigen::VectorXd& rho);

// B = B1 + B2 + B3 (complex symmetric), the Laplace-transform matrix of the
// limit law of Z_n.
Eigen::MatrixXcd b_covariance(const MomentSpec& moments, const FormStats& stats);

// Real quadratic-form covariance D = D1 + D2; requires real moments with
// Y = X.
Eigen::MatrixXd d_covariance(const MomentSpec& moments, const FormStats& stats);

// The auxiliary real matrices B_a, B_b entering the real/imaginary split.
void b_blocks(const MomentSpec& moments, const FormStats& stats,
              Eigen::MatrixXcd& b, Eigen::MatrixXd& b_a, Eigen::MatrixXd& b_b);

// Covariance of (Re Z; Im Z):
//   G11 = (2 Re B + Ba + Bb)/4, G22 = (-2 Re B + Ba + Bb)/4, G12 = Im(B)/2.
Eigen::MatrixXd gamma_from_b(const Eigen::MatrixXcd& b,
                             const Eigen::MatrixXd& b_a,
                             const Eigen::MatrixXd& b_b);

}  // namespace spikelab
