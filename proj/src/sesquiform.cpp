#include "spikelab/sesquiform.hpp"

#include <cmath>
#include <stdexcept>

namespace spikelab {

FormStats form_stats(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() ||
      (a - a.transpose()).cwiseAbs().maxCoeff() >
          1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("form_stats: matrix must be symmetric");
  const double n = static_cast<double>(a.rows());
  FormStats out;
  out.omega = a.diagonal().array().square().sum() / n;
  out.theta = a.array().square().sum() / n;
  out.tau = out.theta;
  return out;
}

FormStats form_stats(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols() ||
      (a - a.adjoint()).cwiseAbs().maxCoeff() >
          1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("form_stats: matrix must be Hermitian");
  const double n = static_cast<double>(a.rows());
  FormStats out;
  out.omega = a.diagonal().real().array().square().sum() / n;
  out.theta = a.array().abs2().sum() / n;
  out.tau = a.array().square().sum() / n;
  return out;
}

bool MomentSpec::is_real() const {
  auto real_m = [](const Eigen::MatrixXcd& m) {
    return m.imag().cwiseAbs().maxCoeff() <= 1e-12;
  };
  return rho_.imag().cwiseAbs().maxCoeff() <= 1e-12 && real_m(quad_) &&
         real_m(cross_) && real_m(xbxb_) && real_m(yy_) && real_m(xbx_) &&
         real_m(yby_);
}

MomentSpec MomentSpec::gaussian_real(const Eigen::MatrixXd& cov_xy) {
  if (cov_xy.rows() != cov_xy.cols() || cov_xy.rows() % 2 != 0)
    throw std::invalid_argument("gaussian_real: covariance must be 2K x 2K");
  const int k = static_cast<int>(cov_xy.rows()) / 2;
  auto cxx = [&](int l, int m) { return cov_xy(l, m); };
  auto cxy = [&](int l, int m) { return cov_xy(l, k + m); };
  auto cyy = [&](int l, int m) { return cov_xy(k + l, k + m); };

  MomentSpec spec;
  spec.k_ = k;
  spec.rho_.resize(k);
  spec.quad_.resize(k, k);
  spec.cross_.resize(k, k);
  spec.xbxb_.resize(k, k);
  spec.yy_.resize(k, k);
  spec.xbx_.resize(k, k);
  spec.yby_.resize(k, k);
  spec.absxx_.resize(k, k);
  spec.absyy_.resize(k, k);
  for (int l = 0; l < k; ++l) spec.rho_[l] = cxy(l, l);
  for (int l = 0; l < k; ++l)
    for (int m = 0; m < k; ++m) {
      // Isserlis: E[x_l y_l x_m y_m]
      spec.quad_(l, m) = cxy(l, l) * cxy(m, m) + cxx(l, m) * cyy(l, m) +
                         cxy(l, m) * cxy(m, l);
      spec.cross_(l, m) = cxy(l, m);
      spec.xbxb_(l, m) = cxx(l, m);
      spec.yy_(l, m) = cyy(l, m);
      spec.xbx_(l, m) = cxx(l, m);
      spec.yby_(l, m) = cyy(l, m);
      spec.absxx_(l, m) = cxx(l, l) * cxx(m, m) + 2.0 * cxx(l, m) * cxx(l, m);
      spec.absyy_(l, m) = cyy(l, l) * cyy(m, m) + 2.0 * cyy(l, m) * cyy(l, m);
    }
  return spec;
}

MomentSpec MomentSpec::estimate(int k, const PairSampler& sampler,
                                std::size_t draws, RngStream& rng) {
  if (draws < 2) throw std::invalid_argument("estimate: need at least 2 draws");
  MomentSpec spec;
  spec.k_ = k;
  spec.draws_ = draws;
  spec.rho_ = Eigen::VectorXcd::Zero(k);
  spec.quad_ = Eigen::MatrixXcd::Zero(k, k);
  spec.cross_ = Eigen::MatrixXcd::Zero(k, k);
  spec.xbxb_ = Eigen::MatrixXcd::Zero(k, k);
  spec.yy_ = Eigen::MatrixXcd::Zero(k, k);
  spec.xbx_ = Eigen::MatrixXcd::Zero(k, k);
  spec.yby_ = Eigen::MatrixXcd::Zero(k, k);
  spec.absxx_ = Eigen::MatrixXd::Zero(k, k);
  spec.absyy_ = Eigen::MatrixXd::Zero(k, k);

  Eigen::MatrixXd quad_sq = Eigen::MatrixXd::Zero(k, k);  // for the SE of quad
  Eigen::VectorXcd x(k), y(k);
  for (std::size_t d = 0; d < draws; ++d) {
    sampler(rng, x, y);
    for (int l = 0; l < k; ++l) {
      spec.rho_[l] += std::conj(x[l]) * y[l];
      for (int m = 0; m < k; ++m) {
        const std::complex<double> q =
            std::conj(x[l]) * y[l] * std::conj(x[m]) * y[m];
        spec.quad_(l, m) += q;
        quad_sq(l, m) += std::norm(q);
        spec.cross_(l, m) += std::conj(x[l]) * y[m];
        spec.xbxb_(l, m) += std::conj(x[l]) * std::conj(x[m]);
        spec.yy_(l, m) += y[l] * y[m];
        spec.xbx_(l, m) += std::conj(x[l]) * x[m];
        spec.yby_(l, m) += std::conj(y[l]) * y[m];
        spec.absxx_(l, m) += std::norm(x[l]) * std::norm(x[m]);
        spec.absyy_(l, m) += std::norm(y[l]) * std::norm(y[m]);
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(draws);
  spec.rho_ *= inv;
  spec.quad_ *= inv;
  spec.cross_ *= inv;
  spec.xbxb_ *= inv;
  spec.yy_ *= inv;
  spec.xbx_ *= inv;
  spec.yby_ *= inv;
  spec.absxx_ *= inv;
  spec.absyy_ *= inv;

  double max_var = 0.0;
  for (int l = 0; l < k; ++l)
    for (int m = 0; m < k; ++m) {
      const double v = quad_sq(l, m) * inv - std::norm(spec.quad_(l, m));
      max_var = std::max(max_var, v);
    }
  spec.max_se_ = std::sqrt(std::max(max_var, 0.0) / static_cast<double>(draws));
  return spec;
}

ZVector z_vector(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y,
                 const Eigen::MatrixXcd& a, const Eigen::VectorXcd& rho) {
  const int k = static_cast<int>(x.rows());
  const int n = static_cast<int>(x.cols());
  if (y.rows() != k || y.cols() != n || a.rows() != n || a.cols() != n ||
      rho.size() != k)
    throw std::invalid_argument("z_vector: dimension mismatch");
  const std::complex<double> tr = a.trace();
  ZVector out;
  out.n = n;
  out.values.resize(k);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (int l = 0; l < k; ++l) {
    const std::complex<double> form =
        (x.row(l).conjugate() * (a * y.row(l).transpose())).value();
    out.values[l] = inv_sqrt_n * (form - rho[l] * tr);
  }
  return out;
}

ZVector z_vector(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                 const Eigen::MatrixXd& a, const Eigen::VectorXd& rho) {
  const int k = static_cast<int>(x.rows());
  const int n = static_cast<int>(x.cols());
  if (y.rows() != k || y.cols() != n || a.rows() != n || a.cols() != n ||
      rho.size() != k)
    throw std::invalid_argument("z_vector: dimension mismatch");
  const double tr = a.trace();
  ZVector out;
  out.n = n;
  out.values.resize(k);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (int l = 0; l < k; ++l) {
    const double form = (x.row(l) * (a * y.row(l).transpose())).value();
    out.values[l] = inv_sqrt_n * (form - rho[l] * tr);
  }
  return out;
}

Eigen::MatrixXcd b_covariance(const MomentSpec& moments,
                              const FormStats& stats) {
  const int k = moments.dim();
  Eigen::MatrixXcd b(k, k);
  const std::complex<double> d3 = stats.tau - stats.omega;
  for (int l = 0; l < k; ++l)
    for (int m = 0; m < k; ++m) {
      const auto b1 = stats.omega *
                      (moments.quad(l, m) - moments.rho(l) * moments.rho(m));
      const auto b2 =
          (stats.theta - stats.omega) * moments.cross(l, m) * moments.cross(m, l);
      const auto b3 = d3 * moments.xbar_xbar(l, m) * moments.y_y(l, m);
      b(l, m) = b1 + b2 + b3;
    }
  return b;
}

Eigen::MatrixXd d_covariance(const MomentSpec& moments, const FormStats& stats) {
  if (!moments.is_real())
    throw std::invalid_argument("d_covariance: moments must be real");
  const int k = moments.dim();
  Eigen::MatrixXd d(k, k);
  for (int l = 0; l < k; ++l)
    for (int m = 0; m < k; ++m) {
      const double gamma_lm = moments.xbar_x(l, m).real();
      const double d1 = stats.omega *
                        (moments.abs_xx(l, m) -
                         moments.xbar_x(l, l).real() * moments.xbar_x(m, m).real());
      const double d2 = (stats.theta - stats.omega) * 2.0 * gamma_lm * gamma_lm;
      d(l, m) = d1 + d2;
    }
  return d;
}

void b_blocks(const MomentSpec& moments, const FormStats& stats,
              Eigen::MatrixXcd& b, Eigen::MatrixXd& b_a, Eigen::MatrixXd& b_b) {
  if (std::abs(stats.tau.imag()) > 1e-12 * (1.0 + std::abs(stats.tau)))
    throw std::invalid_argument(
        "b_blocks: complex tau has no real Ba/Bb decomposition");
  const int k = moments.dim();
  b = b_covariance(moments, stats);
  b_a.resize(k, k);
  b_b.resize(k, k);
  const double d2 = stats.theta - stats.omega;
  const double d3 = stats.tau.real() - stats.omega;
  for (int l = 0; l < k; ++l)
    for (int m = 0; m < k; ++m) {
      const double sx_l = moments.xbar_x(l, l).real();
      const double sx_m = moments.xbar_x(m, m).real();
      const double sy_l = moments.ybar_y(l, l).real();
      const double sy_m = moments.ybar_y(m, m).real();
      b_a(l, m) = stats.omega * (moments.abs_xx(l, m) - sx_l * sx_m) +
                  d2 * std::norm(moments.xbar_x(l, m)) +
                  d3 * std::norm(moments.xbar_xbar(l, m));
      b_b(l, m) = stats.omega * (moments.abs_yy(l, m) - sy_l * sy_m) +
                  d2 * std::norm(moments.ybar_y(l, m)) +
                  d3 * std::norm(moments.y_y(l, m));
    }
}

Eigen::MatrixXd gamma_from_b(const Eigen::MatrixXcd& b,
                             const Eigen::MatrixXd& b_a,
                             const Eigen::MatrixXd& b_b) {
  const int k = static_cast<int>(b.rows());
  if (b.cols() != k || b_a.rows() != k || b_a.cols() != k || b_b.rows() != k ||
      b_b.cols() != k)
    throw std::invalid_argument("gamma_from_b: inconsistent block dimensions");
  Eigen::MatrixXd gamma(2 * k, 2 * k);
  gamma.topLeftCorner(k, k) = 0.25 * (2.0 * b.real() + b_a + b_b);
  gamma.bottomRightCorner(k, k) = 0.25 * (-2.0 * b.real() + b_a + b_b);
  gamma.topRightCorner(k, k) = 0.5 * b.imag();
  gamma.bottomLeftCorner(k, k) = 0.5 * b.imag().transpose();
  return gamma;
}

}  // namespace spikelab
