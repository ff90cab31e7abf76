#include "spikelab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spikelab {

ThetaOmega theta_omega(double alpha, const MpParams& params) {
  if (params.in_critical(alpha)) {
    throw CriticalIntervalError(alpha, params.critical_low(),
                                params.critical_high());
  }
  const double y = params.y();
  const double d = alpha - 1.0;
  ThetaOmega out;
  out.theta = (d + y) * (d + y) / (d * d - y);
  const double ratio = y / d;  // y(1+m1)/(lambda - y(1+m1)) at lambda = phi(alpha)
  out.omega = (1.0 + ratio) * (1.0 + ratio);
  return out;
}

double sigma2(double alpha, const MpParams& params) {
  if (params.in_critical(alpha)) {
    throw CriticalIntervalError(alpha, params.critical_low(),
                                params.critical_high());
  }
  const double d = alpha - 1.0;
  return 2.0 * alpha * alpha * (d * d - params.y()) / (d * d);
}

double s2_binary(double alpha, const MpParams& params) {
  const double d = alpha - 1.0;
  return sigma2(alpha, params) * params.y() / (d * d);
}

// ---------------------------------------------------------------------------
// moments

CoordinateMoments::CoordinateMoments(Eigen::MatrixXd second,
                                     std::vector<double> fourth)
    : m_(static_cast<int>(second.rows())),
      second_(std::move(second)),
      fourth_(std::move(fourth)) {
  if (second_.rows() != second_.cols())
    throw std::invalid_argument("CoordinateMoments: second moments not square");
  const std::size_t need = static_cast<std::size_t>(m_) * m_ * m_ * m_;
  if (fourth_.size() != need)
    throw std::invalid_argument(
        "CoordinateMoments: missing fourth moments (need full M^4 table)");
}

double CoordinateMoments::fourth(int i, int j, int k, int l) const {
  return fourth_[((static_cast<std::size_t>(i) * m_ + j) * m_ + k) * m_ + l];
}

CoordinateMoments CoordinateMoments::gaussian(const Eigen::MatrixXd& sigma) {
  const int m = static_cast<int>(sigma.rows());
  std::vector<double> fourth(static_cast<std::size_t>(m) * m * m * m);
  std::size_t idx = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          fourth[idx++] = sigma(i, j) * sigma(k, l) + sigma(i, k) * sigma(j, l) +
                          sigma(i, l) * sigma(j, k);
  return CoordinateMoments(sigma, std::move(fourth));
}

CoordinateMoments CoordinateMoments::independent(
    const std::vector<double>& variances, const std::vector<double>& fourths) {
  const int m = static_cast<int>(variances.size());
  if (fourths.size() != variances.size())
    throw std::invalid_argument(
        "CoordinateMoments: need one fourth moment per coordinate");
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) second(i, i) = variances[i];
  std::vector<double> fourth(static_cast<std::size_t>(m) * m * m * m, 0.0);
  auto at = [&](int i, int j, int k, int l) -> double& {
    return fourth[((static_cast<std::size_t>(i) * m + j) * m + k) * m + l];
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          if (i == j && j == k && k == l) {
            at(i, j, k, l) = fourths[i];
          } else if (i == j && k == l && i != k) {
            at(i, j, k, l) = variances[i] * variances[k];
          } else if (i == k && j == l && i != j) {
            at(i, j, k, l) = variances[i] * variances[j];
          } else if (i == l && j == k && i != j) {
            at(i, j, k, l) = variances[i] * variances[j];
          }
        }
  return CoordinateMoments(std::move(second), std::move(fourth));
}

CoordinateMomentsComplex CoordinateMomentsComplex::gaussian(
    const Eigen::VectorXd& variances) {
  CoordinateMomentsComplex out;
  const int m = static_cast<int>(variances.size());
  out.m_ = m;
  out.sigma_ = Eigen::MatrixXcd::Zero(m, m);
  out.pseudo_ = Eigen::MatrixXcd::Zero(m, m);
  out.abs_sq_ = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) out.sigma_(i, i) = variances[i];
  out.fourth_.assign(static_cast<std::size_t>(m) * m * m * m, 0.0);
  auto at = [&](int i, int j, int k, int l) -> std::complex<double>& {
    return out.fourth_[((static_cast<std::size_t>(i) * m + j) * m + k) * m + l];
  };
  // circular Wick pairing: E[x_i conj(x_j) x_k conj(x_l)]
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double v = 0.0;
          if (i == j && k == l) v += variances[i] * variances[k];
          if (i == l && k == j) v += variances[i] * variances[k];
          at(i, j, k, l) = v;
        }
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      out.abs_sq_(i, k) = (i == k) ? 2.0 * variances[i] * variances[i]
                                   : variances[i] * variances[k];
  return out;
}

std::complex<double> CoordinateMomentsComplex::fourth(int i, int j, int k,
                                                      int l) const {
  return fourth_[((static_cast<std::size_t>(i) * m_ + j) * m_ + k) * m_ + l];
}

// ---------------------------------------------------------------------------
// covariance assembly

int RCovariance::pair_index(int i, int j) const {
  // (i, j) with i <= j in row-major upper-triangle order
  return i * dim - i * (i - 1) / 2 + (j - i);
}

double RCovariance::cov(int i, int j, int i2, int j2) const {
  if (i > j) std::swap(i, j);
  if (i2 > j2) std::swap(i2, j2);
  return matrix(pair_index(i, j), pair_index(i2, j2));
}

RCovariance r_covariance_real(const CoordinateMoments& moments,
                              const ThetaOmega& to) {
  const int m = moments.dim();
  const int pairs = m * (m + 1) / 2;
  RCovariance out;
  out.dim = m;
  out.matrix.resize(pairs, pairs);

  const double w = to.omega, diff = to.theta - to.omega;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int i2 = 0; i2 < m; ++i2)
        for (int j2 = i2; j2 < m; ++j2) {
          const double b1 =
              w * (moments.fourth(i, j, i2, j2) -
                   moments.second(i, j) * moments.second(i2, j2));
          const double b2 = diff * moments.second(i, j2) * moments.second(i2, j);
          const double b3 = diff * moments.second(i, i2) * moments.second(j, j2);
          out.matrix(out.pair_index(i, j), out.pair_index(i2, j2)) = b1 + b2 + b3;
        }
  return out;
}

RCovariance gamma_complex(const CoordinateMomentsComplex& moments,
                          const ThetaOmega& to) {
  const int m = moments.dim();
  const int pairs = m * (m + 1) / 2;

  // tau may be omitted only when every pseudo moment vanishes (B3 == 0)
  bool pseudo_zero = true;
  for (int i = 0; i < m && pseudo_zero; ++i)
    for (int j = 0; j < m && pseudo_zero; ++j)
      if (std::abs(moments.pseudo(i, j)) > 0.0) pseudo_zero = false;
  if (!to.tau && !pseudo_zero)
    throw std::invalid_argument(
        "gamma_complex: tau is required when pseudo moments are nonzero");
  const double tau = to.tau.value_or(to.omega);

  RCovariance out;
  out.dim = m;
  out.hermitian = true;
  out.matrix.resize(2 * pairs, 2 * pairs);

  const double w = to.omega;
  const double d2 = to.theta - to.omega;
  const double d3 = tau - to.omega;

  auto idx = [&](int i, int j) {
    return i * m - i * (i - 1) / 2 + (j - i);
  };

  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int i2 = 0; i2 < m; ++i2)
        for (int j2 = i2; j2 < m; ++j2) {
          using C = std::complex<double>;
          const C b1 = w * (moments.fourth(i, j, i2, j2) -
                            moments.second(i, j) * moments.second(i2, j2));
          const C b2 = d2 * moments.second(i, j2) * moments.second(i2, j);
          const C b3 = d3 * moments.pseudo(i, i2) *
                       std::conj(moments.pseudo(j, j2));
          const C b = b1 + b2 + b3;

          const double b1a = w * (moments.abs_sq_pair(i, i2) -
                                  (moments.second(i, i) * moments.second(i2, i2))
                                      .real());
          const double b1b = w * (moments.abs_sq_pair(j, j2) -
                                  (moments.second(j, j) * moments.second(j2, j2))
                                      .real());
          const double b2a = d2 * std::norm(moments.second(i, i2));
          const double b2b = d2 * std::norm(moments.second(j, j2));
          const double b3a = d3 * std::norm(moments.pseudo(i, i2));
          const double b3b = d3 * std::norm(moments.pseudo(j, j2));
          const double ba = b1a + b2a + b3a;
          const double bb = b1b + b2b + b3b;

          const int r = idx(i, j), c = idx(i2, j2);
          out.matrix(r, c) = 0.25 * (2.0 * b.real() + ba + bb);                // G11
          out.matrix(pairs + r, pairs + c) = 0.25 * (-2.0 * b.real() + ba + bb);  // G22
          out.matrix(r, pairs + c) = 0.5 * b.imag();                            // G12
          out.matrix(pairs + c, r) = 0.5 * b.imag();
        }
  return out;
}

// ---------------------------------------------------------------------------
// limit laws

LimitLaw limit_law(double alpha, int multiplicity, const MpParams& params,
                   const EntryLaw& entry) {
  if (params.in_critical(alpha)) {
    throw CriticalIntervalError(alpha, params.critical_low(),
                                params.critical_high());
  }
  if (multiplicity < 1)
    throw std::invalid_argument("limit_law: multiplicity must be >= 1");
  if (entry.is_complex && entry.family != EntryFamily::Gaussian)
    throw std::invalid_argument(
        "limit_law: complex entries supported for the Gaussian family only");

  const double y = params.y();
  const auto to = theta_omega(alpha, params);
  const double m3 = m_closed_forms(alpha, params).m3;

  LimitLaw law;
  law.block = multiplicity;
  law.kind = multiplicity == 1 ? LimitLaw::Kind::ScalarGaussian
                               : LimitLaw::Kind::MatrixEigLaw;
  law.scale = 1.0 / (1.0 + y * m3 * alpha);
  law.alpha = alpha;
  law.y = y;
  law.beta = entry.beta;
  law.hermitian = entry.is_complex;
  const double a2 = alpha * alpha;
  if (entry.is_complex) {
    // E[xi^2] = 0 case: var R_ii = (theta + beta' omega) alpha^2
    law.diag_var = (to.theta + entry.beta * to.omega) * a2;
    law.offdiag_var = to.theta * a2;
  } else {
    law.diag_var = (2.0 * to.theta + entry.beta * to.omega) * a2;
    law.offdiag_var = to.theta * a2;
  }
  return law;
}

std::vector<std::vector<double>> sample_limit_law(const LimitLaw& law,
                                                  int count, RngStream& rng) {
  std::vector<std::vector<double>> out;
  out.reserve(count);
  const double diag_sd = std::sqrt(law.diag_var);
  const double off_sd = std::sqrt(law.offdiag_var);

  if (law.kind == LimitLaw::Kind::ScalarGaussian) {
    const double sd = law.scale * diag_sd;
    for (int c = 0; c < count; ++c) out.push_back({sd * rng.next_gaussian()});
    return out;
  }

  const int b = law.block;
  if (!law.hermitian) {
    Eigen::MatrixXd g(b, b);
    for (int c = 0; c < count; ++c) {
      for (int i = 0; i < b; ++i) {
        g(i, i) = diag_sd * rng.next_gaussian();
        for (int j = i + 1; j < b; ++j) {
          g(i, j) = off_sd * rng.next_gaussian();
          g(j, i) = g(i, j);
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
      std::vector<double> tuple(b);
      for (int i = 0; i < b; ++i) tuple[i] = law.scale * es.eigenvalues()[b - 1 - i];
      out.push_back(std::move(tuple));
    }
  } else {
    const double half_sd = off_sd / std::sqrt(2.0);
    Eigen::MatrixXcd g(b, b);
    for (int c = 0; c < count; ++c) {
      for (int i = 0; i < b; ++i) {
        g(i, i) = diag_sd * rng.next_gaussian();
        for (int j = i + 1; j < b; ++j) {
          g(i, j) = std::complex<double>(half_sd * rng.next_gaussian(),
                                         half_sd * rng.next_gaussian());
          g(j, i) = std::conj(g(i, j));
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
      std::vector<double> tuple(b);
      for (int i = 0; i < b; ++i) tuple[i] = law.scale * es.eigenvalues()[b - 1 - i];
      out.push_back(std::move(tuple));
    }
  }
  return out;
}

double wigner_pair_density(double delta, double gamma, double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("wigner_pair_density: sigma must be positive");
  const double s2 = sigma * sigma;
  return std::abs(delta - gamma) / (4.0 * s2 * sigma * std::sqrt(M_PI)) *
         std::exp(-(delta * delta + gamma * gamma) / (2.0 * s2));
}

}  // namespace spikelab
