#include <cmath>

#include "doctest.h"
#include "spikelab/linalg.hpp"
#include "spikelab/rng.hpp"
#include "spikelab/sesquiform.hpp"

using namespace spikelab;

namespace {

Eigen::MatrixXd tridiagonal_ones(int n, double diag) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a.diagonal().setConstant(diag);
  for (int i = 0; i + 1 < n; ++i) {
    a(i, i + 1) = 1.0;
    a(i + 1, i) = 1.0;
  }
  return a;
}

// x1 = g1, x2 = 0.6 g1 + 0.8 g2; y1 = 0.6 g1 + 0.5 g2 + c g3,
// y2 = 0.5 g1 + 0.6 g2 + c g4  (unit variances, all cross moments nonzero)
Eigen::MatrixXd test_cov_xy() {
  const double c = std::sqrt(1.0 - 0.36 - 0.25);
  Eigen::MatrixXd l(4, 6);
  l.setZero();
  l(0, 0) = 1.0;
  l(1, 0) = 0.6;
  l(1, 1) = 0.8;
  l(2, 0) = 0.6;
  l(2, 1) = 0.5;
  l(2, 2) = c;
  l(3, 0) = 0.5;
  l(3, 1) = 0.6;
  l(3, 3) = c;
  return l * l.transpose();
}

void draw_pair(RngStream& rng, const Eigen::MatrixXd& cov_chol,
               Eigen::VectorXd& x, Eigen::VectorXd& y) {
  Eigen::VectorXd g(cov_chol.cols());
  for (int i = 0; i < g.size(); ++i) g[i] = rng.next_gaussian();
  const Eigen::VectorXd v = cov_chol * g;
  x = v.head(2);
  y = v.tail(2);
}

}  // namespace

TEST_SUITE("sesquiform") {

TEST_CASE("form_stats on fixed matrices") {
  const auto id = form_stats(Eigen::MatrixXd::Identity(6, 6).eval());
  CHECK(id.omega == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(id.theta == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(id.tau.real() == doctest::Approx(1.0).epsilon(1e-14));

  const auto zero = form_stats(Eigen::MatrixXd::Zero(4, 4).eval());
  CHECK(zero.omega == 0.0);
  CHECK(zero.theta == 0.0);

  Eigen::MatrixXd hollow = Eigen::MatrixXd::Ones(3, 3);
  hollow.diagonal().setZero();
  const auto h = form_stats(hollow);
  CHECK(h.omega == 0.0);
  CHECK(h.theta == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(h.tau.real() == doctest::Approx(2.0).epsilon(1e-14));

  CHECK_THROWS_AS(form_stats(Eigen::MatrixXd::Random(3, 3).eval()),
                  std::invalid_argument);
}

TEST_CASE("form_stats: real symmetric tau equals theta exactly") {
  RngStream rng(55);
  const int n = 40;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = rng.next_gaussian();
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = rng.next_gaussian();
      a(j, i) = a(i, j);
    }
  }
  const auto s = form_stats(a);
  CHECK(s.tau.real() == s.theta);
  CHECK(s.tau.imag() == 0.0);

  // theta equals the eigenvalue form (1/n) sum lambda_i^2
  const auto eigs = hermitian_eigs(a);
  double acc = 0.0;
  for (double v : eigs.values) acc += v * v;
  CHECK(s.theta == doctest::Approx(acc / n).epsilon(1e-12));
}

TEST_CASE("form_stats on a Hermitian complex matrix") {
  Eigen::MatrixXcd a(2, 2);
  a << std::complex<double>(1, 0), std::complex<double>(0, 1),
      std::complex<double>(0, -1), std::complex<double>(0, 0);
  const auto s = form_stats(a);
  CHECK(s.omega == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.theta == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(s.tau.real() == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(s.tau.imag() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("z_vector identities") {
  // identity weight: classical CLT statistic
  const int n = 64;
  RngStream rng(3);
  Eigen::MatrixXd x(1, n);
  for (int i = 0; i < n; ++i) x(0, i) = rng.next_gaussian();
  Eigen::VectorXd rho(1);
  rho << 1.0;
  const auto z =
      z_vector(x, x, Eigen::MatrixXd::Identity(n, n).eval(), rho);
  const double direct = (x.array().square().sum() - n) / std::sqrt(n);
  CHECK(z.values[0].real() == doctest::Approx(direct).epsilon(1e-12));
  CHECK(z.values[0].imag() == 0.0);

  // zero data: -rho tr(A)/sqrt(n)
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, n);
  const auto z0 =
      z_vector(zero, zero, Eigen::MatrixXd::Identity(n, n).eval(), rho);
  CHECK(z0.values[0].real() == doctest::Approx(-std::sqrt(n)).epsilon(1e-12));

  CHECK_THROWS_AS(
      z_vector(x, x, Eigen::MatrixXd::Identity(8, 8).eval(), rho),
      std::invalid_argument);
}

TEST_CASE("z_vector is centered") {
  const int n = 32;
  const Eigen::MatrixXd a = tridiagonal_ones(n, 1.0);
  Eigen::VectorXd rho(1);
  rho << 1.0;
  RngStream rng(71);
  double sum = 0.0, sumsq = 0.0;
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    Eigen::MatrixXd x(1, n);
    for (int i = 0; i < n; ++i) x(0, i) = rng.next_gaussian();
    const auto z = z_vector(x, x, a, rho);
    sum += z.values[0].real();
    sumsq += z.values[0].real() * z.values[0].real();
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sumsq / draws - mean * mean) / draws);
  CHECK(std::abs(mean) <= 4.0 * se);
}

TEST_CASE("b_covariance closed cases") {
  // A = I, X = Y standard normal: classical variance of x^2 - 1
  FormStats ident{1.0, 1.0, 1.0};
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2, 2);
  const auto spec = MomentSpec::gaussian_real(cov);  // K = 1
  const auto b = b_covariance(spec, ident);
  CHECK(b(0, 0).real() == doctest::Approx(2.0).epsilon(1e-12));

  // hollow A (omega = 0, theta = tau): B = 2 theta for X = Y unit variance
  FormStats hollow{0.0, 1.8, 1.8};
  const auto bh = b_covariance(spec, hollow);
  CHECK(bh(0, 0).real() == doctest::Approx(2.0 * 1.8).epsilon(1e-12));
}

TEST_CASE("b_covariance is symmetric and matches d_covariance when Y = X") {
  // joint cov of (x; x) for a correlated pair
  Eigen::MatrixXd cxx(2, 2);
  cxx << 1.0, 0.5, 0.5, 1.0;
  Eigen::MatrixXd cov(4, 4);
  cov << cxx, cxx, cxx, cxx;
  const auto spec = MomentSpec::gaussian_real(cov);
  const auto stats = form_stats(tridiagonal_ones(128, 1.0));
  const auto b = b_covariance(spec, stats);
  const auto d = d_covariance(spec, stats);
  for (int l = 0; l < 2; ++l)
    for (int m = 0; m < 2; ++m) {
      CHECK(b(l, m).imag() == doctest::Approx(0.0).epsilon(1e-13));
      CHECK(b(l, m).real() == doctest::Approx(b(m, l).real()).epsilon(1e-13));
      CHECK(b(l, m).real() == doctest::Approx(d(l, m)).epsilon(1e-12));
    }
}

TEST_CASE("d_covariance closed cases") {
  Eigen::MatrixXd cov(4, 4);
  Eigen::MatrixXd cxx(2, 2);
  cxx << 1.0, 0.5, 0.5, 1.0;
  cov << cxx, cxx, cxx, cxx;
  const auto spec = MomentSpec::gaussian_real(cov);

  // K = 1 classical: omega = theta = 1, gamma = 1 -> D = 2
  const auto spec1 =
      MomentSpec::gaussian_real(Eigen::MatrixXd::Identity(2, 2).eval());
  const auto d1 = d_covariance(spec1, FormStats{1.0, 1.0, 1.0});
  CHECK(d1(0, 0) == doctest::Approx(2.0).epsilon(1e-12));

  // zero-diagonal A: D = theta (gamma_lm gamma_ml + gamma_lm^2)
  Eigen::MatrixXd hollow = tridiagonal_ones(256, 0.0);
  const auto hs = form_stats(hollow);
  CHECK(hs.omega == 0.0);
  const auto d = d_covariance(spec, hs);
  CHECK(d(0, 0) == doctest::Approx(hs.theta * 2.0).epsilon(1e-12));
  CHECK(d(0, 1) == doctest::Approx(hs.theta * 2.0 * 0.25).epsilon(1e-12));
}

TEST_CASE("d_covariance: rademacher entries against a Monte Carlo oracle") {
  // E[x^4] = 1 so D = 2 (theta - omega)
  const int n = 2000;
  const Eigen::MatrixXd a = tridiagonal_ones(n, 1.0);
  const auto stats = form_stats(a);
  const double expected = 2.0 * (stats.theta - stats.omega);

  RngStream rng(2025);
  const int reps = 400;
  double sum = 0.0, sumsq = 0.0;
  Eigen::VectorXd rho(1);
  rho << 1.0;
  for (int r = 0; r < reps; ++r) {
    Eigen::MatrixXd x(1, n);
    for (int i = 0; i < n; ++i) x(0, i) = rng.next_rademacher();
    const auto z = z_vector(x, x, a, rho);
    const double v = z.values[0].real();
    sum += v;
    sumsq += v * v;
  }
  const double var = (sumsq - sum * sum / reps) / (reps - 1);
  CHECK(var == doctest::Approx(expected).epsilon(0.25));
}

TEST_CASE("gamma_from_b identities") {
  Eigen::MatrixXd cov = test_cov_xy();
  const auto spec = MomentSpec::gaussian_real(cov);
  const auto stats = form_stats(tridiagonal_ones(512, 1.0));
  Eigen::MatrixXcd b;
  Eigen::MatrixXd ba, bb;
  b_blocks(spec, stats, b, ba, bb);
  const auto gamma = gamma_from_b(b, ba, bb);

  // all-real inputs: imaginary part has zero covariance
  CHECK(gamma.topRightCorner(2, 2).cwiseAbs().maxCoeff() <= 1e-12);
  // G11 + G22 = (Ba + Bb)/2 exactly
  const Eigen::MatrixXd sum =
      gamma.topLeftCorner(2, 2) + gamma.bottomRightCorner(2, 2);
  CHECK((sum - 0.5 * (ba + bb)).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(gamma_from_b(b, ba, Eigen::MatrixXd::Zero(3, 3).eval()),
                  std::invalid_argument);
}

TEST_CASE("estimated moments approach the analytic spec") {
  const Eigen::MatrixXd cov = test_cov_xy();
  const Eigen::MatrixXd chol = cov.llt().matrixL();
  // sample through the Cholesky factor of the joint covariance
  RngStream rng(808);
  const auto sampler = [&](RngStream& r, Eigen::VectorXcd& x,
                           Eigen::VectorXcd& y) {
    Eigen::VectorXd g(4);
    for (int i = 0; i < 4; ++i) g[i] = r.next_gaussian();
    const Eigen::VectorXd v = chol * g;
    x = v.head(2).cast<std::complex<double>>();
    y = v.tail(2).cast<std::complex<double>>();
  };
  const auto est = MomentSpec::estimate(2, sampler, 200000, rng);
  const auto exact = MomentSpec::gaussian_real(cov);
  CHECK(est.draws() == 200000);
  CHECK(est.max_standard_error() < 0.02);
  for (int l = 0; l < 2; ++l) {
    CHECK(std::abs(est.rho(l) - exact.rho(l)) < 0.02);
    for (int m = 0; m < 2; ++m) {
      CHECK(std::abs(est.quad(l, m) - exact.quad(l, m)) < 0.05);
      CHECK(std::abs(est.cross(l, m) - exact.cross(l, m)) < 0.02);
      CHECK(std::abs(est.abs_xx(l, m) - exact.abs_xx(l, m)) < 0.05);
    }
  }

  // PSD of Gamma assembled from estimated moments
  const auto stats = form_stats(tridiagonal_ones(256, 1.0));
  Eigen::MatrixXcd b;
  Eigen::MatrixXd ba, bb;
  b_blocks(est, stats, b, ba, bb);
  const auto gamma = gamma_from_b(b, ba, bb);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma,
                                                    Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("headline CLT: empirical covariance of Z matches B") {
  const int n = 2000, reps = 500;
  const Eigen::MatrixXd a = tridiagonal_ones(n, 1.0);
  const auto stats = form_stats(a);
  const Eigen::MatrixXd cov = test_cov_xy();
  const Eigen::MatrixXd chol = cov.llt().matrixL();
  const auto spec = MomentSpec::gaussian_real(cov);
  const Eigen::MatrixXcd b = b_covariance(spec, stats);

  RngStream rng(606);
  Eigen::MatrixXd zs(reps, 2);
  Eigen::VectorXd rho(2);
  rho << spec.rho(0).real(), spec.rho(1).real();
  for (int r = 0; r < reps; ++r) {
    Eigen::MatrixXd x(2, n), y(2, n);
    Eigen::VectorXd xv, yv;
    for (int i = 0; i < n; ++i) {
      draw_pair(rng, chol, xv, yv);
      x.col(i) = xv;
      y.col(i) = yv;
    }
    const auto z = z_vector(x, y, a, rho);
    zs(r, 0) = z.values[0].real();
    zs(r, 1) = z.values[1].real();
  }
  const Eigen::RowVectorXd mean = zs.colwise().mean();
  Eigen::MatrixXd centered = zs.rowwise() - mean;
  const Eigen::MatrixXd emp = centered.transpose() * centered / (reps - 1);

  for (int l = 0; l < 2; ++l) {
    const double se = std::sqrt(emp(l, l) / reps);
    CHECK(std::abs(mean[l]) <= 4.0 * se);
    for (int m = 0; m < 2; ++m) {
      const double ref = b(l, m).real();
      if (std::abs(ref) >= 0.1) {
        CHECK(emp(l, m) == doctest::Approx(ref).epsilon(0.15));
      }
    }
  }
}

}  // TEST_SUITE
