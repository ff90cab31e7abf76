#include "spikelab/verify.hpp"

#include <algorithm>
#include <cmath>

#include "spikelab/limits.hpp"
#include "spikelab/linalg.hpp"
#include "spikelab/model.hpp"
#include "spikelab/sesquiform.hpp"
#include "spikelab/spectra.hpp"

namespace spikelab {

namespace {

CheckRow make_row(std::string name, double value, double reference,
                  double tolerance) {
  CheckRow row;
  row.name = std::move(name);
  row.value = value;
  row.reference = reference;
  row.tolerance = tolerance;
  row.pass = std::abs(value - reference) <= tolerance;
  return row;
}

const std::vector<double> kAlphaGrid = {4.0, 3.0, 2.0, 0.2, 0.1};
const std::vector<double> kRatioGrid = {0.2, 0.5, 0.9};

}  // namespace

std::vector<CheckRow> verify_identities() {
  std::vector<CheckRow> rows;

  double err_m1 = 0.0, err_m2 = 0.0, err_m3 = 0.0;
  double err_sigma = 0.0, err_s2a = 0.0, err_s2b = 0.0;
  for (double y : kRatioGrid) {
    const MpParams p(y);
    for (double alpha : kAlphaGrid) {
      if (p.in_critical(alpha)) continue;
      const auto closed = m_closed_forms(alpha, p);
      const auto quad = m_transforms(phi(alpha, p), p);
      err_m1 = std::max(err_m1, std::abs(closed.m1 - quad.m1));
      err_m2 = std::max(err_m2, std::abs(closed.m2 - quad.m2));
      err_m3 = std::max(err_m3, std::abs(closed.m3 - quad.m3));

      const auto to = theta_omega(alpha, p);
      const double denom = 1.0 + y * closed.m3 * alpha;
      const double s2 = sigma2(alpha, p);
      err_sigma = std::max(
          err_sigma,
          std::abs(s2 - 2.0 * to.theta * alpha * alpha / (denom * denom)));
      const double d = alpha - 1.0;
      const double sb = s2_binary(alpha, p);
      err_s2a = std::max(err_s2a, std::abs(sb - s2 * y / (d * d)));
      err_s2b = std::max(
          err_s2b, std::abs(sb - 2.0 * (to.theta - to.omega) * alpha * alpha /
                                     (denom * denom)));
    }
  }
  rows.push_back(make_row("m1 closed vs quadrature (grid max err)", err_m1, 0.0, 1e-8));
  rows.push_back(make_row("m2 closed vs quadrature (grid max err)", err_m2, 0.0, 1e-8));
  rows.push_back(make_row("m3 closed vs quadrature (grid max err)", err_m3, 0.0, 1e-8));
  rows.push_back(make_row("sigma2 = 2 theta a^2/(1+y m3 a)^2 (max err)",
                          err_sigma, 0.0, 1e-10));
  rows.push_back(make_row("s2 = sigma2 y/(a-1)^2 (max err)", err_s2a, 0.0, 1e-10));
  rows.push_back(make_row("s2 = 2(theta-omega) a^2/(1+y m3 a)^2 (max err)",
                          err_s2b, 0.0, 1e-10));

  // Stieltjes transform against direct quadrature of the resolvent kernel,
  // 40 points spread over both sides of the support across the y grid
  double err_st = 0.0;
  int points = 0;
  for (double y : kRatioGrid) {
    const MpParams p(y);
    for (int i = 0; i < 7 && points < 40; ++i) {
      const double above = p.edge_high() + 0.1 * std::pow(1.9, i);
      const double quad_above = integrate_mp(
          [above](double x) { return 1.0 / (x - above); }, p, 1e-12);
      err_st = std::max(err_st, std::abs(stieltjes(above, p) - quad_above));
      ++points;
      const double below = p.edge_low() * (i + 0.5) / 7.5;
      const double quad_below = integrate_mp(
          [below](double x) { return 1.0 / (x - below); }, p, 1e-12);
      err_st = std::max(err_st, std::abs(stieltjes(below, p) - quad_below));
      ++points;
    }
  }
  rows.push_back(make_row("stieltjes vs resolvent quadrature (max err)",
                          err_st, 0.0, 1e-8));
  return rows;
}

std::vector<CheckRow> verify_lemma61(std::uint64_t master_seed) {
  const int p = 200, n = 400;
  const MpParams params(0.5);
  const double lambda = 5.0;

  const double m1 = -1.0 - lambda * stieltjes(lambda, params);
  const double target_tr = params.y() * m1;
  const double target_traa =
      params.y() *
      integrate_mp([lambda](double x) { return x * x / ((lambda - x) * (lambda - x)); },
                   params, 1e-12);
  const double ratio =
      params.y() * (1.0 + m1) / (lambda - params.y() * (1.0 + m1));
  const double target_aii = ratio * ratio;

  SpikedModel null_model(SpikeSpec({}), BulkSpectrum::unit(),
                         EntryLaw::gaussian(), params);
  std::vector<double> v1, v2, v3;
  for (std::uint64_t s = 0; s < 8; ++s) {
    RngStream rng = RngStream::derived(master_seed, s);
    const auto data = sample_data(null_model, p, n, rng);
    const Eigen::MatrixXd x2 =
        data.real / std::sqrt(static_cast<double>(n));
    const auto stats = resolvent_stats(x2, lambda);
    v1.push_back(stats.tr_a_over_n);
    v2.push_back(stats.tr_aa_over_n);
    v3.push_back(stats.sum_aii_sq_over_n);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  };

  std::vector<CheckRow> rows;
  rows.push_back(make_row("tr A / n (median of 8 seeds)", median(v1),
                          target_tr, 0.02));
  rows.push_back(make_row("sum a_ii^2 / n (median of 8 seeds)", median(v3),
                          target_aii, 0.006));
  rows.push_back(make_row("tr A A* / n (median of 8 seeds)", median(v2),
                          target_traa, 0.15 * target_traa));
  return rows;
}

namespace {

Eigen::MatrixXd tridiagonal(int n, double diag) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a.diagonal().setConstant(diag);
  for (int i = 0; i + 1 < n; ++i) {
    a(i, i + 1) = 1.0;
    a(i + 1, i) = 1.0;
  }
  return a;
}

Eigen::MatrixXd sesquiform_joint_cov() {
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

}  // namespace

std::vector<CheckRow> verify_sesquiform(std::uint64_t master_seed) {
  std::vector<CheckRow> rows;
  const int n = 2000, reps = 500;

  // --- K = 2 sesquilinear case against B ---
  {
    const Eigen::MatrixXd a = tridiagonal(n, 1.0);
    const auto stats = form_stats(a);
    const Eigen::MatrixXd cov = sesquiform_joint_cov();
    const Eigen::MatrixXd chol = cov.llt().matrixL();
    const auto spec = MomentSpec::gaussian_real(cov);
    const Eigen::MatrixXcd b = b_covariance(spec, stats);

    Eigen::MatrixXd zs(reps, 2);
    Eigen::VectorXd rho(2);
    rho << spec.rho(0).real(), spec.rho(1).real();
    for (int r = 0; r < reps; ++r) {
      RngStream rng = RngStream::derived(master_seed, r);
      Eigen::MatrixXd x(2, n), y(2, n);
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd g(4);
        for (int q = 0; q < 4; ++q) g[q] = rng.next_gaussian();
        const Eigen::VectorXd v = chol * g;
        x.col(i) = v.head(2);
        y.col(i) = v.tail(2);
      }
      const auto z = z_vector(x, y, a, rho);
      zs(r, 0) = z.values[0].real();
      zs(r, 1) = z.values[1].real();
    }
    const Eigen::RowVectorXd mean = zs.colwise().mean();
    const Eigen::MatrixXd centered = zs.rowwise() - mean;
    const Eigen::MatrixXd emp = centered.transpose() * centered / (reps - 1);
    for (int l = 0; l < 2; ++l)
      for (int m = l; m < 2; ++m) {
        const double ref = b(l, m).real();
        if (std::abs(ref) < 0.1) continue;
        rows.push_back(make_row("emp cov Z(" + std::to_string(l + 1) + "," +
                                    std::to_string(m + 1) + ") vs B",
                                emp(l, m), ref, 0.15 * std::abs(ref)));
      }
  }

  // --- identity weight: classical CLT variance 2 ---
  {
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < reps; ++r) {
      RngStream rng = RngStream::derived(master_seed ^ 0xABCD, r);
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double g = rng.next_gaussian();
        acc += g * g - 1.0;
      }
      const double z = acc / std::sqrt(static_cast<double>(n));
      sum += z;
      sumsq += z * z;
    }
    const double var = (sumsq - sum * sum / reps) / (reps - 1);
    rows.push_back(make_row("identity-A classical variance", var, 2.0, 0.10 * 2.0));
  }

  // --- zero-diagonal weight: simplified D ---
  {
    const Eigen::MatrixXd a = tridiagonal(n, 0.0);
    const auto stats = form_stats(a);
    Eigen::MatrixXd cxx(2, 2);
    cxx << 1.0, 0.5, 0.5, 1.0;
    Eigen::MatrixXd joint(4, 4);
    joint << cxx, cxx, cxx, cxx;
    const auto spec = MomentSpec::gaussian_real(joint);
    const Eigen::MatrixXd d = d_covariance(spec, stats);
    const Eigen::MatrixXd chol = cxx.llt().matrixL();

    Eigen::MatrixXd zs(reps, 2);
    Eigen::VectorXd rho(2);
    rho << 1.0, 1.0;
    for (int r = 0; r < reps; ++r) {
      RngStream rng = RngStream::derived(master_seed ^ 0x1234, r);
      Eigen::MatrixXd x(2, n);
      for (int i = 0; i < n; ++i) {
        Eigen::Vector2d g(rng.next_gaussian(), rng.next_gaussian());
        x.col(i) = chol * g;
      }
      const auto z = z_vector(x, x, a, rho);
      zs(r, 0) = z.values[0].real();
      zs(r, 1) = z.values[1].real();
    }
    const Eigen::RowVectorXd mean = zs.colwise().mean();
    const Eigen::MatrixXd centered = zs.rowwise() - mean;
    const Eigen::MatrixXd emp = centered.transpose() * centered / (reps - 1);
    for (int l = 0; l < 2; ++l)
      for (int m = l; m < 2; ++m) {
        rows.push_back(make_row("zero-diagonal D(" + std::to_string(l + 1) +
                                    "," + std::to_string(m + 1) + ")",
                                emp(l, m), d(l, m), 0.15 * std::abs(d(l, m))));
      }
  }
  return rows;
}

}  // namespace spikelab
