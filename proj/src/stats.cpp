#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spikelab/montecarlo.hpp"

namespace spikelab {

namespace {

// Kolmogorov distribution Q(t) = P(K > t), 100-term series; the dual theta
// form is used for small t where the alternating series loses accuracy.
double kolmogorov_q(double t) {
  if (t <= 0.0) return 1.0;
  constexpr int kTerms = 100;
  if (t < 1.0) {
    // cdf = sqrt(2 pi)/t * sum exp(-(2k-1)^2 pi^2 / (8 t^2))
    double cdf = 0.0;
    const double c = M_PI * M_PI / (8.0 * t * t);
    for (int k = 1; k <= kTerms; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * c);
      cdf += term;
      if (term < 1e-18) break;
    }
    cdf *= std::sqrt(2.0 * M_PI) / t;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  for (int k = 1; k <= kTerms; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    q += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

}  // namespace

std::pair<double, double> ks_test(std::vector<double> sample,
                                  const std::function<double(double)>& cdf) {
  const std::size_t n = sample.size();
  if (n < 8)
    throw std::invalid_argument("ks_test: degenerate sample (size < 8)");
  std::sort(sample.begin(), sample.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return {d, kolmogorov_q(std::sqrt(static_cast<double>(n)) * d)};
}

std::pair<double, double> ks_test(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 8 || b.size() < 8)
    throw std::invalid_argument("ks_test: degenerate sample (size < 8)");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  return {d, kolmogorov_q(std::sqrt(ne) * d)};
}

ColumnSummary summarize(const std::vector<double>& sample) {
  const std::size_t n = sample.size();
  if (n < 2) throw std::invalid_argument("summarize: need at least 2 values");
  const double nn = static_cast<double>(n);

  ColumnSummary out;
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / nn;
  out.mean = mean;

  // power sums of the centered sample keep the leave-one-out pass O(n)
  std::vector<double> c(n);
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = sample[i] - mean;
    s1 += c[i];
    s2 += c[i] * c[i];
    s3 += c[i] * c[i] * c[i];
  }
  out.variance = s2 / (nn - 1.0);
  if (s2 <= 0.0) {
    out.skew_defined = false;
    out.skewness = 0.0;
    return out;
  }
  const double m2 = s2 / nn;
  out.skewness = (s3 / nn) / std::pow(m2, 1.5);

  if (n < 3) return out;
  std::vector<double> jk_mean(n), jk_var(n), jk_skew(n);
  const double n1 = nn - 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = c[i];
    const double t1 = s1 - x, t2 = s2 - x * x, t3 = s3 - x * x * x;
    const double mu = t1 / n1;
    const double v2 = t2 - n1 * mu * mu;  // sum of squared deviations
    jk_mean[i] = mu;
    jk_var[i] = v2 / (n1 - 1.0);
    const double mm2 = v2 / n1;
    const double mm3 = t3 / n1 - 3.0 * mu * t2 / n1 + 2.0 * mu * mu * mu;
    jk_skew[i] = mm2 > 0.0 ? mm3 / std::pow(mm2, 1.5) : 0.0;
  }
  auto jackknife_se = [&](const std::vector<double>& th) {
    const double bar =
        std::accumulate(th.begin(), th.end(), 0.0) / nn;
    double acc = 0.0;
    for (double t : th) acc += (t - bar) * (t - bar);
    return std::sqrt((nn - 1.0) / nn * acc);
  };
  out.mean_se = jackknife_se(jk_mean);
  out.variance_se = jackknife_se(jk_var);
  out.skewness_se = jackknife_se(jk_skew);
  return out;
}

MomentsReport empirical_summary(const ReplicationSet& reps) {
  if (reps.count() < 30)
    throw std::invalid_argument(
        "empirical_summary: need at least 30 replications");
  MomentsReport out;
  for (int c = 0; c < static_cast<int>(reps.columns.size()); ++c) {
    out.columns.push_back(summarize(reps.column(c)));
  }

  // group covariance per spike
  std::map<int, std::vector<int>> group_cols;
  for (int c = 0; c < static_cast<int>(reps.columns.size()); ++c) {
    group_cols[reps.columns[c].spike_index].push_back(c);
  }
  for (const auto& [k, cols] : group_cols) {
    const int g = static_cast<int>(cols.size());
    Eigen::MatrixXd block(reps.count(), g);
    for (int c = 0; c < g; ++c)
      block.col(c) = reps.deltas.col(cols[c]);
    const Eigen::RowVectorXd mean = block.colwise().mean();
    block.rowwise() -= mean;
    out.group_covariance[k] =
        block.transpose() * block / static_cast<double>(reps.count() - 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// kernel density estimation

namespace {

double silverman_bandwidth(std::vector<double> v) {
  const double n = static_cast<double>(v.size());
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  const double sd = std::sqrt(acc / (n - 1.0));
  std::sort(v.begin(), v.end());
  const auto quantile = [&](double q) {
    const double pos = q * (n - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - lo;
    return lo + 1 < v.size() ? v[lo] * (1.0 - frac) + v[lo + 1] * frac : v[lo];
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0))
    throw std::invalid_argument("kde: degenerate (zero-variance) sample");
  return 0.9 * spread * std::pow(n, -0.2);
}

}  // namespace

KdeGrid kde(const std::vector<double>& sample, double bandwidth, int grid_size) {
  if (sample.size() < 30)
    throw std::invalid_argument("kde: need at least 30 points");
  const double h = bandwidth > 0.0 ? bandwidth : silverman_bandwidth(sample);
  const auto [mn, mx] = std::minmax_element(sample.begin(), sample.end());
  const double lo = *mn - 3.0 * h, hi = *mx + 3.0 * h;

  KdeGrid out;
  out.bandwidth = h;
  out.x.resize(grid_size);
  out.density.assign(grid_size, 0.0);
  const double step = (hi - lo) / (grid_size - 1);
  for (int g = 0; g < grid_size; ++g) out.x[g] = lo + g * step;
  const double norm = 1.0 / (sample.size() * h * std::sqrt(2.0 * M_PI));
  for (double v : sample) {
    for (int g = 0; g < grid_size; ++g) {
      const double z = (out.x[g] - v) / h;
      out.density[g] += std::exp(-0.5 * z * z);
    }
  }
  for (double& d : out.density) d *= norm;
  return out;
}

Kde2Grid kde2(const std::vector<std::array<double, 2>>& sample,
              double bandwidth_x, double bandwidth_y, int grid_size) {
  if (sample.size() < 30)
    throw std::invalid_argument("kde2: need at least 30 points");
  const double n = static_cast<double>(sample.size());
  std::vector<double> xs(sample.size()), ys(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    xs[i] = sample[i][0];
    ys[i] = sample[i][1];
  }
  auto sd_of = [&](const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / (n - 1.0));
  };
  // multivariate Silverman rule for d = 2: h_i = sd_i * n^(-1/6)
  const double hx = bandwidth_x > 0.0 ? bandwidth_x : sd_of(xs) * std::pow(n, -1.0 / 6.0);
  const double hy = bandwidth_y > 0.0 ? bandwidth_y : sd_of(ys) * std::pow(n, -1.0 / 6.0);
  if (!(hx > 0.0) || !(hy > 0.0))
    throw std::invalid_argument("kde2: degenerate (zero-variance) sample");

  Kde2Grid out;
  out.bandwidth_x = hx;
  out.bandwidth_y = hy;
  const auto [xmn, xmx] = std::minmax_element(xs.begin(), xs.end());
  const auto [ymn, ymx] = std::minmax_element(ys.begin(), ys.end());
  const double xlo = *xmn - 3.0 * hx, xhi = *xmx + 3.0 * hx;
  const double ylo = *ymn - 3.0 * hy, yhi = *ymx + 3.0 * hy;
  out.x.resize(grid_size);
  out.y.resize(grid_size);
  for (int g = 0; g < grid_size; ++g) {
    out.x[g] = xlo + g * (xhi - xlo) / (grid_size - 1);
    out.y[g] = ylo + g * (yhi - ylo) / (grid_size - 1);
  }
  out.density = Eigen::MatrixXd::Zero(grid_size, grid_size);

  // product kernels, separable accumulation per sample point
  Eigen::VectorXd kx(grid_size), ky(grid_size);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (int g = 0; g < grid_size; ++g) {
      const double zx = (out.x[g] - xs[i]) / hx;
      kx[g] = std::exp(-0.5 * zx * zx);
      const double zy = (out.y[g] - ys[i]) / hy;
      ky[g] = std::exp(-0.5 * zy * zy);
    }
    out.density += kx * ky.transpose();
  }
  out.density *= 1.0 / (n * hx * hy * 2.0 * M_PI);
  return out;
}

}  // namespace spikelab
