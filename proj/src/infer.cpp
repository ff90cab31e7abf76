#include "spikelab/infer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spikelab/limits.hpp"

namespace spikelab {

namespace {

// two-sided normal quantile for the given confidence level
double z_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("confidence must lie in (0, 1)");
  const double target = 0.5 * (1.0 + confidence);
  // Newton on the normal cdf; monotone and well-conditioned here
  double z = 1.0;
  for (int i = 0; i < 80; ++i) {
    const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    const double step = (cdf - target) / pdf;
    z -= step;
    if (std::abs(step) < 1e-14) break;
  }
  return z;
}

double variance_for(double alpha, const MpParams& params, const EntryLaw& law) {
  if (law.family == EntryFamily::Rademacher) return s2_binary(alpha, params);
  if (law.family == EntryFamily::Custom) {
    const auto to = theta_omega(alpha, params);
    const double m3 = m_closed_forms(alpha, params).m3;
    const double scale = 1.0 / (1.0 + params.y() * m3 * alpha);
    return scale * scale * (2.0 * to.theta + law.beta * to.omega) * alpha * alpha;
  }
  return sigma2(alpha, params);
}

std::string variance_name(const EntryLaw& law) {
  switch (law.family) {
    case EntryFamily::Rademacher:
      return "binary";
    case EntryFamily::Custom:
      return "custom";
    default:
      return "gaussian";
  }
}

}  // namespace

std::vector<SpikeCandidate> detect_spikes(const std::vector<double>& eigs,
                                          const MpParams& params,
                                          const BulkSpectrum& bulk) {
  const SupportSet support = general_support(params, bulk);
  const double top = support.intervals.back().second;
  const double bottom = support.intervals.front().first;

  std::vector<SpikeCandidate> out;
  for (double lam : eigs) {
    bool outside = true;
    for (const auto& [lo, hi] : support.intervals) {
      const double margin = 0.05 * (hi - lo);
      if (lam >= lo - margin && lam <= hi + margin) {
        outside = false;
        break;
      }
    }
    if (!outside) continue;
    SpikeCandidate c;
    c.lambda = lam;
    if (lam > top)
      c.tag = BandTag::Above;
    else if (lam < bottom)
      c.tag = BandTag::Below;
    else
      c.tag = BandTag::InterBand;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(),
            [](const SpikeCandidate& a, const SpikeCandidate& b) {
              return a.lambda > b.lambda;
            });
  return out;
}

SpikeEstimate estimate_spike(double lambda_obs, int n, const MpParams& params,
                             const EntryLaw& variance_model, double confidence) {
  const Side side =
      lambda_obs > params.edge_high() ? Side::Above : Side::Below;
  if (side == Side::Below && !(lambda_obs > 0.0 && lambda_obs < params.edge_low()))
    throw SupportDomainError(
        "estimate_spike: lambda lies inside the support; no spike maps there");

  SpikeEstimate est;
  est.lambda_observed = lambda_obs;
  est.side = side;
  est.confidence = confidence;
  est.variance_model = variance_name(variance_model);
  est.alpha_hat = phi_inverse(lambda_obs, params, side);

  const double sd = std::sqrt(variance_for(est.alpha_hat, params, variance_model));
  const double half = z_quantile(confidence) * sd / std::sqrt(static_cast<double>(n));
  est.lambda_ci_lo = lambda_obs - half;
  est.lambda_ci_hi = lambda_obs + half;

  // clamp interval ends at the support edge before inverting; phi_inverse is
  // monotone increasing on each side
  const double eps = 1e-12;
  if (side == Side::Above) {
    const double lo = std::max(est.lambda_ci_lo,
                               params.edge_high() * (1.0 + eps));
    est.ci_lo = phi_inverse(lo, params, side);
    est.ci_hi = phi_inverse(est.lambda_ci_hi, params, side);
  } else {
    const double hi = std::min(est.lambda_ci_hi,
                               params.edge_low() * (1.0 - eps));
    const double lo = std::max(est.lambda_ci_lo, eps);
    est.ci_lo = phi_inverse(lo, params, side);
    est.ci_hi = phi_inverse(hi, params, side);
  }
  return est;
}

std::vector<int> cluster_candidates(const std::vector<SpikeCandidate>& candidates,
                                    int n, const MpParams& params,
                                    const EntryLaw& variance_model) {
  std::vector<int> sizes;
  std::size_t i = 0;
  while (i < candidates.size()) {
    std::size_t j = i + 1;
    while (j < candidates.size() && candidates[j].tag == candidates[i].tag) {
      double sd_hat;
      try {
        const Side side =
            candidates[i].tag == BandTag::Below ? Side::Below : Side::Above;
        const double a = phi_inverse(candidates[j - 1].lambda, params, side);
        sd_hat = std::sqrt(variance_for(a, params, variance_model));
      } catch (const std::exception&) {
        break;
      }
      const double gap = std::abs(candidates[j - 1].lambda - candidates[j].lambda);
      if (gap > 3.0 * sd_hat / std::sqrt(static_cast<double>(n))) break;
      ++j;
    }
    sizes.push_back(static_cast<int>(j - i));
    i = j;
  }
  return sizes;
}

}  // namespace spikelab
