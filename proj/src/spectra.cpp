#include "spikelab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spikelab/quadrature.hpp"

namespace spikelab {

MpParams::MpParams(double y) : y_(y) {
  if (!(y > 0.0) || !(y < 1.0)) {
    throw std::invalid_argument("MpParams: y must lie in (0, 1), got " +
                                std::to_string(y));
  }
  const double r = std::sqrt(y);
  edge_low_ = (1.0 - r) * (1.0 - r);
  edge_high_ = (1.0 + r) * (1.0 + r);
  crit_low_ = 1.0 - r;
  crit_high_ = 1.0 + r;
}

BulkSpectrum::BulkSpectrum(std::vector<BulkAtom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("BulkSpectrum: no atoms");
  std::sort(atoms_.begin(), atoms_.end(),
            [](const BulkAtom& a, const BulkAtom& b) { return a.value < b.value; });
  double mass = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!(atoms_[i].value > 0.0))
      throw std::invalid_argument("BulkSpectrum: atom values must be positive");
    if (!(atoms_[i].weight > 0.0))
      throw std::invalid_argument("BulkSpectrum: atom weights must be positive");
    if (i > 0 && !(atoms_[i].value > atoms_[i - 1].value))
      throw std::invalid_argument("BulkSpectrum: atom values must be distinct");
    mass += atoms_[i].weight;
  }
  if (std::abs(mass - 1.0) > 1e-12)
    throw std::invalid_argument("BulkSpectrum: weights must sum to 1");
}

BulkSpectrum BulkSpectrum::unit() { return BulkSpectrum({{1.0, 1.0}}); }

bool BulkSpectrum::is_unit() const noexcept {
  return atoms_.size() == 1 && atoms_[0].value == 1.0;
}

bool SupportSet::contains(double x) const noexcept {
  for (const auto& [lo, hi] : intervals)
    if (x >= lo && x <= hi) return true;
  return false;
}

double SupportSet::distance(double x) const noexcept {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& [lo, hi] : intervals) {
    if (x >= lo && x <= hi) return 0.0;
    d = std::min(d, std::min(std::abs(x - lo), std::abs(x - hi)));
  }
  return d;
}

std::pair<double, double> mp_support(const MpParams& params) {
  return {params.edge_low(), params.edge_high()};
}

double mp_density(double x, const MpParams& params) {
  const double a = params.edge_low(), b = params.edge_high();
  if (x <= a || x >= b) return 0.0;
  return std::sqrt((x - a) * (b - x)) / (2.0 * M_PI * x * params.y());
}

std::complex<double> stieltjes(std::complex<double> z, const MpParams& params) {
  const double y = params.y();
  const std::complex<double> u = (y + 1.0 - z) * (y + 1.0 - z) - 4.0 * y;
  std::complex<double> root = std::sqrt(u);
  if (root.imag() < 0.0) root = -root;
  if (z.imag() == 0.0) {
    // continuation from the upper half-plane: sign of Im u there is the sign
    // of d/dz (z - a)(z - b) = 2z - (a + b)
    const double x = z.real();
    const double s = 2.0 * x - (params.edge_low() + params.edge_high());
    root = std::abs(root) * (s >= 0.0 ? 1.0 : -1.0);
  }
  return (1.0 - y - z + root) / (2.0 * y * z);
}

double stieltjes(double lambda, const MpParams& params) {
  if (params.in_support(lambda)) {
    throw SupportDomainError("stieltjes: lambda = " + std::to_string(lambda) +
                             " lies inside the support [" +
                             std::to_string(params.edge_low()) + ", " +
                             std::to_string(params.edge_high()) + "]");
  }
  return stieltjes(std::complex<double>(lambda, 0.0), params).real();
}

double integrate_mp(const std::function<double(double)>& g,
                    const MpParams& params, double abs_tol) {
  const double a = params.edge_low(), b = params.edge_high();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double y = params.y();
  auto f = [&](double t) {
    const double x = c + h * std::sin(t);
    const double w = h * std::cos(t);
    return g(x) * w * w / (2.0 * M_PI * x * y);
  };
  return integrate(f, -0.5 * M_PI, 0.5 * M_PI, abs_tol);
}

MTransforms m_transforms(double lambda, const MpParams& params) {
  if (params.in_support(lambda)) {
    throw SupportDomainError("m_transforms: lambda inside the support");
  }
  MTransforms out{};
  out.m1 = -1.0 - lambda * stieltjes(lambda, params);
  out.m2 = integrate_mp(
      [&](double x) { return x * x / ((lambda - x) * (lambda - x)); }, params,
      1e-12);
  out.m3 = integrate_mp(
      [&](double x) { return x / ((lambda - x) * (lambda - x)); }, params,
      1e-12);
  return out;
}

MTransforms m_closed_forms(double alpha, const MpParams& params) {
  if (params.in_critical(alpha)) {
    throw CriticalIntervalError(alpha, params.critical_low(),
                                params.critical_high());
  }
  const double y = params.y();
  const double d = alpha - 1.0;
  MTransforms out{};
  out.m1 = 1.0 / d;
  out.m2 = (d + y * (alpha + 1.0)) / (d * (d * d - y));
  out.m3 = 1.0 / (d * d - y);
  return out;
}

double phi(double alpha, const MpParams& params) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("phi: alpha must be positive");
  if (params.in_critical(alpha)) {
    throw CriticalIntervalError(alpha, params.critical_low(),
                                params.critical_high());
  }
  return alpha + params.y() * alpha / (alpha - 1.0);
}

double phi_inverse(double lambda, const MpParams& params, Side side) {
  if (side == Side::Above && !(lambda > params.edge_high()))
    throw SupportDomainError("phi_inverse: lambda must exceed the upper edge");
  if (side == Side::Below &&
      !(lambda > 0.0 && lambda < params.edge_low()))
    throw SupportDomainError(
        "phi_inverse: lambda must lie in (0, lower edge)");
  // roots of alpha^2 - alpha(lambda + 1 - y) + lambda = 0
  const double s = lambda + 1.0 - params.y();
  const double disc = s * s - 4.0 * lambda;
  const double root = std::sqrt(std::max(disc, 0.0));
  const double hi = 0.5 * (s + root);
  const double lo = lambda / hi;
  return side == Side::Above ? hi : lo;
}

PsiResult psi(double alpha, const MpParams& params, const BulkSpectrum& bulk) {
  double sum = 0.0;
  for (const auto& atom : bulk.atoms()) {
    if (alpha == atom.value) {
      throw std::invalid_argument("psi: alpha coincides with bulk atom " +
                                  std::to_string(atom.value));
    }
    sum += atom.weight * atom.value / (alpha - atom.value);
  }
  PsiResult out{};
  out.value = alpha * (1.0 + params.y() * sum);
  out.separated = !general_support(params, bulk).contains(out.value);
  return out;
}

namespace {

// Inverse Stieltjes map of the companion transform and its derivative.
double lambda_of_m(double m, double y, const std::vector<BulkAtom>& atoms) {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight * a.value / (1.0 + a.value * m);
  return -1.0 / m + y * s;
}

double dlambda_of_m(double m, double y, const std::vector<BulkAtom>& atoms) {
  double s = 0.0;
  for (const auto& a : atoms) {
    const double q = 1.0 + a.value * m;
    s += a.weight * a.value * a.value / (q * q);
  }
  return 1.0 / (m * m) - y * s;
}

}  // namespace

SupportSet general_support(const MpParams& params, const BulkSpectrum& bulk) {
  const double y = params.y();
  const auto& atoms = bulk.atoms();

  // poles of the inverse map, ascending (atoms are sorted ascending)
  std::vector<double> poles;
  for (const auto& a : atoms) poles.push_back(-1.0 / a.value);
  poles.push_back(0.0);

  auto dl = [&](double m) { return dlambda_of_m(m, y, atoms); };

  constexpr int kSamplesPerSide = 2048;  // 4096 per segment
  constexpr double kEps = 1e-12;
  constexpr double kFar = 1e8;

  std::vector<double> edges;
  const int nseg = static_cast<int>(poles.size());
  for (int seg = 0; seg < nseg; ++seg) {
    const bool leftmost = (seg == 0);
    const double right_pole = poles[seg];
    const double left_pole = leftmost ? 0.0 : poles[seg - 1];
    const double width =
        leftmost ? kFar : (right_pole - left_pole);
    const double scale = std::abs(right_pole) + 1.0;

    // log-clustered offsets from each end of the segment
    std::vector<double> nodes;
    nodes.reserve(2 * kSamplesPerSide);
    const double off_max = 0.5 * width;
    const double off_min = std::min(kEps * scale, 0.1 * off_max);
    const double ratio = std::log(off_max / off_min);
    for (int i = 0; i < kSamplesPerSide; ++i) {
      const double t = static_cast<double>(i) / (kSamplesPerSide - 1);
      const double off = off_min * std::exp(ratio * t);
      nodes.push_back(right_pole - off);
      if (!leftmost) nodes.push_back(left_pole + off);
    }
    std::sort(nodes.begin(), nodes.end());

    double prev_m = nodes.front();
    double prev_v = dl(prev_m);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const double m = nodes[i];
      const double v = dl(m);
      if (v == 0.0) {
        edges.push_back(lambda_of_m(m, y, atoms));
        prev_m = m;
        prev_v = v;
        continue;
      }
      if ((prev_v > 0.0 && v < 0.0) || (prev_v < 0.0 && v > 0.0)) {
        double lo = prev_m, hi = m;
        double flo = prev_v;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = dl(mid);
          if ((flo > 0.0) == (fm > 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
          if (hi - lo < 1e-15 * (std::abs(lo) + 1.0)) break;
        }
        edges.push_back(lambda_of_m(0.5 * (lo + hi), y, atoms));
      }
      prev_m = m;
      prev_v = v;
    }
  }

  std::sort(edges.begin(), edges.end());
  if (edges.size() % 2 != 0) {
    throw std::runtime_error("general_support: unpaired support edges");
  }
  SupportSet out;
  for (std::size_t i = 0; i + 1 < edges.size(); i += 2) {
    out.intervals.emplace_back(edges[i], edges[i + 1]);
  }
  return out;
}

}  // namespace spikelab
