#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "spikelab/errors.hpp"

namespace spikelab {

// Dimension-to-sample ratio of the Marchenko-Pastur regime, restricted to
// 0 < y < 1.  Carries the derived support edges (1 -+ sqrt(y))^2 and the
// critical interval [1 - sqrt(y), 1 + sqrt(y)].
class MpParams {
 public:
  explicit MpParams(double y);

  double y() const noexcept { return y_; }
  double edge_low() const noexcept { return edge_low_; }
  double edge_high() const noexcept { return edge_high_; }
  double critical_low() const noexcept { return crit_low_; }
  double critical_high() const noexcept { return crit_high_; }

  bool in_critical(double alpha) const noexcept {
    return alpha >= crit_low_ && alpha <= crit_high_;
  }
  bool in_support(double x) const noexcept {
    return x >= edge_low_ && x <= edge_high_;
  }

 private:
  double y_, edge_low_, edge_high_, crit_low_, crit_high_;
};

struct BulkAtom {
  double value;   // eigenvalue level t_j > 0
  double weight;  // probability mass w_j
};

// Limiting bulk population spectrum H as a finite atomic measure.
class BulkSpectrum {
 public:
  explicit BulkSpectrum(std::vector<BulkAtom> atoms);

  static BulkSpectrum unit();  // point mass at 1

  const std::vector<BulkAtom>& atoms() const noexcept { return atoms_; }
  bool is_unit() const noexcept;

 private:
  std::vector<BulkAtom> atoms_;  // sorted ascending by value
};

// Ordered disjoint closed intervals on the real line.
struct SupportSet {
  std::vector<std::pair<double, double>> intervals;

  bool contains(double x) const noexcept;
  // Distance to the nearest interval; 0 inside.
  double distance(double x) const noexcept;
};

// m1, m2, m3 evaluated at a point outside the support.
struct MTransforms {
  double m1, m2, m3;
};

enum class Side { Above, Below };

// Support edges a_y = (1 - sqrt(y))^2, b_y = (1 + sqrt(y))^2.
std::pair<double, double> mp_support(const MpParams& params);

// Marchenko-Pastur density; zero outside [a_y, b_y].
double mp_density(double x, const MpParams& params);

// Stieltjes transform m(z) = int (x - z)^-1 F_y(dx).  The complex branch has
// Im m(z) > 0 for Im z > 0; the real overload continues it from above and
// rejects points inside the support.
std::complex<double> stieltjes(std::complex<double> z, const MpParams& params);
double stieltjes(double lambda, const MpParams& params);

// Integrates g against F_y with the sine substitution absorbing the
// square-root endpoint factors.
double integrate_mp(const std::function<double(double)>& g,
                    const MpParams& params, double abs_tol = 1e-12);

// m1 from the Stieltjes identity, m2 and m3 by adaptive quadrature.
MTransforms m_transforms(double lambda, const MpParams& params);

// Closed forms of the m-transforms at lambda = phi(alpha).
MTransforms m_closed_forms(double alpha, const MpParams& params);

// Spike map phi(alpha) = alpha + y*alpha/(alpha - 1).
double phi(double alpha, const MpParams& params);

// Inverse of phi on the requested side of the bulk.
double phi_inverse(double lambda, const MpParams& params, Side side);

struct PsiResult {
  double value;
  bool separated;  // psi(alpha) outside the support of F
};

// Generalized spike map psi(alpha) = alpha [1 + y * int t/(alpha - t) H(dt)].
// Non-separated spikes yield a value with separated = false.
PsiResult psi(double alpha, const MpParams& params, const BulkSpectrum& bulk);

// Support of the limiting ESD for the generalized bulk, located by scanning
// the inverse map lambda(m) = -1/m + y * int t/(1 + t m) H(dt) for extrema.
SupportSet general_support(const MpParams& params, const BulkSpectrum& bulk);

}  // namespace spikelab
