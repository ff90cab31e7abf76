#pragma once

#include <functional>

namespace spikelab {

// Adaptive Gauss-Legendre integration with a 7/15-point error estimate.
// Panels are bisected until the local estimate meets the tolerance share;
// max_panels caps the total panel count.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_panels = 1 << 14);

}  // namespace spikelab
