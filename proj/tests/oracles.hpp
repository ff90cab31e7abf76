// Test-side reference integrator, independent of the library's
// Gauss-Legendre engine: adaptive Simpson with recursive bisection.
#pragma once

#include <cmath>
#include <functional>

namespace oracle {

inline double simpson_panel(const std::function<double(double)>& f, double a,
                            double fa, double b, double fb, double m,
                            double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double fa, double b, double fb, double m, double fm,
                          double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_panel(f, a, fa, m, fm, lm, flm);
  const double right = simpson_panel(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  const double half = std::max(0.5 * tol, 1e-17);  // roundoff floor
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, half, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, half, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  return simpson_rec(f, a, fa, b, fb, m, fm, simpson_panel(f, a, fa, b, fb, m, fm),
                     tol, 20);
}

// integral of g against the Marchenko-Pastur law, sine substitution
inline double mp_integral(const std::function<double(double)>& g, double y,
                          double tol = 1e-12) {
  const double r = std::sqrt(y);
  const double a = (1.0 - r) * (1.0 - r), b = (1.0 + r) * (1.0 + r);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  return integrate(
      [&](double t) {
        const double x = c + h * std::sin(t);
        const double w = h * std::cos(t);
        return g(x) * w * w / (2.0 * M_PI * x * y);
      },
      -0.5 * M_PI, 0.5 * M_PI, tol);
}

}  // namespace oracle
