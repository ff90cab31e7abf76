#include "spikelab/quadrature.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace spikelab {
namespace {

template <int N>
struct GaussRule {
  std::array<double, N> node;
  std::array<double, N> weight;
};

// Legendre nodes by Newton iteration on P_n; weights 2/((1-x^2) P_n'(x)^2).
template <int N>
GaussRule<N> make_rule() {
  GaussRule<N> r{};
  for (int i = 0; i < N; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (N + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= N; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = N * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.node[i] = x;
    r.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const GaussRule<7>& rule7() {
  static const GaussRule<7> r = make_rule<7>();
  return r;
}
const GaussRule<15>& rule15() {
  static const GaussRule<15> r = make_rule<15>();
  return r;
}

template <int N>
double apply(const GaussRule<N>& r, const std::function<double(double)>& f,
             double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < N; ++i) s += r.weight[i] * f(c + h * r.node[i]);
  return s * h;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_panels) {
  if (a == b) return 0.0;

  struct Panel {
    double a, b;
  };
  std::vector<Panel> work{{a, b}};
  const double span = std::abs(b - a);
  double total = 0.0;
  int panels = 1;
  while (!work.empty()) {
    Panel p = work.back();
    work.pop_back();
    const double coarse = apply(rule7(), f, p.a, p.b);
    const double fine = apply(rule15(), f, p.a, p.b);
    const double err = std::abs(fine - coarse);
    const double share = abs_tol * std::abs(p.b - p.a) / span;
    if (err <= share || panels >= max_panels) {
      total += fine;
    } else {
      const double mid = 0.5 * (p.a + p.b);
      work.push_back({p.a, mid});
      work.push_back({mid, p.b});
      ++panels;
    }
  }
  return total;
}

}  // namespace spikelab
