#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles.hpp"
#include "spikelab/quadrature.hpp"
#include "spikelab/spectra.hpp"

using namespace spikelab;

TEST_SUITE("spectra") {

TEST_CASE("MpParams validates the ratio") {
  CHECK_THROWS_AS(MpParams(0.0), std::invalid_argument);
  CHECK_THROWS_AS(MpParams(1.0), std::invalid_argument);
  CHECK_THROWS_AS(MpParams(-0.3), std::invalid_argument);
  const MpParams p(0.5);
  CHECK(p.critical_low() == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-14));
  CHECK(p.critical_high() == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("mp_support") {
  const auto [a, b] = mp_support(MpParams(0.5));
  CHECK(a == doctest::Approx(0.08578643762690492).epsilon(1e-14));
  CHECK(b == doctest::Approx(2.914213562373095).epsilon(1e-14));

  const auto [a25, b25] = mp_support(MpParams(0.25));
  CHECK(a25 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(b25 == doctest::Approx(2.25).epsilon(1e-14));

  const auto [a0, b0] = mp_support(MpParams(1e-12));
  CHECK(a0 == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(b0 == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(a0 < b0);
}

TEST_CASE("mp_density values and normalization") {
  const MpParams p(0.5);
  CHECK(mp_density(p.edge_low(), p) == 0.0);
  CHECK(mp_density(p.edge_high(), p) == 0.0);
  CHECK(mp_density(0.01, p) == 0.0);
  CHECK(mp_density(3.5, p) == 0.0);
  CHECK(mp_density(1.5, p) == doctest::Approx(0.3001054387190354).epsilon(1e-12));

  // unit mass, via both the engine quadrature and the independent oracle
  const double engine = integrate_mp([](double) { return 1.0; }, p);
  CHECK(engine == doctest::Approx(1.0).epsilon(1e-10));
  const double simpson = oracle::mp_integral([](double) { return 1.0; }, 0.5);
  CHECK(simpson == doctest::Approx(1.0).epsilon(1e-10));

  for (double y : {0.2, 0.9}) {
    CHECK(integrate_mp([](double) { return 1.0; }, MpParams(y)) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("stieltjes closed form against quadrature") {
  const MpParams p(0.5);
  // frozen oracle values: integral of 1/(x - z) against F_{1/2}
  CHECK(stieltjes(5.0, p) == doctest::Approx(-0.2596875762567151).epsilon(1e-12));
  CHECK(stieltjes(0.01, p) == doctest::Approx(2.0851835770404).epsilon(1e-10));

  // large-z decay
  CHECK(stieltjes(1e6, p) == doctest::Approx(-1e-6).epsilon(1e-5));

  // grid on both sides, engine result vs Simpson oracle
  for (double y : {0.2, 0.5, 0.9}) {
    const MpParams params(y);
    for (int i = 0; i < 20; ++i) {
      const double above = params.edge_high() + 0.05 * std::pow(1.5, i);
      const double below = params.edge_low() * (i + 0.5) / 20.5;
      for (double lam : {above, below}) {
        const double quad = oracle::mp_integral(
            [lam](double x) { return 1.0 / (x - lam); }, y, 1e-13);
        CHECK(stieltjes(lam, params) == doctest::Approx(quad).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("stieltjes complex branch") {
  const MpParams p(0.5);
  for (double re : {0.05, 0.5, 1.5, 3.5}) {
    for (double im : {1e-3, 0.1, 1.0}) {
      const auto m = stieltjes(std::complex<double>(re, im), p);
      CHECK(m.imag() > 0.0);
    }
  }
  // Stieltjes bound on the real axis
  for (double lam : {0.01, 0.05, 3.0, 4.0, 10.0}) {
    const double dist = std::min(std::abs(lam - p.edge_low()),
                                 std::abs(lam - p.edge_high()));
    CHECK(std::abs(stieltjes(lam, p)) <= 1.0 / dist + 1e-9);
  }
  CHECK_THROWS_AS(stieltjes(1.5, p), SupportDomainError);
  CHECK_THROWS_AS(stieltjes(p.edge_low(), p), SupportDomainError);
}

TEST_CASE("m_transforms at phi(4), y = 1/2") {
  const MpParams p(0.5);
  const double lam = phi(4.0, p);
  CHECK(lam == doctest::Approx(14.0 / 3.0).epsilon(1e-14));
  const auto m = m_transforms(lam, p);
  CHECK(m.m1 == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(m.m2 == doctest::Approx(0.21568627450980393).epsilon(1e-8));
  CHECK(m.m3 == doctest::Approx(0.11764705882352941).epsilon(1e-8));

  const auto m5 = m_transforms(5.0, p);
  CHECK(m5.m1 == doctest::Approx(0.2984378812835757).epsilon(1e-10));

  const auto far = m_transforms(1e8, p);
  CHECK(std::abs(far.m1) < 1e-7);
  CHECK(std::abs(far.m2) < 1e-7);
  CHECK(std::abs(far.m3) < 1e-7);

  CHECK_THROWS_AS(m_transforms(1.0, p), SupportDomainError);
}

TEST_CASE("m transform signs off the support") {
  const MpParams p(0.5);
  const auto above = m_transforms(4.0, p);
  CHECK(above.m1 > 0.0);
  CHECK(above.m2 > 0.0);
  CHECK(above.m3 > 0.0);
  // below the support lambda - x < 0, so m1 flips sign; m2 and m3 keep
  // squared denominators and stay positive (cf. the alpha = 0.1 closed form)
  const auto below = m_transforms(0.05, p);
  CHECK(below.m1 < 0.0);
  CHECK(below.m2 > 0.0);
  CHECK(below.m3 > 0.0);
}

TEST_CASE("m_closed_forms examples") {
  const MpParams p(0.5);
  CHECK(m_closed_forms(2.0, p).m1 == doctest::Approx(1.0).epsilon(1e-14));

  const auto m4 = m_closed_forms(4.0, p);
  CHECK(m4.m1 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(m4.m2 == doctest::Approx(0.21568627450980393).epsilon(1e-14));
  CHECK(m4.m3 == doctest::Approx(0.11764705882352941).epsilon(1e-14));

  const auto m01 = m_closed_forms(0.1, p);
  CHECK(m01.m1 == doctest::Approx(-1.0 / 0.9).epsilon(1e-14));
  CHECK(m01.m3 == doctest::Approx(1.0 / 0.31).epsilon(1e-12));

  CHECK_THROWS_AS(m_closed_forms(1.5, p), CriticalIntervalError);
}

TEST_CASE("closed forms agree with quadrature on the grid") {
  for (double y : {0.2, 0.5, 0.9}) {
    const MpParams p(y);
    for (double alpha : {4.0, 3.0, 2.0, 0.2, 0.1}) {
      if (p.in_critical(alpha)) continue;
      const auto closed = m_closed_forms(alpha, p);
      const auto quad = m_transforms(phi(alpha, p), p);
      CHECK(closed.m1 == doctest::Approx(quad.m1).epsilon(1e-8));
      CHECK(closed.m2 == doctest::Approx(quad.m2).epsilon(1e-8));
      CHECK(closed.m3 == doctest::Approx(quad.m3).epsilon(1e-8));
    }
  }
}

TEST_CASE("phi values and errors") {
  const MpParams p(0.5);
  CHECK(phi(4.0, p) == doctest::Approx(4.6667).epsilon(1e-4));
  CHECK(phi(0.1, p) == doctest::Approx(0.0444).epsilon(1e-2));
  CHECK(phi(3.0, p) == doctest::Approx(3.75).epsilon(1e-14));

  CHECK_THROWS_AS(phi(1.5, p), CriticalIntervalError);
  CHECK_THROWS_AS(phi(-1.0, p), std::invalid_argument);
  try {
    phi(1.5, p);
  } catch (const CriticalIntervalError& e) {
    CHECK(e.lo() == doctest::Approx(0.2928932188134524).epsilon(1e-12));
    CHECK(e.hi() == doctest::Approx(1.7071067811865475).epsilon(1e-12));
  }
}

TEST_CASE("phi is increasing above the critical interval with image (b, inf)") {
  const MpParams p(0.5);
  double prev = p.edge_high();
  for (int i = 1; i <= 60; ++i) {
    const double alpha = p.critical_high() + 0.05 * i * i;
    const double lam = phi(alpha, p);
    CHECK(lam > prev);
    prev = lam;
  }
  // phi(alpha) -> b_y as alpha -> 1 + sqrt(y)
  CHECK(phi(p.critical_high() + 1e-8, p) ==
        doctest::Approx(p.edge_high()).epsilon(1e-6));
}

TEST_CASE("phi_inverse round trips") {
  for (double y : {0.2, 0.5, 0.9}) {
    const MpParams p(y);
    for (double alpha : {4.0, 3.0, 2.0, 0.2, 0.1, 0.05}) {
      if (p.in_critical(alpha) || !(alpha > 0.0)) continue;
      const double lam = phi(alpha, p);
      const Side side = alpha > 1.0 ? Side::Above : Side::Below;
      CHECK(phi_inverse(lam, p, side) == doctest::Approx(alpha).epsilon(1e-10));
      CHECK(phi(phi_inverse(lam, p, side), p) == doctest::Approx(lam).epsilon(1e-10));
    }
  }

  const MpParams p(0.5);
  CHECK(phi_inverse(4.667, p, Side::Above) == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(phi_inverse(0.0444, p, Side::Below) == doctest::Approx(0.1).epsilon(1e-2));

  // boundary: alpha -> 1 + sqrt(y) as lambda -> b_y from above
  CHECK(phi_inverse(p.edge_high() + 1e-10, p, Side::Above) ==
        doctest::Approx(p.critical_high()).epsilon(1e-4));

  CHECK_THROWS_AS(phi_inverse(1.0, p, Side::Above), SupportDomainError);
  CHECK_THROWS_AS(phi_inverse(1.0, p, Side::Below), SupportDomainError);
}

TEST_CASE("psi on the two-atom bulk") {
  const MpParams p(0.2);
  const BulkSpectrum bulk({{1.0, 0.5}, {10.0, 0.5}});
  CHECK(psi(5.0, p, bulk).value == doctest::Approx(4.125).epsilon(1e-12));
  CHECK(psi(4.0, p, bulk).value ==
        doctest::Approx(3.4666666666666666).epsilon(1e-12));
  CHECK(psi(3.0, p, bulk).value ==
        doctest::Approx(2.7214285714285715).epsilon(1e-12));
  CHECK(psi(5.0, p, bulk).separated);
  CHECK(psi(3.0, p, bulk).separated);

  CHECK_THROWS_AS(psi(10.0, p, bulk), std::invalid_argument);

  // a spike just above the lower atom maps into the upper band: defined but
  // not separated (psi(1.02) ~ 6.0 inside [4.79, 17.43])
  CHECK_FALSE(psi(1.02, p, bulk).separated);
}

TEST_CASE("psi reduces to phi for the unit bulk") {
  const auto bulk = BulkSpectrum::unit();
  for (double y : {0.2, 0.5, 0.9}) {
    const MpParams p(y);
    for (double alpha : {4.0, 3.0, 2.0, 0.2, 0.1}) {
      if (p.in_critical(alpha)) continue;
      CHECK(psi(alpha, p, bulk).value ==
            doctest::Approx(phi(alpha, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("general_support: two-atom bulk of section 5") {
  const MpParams p(0.2);
  const BulkSpectrum bulk({{1.0, 0.5}, {10.0, 0.5}});
  const SupportSet s = general_support(p, bulk);
  REQUIRE(s.intervals.size() == 2);
  // frozen oracle values (quartic roots of the inverse-map derivative)
  CHECK(s.intervals[0].first == doctest::Approx(0.3952584396927235).epsilon(1e-8));
  CHECK(s.intervals[0].second == doctest::Approx(1.5793829809354982).epsilon(1e-8));
  CHECK(s.intervals[1].first == doctest::Approx(4.792581476263344).epsilon(1e-8));
  CHECK(s.intervals[1].second == doctest::Approx(17.43277710310843).epsilon(1e-8));

  CHECK(s.contains(1.0));
  CHECK(s.contains(10.0));
  CHECK_FALSE(s.contains(3.0));
  CHECK(s.distance(3.0) > 1.0);
}

TEST_CASE("general_support reduces to mp_support for the unit bulk") {
  for (double y : {0.2, 0.5, 0.9}) {
    const MpParams p(y);
    const SupportSet s = general_support(p, BulkSpectrum::unit());
    REQUIRE(s.intervals.size() == 1);
    CHECK(s.intervals[0].first == doctest::Approx(p.edge_low()).epsilon(1e-8));
    CHECK(s.intervals[0].second == doctest::Approx(p.edge_high()).epsilon(1e-8));
  }
  // hand evaluation at y = 0.2
  const SupportSet s = general_support(MpParams(0.2), BulkSpectrum::unit());
  CHECK(s.intervals[0].first == doctest::Approx(0.3055728090000842).epsilon(1e-8));
  CHECK(s.intervals[0].second == doctest::Approx(2.0944271909999155).epsilon(1e-8));
}

TEST_CASE("BulkSpectrum invariants") {
  CHECK_THROWS_AS(BulkSpectrum({{1.0, 0.5}, {1.0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(BulkSpectrum({{1.0, 0.6}, {2.0, 0.6}}), std::invalid_argument);
  CHECK_THROWS_AS(BulkSpectrum({{-1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(BulkSpectrum({{1.0, -1.0}, {2.0, 2.0}}), std::invalid_argument);
  CHECK(BulkSpectrum::unit().is_unit());
}

TEST_CASE("engine quadrature handles a known integral") {
  const double v = integrate([](double x) { return std::exp(-x); }, 0.0, 20.0);
  CHECK(v == doctest::Approx(1.0 - std::exp(-20.0)).epsilon(1e-12));
}

}  // TEST_SUITE
