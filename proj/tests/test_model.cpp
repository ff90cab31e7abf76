#include <cmath>

#include "doctest.h"
#include "spikelab/linalg.hpp"
#include "spikelab/model.hpp"

using namespace spikelab;

TEST_SUITE("model") {

TEST_CASE("SpikeSpec invariants") {
  CHECK_THROWS_AS(SpikeSpec({{4.0, 1}, {4.0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(SpikeSpec({{3.0, 1}, {4.0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(SpikeSpec({{-4.0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(SpikeSpec({{4.0, 0}}), std::invalid_argument);
  const SpikeSpec spec({{4.0, 1}, {3.0, 2}, {0.2, 2}, {0.1, 1}});
  CHECK(spec.total_multiplicity() == 6);
  CHECK(spec.count() == 4);
}

TEST_CASE("sample_data determinism and dimension checks") {
  SpikedModel model(SpikeSpec({{4.0, 1}}), BulkSpectrum::unit(),
                    EntryLaw::gaussian(), MpParams(0.5));
  RngStream a(77), b(77), c(78);
  const auto da = sample_data(model, 20, 40, a);
  const auto db = sample_data(model, 20, 40, b);
  const auto dc = sample_data(model, 20, 40, c);
  CHECK((da.real - db.real).cwiseAbs().maxCoeff() == 0.0);
  CHECK((da.real - dc.real).cwiseAbs().maxCoeff() > 0.0);

  SpikedModel big(SpikeSpec({{4.0, 3}, {2.0, 2}}), BulkSpectrum::unit(),
                  EntryLaw::gaussian(), MpParams(0.5));
  RngStream r(1);
  CHECK_THROWS_AS(sample_data(big, 4, 10, r), std::invalid_argument);
}

TEST_CASE("rademacher spike rows take values +-sqrt(alpha)") {
  SpikedModel model(SpikeSpec({{4.0, 1}}), BulkSpectrum::unit(),
                    EntryLaw::rademacher(), MpParams(0.5));
  RngStream rng(5);
  const auto data = sample_data(model, 10, 50, rng);
  for (int j = 0; j < data.n; ++j) {
    CHECK(std::abs(std::abs(data.real(0, j)) - 2.0) < 1e-14);
    CHECK(std::abs(std::abs(data.real(5, j)) - 1.0) < 1e-14);
  }
}

TEST_CASE("spike row variance matches alpha") {
  SpikedModel model(SpikeSpec({{4.0, 1}}), BulkSpectrum::unit(),
                    EntryLaw::gaussian(), MpParams(0.5));
  RngStream rng(11);
  const int n = 100000;
  const auto data = sample_data(model, 3, n, rng);
  const double var0 = data.real.row(0).array().square().mean();
  CHECK(var0 == doctest::Approx(4.0).epsilon(0.05));
  const double var2 = data.real.row(2).array().square().mean();
  CHECK(var2 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("complex entries have unit variance and vanishing pseudo-variance") {
  SpikedModel model(SpikeSpec({{4.0, 1}}), BulkSpectrum::unit(),
                    EntryLaw::gaussian(/*complex=*/true), MpParams(0.5));
  RngStream rng(13);
  const auto data = sample_data(model, 2, 100000, rng);
  REQUIRE(data.is_complex);
  const double var = data.complex.row(1).array().abs2().mean();
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
  const std::complex<double> pseudo = data.complex.row(1).array().square().mean();
  CHECK(std::abs(pseudo) < 0.02);
}

TEST_CASE("bulk atom counts use largest remainder") {
  const BulkSpectrum two({{1.0, 0.5}, {10.0, 0.5}});
  const auto counts = bulk_atom_counts(two, 496);
  CHECK(counts[0] == 248);
  CHECK(counts[1] == 248);
  const auto odd = bulk_atom_counts(two, 5);
  CHECK(odd[0] + odd[1] == 5);

  const BulkSpectrum three({{1.0, 0.3333}, {2.0, 0.3333}, {3.0, 0.3334}});
  const auto c3 = bulk_atom_counts(three, 100);
  CHECK(c3[0] + c3[1] + c3[2] == 100);
  for (int c : c3) CHECK(std::abs(c - 33.33) < 1.0);
}

TEST_CASE("sample_cov basics") {
  DataMatrix d;
  d.p = 4;
  d.n = 1;
  d.real = Eigen::MatrixXd::Zero(4, 1);
  d.real(0, 0) = 1.0;
  const auto s = sample_cov(d);
  const auto eigs = hermitian_eigs(s);
  CHECK(eigs.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (int i = 1; i < 4; ++i) CHECK(std::abs(eigs.values[i]) < 1e-14);

  SpikedModel model(SpikeSpec({{4.0, 1}}), BulkSpectrum::unit(),
                    EntryLaw::gaussian(), MpParams(0.5));
  RngStream rng(3);
  const auto data = sample_data(model, 30, 60, rng);
  const auto cov = sample_cov(data);
  // trace identity
  const double tr = cov.trace();
  const double norms = data.real.array().square().sum() / data.n;
  CHECK(tr == doctest::Approx(norms).epsilon(1e-13));
  // symmetry and PSD up to round-off
  CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() <=
        1e-13 * cov.cwiseAbs().maxCoeff());
  const auto ev = hermitian_eigs(cov);
  CHECK(ev.values.back() >= -1e-10);
}

TEST_CASE("null model edge behavior") {
  SpikedModel null_model(SpikeSpec({}), BulkSpectrum::unit(),
                         EntryLaw::gaussian(), MpParams(0.5));
  RngStream rng(2024);
  const auto data = sample_data(null_model, 200, 400, rng);
  const auto eigs = hermitian_eigs(sample_cov(data));
  CHECK(std::abs(eigs.values.front() - null_model.params.edge_high()) < 0.15);
}

TEST_CASE("packed_index_sets: paper layout") {
  const SpikeSpec spec({{4.0, 1}, {3.0, 2}, {0.2, 2}, {0.1, 1}});
  const MpParams p(0.5);
  const auto sets = packed_index_sets(spec, p, 500);
  CHECK(sets.at(0) == std::vector<int>{1});
  CHECK(sets.at(1) == std::vector<int>{2, 3});
  CHECK(sets.at(2) == std::vector<int>{498, 499});
  CHECK(sets.at(3) == std::vector<int>{500});
}

TEST_CASE("packed_index_sets: simple and untracked spikes") {
  const MpParams p(0.5);
  const auto single = packed_index_sets(SpikeSpec({{4.0, 1}}), p, 100);
  CHECK(single.at(0) == std::vector<int>{1});

  const auto inside = packed_index_sets(SpikeSpec({{1.5, 2}}), p, 100);
  CHECK(inside.at(0).empty());

  // disjointness and coverage of the large side
  const SpikeSpec spec({{6.0, 2}, {4.0, 3}, {2.5, 1}});
  const auto sets = packed_index_sets(spec, p, 50);
  std::vector<int> all;
  for (const auto& [k, idx] : sets)
    all.insert(all.end(), idx.begin(), idx.end());
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<int>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("optional rotation acts on the spike block") {
  const double c = std::cos(0.7), s = std::sin(0.7);
  Eigen::MatrixXd u(2, 2);
  u << c, -s, s, c;
  SpikedModel model(SpikeSpec({{4.0, 1}, {2.0, 1}}), BulkSpectrum::unit(),
                    EntryLaw::gaussian(), MpParams(0.5));
  model.rotation = u;
  RngStream rng(9);
  const int n = 200000;
  const auto data = sample_data(model, 3, n, rng);
  Eigen::MatrixXd top = data.real.topRows(2);
  const Eigen::MatrixXd cov = top * top.transpose() / n;
  Eigen::MatrixXd sigma(2, 2);
  sigma << 4.0, 0.0, 0.0, 2.0;
  const Eigen::MatrixXd expected = u * sigma * u.transpose();
  CHECK((cov - expected).cwiseAbs().maxCoeff() < 0.08);
}

}  // TEST_SUITE
