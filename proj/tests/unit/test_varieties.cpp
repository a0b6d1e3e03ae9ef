#include <doctest.h>

#include <cmath>

#include "builders.hpp"
#include "oracles.hpp"
#include "stabpair/varieties.hpp"

using namespace stabpair;

namespace {

std::vector<Complex> random_row(int d, Rng& rng) {
  std::vector<Complex> a(static_cast<std::size_t>(d + 1));
  for (auto& x : a) x = oracle::gaussian_complex(rng);
  return a;
}

double row_norm(const std::vector<Complex>& a) {
  double s = 0;
  for (auto x : a) s += std::norm(x);
  return std::sqrt(s);
}

ComplexMatrix rows_matrix(const std::vector<std::vector<Complex>>& rows) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

MonteCarloOptions mc(std::size_t samples, std::uint64_t seed) { return {samples, seed, 0, 64}; }

}  // namespace

TEST_SUITE("varieties") {
  TEST_CASE("resultant examples") {
    const auto r2 = rnc_resultant(2);
    CHECK(std::abs(evaluate(r2, rows_matrix({{1, 0, 0}, {0, 0, 1}})) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(evaluate(r2, rows_matrix({{1, 2, 3}, {1, 2, 3}}))) < 1e-12);
    CHECK(std::abs(sylvester_resultant({1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}) - Complex(1.0)) < 1e-12);
    CHECK_THROWS_AS(rnc_resultant(1), std::invalid_argument);
    CHECK_THROWS_AS(rnc_hyperdiscriminant(0), std::invalid_argument);
  }

  TEST_CASE("discriminant examples") {
    const auto d2 = std::get<SparsePolynomial>(rnc_hyperdiscriminant(2));
    CHECK(oracle::relative_gap(oracle::to_dense(d2), oracle::to_dense(testing::disc2())) < 1e-14);
    const auto d3 = rnc_hyperdiscriminant(3);
    CHECK(std::abs(evaluate(d3, rows_matrix({{0.0, 1.0, -1.0, 0.0}}))) > 0.5);
    CHECK(std::abs(evaluate(d3, rows_matrix({{1.0, 0.0, 0.0, 0.0}}))) < 1e-14);
    CHECK(discriminant_normalizer(2) == -1.0);
    CHECK(discriminant_normalizer(3) == -3.0);
    CHECK(discriminant_normalizer(4) == 16.0);
    CHECK(discriminant_normalizer(5) == 125.0);
  }

  TEST_CASE("agreement with the root formulas") {
    Rng rng(61);
    for (int d = 2; d <= 7; ++d) {
      for (int trial = 0; trial < 20; ++trial) {
        const auto f = random_row(d, rng), g = random_row(d, rng);
        const double scale = std::pow(row_norm(f) * row_norm(g), d);
        CHECK(std::abs(sylvester_resultant(f, g) - oracle::resultant_by_roots(f, g)) < 1e-9 * scale);
        const double dscale = std::pow(row_norm(f), 2 * d - 2);
        CHECK(std::abs(binary_discriminant(f) - oracle::discriminant_by_roots(f)) < 1e-9 * dscale);
      }
    }
  }

  TEST_CASE("planted common roots and repeated roots") {
    Rng rng(62);
    for (int d = 2; d <= 6; ++d) {
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<Complex> rf(d), rg(d);
        for (auto& x : rf) x = oracle::gaussian_complex(rng);
        for (auto& x : rg) x = oracle::gaussian_complex(rng);
        rg[0] = rf[0];
        const auto f = oracle::form_from_roots(rf, oracle::gaussian_complex(rng));
        const auto g = oracle::form_from_roots(rg, oracle::gaussian_complex(rng));
        CHECK(std::abs(sylvester_resultant(f, g)) < 1e-9 * std::pow(row_norm(f) * row_norm(g), d));
        rf[1] = rf[0];
        const auto h = oracle::form_from_roots(rf, 1.0);
        CHECK(std::abs(binary_discriminant(h)) < 1e-9 * std::pow(row_norm(h), 2 * d - 2));
      }
    }
  }

  TEST_CASE("measured degrees") {
    for (int d = 2; d <= 6; ++d) {
      CAPTURE(d);
      CHECK(measured_degree(rnc_resultant(d), 3) == 2 * d);
      CHECK(measured_degree(rnc_hyperdiscriminant(d), 4) == 2 * d - 2);
      CHECK(measured_degree(Polynomial(rnc_resultant_blackbox(d)), 5) == 2 * d);
      CHECK(measured_degree(Polynomial(rnc_hyperdiscriminant_blackbox(d)), 6) == 2 * d - 2);
    }
  }

  TEST_CASE("symbolic and black-box forms agree") {
    Rng rng(63);
    for (int d = 2; d <= 4; ++d) {
      const Polynomial rs(rnc_resultant_symbolic(d)), rb(rnc_resultant_blackbox(d));
      const Polynomial ds(rnc_hyperdiscriminant_symbolic(d)), db(rnc_hyperdiscriminant_blackbox(d));
      for (int k = 0; k < 100; ++k) {
        const auto a = gaussian_sample({2, d + 1}, rng);
        const auto b = gaussian_sample({1, d + 1}, rng);
        CHECK(std::abs(evaluate(rs, a) - evaluate(rb, a)) < 1e-9 * std::max(1.0, std::abs(evaluate(rb, a))));
        CHECK(std::abs(evaluate(ds, b) - evaluate(db, b)) < 1e-9 * std::max(1.0, std::abs(evaluate(db, b))));
      }
    }
  }

  TEST_CASE("leading coefficient of the hyperdiscriminant") {
    for (int d = 2; d <= 5; ++d) {
      const auto p = rnc_hyperdiscriminant_symbolic(d);
      std::vector<int> e(static_cast<std::size_t>(d + 1), 0);
      for (int k = 1; k < d; ++k) e[static_cast<std::size_t>(k)] = 2;
      const auto lead = testing::term({1, d + 1}, e);
      CAPTURE(d);
      CHECK(std::abs(p.terms().begin()->second - Complex(1.0)) < 1e-12);
      CHECK(p.terms().begin()->first == lead.terms().begin()->first);
    }
  }

  TEST_CASE("variety example fields") {
    for (int d = 2; d <= 6; ++d) {
      const auto x = rational_normal_curve(d);
      CHECK(x.deg_R == 2 * d);
      CHECK(x.deg_delta == 2 * d - 2);
      CHECK(x.N == d);
      CHECK(x.mu_backsolved() == doctest::Approx(2.0 / d));
      CHECK(x.summary()["R_representation"] == (d <= resultant_symbolic_max ? "sparse" : "black-box"));
    }
  }

  TEST_CASE("normalized pair") {
    const auto x = rational_normal_curve(3);
    const auto pair = normalized_pair_spec(x);
    const auto& R = std::get<SparsePolynomial>(x.R);
    CHECK(weight_polytope(FormalPower(pair.v.base, pair.v.power)) == dilate(weight_polytope(R), x.deg_delta));
    const auto np = normalized_pair(x);
    CHECK(np.R.exponent == x.deg_delta);
    CHECK(np.Delta.exponent == x.deg_R);
    const HeightOptions o{mc(50'000, 3), false};
    const auto hr = height(x.R, o);
    CHECK(height(np.R, o).h == doctest::Approx(x.deg_delta * hr.h));
  }

  TEST_CASE("variety heights") {
    const HeightOptions o{mc(200'000, 64), false};
    for (int d = 2; d <= 3; ++d) {
      const auto h = variety_heights(rational_normal_curve(d), o);
      CHECK(h.hF.h < 0);
      CHECK(h.hDelta.h < 0);
    }
    const auto x = rational_normal_curve(2);
    HeightOptions scaled = o;
    VarietyExample y = x;
    y.R = std::get<SparsePolynomial>(x.R) * 10.0;
    const auto a = variety_heights(x, o), b = variety_heights(y, scaled);
    CHECK(std::abs(a.hF.h - b.hF.h) < 3 * std::hypot(a.hF.std_error, b.hF.std_error) + 1e-9);
  }

  TEST_CASE("discrepancy rows and the constant probe") {
    const HeightOptions o{mc(100'000, 71), false};
    const auto table = discrepancy_table(2, 4, o);
    REQUIRE(table.rows.size() == 3);
    for (const auto& r : table.rows) {
      CHECK(r.delta >= 0);
      CHECK(r.delta == doctest::Approx(std::abs(r.deg_delta * r.hF.h - r.deg_R * r.hDelta.h)));
      CHECK(r.delta_over_d2 == doctest::Approx(r.delta / (r.d * r.d)));
    }
    CHECK(std::isfinite(table.fitted_exponent));
    CHECK(table.to_json()["rows"].size() == 3);

    const auto x = rational_normal_curve(3);
    HeightOptions po = o;
    po.mc.seed = derive_seed(o.mc.seed, 3);
    const auto single = optimal_constant_probe(x, {GroupElement::identity(4)}, po);
    CHECK(single.lower_bound == table.rows[1].delta);
    Rng rng(72);
    const auto more = optimal_constant_probe(
        x, {GroupElement::identity(4), GroupElement::random_sl(4, rng), GroupElement::random_sl(4, rng)}, po);
    CHECK(more.values.size() == 3);
    CHECK(more.lower_bound >= single.lower_bound);
    CHECK_THROWS_AS(optimal_constant_probe(x, {}, po), std::invalid_argument);
    CHECK_THROWS_AS(discrepancy_table(1, 3, o), std::invalid_argument);
  }
}
