#include <doctest.h>

#include <cmath>

#include "builders.hpp"
#include "criteria.hpp"
#include "oracles.hpp"
#include "stabpair/energy.hpp"
#include "stabpair/varieties.hpp"

using namespace stabpair;
using testing::disc2;
using testing::term;

TEST_SUITE("energy") {
  TEST_CASE("gaussian norm examples") {
    CHECK(gaussian_norm_sq(SparsePolynomial::variable({1, 3}, 0, 0)) == doctest::Approx(1.0));
    CHECK(gaussian_norm_sq(disc2()) == doctest::Approx(18.0));
    CHECK(gaussian_norm_sq(testing::det_small(2)) == doctest::Approx(2.0));
    CHECK(gaussian_norm_sq(testing::det_small(3)) == doctest::Approx(6.0));
    CHECK(std::exp(log_gaussian_norm_sq(disc2())) == doctest::Approx(18.0));
    CHECK_THROWS_AS(gaussian_norm_sq(SparsePolynomial({1, 3}, 2)), std::invalid_argument);
    CHECK(gaussian_inner(disc2(), disc2()).real() == doctest::Approx(18.0));
  }

  TEST_CASE("monte carlo norm of a black-box polynomial") {
    const BlackBoxPolynomial bb({1, 3}, 2, [](const ComplexMatrix& a) {
      return a(0, 1) * a(0, 1) - 4.0 * a(0, 0) * a(0, 2);
    });
    const auto est = gaussian_norm_sq(Polynomial(bb), {400'000, 5, 0, 64});
    CHECK_FALSE(est.exact);
    CHECK(std::abs(est.value - 18.0) < 3 * est.std_error);
  }

  TEST_CASE("norms agree with direct expansion") {
    Rng rng(41);
    for (int trial = 0; trial < 15; ++trial) {
      const MatrixShape s{1 + trial % 2, 2 + trial % 3};
      const auto p = testing::random_sparse(s, 1 + trial % 3, 4, rng);
      CHECK(gaussian_norm_sq(p) == doctest::Approx(oracle::norm_sq(oracle::to_dense(p))).epsilon(1e-12));
    }
  }

  TEST_CASE("nu examples") {
    const MatrixShape s{1, 3};
    const PairSpec dd{PairVector(disc2()), PairVector(disc2())};
    CHECK(nu_pair(dd, GroupElement::identity(3)).nu == 0.0);

    const auto mv = term(s, {1, 1, 0}), mw = term(s, {0, 0, 2});
    const PairSpec mono{PairVector(mv), PairVector(mw)};
    const std::vector<double> t{2.0, 0.5, 3.0};
    const auto r = nu_pair(mono, GroupElement::diagonal({t[0], t[1], t[2]}));
    const double expected = 2 * (2 * std::log(t[2])) - 2 * (std::log(t[0]) + std::log(t[1]));
    CHECK(r.nu == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.nu == r.w_component - r.v_component);
  }

  TEST_CASE("nu of the conic pair matches direct substitution") {
    const auto x = rational_normal_curve(2);
    const auto pair = normalized_pair_spec(x);
    const auto sigma = GroupElement::diagonal({2.0, 1.0, 0.5});
    const auto& R = std::get<SparsePolynomial>(x.R);
    const auto& D = std::get<SparsePolynomial>(x.Delta);
    const double r_ratio = oracle::norm_sq(oracle::substitute(R, sigma.matrix())) / oracle::norm_sq(oracle::to_dense(R));
    const double d_ratio = oracle::norm_sq(oracle::substitute(D, sigma.matrix())) / oracle::norm_sq(oracle::to_dense(D));
    const double expected = x.deg_R * std::log(d_ratio) - x.deg_delta * std::log(r_ratio);
    CHECK(nu_pair(pair, sigma).nu == doctest::Approx(expected).epsilon(1e-12));
    const GroupElement general(ComplexMatrix{{1.0, 0.3, 0.0}, {-0.2, 1.0, 0.5}, {0.1, 0.0, 1.2}});
    const double r2 = oracle::norm_sq(oracle::substitute(R, general.matrix())) / oracle::norm_sq(oracle::to_dense(R));
    const double d2 = oracle::norm_sq(oracle::substitute(D, general.matrix())) / oracle::norm_sq(oracle::to_dense(D));
    CHECK(nu_pair(pair, general).nu == doctest::Approx(x.deg_R * std::log(d2) - x.deg_delta * std::log(r2)).epsilon(1e-10));
  }

  TEST_CASE("J examples") {
    const MatrixShape s{1, 2};
    const PairVector v(term(s, {1, 1}));
    CHECK(j_aubin(v, GroupElement::identity(2)) == 0.0);
    for (double t : {0.5, 2.0, 10.0}) {
      const double j = j_aubin(v, GroupElement::diagonal({t, 1.0 / t}));
      CHECK(j == doctest::Approx(2 * std::log((t * t + 1 / (t * t)) / 2)));
      CHECK(j >= 0.0);
    }
  }

  TEST_CASE("J is bounded below by -deg log(N+1)") {
    Rng rng(42);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 2 + trial % 3;
      const auto p = testing::random_sparse({1, n}, 1 + trial % 3, 3, rng);
      const PairVector v(p);
      const auto g = GroupElement::random_sl(n, rng);
      CHECK(j_aubin(v, g) >= -module_degree(v) * std::log(double(n)) - 1e-9);
    }
  }

  TEST_CASE("projective, torus cocycle and unitary invariances") {
    Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + trial % 3;
      const auto v = testing::random_sparse({1, n}, 2, 3, rng);
      const auto w = testing::random_sparse({1, n}, 3, 4, rng);
      const auto g = GroupElement::random_sl(n, rng);
      const PairSpec pair{PairVector(v), PairVector(w)};
      const PairSpec scaled{PairVector(v * Complex(3.0, -2.0)), PairVector(w * Complex(0.01, 0.0))};
      CHECK(std::abs(nu_pair(pair, g).nu - nu_pair(scaled, g).nu) < 1e-12);
      CHECK(std::abs(nu_pair(pair, GroupElement::random_unitary(n, rng)).nu) < 1e-8);

      std::vector<Complex> t1(n), t2(n);
      for (int i = 0; i < n; ++i) {
        t1[i] = std::exp(oracle::gaussian_complex(rng));
        t2[i] = std::exp(oracle::gaussian_complex(rng));
      }
      const auto a = GroupElement::diagonal(t1), b = GroupElement::diagonal(t2);
      std::vector<int> ev(n, 0), ew(n, 0);
      ev[0] = 2;
      ew[n - 1] = 1;
      ew[trial % n] += 1;
      const PairSpec mono{PairVector(testing::term({1, n}, ev)), PairVector(testing::term({1, n}, ew))};
      CHECK(nu_pair(mono, a * b).nu == doctest::Approx(nu_pair(mono, a).nu + nu_pair(mono, b).nu).epsilon(1e-10));
    }
  }

  TEST_CASE("formal powers scale the log-norms") {
    Rng rng(44);
    const auto p = testing::random_sparse({1, 3}, 2, 4, rng);
    const auto g = GroupElement::random_sl(3, rng);
    CHECK(log_norm_sq(PairVector(p, 5), g) == doctest::Approx(5 * log_norm_sq(PairVector(p), g)));
    CHECK(log_norm_sq(PairVector(p, 1, 2), g) ==
          doctest::Approx(log_norm_sq(PairVector(p), g) + 2 * std::log(g.frobenius_sq())));
  }

  TEST_CASE("slope law along rays") {
    Rng rng(45);
    for (int trial = 0; trial < 20; ++trial) {
      auto [v, w] = testing::random_support_pair(rng);
      const OnePSG lambda = random_one_psg(v.shape().cols, rng);
      const PairSpec pair{PairVector(v), PairVector(w)};
      const double expected = Rational(ops_weight(v, lambda) - ops_weight(w, lambda)).get_d();
      const auto fit = fit_ray_slope(pair, lambda);
      if (expected == 0) {
        CHECK(std::abs(fit.slope) < 1e-3);
      } else {
        CHECK(std::abs(fit.slope - expected) <= 0.02 * std::abs(expected));
      }
    }
  }

  TEST_CASE("properness examples") {
    const PairSpec same{PairVector(disc2()), PairVector(disc2())};
    const auto e1 = properness_probe(same, 0.1, 0.0, {8, 8, 1, true, 0});
    CHECK(e1.violated_at.has_value());
    REQUIRE(e1.violation_nu.has_value());
    CHECK(*e1.violation_nu < 0.1 * *e1.violation_j);

    const MatrixShape s{1, 3};
    const auto cubic = term(s, {3, 0, 0}) + term(s, {0, 3, 0}) + term(s, {0, 0, 3});
    const PairSpec mumford{PairVector(SparsePolynomial::constant(s, 1.0)), PairVector(cubic)};
    const auto e2 = properness_probe(mumford, 0.5, -3.0, {16, 8, 2, true, 0});
    CHECK_FALSE(e2.violated_at.has_value());
    CHECK(e2.samples == 16 * 9);
    CHECK(e2.min_margin >= 0.0);
    CHECK_THROWS_AS(properness_probe(mumford, 0.0, 0.0, {}), std::invalid_argument);
  }

  TEST_CASE("energy scan layout") {
    const PairSpec same{PairVector(disc2()), PairVector(disc2(), 2)};
    const auto scan = energy_scan(same, 3, 2, 7);
    CHECK(scan.rays.size() == 3);
    CHECK(scan.rows.size() == 3 * 9);
    CHECK(scan.rows.front().t == 1.0);
    CHECK(scan.rows[8].t == doctest::Approx(0.01));
  }

  TEST_CASE("fs distance at the identity") {
    const MatrixShape s{1, 2};
    const PairSpec pair{PairVector(term(s, {1, 1})), PairVector(term(s, {2, 0}) * 3.0)};
    CHECK(fs_distance(pair) == doctest::Approx(std::atan(std::sqrt(18.0 / 1.0))));
  }

  TEST_CASE("orbit distance detects a destabilized pair") {
    const MatrixShape s{1, 2};
    const PairSpec pair{PairVector(SparsePolynomial::constant(s, 1.0)), PairVector(term(s, {2, 0}))};
    OrbitSearchOptions o;
    o.restarts = 4;
    o.iterations = 200;
    o.initial_samples = 300;
    const auto d = orbit_distance(pair, o);
    CHECK(d.log_tan_sq < -10.0);
    CHECK(sample_inf_nu(pair, o).inf_nu < -10.0);
  }

  TEST_CASE("inf nu is not below the distance estimate") {
    const MatrixShape s{1, 2};
    const PairSpec pair{PairVector(SparsePolynomial::constant(s, 1.0)), PairVector(term(s, {1, 1}))};
    REQUIRE(semistable_probe(pair, {20, 0, 0}).status == StabilityStatus::semistable_on_probed_tori);
    OrbitSearchOptions o;
    o.restarts = 6;
    o.initial_samples = 500;
    const auto nu = sample_inf_nu(pair, o);
    const auto dist = orbit_distance(pair, o);
    CHECK(std::isfinite(nu.inf_nu));
    CHECK(nu.inf_nu >= dist.log_tan_sq - 0.2);
    const auto wide = term({1, 5}, {1, 0, 0, 0, 0});
    CHECK_THROWS_AS(orbit_distance(PairSpec(PairVector(wide), PairVector(wide)), OrbitSearchOptions{}),
                    std::invalid_argument);
  }
}
