#include <doctest.h>

#include <cmath>

#include "builders.hpp"
#include "oracles.hpp"
#include "stabpair/pairstab.hpp"
#include "stabpair/polyrep.hpp"
#include "stabpair/special.hpp"

using namespace stabpair;
using testing::disc2;
using testing::term;

namespace {

GroupElement small_random_group(int n, Rng& rng) {
  ComplexMatrix m = ComplexMatrix::Identity(n, n) + 0.5 * gaussian_sample({n, n}, rng);
  return GroupElement(m);
}

}  // namespace

TEST_SUITE("polyrep") {
  TEST_CASE("support examples") {
    const MatrixShape s{1, 4};
    const auto a00 = SparsePolynomial::variable(s, 0, 0);
    CHECK(support(a00) == std::set<TorusCharacter>{{{1, 0, 0, 0}}});
    CHECK(support(disc2()) == std::set<TorusCharacter>{{{0, 2, 0}}, {{1, 0, 1}}});
    CHECK_THROWS_AS(support(SparsePolynomial(s, 1)), std::invalid_argument);
    const auto c = column_degrees(Exponent{1, 0, 2, 0, 1, 0}, {2, 3});
    CHECK(c.raw == std::vector<int>{1, 1, 2});
    CHECK(c.projected() == RationalVector{Rational(-1, 3), Rational(-1, 3), Rational(2, 3)});
  }

  TEST_CASE("construction errors") {
    const MatrixShape s{1, 3};
    CHECK_THROWS_AS(SparsePolynomial(s, 2, {{Exponent{1, 0, 0}, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(SparsePolynomial(s, 1, {{Exponent{1, 0}, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(OnePSG({1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(GroupElement(ComplexMatrix::Zero(2, 2)), std::invalid_argument);
    CHECK_THROWS_AS(FormalPower(disc2(), 0), std::invalid_argument);
    CHECK_THROWS_AS(act(GroupElement::identity(2), disc2()), std::invalid_argument);
    CHECK_THROWS_AS(BlackBoxPolynomial(s, 2, [](const ComplexMatrix& a) { return a(0, 0); }),
                    std::invalid_argument);
  }

  TEST_CASE("act examples") {
    const auto d = disc2();
    CHECK(relative_distance(act(GroupElement::identity(3), d), d) == 0.0);

    const MatrixShape s{1, 3};
    const auto m = term(s, {2, 1, 3});
    const auto t = GroupElement::diagonal({2.0, Complex(0, 1), 0.5});
    const auto scaled = act(t, m);
    CHECK(scaled.size() == 1);
    const Complex expected = 4.0 * Complex(0, 1) * 0.125;
    CHECK(std::abs(scaled.coefficient(Exponent{2, 1, 3}) - expected) < 1e-15);

    const auto rev = act(GroupElement::permutation({2, 1, 0}), d);
    const auto swapped = term(s, {0, 2, 0}) + term(s, {1, 0, 1}, -4.0);
    CHECK(relative_distance(rev, swapped) == 0.0);
  }

  TEST_CASE("evaluate examples") {
    const MatrixShape s{1, 3};
    ComplexMatrix a(1, 3);
    a << 1.0, 0.0, -1.0;
    CHECK(evaluate(SparsePolynomial::constant(s, Complex(3, 4)), a) == Complex(3, 4));
    CHECK(std::abs(evaluate(disc2(), a) - 4.0) < 1e-15);
    ComplexMatrix bad(1, 3);
    bad << 1.0, std::nan(""), 0.0;
    CHECK_THROWS_AS(evaluate(disc2(), bad), std::invalid_argument);
    CHECK_THROWS_AS(evaluate(disc2(), ComplexMatrix::Zero(2, 3)), std::invalid_argument);
  }

  TEST_CASE("act agrees with direct substitution") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
      const MatrixShape s{1 + trial % 2, 2 + trial % 3};
      const auto p = testing::random_sparse(s, 1 + trial % 4, 4, rng);
      const auto g = small_random_group(s.cols, rng);
      CHECK(oracle::relative_gap(oracle::to_dense(act(g, p)), oracle::substitute(p, g.matrix())) < 1e-12);
      const auto a = gaussian_sample(s, rng);
      const ComplexMatrix ag = a * g.matrix();
      const Complex lhs = evaluate(act(g, p), a), rhs = evaluate(p, ag);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }

  TEST_CASE("act composes as act(s1, act(s2, P)) = act(s1 s2, P)") {
    Rng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
      const MatrixShape s{1 + trial % 2, 2 + trial % 2};
      const auto p = testing::random_sparse(s, 2 + trial % 3, 5, rng);
      const auto g1 = small_random_group(s.cols, rng), g2 = small_random_group(s.cols, rng);
      CHECK(relative_distance(act(g1, act(g2, p)), act(g1 * g2, p)) < 1e-10);
    }
  }

  TEST_CASE("permutations permute supports") {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + trial % 3;
      const auto p = testing::random_sparse({1 + trial % 2, n}, 1 + trial % 4, 4, rng);
      std::vector<int> image(n);
      for (int i = 0; i < n; ++i) image[i] = i;
      std::shuffle(image.begin(), image.end(), rng);
      std::set<TorusCharacter> expected;
      for (const auto& c : support(p)) {
        TorusCharacter moved{std::vector<int>(n)};
        for (int j = 0; j < n; ++j) moved.raw[image[j]] = c.raw[j];
        expected.insert(moved);
      }
      CHECK(support(act(GroupElement::permutation(image), p)) == expected);
    }
  }

  TEST_CASE("homogeneity of evaluation") {
    Rng rng(24);
    for (int trial = 0; trial < 30; ++trial) {
      const MatrixShape s{1 + trial % 2, 2 + trial % 3};
      const int deg = trial % 5;
      const auto p = testing::random_sparse(s, deg, 5, rng);
      const auto a = gaussian_sample(s, rng);
      const Complex t = oracle::gaussian_complex(rng);
      const Complex lhs = evaluate(p, (t * a).eval());
      const Complex rhs = std::pow(t, deg) * evaluate(p, a);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }

  TEST_CASE("black-box action and evaluation") {
    const MatrixShape s{2, 2};
    const BlackBoxPolynomial det(s, 2, [](const ComplexMatrix& a) { return Complex(a.determinant()); });
    Rng rng(25);
    const auto g = small_random_group(2, rng);
    const auto a = gaussian_sample(s, rng);
    const Complex acted = evaluate(act(g, det), a);
    CHECK(std::abs(acted - a.determinant() * g.determinant()) < 1e-12);
    CHECK(std::abs(evaluate(Polynomial(testing::det_small(2)), a) - a.determinant()) < 1e-12);
  }

  TEST_CASE("tensor support") {
    Rng rng(26);
    const MatrixShape s{1, 3};
    const auto m1 = term(s, {2, 0, 1}), m2 = term(s, {0, 1, 0});
    CHECK(tensor_support(m1, m2) == std::set<TorusCharacter>{{{2, 1, 1}}});
    const auto one = SparsePolynomial::constant(s, 2.0);
    CHECK(tensor_support(disc2(), one) == support(disc2()));
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + trial % 3;
      const auto v = testing::random_sparse({1, n}, 1 + trial % 3, 4, rng);
      const auto w = testing::random_sparse({1 + trial % 2, n}, 2, 3, rng);
      std::vector<LatticePoint> vw;
      for (const auto& c : tensor_support(v, w)) vw.push_back(c.projected());
      CHECK(convex_hull(vw) == minkowski_sum(weight_polytope(v), weight_polytope(w)));
      std::vector<LatticePoint> vv;
      for (const auto& c : tensor_support(v, v)) vv.push_back(c.projected());
      CHECK(convex_hull(vv) == dilate(weight_polytope(v), 2));
    }
  }

  TEST_CASE("polynomial json round trip") {
    const auto d = disc2();
    const auto j = d.to_json();
    CHECK(j["shape"] == nlohmann::json::array({1, 3}));
    CHECK(j["degree"] == 2);
    CHECK(relative_distance(SparsePolynomial::from_json(j), d) == 0.0);
    auto bad = j;
    bad["terms"][0]["exps"][0] = nlohmann::json::array({1, 1});
    CHECK_THROWS_AS(SparsePolynomial::from_json(bad), std::invalid_argument);
  }

  TEST_CASE("gaussian sample moments") {
    Rng rng(27);
    const std::size_t n = 1'000'000;
    double m2 = 0, m2sq = 0, re = 0, re2 = 0, lg = 0, lg2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex z = gaussian_sample({1, 1}, rng)(0, 0);
      const double a = std::norm(z), l = std::log(a);
      m2 += a;
      m2sq += a * a;
      re += z.real();
      re2 += z.real() * z.real();
      lg += l;
      lg2 += l * l;
    }
    auto se = [&](double s, double s2) { return std::sqrt((s2 / n - (s / n) * (s / n)) / n); };
    CHECK(std::abs(m2 / n - 1.0) < 3 * se(m2, m2sq));
    CHECK(std::abs(re / n) < 3 * se(re, re2));
    CHECK(std::abs(lg / n + euler_gamma) < 3 * se(lg, lg2));
  }

  TEST_CASE("derived seeds are distinct and stable") {
    CHECK(derive_seed(0, 0) != derive_seed(0, 1));
    CHECK(derive_seed(5, 3) == derive_seed(5, 3));
    CHECK(derive_seed(1, 0) != derive_seed(0, 1));
  }

  TEST_CASE("integer unimodular elements") {
    Rng rng(28);
    for (int n = 2; n <= 4; ++n) {
      const auto g = GroupElement::random_integer_sl(n, rng);
      CHECK(std::abs(g.determinant() - 1.0) < 1e-12);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(g.matrix()(i, j).real() == std::round(g.matrix()(i, j).real()));
    }
    const auto u = GroupElement::random_unitary(3, rng);
    CHECK((u.matrix() * u.matrix().adjoint() - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);
  }
}
