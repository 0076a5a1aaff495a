#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sforge/errors.hpp"
#include "sforge/numerics.hpp"

using namespace sforge;

namespace {

/// Greedy multiset distance: each expected root is matched to its nearest
/// unused computed root.
double multiset_distance(std::vector<Complex> got, const std::vector<Complex>& want) {
  double worst = 0.0;
  for (const Complex& w : want) {
    auto it = std::min_element(got.begin(), got.end(),
                               [&](Complex x, Complex y) { return std::abs(x - w) < std::abs(y - w); });
    worst = std::max(worst, std::abs(*it - w));
    got.erase(it);
  }
  return worst;
}

} // namespace

TEST_SUITE("numerics") {
  TEST_CASE("u^2 + 1 has roots +-i") {
    const auto roots = all_roots(ComplexPoly({1.0, 0.0, 1.0}));
    CHECK(multiset_distance(roots, {{0, 1}, {0, -1}}) < 1e-14);
  }

  TEST_CASE("u^3 - 1 has the cube roots of unity") {
    const auto roots = all_roots(ComplexPoly({-1.0, 0.0, 0.0, 1.0}));
    std::vector<Complex> want;
    for (int k = 0; k < 3; ++k) want.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0));
    CHECK(multiset_distance(roots, want) < 1e-14);
  }

  TEST_CASE("random well-separated roots are recovered") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int deg = 1; deg <= 12; ++deg) {
      std::vector<Complex> z;
      while (static_cast<int>(z.size()) < deg) {
        const Complex c{d(rng), d(rng)};
        bool ok = true;
        for (const Complex& w : z) ok = ok && std::abs(w - c) > 0.2;
        if (ok) z.push_back(c);
      }
      const auto roots = all_roots(ComplexPoly::from_roots(z));
      REQUIRE(roots.size() == z.size());
      CHECK(multiset_distance(roots, z) < 1e-8);
    }
  }

  TEST_CASE("roots are deterministic") {
    const ComplexPoly p({{1, 2}, {-3, 0.5}, {0, 1}, {2, 0}, {1, 0}});
    CHECK(all_roots(p) == all_roots(p));
  }

  TEST_CASE("double root is found twice") {
    const auto roots = all_roots(ComplexPoly::from_roots(std::vector<Complex>{{0.5, 0}, {0.5, 0}, {-1, 0}}));
    CHECK(multiset_distance(roots, {{0.5, 0}, {0.5, 0}, {-1, 0}}) < 1e-7);
  }

  TEST_CASE("derivative and Horner evaluation agree") {
    const ComplexPoly p({{1, 0}, {2, -1}, {0, 3}, {1, 0}});
    const Complex z{0.3, -0.7};
    const auto [val, der] = p.eval_with_derivative(z);
    CHECK(std::abs(val - p(z)) < 1e-15);
    CHECK(std::abs(der - p.derivative()(z)) < 1e-14);
    CHECK(p.derivative().degree() == 2);
  }

  TEST_CASE("leading zeros are trimmed") {
    const ComplexPoly p({1.0, 2.0, 0.0, 0.0});
    CHECK(p.degree() == 1);
  }

  TEST_CASE("bisect examples") {
    CHECK(std::abs(bisect([](double r) { return r * r - 0.5; }, 0.0, 1.0) - std::sqrt(0.5)) < 1e-12);
    CHECK(std::abs(bisect([](double r) { return r - 1.0; }, 0.0, 2.0) - 1.0) < 1e-12);
    CHECK_THROWS_AS(bisect([](double r) { return r * r + 1.0; }, -1.0, 1.0), NoSignChange);
  }

  TEST_CASE("fd_jacobian of a projection and of a constant") {
    const auto proj = fd_jacobian([](const Point4& x) { return Value2{x[0], x[1]}; }, {0.3, -0.2, 0.5, 0.9}, 1e-6);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 4; ++c) CHECK(std::abs(proj[r][c] - (r == c ? 1.0 : 0.0)) < 1e-9);
    const auto zero = fd_jacobian([](const Point4&) { return Value2{2.0, -1.0}; }, {0, 0, 0, 0}, 1e-5);
    CHECK(max_abs_entry(zero) == 0.0);
    CHECK_THROWS(fd_jacobian([](const Point4&) { return Value2{}; }, {0, 0, 0, 0}, 1e-2));
  }

  TEST_CASE("singular values of a 2x4 matrix") {
    const Matrix2x4 m{{{3, 0, 0, 0}, {0, 0, 4, 0}}};
    const auto sv = singular_values(m);
    CHECK(std::abs(sv[0] - 4.0) < 1e-14);
    CHECK(std::abs(sv[1] - 3.0) < 1e-14);
    const Matrix2x4 rank1{{{1, 2, 3, 4}, {2, 4, 6, 8}}};
    CHECK(singular_values(rank1)[1] < 1e-12);
  }

  TEST_CASE("periodic grid excludes the right end") {
    const auto g = periodic_grid(4, 0.0, 1.0);
    REQUIRE(g.size() == 4);
    CHECK(g[0] == 0.0);
    CHECK(g[3] == 0.75);
  }
}
