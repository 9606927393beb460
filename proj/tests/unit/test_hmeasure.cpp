#include <doctest.h>

#include <cmath>
#include <random>

#include "rocstream/hmeasure.hpp"
#include "rocstream/oracles.hpp"
#include "test_util.hpp"

using namespace rocstream;
using testutil::adaptive_simpson;
using testutil::beta_inc_quad;

TEST_CASE("incomplete beta closed-form spot values") {
  // B(x; 1, 1) is the identity.
  CHECK(incomplete_beta(0.5, 1, 1) == doctest::Approx(0.5).epsilon(1e-14));
  // Integral of t(1-t) from 0 to 1/2 is 1/12; the full integral is 1/6.
  CHECK(incomplete_beta(0.5, 2, 2) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK(incomplete_beta(1.0, 2, 2) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(incomplete_beta(0.0, 3, 4) == 0.0);
}

TEST_CASE("incomplete beta against adaptive quadrature") {
  const double abs[] = {0.5, 1.0, 2.0, 5.0};
  for (double a : abs) {
    for (double b : abs) {
      for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        const double got = incomplete_beta(x, a, b);
        const double want = beta_inc_quad(x, a, b);
        CHECK(std::fabs(got - want) <= 1e-10);
      }
    }
  }
}

TEST_CASE("incomplete beta is monotone in x") {
  const double abs[] = {0.5, 1.0, 2.0, 5.0};
  for (double a : abs) {
    for (double b : abs) {
      double prev = 0.0;
      for (int i = 0; i <= 100; ++i) {
        const double cur = incomplete_beta(i / 100.0, a, b);
        CHECK(cur >= prev - 1e-15);
        prev = cur;
      }
    }
  }
}

TEST_CASE("incomplete beta domain errors") {
  CHECK_THROWS_AS(incomplete_beta(-0.1, 2, 2), DomainError);
  CHECK_THROWS_AS(incomplete_beta(1.1, 2, 2), DomainError);
  CHECK_THROWS_AS(incomplete_beta(0.5, 0.0, 2), DomainError);
  CHECK_THROWS_AS(incomplete_beta(0.5, 2, -1.0), DomainError);
}

TEST_CASE("node_h vanishes on one-class differences") {
  const BetaParams p{2, 2};
  CHECK(node_h({5, 0}, p) == 0.0);
  CHECK(node_h({0, 7}, p) == 0.0);
  CHECK_THROWS_AS(node_h({0, 0}, p), ZeroDifferenceError);
}

TEST_CASE("node_h matches quadrature for a mixed difference") {
  const BetaParams p{2, 2};
  // d = (1,1) puts the slope value at c = 1/2.
  const double want =
      beta_inc_quad(0.5, 3, 2) + (beta_inc_quad(1.0, 2, 3) - beta_inc_quad(0.5, 2, 3));
  CHECK(node_h({1, 1}, p) == doctest::Approx(want).epsilon(1e-11));
}

TEST_CASE("l_max equals quadrature of the diagonal loss integral") {
  // For the diagonal hull the optimal loss is min(c*pi1, (1-c)*pi2).
  const auto lmax_quad = [](const Priors& pi, const BetaParams& p) {
    const double bnorm = complete_beta(p.alpha, p.beta);
    const auto u = [&](double c) {
      return std::pow(c, p.alpha - 1.0) * std::pow(1.0 - c, p.beta - 1.0) / bnorm;
    };
    const auto low = [&](double c) { return c * pi.pi1 * u(c); };
    const auto high = [&](double c) { return (1.0 - c) * pi.pi2 * u(c); };
    return adaptive_simpson(low, 0.0, pi.pi2, 1e-13) +
           adaptive_simpson(high, pi.pi2, 1.0, 1e-13);
  };
  const BetaParams p{2, 2};
  for (double pi1 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const Priors pi{pi1, 1.0 - pi1};
    CHECK(l_max(pi, p) == doctest::Approx(lmax_quad(pi, p)).epsilon(1e-10));
  }
}

TEST_CASE("l_max limits and symmetry") {
  const BetaParams p{2, 2};
  // Vanishes as the class-2 prior goes to zero.
  CHECK(l_max({1.0 - 1e-9, 1e-9}, p) < 1e-8);
  // Swapping priors mirrors the integral when alpha and beta swap too.
  const BetaParams swapped{5, 2};
  const BetaParams original{2, 5};
  CHECK(l_max({0.3, 0.7}, original) ==
        doctest::Approx(l_max({0.7, 0.3}, swapped)).epsilon(1e-12));
  CHECK_THROWS_AS(l_max({0.0, 1.0}, p), DomainError);
}

TEST_CASE("h_from_polyline endpoints of the quality scale") {
  const BetaParams p{2, 2};
  const Priors pi{0.4, 0.6};
  // Diagonal hull scores zero for any priors.
  HullPolyline diag{{{0, 0}, {6, 6}}, {6, 6}};
  CHECK(h_from_polyline(diag, pi, p) == doctest::Approx(0.0).epsilon(1e-12));
  // The perfect hull scores one.
  HullPolyline perfect{{{0, 0}, {4, 0}, {4, 9}}, {4, 9}};
  CHECK(h_from_polyline(perfect, pi, p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h_from_polyline(perfect, {0.9, 0.1}, p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("h_from_polyline rejects non-convex input") {
  const BetaParams p{2, 2};
  const Priors pi{0.5, 0.5};
  HullPolyline bad{{{0, 0}, {1, 3}, {4, 4}}, {4, 4}};
  CHECK_THROWS_AS(h_from_polyline(bad, pi, p), NonConvexInputError);
}

TEST_CASE("inserting a collinear vertex does not change the measure") {
  const BetaParams p{2, 3};
  const Priors pi{0.35, 0.65};
  HullPolyline q{{{0, 0}, {4, 2}, {6, 8}}, {6, 8}};
  HullPolyline split{{{0, 0}, {2, 1}, {4, 2}, {6, 8}}, {6, 8}};
  CHECK(h_from_polyline(q, pi, p) ==
        doctest::Approx(h_from_polyline(split, pi, p)).epsilon(1e-12));
}

TEST_CASE("offline H endpoints") {
  const BetaParams p{2, 2};
  // Perfectly separated stream.
  const std::vector<DataPoint> perfect{
      {0.1, Label::Class1}, {0.2, Label::Class1}, {0.8, Label::Class2}, {0.9, Label::Class2}};
  CHECK(*oracles::offline_h(perfect, std::nullopt, p) == doctest::Approx(1.0).epsilon(1e-12));
  // All scores equal: the hull is the diagonal.
  const std::vector<DataPoint> flat{
      {0.5, Label::Class1}, {0.5, Label::Class2}, {0.5, Label::Class1}, {0.5, Label::Class2}};
  CHECK(*oracles::offline_h(flat, std::nullopt, p) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(!oracles::offline_h({{0.5, Label::Class1}}, std::nullopt, p));
}
