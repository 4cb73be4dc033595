#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nlfb/reaction.hpp"

using nlfb::Reaction;

TEST_CASE("logistic reaction basics") {
  auto f = Reaction::logistic(2.0, 4.0);
  CHECK(f(0.0) == 0.0);
  CHECK(f(0.5) == doctest::Approx(0.5 * (2.0 - 4.0 * 0.5)));  // u(a - b u)
  CHECK(f.u_star() == doctest::Approx(0.5));
  CHECK(f(f.u_star()) == doctest::Approx(0.0));
  CHECK(f.fprime0() == doctest::Approx(2.0));
  CHECK(f.is_quadratic());
  CHECK(f.quad_a() == doctest::Approx(2.0));
  CHECK(f.quad_b() == doctest::Approx(4.0));

  // |f'(u)| = |a - 2bu| peaks at an endpoint of [0, m].
  CHECK(f.lipschitz_on(0.5) == doctest::Approx(2.0));
  CHECK(f.lipschitz_on(1.0) == doctest::Approx(6.0));

  CHECK_THROWS_AS(Reaction::logistic(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Reaction::logistic(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("custom reaction accepts a monostable cubic") {
  // f(u) = u(1-u)(1+u/2) has f(0)=0, f(1)=0, correct signs, and f(u)/u
  // decreasing on (0, 1].
  auto cubic = [](double u) { return u * (1.0 - u) * (1.0 + 0.5 * u); };
  auto lip = [](double m) {
    double best = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double u = m * i / 1000.0;
      best = std::max(best, std::abs(1.0 - u - 1.5 * u * u));
    }
    return best;
  };
  auto f = Reaction::custom(cubic, 1.0, 1.0, lip, "cubic");
  CHECK_FALSE(f.is_quadratic());
  CHECK(f(0.5) == doctest::Approx(cubic(0.5)));
  CHECK(f.u_star() == doctest::Approx(1.0));
  CHECK(f.name() == "cubic");
}

TEST_CASE("custom reaction rejects shape violations") {
  auto lip1 = [](double) { return 10.0; };
  // Wrong sign above the claimed equilibrium.
  CHECK_THROWS_AS(Reaction::custom([](double u) { return u * (1.0 - u); }, 1.0, 0.5,
                                   lip1, "bad-star"),
                  std::invalid_argument);
  // f(0) != 0.
  CHECK_THROWS_AS(Reaction::custom([](double u) { return 0.1 + u * (1.0 - u); }, 1.0,
                                   1.0, lip1, "offset"),
                  std::invalid_argument);
  // f(u)/u increasing near 0 (subhomogeneity fails).
  CHECK_THROWS_AS(Reaction::custom([](double u) { return u * u * (1.0 - u); }, 0.0,
                                   1.0, lip1, "degenerate"),
                  std::invalid_argument);
}
