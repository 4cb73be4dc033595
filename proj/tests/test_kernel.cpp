#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nlfb/kernel.hpp"
#include "oracles.hpp"

using nlfb::Kernel;

namespace {

// Numerically integrates the density tail and first moment so the closed
// forms in the kernel classes are checked against an independent method.
void check_against_quadrature(const Kernel& k, bool expect_finite_moment) {
  // Unit mass.
  auto density = [&](double x) { return k.density(x); };
  const double half_mass = oracle::integrate_to_inf(density, 0.0, 1e-12);
  CHECK(2.0 * half_mass == doctest::Approx(1.0).epsilon(1e-9));

  // T(z) = int_z^inf J for a few z.
  for (double z : {0.0, 0.3, 1.0, 2.5}) {
    const double want = oracle::integrate_to_inf(density, z, 1e-13);
    CHECK(k.tail(z) == doctest::Approx(want).epsilon(1e-9));
  }
  CHECK(k.tail(0.0) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK(k.first_moment_finite() == expect_finite_moment);
  if (expect_finite_moment) {
    auto xj = [&](double x) { return x * k.density(x); };
    const double want_moment = oracle::integrate_to_inf(xj, 0.0, 1e-12);
    CHECK(k.first_moment() == doctest::Approx(want_moment).epsilon(1e-8));

    // S(z) = int_z^inf T, and S(0) equals the first moment.
    auto tail = [&](double z) { return k.tail(z); };
    for (double z : {0.0, 0.7, 1.9}) {
      const double want = oracle::integrate_to_inf(tail, z, 1e-12);
      CHECK(k.tail_integral(z) == doctest::Approx(want).epsilon(1e-8));
    }
    CHECK(k.tail_integral(0.0) == doctest::Approx(k.first_moment()).epsilon(1e-10));
  } else {
    CHECK_THROWS_AS((void)k.tail_integral(0.0), std::logic_error);
  }
}

}  // namespace

TEST_CASE("exponential kernel closed forms") {
  for (double sigma : {0.5, 1.0, 2.0}) {
    auto k = Kernel::laplace(sigma);
    check_against_quadrature(k, true);
    CHECK(k.density(0.0) == doctest::Approx(1.0 / (2.0 * sigma)));
    CHECK(k.tail(1.0) == doctest::Approx(0.5 * std::exp(-1.0 / sigma)));
    CHECK(k.first_moment() == doctest::Approx(0.5 * sigma));
    CHECK(k.tail_integral(1.0) ==
          doctest::Approx(0.5 * sigma * std::exp(-1.0 / sigma)));
    CHECK(std::isinf(k.support_radius()));
  }
}

TEST_CASE("compact polynomial kernel closed forms") {
  for (double radius : {1.0, 2.0}) {
    auto k = Kernel::polynomial_compact(radius);
    check_against_quadrature(k, true);
    CHECK(k.density(0.0) == doctest::Approx(15.0 / (16.0 * radius)));
    CHECK(k.density(radius) == doctest::Approx(0.0));
    CHECK(k.density(radius * 1.01) == 0.0);
    CHECK(k.tail(radius) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(k.tail_integral(0.0) == doctest::Approx(5.0 * radius / 32.0));
    CHECK(k.support_radius() == doctest::Approx(radius));
  }
}

TEST_CASE("algebraic tail kernel closed forms") {
  auto heavy = Kernel::algebraic_tail(3.0);  // finite moment
  check_against_quadrature(heavy, true);
  CHECK(heavy.first_moment() == doctest::Approx(0.5));
  CHECK(heavy.tail(1.0) == doctest::Approx(0.5 * std::pow(2.0, -2.0)));

  auto critical = Kernel::algebraic_tail(2.0);  // infinite moment
  check_against_quadrature(critical, false);
  CHECK(critical.tail(3.0) == doctest::Approx(0.5 / 4.0));

  auto slow = Kernel::algebraic_tail(1.5);
  CHECK_FALSE(slow.first_moment_finite());

  CHECK_THROWS_AS(Kernel::algebraic_tail(1.0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::algebraic_tail(0.5), std::invalid_argument);
}

TEST_CASE("tail radius brackets a small mass threshold") {
  auto k = Kernel::laplace(1.0);
  const double r = k.tail_radius(1e-10);
  // T(r) = 0.5 exp(-r) = 1e-10 at r = ln(5e9).
  CHECK(r == doctest::Approx(std::log(0.5 / 1e-10)).epsilon(1e-6));
  CHECK(k.tail(r) <= 1e-10 * (1.0 + 1e-9));

  auto compact = Kernel::polynomial_compact(2.0);
  CHECK(compact.tail_radius(1e-10) <= 2.0 + 1e-9);
}

TEST_CASE("tabulated kernel reproduces its samples and integrals") {
  // Triangle-ish profile sampled on a uniform grid; the table is
  // renormalized to unit mass, so compare ratios and exact integrals.
  std::vector<double> xs, js;
  const double dx = 0.125, radius = 2.0;
  for (double x = -radius; x <= radius + 1e-12; x += dx) {
    xs.push_back(x);
    js.push_back(std::max(0.0, 1.0 - std::abs(x) / radius));
  }
  auto k = Kernel::from_table(xs, js);

  // Mass of the interpolant is exactly 1 after renormalization.
  auto density = [&](double x) { return k.density(x); };
  const double mass = 2.0 * oracle::integrate(density, 0.0, radius, 1e-12);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));

  // tail() agrees with quadrature of the interpolant everywhere, including
  // off-node points.
  for (double z : {0.0, 0.1, 0.4211, 1.0, 1.77, 2.0, 2.4}) {
    const double want = oracle::integrate(density, z, radius, 1e-13);
    CHECK(k.tail(z) == doctest::Approx(z >= radius ? 0.0 : want).epsilon(1e-9));
  }

  CHECK(k.first_moment_finite());
  auto xj = [&](double x) { return x * k.density(x); };
  CHECK(k.first_moment() ==
        doctest::Approx(oracle::integrate(xj, 0.0, radius, 1e-13)).epsilon(1e-8));
  auto tail = [&](double z) { return k.tail(z); };
  for (double z : {0.0, 0.6, 1.3}) {
    CHECK(k.tail_integral(z) ==
          doctest::Approx(oracle::integrate(tail, z, radius, 1e-12)).epsilon(1e-7));
  }
}

TEST_CASE("tabulated kernel rejects malformed input") {
  const std::vector<double> xs = {-1.0, 0.0, 1.0};
  const std::vector<double> negative = {0.1, -0.2, 0.1};
  const std::vector<double> asymmetric = {0.1, 0.5, 0.2};
  const std::vector<double> zero = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(Kernel::from_table(xs, negative), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::from_table(xs, asymmetric), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::from_table(xs, zero), std::invalid_argument);

  const std::vector<double> unsorted_x = {-1.0, 1.0, 0.0};
  const std::vector<double> vals = {0.1, 0.1, 0.5};
  CHECK_THROWS_AS(Kernel::from_table(unsorted_x, vals), std::invalid_argument);

  const std::vector<double> off_centre_x = {0.0, 1.0, 2.0};
  const std::vector<double> decay = {0.5, 0.2, 0.0};
  CHECK_THROWS_AS(Kernel::from_table(off_centre_x, decay), std::invalid_argument);
}

TEST_CASE("negative tail argument is rejected") {
  auto k = Kernel::laplace(1.0);
  CHECK_THROWS_AS((void)k.tail(-0.1), std::invalid_argument);
}

TEST_CASE("lattice half-sums match independent summation oracles") {
  // Exponential: check the geometric closed form against brute-force
  // summation and against the analytic full-lattice mass t/tanh(t).
  for (double dx : {0.5, 0.1, 0.02}) {
    auto k = Kernel::laplace(0.8);
    const double half = k.lattice_half_sum(dx);
    double brute = 0.0;
    for (int j = 4000; j >= 1; --j) brute += k.density(j * dx);
    CHECK(half == doctest::Approx(brute).epsilon(1e-13));
    const double t = dx / (2.0 * 0.8);
    CHECK(dx * (k.density(0.0) + 2.0 * half) ==
          doctest::Approx(t / std::tanh(t)).epsilon(1e-13));
  }

  // Algebraic tails: partial sum plus a midpoint-rule remainder for the
  // rest. The midpoint error is bounded by |f'(N)|/24, far below tolerance.
  for (double gamma : {2.05, 2.5, 4.0}) {
    auto k = Kernel::algebraic_tail(gamma);
    const double dx = 0.1;
    const std::size_t N = 100000;
    double brute = 0.0;
    for (std::size_t j = N; j >= 1; --j) brute += k.density(j * dx);
    brute += 0.5 / dx * std::pow(1.0 + (N + 0.5) * dx, 1.0 - gamma);
    CHECK(k.lattice_half_sum(dx) == doctest::Approx(brute).epsilon(1e-12));
  }

  // Compact and tabulated supports: plain finite sums.
  {
    auto k = Kernel::polynomial_compact(1.3);
    double brute = 0.0;
    for (int j = 1; j * 0.25 < 2.0; ++j) brute += k.density(j * 0.25);
    CHECK(k.lattice_half_sum(0.25) == doctest::Approx(brute).epsilon(1e-14));
  }
  {
    const std::vector<double> xs = {-2.0, -1.0, 0.0, 1.0, 2.0};
    const std::vector<double> vs = {0.0, 0.2, 0.35, 0.2, 0.0};
    auto k = Kernel::from_table(xs, vs);
    double brute = 0.0;
    for (int j = 1; j * 0.3 < 2.5; ++j) brute += k.density(j * 0.3);
    CHECK(k.lattice_half_sum(0.3) == doctest::Approx(brute).epsilon(1e-14));
  }
}
