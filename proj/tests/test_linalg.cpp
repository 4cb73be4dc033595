#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "nlfb/linalg.hpp"

using namespace nlfb;

namespace {

// Dense reference multiply for residual checks.
std::vector<double> matvec(const std::vector<double>& a, std::size_t n,
                           const std::vector<double>& x) {
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y[i] += a[i * n + j] * x[j];
  return y;
}

}  // namespace

TEST_CASE("dense LU solves random systems") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t n : {1u, 2u, 5u, 40u, 130u}) {
    std::vector<double> a(n * n);
    for (auto& v : a) v = dist(rng);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] += 3.0;  // keep well conditioned
    std::vector<double> x_true(n);
    for (auto& v : x_true) v = dist(rng);
    auto b = matvec(a, n, x_true);

    DenseLU lu(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) lu.at(i, j) = a[i * n + j];
    lu.factor();
    CHECK_FALSE(lu.near_singular());
    lu.solve(b);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(b[i] == doctest::Approx(x_true[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("banded LU agrees with dense LU") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  struct Case { std::size_t n, kl, ku; };
  for (auto [n, kl, ku] : {Case{6, 1, 1}, Case{30, 3, 5}, Case{100, 12, 12},
                           Case{64, 0, 2}, Case{50, 4, 0}}) {
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j);
        if (off > static_cast<std::ptrdiff_t>(kl) || -off > static_cast<std::ptrdiff_t>(ku))
          continue;
        a[i * n + j] = dist(rng);
      }
      a[i * n + i] += 2.5;
    }
    std::vector<double> x_true(n);
    for (auto& v : x_true) v = dist(rng);
    auto b1 = matvec(a, n, x_true);
    auto b2 = b1;

    BandedLU band(n, kl, ku);
    DenseLU dense(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (a[i * n + j] != 0.0 || i == j) {
          dense.at(i, j) = a[i * n + j];
          const std::ptrdiff_t off =
              static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j);
          if (off <= static_cast<std::ptrdiff_t>(kl) && -off <= static_cast<std::ptrdiff_t>(ku))
            band.at(i, j) = a[i * n + j];
        } else {
          dense.at(i, j) = 0.0;
        }
      }
    }
    band.factor();
    dense.factor();
    band.solve(b1);
    dense.solve(b2);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(b1[i] == doctest::Approx(x_true[i]).epsilon(1e-9));
      CHECK(b1[i] == doctest::Approx(b2[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("banded LU with forced pivoting stays accurate") {
  // Tiny diagonal forces row interchanges at every step.
  const std::size_t n = 40, kl = 3, ku = 3;
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j);
      if (off > static_cast<std::ptrdiff_t>(kl) || -off > static_cast<std::ptrdiff_t>(ku))
        continue;
      a[i * n + j] = (i == j) ? 1e-8 : dist(rng);
    }
  }
  std::vector<double> x_true(n);
  std::uniform_real_distribution<double> xs(-1.0, 1.0);
  for (auto& v : x_true) v = xs(rng);
  auto b = matvec(a, n, x_true);

  BandedLU band(n, kl, ku);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i > kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j)
      band.at(i, j) = a[i * n + j];
  band.factor();
  band.solve(b);
  // Residual check (forward error can be larger than 1e-9 here; the residual
  // is what partial pivoting guarantees).
  auto r = matvec(a, n, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double bi = 0.0;
    for (std::size_t j = 0; j < n; ++j) bi += a[i * n + j] * x_true[j];
    worst = std::fmax(worst, std::fabs(r[i] - bi));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("singular pivot is regularized, not fatal") {
  DenseLU lu(2);
  lu.at(0, 0) = 1.0; lu.at(0, 1) = 2.0;
  lu.at(1, 0) = 2.0; lu.at(1, 1) = 4.0;  // rank 1
  lu.factor();
  CHECK(lu.near_singular());
  std::vector<double> b = {1.0, 2.0};
  lu.solve(b);
  for (double v : b) CHECK(std::isfinite(v));
}
