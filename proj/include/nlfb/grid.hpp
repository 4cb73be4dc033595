#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nlfb {

/// Uniform grid x_i = i*dx. Quadrature is composite trapezoid; profiles that
/// end at a moving front h get a partial last cell with the integrand
/// extending linearly to 0 at h.

/// Weights for int_0^{n*dx} g, g sampled at x_0..x_n (n+1 values).
inline std::vector<double> trapezoid_weights(std::size_t n, double dx) {
  if (n == 0) throw std::invalid_argument("trapezoid_weights: need at least one cell");
  std::vector<double> w(n + 1, dx);
  w.front() = 0.5 * dx;
  w.back() = 0.5 * dx;
  return w;
}

/// Weights for int_0^h g where g is sampled at x_0..x_{m-1}, the last sample
/// satisfies x_{m-1} < h <= x_{m-1} + dx, and g falls linearly to 0 at h.
inline std::vector<double> front_weights(std::size_t m, double dx, double h) {
  if (m == 0) throw std::invalid_argument("front_weights: need at least one sample");
  const double x_last = dx * static_cast<double>(m - 1);
  if (!(h > x_last) || h > x_last + dx + 1e-12 * dx) {
    throw std::invalid_argument("front_weights: h must lie in the cell after the last sample");
  }
  if (m == 1) return {0.5 * h};
  std::vector<double> w(m, dx);
  w.front() = 0.5 * dx;
  w.back() = 0.5 * dx + 0.5 * (h - x_last);
  return w;
}

/// In-place variant of front_weights for the stepping loop: resizes and
/// refreshes only the entries that change as h moves.
inline void update_front_weights(std::vector<double>& w, std::size_t m, double dx, double h) {
  const std::size_t old = w.size();
  if (m == 0) throw std::invalid_argument("update_front_weights: need at least one sample");
  w.resize(m, dx);
  if (old > 0 && old <= m && old >= 2) w[old - 1] = dx;  // previous partial cell is interior now
  const double x_last = dx * static_cast<double>(m - 1);
  if (m == 1) {
    w[0] = 0.5 * h;
    return;
  }
  w[0] = 0.5 * dx;
  w[m - 1] = 0.5 * dx + 0.5 * (h - x_last);
}

}  // namespace nlfb
