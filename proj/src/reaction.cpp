#include "nlfb/reaction.hpp"

#include <cmath>
#include <stdexcept>

namespace nlfb {

Reaction Reaction::logistic(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("logistic reaction: a and b must be positive and finite");
  }
  Reaction r;
  r.quadratic_ = true;
  r.a_ = a;
  r.b_ = b;
  r.fprime0_ = a;
  r.u_star_ = a / b;
  r.name_ = "logistic";
  return r;
}

Reaction Reaction::custom(std::function<double(double)> f, double fprime0,
                          double u_star, std::function<double(double)> lip_on,
                          const std::string& name) {
  if (!f || !lip_on) throw std::invalid_argument("custom reaction: callbacks must be set");
  if (!(fprime0 > 0.0)) {
    throw std::invalid_argument("custom reaction: f'(0) must be positive");
  }
  if (!(u_star > 0.0) || !std::isfinite(u_star)) {
    throw std::invalid_argument("custom reaction: u* must be positive and finite");
  }
  if (std::fabs(f(0.0)) > 1e-12) {
    throw std::invalid_argument("custom reaction: f(0) must vanish");
  }
  const double fu = f(u_star);
  if (std::fabs(fu) > 1e-9 * std::fmax(1.0, fprime0 * u_star)) {
    throw std::invalid_argument("custom reaction: f(u*) must vanish");
  }
  // Sampled shape checks: one sign change at u*, and f(u)/u decreasing.
  const int samples = 400;
  double prev_ratio = fprime0;
  for (int i = 1; i <= samples; ++i) {
    const double u = 1.5 * u_star * static_cast<double>(i) / samples;
    const double v = f(u);
    if (!std::isfinite(v)) throw std::invalid_argument("custom reaction: f produced a non-finite value");
    const double pad = 1e-9 * std::fmax(1.0, fprime0 * u_star);
    if (u < u_star - 1e-6 * u_star && v <= -pad) {
      throw std::invalid_argument("custom reaction: f must stay positive below u*");
    }
    if (u > u_star + 1e-6 * u_star && v >= pad) {
      throw std::invalid_argument("custom reaction: f must stay negative above u*");
    }
    const double ratio = v / u;
    if (ratio > prev_ratio + 1e-9 * std::fmax(1.0, fprime0)) {
      throw std::invalid_argument("custom reaction: f(u)/u must be decreasing");
    }
    prev_ratio = ratio;
  }
  Reaction r;
  r.quadratic_ = false;
  r.f_ = std::move(f);
  r.lip_ = std::move(lip_on);
  r.fprime0_ = fprime0;
  r.u_star_ = u_star;
  r.name_ = name;
  return r;
}

double Reaction::lipschitz_on(double m) const {
  if (!(m >= 0.0)) throw std::invalid_argument("Reaction::lipschitz_on: m must be nonnegative");
  if (quadratic_) {
    // f' = a - 2bu, extremes at the interval ends.
    return std::fmax(a_, std::fabs(a_ - 2.0 * b_ * m));
  }
  return lip_(m);
}

}  // namespace nlfb
