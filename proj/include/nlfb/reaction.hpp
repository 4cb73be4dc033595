#pragma once

#include <functional>
#include <string>

namespace nlfb {

/// Monostable growth law f with f(0) = 0, a unique positive zero u* and
/// f(u)/u decreasing. The carrying value u* and Lipschitz bounds ride along
/// because the solvers need them for a-priori bounds and step-size limits.
class Reaction {
 public:
  /// f(u) = u*(a - b*u), a,b > 0. u* = a/b.
  static Reaction logistic(double a, double b);

  /// User-supplied law. lip_on(m) must bound sup_{[0,m]} |f'|. The shape
  /// conditions (single positive zero, f(u)/u decreasing) are enforced by
  /// sampling; laws violating them are rejected.
  static Reaction custom(std::function<double(double)> f, double fprime0,
                         double u_star, std::function<double(double)> lip_on,
                         const std::string& name = "custom");

  double operator()(double u) const {
    return quadratic_ ? u * (a_ - b_ * u) : f_(u);
  }

  /// f'(0), the low-density growth rate.
  double fprime0() const { return fprime0_; }
  /// Positive zero of f (carrying value).
  double u_star() const { return u_star_; }
  /// sup_{[0,m]} |f'|.
  double lipschitz_on(double m) const;

  /// True for the logistic fast path used by the fused update kernels.
  bool is_quadratic() const { return quadratic_; }
  double quad_a() const { return a_; }
  double quad_b() const { return b_; }

  const std::string& name() const { return name_; }

 private:
  Reaction() = default;

  bool quadratic_ = true;
  double a_ = 1.0, b_ = 1.0;
  double fprime0_ = 1.0, u_star_ = 1.0;
  std::function<double(double)> f_;
  std::function<double(double)> lip_;
  std::string name_ = "logistic";
};

}  // namespace nlfb
