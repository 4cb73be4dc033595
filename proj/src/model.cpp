#include "nlfb/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace nlfb {
namespace {

const double kPi = std::acos(-1.0);

// Composite Simpson on a fixed grid (cells must be even); enough for
// witness-grade quadrature.
double simpson(const std::function<double(double)>& f, double a, double b, int cells) {
  const double h = (b - a) / cells;
  double acc = f(a) + f(b);
  for (int i = 1; i < cells; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void check(ValidationReport& rep, const std::string& name, bool pass,
           const std::string& witness) {
  rep.checks.push_back({name, pass, witness});
  rep.all_pass = rep.all_pass && pass;
}

void validate_kernel(ValidationReport& rep, const Kernel& k, const std::string& tag) {
  // Evenness and boundedness, sampled over the effective support.
  const double r = std::isfinite(k.support_radius()) ? k.support_radius()
                                                     : k.tail_radius(1e-8);
  bool even = true, bounded = true;
  double j_max = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double x = r * i / 64.0;
    const double lhs = k.density(x), rhs = k.density(-x);
    if (std::fabs(lhs - rhs) > 1e-12 * std::fmax(1.0, lhs)) even = false;
    if (!std::isfinite(lhs)) bounded = false;
    j_max = std::fmax(j_max, lhs);
  }
  check(rep, tag + "-even", even, "max sampled density " + fmt(j_max));
  check(rep, tag + "-bounded", bounded, "sampled on [0, " + fmt(r) + "]");
  const double j0 = k.density(0.0);
  check(rep, tag + "-positive-at-zero", j0 > 0.0, "J(0) = " + fmt(j0));

  // Unit mass over the effective support (plus the analytic tail remainder).
  const double body = simpson([&](double x) { return k.density(x); }, 0.0, r, 4096);
  const double mass = 2.0 * (body + k.tail(r));
  check(rep, tag + "-unit-mass", std::fabs(mass - 1.0) < 1e-8, "mass = " + fmt(mass));

  // First moment over doubling windows Z = 2^w: stabilized when the relative
  // change stays below 1e-4 for three consecutive doublings. The declared
  // flag is analytic truth and decides the verdict; the windows are the
  // numeric witness (slow tails converge too slowly to overrule a closed
  // form).
  double total = simpson([&](double z) { return z * k.density(z); }, 0.0, 1.0, 512);
  double lo = 1.0;
  int stable = 0, doublings = 0;
  bool stabilized = false;
  for (int w = 0; w < 48 && !stabilized; ++w) {
    const double hi = 2.0 * lo;
    const double piece = simpson([&](double z) { return z * k.density(z); }, lo, hi, 512);
    const double next = total + piece;
    ++doublings;
    if (std::fabs(next - total) < 1e-4 * std::fmax(std::fabs(next), 1e-300)) {
      stabilized = ++stable >= 3;
    } else {
      stable = 0;
    }
    total = next;
    lo = hi;
    if (lo >= k.support_radius()) stabilized = true;
  }
  const bool finite = k.first_moment_finite();
  check(rep, tag + "-first-moment-finite", finite,
        finite ? "moment " + fmt(k.first_moment()) + "; windows " +
                     (stabilized ? "stabilized" : "still moving") + " at Z=2^" +
                     std::to_string(doublings) + " (total " + fmt(total) + ")"
               : "diverges; windows reached " + fmt(total) + " at Z=2^" +
                     std::to_string(doublings) + " without stabilizing");
}

void validate_reaction(ValidationReport& rep, const Reaction& f, const std::string& tag) {
  check(rep, tag + "-zero-at-origin", std::fabs(f(0.0)) <= 1e-14, "f(0) = " + fmt(f(0.0)));
  check(rep, tag + "-positive-slope", f.fprime0() > 0.0, "f'(0) = " + fmt(f.fprime0()));
  const double us = f.u_star();
  bool sign_ok = std::fabs(f(us)) <= 1e-9 * std::fmax(1.0, f.fprime0() * us);
  bool ratio_ok = true;
  double prev_ratio = f.fprime0() + 1e-12;
  for (int i = 1; i <= 200; ++i) {
    const double u = 1.5 * us * i / 200.0;
    const double v = f(u);
    if (u < us * (1.0 - 1e-6) && v < 0.0) sign_ok = false;
    if (u > us * (1.0 + 1e-6) && v > 0.0) sign_ok = false;
    const double ratio = v / u;
    if (ratio > prev_ratio + 1e-10 * std::fmax(1.0, f.fprime0())) ratio_ok = false;
    prev_ratio = ratio;
  }
  check(rep, tag + "-single-zero", sign_ok, "u* = " + fmt(us));
  check(rep, tag + "-subhomogeneous", ratio_ok, "f(u)/u decreasing on (0, 1.5u*]");
}

void validate_initial(ValidationReport& rep, const InitialProfile& p, double h0,
                      const std::string& tag) {
  const double at_front = p(h0, h0);
  check(rep, tag + "-vanishes-at-front", std::fabs(at_front) <= 1e-12,
        "u0(h0) = " + fmt(at_front));
  bool positive = true;
  double lowest = p(0.0, h0);
  for (int i = 0; i < 256; ++i) {
    const double x = h0 * (i + 0.5) / 256.0;
    const double v = p(x, h0);
    lowest = std::fmin(lowest, v);
    if (v <= 0.0) positive = false;
  }
  check(rep, tag + "-positive-inside", positive, "min sampled value " + fmt(lowest));
}

}  // namespace

double PredPreySpec::prey_bound(double sup_u10) const {
  return std::fmax(sup_u10, a1 / b1);
}

double PredPreySpec::predator_bound(double sup_u20, double prey_b) const {
  return std::fmax(sup_u20, (a2 + c2 * prey_b) / b2);
}

double InitialProfile::operator()(double x, double h0) const {
  // At x == h0 the profile's own formula is evaluated, so a shape that fails
  // to vanish at the front is visible to the validators instead of being
  // masked by the outside-the-domain cutoff.
  if (x < 0.0 || x > h0) return 0.0;
  switch (preset) {
    case Preset::cosine_bump:
      return amplitude * std::cos(kPi * x / (2.0 * h0));
    case Preset::constant_cap: {
      const double w = ramp > 0.0 ? ramp : h0 / 8.0;
      const double edge = h0 - std::fmin(w, h0);
      if (x <= edge) return amplitude;
      return amplitude * (h0 - x) / (h0 - edge);
    }
    case Preset::table: {
      if (xs.size() < 2) return 0.0;
      if (x <= xs.front()) return vals.front();
      if (x >= xs.back()) return vals.back();
      const auto it = std::upper_bound(xs.begin(), xs.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
      const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
      return vals[i] + t * (vals[i + 1] - vals[i]);
    }
  }
  return 0.0;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "pass " : "FAIL ") << c.name << ": " << c.witness << "\n";
  }
  return os.str();
}

ValidationReport validate_spec(const ModelSpec& spec, const InitialData& init) {
  ValidationReport rep;
  if (const auto* s = std::get_if<ScalarSpec>(&spec)) {
    check(rep, "diffusion-positive", s->d > 0.0, "d = " + fmt(s->d));
    check(rep, "expansion-positive", s->mu > 0.0, "mu = " + fmt(s->mu));
    validate_kernel(rep, s->kernel, "kernel");
    validate_reaction(rep, s->reaction, "reaction");
    check(rep, "front-positive", init.h0 > 0.0, "h0 = " + fmt(init.h0));
    validate_initial(rep, init.u1, init.h0, "initial");
  } else {
    const auto& p = std::get<PredPreySpec>(spec);
    const bool rates = p.d1 > 0.0 && p.d2 > 0.0 && p.mu1 > 0.0 && p.mu2 > 0.0;
    check(rep, "rates-positive", rates,
          "d1,d2,mu1,mu2 = " + fmt(p.d1) + "," + fmt(p.d2) + "," + fmt(p.mu1) + "," + fmt(p.mu2));
    const bool coeffs = p.a1 > 0.0 && p.b1 > 0.0 && p.c1 > 0.0 && p.a2 > 0.0 &&
                        p.b2 > 0.0 && p.c2 > 0.0;
    check(rep, "coefficients-positive", coeffs, "a1..c2 all positive required");
    const double lhs = p.a1 * p.b1 * p.b2;
    const double rhs = p.a2 * p.b1 * p.c1 + p.a1 * p.c1 * p.c2;
    check(rep, "weak-predation", p.weak_predation(),
          fmt(lhs) + " vs " + fmt(rhs) + " (lhs must exceed rhs)");
    validate_kernel(rep, p.kernel1, "kernel1");
    validate_kernel(rep, p.kernel2, "kernel2");
    check(rep, "front-positive", init.h0 > 0.0, "h0 = " + fmt(init.h0));
    validate_initial(rep, init.u1, init.h0, "initial-u1");
    if (init.u2.has_value()) {
      validate_initial(rep, *init.u2, init.h0, "initial-u2");
    } else {
      check(rep, "initial-u2-present", false, "predator profile missing");
    }
  }
  return rep;
}

void require_usable(const ModelSpec& spec, const InitialData& init) {
  if (!(init.h0 > 0.0) || !std::isfinite(init.h0)) {
    throw std::invalid_argument("initial data: h0 must be positive and finite");
  }
  if (const auto* s = std::get_if<ScalarSpec>(&spec)) {
    if (!(s->d > 0.0) || !(s->mu > 0.0)) {
      throw std::invalid_argument("scalar model: d and mu must be positive");
    }
  } else {
    const auto& p = std::get<PredPreySpec>(spec);
    if (!(p.d1 > 0.0) || !(p.d2 > 0.0) || !(p.mu1 > 0.0) || !(p.mu2 > 0.0)) {
      throw std::invalid_argument("predator-prey model: d and mu rates must be positive");
    }
    if (!(p.a1 > 0.0) || !(p.b1 > 0.0) || !(p.c1 > 0.0) || !(p.a2 > 0.0) ||
        !(p.b2 > 0.0) || !(p.c2 > 0.0)) {
      throw std::invalid_argument("predator-prey model: all six coefficients must be positive");
    }
    if (!init.u2.has_value()) {
      throw std::invalid_argument("predator-prey model: predator initial profile missing");
    }
  }
  // Initial profiles must vanish at the front and stay positive inside.
  auto probe = [&](const InitialProfile& p, const char* who) {
    if (std::fabs(p(init.h0, init.h0)) > 1e-12) {
      throw std::invalid_argument(std::string(who) + ": profile must vanish at h0");
    }
    for (int i = 0; i < 64; ++i) {
      const double x = init.h0 * (i + 0.5) / 64.0;
      if (!(p(x, init.h0) > 0.0)) {
        throw std::invalid_argument(std::string(who) + ": profile must be positive inside (0, h0)");
      }
    }
  };
  probe(init.u1, "initial u1");
  if (init.u2.has_value()) probe(*init.u2, "initial u2");
}

}  // namespace nlfb
