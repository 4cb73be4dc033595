#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nlfb/kernel.hpp"
#include "nlfb/reaction.hpp"

namespace nlfb {

/// Boundary behaviour at the fixed wall x = 0. With a dirichlet wall,
/// individuals jumping across x = 0 are lost (full sink d*u); with a neumann
/// wall they never attempt the jump, leaving the position-dependent sink
/// d*(1 - tail(x))*u.
enum class Boundary { dirichlet, neumann };

/// Single-species model on [0, h(t)] with a moving front at h.
struct ScalarSpec {
  Boundary boundary = Boundary::dirichlet;
  double d = 1.0;
  double mu = 1.0;
  Kernel kernel = Kernel::laplace();
  Reaction reaction = Reaction::logistic(1.0, 1.0);
};

/// Prey u1 / predator u2 pair sharing one front. Both densities use the
/// dirichlet wall; the front moves with the mu-weighted sum of both fluxes.
struct PredPreySpec {
  double d1 = 1.0, d2 = 1.0;
  double mu1 = 1.0, mu2 = 1.0;
  Kernel kernel1 = Kernel::laplace();
  Kernel kernel2 = Kernel::laplace();
  double a1 = 1.0, b1 = 1.0, c1 = 0.25;  // prey: u1*(a1 - b1*u1 - c1*u2)
  double a2 = 0.25, b2 = 1.0, c2 = 0.25; // predator: u2*(a2 - b2*u2 + c2*u1)

  /// a1*b1*b2 > a2*b1*c1 + a1*c1*c2, the regime where the prey persists
  /// everywhere behind the front.
  bool weak_predation() const {
    return a1 * b1 * b2 > a2 * b1 * c1 + a1 * c1 * c2;
  }
  /// Prey bound max(sup u10, a1/b1) from the comparison argument.
  double prey_bound(double sup_u10) const;
  /// Predator bound given the prey bound.
  double predator_bound(double sup_u20, double prey_b) const;
};

using ModelSpec = std::variant<ScalarSpec, PredPreySpec>;

/// Initial density shape on [0, h0), vanishing at h0.
struct InitialProfile {
  enum class Preset { cosine_bump, constant_cap, table };
  Preset preset = Preset::cosine_bump;
  double amplitude = 1.0;
  double ramp = 0.0;  // constant_cap: linear taper width, 0 selects h0/8
  std::vector<double> xs, vals;  // table samples, vals.back() must be 0 at h0

  double operator()(double x, double h0) const;
};

struct InitialData {
  double h0 = 2.0;
  InitialProfile u1;
  std::optional<InitialProfile> u2;  // predator profile (predprey only)
};

/// One hypothesis check: name, verdict and the number or message that
/// witnessed it.
struct HypothesisCheck {
  std::string name;
  bool pass = false;
  std::string witness;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  bool all_pass = true;
  std::string summary() const;
};

/// Verifies the standing hypotheses (kernel shape and mass, moment
/// finiteness, reaction shape, initial-data compatibility, predator-prey
/// coefficient signs and the weak-predation inequality). Reports rather than
/// throws: an infinite first moment, for example, is a legitimate regime.
ValidationReport validate_spec(const ModelSpec& spec, const InitialData& init);

/// Throws std::invalid_argument when parameters are structurally unusable
/// (nonpositive rates, missing predator profile, initial profile violating
/// positivity or the vanishing front condition).
void require_usable(const ModelSpec& spec, const InitialData& init);

}  // namespace nlfb
