#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pericontact/body.hpp"

namespace pericontact {

enum class HertzKind { sphere, roller, punch };

// Closed-form frictionless contact solutions: sphere on plane, roller
// (cylinder) on plane, rigid flat punch on half-space.
struct HertzCase {
  HertzKind kind = HertzKind::sphere;
  double radius = 0.0;      // R, m (sphere/roller)
  double half_width = 0.0;  // a, m (punch: given by the geometry)
  double load = 0.0;        // P: N (sphere) or N/m (roller, punch)
  double eff_modulus = 0.0; // E', Pa (unused by the punch profile)

  double contact_radius() const;  // a
  double peak_pressure() const;   // p_0 (sphere/roller)
  double mean_pressure() const;   // p_m (sphere/roller)
  double pressure(double x) const;  // throws on out-of-range x
};

// E' = ((1-nu1^2)/E1 + (1-nu2^2)/E2)^-1; nullptr marks a rigid body with
// zero compliance. Two rigid bodies are rejected.
double effective_modulus(const Material* m1, const Material* m2);

struct PressureSample {
  double x = 0.0;  // offset from the contact center, m
  double p = 0.0;  // simulated pressure, Pa
};

// Mean relative error in percent against the analytic profile. Samples must
// lie inside the profile's domain; empty input is rejected.
double mean_relative_error(std::span<const PressureSample> samples,
                           const HertzCase& reference);

struct ProfileFit {
  double p0 = 0.0;
  double a = 0.0;
  int iterations = 0;
};

// Gauss-Newton least-squares fit of p(x) = p0 sqrt(1 - (x/a)^2) to samples,
// seeded from the peak sample and the widest nonzero-pressure offset.
// Requires at least 5 samples; throws on non-convergence after 100
// iterations.
ProfileFit fit_contact_radius(std::span<const PressureSample> samples);

}  // namespace pericontact
