#pragma once

#include <functional>
#include <vector>

#include "pericontact/model.hpp"

namespace pericontact {

enum class SolveMode { dynamic, adr };

struct SolveConfig {
  SolveMode mode = SolveMode::adr;
  double dt = 1.0;  // seconds (dynamic) or pseudo-step (ADR, default 1)
  int max_steps = 40000;
  double tolerance = 1e-4;    // ADR: ||F||_inf / load-scale
  int output_every = 0;       // 0 = no periodic output callback
  double adr_safety = 5.0;    // factor on the Eq.-style density bound
  double damping_cap = 1.9;   // c <= cap / dt
  // Applied loads scale linearly from 0 to full over this many steps so the
  // quasi-static path avoids a crushing transient. 0 = loads on at step 1.
  int load_ramp_steps = 0;
};

struct StepRecord {
  int step = 0;
  double residual = 0.0;
  double damping = 0.0;
  double contact_total = 0.0;  // |total contact force| on rigid bodies, N
};

struct SolveReport {
  bool converged = false;
  int steps = 0;
  double residual = 0.0;
  std::vector<StepRecord> history;
};

// Called at the output cadence and once at the final step.
using OutputCallback =
    std::function<void(const Model&, int step, const std::vector<ContactPair>&)>;

// ADR fictitious densities per particle (kg/m^3): safety * (dt^2/4) * row sum
// of the linearized bond stiffness. Rigid slots are zero.
std::vector<double> adr_fictitious_density(const Model& model,
                                           const SolveConfig& config);

// One ADR half-step velocity update in density form; damping = 0 reduces to
// the undamped central difference.
inline double adr_velocity_update(double vel, double force_over_density,
                                  double damping, double dt) {
  return ((2.0 - damping * dt) * vel + 2.0 * dt * force_over_density) /
         (2.0 + damping * dt);
}

// Time integration: per step, Verlet-list maintenance, internal forces,
// contact forces, integration (leapfrog dynamics or ADR), output. ADR
// terminates when the force residual ratio drops below the tolerance.
SolveReport run(Model& model, const SolveConfig& config,
                const OutputCallback& output = {});

}  // namespace pericontact
