#include "pericontact/solver.hpp"

#include <algorithm>
#include <cmath>

#include "pericontact/errors.hpp"
#include "pericontact/pd_core.hpp"

namespace pericontact {

namespace {

// Scale for the convergence ratio: the largest applied load density, with
// rigid-body loads spread over the deformable volume.
double load_scale(const Model& model) {
  double scale = 0.0;
  double def_volume = 0.0;
  for (const auto& body : model.bodies) {
    if (body.deformable()) {
      for (std::size_t i = 0; i < body.particles.size(); ++i) {
        scale = std::max(scale, norm(body.particles.body_force[i]));
        def_volume += body.particles.volume[i];
      }
    }
  }
  for (const auto& body : model.bodies) {
    if (!body.deformable() && body.rigid.type == RigidMotionType::load_dof &&
        def_volume > 0.0)
      scale = std::max(scale, std::abs(body.rigid.load) / def_volume);
  }
  return scale;
}

// Upper bound on the contact stiffness a loaded rigid body can see, for its
// ADR fictitious mass: potential slave columns times the maximum tangent
// stiffness of one fully engaged pair.
double rigid_stiffness_bound(const Model& model, std::size_t rigid_index) {
  const Body& rb = model.bodies[rigid_index];
  if (rb.faces.empty()) return 0.0;

  Vec3 lo = rb.particles.current(std::size_t(rb.faces[0].nodes[0]));
  Vec3 hi = lo;
  for (const auto& f : rb.faces) {
    for (auto nid : f.nodes) {
      Vec3 p = rb.particles.current(std::size_t(nid));
      lo.x = std::min(lo.x, p.x); hi.x = std::max(hi.x, p.x);
      lo.y = std::min(lo.y, p.y); hi.y = std::max(hi.y, p.y);
      lo.z = std::min(lo.z, p.z); hi.z = std::max(hi.z, p.z);
    }
  }

  const Vec3 axis = rb.rigid.axis;
  double k_sum = 0.0;
  const std::size_t nb = model.bodies.size();
  for (std::size_t sb = 0; sb < nb; ++sb) {
    const Body& slave = model.bodies[sb];
    if (!slave.deformable()) continue;
    double dx = slave.disc.dx;
    double trigger = model.contact_config.trigger_factor * dx;
    double k_pair = 1.5 * model.stiffness_table()[sb * nb + rigid_index] *
                    std::sqrt(std::max(trigger, dx));
    int columns = 0;
    for (std::size_t i = 0; i < slave.particles.size(); ++i) {
      if (!slave.surface.surface.empty() && !slave.surface.surface[i]) continue;
      Vec3 p = slave.particles.current(i);
      // Compare transverse to the DOF axis only.
      Vec3 d_lo = p - lo, d_hi = p - hi;
      d_lo -= axis * dot(d_lo, axis);
      d_hi -= axis * dot(d_hi, axis);
      bool in = d_lo.x > -2.0 * dx && d_hi.x < 2.0 * dx && d_lo.y > -2.0 * dx &&
                d_hi.y < 2.0 * dx && d_lo.z > -2.0 * dx && d_hi.z < 2.0 * dx;
      if (in) ++columns;
    }
    k_sum += std::max(columns, 4) * k_pair;
  }
  return k_sum;
}

struct Forces {
  // Net force density per deformable particle (N/m^3), flattened.
  std::vector<Vec3> density;
  double contact_total = 0.0;
  double residual = 0.0;  // ||F||_inf over free deformable DOFs
  std::vector<double> rigid_force;  // per body, N along its DOF axis
};

void compute_forces(Model& model, Forces& out, double ramp,
                    std::vector<ContactPair>* pairs_out) {
  const std::size_t n = model.total_particles();
  out.density.assign(n, Vec3{});
  out.rigid_force.assign(model.bodies.size(), 0.0);
  out.contact_total = 0.0;
  out.residual = 0.0;

  auto pairs = model.contacts();
  if (pairs_out) *pairs_out = std::move(pairs);

  double residual = 0.0;
  for (std::size_t b = 0; b < model.bodies.size(); ++b) {
    Body& body = model.bodies[b];
    if (!body.deformable()) {
      if (body.rigid.type == RigidMotionType::load_dof)
        out.rigid_force[b] =
            ramp * body.rigid.load + dot(body.reaction, body.rigid.axis);
      out.contact_total += norm(body.reaction);
      continue;
    }
    std::size_t base = model.offsets()[b];
    std::span<Vec3> slot(out.density.data() + base, body.particles.size());
    internal_force(body.particles, body.bonds, slot);
    for (std::size_t i = 0; i < body.particles.size(); ++i) {
      Vec3 f = slot[i] + body.particles.body_force[i] * ramp +
               body.particles.contact_force[i] / body.particles.volume[i];
      slot[i] = f;
      if (!body.particles.fixed[i]) {
        double m = std::max({std::abs(f.x), std::abs(f.y), std::abs(f.z)});
        if (!(m <= residual)) residual = m;  // NaN-propagating max
      }
    }
  }
  out.residual = residual;
}

}  // namespace

std::vector<double> adr_fictitious_density(const Model& model,
                                           const SolveConfig& config) {
  std::vector<double> density(model.total_particles(), 0.0);
  double factor = config.adr_safety * config.dt * config.dt / 4.0;
  for (std::size_t b = 0; b < model.bodies.size(); ++b) {
    const Body& body = model.bodies[b];
    if (!body.deformable()) continue;
    auto rows = bond_stiffness_row_sum(body.particles, body.bonds);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double d = factor * rows[i];
      if (!(d > 0.0))
        throw AssemblyError("particle without stiffness in body " + body.name);
      density[model.offsets()[b] + i] = d;
    }
  }
  return density;
}

SolveReport run(Model& model, const SolveConfig& config,
                const OutputCallback& output) {
  if (!model.assembled()) throw SolveError("model not assembled");
  const std::size_t n = model.total_particles();
  const double dt = config.dt;
  const bool adr = config.mode == SolveMode::adr;

  std::vector<double> density;
  if (adr) {
    density = adr_fictitious_density(model, config);
    for (auto& body : model.bodies) {
      if (!body.deformable() && body.rigid.type == RigidMotionType::load_dof) {
        std::size_t b = std::size_t(&body - model.bodies.data());
        double k = rigid_stiffness_bound(model, b);
        body.rigid.fict_mass =
            std::max(config.adr_safety * dt * dt / 4.0 * k, 1e-30);
      }
      if (!body.deformable()) {
        body.rigid.vel = 0.0;
      }
    }
  }

  const double scale = load_scale(model);

  Forces forces;
  std::vector<Vec3> force_prev(n, Vec3{});
  std::vector<double> rigid_force_prev(model.bodies.size(), 0.0);
  std::vector<Vec3> delta_u(n, Vec3{});
  std::vector<ContactPair> pairs;

  SolveReport report;
  bool have_prev = false;
  double damping = 0.0;
  int last_output_step = 0;

  for (int step = 1; step <= config.max_steps; ++step) {
    double ramp = config.load_ramp_steps > 0
                      ? std::min(1.0, double(step) / config.load_ramp_steps)
                      : 1.0;

    // 1. Verlet bookkeeping from the last step's motion.
    if (step > 1 && model.track_motion(delta_u)) model.refresh_search_structures();

    // 2-3. Internal and contact forces at current positions.
    compute_forces(model, forces, ramp, &pairs);
    if (!std::isfinite(forces.residual))
      throw SolveError("non-finite force state at step " + std::to_string(step));

    // Convergence (ADR): force ratio plus rigid DOF balance.
    double ratio = scale > 0.0 ? forces.residual / scale
                               : (forces.residual == 0.0 ? 0.0 : 1.0);
    for (std::size_t b = 0; b < model.bodies.size(); ++b) {
      const Body& body = model.bodies[b];
      if (!body.deformable() && body.rigid.type == RigidMotionType::load_dof &&
          body.rigid.load != 0.0)
        ratio = std::max(ratio,
                         std::abs(forces.rigid_force[b] / body.rigid.load));
    }

    report.steps = step;
    report.residual = ratio;

    if (adr && ramp >= 1.0 && ratio < config.tolerance) {
      report.converged = true;
      report.history.push_back({step, ratio, damping, forces.contact_total});
      break;
    }

    // ADR damping from the diagonal local stiffness (Rayleigh quotient).
    if (adr) {
      if (have_prev) {
        double num = 0.0, den = 0.0;
        for (std::size_t b = 0; b < model.bodies.size(); ++b) {
          const Body& body = model.bodies[b];
          if (!body.deformable()) continue;
          std::size_t base = model.offsets()[b];
          for (std::size_t i = 0; i < body.particles.size(); ++i) {
            if (body.particles.fixed[i]) continue;
            std::size_t g = base + i;
            for (int c = 0; c < 3; ++c) {
              double u = body.particles.disp[i][c];
              double v = body.particles.vel[i][c];
              den += u * u;
              if (v != 0.0) {
                double k = -(forces.density[g][c] - force_prev[g][c]) /
                           (density[g] * dt * v);
                num += u * u * k;
              }
            }
          }
        }
        double q = den > 0.0 ? num / den : 0.0;
        damping = q > 0.0 ? 2.0 * std::sqrt(q) : 0.0;
        damping = std::min(damping, config.damping_cap / dt);
      } else {
        damping = 0.0;
      }
    }

    // 4. Integrate.
    if (adr) {
      for (std::size_t b = 0; b < model.bodies.size(); ++b) {
        Body& body = model.bodies[b];
        std::size_t base = model.offsets()[b];
        if (body.deformable()) {
          for (std::size_t i = 0; i < body.particles.size(); ++i) {
            std::size_t g = base + i;
            if (body.particles.fixed[i]) {
              delta_u[g] = Vec3{};
              continue;
            }
            Vec3 f_over_d = forces.density[g] / density[g];
            Vec3 v = body.particles.vel[i];
            if (!have_prev) {
              v = f_over_d * (dt / 2.0);
            } else {
              for (int c = 0; c < 3; ++c)
                v[c] = adr_velocity_update(v[c], f_over_d[c], damping, dt);
            }
            body.particles.vel[i] = v;
            Vec3 du = v * dt;
            body.particles.disp[i] += du;
            delta_u[g] = du;
          }
        } else {
          double du = 0.0;
          if (body.rigid.type == RigidMotionType::load_dof) {
            double f_over_m = forces.rigid_force[b] / body.rigid.fict_mass;
            double v = body.rigid.vel;
            v = have_prev ? adr_velocity_update(v, f_over_m, damping, dt)
                          : f_over_m * (dt / 2.0);
            body.rigid.vel = v;
            du = v * dt;
            body.rigid.disp += du;
            Model::apply_rigid_motion(body);
          }
          for (std::size_t i = 0; i < body.particles.size(); ++i)
            delta_u[base + i] = body.rigid.axis * du;
        }
      }
    } else {
      // Leapfrog: v^{n+1/2} = v^{n-1/2} + a dt (first step: half kick).
      for (std::size_t b = 0; b < model.bodies.size(); ++b) {
        Body& body = model.bodies[b];
        std::size_t base = model.offsets()[b];
        if (body.deformable()) {
          double rho = body.material.density;
          for (std::size_t i = 0; i < body.particles.size(); ++i) {
            std::size_t g = base + i;
            if (body.particles.fixed[i]) {
              delta_u[g] = Vec3{};
              continue;
            }
            Vec3 a = forces.density[g] / rho;
            body.particles.accel[i] = a;
            body.particles.vel[i] += a * (have_prev ? dt : dt / 2.0);
            Vec3 du = body.particles.vel[i] * dt;
            body.particles.disp[i] += du;
            delta_u[g] = du;
          }
        } else {
          double du = 0.0;
          if (body.rigid.type == RigidMotionType::load_dof) {
            double mass = 0.0;
            for (double v : body.particles.volume) mass += v;
            mass *= body.material.density;
            if (mass <= 0.0) throw SolveError("rigid body without mass");
            double a = forces.rigid_force[b] / mass;
            body.rigid.vel += a * (have_prev ? dt : dt / 2.0);
            du = body.rigid.vel * dt;
            body.rigid.disp += du;
            Model::apply_rigid_motion(body);
          }
          for (std::size_t i = 0; i < body.particles.size(); ++i)
            delta_u[base + i] = body.rigid.axis * du;
        }
      }
    }

    force_prev = forces.density;
    rigid_force_prev = forces.rigid_force;
    have_prev = true;

    report.history.push_back({step, ratio, damping, forces.contact_total});

    // 5. Output cadence.
    if (output && config.output_every > 0 && step % config.output_every == 0) {
      output(model, step, pairs);
      last_output_step = step;
    }
  }

  if (output && last_output_step != report.steps) output(model, report.steps, pairs);
  return report;
}

}  // namespace pericontact
