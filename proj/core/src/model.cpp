#include "pericontact/model.hpp"

#include <algorithm>
#include <cmath>

#include "pericontact/errors.hpp"
#include "pericontact/pd_core.hpp"

namespace pericontact {

void Model::apply_rigid_motion(Body& body) {
  if (body.kind != BodyKind::rigid) return;
  Vec3 u = body.rigid.axis * body.rigid.disp;
  std::fill(body.particles.disp.begin(), body.particles.disp.end(), u);
}

std::size_t Model::body_of(std::size_t gid) const {
  std::size_t b = 0;
  while (b + 1 < bodies.size() && gid >= offsets_[b + 1]) ++b;
  return b;
}

void Model::assemble() {
  if (bodies.empty()) throw AssemblyError("model has no bodies");

  offsets_.assign(bodies.size() + 1, 0);
  for (std::size_t b = 0; b < bodies.size(); ++b)
    offsets_[b + 1] = offsets_[b] + bodies[b].particles.size();

  faces_.clear();
  for (std::size_t b = 0; b < bodies.size(); ++b) {
    const Body& body = bodies[b];
    for (std::size_t f = 0; f < body.faces.size(); ++f) {
      for (int c = 0; c < 4; ++c) {
        auto nid = body.faces[f].nodes[c];
        if (nid < 0 || std::size_t(nid) >= body.particles.size())
          throw AssemblyError("face node out of range in body " + body.name);
      }
      faces_.push_back(GlobalFace{int(b), int(f)});
    }
  }

  double min_dx = 0.0;
  for (const auto& body : bodies) {
    if (!(body.disc.dx > 0.0))
      throw AssemblyError("body " + body.name + " has no grid size");
    min_dx = min_dx == 0.0 ? body.disc.dx : std::min(min_dx, body.disc.dx);
  }
  neighbor_config_ =
      NeighborConfig::from_grid(min_dx, neighbor_cutoff_factor, neighbor_list_factor);
  if (!(neighbor_config_.list_radius > neighbor_config_.cutoff))
    throw AssemblyError("neighbor list radius must exceed the cutoff");

  for (auto& body : bodies) {
    if (body.deformable()) {
      body.bonds = build_bonds(body.particles, body.disc, body.material);
      if (body.surface_corrected)
        surface_correction(body.particles, body.bonds, body.material);
    } else {
      apply_rigid_motion(body);
      // Shape never changes; classify once.
      body.surface = classify_surface(body.particles, body.disc.dx, surface_config);
    }
  }

  // Pairwise penalty stiffness, slave body x master body.
  const std::size_t nb = bodies.size();
  stiffness_.assign(nb * nb, 0.0);
  for (std::size_t s = 0; s < nb; ++s) {
    for (std::size_t m = 0; m < nb; ++m) {
      if (s == m || !bodies[s].deformable()) continue;
      const Material* sm = &bodies[s].material;
      const Material* mm = bodies[m].deformable() ? &bodies[m].material : nullptr;
      double radius = contact_config.slave_radius_factor * bodies[s].disc.dx;
      stiffness_[s * nb + m] = contact_stiffness(sm, mm, radius);
    }
  }

  verlet_ = NeighborState{};
  assembled_ = true;
  refresh_search_structures();
}

void Model::refresh_flat_views() {
  const std::size_t n = total_particles();
  flat_pos_.resize(n);
  flat_body_.resize(n);
  flat_surface_.resize(n);
  for (std::size_t b = 0; b < bodies.size(); ++b) {
    const Body& body = bodies[b];
    for (std::size_t i = 0; i < body.particles.size(); ++i) {
      std::size_t g = offsets_[b] + i;
      flat_pos_[g] = body.particles.current(i);
      flat_body_[g] = int(b);
      flat_surface_[g] = body.surface.surface.empty() ? 0 : body.surface.surface[i];
    }
  }
}

void Model::refresh_search_structures() {
  if (!assembled_) throw AssemblyError("model not assembled");
  for (auto& body : bodies)
    if (body.deformable())
      body.surface = classify_surface(body.particles, body.disc.dx, surface_config);

  refresh_flat_views();

  // Preserve accumulated displacements only across non-rebuild refreshes;
  // rebuild() resets them, which is exactly the update rule.
  NeighborInput input{flat_pos_, flat_body_, flat_surface_};
  rebuild(verlet_, input, neighbor_config_);
  face_lists_ = build_face_lists(bodies, offsets_, faces_, verlet_);
}

bool Model::track_motion(std::span<const Vec3> delta_u) {
  return accumulate_and_check(verlet_, delta_u, neighbor_config_);
}

std::vector<ContactPair> Model::contacts() {
  return evaluate_contacts(bodies, offsets_, faces_, face_lists_, stiffness_,
                           contact_config);
}

}  // namespace pericontact
