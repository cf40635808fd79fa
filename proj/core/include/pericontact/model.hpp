#pragma once

#include <vector>

#include "pericontact/body.hpp"
#include "pericontact/contact.hpp"
#include "pericontact/neighbor_list.hpp"
#include "pericontact/surface_detection.hpp"

namespace pericontact {

// Assembled multi-body scene: bonds, corrections, surface classification,
// Verlet lists, face candidate lists, and the contact stiffness table.
class Model {
 public:
  std::vector<Body> bodies;

  double neighbor_cutoff_factor = 1.0;
  double neighbor_list_factor = 1.3;
  SurfaceConfig surface_config;
  ContactConfig contact_config;

  // Builds everything derived from the bodies. Call once after the bodies
  // (positions, volumes, loads, fixed flags) are final.
  void assemble();

  // Re-classifies deformable surfaces at current positions and rebuilds the
  // Verlet and face candidate lists. Triggered by the skin rule.
  void refresh_search_structures();

  // Verlet displacement bookkeeping for one integration step; true means the
  // caller must refresh_search_structures().
  bool track_motion(std::span<const Vec3> delta_u);

  // Contact pass at current positions; fills per-particle contact forces and
  // rigid reactions.
  std::vector<ContactPair> contacts();

  bool assembled() const { return assembled_; }
  std::size_t total_particles() const { return offsets_.empty() ? 0 : offsets_.back(); }
  std::size_t body_of(std::size_t gid) const;
  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const GlobalFace> global_faces() const { return faces_; }
  const NeighborState& verlet() const { return verlet_; }
  const SurfaceContactList& face_lists() const { return face_lists_; }
  const NeighborConfig& neighbor_config() const { return neighbor_config_; }
  std::span<const double> stiffness_table() const { return stiffness_; }

  // Applies a rigid body's DOF state to its particle displacements.
  static void apply_rigid_motion(Body& body);

 private:
  void refresh_flat_views();

  bool assembled_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<GlobalFace> faces_;
  NeighborConfig neighbor_config_{};
  NeighborState verlet_;
  SurfaceContactList face_lists_;
  std::vector<double> stiffness_;

  // Flattened scratch for the Verlet rebuild.
  std::vector<Vec3> flat_pos_;
  std::vector<int> flat_body_;
  std::vector<std::uint8_t> flat_surface_;
};

}  // namespace pericontact
