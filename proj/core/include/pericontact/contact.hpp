#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "pericontact/body.hpp"
#include "pericontact/neighbor_list.hpp"

namespace pericontact {

struct ContactConfig {
  double exponent = 1.5;             // Hertz power n
  double slave_radius_factor = 0.5;  // R_i = factor * dx of the slave body
  double trigger_factor = 0.5;       // activation gap = factor * dx
  // Default penetration is trigger*dx - gap (particle as a dx/2 sphere); the
  // geometric alternative -gap is kept for sensitivity studies.
  bool geometric_penetration = false;
  double newton_tol = 1e-10;
  int newton_max_iter = 30;
  // Local coordinates are accepted up to this overshoot beyond [-1,1] so
  // slaves sitting exactly over a shared edge stay active; duplicates are
  // collapsed afterwards.
  double inside_tol = 1e-9;
};

// Face of one body addressed globally.
struct GlobalFace {
  int body = -1;
  int index = -1;  // into bodies[body].faces
};

// Per master face: candidate slave particles, the union of the Verlet lists
// of its four nodes minus the face's own body.
struct SurfaceContactList {
  std::vector<std::vector<int>> candidates;
};

struct ProjectionBasis {
  Vec3 e1, e2, e3;  // right-handed orthonormal; e3 is the master normal
};

struct LocalCoords {
  double r = 0.0, t = 0.0;
  bool inside = false;
  bool converged = false;
};

// One active slave/master pair.
struct ContactPair {
  int slave = -1;  // global particle id
  int face = -1;   // global face id
  double r = 0.0, t = 0.0;
  Vec3 contact_point;
  Vec3 normal;
  double gap = 0.0;          // signed distance, positive outside
  double penetration = 0.0;  // d_pen
  double force = 0.0;        // F_N, N
  bool halved = false;       // deformable-deformable pass convention
};

std::array<double, 4> bilinear_shape(double r, double t);

// Projection-plane basis from the face diagonals (Gram-Schmidt on the first
// edge). Returns nullopt for a degenerate face.
std::optional<ProjectionBasis> projection_basis(const std::array<Vec3, 4>& corners);

// Inverts the bilinear map on the projection plane by Newton iteration from
// the face center.
LocalCoords locate_on_face(const Vec3& slave, const std::array<Vec3, 4>& corners,
                           const ProjectionBasis& basis, const ContactConfig& config);

// Signed gap along the master normal at local coordinates (r, t); also
// reports the 3D contact point.
double face_gap(const Vec3& slave, const std::array<Vec3, 4>& corners,
                const Vec3& normal, double r, double t,
                Vec3* contact_point = nullptr);

// Hertz-derived penalty stiffness; nullptr marks a rigid body (zero
// compliance). Two rigid bodies are rejected.
double contact_stiffness(const Material* slave, const Material* master,
                         double slave_radius);

// Penalty force magnitude K d^n for d >= 0.
double contact_force_magnitude(double stiffness, double penetration, double exponent);

// Eq.-style face candidate lists from the current Verlet state.
SurfaceContactList build_face_lists(const std::vector<Body>& bodies,
                                    std::span<const std::size_t> body_offset,
                                    std::span<const GlobalFace> faces,
                                    const NeighborState& verlet);

// Full contact pass: per face, project candidate slaves, gap-test, apply
// penalty forces to slave accumulators and master reactions. Returns the
// active pairs (after duplicate collapse) for diagnostics.
std::vector<ContactPair> evaluate_contacts(std::vector<Body>& bodies,
                                           std::span<const std::size_t> body_offset,
                                           std::span<const GlobalFace> faces,
                                           const SurfaceContactList& face_lists,
                                           std::span<const double> stiffness_table,
                                           const ContactConfig& config);

}  // namespace pericontact
