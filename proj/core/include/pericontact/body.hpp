#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pericontact/geometry.hpp"
#include "pericontact/mesh.hpp"

namespace pericontact {

struct Material {
  double density = 0.0;  // kg/m^3
  double E = 0.0;        // Pa
  double nu = 0.25;      // bond-based constitutive requires 1/4
};

struct Discretization {
  double dx = 0.0;             // grid size, m
  double horizon_ratio = 3.0;  // m_h = delta/dx

  double horizon() const { return horizon_ratio * dx; }
  double transition_halfwidth() const { return dx / 2.0; }
};

// Discrete PD body state, one entry per particle. Struct-of-arrays so the
// force loops stay tight.
struct ParticleSet {
  std::vector<Vec3> ref_pos;        // x
  std::vector<Vec3> disp;           // u
  std::vector<Vec3> vel;            // u-dot (half-step velocity under ADR)
  std::vector<Vec3> accel;          // u-double-dot
  std::vector<double> volume;       // V, m^3
  std::vector<Vec3> body_force;     // b, N/m^3
  std::vector<Vec3> contact_force;  // accumulated contact force, N
  std::vector<Vec3> correction;     // surface-correction vector g
  std::vector<std::uint8_t> fixed;  // pinned degrees of freedom

  std::size_t size() const { return ref_pos.size(); }

  void resize(std::size_t n) {
    ref_pos.resize(n);
    disp.resize(n);
    vel.resize(n);
    accel.resize(n);
    volume.resize(n, 0.0);
    body_force.resize(n);
    contact_force.resize(n);
    correction.resize(n, Vec3{1.0, 1.0, 1.0});
    fixed.resize(n, 0);
  }

  Vec3 current(std::size_t i) const { return ref_pos[i] + disp[i]; }
};

// Per-particle bonds in CSR layout. Symmetric: j in bonds(i) iff i in
// bonds(j); each bond is stored from both endpoints.
struct BondTable {
  std::vector<std::size_t> offsets;  // size N+1
  std::vector<int> neighbor;
  std::vector<double> ref_len;    // ||xi||
  std::vector<double> vol_corr;   // v_ic
  std::vector<double> surf_corr;  // g_ij
  double micromodulus = 0.0;      // c, N/m^6

  std::size_t count(std::size_t i) const { return offsets[i + 1] - offsets[i]; }
  std::size_t total() const { return neighbor.size(); }
};

// Surface classification output (minimum eigenvalue of the renormalization
// sum matrix, flag, outward normal).
struct SurfaceInfo {
  std::vector<double> lambda;
  std::vector<std::uint8_t> surface;
  std::vector<Vec3> normal;
  std::vector<std::uint8_t> normal_valid;

  void resize(std::size_t n) {
    lambda.assign(n, 1.0);
    surface.assign(n, 0);
    normal.assign(n, Vec3{});
    normal_valid.assign(n, 0);
  }
};

enum class BodyKind { deformable, rigid };

enum class RigidMotionType { fixed, load_dof };

// Rigid bodies carry either a fixed constraint or a single translational
// degree of freedom along `axis` driven by `load` plus contact reactions.
struct RigidMotion {
  RigidMotionType type = RigidMotionType::fixed;
  Vec3 axis{0.0, 0.0, -1.0};  // unit vector
  double load = 0.0;          // N, applied along axis
  double disp = 0.0;          // DOF state
  double vel = 0.0;
  double fict_mass = 0.0;  // ADR fictitious mass, kg
};

struct Body {
  std::string name;
  BodyKind kind = BodyKind::deformable;
  Material material;
  Discretization disc;
  ParticleSet particles;
  std::vector<FaceQuad> faces;  // node ids are particle indices
  BondTable bonds;              // deformable bodies only
  SurfaceInfo surface;
  RigidMotion rigid;  // rigid bodies only
  Vec3 reaction;      // total contact reaction this step, N (rigid bodies)
  // Energy-ratio correction needs a non-degenerate neighborhood in every
  // direction; tiny analytic fixtures (a lone bond pair) switch it off.
  bool surface_corrected = true;

  bool deformable() const { return kind == BodyKind::deformable; }
};

// Builds a deformable/rigid body from a loaded mesh: nodes become particles,
// external hex faces become contact faces.
Body body_from_mesh(const MeshFile& mesh, const std::string& name, BodyKind kind,
                    const Material& material, const Discretization& disc);

}  // namespace pericontact
