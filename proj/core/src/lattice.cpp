#include "pericontact/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "pericontact/errors.hpp"

namespace pericontact {

namespace {

// Cell-centered lattice filling: keeps cells whose centers satisfy `inside`.
Body voxel_body(const std::string& name, const Vec3& lo, const Vec3& hi, double dx,
                const Material& material, double horizon_ratio,
                const std::function<bool(const Vec3&)>& inside) {
  Body body;
  body.name = name;
  body.kind = BodyKind::deformable;
  body.material = material;
  body.disc = Discretization{dx, horizon_ratio};

  int nx = std::max(1, int(std::lround((hi.x - lo.x) / dx)));
  int ny = std::max(1, int(std::lround((hi.y - lo.y) / dx)));
  int nz = std::max(1, int(std::lround((hi.z - lo.z) / dx)));

  // Anchor the lattice at the box center so the cell-center grid shares the
  // body's symmetry; an off-center grid gives the contact patch a spurious
  // torque arm.
  Vec3 mid = (lo + hi) * 0.5;
  double vol = dx * dx * dx;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        Vec3 p{mid.x + (i + 0.5 - 0.5 * nx) * dx, mid.y + (j + 0.5 - 0.5 * ny) * dx,
               mid.z + (k + 0.5 - 0.5 * nz) * dx};
        if (!inside(p)) continue;
        body.particles.ref_pos.push_back(p);
        body.particles.volume.push_back(vol);
      }
    }
  }
  std::size_t n = body.particles.ref_pos.size();
  if (n == 0) throw AssemblyError("generator produced no particles for " + name);
  auto keep_pos = std::move(body.particles.ref_pos);
  auto keep_vol = std::move(body.particles.volume);
  body.particles.resize(n);
  body.particles.ref_pos = std::move(keep_pos);
  body.particles.volume = std::move(keep_vol);
  return body;
}

}  // namespace

Body make_sphere_body(const std::string& name, double radius, const Vec3& center,
                      double dx, const Material& material, double horizon_ratio) {
  Vec3 r{radius, radius, radius};
  return voxel_body(name, center - r, center + r, dx, material, horizon_ratio,
                    [&](const Vec3& p) { return norm(p - center) <= radius; });
}

Body make_roller_body(const std::string& name, double radius, double length,
                      const Vec3& center, double dx, const Material& material,
                      double horizon_ratio) {
  Vec3 lo{center.x - radius, center.y, center.z - radius};
  Vec3 hi{center.x + radius, center.y + length, center.z + radius};
  return voxel_body(name, lo, hi, dx, material, horizon_ratio, [&](const Vec3& p) {
    double rx = p.x - center.x, rz = p.z - center.z;
    return std::sqrt(rx * rx + rz * rz) <= radius;
  });
}

Body make_block_body(const std::string& name, const Vec3& lo, const Vec3& hi,
                     double dx, const Material& material, double horizon_ratio) {
  return voxel_body(name, lo, hi, dx, material, horizon_ratio,
                    [](const Vec3&) { return true; });
}

Body make_rigid_plate(const std::string& name, double x0, double x1, double y0,
                      double y1, double z0, double dx, bool normal_up,
                      const Material& material) {
  Body body;
  body.name = name;
  body.kind = BodyKind::rigid;
  body.material = material;
  body.disc = Discretization{dx, 3.0};

  int nx = std::max(1, int(std::lround((x1 - x0) / dx))) + 1;
  int ny = std::max(1, int(std::lround((y1 - y0) / dx))) + 1;

  std::size_t n = std::size_t(nx) * ny;
  body.particles.resize(n);
  double vol = dx * dx * dx;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      std::size_t idx = std::size_t(j) * nx + i;
      body.particles.ref_pos[idx] = Vec3{x0 + i * dx, y0 + j * dx, z0};
      body.particles.volume[idx] = vol;
    }
  }

  auto node = [&](int i, int j) { return std::int64_t(j) * nx + i; };
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      FaceQuad f;
      if (normal_up)
        f.nodes = {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
      else
        f.nodes = {node(i, j), node(i, j + 1), node(i + 1, j + 1), node(i + 1, j)};
      f.element = node(i, j);
      body.faces.push_back(f);
    }
  }
  return body;
}

void fix_bottom_layers(Body& body, int layers) {
  if (layers <= 0 || body.particles.size() == 0) return;
  double zmin = body.particles.ref_pos[0].z;
  for (const auto& p : body.particles.ref_pos) zmin = std::min(zmin, p.z);
  double cut = zmin + (layers - 0.5) * body.disc.dx;
  for (std::size_t i = 0; i < body.particles.size(); ++i)
    if (body.particles.ref_pos[i].z <= cut) body.particles.fixed[i] = 1;
}

void apply_cap_load(Body& body, const Vec3& total, double cap_fraction) {
  if (body.particles.size() == 0) return;
  double zmin = body.particles.ref_pos[0].z, zmax = zmin;
  for (const auto& p : body.particles.ref_pos) {
    zmin = std::min(zmin, p.z);
    zmax = std::max(zmax, p.z);
  }
  double cut = zmax - cap_fraction * (zmax - zmin);
  double cap_volume = 0.0;
  for (std::size_t i = 0; i < body.particles.size(); ++i)
    if (body.particles.ref_pos[i].z >= cut) cap_volume += body.particles.volume[i];
  if (!(cap_volume > 0.0)) throw AssemblyError("empty load cap on " + body.name);
  Vec3 density = total / cap_volume;
  for (std::size_t i = 0; i < body.particles.size(); ++i)
    if (body.particles.ref_pos[i].z >= cut) body.particles.body_force[i] = density;
}

Body body_from_mesh(const MeshFile& mesh, const std::string& name, BodyKind kind,
                    const Material& material, const Discretization& disc) {
  Body body;
  body.name = name;
  body.kind = kind;
  body.material = material;
  body.disc = disc;

  std::unordered_map<std::int64_t, std::int64_t> dense;
  std::size_t n = mesh.nodes.size();
  body.particles.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    dense[mesh.nodes[i].id] = std::int64_t(i);
    body.particles.ref_pos[i] = mesh.nodes[i].pos;
    body.particles.volume[i] = mesh.nodes[i].volume;
  }

  for (const FaceQuad& f : extract_external_faces(mesh)) {
    FaceQuad g = f;
    for (auto& nid : g.nodes) nid = dense.at(nid);
    body.faces.push_back(g);
  }
  return body;
}

}  // namespace pericontact
