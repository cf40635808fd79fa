#include "pericontact/contact.hpp"

#include <algorithm>
#include <cmath>

#include "pericontact/errors.hpp"

namespace pericontact {

namespace {

constexpr double kCornerR[4] = {-1.0, 1.0, 1.0, -1.0};
constexpr double kCornerT[4] = {-1.0, -1.0, 1.0, 1.0};

std::array<Vec3, 4> face_corners(const std::vector<Body>& bodies,
                                 const GlobalFace& gf) {
  const Body& b = bodies[gf.body];
  const FaceQuad& f = b.faces[gf.index];
  std::array<Vec3, 4> c;
  for (int i = 0; i < 4; ++i) c[i] = b.particles.current(std::size_t(f.nodes[i]));
  return c;
}

}  // namespace

std::array<double, 4> bilinear_shape(double r, double t) {
  std::array<double, 4> n;
  for (int i = 0; i < 4; ++i)
    n[i] = 0.25 * (1.0 + kCornerR[i] * r) * (1.0 + kCornerT[i] * t);
  return n;
}

std::optional<ProjectionBasis> projection_basis(const std::array<Vec3, 4>& p) {
  Vec3 r31 = p[2] - p[0];
  Vec3 r42 = p[3] - p[1];
  Vec3 n = cross(r31, r42);
  double edge = std::max({norm(r31), norm(r42), norm(p[1] - p[0])});
  if (norm(n) <= 1e-14 * edge * edge) return std::nullopt;

  ProjectionBasis basis;
  basis.e3 = normalized(n);
  Vec3 r21 = p[1] - p[0];
  Vec3 t1 = r21 - basis.e3 * dot(r21, basis.e3);
  if (norm(t1) <= 1e-14 * edge) return std::nullopt;
  basis.e1 = normalized(t1);
  basis.e2 = cross(basis.e3, basis.e1);
  return basis;
}

LocalCoords locate_on_face(const Vec3& slave, const std::array<Vec3, 4>& corners,
                           const ProjectionBasis& basis,
                           const ContactConfig& config) {
  // Plane coordinates relative to corner 1.
  double xs = dot(slave - corners[0], basis.e1);
  double ys = dot(slave - corners[0], basis.e2);
  double xc[4], yc[4];
  for (int i = 0; i < 4; ++i) {
    xc[i] = dot(corners[i] - corners[0], basis.e1);
    yc[i] = dot(corners[i] - corners[0], basis.e2);
  }

  LocalCoords lc;
  double r = 0.0, t = 0.0;
  for (int iter = 0; iter < config.newton_max_iter; ++iter) {
    auto n = bilinear_shape(r, t);
    double fx = -xs, fy = -ys;
    double jrx = 0.0, jry = 0.0, jtx = 0.0, jty = 0.0;
    for (int i = 0; i < 4; ++i) {
      fx += n[i] * xc[i];
      fy += n[i] * yc[i];
      double dnr = 0.25 * kCornerR[i] * (1.0 + kCornerT[i] * t);
      double dnt = 0.25 * kCornerT[i] * (1.0 + kCornerR[i] * r);
      jrx += dnr * xc[i];
      jry += dnr * yc[i];
      jtx += dnt * xc[i];
      jty += dnt * yc[i];
    }
    double det = jrx * jty - jtx * jry;
    if (det == 0.0 || !std::isfinite(det)) return lc;  // unconverged
    double dr = (-fx * jty + fy * jtx) / det;
    double dt = (-fy * jrx + fx * jry) / det;
    r += dr;
    t += dt;
    if (std::max(std::abs(dr), std::abs(dt)) < config.newton_tol) {
      lc.converged = true;
      break;
    }
  }
  if (!lc.converged) return lc;

  lc.r = r;
  lc.t = t;
  double tol = config.inside_tol;
  lc.inside = std::abs(r) <= 1.0 + tol && std::abs(t) <= 1.0 + tol;
  return lc;
}

double face_gap(const Vec3& slave, const std::array<Vec3, 4>& corners,
                const Vec3& normal, double r, double t, Vec3* contact_point) {
  auto n = bilinear_shape(r, t);
  Vec3 xc{};
  for (int i = 0; i < 4; ++i) xc += corners[i] * n[i];
  if (contact_point) *contact_point = xc;
  return dot(slave - xc, normal);
}

double contact_stiffness(const Material* slave, const Material* master,
                         double slave_radius) {
  auto compliance = [](const Material* m) {
    return m ? (1.0 - m->nu * m->nu) / m->E : 0.0;
  };
  double mi = compliance(slave);
  double mj = compliance(master);
  if (mi + mj <= 0.0)
    throw AssemblyError("contact between two rigid bodies has no stiffness");
  return 4.0 / (3.0 * (mi + mj)) * std::sqrt(slave_radius);
}

double contact_force_magnitude(double stiffness, double penetration,
                               double exponent) {
  if (penetration <= 0.0) return 0.0;
  return stiffness * std::pow(penetration, exponent);
}

SurfaceContactList build_face_lists(const std::vector<Body>& bodies,
                                    std::span<const std::size_t> body_offset,
                                    std::span<const GlobalFace> faces,
                                    const NeighborState& verlet) {
  SurfaceContactList out;
  out.candidates.resize(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const GlobalFace& gf = faces[f];
    const FaceQuad& quad = bodies[gf.body].faces[gf.index];
    auto& cand = out.candidates[f];
    cand.clear();
    for (int corner = 0; corner < 4; ++corner) {
      std::size_t gid = body_offset[gf.body] + std::size_t(quad.nodes[corner]);
      const auto& list = verlet.lists[gid];
      cand.insert(cand.end(), list.begin(), list.end());
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    // Verlet lists are cross-body already; drop own-body entries anyway in
    // case a third body's list leaked them through a shared node id.
    std::erase_if(cand, [&](int gid) {
      std::size_t b = 0;
      while (b + 1 < body_offset.size() && std::size_t(gid) >= body_offset[b + 1]) ++b;
      return int(b) == gf.body;
    });
  }
  return out;
}

std::vector<ContactPair> evaluate_contacts(std::vector<Body>& bodies,
                                           std::span<const std::size_t> body_offset,
                                           std::span<const GlobalFace> faces,
                                           const SurfaceContactList& face_lists,
                                           std::span<const double> stiffness_table,
                                           const ContactConfig& config) {
  const std::size_t nbodies = bodies.size();

  auto body_of = [&](int gid) {
    std::size_t b = 0;
    while (b + 1 < nbodies && std::size_t(gid) >= body_offset[b + 1]) ++b;
    return int(b);
  };

  for (auto& b : bodies) {
    std::fill(b.particles.contact_force.begin(), b.particles.contact_force.end(),
              Vec3{});
    b.reaction = Vec3{};
  }

  std::vector<ContactPair> pairs;

  for (std::size_t f = 0; f < faces.size(); ++f) {
    const GlobalFace& gf = faces[f];
    if (face_lists.candidates[f].empty()) continue;
    auto corners = face_corners(bodies, gf);
    auto basis = projection_basis(corners);
    if (!basis) continue;  // degenerate face this step

    for (int gid : face_lists.candidates[f]) {
      int sb = body_of(gid);
      Body& slave_body = bodies[sb];
      if (!slave_body.deformable()) continue;
      std::size_t sl = std::size_t(gid) - body_offset[sb];
      if (!slave_body.surface.surface[sl] || !slave_body.surface.normal_valid[sl])
        continue;

      Vec3 xs = slave_body.particles.current(sl);
      LocalCoords lc = locate_on_face(xs, corners, *basis, config);
      if (!lc.converged || !lc.inside) continue;

      Vec3 xc;
      double gap = face_gap(xs, corners, basis->e3, lc.r, lc.t, &xc);
      double trigger = config.trigger_factor * slave_body.disc.dx;
      if (!(gap < trigger)) continue;  // strict: boundary is inactive

      double d = config.geometric_penetration ? -gap : trigger - gap;
      if (!(d > 0.0)) continue;

      ContactPair pair;
      pair.slave = gid;
      pair.face = int(f);
      pair.r = lc.r;
      pair.t = lc.t;
      pair.contact_point = xc;
      pair.normal = basis->e3;
      pair.gap = gap;
      pair.penetration = d;
      double k = stiffness_table[std::size_t(sb) * nbodies + std::size_t(gf.body)];
      pair.force = contact_force_magnitude(k, d, config.exponent);
      pair.halved = bodies[gf.body].deformable();
      pairs.push_back(pair);
    }
  }

  // A slave sitting over a shared edge of two coplanar faces is claimed by
  // both; keep one pair per near-parallel normal direction (the deeper one).
  std::sort(pairs.begin(), pairs.end(), [](const ContactPair& a, const ContactPair& b) {
    if (a.slave != b.slave) return a.slave < b.slave;
    return a.face < b.face;
  });
  std::vector<ContactPair> kept;
  kept.reserve(pairs.size());
  std::size_t i = 0;
  while (i < pairs.size()) {
    std::size_t j = i;
    while (j < pairs.size() && pairs[j].slave == pairs[i].slave) ++j;
    for (std::size_t a = i; a < j; ++a) {
      bool dominated = false;
      for (std::size_t b = i; b < j; ++b) {
        if (a == b || dot(pairs[a].normal, pairs[b].normal) <= 0.999) continue;
        if (pairs[b].penetration > pairs[a].penetration ||
            (pairs[b].penetration == pairs[a].penetration && b < a)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) kept.push_back(pairs[a]);
    }
    i = j;
  }

  // Apply forces in deterministic (slave, face) order.
  for (const ContactPair& p : kept) {
    double scale = p.halved ? 0.5 : 1.0;
    Vec3 fvec = p.normal * (p.force * scale);
    int sb = body_of(p.slave);
    bodies[sb].particles.contact_force[std::size_t(p.slave) - body_offset[sb]] +=
        fvec;

    const GlobalFace& gf = faces[std::size_t(p.face)];
    Body& master = bodies[gf.body];
    if (master.deformable()) {
      auto n = bilinear_shape(p.r, p.t);
      const FaceQuad& quad = master.faces[gf.index];
      for (int cidx = 0; cidx < 4; ++cidx)
        master.particles.contact_force[std::size_t(quad.nodes[cidx])] -=
            fvec * n[cidx];
    } else {
      master.reaction -= fvec;
    }
  }
  return kept;
}

}  // namespace pericontact
