#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "pericontact/errors.hpp"
#include "pericontact/pd_core.hpp"

using namespace pericontact;

namespace {

Material mat_1gpa() { return Material{1000.0, 1e9, 0.25}; }

// Cubic lattice of n^3 particles, spacing dx, centered at the origin.
ParticleSet cube_lattice(int n, double dx) {
  ParticleSet p;
  p.resize(std::size_t(n) * n * n);
  std::size_t idx = 0;
  double half = (n - 1) / 2.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        p.ref_pos[idx] = Vec3{(i - half) * dx, (j - half) * dx, (k - half) * dx};
        p.volume[idx] = dx * dx * dx;
        ++idx;
      }
  return p;
}

// Brute-force neighbor count within radius of the center of a (2m+1)^3 grid.
int lattice_neighbor_count(double ratio) {
  int m = int(ratio) + 1;
  int count = 0;
  for (int k = -m; k <= m; ++k)
    for (int j = -m; j <= m; ++j)
      for (int i = -m; i <= m; ++i) {
        if (i == 0 && j == 0 && k == 0) continue;
        if (i * i + j * j + k * k <= ratio * ratio + 1e-12) ++count;
      }
  return count;
}

}  // namespace

TEST_CASE("micromodulus matches the closed form") {
  // E = 1 GPa, delta = 0.24 m.
  double c = micromodulus(mat_1gpa(), 0.24);
  CHECK(c == doctest::Approx(1.15128e12).epsilon(1e-4));

  Material doubled = mat_1gpa();
  doubled.E *= 2.0;
  CHECK(micromodulus(doubled, 0.24) == doctest::Approx(2.0 * c).epsilon(1e-12));
  CHECK(micromodulus(mat_1gpa(), 0.12) == doctest::Approx(16.0 * c).epsilon(1e-12));

  Material bad = mat_1gpa();
  bad.nu = 0.3;
  CHECK_THROWS_AS(micromodulus(bad, 0.24), AssemblyError);
}

TEST_CASE("bond construction: counts, volume correction, symmetry") {
  const double dx = 0.08;
  Discretization disc{dx, 3.0};
  ParticleSet p = cube_lattice(9, dx);
  BondTable bonds = build_bonds(p, disc, mat_1gpa());

  // Interior particle of a 9^3 lattice has the full neighborhood.
  std::size_t center = p.size() / 2;  // odd cube: exact center
  CHECK(bonds.count(center) == lattice_neighbor_count(3.0));
  CHECK(lattice_neighbor_count(3.0) == 122);

  // v_ic at the horizon boundary is 1/2; inside delta - r it is 1.
  double delta = disc.horizon();
  double r = disc.transition_halfwidth();
  for (std::size_t k = bonds.offsets[center]; k < bonds.offsets[center + 1]; ++k) {
    double len = bonds.ref_len[k];
    if (std::abs(len - delta) < 1e-9)
      CHECK(bonds.vol_corr[k] == doctest::Approx(0.5).epsilon(1e-6));
    if (len <= delta - r) CHECK(bonds.vol_corr[k] == 1.0);
  }

  // Symmetry: v_ic and g_ij identical under (i,j) <-> (j,i).
  surface_correction(p, bonds, mat_1gpa());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t k = bonds.offsets[i]; k < bonds.offsets[i + 1]; ++k) {
      std::size_t j = std::size_t(bonds.neighbor[k]);
      bool found = false;
      for (std::size_t kk = bonds.offsets[j]; kk < bonds.offsets[j + 1]; ++kk) {
        if (std::size_t(bonds.neighbor[kk]) == i) {
          CHECK(bonds.vol_corr[kk] == doctest::Approx(bonds.vol_corr[k]).epsilon(1e-14));
          CHECK(bonds.surf_corr[kk] == doctest::Approx(bonds.surf_corr[k]).epsilon(1e-14));
          found = true;
          break;
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("coincident particles are rejected") {
  ParticleSet p;
  p.resize(2);
  p.ref_pos[0] = Vec3{0, 0, 0};
  p.ref_pos[1] = Vec3{0, 0, 0};
  p.volume[0] = p.volume[1] = 1e-3;
  CHECK_THROWS_AS(build_bonds(p, Discretization{0.1, 3.0}, mat_1gpa()),
                  AssemblyError);
}

TEST_CASE("surface correction: bulk factors and ellipsoid interpolation") {
  const double dx = 0.08;
  ParticleSet p = cube_lattice(13, dx);
  BondTable bonds = build_bonds(p, Discretization{dx, 3.0}, mat_1gpa());
  surface_correction(p, bonds, mat_1gpa());

  std::size_t center = p.size() / 2;
  Vec3 g = p.correction[center];
  // Symmetric neighborhood: components equal; near 1 within 15 percent.
  CHECK(g.x == doctest::Approx(g.y).epsilon(1e-10));
  CHECK(g.x == doctest::Approx(g.z).epsilon(1e-10));
  CHECK(std::abs(g.x - 1.0) < 0.15);

  // Independent evaluation of the energy ratio for the center particle.
  const double zeta = 1e-3;
  const double c = bonds.micromodulus;
  double w_pd = 0.0;
  for (std::size_t k = bonds.offsets[center]; k < bonds.offsets[center + 1]; ++k) {
    int j = bonds.neighbor[k];
    Vec3 xi = p.ref_pos[j] - p.ref_pos[center];
    Vec3 def = xi;
    def.x += zeta * xi.x;
    double len = bonds.ref_len[k];
    double s = (norm(def) - len) / len;
    w_pd += 0.25 * c * s * s * len * bonds.vol_corr[k] * p.volume[j];
  }
  double w_ccm = 9.0 * 1e9 * zeta * zeta / 16.0;
  CHECK(g.x == doctest::Approx(w_ccm / w_pd).epsilon(1e-10));
}

TEST_CASE("ellipsoid directional factor: sphere and principal axes") {
  const double dx = 0.1;
  ParticleSet p = cube_lattice(7, dx);
  BondTable bonds = build_bonds(p, Discretization{dx, 3.0}, mat_1gpa());
  surface_correction(p, bonds, mat_1gpa());

  // Bulk center: g_x = g_y = g_z = g0, so every bond factor built from two
  // bulk endpoints equals g0 regardless of direction.
  std::size_t center = p.size() / 2;
  double g0 = p.correction[center].x;
  for (std::size_t k = bonds.offsets[center]; k < bonds.offsets[center + 1]; ++k) {
    int j = bonds.neighbor[k];
    Vec3 gj = p.correction[j];
    if (std::abs(gj.x - g0) < 1e-12 && std::abs(gj.y - g0) < 1e-12 &&
        std::abs(gj.z - g0) < 1e-12)
      CHECK(bonds.surf_corr[k] == doctest::Approx(g0).epsilon(1e-12));
    // Bond along +x from the center: factor is the mean of the endpoint
    // g_x radii.
    Vec3 xi = p.ref_pos[j] - p.ref_pos[center];
    if (std::abs(xi.y) < 1e-15 && std::abs(xi.z) < 1e-15)
      CHECK(bonds.surf_corr[k] ==
            doctest::Approx(0.5 * (g0 + gj.x)).epsilon(1e-12));
  }
}

TEST_CASE("bond force density basics") {
  // Two particles, one bond.
  ParticleSet p;
  p.resize(2);
  double dx = 0.1;
  p.ref_pos[0] = Vec3{0, 0, 0};
  p.ref_pos[1] = Vec3{dx, 0, 0};
  p.volume[0] = p.volume[1] = dx * dx * dx;
  Discretization disc{dx, 3.0};
  BondTable bonds = build_bonds(p, disc, mat_1gpa());
  REQUIRE(bonds.count(0) == 1);

  std::vector<Vec3> f(2);

  // Undeformed: zero force.
  internal_force(p, bonds, f);
  CHECK(norm(f[0]) == 0.0);
  CHECK(norm(f[1]) == 0.0);

  // Uniform 1 percent stretch along the bond.
  p.disp[1] = Vec3{0.01 * dx, 0, 0};
  internal_force(p, bonds, f);
  double c = bonds.micromodulus;
  double expect = c * 0.01 * 1.0 * p.volume[1];  // g=1, v_ic=1
  CHECK(f[0].x == doctest::Approx(expect).epsilon(1e-12));
  CHECK(f[1].x == doctest::Approx(-expect).epsilon(1e-12));
  CHECK(f[0].y == 0.0);

  // Pairwise sum is zero (force on i times V_i plus force on j times V_j).
  CHECK(f[0].x * p.volume[0] + f[1].x * p.volume[1] ==
        doctest::Approx(0.0).epsilon(1e-20));
}

TEST_CASE("internal force matches the O(N^2) brute-force oracle") {
  const double dx = 0.08;
  const double delta = 3.0 * dx;
  ParticleSet p = cube_lattice(5, dx);
  BondTable bonds = build_bonds(p, Discretization{dx, 3.0}, mat_1gpa());
  surface_correction(p, bonds, mat_1gpa());

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-0.001 * dx, 0.001 * dx);
  for (auto& d : p.disp) d = Vec3{u(rng), u(rng), u(rng)};

  std::vector<Vec3> f(p.size());
  internal_force(p, bonds, f);

  // Independent double loop: distance test against the horizon, volume
  // correction from the ramp formula, correction factors from the particle
  // ellipsoids.
  const double r = dx / 2.0;
  const double c = bonds.micromodulus;
  auto ellipsoid = [](const Vec3& g, const Vec3& n) {
    return 1.0 / std::sqrt((n.x / g.x) * (n.x / g.x) + (n.y / g.y) * (n.y / g.y) +
                           (n.z / g.z) * (n.z / g.z));
  };
  std::vector<Vec3> oracle(p.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    Vec3 fi{};
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (i == j) continue;
      Vec3 xi = p.ref_pos[j] - p.ref_pos[i];
      double len = norm(xi);
      if (len > delta * (1.0 + 1e-9)) continue;
      double vic = len <= delta - r ? 1.0 : (delta + r - len) / (2.0 * r);
      Vec3 dir = xi / len;
      double gij = 0.5 * (ellipsoid(p.correction[i], dir) +
                          ellipsoid(p.correction[j], dir));
      Vec3 def = xi + p.disp[j] - p.disp[i];
      double L = norm(def);
      double s = (L - len) / len;
      fi += def * (gij * c * s * vic * p.volume[j] / L);
    }
    oracle[i] = fi;
    scale = std::max(scale, norm(fi));
  }
  double max_rel = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    max_rel = std::max(max_rel, norm(f[i] - oracle[i]) / scale);
  CHECK(max_rel < 1e-12);
}

TEST_CASE("rigid translation produces no internal force") {
  ParticleSet p = cube_lattice(5, 0.1);
  BondTable bonds = build_bonds(p, Discretization{0.1, 3.0}, mat_1gpa());
  surface_correction(p, bonds, mat_1gpa());
  for (auto& d : p.disp) d = Vec3{0.3, -0.2, 0.15};
  std::vector<Vec3> f(p.size());
  internal_force(p, bonds, f);
  for (const auto& v : f) CHECK(norm(v) < 1e-6);  // absolute, N/m^3 scale 1e11
}

TEST_CASE("momentum conservation and small-strain linearity") {
  const double dx = 0.08;
  ParticleSet p = cube_lattice(6, dx);
  BondTable bonds = build_bonds(p, Discretization{dx, 3.0}, mat_1gpa());
  surface_correction(p, bonds, mat_1gpa());

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1e-7 * dx, 1e-7 * dx);
  std::vector<Vec3> base(p.size());
  for (auto& d : base) d = Vec3{u(rng), u(rng), u(rng)};

  p.disp = base;
  std::vector<Vec3> f1(p.size());
  internal_force(p, bonds, f1);

  // Momentum: sum F V = 0 relative to sum |F| V.
  Vec3 total{};
  double scale = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    total += f1[i] * p.volume[i];
    scale += norm(f1[i]) * p.volume[i];
  }
  CHECK(norm(total) < 1e-9 * scale);

  // Linearity: doubling the displacement doubles the force to 1e-6.
  for (std::size_t i = 0; i < p.size(); ++i) p.disp[i] = base[i] * 2.0;
  std::vector<Vec3> f2(p.size());
  internal_force(p, bonds, f2);
  double fscale = 0.0;
  for (const auto& v : f2) fscale = std::max(fscale, norm(v));
  double max_rel = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    max_rel = std::max(max_rel, norm(f2[i] - f1[i] * 2.0) / fscale);
  CHECK(max_rel < 1e-6);
}

TEST_CASE("uniform stretch: corrected strain energy matches the continuum value") {
  const double dx = 0.08;
  const double eps = 1e-3;
  ParticleSet p = cube_lattice(13, dx);
  BondTable bonds = build_bonds(p, Discretization{dx, 3.0}, mat_1gpa());
  surface_correction(p, bonds, mat_1gpa());

  for (std::size_t i = 0; i < p.size(); ++i)
    p.disp[i] = Vec3{eps * p.ref_pos[i].x, 0.0, 0.0};

  auto w = strain_energy_density(p, bonds);
  double w_ccm = 9.0 * 1e9 * eps * eps / 16.0;

  // Interior particles (full horizon) match almost exactly; the body mean
  // stays within 2 percent.
  std::size_t center = p.size() / 2;
  CHECK(w[center] == doctest::Approx(w_ccm).epsilon(1e-4));

  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= double(w.size());
  CHECK(std::abs(mean - w_ccm) / w_ccm < 0.02);
}

// Static consistency: a lattice bar under uniaxial stretch transmits the
// continuum stress. The end-face traction must match sigma_zz = (lambda +
// 2 mu) eps within the horizon-boundary error.
TEST_CASE("patch test: transmitted force matches the uniaxial-strain modulus") {
  const double dx = 0.05;
  const int n = 11;
  ParticleSet p = cube_lattice(n, dx);
  BondTable bonds = build_bonds(p, Discretization{dx, 3.0}, mat_1gpa());
  surface_correction(p, bonds, mat_1gpa());

  const double eps = 1e-4;
  for (std::size_t i = 0; i < p.size(); ++i)
    p.disp[i] = Vec3{0.0, 0.0, eps * p.ref_pos[i].z};

  std::vector<Vec3> f(p.size());
  internal_force(p, bonds, f);

  // Sum the net force density over the top half: it equals the traction
  // across the mid plane divided by volume, so total force = sigma * area.
  double fz = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.ref_pos[i].z > 1e-12) fz += f[i].z * p.volume[i];

  double area = (n * dx) * (n * dx);
  // nu = 1/4: lambda = mu = 2E/5, so lambda + 2mu = 1.2 E. The energy
  // correction calibrates to 9E/16 per direction, which scales the modulus
  // by 15/16.
  double sigma = 1.2 * 1e9 * eps * (15.0 / 16.0);
  CHECK(std::abs(fz) == doctest::Approx(sigma * area).epsilon(0.10));
}
