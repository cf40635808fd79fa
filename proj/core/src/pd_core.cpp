#include "pericontact/pd_core.hpp"

#include <algorithm>
#include <cmath>

#include "pericontact/cell_grid.hpp"
#include "pericontact/errors.hpp"

namespace pericontact {

namespace {

// Absorbs roundoff at the horizon boundary so lattice shells sitting exactly
// at ||xi|| = delta are kept deterministically.
constexpr double kHorizonSlack = 1.0 + 1e-9;

// Fictitious displacement gradient for the surface-correction loadings. The
// correction ratios are invariant to this choice to first order.
constexpr double kCorrectionStretch = 1e-3;

double volume_correction(double len, double horizon, double r) {
  return len <= horizon - r ? 1.0 : (horizon + r - len) / (2.0 * r);
}

// Directional factor on the ellipsoid with principal values g: the radius of
// the ellipsoid along the unit vector n.
double ellipsoid_factor(const Vec3& g, const Vec3& n) {
  double q = (n.x / g.x) * (n.x / g.x) + (n.y / g.y) * (n.y / g.y) +
             (n.z / g.z) * (n.z / g.z);
  return 1.0 / std::sqrt(q);
}

}  // namespace

double micromodulus(const Material& material, double horizon) {
  if (std::abs(material.nu - 0.25) > 1e-12)
    throw AssemblyError("bond-based body requires nu = 1/4");
  if (!(material.E > 0.0) || !(horizon > 0.0))
    throw AssemblyError("micromodulus needs E > 0 and horizon > 0");
  double d4 = horizon * horizon * horizon * horizon;
  return 6.0 * material.E / (M_PI * d4 * (1.0 - 2.0 * material.nu));
}

BondTable build_bonds(const ParticleSet& particles, const Discretization& disc,
                      const Material& material) {
  const std::size_t n = particles.size();
  const double horizon = disc.horizon();
  const double search = horizon * kHorizonSlack;
  const double r = disc.transition_halfwidth();
  const double coincident = 1e-12 * disc.dx;

  BondTable bonds;
  bonds.micromodulus = micromodulus(material, horizon);
  bonds.offsets.assign(n + 1, 0);

  CellGrid grid(particles.ref_pos, search);

  std::vector<std::vector<int>> nbrs(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid.for_neighbors(particles.ref_pos[i], search, [&](int j, double dist) {
      if (std::size_t(j) == i) return;
      if (dist <= coincident)
        throw AssemblyError("coincident particles " + std::to_string(i) + " and " +
                            std::to_string(j));
      nbrs[i].push_back(j);
    });
    std::sort(nbrs[i].begin(), nbrs[i].end());
    bonds.offsets[i + 1] = bonds.offsets[i] + nbrs[i].size();
  }

  bonds.neighbor.resize(bonds.offsets[n]);
  bonds.ref_len.resize(bonds.offsets[n]);
  bonds.vol_corr.resize(bonds.offsets[n]);
  bonds.surf_corr.assign(bonds.offsets[n], 1.0);

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = bonds.offsets[i];
    for (int j : nbrs[i]) {
      double len = norm(particles.ref_pos[j] - particles.ref_pos[i]);
      bonds.neighbor[k] = j;
      bonds.ref_len[k] = len;
      bonds.vol_corr[k] = volume_correction(len, horizon, r);
      ++k;
    }
  }
  return bonds;
}

void surface_correction(ParticleSet& particles, BondTable& bonds,
                        const Material& material) {
  const std::size_t n = particles.size();
  const double c = bonds.micromodulus;
  const double zeta = kCorrectionStretch;
  const double w_ccm = 9.0 * material.E * zeta * zeta / 16.0;

  // PD strain energy density under the three uniaxial stretch loadings.
  std::vector<Vec3> w_pd(n, Vec3{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = bonds.offsets[i]; k < bonds.offsets[i + 1]; ++k) {
      int j = bonds.neighbor[k];
      Vec3 xi = particles.ref_pos[j] - particles.ref_pos[i];
      double len = bonds.ref_len[k];
      double w = bonds.vol_corr[k] * particles.volume[j];
      for (int axis = 0; axis < 3; ++axis) {
        Vec3 def = xi;
        def[axis] += zeta * xi[axis];
        double s = (norm(def) - len) / len;
        w_pd[i][axis] += 0.25 * c * s * s * len * w;
      }
    }
  }

  particles.correction.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (bonds.count(i) == 0 || !(w_pd[i].x > 0.0) || !(w_pd[i].y > 0.0) ||
        !(w_pd[i].z > 0.0))
      throw AssemblyError("degenerate neighborhood at particle " +
                          std::to_string(i));
    particles.correction[i] =
        Vec3{w_ccm / w_pd[i].x, w_ccm / w_pd[i].y, w_ccm / w_pd[i].z};
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = bonds.offsets[i]; k < bonds.offsets[i + 1]; ++k) {
      int j = bonds.neighbor[k];
      Vec3 dir = (particles.ref_pos[j] - particles.ref_pos[i]) / bonds.ref_len[k];
      double gi = ellipsoid_factor(particles.correction[i], dir);
      double gj = ellipsoid_factor(particles.correction[j], dir);
      bonds.surf_corr[k] = 0.5 * (gi + gj);
    }
  }
}

void internal_force(const ParticleSet& particles, const BondTable& bonds,
                    std::span<Vec3> out) {
  const std::size_t n = particles.size();
  const double c = bonds.micromodulus;

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::ptrdiff_t ii = 0; ii < std::ptrdiff_t(n); ++ii) {
    std::size_t i = std::size_t(ii);
    Vec3 f{};
    Vec3 xi_pos = particles.ref_pos[i];
    Vec3 ui = particles.disp[i];
    for (std::size_t k = bonds.offsets[i]; k < bonds.offsets[i + 1]; ++k) {
      int j = bonds.neighbor[k];
      Vec3 def = (particles.ref_pos[j] - xi_pos) + (particles.disp[j] - ui);
      double len = norm(def);
      if (len <= 0.0)
        throw SolveError("collapsed bond at particle " + std::to_string(i));
      double l0 = bonds.ref_len[k];
      double s = (len - l0) / l0;
      double coef =
          bonds.surf_corr[k] * c * s * bonds.vol_corr[k] * particles.volume[j] / len;
      f += def * coef;
    }
    out[i] = f;
  }
}

std::vector<double> strain_energy_density(const ParticleSet& particles,
                                          const BondTable& bonds) {
  const std::size_t n = particles.size();
  const double c = bonds.micromodulus;
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = bonds.offsets[i]; k < bonds.offsets[i + 1]; ++k) {
      int j = bonds.neighbor[k];
      Vec3 def = (particles.ref_pos[j] - particles.ref_pos[i]) +
                 (particles.disp[j] - particles.disp[i]);
      double l0 = bonds.ref_len[k];
      double s = (norm(def) - l0) / l0;
      w[i] += 0.25 * bonds.surf_corr[k] * c * s * s * l0 * bonds.vol_corr[k] *
              particles.volume[j];
    }
  }
  return w;
}

std::vector<double> bond_stiffness_row_sum(const ParticleSet& particles,
                                           const BondTable& bonds) {
  const std::size_t n = particles.size();
  std::vector<double> row(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = bonds.offsets[i]; k < bonds.offsets[i + 1]; ++k) {
      int j = bonds.neighbor[k];
      row[i] += bonds.surf_corr[k] * bonds.micromodulus * bonds.vol_corr[k] *
                particles.volume[j] / bonds.ref_len[k];
    }
  }
  return row;
}

}  // namespace pericontact
