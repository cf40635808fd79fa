#pragma once

#include <span>
#include <vector>

#include "pericontact/body.hpp"

namespace pericontact {

// Bond micromodulus c = 6E / (pi delta^4 (1 - 2 nu)). Bond-based PD fixes
// nu = 1/4; other values are rejected.
double micromodulus(const Material& material, double horizon);

// Bonds are all pairs with 0 < ||xi|| <= delta, with the partial-volume
// weight v_ic ramping from 1 to 1/2 across the transition band
// (delta - r, delta]. Coincident particles are rejected.
BondTable build_bonds(const ParticleSet& particles, const Discretization& disc,
                      const Material& material);

// Energy-ratio surface correction: per-particle factors g = W_ccm / W_pd for
// the three uniaxial stretch loadings, then per-bond factors interpolated on
// the ellipsoid with principal values (g_x, g_y, g_z) and averaged over the
// two endpoints. Fills particles.correction and bonds.surf_corr.
void surface_correction(ParticleSet& particles, BondTable& bonds,
                        const Material& material);

// Internal force density F_int(i) = sum_j g_ij c s n v_ic V_j, evaluated at
// the current deformed positions. out must have particles.size() entries.
void internal_force(const ParticleSet& particles, const BondTable& bonds,
                    std::span<Vec3> out);

// Corrected PD strain energy density per particle for the current
// displacement field: (1/4) sum_j g_ij c s^2 ||xi|| v_ic V_j.
std::vector<double> strain_energy_density(const ParticleSet& particles,
                                          const BondTable& bonds);

// Row sum of the linearized bond stiffness, sum_j g_ij c v_ic V_j / ||xi||,
// in N/m^4; the ADR fictitious-density bound builds on this.
std::vector<double> bond_stiffness_row_sum(const ParticleSet& particles,
                                           const BondTable& bonds);

}  // namespace pericontact
