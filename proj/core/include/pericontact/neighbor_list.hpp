#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pericontact/geometry.hpp"

namespace pericontact {

// Verlet-list radii. The physical cutoff gets a skin so lists survive until
// accumulated motion could actually close a new pair.
struct NeighborConfig {
  double cutoff = 0.0;       // delta_cut, m
  double list_radius = 0.0;  // delta_m, m

  double skin() const { return list_radius - cutoff; }

  static NeighborConfig from_grid(double dx, double cutoff_factor = 1.0,
                                  double list_factor = 1.3) {
    return NeighborConfig{cutoff_factor * dx, list_factor * dx};
  }
};

// Flat view of every particle the contact system can see: position, owning
// body, and whether it is currently a surface particle.
struct NeighborInput {
  std::span<const Vec3> position;
  std::span<const int> body;
  std::span<const std::uint8_t> surface;
};

// Candidate-contact state: per surface particle, the sorted ids of
// surface particles of other bodies within delta_m, plus the displacement
// accumulated since the last rebuild.
struct NeighborState {
  std::vector<std::vector<int>> lists;  // indexed by global particle id
  std::vector<Vec3> accum_disp;
  std::size_t rebuild_count = 0;

  // Two largest accumulated displacement magnitudes, refreshed by
  // accumulate_and_check.
  double ds_max = 0.0;
  double ds_max2 = 0.0;
};

// Rebuilds all lists with a spatial-bin pass and resets the accumulated
// displacements. Boundary inclusive: a pair at exactly delta_m is listed.
void rebuild(NeighborState& state, const NeighborInput& input,
             const NeighborConfig& config);

// Accumulates one step of displacements and reports whether the two largest
// accumulated magnitudes exceed the skin, which invalidates the lists.
bool accumulate_and_check(NeighborState& state, std::span<const Vec3> delta_u,
                          const NeighborConfig& config);

}  // namespace pericontact
