#pragma once

#include <string>

#include "pericontact/body.hpp"

namespace pericontact {

// Built-in lattice generators for the benchmark solids. Deformable bodies
// are voxelized on a cell-centered cubic lattice (particle volume dx^3);
// rigid plates carry a one-layer particle grid plus the quad faces tiling
// it, with face corners at the particles so the face candidate lists work
// directly off the Verlet lists.

// Solid sphere of radius R centered at `center`: cell centers with
// ||p - center|| <= R.
Body make_sphere_body(const std::string& name, double radius, const Vec3& center,
                      double dx, const Material& material, double horizon_ratio);

// Solid cylinder, axis along +y from y0 to y0+length, radius in the xz
// plane around (cx, cz).
Body make_roller_body(const std::string& name, double radius, double length,
                      const Vec3& center, double dx, const Material& material,
                      double horizon_ratio);

// Rectangular block spanning [lo, hi] (snapped to whole cells).
Body make_block_body(const std::string& name, const Vec3& lo, const Vec3& hi,
                     double dx, const Material& material, double horizon_ratio);

// Rigid plate in the plane z = z0 spanning [x0,x1] x [y0,y1], particles on
// an integer grid of spacing dx, faces oriented along +z or -z.
Body make_rigid_plate(const std::string& name, double x0, double x1, double y0,
                      double y1, double z0, double dx, bool normal_up,
                      const Material& material);

// Marks the bottom `layers` particle layers (minimum z) of a body as fixed.
void fix_bottom_layers(Body& body, int layers);

// Applies a total body force distributed over the top cap (particles within
// `cap_fraction` of the body height from the top), as a uniform force
// density summing to `total`.
void apply_cap_load(Body& body, const Vec3& total, double cap_fraction);

}  // namespace pericontact
