#pragma once

#include <span>

#include "pericontact/body.hpp"

namespace pericontact {

// Improved Gaussian kernel with compact support 3h and its constants. h is
// the body's grid size.
struct KernelParams {
  double h = 0.0;

  double support() const { return 3.0 * h; }
  static double c0() { return std::exp(-9.0); }
  static double c1() { return 10.0 * c0(); }
  double alpha3d() const { return 1.0 / (std::pow(M_PI, 1.5) * h * h * h); }
};

// Kernel value: alpha (exp(-(r/h)^2) - c0) / (1 - c1) inside 3h, zero
// outside; exactly zero at r = 3h.
double kernel_value(double r, double h);

// Radial derivative dW/dr; the constant shift drops out of the gradient.
double kernel_deriv(double r, double h);

struct SurfaceConfig {
  double threshold = 0.75;  // min eigenvalue at or below -> surface
};

// Renormalization sum matrix M(x_i) = sum_j grad_i W_ij (x) (x_j - x_i) dV_j
// evaluated at the given positions; B = M^{-1}. Returned symmetrized.
Mat3 renormalization_sum(const Vec3& xi, std::span<const Vec3> neighbor_pos,
                         std::span<const double> neighbor_vol, double h);

// Classifies every particle of a body against its own point cloud at the
// current (deformed) positions: minimum eigenvalue of the renormalization sum
// matrix, surface flag, outward normal. Degenerate neighborhoods (no
// invertible matrix) are flagged surface with a raw kernel-gradient normal.
SurfaceInfo classify_surface(const ParticleSet& particles, double h,
                             const SurfaceConfig& config = {});

}  // namespace pericontact
