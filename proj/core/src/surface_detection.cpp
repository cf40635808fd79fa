#include "pericontact/surface_detection.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pericontact/cell_grid.hpp"

namespace pericontact {

namespace {
// Support test with an ulp-scale slack: lattice points sitting exactly at
// 3h must land inside consistently from every direction.
inline bool outside_support(double r, double h) {
  return r > 3.0 * h * (1.0 + 1e-12);
}
}  // namespace

double kernel_value(double r, double h) {
  if (outside_support(r, h)) return 0.0;
  KernelParams kp{h};
  double q = r / h;
  return kp.alpha3d() * (std::exp(-q * q) - KernelParams::c0()) /
         (1.0 - KernelParams::c1());
}

double kernel_deriv(double r, double h) {
  if (outside_support(r, h)) return 0.0;
  KernelParams kp{h};
  double q = r / h;
  return kp.alpha3d() * (-2.0 * r / (h * h)) * std::exp(-q * q) /
         (1.0 - KernelParams::c1());
}

Mat3 renormalization_sum(const Vec3& xi, std::span<const Vec3> neighbor_pos,
                         std::span<const double> neighbor_vol, double h) {
  Mat3 m;
  for (std::size_t k = 0; k < neighbor_pos.size(); ++k) {
    Vec3 d = xi - neighbor_pos[k];  // r_ij = x_i - x_j
    double r = norm(d);
    if (r == 0.0) continue;
    // grad_i W (x) (x_j - x_i) = (-W'/r) r_ij (x) r_ij
    add_outer(m, d, -kernel_deriv(r, h) / r * neighbor_vol[k]);
  }
  // Symmetrize; analytic form already is, this removes roundoff skew.
  Mat3 s;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s(a, b) = 0.5 * (m(a, b) + m(b, a));
  return s;
}

SurfaceInfo classify_surface(const ParticleSet& particles, double h,
                             const SurfaceConfig& config) {
  const std::size_t n = particles.size();
  SurfaceInfo info;
  info.resize(n);

  std::vector<Vec3> cur(n);
  for (std::size_t i = 0; i < n; ++i) cur[i] = particles.current(i);

  const double support = 3.0 * h * (1.0 + 1e-12);
  CellGrid grid(cur, support);

  // Gather neighbor ids first so the sums run in index order regardless of
  // bin layout (rigid-translation invariance of the result).
  std::vector<std::vector<int>> nbr(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid.for_neighbors(cur[i], support, [&](int j, double) {
      if (std::size_t(j) != i) nbr[i].push_back(j);
    });
    std::sort(nbr[i].begin(), nbr[i].end());
  }

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::ptrdiff_t ii = 0; ii < std::ptrdiff_t(n); ++ii) {
    std::size_t i = std::size_t(ii);
    Mat3 m;
    Vec3 grad_sum{};
    double grad_scale = 0.0;
    for (int j : nbr[i]) {
      Vec3 d = cur[i] - cur[j];
      double r = norm(d);
      if (r == 0.0) continue;
      double dw = kernel_deriv(r, h);
      double vol = particles.volume[j];
      add_outer(m, d, -dw / r * vol);
      Vec3 g = d * (dw / r * vol);  // grad_i W_ij dV_j
      grad_sum += g;
      grad_scale += norm(g);
    }
    Mat3 sym;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) sym(a, b) = 0.5 * (m(a, b) + m(b, a));

    auto eig = symmetric_eigenvalues(sym);
    double lmin = eig[0];
    double lmax = eig[2];

    bool degenerate = !(lmin > 0.0) || !(lmax > 0.0) || lmax / lmin > 1e12 ||
                      !std::isfinite(lmin) || !std::isfinite(lmax);

    if (degenerate) {
      info.lambda[i] = std::max(lmin, 0.0);
      info.surface[i] = 1;
      Vec3 v = -grad_sum;
      if (norm(v) > 1e-12 * grad_scale && norm(v) > 0.0) {
        info.normal[i] = normalized(v);
        info.normal_valid[i] = 1;
      }
      continue;
    }

    info.lambda[i] = lmin;
    if (lmin <= config.threshold) {
      info.surface[i] = 1;
      Mat3 b;
      if (invert(sym, b)) {
        Vec3 v = -(b * grad_sum);
        double scale = b.frobenius() * grad_scale;
        if (norm(v) > 1e-12 * scale && norm(v) > 0.0) {
          info.normal[i] = normalized(v);
          info.normal_valid[i] = 1;
        }
      }
    }
  }
  return info;
}

}  // namespace pericontact
