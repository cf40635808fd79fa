#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "pericontact/geometry.hpp"

namespace pericontact {

// Uniform spatial bins over a point cloud for fixed-radius neighbor queries.
// Query radius must not exceed the cell size.
class CellGrid {
 public:
  CellGrid(std::span<const Vec3> points, double cell)
      : points_(points), cell_(std::max(cell, 1e-300)) {
    if (points.empty()) {
      nx_ = ny_ = nz_ = 1;
      starts_.assign(2, 0);
      return;
    }
    Vec3 lo = points[0], hi = points[0];
    for (const Vec3& p : points) {
      lo.x = std::min(lo.x, p.x); hi.x = std::max(hi.x, p.x);
      lo.y = std::min(lo.y, p.y); hi.y = std::max(hi.y, p.y);
      lo.z = std::min(lo.z, p.z); hi.z = std::max(hi.z, p.z);
    }
    origin_ = lo;
    nx_ = dim(hi.x - lo.x);
    ny_ = dim(hi.y - lo.y);
    nz_ = dim(hi.z - lo.z);

    std::size_t ncells = std::size_t(nx_) * ny_ * nz_;
    std::vector<int> cell_of(points.size());
    std::vector<int> counts(ncells, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      cell_of[i] = cell_index(points[i]);
      ++counts[cell_of[i]];
    }
    starts_.assign(ncells + 1, 0);
    for (std::size_t c = 0; c < ncells; ++c) starts_[c + 1] = starts_[c] + counts[c];
    order_.resize(points.size());
    std::vector<int> cursor(starts_.begin(), starts_.end() - 1);
    for (std::size_t i = 0; i < points.size(); ++i)
      order_[cursor[cell_of[i]]++] = int(i);
  }

  // Visits every stored point j with |p_j - q| <= radius (including a stored
  // point identical to q; callers filter self-pairs by index).
  template <class F>
  void for_neighbors(const Vec3& q, double radius, F&& fn) const {
    if (points_.empty()) return;
    int cx = coord(q.x - origin_.x, nx_);
    int cy = coord(q.y - origin_.y, ny_);
    int cz = coord(q.z - origin_.z, nz_);
    int reach = int(std::ceil(radius / cell_));
    double r2 = radius * radius;
    for (int dz = -reach; dz <= reach; ++dz) {
      int z = cz + dz;
      if (z < 0 || z >= nz_) continue;
      for (int dy = -reach; dy <= reach; ++dy) {
        int y = cy + dy;
        if (y < 0 || y >= ny_) continue;
        for (int dx = -reach; dx <= reach; ++dx) {
          int x = cx + dx;
          if (x < 0 || x >= nx_) continue;
          std::size_t c = (std::size_t(z) * ny_ + y) * nx_ + x;
          for (int k = starts_[c]; k < starts_[c + 1]; ++k) {
            int j = order_[k];
            Vec3 d = points_[j] - q;
            double d2 = dot(d, d);
            if (d2 <= r2) fn(j, std::sqrt(d2));
          }
        }
      }
    }
  }

 private:
  int dim(double extent) const {
    return std::max(1, int(extent / cell_) + 1);
  }
  int coord(double offset, int n) const {
    int c = int(offset / cell_);
    return std::clamp(c, 0, n - 1);
  }
  int cell_index(const Vec3& p) const {
    int x = coord(p.x - origin_.x, nx_);
    int y = coord(p.y - origin_.y, ny_);
    int z = coord(p.z - origin_.z, nz_);
    return (z * ny_ + y) * nx_ + x;
  }

  std::span<const Vec3> points_;
  double cell_;
  Vec3 origin_;
  int nx_ = 1, ny_ = 1, nz_ = 1;
  std::vector<int> starts_;
  std::vector<int> order_;
};

}  // namespace pericontact
