#include "pericontact/neighbor_list.hpp"

#include <algorithm>

#include "pericontact/cell_grid.hpp"

namespace pericontact {

void rebuild(NeighborState& state, const NeighborInput& input,
             const NeighborConfig& config) {
  const std::size_t n = input.position.size();
  state.lists.assign(n, {});
  state.accum_disp.assign(n, Vec3{});
  state.ds_max = 0.0;
  state.ds_max2 = 0.0;
  ++state.rebuild_count;

  // Bin only the surface particles; interior particles never enter lists.
  std::vector<int> surf_ids;
  surf_ids.reserve(n);
  std::vector<Vec3> surf_pos;
  for (std::size_t i = 0; i < n; ++i) {
    if (input.surface[i]) {
      surf_ids.push_back(int(i));
      surf_pos.push_back(input.position[i]);
    }
  }

  CellGrid grid(surf_pos, config.list_radius);
  for (std::size_t k = 0; k < surf_ids.size(); ++k) {
    int i = surf_ids[k];
    auto& list = state.lists[i];
    grid.for_neighbors(surf_pos[k], config.list_radius, [&](int sj, double) {
      int j = surf_ids[sj];
      if (input.body[j] != input.body[i]) list.push_back(j);
    });
    std::sort(list.begin(), list.end());
  }
}

bool accumulate_and_check(NeighborState& state, std::span<const Vec3> delta_u,
                          const NeighborConfig& config) {
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < delta_u.size(); ++i) {
    state.accum_disp[i] += delta_u[i];
    double d = norm(state.accum_disp[i]);
    if (d > m1) {
      m2 = m1;
      m1 = d;
    } else if (d > m2) {
      m2 = d;
    }
  }
  state.ds_max = m1;
  state.ds_max2 = m2;
  return m1 + m2 > config.skin();
}

}  // namespace pericontact
