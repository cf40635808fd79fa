#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "pericontact/neighbor_list.hpp"

using namespace pericontact;

namespace {

struct Cloud {
  std::vector<Vec3> pos;
  std::vector<int> body;
  std::vector<std::uint8_t> surface;

  NeighborInput input() const { return {pos, body, surface}; }
};

// Two interpenetrating random clouds, everything marked surface.
Cloud random_two_body_cloud(std::mt19937& rng, std::size_t n) {
  Cloud c;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    c.pos.push_back(Vec3{u(rng), u(rng), u(rng)});
    c.body.push_back(i % 2);
    c.surface.push_back(1);
  }
  return c;
}

// O(N^2) reference lists.
std::vector<std::vector<int>> brute_force(const Cloud& c, double radius) {
  std::vector<std::vector<int>> lists(c.pos.size());
  for (std::size_t i = 0; i < c.pos.size(); ++i) {
    if (!c.surface[i]) continue;
    for (std::size_t j = 0; j < c.pos.size(); ++j) {
      if (i == j || !c.surface[j] || c.body[i] == c.body[j]) continue;
      if (norm(c.pos[j] - c.pos[i]) <= radius) lists[i].push_back(int(j));
    }
  }
  return lists;
}

}  // namespace

TEST_CASE("separated bodies produce empty lists") {
  Cloud c;
  c.pos = {Vec3{0, 0, 0}, Vec3{10, 0, 0}};
  c.body = {0, 1};
  c.surface = {1, 1};
  NeighborConfig cfg = NeighborConfig::from_grid(1.0);
  NeighborState state;
  rebuild(state, c.input(), cfg);
  CHECK(state.lists[0].empty());
  CHECK(state.lists[1].empty());
}

TEST_CASE("pair at exactly the list radius is included") {
  NeighborConfig cfg = NeighborConfig::from_grid(1.0);  // list radius 1.3
  Cloud c;
  c.pos = {Vec3{0, 0, 0}, Vec3{cfg.list_radius, 0, 0}};
  c.body = {0, 1};
  c.surface = {1, 1};
  NeighborState state;
  rebuild(state, c.input(), cfg);
  CHECK(state.lists[0] == std::vector<int>{1});
  CHECK(state.lists[1] == std::vector<int>{0});
}

TEST_CASE("same-body and non-surface particles never enter lists") {
  Cloud c;
  c.pos = {Vec3{0, 0, 0}, Vec3{0.1, 0, 0}, Vec3{0.2, 0, 0}};
  c.body = {0, 0, 1};
  c.surface = {1, 1, 0};  // the body-1 particle is interior
  NeighborConfig cfg = NeighborConfig::from_grid(1.0);
  NeighborState state;
  rebuild(state, c.input(), cfg);
  CHECK(state.lists[0].empty());
  CHECK(state.lists[1].empty());
  CHECK(state.lists[2].empty());
}

TEST_CASE("rebuild matches the O(N^2) oracle over 20 seeds") {
  NeighborConfig cfg = NeighborConfig::from_grid(0.1);  // list radius 0.13
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937 rng(seed);
    Cloud c = random_two_body_cloud(rng, 500);
    NeighborState state;
    rebuild(state, c.input(), cfg);
    auto oracle = brute_force(c, cfg.list_radius);
    for (auto& l : oracle) std::sort(l.begin(), l.end());
    REQUIRE(state.lists.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(state.lists[i] == oracle[i]);
  }
}

TEST_CASE("displacement accumulation and the two-maximum trigger") {
  NeighborConfig cfg = NeighborConfig::from_grid(1.0);  // skin 0.3
  Cloud c;
  c.pos = {Vec3{0, 0, 0}, Vec3{5, 0, 0}, Vec3{10, 0, 0}};
  c.body = {0, 1, 0};
  c.surface = {1, 1, 1};
  NeighborState state;
  rebuild(state, c.input(), cfg);

  std::vector<Vec3> du(3, Vec3{});

  // Static: never rebuilds.
  for (int step = 0; step < 100; ++step)
    CHECK(!accumulate_and_check(state, du, cfg));

  // ds_max = 0.20, ds_max2 = 0.15: 0.35 > 0.3 triggers.
  du[0] = Vec3{0.20, 0, 0};
  du[1] = Vec3{0, 0.15, 0};
  CHECK(accumulate_and_check(state, du, cfg));
  CHECK(state.ds_max == doctest::Approx(0.20));
  CHECK(state.ds_max2 == doctest::Approx(0.15));

  // Single moving particle: triggers once its own accumulation passes the
  // skin (second maximum is zero).
  rebuild(state, c.input(), cfg);
  du = {Vec3{0.08, 0, 0}, Vec3{}, Vec3{}};
  CHECK(!accumulate_and_check(state, du, cfg));  // 0.08
  CHECK(!accumulate_and_check(state, du, cfg));  // 0.16
  CHECK(!accumulate_and_check(state, du, cfg));  // 0.24
  CHECK(accumulate_and_check(state, du, cfg));   // 0.32 > 0.3
}

TEST_CASE("vector accumulation: back-and-forth motion does not trigger") {
  NeighborConfig cfg = NeighborConfig::from_grid(1.0);
  Cloud c;
  c.pos = {Vec3{0, 0, 0}, Vec3{5, 0, 0}};
  c.body = {0, 1};
  c.surface = {1, 1};
  NeighborState state;
  rebuild(state, c.input(), cfg);

  std::vector<Vec3> fwd = {Vec3{0.2, 0, 0}, Vec3{}};
  std::vector<Vec3> bwd = {Vec3{-0.2, 0, 0}, Vec3{}};
  for (int i = 0; i < 50; ++i) {
    CHECK(!accumulate_and_check(state, fwd, cfg));
    CHECK(!accumulate_and_check(state, bwd, cfg));
  }
}

// Safety property: between rebuilds no cross-body pair can close from outside
// the list radius to inside the cutoff undetected.
TEST_CASE("skin rule keeps every close pair listed along random walks") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  NeighborConfig cfg = NeighborConfig::from_grid(0.2);  // cutoff 0.2, list 0.26

  Cloud c = random_two_body_cloud(rng, 120);
  NeighborState state;
  rebuild(state, c.input(), cfg);

  std::vector<Vec3> du(c.pos.size());
  for (int step = 0; step < 400; ++step) {
    for (auto& d : du) d = Vec3{u(rng), u(rng), u(rng)} * 0.01;
    for (std::size_t i = 0; i < c.pos.size(); ++i) c.pos[i] += du[i];
    if (accumulate_and_check(state, du, cfg)) rebuild(state, c.input(), cfg);

    for (std::size_t i = 0; i < c.pos.size(); ++i) {
      for (std::size_t j = 0; j < c.pos.size(); ++j) {
        if (c.body[i] == c.body[j]) continue;
        if (norm(c.pos[j] - c.pos[i]) <= cfg.cutoff) {
          bool listed = std::binary_search(state.lists[i].begin(),
                                           state.lists[i].end(), int(j));
          CHECK(listed);
        }
      }
    }
  }
}

TEST_CASE("same trajectory gives identical rebuild steps and lists") {
  auto run_once = [](std::vector<std::vector<int>>* lists_out) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    NeighborConfig cfg = NeighborConfig::from_grid(0.2);
    Cloud c = random_two_body_cloud(rng, 80);
    NeighborState state;
    rebuild(state, c.input(), cfg);
    std::vector<int> rebuild_steps;
    std::vector<Vec3> du(c.pos.size());
    for (int step = 0; step < 200; ++step) {
      for (auto& d : du) d = Vec3{u(rng), u(rng), u(rng)} * 0.01;
      for (std::size_t i = 0; i < c.pos.size(); ++i) c.pos[i] += du[i];
      if (accumulate_and_check(state, du, cfg)) {
        rebuild(state, c.input(), cfg);
        rebuild_steps.push_back(step);
      }
    }
    *lists_out = state.lists;
    return rebuild_steps;
  };
  std::vector<std::vector<int>> l1, l2;
  auto s1 = run_once(&l1);
  auto s2 = run_once(&l2);
  CHECK(s1 == s2);
  CHECK(l1 == l2);
  CHECK(!s1.empty());
}
