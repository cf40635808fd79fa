// Microbenchmarks for the per-step hot paths: internal force assembly,
// surface classification, Verlet rebuilds, and the contact pass.

#include <benchmark/benchmark.h>

#include <random>

#include "pericontact/bench_cases.hpp"
#include "pericontact/neighbor_list.hpp"
#include "pericontact/pd_core.hpp"
#include "pericontact/run_config.hpp"
#include "pericontact/surface_detection.hpp"

using namespace pericontact;

namespace {

Material mat_1gpa() { return Material{1000.0, 1e9, 0.25}; }

ParticleSet cube_lattice(int n, double dx) {
  ParticleSet p;
  p.resize(std::size_t(n) * n * n);
  std::size_t idx = 0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        p.ref_pos[idx] = Vec3{i * dx, j * dx, k * dx};
        p.volume[idx] = dx * dx * dx;
        ++idx;
      }
  return p;
}

}  // namespace

static void InternalForce(benchmark::State& state) {
  int n = int(state.range(0));
  ParticleSet p = cube_lattice(n, 0.08);
  BondTable bonds = build_bonds(p, Discretization{0.08, 3.0}, mat_1gpa());
  surface_correction(p, bonds, mat_1gpa());
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1e-4, 1e-4);
  for (auto& d : p.disp) d = Vec3{u(rng), u(rng), u(rng)};
  std::vector<Vec3> f(p.size());
  for (auto _ : state) {
    internal_force(p, bonds, f);
    benchmark::DoNotOptimize(f.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(bonds.total()));
}
BENCHMARK(InternalForce)->Arg(9)->Arg(13)->Arg(17);

static void SurfaceClassify(benchmark::State& state) {
  int n = int(state.range(0));
  ParticleSet p = cube_lattice(n, 0.08);
  for (auto _ : state) {
    SurfaceInfo info = classify_surface(p, 0.08);
    benchmark::DoNotOptimize(info.lambda.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(p.size()));
}
BENCHMARK(SurfaceClassify)->Arg(9)->Arg(13);

static void VerletRebuild(benchmark::State& state) {
  int n = int(state.range(0));
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec3> pos;
  std::vector<int> body;
  std::vector<std::uint8_t> surf;
  for (int i = 0; i < n; ++i) {
    pos.push_back(Vec3{u(rng), u(rng), u(rng)});
    body.push_back(i % 2);
    surf.push_back(1);
  }
  NeighborConfig cfg = NeighborConfig::from_grid(0.05);
  NeighborState st;
  for (auto _ : state) {
    rebuild(st, NeighborInput{pos, body, surf}, cfg);
    benchmark::DoNotOptimize(st.lists.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * n);
}
BENCHMARK(VerletRebuild)->Arg(1000)->Arg(10000);

static void ContactPass(benchmark::State& state) {
  // Sphere-on-plane at the benchmark resolution, converged-ish geometry.
  BenchOptions opts;
  opts.dx = 0.12;
  RunConfig cfg = sphere_bench_config(opts);
  cfg.out_dir = "/tmp/pericontact_bench_contact";
  Model model = build_model(cfg);
  // Push the sphere into the trigger band so pairs are active.
  Body& sphere = model.bodies[0];
  for (auto& d : sphere.particles.disp) d.z -= 0.04;
  model.refresh_search_structures();
  for (auto _ : state) {
    auto pairs = model.contacts();
    benchmark::DoNotOptimize(pairs.data());
  }
}
BENCHMARK(ContactPass);

BENCHMARK_MAIN();
