#pragma once

#include <string>
#include <vector>

#include "pericontact/hertz.hpp"
#include "pericontact/run_config.hpp"

namespace pericontact {

// The three validation cases: elastic sphere on a rigid plane, elastic
// roller on a rigid plane, rigid flat punch on an elastic half-space.
struct BenchOptions {
  double dx = 0.12;
  double horizon_ratio = 3.0;
  double dt = 1.0;  // ADR pseudo step; the sweep overrides it
  double tolerance = 1e-4;
  int max_steps = 100000;
  int load_ramp_steps = 2000;
  int output_every = 0;
  std::string out_dir = "out";
  int threads = 1;

  // Load conventions. The defaults realize the documented contact radii
  // (sphere a = 0.52002 m, roller a = 0.69099 m) for a deformable body on a
  // kinematically rigid plane; `text_loads` switches to the alternative 8e8
  // magnitudes. Explicit overrides win.
  bool text_loads = false;
  double sphere_load = 0.0;      // N; 0 = convention default (2e8)
  double roller_line_load = 0.0; // N/m; 0 = convention default (4e8)
  double punch_half_width = 1.0; // snapped to the grid
  double punch_line_load = 2e8;  // N/m
};

struct BenchResult {
  HertzCase reference;
  double mre = 0.0;        // percent, against the analytic profile
  double fitted_a = 0.0;   // Gauss-Newton profile fit (sphere/roller)
  double fitted_p0 = 0.0;
  double applied = 0.0;    // |total load| on the deformable/rigid pair, N
  double reaction = 0.0;   // |total contact reaction| on the rigid body, N
  double balance_rel = 0.0;
  bool converged = false;
  int steps = 0;
  std::size_t particles = 0;
  std::vector<PressureSample> samples;      // nonzero-force profile samples
  std::vector<PressureSample> mre_samples;  // restricted to the profile domain
  std::vector<StepRecord> history;
};

RunConfig sphere_bench_config(const BenchOptions& opts);
RunConfig roller_bench_config(const BenchOptions& opts);
RunConfig punch_bench_config(const BenchOptions& opts);

// Runs one case end to end: build, solve to ADR convergence, sample the
// contact pressure, compare with the analytic profile, write the report
// files (hertz_report.csv, convergence log, fields, config echo).
BenchResult run_bench_case(HertzKind kind, const BenchOptions& opts);

// Per-case sample extraction from a solved model (exposed for the
// acceptance suite, which reuses solved states).
std::vector<PressureSample> extract_pressure_samples(const Model& model,
                                                     HertzKind kind);

struct SweepEntry {
  double parameter = 0.0;
  BenchResult result;
};

enum class SweepKind { grid, horizon, dt };

std::vector<SweepEntry> run_sweep(HertzKind kind, SweepKind sweep,
                                  const BenchOptions& base);

}  // namespace pericontact
