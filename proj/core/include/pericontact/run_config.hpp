#pragma once

#include <string>
#include <vector>

#include "pericontact/model.hpp"
#include "pericontact/solver.hpp"

namespace pericontact {

enum class GeneratorType { none, sphere, roller, block, plate };

struct GeneratorConfig {
  GeneratorType type = GeneratorType::none;
  double radius = 0.0;
  double length = 0.0;
  Vec3 center{};
  Vec3 lo{}, hi{};
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0, z = 0.0;
  bool normal_up = true;
};

struct BodyConfig {
  std::string name;
  BodyKind kind = BodyKind::deformable;
  std::string mesh;  // path; empty when a generator is used
  GeneratorConfig generator;
  Material material;
  Vec3 cap_load{};            // total body force over the top cap, N
  double cap_fraction = 0.1;  // cap depth as a fraction of body height
  int fix_bottom = 0;         // pinned bottom particle layers
  RigidMotionType motion = RigidMotionType::fixed;
  Vec3 motion_axis{0.0, 0.0, -1.0};
  double motion_load = 0.0;  // N along motion_axis
};

// Everything a run consumes; all physical quantities SI.
struct RunConfig {
  std::vector<BodyConfig> bodies;
  double dx = 0.0;
  double horizon_ratio = 3.0;
  double cutoff_factor = 1.0;
  double list_factor = 1.3;
  double surface_threshold = 0.75;
  ContactConfig contact;
  SolveConfig solver;
  std::string out_dir = "out";
  bool write_vtk = true;
  bool diagnostics = true;
  int threads = 1;
};

// Strict JSON parse: unknown keys and missing required fields are rejected.
RunConfig parse_run_config(const std::string& path);
RunConfig parse_run_config_text(const std::string& text, const std::string& name);

// Serializes the effective config (defaults filled in) so a run can be
// reproduced from its echo.
std::string serialize_run_config(const RunConfig& config);
void write_config_echo(const RunConfig& config, const std::string& path);

// Ingest stage: loads meshes / runs generators, applies loads and
// constraints, and assembles the model.
Model build_model(const RunConfig& config);

}  // namespace pericontact
