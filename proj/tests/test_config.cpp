#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>

#include "pericontact/errors.hpp"
#include "pericontact/run_config.hpp"

using namespace pericontact;
namespace fs = std::filesystem;

namespace {

std::string minimal_config() {
  return R"({
    "bodies": [
      {"name": "ball", "kind": "deformable",
       "generator": {"type": "sphere", "radius": 0.3, "center": [0, 0, 0]},
       "material": {"density": 1000, "E": 1e9, "nu": 0.25},
       "load": {"type": "body_force_cap", "total": [0, 0, -1e6], "cap_fraction": 1.0}},
      {"name": "plate", "kind": "rigid",
       "generator": {"type": "plate", "x0": -0.5, "x1": 0.5, "y0": -0.5, "y1": 0.5,
                      "z": -0.35, "normal": "+z"},
       "material": {"density": 1000, "E": 1e9, "nu": 0.25},
       "motion": {"type": "fixed"}}
    ],
    "discretization": {"dx": 0.1, "horizon_ratio": 3.0}
  })";
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  RunConfig cfg = parse_run_config_text(minimal_config(), "test");
  CHECK(cfg.bodies.size() == 2);
  CHECK(cfg.dx == 0.1);
  CHECK(cfg.solver.mode == SolveMode::adr);
  CHECK(cfg.solver.tolerance == 1e-4);
  CHECK(cfg.contact.exponent == 1.5);
  CHECK(cfg.contact.trigger_factor == 0.5);
  CHECK(cfg.cutoff_factor == 1.0);
  CHECK(cfg.list_factor == 1.3);
  CHECK(cfg.surface_threshold == 0.75);
  CHECK(cfg.threads == 1);
}

TEST_CASE("unknown keys are rejected at every level") {
  auto expect_reject = [](std::string text) {
    CHECK_THROWS_AS(parse_run_config_text(text, "t"), ConfigError);
  };
  expect_reject(R"({"bogus": 1})");

  std::string body_extra = minimal_config();
  body_extra.replace(body_extra.find("\"name\": \"ball\""), 14,
                     "\"name\": \"ball\", \"frob\": 1");
  expect_reject(body_extra);

  std::string mat_extra = minimal_config();
  mat_extra.replace(mat_extra.find("\"nu\": 0.25}"), 11, "\"nu\": 0.25, \"mu\": 1}");
  expect_reject(mat_extra);

  std::string disc_extra = minimal_config();
  disc_extra.replace(disc_extra.find("\"horizon_ratio\": 3.0}"), 21,
                     "\"horizon_ratio\": 3.0, \"pad\": 2}");
  expect_reject(disc_extra);
}

TEST_CASE("validation failures") {
  CHECK_THROWS_AS(parse_run_config_text("{", "t"), ConfigError);
  CHECK_THROWS_AS(parse_run_config_text("{}", "t"), ConfigError);
  CHECK_THROWS_AS(parse_run_config_text(R"({"bodies": []})", "t"), ConfigError);

  // Both mesh and generator given.
  std::string both = minimal_config();
  both.replace(both.find("\"generator\": {\"type\": \"sphere\""), 30,
               "\"mesh\": \"x.mesh\", \"generator\": {\"type\": \"sphere\"");
  CHECK_THROWS_AS(parse_run_config_text(both, "t"), ConfigError);

  // Negative dx.
  std::string bad_dx = minimal_config();
  bad_dx.replace(bad_dx.find("\"dx\": 0.1"), 9, "\"dx\": -0.1");
  CHECK_THROWS_AS(parse_run_config_text(bad_dx, "t"), ConfigError);
}

TEST_CASE("serialize/parse round trip is exact") {
  RunConfig cfg = parse_run_config_text(minimal_config(), "test");
  std::string text = serialize_run_config(cfg);
  RunConfig cfg2 = parse_run_config_text(text, "echo");
  CHECK(serialize_run_config(cfg2) == text);
}

TEST_CASE("build_model runs generators and assembles") {
  RunConfig cfg = parse_run_config_text(minimal_config(), "test");
  Model model = build_model(cfg);
  REQUIRE(model.bodies.size() == 2);
  CHECK(model.bodies[0].deformable());
  CHECK(model.bodies[0].particles.size() > 50);
  CHECK(model.bodies[0].bonds.total() > 0);
  CHECK(!model.bodies[1].deformable());
  CHECK(model.bodies[1].faces.size() == 100);  // 10x10 grid of quads

  // Sphere body carries a load summing to the configured total.
  Vec3 total{};
  const Body& ball = model.bodies[0];
  for (std::size_t i = 0; i < ball.particles.size(); ++i)
    total += ball.particles.body_force[i] * ball.particles.volume[i];
  CHECK(total.z == doctest::Approx(-1e6).epsilon(1e-9));
}

TEST_CASE("missing mesh file surfaces as an ingest error") {
  std::string cfg_text = R"({
    "bodies": [{"name": "b", "kind": "deformable", "mesh": "/no/such.mesh",
                "material": {"density": 1000, "E": 1e9, "nu": 0.25}}],
    "discretization": {"dx": 0.1}
  })";
  RunConfig cfg = parse_run_config_text(cfg_text, "t");
  CHECK_THROWS_AS(build_model(cfg), IngestError);
}

TEST_CASE("mesh-backed bodies enter the model with external faces") {
  auto dir = fs::temp_directory_path() /
             ("pericontact_cfg_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  {
    std::ofstream mesh(dir / "cube.mesh");
    mesh << "node 1 0 0 0\nnode 2 0.1 0 0\nnode 3 0.1 0.1 0\nnode 4 0 0.1 0\n"
         << "node 5 0 0 0.1\nnode 6 0.1 0 0.1\nnode 7 0.1 0.1 0.1\nnode 8 0 0.1 0.1\n"
         << "hex 1 1 2 3 4 5 6 7 8\n";
  }
  std::string cfg_text = R"({
    "bodies": [{"name": "cube", "kind": "deformable", "mesh": ")" +
                         (dir / "cube.mesh").string() + R"(",
                "material": {"density": 1000, "E": 1e9, "nu": 0.25}}],
    "discretization": {"dx": 0.1}
  })";
  RunConfig cfg = parse_run_config_text(cfg_text, "t");
  Model model = build_model(cfg);
  CHECK(model.bodies[0].particles.size() == 8);
  CHECK(model.bodies[0].faces.size() == 6);
  fs::remove_all(dir);
}
