#include "pericontact/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pericontact/errors.hpp"
#include "pericontact/lattice.hpp"

namespace pericontact {

namespace {

using nlohmann::json;

void expect_keys(const json& obj, const std::string& where,
                 const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

Vec3 vec3_of(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.size() != 3)
    throw ConfigError(where + ": expected [x, y, z]");
  return Vec3{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

GeneratorConfig parse_generator(const json& g, const std::string& where) {
  GeneratorConfig out;
  std::string type = g.value("type", "");
  if (type == "sphere") {
    expect_keys(g, where, {"type", "radius", "center"});
    out.type = GeneratorType::sphere;
    out.radius = g.at("radius").get<double>();
    if (g.contains("center")) out.center = vec3_of(g.at("center"), where);
  } else if (type == "roller") {
    expect_keys(g, where, {"type", "radius", "length", "center"});
    out.type = GeneratorType::roller;
    out.radius = g.at("radius").get<double>();
    out.length = g.at("length").get<double>();
    if (g.contains("center")) out.center = vec3_of(g.at("center"), where);
  } else if (type == "block") {
    expect_keys(g, where, {"type", "lo", "hi"});
    out.type = GeneratorType::block;
    out.lo = vec3_of(g.at("lo"), where);
    out.hi = vec3_of(g.at("hi"), where);
  } else if (type == "plate") {
    expect_keys(g, where, {"type", "x0", "x1", "y0", "y1", "z", "normal"});
    out.type = GeneratorType::plate;
    out.x0 = g.at("x0").get<double>();
    out.x1 = g.at("x1").get<double>();
    out.y0 = g.at("y0").get<double>();
    out.y1 = g.at("y1").get<double>();
    out.z = g.at("z").get<double>();
    std::string n = g.value("normal", "+z");
    if (n == "+z")
      out.normal_up = true;
    else if (n == "-z")
      out.normal_up = false;
    else
      throw ConfigError(where + ": normal must be '+z' or '-z'");
  } else {
    throw ConfigError(where + ": unknown generator type '" + type + "'");
  }
  return out;
}

json generator_json(const GeneratorConfig& g) {
  json out;
  switch (g.type) {
    case GeneratorType::sphere:
      out["type"] = "sphere";
      out["radius"] = g.radius;
      out["center"] = vec3_json(g.center);
      break;
    case GeneratorType::roller:
      out["type"] = "roller";
      out["radius"] = g.radius;
      out["length"] = g.length;
      out["center"] = vec3_json(g.center);
      break;
    case GeneratorType::block:
      out["type"] = "block";
      out["lo"] = vec3_json(g.lo);
      out["hi"] = vec3_json(g.hi);
      break;
    case GeneratorType::plate:
      out["type"] = "plate";
      out["x0"] = g.x0;
      out["x1"] = g.x1;
      out["y0"] = g.y0;
      out["y1"] = g.y1;
      out["z"] = g.z;
      out["normal"] = g.normal_up ? "+z" : "-z";
      break;
    case GeneratorType::none:
      break;
  }
  return out;
}

BodyConfig parse_body(const json& b, const std::string& where) {
  expect_keys(b, where,
              {"name", "kind", "mesh", "generator", "material", "load", "motion",
               "fix_bottom_layers"});
  BodyConfig out;
  out.name = b.value("name", "");
  if (out.name.empty()) throw ConfigError(where + ": body needs a name");

  std::string kind = b.value("kind", "");
  if (kind == "deformable")
    out.kind = BodyKind::deformable;
  else if (kind == "rigid")
    out.kind = BodyKind::rigid;
  else
    throw ConfigError(where + ": kind must be 'deformable' or 'rigid'");

  bool has_mesh = b.contains("mesh");
  bool has_gen = b.contains("generator");
  if (has_mesh == has_gen)
    throw ConfigError(where + ": give exactly one of 'mesh' or 'generator'");
  if (has_mesh) out.mesh = b.at("mesh").get<std::string>();
  if (has_gen) out.generator = parse_generator(b.at("generator"), where + ".generator");

  if (!b.contains("material"))
    throw ConfigError(where + ": body needs a material");
  const json& m = b.at("material");
  expect_keys(m, where + ".material", {"density", "E", "nu"});
  out.material.density = m.at("density").get<double>();
  out.material.E = m.at("E").get<double>();
  out.material.nu = m.value("nu", 0.25);
  if (!(out.material.density > 0.0) || !(out.material.E > 0.0))
    throw ConfigError(where + ": material needs positive density and E");

  if (b.contains("load")) {
    const json& l = b.at("load");
    expect_keys(l, where + ".load", {"type", "total", "cap_fraction"});
    if (l.value("type", "") != "body_force_cap")
      throw ConfigError(where + ".load: type must be 'body_force_cap'");
    out.cap_load = vec3_of(l.at("total"), where + ".load");
    out.cap_fraction = l.value("cap_fraction", 0.1);
  }

  if (b.contains("motion")) {
    if (out.kind != BodyKind::rigid)
      throw ConfigError(where + ": motion applies to rigid bodies only");
    const json& mo = b.at("motion");
    expect_keys(mo, where + ".motion", {"type", "axis", "load"});
    std::string type = mo.value("type", "fixed");
    if (type == "fixed") {
      out.motion = RigidMotionType::fixed;
    } else if (type == "load_dof") {
      out.motion = RigidMotionType::load_dof;
      if (mo.contains("axis")) out.motion_axis = vec3_of(mo.at("axis"), where);
      out.motion_load = mo.value("load", 0.0);
    } else {
      throw ConfigError(where + ".motion: type must be 'fixed' or 'load_dof'");
    }
  }

  out.fix_bottom = b.value("fix_bottom_layers", 0);
  return out;
}

json body_json(const BodyConfig& b) {
  json out;
  out["name"] = b.name;
  out["kind"] = b.kind == BodyKind::rigid ? "rigid" : "deformable";
  if (!b.mesh.empty())
    out["mesh"] = b.mesh;
  else
    out["generator"] = generator_json(b.generator);
  out["material"] = {{"density", b.material.density},
                     {"E", b.material.E},
                     {"nu", b.material.nu}};
  if (norm(b.cap_load) > 0.0)
    out["load"] = {{"type", "body_force_cap"},
                   {"total", vec3_json(b.cap_load)},
                   {"cap_fraction", b.cap_fraction}};
  if (b.kind == BodyKind::rigid) {
    if (b.motion == RigidMotionType::fixed)
      out["motion"] = {{"type", "fixed"}};
    else
      out["motion"] = {{"type", "load_dof"},
                       {"axis", vec3_json(b.motion_axis)},
                       {"load", b.motion_load}};
  }
  if (b.fix_bottom > 0) out["fix_bottom_layers"] = b.fix_bottom;
  return out;
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text, const std::string& name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(name + ": " + e.what());
  }

  expect_keys(root, name,
              {"bodies", "discretization", "neighbor", "surface", "contact",
               "solver", "output", "threads"});

  RunConfig cfg;
  if (!root.contains("bodies") || !root.at("bodies").is_array() ||
      root.at("bodies").empty())
    throw ConfigError(name + ": 'bodies' must be a non-empty array");
  for (std::size_t i = 0; i < root.at("bodies").size(); ++i)
    cfg.bodies.push_back(
        parse_body(root.at("bodies")[i], name + ".bodies[" + std::to_string(i) + "]"));

  if (!root.contains("discretization"))
    throw ConfigError(name + ": missing 'discretization'");
  const json& d = root.at("discretization");
  expect_keys(d, name + ".discretization", {"dx", "horizon_ratio"});
  cfg.dx = d.at("dx").get<double>();
  cfg.horizon_ratio = d.value("horizon_ratio", 3.0);
  if (!(cfg.dx > 0.0)) throw ConfigError(name + ": dx must be positive");
  if (!(cfg.horizon_ratio > 1.0))
    throw ConfigError(name + ": horizon_ratio must exceed 1");

  if (root.contains("neighbor")) {
    const json& nb = root.at("neighbor");
    expect_keys(nb, name + ".neighbor", {"cutoff_factor", "list_factor"});
    cfg.cutoff_factor = nb.value("cutoff_factor", 1.0);
    cfg.list_factor = nb.value("list_factor", 1.3);
  }

  if (root.contains("surface")) {
    const json& s = root.at("surface");
    expect_keys(s, name + ".surface", {"threshold"});
    cfg.surface_threshold = s.value("threshold", 0.75);
  }

  if (root.contains("contact")) {
    const json& c = root.at("contact");
    expect_keys(c, name + ".contact",
                {"exponent", "slave_radius_factor", "trigger_factor",
                 "penetration_mode"});
    cfg.contact.exponent = c.value("exponent", 1.5);
    cfg.contact.slave_radius_factor = c.value("slave_radius_factor", 0.5);
    cfg.contact.trigger_factor = c.value("trigger_factor", 0.5);
    std::string mode = c.value("penetration_mode", "offset");
    if (mode == "offset")
      cfg.contact.geometric_penetration = false;
    else if (mode == "geometric")
      cfg.contact.geometric_penetration = true;
    else
      throw ConfigError(name + ": penetration_mode must be offset|geometric");
  }

  if (root.contains("solver")) {
    const json& s = root.at("solver");
    expect_keys(s, name + ".solver",
                {"mode", "dt", "max_steps", "tolerance", "output_every",
                 "load_ramp_steps"});
    std::string mode = s.value("mode", "adr");
    if (mode == "adr")
      cfg.solver.mode = SolveMode::adr;
    else if (mode == "dynamic")
      cfg.solver.mode = SolveMode::dynamic;
    else
      throw ConfigError(name + ": solver mode must be adr|dynamic");
    cfg.solver.dt = s.value("dt", cfg.solver.mode == SolveMode::adr ? 1.0 : 1e-6);
    cfg.solver.max_steps = s.value("max_steps", 40000);
    cfg.solver.tolerance = s.value("tolerance", 1e-4);
    cfg.solver.output_every = s.value("output_every", 0);
    cfg.solver.load_ramp_steps = s.value("load_ramp_steps", 0);
    if (!(cfg.solver.dt > 0.0)) throw ConfigError(name + ": dt must be positive");
    if (!(cfg.solver.tolerance > 0.0))
      throw ConfigError(name + ": tolerance must be positive");
  }

  if (root.contains("output")) {
    const json& o = root.at("output");
    expect_keys(o, name + ".output", {"dir", "vtk", "diagnostics"});
    cfg.out_dir = o.value("dir", "out");
    cfg.write_vtk = o.value("vtk", true);
    cfg.diagnostics = o.value("diagnostics", true);
  }

  cfg.threads = root.value("threads", 1);
  if (cfg.threads < 1) throw ConfigError(name + ": threads must be >= 1");
  return cfg;
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_run_config_text(ss.str(), path);
}

std::string serialize_run_config(const RunConfig& cfg) {
  json root;
  json bodies = json::array();
  for (const auto& b : cfg.bodies) bodies.push_back(body_json(b));
  root["bodies"] = bodies;
  root["discretization"] = {{"dx", cfg.dx}, {"horizon_ratio", cfg.horizon_ratio}};
  root["neighbor"] = {{"cutoff_factor", cfg.cutoff_factor},
                      {"list_factor", cfg.list_factor}};
  root["surface"] = {{"threshold", cfg.surface_threshold}};
  root["contact"] = {
      {"exponent", cfg.contact.exponent},
      {"slave_radius_factor", cfg.contact.slave_radius_factor},
      {"trigger_factor", cfg.contact.trigger_factor},
      {"penetration_mode",
       cfg.contact.geometric_penetration ? "geometric" : "offset"}};
  root["solver"] = {
      {"mode", cfg.solver.mode == SolveMode::adr ? "adr" : "dynamic"},
      {"dt", cfg.solver.dt},
      {"max_steps", cfg.solver.max_steps},
      {"tolerance", cfg.solver.tolerance},
      {"output_every", cfg.solver.output_every},
      {"load_ramp_steps", cfg.solver.load_ramp_steps}};
  root["output"] = {{"dir", cfg.out_dir},
                    {"vtk", cfg.write_vtk},
                    {"diagnostics", cfg.diagnostics}};
  root["threads"] = cfg.threads;
  return root.dump(2) + "\n";
}

void write_config_echo(const RunConfig& cfg, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ReportError("cannot write config echo '" + path + "'");
  f << serialize_run_config(cfg);
}

Model build_model(const RunConfig& cfg) {
  Model model;
  for (const auto& bc : cfg.bodies) {
    Body body;
    if (!bc.mesh.empty()) {
      MeshFile mesh = load_mesh(bc.mesh);
      body = body_from_mesh(mesh, bc.name, bc.kind, bc.material,
                            Discretization{cfg.dx, cfg.horizon_ratio});
    } else {
      switch (bc.generator.type) {
        case GeneratorType::sphere:
          body = make_sphere_body(bc.name, bc.generator.radius, bc.generator.center,
                                  cfg.dx, bc.material, cfg.horizon_ratio);
          break;
        case GeneratorType::roller:
          body = make_roller_body(bc.name, bc.generator.radius, bc.generator.length,
                                  bc.generator.center, cfg.dx, bc.material,
                                  cfg.horizon_ratio);
          break;
        case GeneratorType::block:
          body = make_block_body(bc.name, bc.generator.lo, bc.generator.hi, cfg.dx,
                                 bc.material, cfg.horizon_ratio);
          break;
        case GeneratorType::plate:
          body = make_rigid_plate(bc.name, bc.generator.x0, bc.generator.x1,
                                  bc.generator.y0, bc.generator.y1, bc.generator.z,
                                  cfg.dx, bc.generator.normal_up, bc.material);
          break;
        case GeneratorType::none:
          throw ConfigError("body " + bc.name + " has neither mesh nor generator");
      }
      body.kind = bc.kind;
    }

    if (body.kind == BodyKind::rigid) {
      body.rigid.type = bc.motion;
      body.rigid.axis = normalized(bc.motion_axis);
      body.rigid.load = bc.motion_load;
      if (body.deformable() == false && bc.fix_bottom > 0)
        throw ConfigError("fix_bottom_layers applies to deformable bodies");
    } else {
      if (norm(bc.cap_load) > 0.0)
        apply_cap_load(body, bc.cap_load, bc.cap_fraction);
      if (bc.fix_bottom > 0) fix_bottom_layers(body, bc.fix_bottom);
    }
    model.bodies.push_back(std::move(body));
  }

  model.neighbor_cutoff_factor = cfg.cutoff_factor;
  model.neighbor_list_factor = cfg.list_factor;
  model.surface_config.threshold = cfg.surface_threshold;
  model.contact_config = cfg.contact;
  model.assemble();
  return model;
}

}  // namespace pericontact
