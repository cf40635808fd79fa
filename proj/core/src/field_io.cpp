#include "pericontact/field_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "pericontact/errors.hpp"

namespace pericontact {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_for(const std::string& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) throw ReportError("cannot open '" + path + "' for writing");
  return f;
}

}  // namespace

void write_fields(const ParticleSet& particles, const SurfaceInfo& surface,
                  const std::string& path, FieldFormat format) {
  const std::size_t n = particles.size();
  File f = open_for(path, "w");

  if (format == FieldFormat::csv) {
    std::fprintf(f.get(),
                 "id,x,y,z,ux,uy,uz,vx,vy,vz,fcx,fcy,fcz,surface,lambda\n");
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3& x = particles.ref_pos[i];
      const Vec3& u = particles.disp[i];
      const Vec3& v = particles.vel[i];
      const Vec3& fc = particles.contact_force[i];
      int surf = surface.surface.empty() ? 0 : surface.surface[i];
      double lambda = surface.lambda.empty() ? 0.0 : surface.lambda[i];
      std::fprintf(f.get(),
                   "%zu,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,"
                   "%.15g,%.15g,%.15g,%d,%.15g\n",
                   i, x.x, x.y, x.z, u.x, u.y, u.z, v.x, v.y, v.z, fc.x, fc.y,
                   fc.z, surf, lambda);
    }
    return;
  }

  // Legacy ASCII VTK point cloud.
  std::fprintf(f.get(), "# vtk DataFile Version 3.0\n");
  std::fprintf(f.get(), "pericontact particle fields\n");
  std::fprintf(f.get(), "ASCII\nDATASET POLYDATA\n");
  std::fprintf(f.get(), "POINTS %zu double\n", n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 p = particles.current(i);
    std::fprintf(f.get(), "%.15g %.15g %.15g\n", p.x, p.y, p.z);
  }
  std::fprintf(f.get(), "POINT_DATA %zu\n", n);
  std::fprintf(f.get(), "VECTORS displacement double\n");
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& u = particles.disp[i];
    std::fprintf(f.get(), "%.15g %.15g %.15g\n", u.x, u.y, u.z);
  }
  std::fprintf(f.get(), "VECTORS contact_force double\n");
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& fc = particles.contact_force[i];
    std::fprintf(f.get(), "%.15g %.15g %.15g\n", fc.x, fc.y, fc.z);
  }
  std::fprintf(f.get(), "SCALARS surface int 1\nLOOKUP_TABLE default\n");
  for (std::size_t i = 0; i < n; ++i)
    std::fprintf(f.get(), "%d\n", surface.surface.empty() ? 0 : surface.surface[i]);
  std::fprintf(f.get(), "SCALARS lambda double 1\nLOOKUP_TABLE default\n");
  for (std::size_t i = 0; i < n; ++i)
    std::fprintf(f.get(), "%.15g\n", surface.lambda.empty() ? 0.0 : surface.lambda[i]);
}

FieldTable read_fields_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ReportError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ReportError("empty field CSV");

  FieldTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    std::size_t id;
    Vec3 x, u, v, fc;
    int surf;
    double lambda;
    if (!(ls >> id >> x.x >> x.y >> x.z >> u.x >> u.y >> u.z >> v.x >> v.y >>
          v.z >> fc.x >> fc.y >> fc.z >> surf >> lambda))
      throw ReportError("malformed field CSV row");
    table.particles.ref_pos.push_back(x);
    table.particles.disp.push_back(u);
    table.particles.vel.push_back(v);
    table.particles.contact_force.push_back(fc);
    table.surface.surface.push_back(std::uint8_t(surf));
    table.surface.lambda.push_back(lambda);
  }
  std::size_t n = table.particles.ref_pos.size();
  table.particles.accel.resize(n);
  table.particles.volume.resize(n, 0.0);
  table.particles.body_force.resize(n);
  table.particles.correction.resize(n, Vec3{1.0, 1.0, 1.0});
  table.particles.fixed.resize(n, 0);
  table.surface.normal.resize(n);
  table.surface.normal_valid.resize(n, 0);
  return table;
}

void write_contact_diagnostics(const std::vector<ContactPair>& pairs, int step,
                               const std::string& path, bool append) {
  File f = open_for(path, append ? "a" : "w");
  if (!append)
    std::fprintf(f.get(), "step,face_id,slave_id,r,t,gap,penetration,force\n");
  for (const auto& p : pairs)
    std::fprintf(f.get(), "%d,%d,%d,%.15g,%.15g,%.15g,%.15g,%.15g\n", step,
                 p.face, p.slave, p.r, p.t, p.gap, p.penetration, p.force);
}

void write_convergence_log(const std::vector<StepRecord>& history,
                           const std::string& path) {
  File f = open_for(path, "w");
  std::fprintf(f.get(), "step,residual,damping_c,contact_force_total\n");
  for (const auto& r : history)
    std::fprintf(f.get(), "%d,%.15g,%.15g,%.15g\n", r.step, r.residual,
                 r.damping, r.contact_total);
}

}  // namespace pericontact
