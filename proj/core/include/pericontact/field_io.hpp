#pragma once

#include <string>
#include <vector>

#include "pericontact/body.hpp"
#include "pericontact/contact.hpp"
#include "pericontact/solver.hpp"

namespace pericontact {

enum class FieldFormat { csv, vtk };

// Per-particle field dump. CSV columns:
//   id,x,y,z,ux,uy,uz,vx,vy,vz,fcx,fcy,fcz,surface,lambda
// VTK: legacy ASCII POLYDATA points with displacement and contact-force
// vectors plus surface/lambda scalars.
void write_fields(const ParticleSet& particles, const SurfaceInfo& surface,
                  const std::string& path, FieldFormat format);

// Reads a field CSV back into (fresh) particle and surface arrays; used for
// round-trip checks and post-processing.
struct FieldTable {
  ParticleSet particles;
  SurfaceInfo surface;
};
FieldTable read_fields_csv(const std::string& path);

// Contact diagnostics: step,face_id,slave_id,r,t,gap,penetration,force.
void write_contact_diagnostics(const std::vector<ContactPair>& pairs, int step,
                               const std::string& path, bool append);

// Convergence log: step,residual,damping_c,contact_force_total.
void write_convergence_log(const std::vector<StepRecord>& history,
                           const std::string& path);

}  // namespace pericontact
