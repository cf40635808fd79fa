#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pericontact/geometry.hpp"

namespace pericontact {

struct MeshNode {
  std::int64_t id = 0;
  Vec3 pos;
  double volume = 0.0;  // lumped nodal volume, m^3
};

struct HexElement {
  std::int64_t id = 0;
  std::array<std::int64_t, 8> nodes{};
};

// Quadrilateral face with node ids stored in cyclic order. The cyclic order
// encodes the outward orientation: r31 x r42 points away from the owning
// element.
struct FaceQuad {
  std::array<std::int64_t, 4> nodes{};
  std::int64_t element = -1;  // owning element id
};

// Nodes-plus-hexes mesh in the plain-text format described in the README.
// Node volumes are lumped at load time: explicit per-node values when the
// file carries them, otherwise 1/8 of each incident hex volume.
struct MeshFile {
  std::vector<MeshNode> nodes;
  std::vector<HexElement> elements;

  std::size_t index_of(std::int64_t node_id) const;  // throws IngestError
  double total_volume() const;
};

MeshFile load_mesh(const std::string& path);

// Parses mesh text from an already-read buffer (the loader's backend; the
// name identifies the source in diagnostics).
MeshFile parse_mesh(const std::string& text, const std::string& name);

// Volume of a (possibly warped) hexahedron by decomposition into six
// tetrahedra around the 0-6 diagonal.
double hex_volume(const std::array<Vec3, 8>& corners);

// Faces appearing exactly once across all element faces, outward oriented.
// A face shared by more than two elements throws IngestError (non-manifold).
std::vector<FaceQuad> extract_external_faces(const MeshFile& mesh);

}  // namespace pericontact
