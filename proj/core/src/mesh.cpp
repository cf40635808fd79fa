#include "pericontact/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "pericontact/errors.hpp"

namespace pericontact {

namespace {

// Local corner indices of the six hex faces (VTK hexahedron numbering),
// each in cyclic order.
constexpr int kHexFaces[6][4] = {
    {0, 3, 2, 1},  // bottom
    {4, 5, 6, 7},  // top
    {0, 1, 5, 4},
    {1, 2, 6, 5},
    {2, 3, 7, 6},
    {3, 0, 4, 7},
};

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return dot(b - a, cross(c - a, d - a)) / 6.0;
}

}  // namespace

std::size_t MeshFile::index_of(std::int64_t node_id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == node_id) return i;
  throw IngestError("unknown node id " + std::to_string(node_id));
}

double MeshFile::total_volume() const {
  double v = 0.0;
  for (const auto& n : nodes) v += n.volume;
  return v;
}

double hex_volume(const std::array<Vec3, 8>& c) {
  // Six tets sharing the 0-6 diagonal, consistently oriented.
  double v = 0.0;
  v += tet_volume(c[0], c[1], c[2], c[6]);
  v += tet_volume(c[0], c[2], c[3], c[6]);
  v += tet_volume(c[0], c[3], c[7], c[6]);
  v += tet_volume(c[0], c[7], c[4], c[6]);
  v += tet_volume(c[0], c[4], c[5], c[6]);
  v += tet_volume(c[0], c[5], c[1], c[6]);
  return std::abs(v);
}

MeshFile parse_mesh(const std::string& text, const std::string& name) {
  MeshFile mesh;
  std::unordered_map<std::int64_t, std::size_t> node_index;
  bool any_explicit_volume = false;
  bool any_implicit_volume = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;  // blank line

    auto fail = [&](const std::string& what) -> IngestError {
      return IngestError(name + ":" + std::to_string(lineno) + ": " + what);
    };

    if (kind == "node") {
      MeshNode n;
      if (!(ls >> n.id >> n.pos.x >> n.pos.y >> n.pos.z))
        throw fail("malformed node line");
      double vol;
      if (ls >> vol) {
        if (!(vol > 0.0)) throw fail("non-positive node volume");
        n.volume = vol;
        any_explicit_volume = true;
      } else {
        any_implicit_volume = true;
      }
      std::string extra;
      if (ls >> extra) throw fail("trailing tokens on node line");
      if (node_index.count(n.id)) throw fail("duplicate node id");
      node_index[n.id] = mesh.nodes.size();
      mesh.nodes.push_back(n);
    } else if (kind == "hex") {
      HexElement e;
      if (!(ls >> e.id)) throw fail("malformed hex line");
      for (int i = 0; i < 8; ++i)
        if (!(ls >> e.nodes[i])) throw fail("hex line needs 8 node ids");
      std::string extra;
      if (ls >> extra) throw fail("trailing tokens on hex line");
      auto sorted = e.nodes;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw fail("hex repeats a node id");
      mesh.elements.push_back(e);
    } else {
      throw fail("unknown record '" + kind + "'");
    }
  }

  if (any_explicit_volume && any_implicit_volume)
    throw IngestError(name + ": node volumes must be given for all nodes or none");

  // Validate connectivity and lump volumes when the file carries none.
  for (const auto& e : mesh.elements) {
    std::array<Vec3, 8> corners;
    for (int i = 0; i < 8; ++i) {
      auto it = node_index.find(e.nodes[i]);
      if (it == node_index.end())
        throw IngestError(name + ": hex " + std::to_string(e.id) +
                          " references missing node " + std::to_string(e.nodes[i]));
      corners[i] = mesh.nodes[it->second].pos;
    }
    if (!any_explicit_volume) {
      double share = hex_volume(corners) / 8.0;
      for (int i = 0; i < 8; ++i)
        mesh.nodes[node_index[e.nodes[i]]].volume += share;
    }
  }

  for (const auto& n : mesh.nodes)
    if (!(n.volume > 0.0))
      throw IngestError(name + ": node " + std::to_string(n.id) +
                        " has non-positive volume");

  return mesh;
}

MeshFile load_mesh(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IngestError("cannot open mesh file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_mesh(ss.str(), path);
}

std::vector<FaceQuad> extract_external_faces(const MeshFile& mesh) {
  std::unordered_map<std::int64_t, std::size_t> node_index;
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
    node_index[mesh.nodes[i].id] = i;

  struct Candidate {
    FaceQuad face;
    Vec3 centroid;
    Vec3 element_centroid;
  };

  // Multiset of faces keyed by sorted node ids; kept in element order for a
  // deterministic result.
  std::map<std::array<std::int64_t, 4>, int> count;
  std::vector<Candidate> candidates;

  for (const auto& e : mesh.elements) {
    Vec3 ec{};
    for (int i = 0; i < 8; ++i) {
      auto it = node_index.find(e.nodes[i]);
      if (it == node_index.end())
        throw IngestError("hex " + std::to_string(e.id) +
                          " references missing node " + std::to_string(e.nodes[i]));
      ec += mesh.nodes[it->second].pos;
    }
    ec *= 1.0 / 8.0;

    for (const auto& local : kHexFaces) {
      Candidate c;
      c.face.element = e.id;
      Vec3 fc{};
      for (int i = 0; i < 4; ++i) {
        c.face.nodes[i] = e.nodes[local[i]];
        fc += mesh.nodes[node_index[c.face.nodes[i]]].pos;
      }
      c.centroid = fc * 0.25;
      c.element_centroid = ec;
      auto key = c.face.nodes;
      std::sort(key.begin(), key.end());
      int n = ++count[key];
      if (n > 2)
        throw IngestError("face shared by more than two elements (non-manifold)");
      candidates.push_back(c);
    }
  }

  std::vector<FaceQuad> faces;
  for (auto& c : candidates) {
    auto key = c.face.nodes;
    std::sort(key.begin(), key.end());
    if (count[key] != 1) continue;

    // Fix the cyclic order so r31 x r42 points away from the element.
    const auto& nodes = mesh.nodes;
    Vec3 p1 = nodes[node_index.at(c.face.nodes[0])].pos;
    Vec3 p2 = nodes[node_index.at(c.face.nodes[1])].pos;
    Vec3 p3 = nodes[node_index.at(c.face.nodes[2])].pos;
    Vec3 p4 = nodes[node_index.at(c.face.nodes[3])].pos;
    Vec3 n = cross(p3 - p1, p4 - p2);
    if (dot(n, c.centroid - c.element_centroid) < 0.0)
      std::swap(c.face.nodes[1], c.face.nodes[3]);
    faces.push_back(c.face);
  }
  return faces;
}

}  // namespace pericontact
