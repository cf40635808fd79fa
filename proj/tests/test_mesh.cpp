#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "pericontact/errors.hpp"
#include "pericontact/mesh.hpp"

using namespace pericontact;

namespace {

// Unit cube hex mesh text, nodes 1..8.
std::string unit_cube_text() {
  return R"(# unit cube
node 1 0 0 0
node 2 1 0 0
node 3 1 1 0
node 4 0 1 0
node 5 0 0 1
node 6 1 0 1
node 7 1 1 1
node 8 0 1 1
hex 1 1 2 3 4 5 6 7 8
)";
}

// Two unit cubes stacked in z, sharing nodes 5..8.
std::string stacked_cubes_text() {
  std::ostringstream os;
  os << unit_cube_text();
  os << "node 9 0 0 2\nnode 10 1 0 2\nnode 11 1 1 2\nnode 12 0 1 2\n";
  os << "hex 2 5 6 7 8 9 10 11 12\n";
  return os.str();
}

// n x n x n block of unit hexes.
std::string block_text(int n) {
  std::ostringstream os;
  auto id = [n](int i, int j, int k) {
    return 1 + i + (n + 1) * (j + (n + 1) * k);
  };
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        os << "node " << id(i, j, k) << " " << i << " " << j << " " << k << "\n";
  int e = 1;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        os << "hex " << e++ << " " << id(i, j, k) << " " << id(i + 1, j, k) << " "
           << id(i + 1, j + 1, k) << " " << id(i, j + 1, k) << " "
           << id(i, j, k + 1) << " " << id(i + 1, j, k + 1) << " "
           << id(i + 1, j + 1, k + 1) << " " << id(i, j + 1, k + 1) << "\n";
      }
  return os.str();
}

}  // namespace

TEST_CASE("single hex: nodal volume lumping") {
  MeshFile mesh = parse_mesh(unit_cube_text(), "cube");
  REQUIRE(mesh.nodes.size() == 8);
  REQUIRE(mesh.elements.size() == 1);
  for (const auto& n : mesh.nodes)
    CHECK(n.volume == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(mesh.total_volume() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stacked hexes: shared nodes accumulate volume") {
  MeshFile mesh = parse_mesh(stacked_cubes_text(), "stack");
  REQUIRE(mesh.nodes.size() == 12);
  std::map<std::int64_t, double> vol;
  for (const auto& n : mesh.nodes) vol[n.id] = n.volume;
  for (std::int64_t id : {5, 6, 7, 8})
    CHECK(vol[id] == doctest::Approx(0.25).epsilon(1e-12));
  for (std::int64_t id : {1, 2, 3, 4, 9, 10, 11, 12})
    CHECK(vol[id] == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("mesh validation errors") {
  CHECK_THROWS_AS(parse_mesh("node 1 0 0 0\nhex 1 1 2 3 4 5 6 7 8\n", "t"),
                  IngestError);  // dangling reference
  CHECK_THROWS_AS(parse_mesh("node 1 0 0 0 -1\n", "t"), IngestError);
  CHECK_THROWS_AS(parse_mesh("node 1 0 0\n", "t"), IngestError);
  CHECK_THROWS_AS(parse_mesh("frob 1 2 3\n", "t"), IngestError);
  CHECK_THROWS_AS(parse_mesh("node 1 0 0 0\nnode 1 1 1 1\n", "t"), IngestError);
  // Repeated node id inside a hex.
  CHECK_THROWS_AS(
      parse_mesh(unit_cube_text() + "hex 2 1 1 3 4 5 6 7 8\n", "t"), IngestError);
  // Mixed explicit/implicit volumes.
  CHECK_THROWS_AS(parse_mesh("node 1 0 0 0 0.5\nnode 2 1 0 0\n", "t"), IngestError);
}

TEST_CASE("explicit node volumes are preserved") {
  MeshFile mesh = parse_mesh("node 1 0 0 0 0.25\nnode 2 1 0 0 0.75\n", "t");
  CHECK(mesh.nodes[0].volume == 0.25);
  CHECK(mesh.nodes[1].volume == 0.75);
}

TEST_CASE("external faces: single hex") {
  MeshFile mesh = parse_mesh(unit_cube_text(), "cube");
  auto faces = extract_external_faces(mesh);
  CHECK(faces.size() == 6);
}

TEST_CASE("external faces: two adjacent hexes share one face") {
  MeshFile mesh = parse_mesh(stacked_cubes_text(), "stack");
  auto faces = extract_external_faces(mesh);
  // 12 element faces minus the two copies of the shared face.
  CHECK(faces.size() == 10);
}

TEST_CASE("external faces: 2x2x2 block matches the brute-force count") {
  MeshFile mesh = parse_mesh(block_text(2), "block");
  REQUIRE(mesh.elements.size() == 8);

  // Brute-force oracle: count keyed faces over all 48 element faces.
  std::map<std::array<std::int64_t, 4>, int> count;
  constexpr int lf[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                            {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  for (const auto& e : mesh.elements) {
    for (const auto& f : lf) {
      std::array<std::int64_t, 4> key{e.nodes[f[0]], e.nodes[f[1]], e.nodes[f[2]],
                                      e.nodes[f[3]]};
      std::sort(key.begin(), key.end());
      ++count[key];
    }
  }
  std::size_t expected = 0;
  for (const auto& [k, c] : count)
    if (c == 1) ++expected;

  auto faces = extract_external_faces(mesh);
  CHECK(faces.size() == expected);
  CHECK(expected == 24);
}

TEST_CASE("non-manifold meshes are rejected") {
  // Three hexes sharing one face: duplicate the top element of the stack.
  std::string text = stacked_cubes_text() +
                     "node 13 0 0 -1\nnode 14 1 0 -1\nnode 15 1 1 -1\nnode 16 0 1 -1\n"
                     "hex 3 5 6 7 8 13 14 15 16\n";
  MeshFile mesh = parse_mesh(text, "bad");
  CHECK_THROWS_AS(extract_external_faces(mesh), IngestError);
}

TEST_CASE("face extraction is deterministic and outward oriented") {
  MeshFile mesh = parse_mesh(block_text(3), "block3");

  auto faces1 = extract_external_faces(mesh);
  auto faces2 = extract_external_faces(mesh);
  REQUIRE(faces1.size() == faces2.size());
  for (std::size_t i = 0; i < faces1.size(); ++i) {
    CHECK(faces1[i].nodes == faces2[i].nodes);
    CHECK(faces1[i].element == faces2[i].element);
  }

  std::map<std::int64_t, std::size_t> index;
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) index[mesh.nodes[i].id] = i;
  std::map<std::int64_t, Vec3> centroids;
  for (const auto& e : mesh.elements) {
    Vec3 c{};
    for (auto nid : e.nodes) c += mesh.nodes[index[nid]].pos;
    centroids[e.id] = c * 0.125;
  }
  for (const auto& f : faces1) {
    Vec3 p1 = mesh.nodes[index[f.nodes[0]]].pos;
    Vec3 p2 = mesh.nodes[index[f.nodes[1]]].pos;
    Vec3 p3 = mesh.nodes[index[f.nodes[2]]].pos;
    Vec3 p4 = mesh.nodes[index[f.nodes[3]]].pos;
    Vec3 n = cross(p3 - p1, p4 - p2);
    Vec3 fc = (p1 + p2 + p3 + p4) * 0.25;
    CHECK(dot(n, fc - centroids[f.element]) > 0.0);
  }
}

TEST_CASE("warped hexes: volume sum still matches the decomposition total") {
  // Jitter the 3x3x3 block nodes, then compare the lumped sum against the
  // sum of element volumes.
  MeshFile base = parse_mesh(block_text(3), "warped");
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  std::ostringstream os;
  std::map<std::int64_t, Vec3> moved;
  for (const auto& n : base.nodes) {
    Vec3 p = n.pos + Vec3{u(rng), u(rng), u(rng)};
    moved[n.id] = p;
    os << "node " << n.id << " " << p.x << " " << p.y << " " << p.z << "\n";
  }
  for (const auto& e : base.elements) {
    os << "hex " << e.id;
    for (auto nid : e.nodes) os << " " << nid;
    os << "\n";
  }
  MeshFile mesh = parse_mesh(os.str(), "warped");

  double total_elements = 0.0;
  std::map<std::int64_t, std::size_t> index;
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) index[mesh.nodes[i].id] = i;
  for (const auto& e : mesh.elements) {
    std::array<Vec3, 8> c;
    for (int i = 0; i < 8; ++i) c[i] = mesh.nodes[index[e.nodes[i]]].pos;
    total_elements += hex_volume(c);
  }
  CHECK(std::abs(mesh.total_volume() - total_elements) <
        1e-10 * total_elements);
}

TEST_CASE("load_mesh reports missing files") {
  CHECK_THROWS_AS(load_mesh("/nonexistent/path.mesh"), IngestError);
}
