#pragma once

#include "vemspectra/geometry.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vems {

enum class EdgeTag : std::uint8_t { Interior, Dirichlet, Neumann };

const char* edge_tag_name(EdgeTag t);
EdgeTag edge_tag_from_name(const std::string& name);

struct Edge {
  int v0 = -1;
  int v1 = -1;
  int left = -1;   // element whose cycle traverses v0 -> v1
  int right = -1;  // element traversing v1 -> v0, or -1 on the boundary
  EdgeTag tag = EdgeTag::Interior;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Polygonal mesh: vertex coordinates plus CCW vertex cycles per element.
// `finalize` derives the edge table and adjacency from the cycles; boundary
// edges are tagged through the supplied classifier (undirected vertex pair ->
// tag). Meshes are immutable after construction.
struct PolyMesh {
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> elements;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> element_edges;  // edge id per cycle position

  using BoundaryTagger = std::function<std::optional<EdgeTag>(int, int)>;

  void finalize(const BoundaryTagger& tagger);

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }

  std::vector<Vec2> element_polygon(int e) const;
  int find_edge(int a, int b) const;  // undirected lookup, -1 if absent

  double total_area() const;
  bool has_dirichlet_boundary() const;

  // Enforces the structural invariants: simple positive-area cycles, interior
  // edges shared by exactly two cycles with opposite orientation, edge table
  // consistent with the cycles, no duplicate vertices within
  // 1e-12 * domain diameter. Throws MeshError on violation.
  void validate() const;

 private:
  std::map<std::pair<int, int>, int> edge_lookup_;
};

struct GeomCache {
  struct Entry {
    double diameter = 0.0;
    double area = 0.0;
    Vec2 centroid = Vec2::Zero();
    std::vector<double> edge_lengths;
  };
  std::vector<Entry> entries;
};

GeomCache::Entry element_geometry(const PolyMesh& mesh, int e);
GeomCache build_geom_cache(const PolyMesh& mesh);

struct RegularityReport {
  struct Entry {
    double edge_ratio = 0.0;      // shortest edge / h_E
    double star_ball_ratio = 0.0; // inscribed kernel ball radius / h_E
    bool a1 = false;
    bool a2 = false;
  };
  std::vector<Entry> entries;
  bool all_a1 = true;
  bool all_a2 = true;
};

RegularityReport check_assumptions(const PolyMesh& mesh, double c_t);

struct Triangle {
  Vec2 a, b, c;
  double area() const;
};

// Fan of triangles joining each boundary edge to a star center (the centroid
// when it lies in the kernel, otherwise the kernel ball center).
std::vector<Triangle> subtriangulate(const PolyMesh& mesh, int e);
std::vector<Triangle> subtriangulate_polygon(std::span<const Vec2> poly);

}  // namespace vems
