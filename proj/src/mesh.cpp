#include "vemspectra/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

namespace vems {

const char* edge_tag_name(EdgeTag t) {
  switch (t) {
    case EdgeTag::Interior: return "interior";
    case EdgeTag::Dirichlet: return "dirichlet";
    case EdgeTag::Neumann: return "neumann";
  }
  return "interior";
}

EdgeTag edge_tag_from_name(const std::string& name) {
  if (name == "interior") return EdgeTag::Interior;
  if (name == "dirichlet") return EdgeTag::Dirichlet;
  if (name == "neumann") return EdgeTag::Neumann;
  throw MeshError("unknown edge tag: " + name);
}

void PolyMesh::finalize(const BoundaryTagger& tagger) {
  edges.clear();
  element_edges.assign(elements.size(), {});
  edge_lookup_.clear();

  for (int e = 0; e < num_elements(); ++e) {
    const auto& cyc = elements[e];
    const int n = static_cast<int>(cyc.size());
    if (n < 3) throw MeshError("element " + std::to_string(e) + " has fewer than 3 vertices");
    element_edges[e].resize(n);
    for (int k = 0; k < n; ++k) {
      const int a = cyc[k];
      const int b = cyc[(k + 1) % n];
      if (a == b) throw MeshError("degenerate edge in element " + std::to_string(e));
      const auto key = std::minmax(a, b);
      auto it = edge_lookup_.find(key);
      if (it == edge_lookup_.end()) {
        Edge ed;
        ed.v0 = a;
        ed.v1 = b;
        ed.left = e;
        edge_lookup_.emplace(key, static_cast<int>(edges.size()));
        element_edges[e][k] = static_cast<int>(edges.size());
        edges.push_back(ed);
      } else {
        Edge& ed = edges[it->second];
        if (ed.right != -1)
          throw MeshError("edge shared by more than two elements near element " +
                          std::to_string(e));
        if (ed.v0 != b || ed.v1 != a)
          throw MeshError("interior edge traversed twice with the same orientation (element " +
                          std::to_string(e) + ")");
        ed.right = e;
        element_edges[e][k] = it->second;
      }
    }
  }

  for (Edge& ed : edges) {
    if (ed.right != -1) {
      ed.tag = EdgeTag::Interior;
      continue;
    }
    std::optional<EdgeTag> t = tagger ? tagger(ed.v0, ed.v1) : std::nullopt;
    if (!t)
      throw MeshError("boundary edge (" + std::to_string(ed.v0) + "," +
                      std::to_string(ed.v1) + ") left untagged");
    ed.tag = *t;
  }
}

std::vector<Vec2> PolyMesh::element_polygon(int e) const {
  std::vector<Vec2> poly;
  poly.reserve(elements[e].size());
  for (int v : elements[e]) poly.push_back(vertices[v]);
  return poly;
}

int PolyMesh::find_edge(int a, int b) const {
  auto it = edge_lookup_.find(std::minmax(a, b));
  return it == edge_lookup_.end() ? -1 : it->second;
}

double PolyMesh::total_area() const {
  double s = 0.0;
  for (int e = 0; e < num_elements(); ++e) s += signed_area(element_polygon(e));
  return s;
}

bool PolyMesh::has_dirichlet_boundary() const {
  return std::any_of(edges.begin(), edges.end(),
                     [](const Edge& e) { return e.tag == EdgeTag::Dirichlet; });
}

void PolyMesh::validate() const {
  if (vertices.empty() || elements.empty()) throw MeshError("empty mesh");
  if (edges.empty()) throw MeshError("mesh not finalized");

  Vec2 lo = vertices[0], hi = vertices[0];
  for (const Vec2& p : vertices) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double diam = (hi - lo).norm();
  const double tol = 1e-12 * diam;

  // duplicate-vertex scan on a uniform hash grid
  const double cell = std::max(tol * 16.0, diam * 1e-7);
  std::unordered_map<long long, std::vector<int>> grid;
  auto key_of = [&](double x, double y) {
    const long long ix = static_cast<long long>(std::floor((x - lo.x()) / cell));
    const long long iy = static_cast<long long>(std::floor((y - lo.y()) / cell));
    return ix * 2000003LL + iy;
  };
  for (int v = 0; v < num_vertices(); ++v) {
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(key_of(vertices[v].x() + dx * cell, vertices[v].y() + dy * cell));
        if (it == grid.end()) continue;
        for (int w : it->second)
          if ((vertices[v] - vertices[w]).norm() < tol)
            throw MeshError("duplicate vertices " + std::to_string(w) + " and " +
                            std::to_string(v));
      }
    grid[key_of(vertices[v].x(), vertices[v].y())].push_back(v);
  }

  for (int e = 0; e < num_elements(); ++e) {
    const auto poly = element_polygon(e);
    if (!polygon_is_simple(poly))
      throw MeshError("element " + std::to_string(e) +
                      " is not a simple positive-area polygon");
    std::set<int> uniq(elements[e].begin(), elements[e].end());
    if (uniq.size() != elements[e].size())
      throw MeshError("element " + std::to_string(e) + " repeats a vertex");
  }

  // adjacency counts and cycle consistency
  std::map<std::pair<int, int>, int> seen;
  for (int e = 0; e < num_elements(); ++e) {
    const auto& cyc = elements[e];
    const int n = static_cast<int>(cyc.size());
    for (int k = 0; k < n; ++k) {
      const auto key = std::minmax(cyc[k], cyc[(k + 1) % n]);
      seen[key]++;
      const int id = find_edge(cyc[k], cyc[(k + 1) % n]);
      if (id < 0) throw MeshError("cycle edge missing from edge table");
      const Edge& ed = edges[id];
      if (ed.left != e && ed.right != e)
        throw MeshError("edge adjacency inconsistent with cycles");
    }
  }
  if (seen.size() != edges.size())
    throw MeshError("edge table does not match element cycles");
  for (const Edge& ed : edges) {
    const int count = seen.at(std::minmax(ed.v0, ed.v1));
    const int expected = ed.right == -1 ? 1 : 2;
    if (count != expected)
      throw MeshError("edge (" + std::to_string(ed.v0) + "," + std::to_string(ed.v1) +
                      ") has " + std::to_string(count) + " adjacent cycles, expected " +
                      std::to_string(expected));
    if (ed.right == -1 && ed.tag == EdgeTag::Interior)
      throw MeshError("boundary edge tagged interior");
  }
}

GeomCache::Entry element_geometry(const PolyMesh& mesh, int e) {
  if (e < 0 || e >= mesh.num_elements()) throw MeshError("element id out of range");
  const auto poly = mesh.element_polygon(e);
  GeomCache::Entry entry;
  entry.area = signed_area(poly);
  if (!(entry.area > 0.0))
    throw MeshError("element " + std::to_string(e) + " has non-positive area");
  entry.diameter = polygon_diameter(poly);
  entry.centroid = polygon_centroid(poly);
  entry.edge_lengths.resize(poly.size());
  for (std::size_t k = 0; k < poly.size(); ++k)
    entry.edge_lengths[k] = (poly[(k + 1) % poly.size()] - poly[k]).norm();
  return entry;
}

GeomCache build_geom_cache(const PolyMesh& mesh) {
  GeomCache cache;
  cache.entries.reserve(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e)
    cache.entries.push_back(element_geometry(mesh, e));
  return cache;
}

RegularityReport check_assumptions(const PolyMesh& mesh, double c_t) {
  if (!(c_t > 0.0 && c_t < 1.0)) throw MeshError("C_T must lie in (0,1)");
  RegularityReport rep;
  rep.entries.resize(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto poly = mesh.element_polygon(e);
    auto& entry = rep.entries[e];
    const double h = polygon_diameter(poly);
    double min_edge = std::numeric_limits<double>::max();
    for (std::size_t k = 0; k < poly.size(); ++k)
      min_edge = std::min(min_edge, (poly[(k + 1) % poly.size()] - poly[k]).norm());
    entry.edge_ratio = min_edge / h;
    const InscribedBall ball = kernel_chebyshev_ball(poly);
    entry.star_ball_ratio = ball.radius / h;
    entry.a1 = entry.edge_ratio >= c_t;
    entry.a2 = entry.star_ball_ratio >= c_t;
    rep.all_a1 = rep.all_a1 && entry.a1;
    rep.all_a2 = rep.all_a2 && entry.a2;
  }
  return rep;
}

double Triangle::area() const {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

std::vector<Triangle> subtriangulate_polygon(std::span<const Vec2> poly) {
  Vec2 center = polygon_centroid(poly);
  std::vector<Vec2> ker = polygon_kernel(poly);
  if (ker.size() < 3) throw MeshError("element is not star-shaped: empty kernel");
  // fall back to the kernel ball center when the centroid left the kernel
  bool centroid_ok = true;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n && centroid_ok; ++i) {
    const Vec2 t = poly[(i + 1) % n] - poly[i];
    const Vec2 nrm(t.y(), -t.x());
    if (nrm.dot(center - poly[i]) > 0.0) centroid_ok = false;
  }
  if (!centroid_ok) center = kernel_chebyshev_ball(poly).center;

  std::vector<Triangle> tris;
  tris.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    tris.push_back({center, poly[i], poly[(i + 1) % n]});
  return tris;
}

std::vector<Triangle> subtriangulate(const PolyMesh& mesh, int e) {
  return subtriangulate_polygon(mesh.element_polygon(e));
}

}  // namespace vems
