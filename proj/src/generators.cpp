#include "vemspectra/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <unordered_map>

namespace vems {

namespace {

constexpr double kBoundaryEps = 1e-9;

bool on_line(double v, double target) { return std::abs(v - target) < kBoundaryEps; }

}  // namespace

PolyMesh::BoundaryTagger square_tagger(const std::vector<Vec2>& vertices) {
  return [&vertices](int a, int b) -> std::optional<EdgeTag> {
    const Vec2 mid = 0.5 * (vertices[a] + vertices[b]);
    if (on_line(mid.y(), 0.0)) return EdgeTag::Dirichlet;
    if (on_line(mid.y(), 1.0) || on_line(mid.x(), 0.0) || on_line(mid.x(), 1.0))
      return EdgeTag::Neumann;
    return std::nullopt;
  };
}

PolyMesh generate_trapezoidal_mesh(int n) {
  if (n < 1) throw MeshError("trapezoidal mesh requires n >= 1");
  PolyMesh mesh;
  const double inv = 1.0 / n;

  // corner grid with interior rows zig-zagged by a quarter cell
  std::vector<int> corner((n + 1) * (n + 1));
  auto cid = [&](int i, int j) { return corner[j * (n + 1) + i]; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      double y = j * inv;
      if (j > 0 && j < n) y += (((i + j) % 2 == 0) ? 0.25 : -0.25) * inv;
      corner[j * (n + 1) + i] = mesh.num_vertices();
      mesh.vertices.emplace_back(i * inv, y);
    }

  std::map<std::pair<int, int>, int> midpoint;
  auto mid_of = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = mesh.num_vertices();
    mesh.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    midpoint.emplace(key, id);
    return id;
  };

  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int c0 = cid(i, j), c1 = cid(i + 1, j), c2 = cid(i + 1, j + 1), c3 = cid(i, j + 1);
      mesh.elements.push_back({c0, mid_of(c0, c1), c1, mid_of(c1, c2), c2, mid_of(c2, c3),
                               c3, mid_of(c3, c0)});
    }

  mesh.finalize(square_tagger(mesh.vertices));
  return mesh;
}

namespace {

// splitmix64 based jitter in [-1,1], deterministic in (i, j, seed)
double lattice_jitter(std::int64_t i, std::int64_t j, unsigned seed, int comp) {
  std::uint64_t z = static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ull ^
                    static_cast<std::uint64_t>(j) * 0xC2B2AE3D27D4EB4Full ^
                    (static_cast<std::uint64_t>(seed) << 32) ^
                    static_cast<std::uint64_t>(comp) * 0xD6E8FEB86659FD93ull;
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z = z ^ (z >> 31);
  return 2.0 * (static_cast<double>(z >> 11) / 9007199254740992.0) - 1.0;
}

}  // namespace

PolyMesh generate_hexagonal_mesh(int n, unsigned seed) {
  if (n < 2) throw MeshError("hexagonal mesh requires n >= 2");
  // flat-top honeycomb with ~n cells per unit side, every lattice vertex
  // displaced by a deterministic pseudo-random offset shared between the
  // three cells meeting there; the offset bound keeps all cells convex
  const double radius = 2.0 / (3.0 * n);
  const double amp = 0.24 * radius;
  // vertical affine squeeze to an integer row count, so the lattice phase at
  // every side of the square is the same for all n
  const double natural_row = std::sqrt(3.0) * radius;
  const int row_count = std::max(2, static_cast<int>(std::llround(1.0 / natural_row)));
  const double squeeze = 1.0 / (row_count * natural_row);
  const double row_height = squeeze * natural_row;

  const std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  PolyMesh mesh;
  std::map<std::pair<long long, long long>, int> vertex_ids;
  const double snap = 1e-6 * radius;
  auto key_of = [&](const Vec2& p) {
    return std::pair<long long, long long>{static_cast<long long>(std::llround(p.x() / snap)),
                                           static_cast<long long>(std::llround(p.y() / snap))};
  };
  auto vid = [&](const Vec2& p) {
    const auto key = key_of(p);
    auto it = vertex_ids.find(key);
    if (it != vertex_ids.end()) return it->second;
    const int id = mesh.num_vertices();
    mesh.vertices.push_back(p);
    vertex_ids.emplace(key, id);
    return id;
  };
  std::map<std::pair<long long, long long>, double> damping;
  auto perturb = [&](const Vec2& lattice_point) {
    // hash on the snapped lattice position so shared corners move together
    const auto key = key_of(lattice_point);
    const double ux = lattice_jitter(key.first, key.second, seed, 0);
    const double uy = lattice_jitter(key.first, key.second, seed, 1);
    double factor = 1.0;
    if (auto it = damping.find(key); it != damping.end()) factor = it->second;
    Vec2 p(lattice_point.x() + factor * amp * ux, lattice_point.y() + factor * amp * uy);
    // smooth mesh-size modulation, identical for every n so the family has
    // consistent error constants across refinement levels
    constexpr double kPi = 3.14159265358979323846;
    constexpr double warp = 0.15;
    return Vec2(p.x() + warp * std::sin(kPi * p.x()) * std::sin(2.0 * kPi * p.y()) / kPi,
                p.y() - warp * std::sin(2.0 * kPi * p.x()) * std::sin(kPi * p.y()) / kPi);
  };

  const int qlo = -2, qhi = static_cast<int>(std::ceil(1.0 / (1.5 * radius))) + 2;
  const int rlo = -2, rhi = static_cast<int>(std::ceil(1.0 / row_height)) + 2;
  auto lattice_corner = [&](int q, int r, int k) {
    const Vec2 center(1.5 * radius * q, row_height * (r + ((q & 1) ? 0.5 : 0.0)));
    const double angle = k * (3.14159265358979323846 / 3.0);
    return Vec2(center.x() + radius * std::cos(angle),
                center.y() + squeeze * radius * std::sin(angle));
  };

  // rare jitter draws make a cell reflex; damp the offsets of its corners
  // (shared with the neighbors) until every hexagon is convex
  for (int pass = 0; pass < 40; ++pass) {
    bool all_convex = true;
    for (int q = qlo; q <= qhi; ++q)
      for (int r = rlo; r <= rhi; ++r) {
        std::vector<Vec2> hex;
        for (int k = 0; k < 6; ++k) hex.push_back(perturb(lattice_corner(q, r, k)));
        if (polygon_is_convex(hex)) continue;
        all_convex = false;
        for (int k = 0; k < 6; ++k) {
          const auto key = key_of(lattice_corner(q, r, k));
          auto [it, inserted] = damping.try_emplace(key, 1.0);
          it->second *= 0.6;
        }
      }
    if (all_convex) break;
    if (pass == 39) throw MeshError("hexagonal generator failed to restore convexity");
  }

  for (int q = qlo; q <= qhi; ++q)
    for (int r = rlo; r <= rhi; ++r) {
      std::vector<Vec2> cellpoly;
      for (int k = 0; k < 6; ++k) cellpoly.push_back(perturb(lattice_corner(q, r, k)));
      // clip to the unit square
      for (int side = 0; side < 4 && !cellpoly.empty(); ++side) {
        const Vec2& a = square[side];
        const Vec2& b = square[(side + 1) % 4];
        const Vec2 t = b - a;
        const Vec2 outward(t.y(), -t.x());
        cellpoly = clip_halfplane(cellpoly, outward, outward.dot(a));
      }
      if (cellpoly.size() < 3 || !(signed_area(cellpoly) > 0.0)) continue;

      std::vector<int> cyc;
      for (const Vec2& v : cellpoly) {
        const int id = vid(v);
        if (cyc.empty() || (cyc.back() != id && cyc.front() != id)) cyc.push_back(id);
      }
      while (cyc.size() > 1 && cyc.back() == cyc.front()) cyc.pop_back();
      if (cyc.size() >= 3) mesh.elements.push_back(std::move(cyc));
    }

  mesh.finalize(square_tagger(mesh.vertices));
  return mesh;
}

PolyMesh::BoundaryTagger vessel_tagger(const std::vector<Vec2>& vertices,
                                       VesselFixity fixity) {
  return [&vertices, fixity](int a, int b) -> std::optional<EdgeTag> {
    const Vec2 mid = 0.5 * (vertices[a] + vertices[b]);
    const bool outer = on_line(std::abs(mid.x()), 0.75) || on_line(std::abs(mid.y()), 0.75);
    const bool inner = (on_line(std::abs(mid.x()), 0.5) && std::abs(mid.y()) < 0.5 + kBoundaryEps) ||
                       (on_line(std::abs(mid.y()), 0.5) && std::abs(mid.x()) < 0.5 + kBoundaryEps);
    if (outer) {
      if (fixity == VesselFixity::OuterBottom)
        return on_line(mid.y(), -0.75) ? EdgeTag::Dirichlet : EdgeTag::Neumann;
      return EdgeTag::Dirichlet;
    }
    if (inner) return EdgeTag::Neumann;
    return std::nullopt;
  };
}

PolyMesh generate_vessel_mesh(VesselFixity fixity) {
  // Three concentric square rings at half-widths 0.5, 0.625, 0.75, each
  // discretized with 6 segments per side except 7 on top, the rings joined
  // radially. Eliminating the bottom of the outer boundary then leaves
  // exactly 68 free vertices, i.e. 136 displacement DOFs.
  PolyMesh mesh;
  const int side_segments[4] = {6, 6, 7, 6};  // bottom, right, top, left
  const int ring_positions = side_segments[0] + side_segments[1] + side_segments[2] +
                             side_segments[3];
  const double half_widths[3] = {0.5, 0.625, 0.75};

  std::vector<std::vector<int>> ring(3);
  for (int t = 0; t < 3; ++t) {
    const double s = half_widths[t];
    // CCW from the bottom-left corner; each side excludes its end corner
    const Vec2 corners[4] = {{-s, -s}, {s, -s}, {s, s}, {-s, s}};
    for (int side = 0; side < 4; ++side) {
      const Vec2 a = corners[side];
      const Vec2 b = corners[(side + 1) % 4];
      for (int k = 0; k < side_segments[side]; ++k) {
        ring[t].push_back(mesh.num_vertices());
        const double frac = static_cast<double>(k) / side_segments[side];
        mesh.vertices.push_back(a + frac * (b - a));
      }
    }
  }

  for (int t = 0; t < 2; ++t)
    for (int i = 0; i < ring_positions; ++i) {
      // CCW quad: radially out, along the outer ring, radially back in
      const int a = ring[t][i];
      const int b = ring[t + 1][i];
      const int c = ring[t + 1][(i + 1) % ring_positions];
      const int d = ring[t][(i + 1) % ring_positions];
      // shorter diagonal; exact ties broken mirror-symmetrically
      const double diag_ac = (mesh.vertices[c] - mesh.vertices[a]).norm();
      const double diag_bd = (mesh.vertices[d] - mesh.vertices[b]).norm();
      bool use_ac = diag_ac < diag_bd - 1e-12;
      if (std::abs(diag_ac - diag_bd) <= 1e-12) {
        const Vec2 mid = 0.25 * (mesh.vertices[a] + mesh.vertices[b] + mesh.vertices[c] +
                                 mesh.vertices[d]);
        use_ac = mid.x() < 0.0;
      }
      if (use_ac) {
        mesh.elements.push_back({a, b, c});
        mesh.elements.push_back({a, c, d});
      } else {
        mesh.elements.push_back({a, b, d});
        mesh.elements.push_back({b, c, d});
      }
    }

  mesh.finalize(vessel_tagger(mesh.vertices, fixity));
  return mesh;
}

}  // namespace vems
