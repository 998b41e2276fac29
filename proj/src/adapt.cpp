#include "vemspectra/adapt.hpp"

#include "vemspectra/eigsolve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace vems {

std::set<int> mark(const std::vector<double>& eta_per_element, double fraction) {
  if (eta_per_element.empty()) throw MeshError("marking needs at least one element");
  const double max_eta = *std::max_element(eta_per_element.begin(), eta_per_element.end());
  std::set<int> out;
  for (std::size_t e = 0; e < eta_per_element.size(); ++e)
    if (eta_per_element[e] >= fraction * max_eta) out.insert(static_cast<int>(e));
  return out;
}

namespace {

using VPair = std::pair<int, int>;

VPair ukey(int a, int b) { return std::minmax(a, b); }

std::map<VPair, EdgeTag> boundary_tags(const PolyMesh& mesh) {
  std::map<VPair, EdgeTag> tags;
  for (const Edge& ed : mesh.edges)
    if (ed.right < 0) tags[ukey(ed.v0, ed.v1)] = ed.tag;
  return tags;
}

PolyMesh::BoundaryTagger tagger_from(const std::map<VPair, EdgeTag>& tags) {
  return [tags](int a, int b) -> std::optional<EdgeTag> {
    auto it = tags.find(ukey(a, b));
    if (it == tags.end()) return std::nullopt;
    return it->second;
  };
}

}  // namespace

PolyMesh refine_vem(const PolyMesh& mesh, const std::set<int>& marked) {
  PolyMesh out;
  out.vertices = mesh.vertices;
  std::map<VPair, EdgeTag> tags = boundary_tags(mesh);

  std::map<VPair, int> midpoint;
  auto mid_of = [&](int a, int b) {
    const VPair key = ukey(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = out.num_vertices();
    out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    midpoint.emplace(key, id);
    auto tag_it = tags.find(key);
    if (tag_it != tags.end()) {
      tags[ukey(a, id)] = tag_it->second;
      tags[ukey(id, b)] = tag_it->second;
    }
    return id;
  };

  // split edges of the marked elements first so neighbors can absorb them
  for (int e : marked) {
    const auto& cyc = mesh.elements.at(e);
    for (std::size_t k = 0; k < cyc.size(); ++k)
      mid_of(cyc[k], cyc[(k + 1) % cyc.size()]);
  }

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& cyc = mesh.elements[e];
    const int n = static_cast<int>(cyc.size());
    if (marked.count(e)) {
      const auto poly = mesh.element_polygon(e);
      const Vec2 bary = polygon_centroid(poly);
      const int bid = out.num_vertices();
      out.vertices.push_back(bary);
      for (int k = 0; k < n; ++k) {
        const int vk = cyc[k];
        const int m_next = midpoint.at(ukey(vk, cyc[(k + 1) % n]));
        const int m_prev = midpoint.at(ukey(cyc[(k + n - 1) % n], vk));
        std::vector<int> quad = {vk, m_next, bid, m_prev};
        std::vector<Vec2> qpoly;
        for (int v : quad) qpoly.push_back(out.vertices[v]);
        if (!(signed_area(qpoly) > 0.0))
          throw MeshError("element " + std::to_string(e) +
                          " is not star-shaped with respect to its barycenter");
        out.elements.push_back(std::move(quad));
      }
    } else {
      std::vector<int> grown;
      for (int k = 0; k < n; ++k) {
        grown.push_back(cyc[k]);
        auto it = midpoint.find(ukey(cyc[k], cyc[(k + 1) % n]));
        if (it != midpoint.end()) grown.push_back(it->second);
      }
      out.elements.push_back(std::move(grown));
    }
  }

  out.finalize(tagger_from(tags));
  return out;
}

namespace {

struct NvbMesh {
  std::vector<Vec2> verts;
  // vertex triple per triangle; the refinement edge is (v[1], v[2])
  std::vector<std::array<int, 3>> tris;
  std::vector<bool> alive;
  std::map<VPair, std::vector<int>> edge_tris;
  std::map<VPair, int> midpoint;
  std::map<VPair, EdgeTag> tags;

  void attach(int t) {
    for (int k = 0; k < 3; ++k)
      edge_tris[ukey(tris[t][k], tris[t][(k + 1) % 3])].push_back(t);
  }
  void detach(int t) {
    for (int k = 0; k < 3; ++k) {
      auto& lst = edge_tris[ukey(tris[t][k], tris[t][(k + 1) % 3])];
      lst.erase(std::remove(lst.begin(), lst.end(), t), lst.end());
    }
  }
  int neighbor_across(int t, const VPair& edge) const {
    auto it = edge_tris.find(edge);
    if (it == edge_tris.end()) return -1;
    for (int u : it->second)
      if (u != t && alive[u]) return u;
    return -1;
  }
  VPair base(int t) const { return ukey(tris[t][1], tris[t][2]); }

  int mid_of(int a, int b) {
    const VPair key = ukey(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(verts.size());
    verts.push_back(0.5 * (verts[a] + verts[b]));
    midpoint.emplace(key, id);
    auto tag_it = tags.find(key);
    if (tag_it != tags.end()) {
      tags[ukey(a, id)] = tag_it->second;
      tags[ukey(id, b)] = tag_it->second;
    }
    return id;
  }

  // split one triangle across its base; both children keep CCW orientation
  // and take the parent's other edges as their refinement edges
  void split(int t) {
    const auto [p, a, b] = std::tuple{tris[t][0], tris[t][1], tris[t][2]};
    const int m = mid_of(a, b);
    detach(t);
    alive[t] = false;
    tris.push_back({m, p, a});
    alive.push_back(true);
    attach(static_cast<int>(tris.size()) - 1);
    tris.push_back({m, b, p});
    alive.push_back(true);
    attach(static_cast<int>(tris.size()) - 1);
  }

  // bisect with recursive conformity: a neighbor whose refinement edge is not
  // the shared edge is refined first
  void bisect(int t0) {
    std::vector<int> stack{t0};
    const std::size_t guard = 4 * tris.size() + 64;
    while (!stack.empty()) {
      if (stack.size() > guard)
        throw MeshError("newest-vertex bisection: incompatible refinement-edge labeling");
      const int t = stack.back();
      if (!alive[t]) {
        stack.pop_back();
        continue;
      }
      const VPair e = base(t);
      const int u = neighbor_across(t, e);
      if (u >= 0 && base(u) != e) {
        stack.push_back(u);
        continue;
      }
      split(t);
      if (u >= 0) split(u);
      stack.pop_back();
    }
  }
};

NvbMesh nvb_from(const PolyMesh& mesh) {
  NvbMesh nvb;
  nvb.verts = mesh.vertices;
  nvb.tags = boundary_tags(mesh);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& cyc = mesh.elements[e];
    if (cyc.size() != 3) throw MeshError("FEM refinement requires an all-triangle mesh");
    // rotate so the longest edge becomes the refinement edge (v1, v2)
    int best = 0;
    double best_len = -1.0;
    for (int k = 0; k < 3; ++k) {
      const double len =
          (mesh.vertices[cyc[(k + 1) % 3]] - mesh.vertices[cyc[k]]).norm();
      if (len > best_len + 1e-15 * (1.0 + best_len)) {
        best_len = len;
        best = k;
      }
    }
    // base (v1,v2) = edge starting at cyc[best]; peak = remaining vertex
    nvb.tris.push_back({cyc[(best + 2) % 3], cyc[best], cyc[(best + 1) % 3]});
    nvb.alive.push_back(true);
    nvb.attach(e);
  }
  return nvb;
}

PolyMesh nvb_to_mesh(const NvbMesh& nvb) {
  PolyMesh out;
  out.vertices = nvb.verts;
  for (std::size_t t = 0; t < nvb.tris.size(); ++t)
    if (nvb.alive[t])
      out.elements.push_back({nvb.tris[t][0], nvb.tris[t][1], nvb.tris[t][2]});
  out.finalize(tagger_from(nvb.tags));
  return out;
}

}  // namespace

PolyMesh refine_fem(const PolyMesh& mesh, const std::set<int>& marked) {
  NvbMesh nvb = nvb_from(mesh);
  for (int e : marked) {
    if (e < 0 || e >= static_cast<int>(nvb.tris.size())) throw MeshError("marked id out of range");
    if (nvb.alive[e]) nvb.bisect(e);
  }
  return nvb_to_mesh(nvb);
}

PolyMesh refine_uniform_red(const PolyMesh& mesh) {
  PolyMesh out;
  out.vertices = mesh.vertices;
  std::map<VPair, EdgeTag> tags = boundary_tags(mesh);
  std::map<VPair, int> midpoint;
  auto mid_of = [&](int a, int b) {
    const VPair key = ukey(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = out.num_vertices();
    out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    midpoint.emplace(key, id);
    auto tag_it = tags.find(key);
    if (tag_it != tags.end()) {
      tags[ukey(a, id)] = tag_it->second;
      tags[ukey(id, b)] = tag_it->second;
    }
    return id;
  };

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& cyc = mesh.elements[e];
    if (cyc.size() != 3) throw MeshError("uniform refinement requires triangles");
    const int a = cyc[0], b = cyc[1], c = cyc[2];
    const int mab = mid_of(a, b), mbc = mid_of(b, c), mca = mid_of(c, a);
    out.elements.push_back({a, mab, mca});
    out.elements.push_back({b, mbc, mab});
    out.elements.push_back({c, mca, mbc});
    out.elements.push_back({mab, mbc, mca});
  }

  out.finalize(tagger_from(tags));
  return out;
}

std::vector<AdaptiveStep> adaptive_loop(PolyMesh mesh, const Material& mat,
                                        const AdaptiveConfig& config) {
  std::vector<AdaptiveStep> steps;
  for (int step = 0; step < config.max_steps; ++step) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<LocalOperators> local;
    GlobalSystem sys = assemble(mesh, mat, &local);
    if (sys.dofs.num_free == 0) throw MeshError("adaptive loop: no free DOFs");

    EigenSolution sol = solve_smallest(sys.stiffness, sys.mass, 1, config.eig_tol, mat.rho);
    const double lambda1 = sol.eigenvalues[0];
    const double omega1 = std::sqrt(lambda1);
    const Eigen::VectorXd full =
        expand_to_full(sys.dofs, mesh.num_vertices(), sol.eigenvectors[0]);

    EstimatorReport rep =
        estimate(mesh, local, full, lambda1, omega1, mat, config.omega_ref);

    AdaptiveStep rec;
    rec.index = step;
    rec.dofs = sys.dofs.num_free;
    rec.omega1 = omega1;
    rec.lambda1 = lambda1;
    rec.theta_sq = rep.total_theta_sq;
    rec.vol_sq = rep.total_vol_sq;
    rec.jump_sq = rep.total_jump_sq;
    rec.eta_sq = rep.total_eta_sq;
    rec.effectivity = rep.effectivity;

    const bool stop =
        sys.dofs.num_free >= config.max_dofs || rep.eta() <= config.eta_floor;

    if (!stop) {
      if (config.strategy == RefineStrategy::UniformRed) {
        rec.marked = mesh.num_elements();
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        steps.push_back(rec);
        mesh = refine_uniform_red(mesh);
        continue;
      }
      const std::set<int> marked = mark(rep.eta_per_element(), config.mark_fraction);
      rec.marked = static_cast<int>(marked.size());
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      steps.push_back(rec);
      mesh = config.strategy == RefineStrategy::AdaptiveVEM ? refine_vem(mesh, marked)
                                                            : refine_fem(mesh, marked);
      continue;
    }

    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    steps.push_back(rec);
    break;
  }
  return steps;
}

}  // namespace vems
