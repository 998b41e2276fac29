#include "vemspectra/assembly.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>

namespace vems {

int max_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("VEM_SPECTRA_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && cap < static_cast<long>(hw)) hw = static_cast<unsigned>(cap);
  }
  return static_cast<int>(hw);
}

DofMap build_dof_map(const PolyMesh& mesh) {
  std::vector<bool> constrained(mesh.num_vertices(), false);
  for (const Edge& ed : mesh.edges)
    if (ed.tag == EdgeTag::Dirichlet) {
      constrained[ed.v0] = true;
      constrained[ed.v1] = true;
    }
  DofMap map;
  map.vertex_dof.assign(mesh.num_vertices(), -1);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (!constrained[v]) {
      map.vertex_dof[v] = map.num_free;
      map.num_free += 2;
    }
  return map;
}

GlobalSystem assemble(const PolyMesh& mesh, const Material& mat,
                      std::vector<LocalOperators>* keep_local) {
  if (!mesh.has_dirichlet_boundary())
    throw MeshError("empty Dirichlet boundary: stiffness would be singular");

  GlobalSystem sys;
  sys.dofs = build_dof_map(mesh);
  const int n = sys.dofs.num_free;

  const int ne = mesh.num_elements();
  if (keep_local) keep_local->resize(ne);

  constexpr int kChunk = 256;
  const int nchunks = (ne + kChunk - 1) / kChunk;
  std::vector<std::vector<Eigen::Triplet<double>>> tk(nchunks), tm(nchunks);

  std::atomic<int> next_chunk{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const int chunk = next_chunk.fetch_add(1);
      if (chunk >= nchunks || failed.load()) return;
      auto& lk = tk[chunk];
      auto& lm = tm[chunk];
      try {
        for (int e = chunk * kChunk; e < std::min(ne, (chunk + 1) * kChunk); ++e) {
          const auto poly = mesh.element_polygon(e);
          LocalOperators ops = build_local_operators(poly, mat);
          const auto& cyc = mesh.elements[e];
          const int nv = static_cast<int>(cyc.size());
          std::vector<int> gdof(2 * nv);
          for (int r = 0; r < nv; ++r)
            for (int c = 0; c < 2; ++c) gdof[2 * r + c] = sys.dofs.dof(cyc[r], c);
          for (int i = 0; i < 2 * nv; ++i) {
            if (gdof[i] < 0) continue;
            for (int j = 0; j < 2 * nv; ++j) {
              if (gdof[j] < 0) continue;
              lk.emplace_back(gdof[i], gdof[j], ops.stiffness(i, j));
              lm.emplace_back(gdof[i], gdof[j], ops.mass(i, j));
            }
          }
          if (keep_local) (*keep_local)[e] = std::move(ops);
        }
      } catch (const std::exception& ex) {
        std::scoped_lock lock(error_mutex);
        failed.store(true);
        if (error_message.empty()) error_message = ex.what();
      }
    }
  };

  const int nthreads = std::min(max_threads(), nchunks);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw MeshError("assembly failed: " + error_message);

  std::vector<Eigen::Triplet<double>> trips_k, trips_m;
  std::size_t total = 0;
  for (const auto& c : tk) total += c.size();
  trips_k.reserve(total);
  trips_m.reserve(total);
  for (int c = 0; c < nchunks; ++c) {
    trips_k.insert(trips_k.end(), tk[c].begin(), tk[c].end());
    trips_m.insert(trips_m.end(), tm[c].begin(), tm[c].end());
  }

  sys.stiffness.resize(n, n);
  sys.mass.resize(n, n);
  sys.stiffness.setFromTriplets(trips_k.begin(), trips_k.end());
  sys.mass.setFromTriplets(trips_m.begin(), trips_m.end());
  sys.stiffness.makeCompressed();
  sys.mass.makeCompressed();
  return sys;
}

Eigen::VectorXd restrict_to_free(const DofMap& dofs, const Eigen::VectorXd& full) {
  Eigen::VectorXd out(dofs.num_free);
  for (std::size_t v = 0; v < dofs.vertex_dof.size(); ++v)
    if (dofs.vertex_dof[v] >= 0) {
      out[dofs.vertex_dof[v]] = full[2 * v];
      out[dofs.vertex_dof[v] + 1] = full[2 * v + 1];
    }
  return out;
}

Eigen::VectorXd expand_to_full(const DofMap& dofs, int num_vertices,
                               const Eigen::VectorXd& reduced) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * num_vertices);
  for (int v = 0; v < num_vertices; ++v)
    if (dofs.vertex_dof[v] >= 0) {
      out[2 * v] = reduced[dofs.vertex_dof[v]];
      out[2 * v + 1] = reduced[dofs.vertex_dof[v] + 1];
    }
  return out;
}

Eigen::VectorXd element_dofs(const PolyMesh& mesh, int e, const Eigen::VectorXd& full) {
  const auto& cyc = mesh.elements[e];
  Eigen::VectorXd out(2 * cyc.size());
  for (std::size_t r = 0; r < cyc.size(); ++r) {
    out[2 * r] = full[2 * cyc[r]];
    out[2 * r + 1] = full[2 * cyc[r] + 1];
  }
  return out;
}

}  // namespace vems
