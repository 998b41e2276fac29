#pragma once

#include "vemspectra/local_ops.hpp"

#include <Eigen/Sparse>

namespace vems {

using SpMat = Eigen::SparseMatrix<double>;

// Vertex -> global DOF numbering with homogeneous Dirichlet elimination.
// A vertex touching any Dirichlet edge is fully constrained in both
// components.
struct DofMap {
  std::vector<int> vertex_dof;  // first DOF of vertex, -1 when constrained
  int num_free = 0;

  int dof(int vertex, int comp) const {
    const int base = vertex_dof[vertex];
    return base < 0 ? -1 : base + comp;
  }
};

DofMap build_dof_map(const PolyMesh& mesh);

struct GlobalSystem {
  SpMat stiffness;  // A
  SpMat mass;       // B
  DofMap dofs;
};

// Scatter-adds the local VEM matrices over the free DOFs. Throws when the
// Dirichlet boundary is empty (the stiffness would be singular). When
// `keep_local` is given, the per-element operators are retained for the
// estimator. Element work runs in fixed-size chunks that may be processed in
// parallel; the merge order is chunk-index based, so results do not depend on
// the thread count (cap with VEM_SPECTRA_THREADS).
GlobalSystem assemble(const PolyMesh& mesh, const Material& mat,
                      std::vector<LocalOperators>* keep_local = nullptr);

// Restriction of a full vertex-displacement field to the free DOFs.
Eigen::VectorXd restrict_to_free(const DofMap& dofs, const Eigen::VectorXd& full);
// Expansion with zeros on constrained DOFs.
Eigen::VectorXd expand_to_full(const DofMap& dofs, int num_vertices,
                               const Eigen::VectorXd& reduced);

// Local DOF vector of element e drawn from a full (2 * num_vertices) field.
Eigen::VectorXd element_dofs(const PolyMesh& mesh, int e, const Eigen::VectorXd& full);

int max_threads();

}  // namespace vems
