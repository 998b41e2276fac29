#pragma once

#include "vemspectra/assembly.hpp"

#include <array>

namespace vems {
namespace fem {

// Closed-form linear triangle elasticity element, kept free of the vem code
// path so agreement on triangle meshes is a genuine cross-check.

Eigen::Matrix<double, 6, 6> tri_stiffness(const std::array<Vec2, 3>& tri,
                                          const Material& mat);
Eigen::Matrix<double, 6, 6> tri_mass(const std::array<Vec2, 3>& tri, const Material& mat);

struct FemSystem {
  SpMat stiffness;
  SpMat mass;
  int num_free = 0;
};

// Direct P1 assembly over an all-triangle mesh with the same Dirichlet rule
// (vertices on the closure of the Dirichlet boundary are fixed).
FemSystem assemble_p1(const PolyMesh& mesh, const Material& mat);

}  // namespace fem
}  // namespace vems
