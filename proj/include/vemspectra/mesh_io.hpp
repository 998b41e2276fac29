#pragma once

#include "vemspectra/mesh.hpp"

#include <string>

namespace vems {

// JSON mesh document with arrays `vertices` ([x, y] pairs), `elements`
// (vertex-index lists) and `edges` ([v0, v1, tag] with tag in
// {"interior", "dirichlet", "neumann"}).
void save_mesh(const PolyMesh& mesh, const std::string& path);
PolyMesh load_mesh(const std::string& path);

std::string mesh_to_json(const PolyMesh& mesh);
PolyMesh mesh_from_json(const std::string& text);

}  // namespace vems
