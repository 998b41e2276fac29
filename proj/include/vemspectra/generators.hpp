#pragma once

#include "vemspectra/mesh.hpp"

namespace vems {

// N x N congruent-trapezoid partition of the unit square with every edge split
// at its midpoint, so each element cycle has 8 vertices. Bottom side is
// Dirichlet, the rest of the boundary Neumann.
PolyMesh generate_trapezoidal_mesh(int n);

// Centroidal-style hexagon tiling of the unit square: Voronoi diagram of a
// deterministically jittered triangular lattice with ~n cells per side,
// clipped to the square. Interior cells are convex hexagons; boundary cells
// clip to pentagons/squares. Bottom side Dirichlet, rest Neumann.
PolyMesh generate_hexagonal_mesh(int n, unsigned seed = 1u);

enum class VesselFixity { OuterBottom, OuterBoundary };

// Coarse triangulation of the square annulus [-0.75,0.75]^2 \ [-0.5,0.5]^2
// with exactly 136 free displacement DOFs under the default fixity (solid
// fixed along the bottom of the outer boundary, traction free elsewhere).
PolyMesh generate_vessel_mesh(VesselFixity fixity = VesselFixity::OuterBottom);

// Boundary classifier for the vessel domain, reused by the refiners' tests.
PolyMesh::BoundaryTagger vessel_tagger(const std::vector<Vec2>& vertices,
                                       VesselFixity fixity);

// Unit-square tagger: Dirichlet on y=0, Neumann elsewhere.
PolyMesh::BoundaryTagger square_tagger(const std::vector<Vec2>& vertices);

}  // namespace vems
