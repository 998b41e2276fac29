#pragma once

#include "vemspectra/estimator.hpp"

#include <optional>
#include <set>

namespace vems {

// Maximum strategy: every element whose indicator reaches `fraction` of the
// largest indicator, ties included.
std::set<int> mark(const std::vector<double>& eta_per_element, double fraction = 0.5);

// Splits each marked n-gon into n quadrilaterals joining the barycenter with
// the edge midpoints. Unmarked neighbors sharing a split edge absorb the
// midpoint as an ordinary polygon vertex.
PolyMesh refine_vem(const PolyMesh& mesh, const std::set<int>& marked);

// Newest-vertex bisection of the marked triangles with recursive conformity
// closure; requires an all-triangle mesh.
PolyMesh refine_fem(const PolyMesh& mesh, const std::set<int>& marked);

// Regular quadrisection of every triangle (uniformly refined meshes).
PolyMesh refine_uniform_red(const PolyMesh& mesh);

enum class RefineStrategy { AdaptiveVEM, AdaptiveFEM, UniformRed };

struct AdaptiveConfig {
  RefineStrategy strategy = RefineStrategy::AdaptiveVEM;
  double mark_fraction = 0.5;
  int max_dofs = 25000;
  double eta_floor = 0.0;
  double eig_tol = 1e-9;
  int max_steps = 60;
  std::optional<double> omega_ref;
};

struct AdaptiveStep {
  int index = 0;
  int dofs = 0;
  double omega1 = 0.0;
  double lambda1 = 0.0;
  double theta_sq = 0.0;
  double vol_sq = 0.0;
  double jump_sq = 0.0;
  double eta_sq = 0.0;
  std::optional<double> effectivity;
  int marked = 0;
  double seconds = 0.0;
};

// solve -> estimate -> mark -> refine until the DOF count reaches the cap or
// the estimator reaches the floor. Deterministic for a fixed config.
std::vector<AdaptiveStep> adaptive_loop(PolyMesh mesh, const Material& mat,
                                        const AdaptiveConfig& config);

}  // namespace vems
