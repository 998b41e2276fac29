#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace vems {

using Vec2 = Eigen::Vector2d;

// Signed area of a polygon given as a CCW (positive) or CW (negative) cycle.
double signed_area(std::span<const Vec2> poly);

// Area centroid; requires |signed_area| > 0.
Vec2 polygon_centroid(std::span<const Vec2> poly);

// Max pairwise vertex distance.
double polygon_diameter(std::span<const Vec2> poly);

bool polygon_is_convex(std::span<const Vec2> poly, double tol = 1e-14);

// True if the cycle is a simple polygon (no self-intersections, no repeated
// vertices, positive area).
bool polygon_is_simple(std::span<const Vec2> poly);

// Intersection of the half-planes to the left of each directed edge of the
// cycle (the polygon kernel when the input is a polygon). Returns an empty
// vector when the intersection is empty. `inset` shrinks every half-plane
// inward by that distance.
std::vector<Vec2> polygon_kernel(std::span<const Vec2> poly, double inset = 0.0);

// Radius of the largest ball contained in the kernel, and its center.
// Radius 0 with center unset when the kernel is empty.
struct InscribedBall {
  double radius = 0.0;
  Vec2 center = Vec2::Zero();
};
InscribedBall kernel_chebyshev_ball(std::span<const Vec2> poly);

// Clip a convex polygon against the half-plane { x : n.dot(x) <= c }.
std::vector<Vec2> clip_halfplane(std::span<const Vec2> poly, const Vec2& n, double c);

}  // namespace vems
