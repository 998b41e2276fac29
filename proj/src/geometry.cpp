#include "vemspectra/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace vems {

double signed_area(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * twice;
}

Vec2 polygon_centroid(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  double twice = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double cross = a.x() * b.y() - b.x() * a.y();
    twice += cross;
    c += cross * (a + b);
  }
  return c / (3.0 * twice);
}

double polygon_diameter(std::span<const Vec2> poly) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j)
      d2 = std::max(d2, (poly[i] - poly[j]).squaredNorm());
  return std::sqrt(d2);
}

bool polygon_is_convex(std::span<const Vec2> poly, double tol) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  double scale = polygon_diameter(poly);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = poly[(i + 1) % n] - poly[i];
    const Vec2 v = poly[(i + 2) % n] - poly[(i + 1) % n];
    const double cross = u.x() * v.y() - u.y() * v.x();
    if (cross < -tol * scale * scale) return false;
  }
  return signed_area(poly) > 0.0;
}

namespace {

bool segments_properly_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1,
                                 const Vec2& q2) {
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    return (v > 0.0) - (v < 0.0);
  };
  const int o1 = orient(p1, p2, q1);
  const int o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1);
  const int o4 = orient(q1, q2, p2);
  return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace

bool polygon_is_simple(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  if (signed_area(poly) <= 0.0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // adjacent edges share a vertex, skip them
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_properly_intersect(poly[i], poly[(i + 1) % n], poly[j],
                                      poly[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

std::vector<Vec2> clip_halfplane(std::span<const Vec2> poly, const Vec2& n, double c) {
  std::vector<Vec2> out;
  const std::size_t m = poly.size();
  out.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % m];
    const double da = n.dot(a) - c;
    const double db = n.dot(b) - c;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

std::vector<Vec2> polygon_kernel(std::span<const Vec2> poly, double inset) {
  const std::size_t n = poly.size();
  // generous bounding start so the kernel of a convex polygon is the polygon
  std::vector<Vec2> ker(poly.begin(), poly.end());
  if (!polygon_is_convex(poly)) {
    Vec2 lo = poly[0], hi = poly[0];
    for (const Vec2& p : poly) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    ker = {lo, {hi.x(), lo.y()}, hi, {lo.x(), hi.y()}};
  }
  for (std::size_t i = 0; i < n && !ker.empty(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const Vec2 t = b - a;
    const double len = t.norm();
    if (len == 0.0) continue;
    // interior lies to the left of a->b for a CCW cycle: outward normal
    const Vec2 nrm(t.y() / len, -t.x() / len);
    ker = clip_halfplane(ker, nrm, nrm.dot(a) - inset);
  }
  return ker;
}

InscribedBall kernel_chebyshev_ball(std::span<const Vec2> poly) {
  InscribedBall ball;
  std::vector<Vec2> ker = polygon_kernel(poly);
  if (ker.size() < 3) return ball;
  double lo = 0.0, hi = polygon_diameter(poly);
  std::vector<Vec2> last = ker;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    std::vector<Vec2> shrunk = polygon_kernel(poly, mid);
    if (shrunk.size() >= 3) {
      lo = mid;
      last = std::move(shrunk);
    } else {
      hi = mid;
    }
  }
  ball.radius = lo;
  Vec2 center = Vec2::Zero();
  for (const Vec2& p : last) center += p;
  ball.center = center / static_cast<double>(last.size());
  return ball;
}

}  // namespace vems
