#include "vemspectra/adapt.hpp"
#include "vemspectra/generators.hpp"

#include <doctest.h>

#include <cmath>

using namespace vems;

TEST_CASE("maximum marking strategy") {
  CHECK(mark({1.0, 0.6, 0.4}) == std::set<int>{0, 1});
  CHECK(mark({2.0, 2.0, 2.0}) == std::set<int>{0, 1, 2});
  CHECK(mark({0.0, 0.0}) == std::set<int>{0, 1});  // all marked at eta = 0

  // raising the fraction never enlarges the set
  const std::vector<double> eta = {0.9, 0.1, 0.5, 0.45, 0.88, 0.2};
  std::set<int> prev = mark(eta, 0.1);
  for (double frac : {0.3, 0.5, 0.7, 0.9}) {
    const std::set<int> cur = mark(eta, frac);
    for (int e : cur) CHECK(prev.count(e) == 1);
    prev = cur;
  }
}

TEST_CASE("refine_vem splits an n-gon into n quadrilaterals") {
  PolyMesh tri;
  tri.vertices = {{0, 0}, {1, 0}, {0.4, 0.9}};
  tri.elements = {{0, 1, 2}};
  tri.finalize([](int, int) { return EdgeTag::Dirichlet; });
  const PolyMesh split = refine_vem(tri, {0});
  split.validate();
  CHECK(split.num_elements() == 3);
  for (const auto& cyc : split.elements) CHECK(cyc.size() == 4);
  CHECK(split.total_area() == doctest::Approx(tri.total_area()).epsilon(1e-12));

  PolyMesh penta;
  penta.vertices = {{0, 0}, {1, 0}, {1.3, 0.8}, {0.5, 1.4}, {-0.3, 0.7}};
  penta.elements = {{0, 1, 2, 3, 4}};
  penta.finalize([](int, int) { return EdgeTag::Dirichlet; });
  const PolyMesh psplit = refine_vem(penta, {0});
  psplit.validate();
  CHECK(psplit.num_elements() == 5);
  for (const auto& cyc : psplit.elements) CHECK(cyc.size() == 4);
}

TEST_CASE("unmarked neighbor absorbs the hanging midpoint") {
  PolyMesh two;
  two.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  two.elements = {{0, 1, 2}, {0, 2, 3}};
  two.finalize([](int, int) { return EdgeTag::Dirichlet; });
  const PolyMesh out = refine_vem(two, {0});
  out.validate();
  REQUIRE(out.num_elements() == 4);  // 3 quads + the grown neighbor
  // the unmarked triangle becomes a 4-gon: 3 original vertices + 1 midpoint
  for (const auto& cyc : out.elements) CHECK(cyc.size() == 4);
  CHECK(out.total_area() == doctest::Approx(two.total_area()).epsilon(1e-12));
}

TEST_CASE("refine_vem rejects elements that are not star-shaped about the barycenter") {
  // deep U: the centroid lies inside the notch, outside the kernel
  PolyMesh u;
  u.vertices = {{0, 0}, {5, 0}, {5, 5}, {4, 5}, {4, 0.5}, {1, 0.5}, {1, 5}, {0, 5}};
  u.elements = {{0, 1, 2, 3, 4, 5, 6, 7}};
  u.finalize([](int, int) { return EdgeTag::Dirichlet; });
  CHECK_THROWS_WITH_AS(refine_vem(u, {0}), doctest::Contains("star-shaped"), MeshError);
}

TEST_CASE("subtriangulate rejects polygons with an empty kernel") {
  // spiral-ish simple polygon with empty kernel
  PolyMesh bad;
  bad.vertices = {{0, 0}, {6, 0}, {6, 6}, {1, 6}, {1, 2}, {3, 2},
                  {3, 4}, {5, 4}, {5, 1}, {0, 1}};
  bad.elements = {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
  bad.finalize([](int, int) { return EdgeTag::Dirichlet; });
  REQUIRE(polygon_is_simple(bad.element_polygon(0)));
  CHECK(polygon_kernel(bad.element_polygon(0)).size() < 3);
  CHECK_THROWS_AS(subtriangulate(bad, 0), MeshError);
}

TEST_CASE("refine_vem locality") {
  const PolyMesh mesh = generate_hexagonal_mesh(5);
  const std::set<int> marked = {0};
  const PolyMesh out = refine_vem(mesh, marked);
  out.validate();
  CHECK(out.total_area() == doctest::Approx(mesh.total_area()).epsilon(1e-10));

  // neighbors of the marked element
  std::set<int> adjacent;
  for (int edge_id : mesh.element_edges[0]) {
    const Edge& ed = mesh.edges[edge_id];
    if (ed.left != 0 && ed.left >= 0) adjacent.insert(ed.left);
    if (ed.right != 0 && ed.right >= 0) adjacent.insert(ed.right);
  }
  // every untouched element keeps its cycle, shifted by the split count
  const int added = static_cast<int>(mesh.elements[0].size()) - 1;
  for (int e = 1; e < mesh.num_elements(); ++e) {
    if (adjacent.count(e)) continue;
    CHECK(out.elements[e + added] == mesh.elements[e]);
  }
}

TEST_CASE("newest-vertex bisection with conformity closure") {
  PolyMesh two;
  two.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  two.elements = {{0, 1, 2}, {0, 2, 3}};
  two.finalize([](int, int) { return EdgeTag::Dirichlet; });

  SUBCASE("no marks leaves the mesh unchanged") {
    const PolyMesh out = refine_fem(two, {});
    CHECK(out.num_elements() == 2);
    CHECK(out.num_vertices() == 4);
  }

  SUBCASE("one marked triangle propagates across the shared hypotenuse") {
    const PolyMesh out = refine_fem(two, {0});
    out.validate();
    CHECK(out.num_elements() == 4);  // both parents bisected
    CHECK(out.num_vertices() == 5);  // one midpoint on the diagonal
    CHECK(out.total_area() == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("non-triangle input is rejected") {
    PolyMesh quad;
    quad.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    quad.elements = {{0, 1, 2, 3}};
    quad.finalize([](int, int) { return EdgeTag::Dirichlet; });
    CHECK_THROWS_AS(refine_fem(quad, {0}), MeshError);
  }
}

TEST_CASE("repeated bisection keeps a minimum-angle bound") {
  PolyMesh mesh = generate_vessel_mesh();
  auto min_angle = [](const PolyMesh& m) {
    double worst = 1e9;
    for (int e = 0; e < m.num_elements(); ++e) {
      const auto poly = m.element_polygon(e);
      for (int k = 0; k < 3; ++k) {
        const Vec2 u = poly[(k + 1) % 3] - poly[k];
        const Vec2 v = poly[(k + 2) % 3] - poly[k];
        const double angle =
            std::acos(u.dot(v) / (u.norm() * v.norm()));
        worst = std::min(worst, angle);
      }
    }
    return worst;
  };
  const double initial = min_angle(mesh);
  // ten rounds of bisecting a fixed spatial region
  for (int round = 0; round < 10; ++round) {
    std::set<int> marked;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const Vec2 c = polygon_centroid(mesh.element_polygon(e));
      if (c.x() > 0.45 && c.y() > 0.45) marked.insert(e);
    }
    REQUIRE(!marked.empty());
    mesh = refine_fem(mesh, marked);
  }
  mesh.validate();
  // newest-vertex bisection generates finitely many similarity classes
  CHECK(min_angle(mesh) > 0.4 * initial);
}

TEST_CASE("uniform red refinement quadruples the triangles") {
  const PolyMesh mesh = generate_vessel_mesh();
  const PolyMesh out = refine_uniform_red(mesh);
  out.validate();
  CHECK(out.num_elements() == 4 * mesh.num_elements());
  CHECK(out.total_area() == doctest::Approx(mesh.total_area()).epsilon(1e-10));
}

TEST_CASE("adaptive loop with a DOF cap equal to the start records one step") {
  AdaptiveConfig cfg;
  cfg.strategy = RefineStrategy::AdaptiveVEM;
  cfg.max_dofs = 136;
  cfg.omega_ref = 0.1538;
  const auto steps = adaptive_loop(generate_vessel_mesh(), Material::unit_test2(), cfg);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].dofs == 136);
}

TEST_CASE("adaptive loop is deterministic and grows strictly") {
  AdaptiveConfig cfg;
  cfg.strategy = RefineStrategy::AdaptiveVEM;
  cfg.max_dofs = 1200;
  cfg.omega_ref = 0.1538;
  const Material mat = Material::unit_test2();
  const auto a = adaptive_loop(generate_vessel_mesh(), mat, cfg);
  const auto b = adaptive_loop(generate_vessel_mesh(), mat, cfg);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() >= 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].dofs == b[i].dofs);
    CHECK(a[i].omega1 == b[i].omega1);
    CHECK(a[i].eta_sq == b[i].eta_sq);
    if (i > 0) CHECK(a[i].dofs > a[i - 1].dofs);
    CHECK(a[i].marked >= 0);
  }
}
