#include <doctest.h>

#include <cmath>

#include "lens/mesh.hpp"

using namespace lens;

namespace {
const double pi = 3.14159265358979323846;

double boundary_signed_area_xy(const Mesh& b) {
  // sum of 0.5 (x_u y_v - x_v y_u) over directed segments
  double s = 0.0;
  for (int c = 0; c < b.n_cells(); ++c) {
    int u = b.cells(c, 0), v = b.cells(c, 1);
    if (b.cell_sign[c] < 0) std::swap(u, v);
    s += 0.5 * (b.vertices(u, 0) * b.vertices(v, 1) - b.vertices(v, 0) * b.vertices(u, 1));
  }
  return s;
}
}  // namespace

TEST_SUITE("simplicial") {

TEST_CASE("annulus counts and topology") {
  Mesh m = make_annulus(1.0, 2.0, 4, 12);
  CHECK(m.n_vertices() == 5 * 12);
  CHECK(m.n_cells() == 2 * 4 * 12);
  CHECK(m.euler_characteristic() == 0);
  CHECK(m.n_components == 1);
  CHECK(static_cast<int>(m.boundary_vertex_ids.size()) == 24);
  auto be = boundary_mesh(m);
  CHECK(be.boundary.n_components == 2);
  CHECK(be.boundary.n_vertices() == 24);
  for (size_t i = 0; i < be.vertex_map.size(); ++i)
    CHECK(be.boundary.vertices.row(i) == m.vertices.row(be.vertex_map[i]));
}

TEST_CASE("disk sphere cylinder euler characteristics") {
  CHECK(make_disk(1.0, 3, 10).euler_characteristic() == 1);
  CHECK(make_sphere(2).euler_characteristic() == 2);
  CHECK(make_cylinder_band(1.0, 2.0, 12, 3).euler_characteristic() == 0);
  CHECK(make_hemisphere(3, 12).euler_characteristic() == 1);
  CHECK(make_sphere(2).boundary_vertex_ids.empty());
}

TEST_CASE("sphere area approaches the round value") {
  Mesh m = make_sphere(3);
  CHECK(std::abs(m.total_area() - 4.0 * pi) < 0.15);
}

TEST_CASE("orientation sign from given vertex order") {
  Eigen::MatrixXd v(3, 3);
  v << 0, 0, 0, 1, 0, 0, 0, 1, 0;
  Eigen::MatrixXi f(1, 3);
  f << 2, 0, 1;  // even permutation of (0,1,2)
  Mesh m = make_mesh(v, f);
  CHECK(m.cell_sign[0] == 1);
  f << 1, 0, 2;  // odd
  m = make_mesh(v, f);
  CHECK(m.cell_sign[0] == -1);
}

TEST_CASE("inconsistent orientation is rejected") {
  Eigen::MatrixXd v(4, 3);
  v << 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0;
  Eigen::MatrixXi f(2, 3);
  f << 0, 1, 2, 1, 3, 2;  // consistent
  CHECK_NOTHROW(make_mesh(v, f));
  f << 0, 1, 2, 1, 2, 3;  // second triangle flipped
  CHECK_THROWS_AS(make_mesh(v, f), ValidationError);
}

TEST_CASE("nonmanifold edge is rejected") {
  Eigen::MatrixXd v(5, 3);
  v << 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0, 0.5, 0.5, 1;
  Eigen::MatrixXi f(3, 3);
  f << 0, 1, 2, 1, 3, 2, 1, 2, 4;
  CHECK_THROWS_AS(make_mesh(v, f), ValidationError);
}

TEST_CASE("unused vertex is rejected") {
  Eigen::MatrixXd v(4, 3);
  v << 0, 0, 0, 1, 0, 0, 0, 1, 0, 5, 5, 5;
  Eigen::MatrixXi f(1, 3);
  f << 0, 1, 2;
  CHECK_THROWS_AS(make_mesh(v, f), ValidationError);
}

TEST_CASE("degenerate triangle is rejected") {
  Eigen::MatrixXd v(4, 3);
  v << 0, 0, 0, 1, 0, 0, 2, 0, 0, 0, 1, 0;
  Eigen::MatrixXi f(2, 3);
  f << 0, 1, 3, 0, 1, 2;  // second has collinear vertices
  CHECK_THROWS_AS(make_mesh(v, f), DegenerateSimplex);
}

TEST_CASE("boundary of the disk is traversed counterclockwise") {
  Mesh m = make_disk(1.0, 3, 16);
  auto be = boundary_mesh(m);
  double area = boundary_signed_area_xy(be.boundary);
  CHECK(area == doctest::Approx(0.5 * 16 * std::sin(2 * pi / 16)).epsilon(1e-12));
}

TEST_CASE("annulus boundary traversal keeps the surface on the left") {
  Mesh m = make_annulus(1.0, 2.0, 2, 16);
  auto be = boundary_mesh(m);
  // outer circle counterclockwise, inner clockwise: net enclosed area is the ring
  double area = boundary_signed_area_xy(be.boundary);
  double outer = 0.5 * 16 * std::sin(2 * pi / 16) * 4.0;
  double inner = 0.5 * 16 * std::sin(2 * pi / 16);
  CHECK(area == doctest::Approx(outer - inner).epsilon(1e-12));
}

TEST_CASE("two component union keeps component ids ordered") {
  Mesh a = make_annulus(1.0, 2.0, 1, 8);
  int n = a.n_vertices();
  Eigen::MatrixXd v(2 * n, 3);
  v.topRows(n) = a.vertices;
  v.bottomRows(n) = a.vertices;
  v.bottomRows(n).col(0).array() += 10.0;
  Eigen::MatrixXi f(2 * a.n_cells(), 3);
  for (int c = 0; c < a.n_cells(); ++c) {
    int aa = a.cells(c, 0), bb = a.cells(c, 1), cc = a.cells(c, 2);
    if (a.cell_sign[c] < 0) std::swap(bb, cc);
    f.row(c) << aa, bb, cc;
    f.row(a.n_cells() + c) << aa + n, bb + n, cc + n;
  }
  Mesh u = make_mesh(v, f);
  CHECK(u.n_components == 2);
  CHECK(u.vertex_component[0] == 0);
  CHECK(u.vertex_component[n] == 1);
  CHECK(u.component_has_boundary[0] == 1);
  CHECK(u.component_has_boundary[1] == 1);
}

TEST_CASE("json round trip preserves structure") {
  Mesh m = make_annulus(1.0, 2.0, 2, 10);
  std::string text = mesh_to_json(m);
  Mesh r = mesh_from_json_text(text);
  CHECK(r.n_vertices() == m.n_vertices());
  CHECK(r.n_cells() == m.n_cells());
  CHECK((r.cells - m.cells).cwiseAbs().maxCoeff() == 0);
  CHECK((r.cell_sign - m.cell_sign).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("off round trip preserves structure") {
  Mesh m = make_disk(1.0, 2, 8);
  std::string text = mesh_to_off(m);
  Mesh r = mesh_from_off_text(text);
  CHECK(r.n_vertices() == m.n_vertices());
  CHECK(r.n_cells() == m.n_cells());
  CHECK((r.cells - m.cells).cwiseAbs().maxCoeff() == 0);
  CHECK((r.cell_sign - m.cell_sign).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("metric override changes areas") {
  std::string text = R"({
    "vertices": [[0,0],[1,0],[0,1]],
    "triangles": [[0,1,2]],
    "metric": [[4.0, 0.0, 4.0]]
  })";
  Mesh m = mesh_from_json_text(text);
  CHECK(m.area(0) == doctest::Approx(2.0));
  std::string bad = R"({
    "vertices": [[0,0],[1,0],[0,1]],
    "triangles": [[0,1,2]],
    "metric": [[1.0, 5.0, 1.0]]
  })";
  CHECK_THROWS_AS(mesh_from_json_text(bad), ValidationError);
}

TEST_CASE("builtin mesh specs parse") {
  CHECK_NOTHROW(builtin_mesh("annulus"));
  CHECK(builtin_mesh("annulus(1,2,3,12)").n_cells() == 2 * 3 * 12);
  CHECK_NOTHROW(builtin_mesh("sphere(1)"));
  CHECK_NOTHROW(builtin_mesh("cylinder_band(1,2,12,3)"));
  CHECK_NOTHROW(builtin_mesh("hemisphere_north(3,12)"));
  CHECK_THROWS_AS(builtin_mesh("moebius(3)"), ParseError);
  CHECK_THROWS_AS(builtin_mesh("annulus(1,2"), ParseError);
}

TEST_CASE("hemisphere equators coincide") {
  Mesh n = make_hemisphere(4, 16, true);
  Mesh s = make_hemisphere(4, 16, false);
  CHECK(n.boundary_vertex_ids.size() == 16);
  CHECK(s.boundary_vertex_ids.size() == 16);
  for (size_t i = 0; i < n.boundary_vertex_ids.size(); ++i) {
    Eigen::Vector3d pn = n.vertices.row(n.boundary_vertex_ids[i]);
    Eigen::Vector3d ps = s.vertices.row(s.boundary_vertex_ids[i]);
    CHECK((pn - ps).norm() < 1e-14);
    CHECK(std::abs(pn.z()) < 1e-14);
  }
}

}  // TEST_SUITE
