#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lens/errors.hpp"

namespace lens {

// Oriented simplicial mesh of dimension 2 (a surface with boundary) or 1 (a
// disjoint union of circles), with vertex coordinates in R^3. Top cells are
// stored with ascending vertex indices; orientation is a separate sign
// relative to that ascending order, so combinatorics stay integer exact.
struct Mesh {
  int dim = 2;
  Eigen::MatrixXd vertices;      // n_v x 3
  Eigen::MatrixXi cells;         // n_c x (dim+1), ascending per row
  Eigen::VectorXi cell_sign;     // +1 / -1 per cell

  // Optional per-triangle metric override: Gram matrix of the chart spanned
  // by (p1-p0, p2-p0). Empty means the metric induced by the embedding.
  std::vector<Eigen::Matrix2d> metric;
  // dim 1 only: per-segment lengths when inherited from a parent override.
  std::vector<double> seg_length;

  // derived connectivity, built by finalize()
  Eigen::MatrixXi edges;          // n_e x 2 ascending pairs, lexicographic order
  Eigen::MatrixXi cell_edges;     // dim 2: n_c x 3, edge ids for local pairs (01,02,12)
  Eigen::MatrixXi cell_edge_dir;  // dim 2: traversal sign of the oriented cell over each ascending edge
  std::vector<int> boundary_edge_ids;
  std::vector<int> boundary_vertex_ids;  // ascending
  std::vector<char> on_boundary;         // per vertex
  std::vector<int> bnd_edge_dir;         // per boundary edge id in boundary_edge_ids order: +1 if the induced traversal runs low->high
  std::vector<int> vertex_component;     // component ids, ordered by smallest member vertex
  int n_components = 0;
  std::vector<char> component_has_boundary;

  int n_vertices() const { return static_cast<int>(vertices.rows()); }
  int n_cells() const { return static_cast<int>(cells.rows()); }
  int n_edges() const { return static_cast<int>(edges.rows()); }

  Eigen::Matrix2d gram(int t) const;   // dim 2 chart Gram for cell t
  double area(int t) const;
  double edge_length_in(int t, int la, int lb) const;  // local vertex slots 0..2
  double segment_length(int s) const;  // dim 1
  double length_scale() const;         // max edge length over the mesh

  int euler_characteristic() const;
  double total_area() const;

  // Builds derived data and validates: ascending cell rows, no repeated or
  // out-of-range indices, every vertex used, each edge in at most two
  // triangles, opposite traversal across interior edges, closed oriented
  // boundary, nondegenerate cells. Throws ValidationError / DegenerateSimplex.
  void finalize();
};

// Rows of `cells_as_given` carry orientation through vertex order.
Mesh make_mesh(const Eigen::MatrixXd& vertices, const Eigen::MatrixXi& cells_as_given, int dim = 2);

struct BoundaryExtraction {
  Mesh boundary;                // dim 1, oriented by the induced traversal
  std::vector<int> vertex_map;  // boundary vertex -> parent vertex
  std::vector<int> edge_map;    // boundary segment -> parent edge id
};
BoundaryExtraction boundary_mesh(const Mesh& m);

Mesh load_mesh(const std::string& path);  // dispatches on extension: .off / .json
Mesh mesh_from_off_text(const std::string& text);
Mesh mesh_from_json_text(const std::string& text);
std::string mesh_to_json(const Mesh& m);
std::string mesh_to_off(const Mesh& m);

Mesh make_annulus(double r_in, double r_out, int n_radial, int n_angular);
Mesh make_disk(double radius, int n_radial, int n_angular);
Mesh make_sphere(int subdivisions, double radius = 1.0);
Mesh make_cylinder_band(double radius, double height, int n_angular, int n_axial);
Mesh make_hemisphere(int n_polar, int n_angular, bool north = true, double radius = 1.0);

// "annulus", "annulus(1,2,12,60)", "disk(1,10,40)", "sphere(3)",
// "cylinder_band(1,2,40,8)", "hemisphere_north(8,40)", ...
Mesh builtin_mesh(const std::string& spec);

}  // namespace lens
