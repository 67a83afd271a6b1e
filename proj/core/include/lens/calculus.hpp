#pragma once

#include <memory>
#include <mutex>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lens/mesh.hpp"

namespace lens {

struct Cochain {
  int degree = 0;
  Eigen::VectorXd values;
};

using SpMat = Eigen::SparseMatrix<double>;

struct CalculusCache;  // lazily built solver state, defined with the solvers

// Discrete exterior calculus on an oriented surface mesh with boundary.
// Conventions:
//   d0, d1     integer incidence matrices, d1 * d0 = 0 exactly;
//   M0         lumped vertex masses, M1 the Whitney 1-form Gram matrix,
//   M2         diag(1/area);
//   tr         boundary vertex selection, B0 boundary lumped masses,
//   B1         diag(1/length) on boundary segments;
//   nml        least-squares outward component of a 1-cochain at boundary
//              vertices, built by unfolding the incident triangle fan;
//   dstar      M0^{-1} (d0^T M1 - tr^T B0 nml).
// The last definition makes the Green identity
//   <d u, b>_1 - <u, dstar b>_0 = <tr u, nml b>_B0
// hold exactly, with dstar acting as minus the metric divergence: on a flat
// annulus dstar(dr) is approximately -1/r while nml(dr) is +1 on the outer
// circle and -1 on the inner one.
class BoundaryCalculus {
 public:
  explicit BoundaryCalculus(Mesh m);
  BoundaryCalculus(const BoundaryCalculus&) = delete;
  BoundaryCalculus& operator=(const BoundaryCalculus&) = delete;

  Mesh mesh;
  Mesh boundary;                      // dim-1 mesh of the boundary circles
  std::vector<int> bvertex_to_vertex; // boundary-mesh vertex -> mesh vertex
  std::vector<int> bsegment_to_edge;  // boundary segment -> mesh edge id
  std::vector<int> vertex_to_bvertex; // -1 for interior vertices
  std::vector<int> interior_vertex_ids;

  SpMat d0, d1;
  Eigen::VectorXd m0;       // M0 diagonal
  SpMat M1;
  Eigen::VectorXd m2;       // M2 diagonal, 1/area
  SpMat tr;
  Eigen::VectorXd b0;       // B0 diagonal
  SpMat d_bnd;              // boundary coboundary, segments x boundary vertices
  Eigen::VectorXd seg_len;  // B1 = diag(1/seg_len)
  SpMat nml;
  SpMat dstar1;             // vertices x edges
  SpMat dstar_bnd;          // B0^{-1} d_bnd^T B1

  int n_vertices() const { return mesh.n_vertices(); }
  int n_edges() const { return mesh.n_edges(); }
  int n_cells() const { return mesh.n_cells(); }
  int n_bvertices() const { return static_cast<int>(bvertex_to_vertex.size()); }
  int n_bsegments() const { return static_cast<int>(bsegment_to_edge.size()); }

  Cochain d(const Cochain& c) const;
  Cochain dstar(const Cochain& c) const;        // degree 1 only
  Cochain trace(const Cochain& c) const;        // degree 0 -> boundary 0-cochain
  Cochain normal(const Cochain& c) const;       // degree 1 -> boundary 0-cochain
  Cochain d_boundary(const Cochain& c) const;   // boundary 0 -> boundary 1
  Cochain dstar_boundary(const Cochain& c) const;

  double inner(const Cochain& a, const Cochain& b) const;           // bulk, by degree
  double inner_boundary(const Cochain& a, const Cochain& b) const;  // boundary, by degree

  // relative defect of the Green identity for one (u, b) pair
  double green_residual(const Eigen::VectorXd& u, const Eigen::VectorXd& b) const;

  // named operator export; names: d0 d1 M0 M1 M2 tr B0 B1 d_bnd nml dstar dstar_bnd
  SpMat named_operator(const std::string& name) const;

  CalculusCache& cache() const;

 private:
  void assemble();
  mutable std::mutex cache_mutex_;
  mutable std::shared_ptr<CalculusCache> cache_;
};

void write_matrix_market(const SpMat& m, const std::string& path);
void write_matrix_market_dense(const Eigen::MatrixXd& m, const std::string& path);
Eigen::MatrixXd read_matrix_market_dense(const std::string& path);

}  // namespace lens
