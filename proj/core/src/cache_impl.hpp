#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "lens/calculus.hpp"

namespace lens {

// Solver state shared by everything downstream of a BoundaryCalculus.
// Built lazily under the lock; entries are immutable once set.
struct CalculusCache {
  std::recursive_mutex m;

  std::optional<SpMat> stiffness;  // d0^T M1 d0
  std::optional<SpMat> d0t_m1;

  // Dirichlet system: unknowns are interior vertices minus one pinned vertex
  // per component without boundary
  std::unique_ptr<Eigen::SimplicialLLT<SpMat>> dirichlet;
  std::vector<int> dir_unknowns;
  std::vector<int> dir_index;     // vertex -> unknown row, -1 if known
  std::vector<int> closed_pinned; // per component, -1 when it has boundary

  // Neumann system: one vertex pinned per component
  std::unique_ptr<Eigen::SimplicialLLT<SpMat>> neumann;
  std::vector<int> pinned_vertex;  // per component
  std::vector<int> reduced_index;  // vertex -> reduced row, -1 if pinned

  std::unique_ptr<Eigen::SimplicialLLT<SpMat>> m1_llt;

  std::optional<Eigen::MatrixXd> tangential_basis;  // ker(d0^T M1), M1-orthonormal
  std::optional<Eigen::MatrixXd> strict_basis;      // ker([dstar; nml]), M1-orthonormal
  std::optional<Eigen::MatrixXd> lg_basis;          // mean-free boundary functions, B0-orthonormal

  // spectrum of the boundary laplacian restricted to the mean-free space,
  // eigenvectors as boundary functions (columns), B0-orthonormal
  std::optional<Eigen::VectorXd> lg_eigenvalues;
  std::optional<Eigen::MatrixXd> lg_eigenvectors;

  // interior rows of d0^T M1 and the Cholesky of their Gram, for projecting
  // onto the weakly constrained space
  std::optional<SpMat> gauss_rows;
  std::vector<int> gauss_row_vertex;
  std::unique_ptr<Eigen::SimplicialLLT<SpMat>> gauss_gram;
};

}  // namespace lens
