#pragma once

#include <Eigen/Dense>

#include "lens/calculus.hpp"

namespace lens {

struct BoundaryFunctionSplit {
  Eigen::VectorXd lg;          // weighted-mean-free over each surface component's whole boundary
  Eigen::VectorXd const_part;  // one joint constant per surface component
};

struct TangentialSplit {
  Eigen::VectorXd tangential;  // orthogonal to every gradient in the 1-form inner product
  Eigen::VectorXd potential;   // input = tangential + d(potential)
};

struct CoclosedSplit {
  Eigen::VectorXd coclosed;    // interior rows of d0^T M1 vanish
  Eigen::VectorXd potential;   // input = coclosed + d(potential), trace of potential = 0
};

// Scalar problems for the positive operator dstar d (minus the flat
// laplacian): on the unit disk with rho = 1 and zero trace the solution is
// close to (1 - r^2)/4.
//
// Dirichlet: trace phi = f, interior equation (dstar d phi)|int = rho|int.
// Components without boundary need component-wise compatible rho and get a
// zero-mean solution there.
Eigen::VectorXd solve_dirichlet(const BoundaryCalculus& c, const Eigen::VectorXd& rho,
                                const Eigen::VectorXd& f);

// Neumann: the weak problem <d phi, d psi> = <rho, psi> + <f, tr psi>_bnd for
// every psi. Solvable iff for each component the bulk charge cancels the
// boundary flux: <1, rho> + <1, f>_bnd = 0 within 1e-9 relative, else
// IncompatibleData. The returned representative has zero weighted mean on
// every component.
Eigen::VectorXd solve_neumann(const BoundaryCalculus& c, const Eigen::VectorXd& rho,
                              const Eigen::VectorXd& f);

// beta = tangential + d(alpha); exact reconstruction, orthogonality to all
// gradients at solver precision; alpha has zero weighted mean per component.
TangentialSplit tangential_hodge_helmholtz(const BoundaryCalculus& c, const Eigen::VectorXd& beta);

// a = coclosed + d(lambda) with trace lambda = 0; the interior rows of
// d0^T M1 applied to the coclosed part vanish, which makes the two pieces
// exactly orthogonal.
CoclosedSplit nontangential_hodge(const BoundaryCalculus& c, const Eigen::VectorXd& a);

BoundaryFunctionSplit split_boundary_function(const BoundaryCalculus& c, const Eigen::VectorXd& u);

// d of the Neumann potential with pure flux data h; requires h weighted-mean
// free per component (IncompatibleData otherwise). Its own natural flux
// reproduces h at solver precision and it is orthogonal to the tangential
// space.
Eigen::VectorXd minimal_coclosed_extension(const BoundaryCalculus& c, const Eigen::VectorXd& h);

// M1-orthonormal basis of the strictly tangential fields, the joint kernel of
// dstar and nml. Dense kernel computation; meshes beyond 4000 edges are
// rejected. Cached per calculus.
const Eigen::MatrixXd& tangential_coclosed_basis(const BoundaryCalculus& c);

// M1-orthonormal basis of ker(d0^T M1), the orthocomplement of all gradients
// (the space the tangential split projects onto). Same dense-size cap.
const Eigen::MatrixXd& tangential_space_basis(const BoundaryCalculus& c);

// B0-orthonormal basis of the boundary functions with zero joint weighted
// mean on each surface component's boundary.
const Eigen::MatrixXd& lg_space_basis(const BoundaryCalculus& c);

// Canonical harmonic potential with the same mean-free boundary data as the
// input potential. Idempotent at solver precision.
Eigen::VectorXd harmonic_representative(const BoundaryCalculus& c, const Eigen::VectorXd& alpha);

// Least-norm correction of e so the interior rows of d0^T M1 e + M0 rho
// vanish (the discrete Gauss constraint with source sign -dstar e = rho).
Eigen::VectorXd enforce_interior_gauss(const BoundaryCalculus& c, const Eigen::VectorXd& e,
                                       const Eigen::VectorXd& rho);

// Flux seen by the boundary pairing: B0^{-1} tr(d0^T M1 e + M0 rho). Equals
// nml e exactly when the strong constraint -dstar e = rho holds.
Eigen::VectorXd natural_flux(const BoundaryCalculus& c, const Eigen::VectorXd& e,
                             const Eigen::VectorXd& rho);

// Per-component charge spread uniformly over that component's boundary.
Eigen::VectorXd charge_offset(const BoundaryCalculus& c, const Eigen::VectorXd& rho);

}  // namespace lens
