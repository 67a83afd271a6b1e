#pragma once

#include <string>
#include <vector>

#include "lens/calculus.hpp"
#include "lens/hodge.hpp"

namespace lens {

// Cauchy data on a surface with boundary. `a` is stored as the unique
// coclosed representative of its gauge class; `e` satisfies the interior
// charge constraint against `rho` (see gauss_residual).
struct InitialData {
  Eigen::VectorXd a;    // edge field, vector potential class representative
  Eigen::VectorXd e;    // edge field, electric data
  Eigen::VectorXd rho;  // vertex field, charge density

  static InitialData zero(const BoundaryCalculus& c);
};

// max over interior vertices of |(d0^T M1 e + M0 rho)_v|, relative to the
// field scale. Zero (to solver tolerance) is the constraint surface.
double gauss_residual(const BoundaryCalculus& c, const Eigen::VectorXd& e,
                      const Eigen::VectorXd& rho);

// Canonicalizes a to its coclosed representative and checks the charge
// constraint (GaussViolation above 1e-8 relative). Pass enforce=true to
// project e onto the constraint surface instead of rejecting it.
InitialData make_initial_data(const BoundaryCalculus& c, Eigen::VectorXd a,
                              Eigen::VectorXd e, Eigen::VectorXd rho,
                              bool enforce = false);

// Canonical coordinates splitting Cauchy data into a bulk closed-loop sector
// (F, H: weakly tangential edge fields) and a surface sector (f, h: mean free
// boundary functions; h is the outward flux minus the per-component charge
// offset).
struct CHHCoords {
  Eigen::VectorXd F, H;  // edge fields
  Eigen::VectorXd f, h;  // boundary vertex functions

  static CHHCoords zero(const BoundaryCalculus& c);
};

CHHCoords chh_decompose(const BoundaryCalculus& c, const InitialData& data);

// Inverse of chh_decompose for the given charge density:
// chh_decompose(chh_reconstruct(x, rho)) = x to solver precision.
InitialData chh_reconstruct(const BoundaryCalculus& c, const CHHCoords& coords,
                            const Eigen::VectorXd& rho);

// Symplectic pairing of homogeneous (rho = 0) data differences:
// <a1, e2>_M1 - <a2, e1>_M1.
double sigma(const BoundaryCalculus& c, const InitialData& d1, const InitialData& d2);

// The same pairing in canonical coordinates:
// <F1,H2> - <F2,H1> + <f1,h2>_B0 - <f2,h1>_B0.
double sigma_cs(const BoundaryCalculus& c, const CHHCoords& x, const CHHCoords& y);

// (d Lambda, 0) where Lambda is the harmonic extension of lam. The mean part
// of lam per surface component is discarded (it generates nothing).
InitialData gauge_generator(const BoundaryCalculus& c, const Eigen::VectorXd& lam);

// Basis of the null space of sigma on the pre-reduced space (a unrestricted,
// e in the weak kernel): the gradients of interior-supported vertex bumps,
// one per interior vertex, skipping one redundant vertex per closed
// component.
std::vector<InitialData> radical_basis(const BoundaryCalculus& c);

// Boundary circle id for every boundary vertex. Circles are the connected
// components of the boundary, numbered by their smallest parent vertex id.
std::vector<int> boundary_circle_ids(const BoundaryCalculus& c);
int n_boundary_circles(const BoundaryCalculus& c);

// (d Lambda, 0) for the 0/1 profile that is 1 on the region nearest the
// selected circles. Pairs under sigma with any constrained e to the total
// outward flux through the selected circles. InvalidCut when the selection
// does not separate any component's circles or when the 0/1 transition
// touches the boundary star (no interior buffer).
InitialData flux_observable(const BoundaryCalculus& c, const std::vector<int>& circles);

// Edge ids carrying any coefficient of a or e above 1e-12 of the max.
std::vector<int> support_of(const BoundaryCalculus& c, const InitialData& data);

// support_of(data) contained in `edges` (sorted or not).
bool is_localised_in(const BoundaryCalculus& c, const InitialData& data,
                     const std::vector<int>& edges);

// Expand an edge set by everything sharing a triangle with it. Disjointness
// of supports is only symplectically meaningful after this buffer.
std::vector<int> one_ring_edges(const BoundaryCalculus& c, const std::vector<int>& edges);

std::string initial_data_to_json(const InitialData& data);
InitialData initial_data_from_json_text(const BoundaryCalculus& c, const std::string& text,
                                        bool enforce = false);
std::string chh_to_json(const CHHCoords& coords);
CHHCoords chh_from_json_text(const BoundaryCalculus& c, const std::string& text);

}  // namespace lens
