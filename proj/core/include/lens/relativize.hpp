#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lens/weyl.hpp"

namespace lens {

// The bulk corner coordinates extended by an abstract reference frame carried
// on the boundary: surface coordinates (phi, tau) with
// sigma((phi,tau),(phi',tau')) = phi.tau' - phi'.tau, both blocks living on
// the mean-free boundary basis of the bulk space.
struct ExtendedSpace {
  const ChhSpace* bulk = nullptr;
  SpacePtr surface;
  SpacePtr total;
  int nc = 0;
  int ns = 0;
};

ExtendedSpace make_extended_space(const ChhSpace& bulk);

// joint gauge direction: bulk slot (0,0,lam,0) together with surface (lam,0)
Eigen::VectorXd gauge_direction(const ExtendedSpace& x, const Eigen::VectorXd& lam_coords);
// the same from a boundary function
Eigen::VectorXd gauge_direction_of(const ExtendedSpace& x, const Eigen::VectorXd& lam);
// one joint gauge direction per mean-free basis vector
std::vector<Eigen::VectorXd> gauge_group_directions(const ExtendedSpace& x);

// dressing embedding: v -> (v; 0, -h(v)).  Its image commutes with every
// joint gauge direction.
Eigen::VectorXd embed_with_dressing(const ExtendedSpace& x, const Eigen::VectorXd& v);

// algebra embedding along the dressing, no phase
WeylElement relativise(const ExtendedSpace& x, const WeylElement& bulk);

// gauge action on the extended algebra
WeylElement joint_large_gauge(const ExtendedSpace& x, const WeylElement& a,
                              const Eigen::VectorXd& lam);

FixedPointSet invariant_generators(const ExtendedSpace& x);
bool is_invariant(const ExtendedSpace& x, const WeylElement& a, double tol = 1e-9);

// move each invariant label to its dressed representative by removing the
// pure gauge part; idempotent, throws NotInvariant otherwise
WeylElement gauge_fix(const ExtendedSpace& x, const WeylElement& a);

// conditional expectation back to the bulk algebra: inverts relativise and
// kills the gauge unitaries
WeylElement gamma(const ExtendedSpace& x, const WeylElement& a);

// gamma twisted by a frame orientation Phi (mean-free coordinates): gauge
// unitaries map to the phase e^{i <Phi, lam>}
WeylElement gamma_phi(const ExtendedSpace& x, const WeylElement& a, const Eigen::VectorXd& phi);

// spectrum of the boundary laplacian on the mean-free space, ascending
Eigen::VectorXd angular_spectrum(const BoundaryCalculus& c);

// projector in mean-free coordinates onto the modes with eigenvalue <= mu_cut
Eigen::MatrixXd angular_projector(const BoundaryCalculus& c, double mu_cut);

// relativise with the dressing cut off above angular scale mu_cut; identical
// to relativise once mu_cut reaches the top of the spectrum
WeylElement truncated_relativise(const ExtendedSpace& x, const WeylElement& bulk, double mu_cut);

}  // namespace lens
