#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "lens/weyl.hpp"

namespace lens {

// Gaussian state functional on a Weyl algebra: a generator W(v) evaluates to
// exp(i ell . v) exp(-v' mu v / 2).  ell is a linear charge functional and mu
// a covariance that must dominate sigma/2.
struct QuasiFreeState {
  SpacePtr space;
  Eigen::MatrixXd mu;
  Eigen::VectorXd ell;
};

// largest singular value of mu^{-1/2} (sigma/2) mu^{-1/2}; at most one for a
// positive state
double domination_margin(const SpacePtr& space, const Eigen::MatrixXd& mu);

// validated construction: mu symmetric positive definite and dominating
QuasiFreeState make_state(SpacePtr space, Eigen::MatrixXd mu);
QuasiFreeState make_state(SpacePtr space, Eigen::MatrixXd mu, Eigen::VectorXd ell);

// covariance gram/2, saturating the domination bound on symplectically
// orthonormal coordinates
QuasiFreeState l2_state(SpacePtr space);

std::complex<double> evaluate(const QuasiFreeState& w, const WeylElement& a);

// minimum eigenvalue of the positivity Gram matrix on the given labels
// (at most 200 of them)
double gram_min_eigenvalue(const QuasiFreeState& w, const std::vector<Eigen::VectorXd>& labels);

// the state composed with a background shift by diff: same covariance, the
// charge functional gains sigma(. , diff)
QuasiFreeState shifted_state(const QuasiFreeState& w, const Eigen::VectorXd& diff);

}  // namespace lens
