#include "lens/states.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lens {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kMarginTol = 1e-10;
constexpr int kGramCap = 200;

// mu^{-1/2} through a symmetric eigensolve; rejects non positive spectra
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& mu) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mu);
  if (es.info() != Eigen::Success) throw EigensolveFailure("covariance eigensolve");
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (ev.size() > 0 && ev[0] <= 0.0)
    throw ValidationError("covariance must be positive definite");
  Eigen::VectorXd inv = ev.array().rsqrt();
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double domination_margin(const SpacePtr& space, const Eigen::MatrixXd& mu) {
  if (mu.rows() != space->dim || mu.cols() != space->dim)
    throw DimensionMismatch("covariance size");
  Eigen::MatrixXd is = inverse_sqrt(mu);
  Eigen::MatrixXd a = is * (0.5 * space->sigma) * is;
  if (a.rows() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  if (svd.info() != Eigen::Success) throw EigensolveFailure("margin singular values");
  return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

QuasiFreeState make_state(SpacePtr space, Eigen::MatrixXd mu) {
  return make_state(std::move(space), std::move(mu),
                    Eigen::VectorXd());
}

QuasiFreeState make_state(SpacePtr space, Eigen::MatrixXd mu, Eigen::VectorXd ell) {
  if (mu.rows() != space->dim || mu.cols() != space->dim)
    throw DimensionMismatch("covariance size");
  if (ell.size() == 0) ell = Eigen::VectorXd::Zero(space->dim);
  if (ell.size() != space->dim) throw DimensionMismatch("charge functional size");
  double scale = 1.0 + mu.cwiseAbs().maxCoeff();
  if ((mu - mu.transpose()).cwiseAbs().maxCoeff() > kSymTol * scale)
    throw ValidationError("covariance must be symmetric");
  double margin = domination_margin(space, mu);
  if (margin > 1.0 + kMarginTol)
    throw ValidationError("covariance does not dominate sigma/2");
  return QuasiFreeState{std::move(space), std::move(mu), std::move(ell)};
}

QuasiFreeState l2_state(SpacePtr space) {
  Eigen::MatrixXd mu = 0.5 * space->gram;
  return make_state(std::move(space), std::move(mu));
}

std::complex<double> evaluate(const QuasiFreeState& w, const WeylElement& a) {
  if (!same_space(w.space, a.space())) throw SpaceMismatch("evaluate");
  std::complex<double> out = 0.0;
  for (const auto& [label, t] : a.terms()) {
    double quad = t.v.dot(w.mu * t.v);
    std::complex<double> phase =
        std::exp(std::complex<double>(0.0, w.ell.dot(t.v)));
    out += t.c * phase * std::exp(-0.5 * quad);
  }
  return out;
}

double gram_min_eigenvalue(const QuasiFreeState& w,
                           const std::vector<Eigen::VectorXd>& labels) {
  const int n = static_cast<int>(labels.size());
  if (n > kGramCap) throw ValidationError("at most 200 labels");
  if (n == 0) return 0.0;
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j) {
    if (labels[j].size() != w.space->dim) throw DimensionMismatch("label size");
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd diff = labels[k] - labels[j];
      double quad = diff.dot(w.mu * diff);
      double arg = 0.5 * w.space->pair(labels[j], labels[k]) + w.ell.dot(diff);
      g(j, k) = std::exp(std::complex<double>(0.0, arg)) * std::exp(-0.5 * quad);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((g + g.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw EigensolveFailure("gram eigensolve");
  return es.eigenvalues()[0];
}

QuasiFreeState shifted_state(const QuasiFreeState& w, const Eigen::VectorXd& diff) {
  if (diff.size() != w.space->dim) throw DimensionMismatch("shift size");
  QuasiFreeState out = w;
  out.ell = w.ell + w.space->sigma * diff;
  return out;
}

}  // namespace lens
