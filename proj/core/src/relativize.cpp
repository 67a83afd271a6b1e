#include "lens/relativize.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "lens/hodge.hpp"
#include "cache_impl.hpp"

namespace lens {

namespace {

constexpr double kSpectrumTol = 1e-9;

void ensure_spectrum(const BoundaryCalculus& c, CalculusCache& k) {
  if (k.lg_eigenvalues) return;
  Eigen::MatrixXd q = lg_space_basis(c);
  // Dirichlet form of the boundary laplacian reduced to the mean-free basis;
  // the basis is B0-orthonormal so this is a standard eigenproblem
  SpMat grad = c.d_bnd;
  Eigen::MatrixXd dq = grad * q;
  Eigen::MatrixXd a =
      dq.transpose() * c.seg_len.cwiseInverse().asDiagonal() * dq;
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw EigensolveFailure("boundary laplacian");
  k.lg_eigenvalues = es.eigenvalues();
  k.lg_eigenvectors = q * es.eigenvectors();
}

Eigen::VectorXd lam_to_coords(const ExtendedSpace& x, const Eigen::VectorXd& lam) {
  const BoundaryCalculus& c = *x.bulk->calc;
  if (lam.size() != c.n_bvertices()) throw MeshMismatch("gauge function size");
  return x.bulk->lg.transpose() * lam.cwiseProduct(c.b0);
}

}  // namespace

ExtendedSpace make_extended_space(const ChhSpace& bulk) {
  ExtendedSpace x;
  x.bulk = &bulk;
  x.nc = bulk.nc;
  x.ns = bulk.ns;
  const int ns = bulk.ns;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2 * ns, 2 * ns);
  sigma.topRightCorner(ns, ns) = Eigen::MatrixXd::Identity(ns, ns);
  sigma.bottomLeftCorner(ns, ns) = -Eigen::MatrixXd::Identity(ns, ns);
  x.surface = make_symplectic_space("frame", sigma);
  x.total = direct_sum(bulk.space, x.surface);
  return x;
}

Eigen::VectorXd gauge_direction(const ExtendedSpace& x, const Eigen::VectorXd& lam_coords) {
  if (lam_coords.size() != x.ns) throw DimensionMismatch("gauge coordinates");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.total->dim);
  g.segment(2 * x.nc, x.ns) = lam_coords;                 // bulk f slot
  g.segment(2 * x.nc + 2 * x.ns, x.ns) = lam_coords;      // surface phi slot
  return g;
}

Eigen::VectorXd gauge_direction_of(const ExtendedSpace& x, const Eigen::VectorXd& lam) {
  return gauge_direction(x, lam_to_coords(x, lam));
}

std::vector<Eigen::VectorXd> gauge_group_directions(const ExtendedSpace& x) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(x.ns);
  for (int j = 0; j < x.ns; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(x.ns);
    e[j] = 1.0;
    out.push_back(gauge_direction(x, e));
  }
  return out;
}

Eigen::VectorXd embed_with_dressing(const ExtendedSpace& x, const Eigen::VectorXd& v) {
  const int nb = x.bulk->space->dim;
  if (v.size() != nb) throw DimensionMismatch("bulk vector");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.total->dim);
  out.head(nb) = v;
  out.segment(nb + x.ns, x.ns) = -v.segment(2 * x.nc + x.ns, x.ns);
  return out;
}

WeylElement relativise(const ExtendedSpace& x, const WeylElement& bulk) {
  if (!same_space(bulk.space(), x.bulk->space)) throw SpaceMismatch("relativise");
  WeylElement out = WeylElement::zero(x.total);
  for (const auto& [label, t] : bulk.terms())
    out.add_term(embed_with_dressing(x, t.v), t.c);
  return out;
}

WeylElement joint_large_gauge(const ExtendedSpace& x, const WeylElement& a,
                              const Eigen::VectorXd& lam) {
  if (!same_space(a.space(), x.total)) throw SpaceMismatch("joint large gauge");
  return background_shift(a, gauge_direction_of(x, lam));
}

FixedPointSet invariant_generators(const ExtendedSpace& x) {
  return fixed_point_generators(x.total, gauge_group_directions(x));
}

bool is_invariant(const ExtendedSpace& x, const WeylElement& a, double tol) {
  if (!same_space(a.space(), x.total)) throw SpaceMismatch("is_invariant");
  std::vector<Eigen::VectorXd> gens = gauge_group_directions(x);
  for (const auto& [label, t] : a.terms()) {
    double scale = 1.0 + x.total->norm(t.v);
    for (const auto& g : gens)
      if (std::abs(x.total->pair(g, t.v)) > tol * scale) return false;
  }
  return true;
}

namespace {

// the dressed part and gauge part of an invariant label, with the regrouping
// phase; throws if the label fails to commute with the gauge directions
struct SplitLabel {
  Eigen::VectorXd dressed;  // embed_with_dressing of the bulk residue
  Eigen::VectorXd bulk;     // the residue itself
  std::complex<double> phase;
};

SplitLabel split_invariant(const ExtendedSpace& x, const Eigen::VectorXd& v, double tol) {
  const int nb = x.bulk->space->dim;
  double scale = 1.0 + x.total->norm(v);
  for (const auto& g : gauge_group_directions(x))
    if (std::abs(x.total->pair(g, v)) > tol * scale)
      throw NotInvariant("label pairs with a gauge direction");
  Eigen::VectorXd phi = v.segment(nb, x.ns);
  Eigen::VectorXd u = v.head(nb);
  u.segment(2 * x.nc, x.ns) -= phi;
  SplitLabel s;
  s.bulk = u;
  s.dressed = embed_with_dressing(x, u);
  // W(v) = phase * W(dressed) * W(gauge(phi)); the exponent vanishes
  // identically, so this only tracks rounding
  s.phase = std::exp(std::complex<double>(
      0.0, 0.5 * x.total->pair(s.dressed, gauge_direction(x, phi))));
  return s;
}

}  // namespace

WeylElement gauge_fix(const ExtendedSpace& x, const WeylElement& a) {
  if (!same_space(a.space(), x.total)) throw SpaceMismatch("gauge_fix");
  WeylElement out = WeylElement::zero(x.total);
  for (const auto& [label, t] : a.terms()) {
    SplitLabel s = split_invariant(x, t.v, 1e-9);
    out.add_term(s.dressed, t.c * s.phase);
  }
  return out;
}

WeylElement gamma(const ExtendedSpace& x, const WeylElement& a) {
  if (!same_space(a.space(), x.total)) throw SpaceMismatch("gamma");
  WeylElement out = WeylElement::zero(x.bulk->space);
  for (const auto& [label, t] : a.terms()) {
    SplitLabel s = split_invariant(x, t.v, 1e-9);
    out.add_term(s.bulk, t.c * s.phase);
  }
  return out;
}

WeylElement gamma_phi(const ExtendedSpace& x, const WeylElement& a,
                      const Eigen::VectorXd& phi) {
  if (phi.size() != x.ns) throw DimensionMismatch("frame orientation");
  Eigen::VectorXd bg = Eigen::VectorXd::Zero(x.total->dim);
  bg.tail(x.ns) = phi;  // surface tau slot
  return gamma(x, background_shift(a, bg));
}

Eigen::VectorXd angular_spectrum(const BoundaryCalculus& c) {
  CalculusCache& k = c.cache();
  std::lock_guard<std::recursive_mutex> lock(k.m);
  ensure_spectrum(c, k);
  return *k.lg_eigenvalues;
}

Eigen::MatrixXd angular_projector(const BoundaryCalculus& c, double mu_cut) {
  CalculusCache& k = c.cache();
  std::lock_guard<std::recursive_mutex> lock(k.m);
  ensure_spectrum(c, k);
  const Eigen::VectorXd& theta = *k.lg_eigenvalues;
  const int ns = static_cast<int>(theta.size());
  // eigenvectors back in mean-free coordinates
  Eigen::MatrixXd u =
      lg_space_basis(c).transpose() * c.b0.asDiagonal() * (*k.lg_eigenvectors);
  double top = ns > 0 ? theta[ns - 1] : 0.0;
  Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(ns, ns);
  for (int i = 0; i < ns; ++i)
    if (theta[i] <= mu_cut + kSpectrumTol * (1.0 + std::abs(top)))
      pi += u.col(i) * u.col(i).transpose();
  return pi;
}

WeylElement truncated_relativise(const ExtendedSpace& x, const WeylElement& bulk,
                                 double mu_cut) {
  if (mu_cut < 0.0) throw ValidationError("cutoff must be nonnegative");
  if (!same_space(bulk.space(), x.bulk->space)) throw SpaceMismatch("truncated relativise");
  const BoundaryCalculus& c = *x.bulk->calc;
  Eigen::VectorXd theta = angular_spectrum(c);
  if (theta.size() == 0 || mu_cut >= theta[theta.size() - 1]) return relativise(x, bulk);
  Eigen::MatrixXd pi = angular_projector(c, mu_cut);
  const int nb = x.bulk->space->dim;
  WeylElement out = WeylElement::zero(x.total);
  for (const auto& [label, t] : bulk.terms()) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(x.total->dim);
    v.head(nb) = t.v;
    v.segment(nb + x.ns, x.ns) = -(pi * t.v.segment(2 * x.nc + x.ns, x.ns));
    out.add_term(v, t.c);
  }
  return out;
}

}  // namespace lens
