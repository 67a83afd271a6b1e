#include <cmath>
#include <complex>

#include "doctest.h"
#include "lens/hodge.hpp"
#include "lens/mesh.hpp"
#include "lens/relativize.hpp"
#include "lens/rng.hpp"
#include "lens/states.hpp"
#include "lens/weyl.hpp"
#include "weyl_testing.hpp"

using namespace lens;

namespace {

struct Frame {
  BoundaryCalculus c;
  ChhSpace s;
  ExtendedSpace x;
  Frame() : c(builtin_mesh("annulus(1,2,6,30)")), s(make_chh_space(c)), x(make_extended_space(s)) {}
};

Frame& frame() {
  static Frame f;
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("relativize");

TEST_CASE("gauge directions are isotropic and central") {
  auto& f = frame();
  CHECK(f.x.total->dim == f.s.space->dim + 2 * f.s.ns);
  auto gens = gauge_group_directions(f.x);
  CHECK(static_cast<int>(gens.size()) == f.s.ns);
  for (const auto& a : gens)
    for (const auto& b : gens) CHECK(f.x.total->pair(a, b) == 0.0);
  FixedPointSet inv = invariant_generators(f.x);
  CHECK(inv.basis.cols() == 2 * f.s.nc + 3 * f.s.ns);
  for (const auto& g : gens) CHECK(inv.contains(g));
}

TEST_CASE("relativisation is a bitwise homomorphism") {
  auto& f = frame();
  Rng rng(90);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd u = rng.vector(f.s.space->dim);
    Eigen::VectorXd v = rng.vector(f.s.space->dim);
    WeylElement lhs = multiply(relativise(f.x, generator(f.s.space, u)),
                               relativise(f.x, generator(f.s.space, v)));
    WeylElement rhs = relativise(f.x, multiply(generator(f.s.space, u),
                                               generator(f.s.space, v)));
    CHECK(exactly_equal(lhs, rhs));
  }
}

TEST_CASE("relativised elements are gauge invariant") {
  auto& f = frame();
  Rng rng(91);
  WeylElement a = WeylElement::zero(f.s.space);
  for (int k = 0; k < 3; ++k)
    a.add_term(rng.vector(f.s.space->dim),
               std::complex<double>(rng.symmetric(), rng.symmetric()));
  WeylElement ra = relativise(f.x, a);
  CHECK(is_invariant(f.x, ra));
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXd lam = rng.vector(f.c.n_bvertices());
    CHECK(approx_equal(joint_large_gauge(f.x, ra, lam), ra, 1e-9, 1e-12));
  }
  CHECK(!is_invariant(f.x, generator(f.x.total, rng.vector(f.x.total->dim))));
}

TEST_CASE("gauge unitaries are central among invariants") {
  auto& f = frame();
  Rng rng(92);
  Eigen::VectorXd lam = rng.vector(f.s.ns);
  WeylElement ug = generator(f.x.total, gauge_direction(f.x, lam));
  CHECK(is_invariant(f.x, ug));
  WeylElement ra = relativise(f.x, generator(f.s.space, rng.vector(f.s.space->dim)));
  CHECK(approx_equal(multiply(ug, ra), multiply(ra, ug), 1e-9, 1e-12));
}

TEST_CASE("gamma inverts the embedding and kills the gauge unitaries") {
  auto& f = frame();
  Rng rng(93);
  WeylElement a = WeylElement::zero(f.s.space);
  for (int k = 0; k < 4; ++k)
    a.add_term(rng.vector(f.s.space->dim),
               std::complex<double>(rng.symmetric(), rng.symmetric()));
  CHECK(exactly_equal(gamma(f.x, relativise(f.x, a)), a));
  Eigen::VectorXd lam = rng.vector(f.s.ns);
  WeylElement ug = generator(f.x.total, gauge_direction(f.x, lam));
  CHECK(exactly_equal(gamma(f.x, ug), WeylElement::unit(f.s.space)));
  // multiplicative on mixed invariant products
  WeylElement g1 = multiply(relativise(f.x, generator(f.s.space, rng.vector(f.s.space->dim))),
                            generator(f.x.total, gauge_direction(f.x, rng.vector(f.s.ns))));
  WeylElement g2 = multiply(relativise(f.x, generator(f.s.space, rng.vector(f.s.space->dim))),
                            generator(f.x.total, gauge_direction(f.x, rng.vector(f.s.ns))));
  CHECK(approx_equal(gamma(f.x, multiply(g1, g2)), multiply(gamma(f.x, g1), gamma(f.x, g2)),
                     1e-9, 1e-12));
}

TEST_CASE("gauge fixing is idempotent and guarded") {
  auto& f = frame();
  Rng rng(94);
  WeylElement g = multiply(relativise(f.x, generator(f.s.space, rng.vector(f.s.space->dim))),
                           generator(f.x.total, gauge_direction(f.x, rng.vector(f.s.ns))));
  WeylElement fixed = gauge_fix(f.x, g);
  CHECK(exactly_equal(gauge_fix(f.x, fixed), fixed));
  CHECK_THROWS_AS(gauge_fix(f.x, generator(f.x.total, rng.vector(f.x.total->dim))),
                  NotInvariant);
  CHECK_THROWS_AS(gamma(f.x, generator(f.x.total, rng.vector(f.x.total->dim))),
                  NotInvariant);
}

TEST_CASE("embedded generators factor against frame translations") {
  auto& f = frame();
  Rng rng(95);
  const int nb = f.s.space->dim;
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXd u = rng.vector(nb);
    Eigen::VectorXd fu = u.segment(2 * f.s.nc, f.s.ns);
    Eigen::VectorXd hu = u.segment(2 * f.s.nc + f.s.ns, f.s.ns);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(f.x.total->dim);
    y.segment(nb, f.s.ns) = fu;
    WeylElement lhs = multiply(relativise(f.x, generator(f.s.space, u)),
                               generator(f.x.total, y));
    Eigen::VectorXd full = embed_with_dressing(f.x, u);
    full.segment(nb, f.s.ns) = fu;
    WeylElement rhs = scale(std::exp(std::complex<double>(0.0, -0.5 * fu.dot(hu))),
                            generator(f.x.total, full));
    CHECK(approx_equal(lhs, rhs, 1e-9, 1e-12));
  }
}

TEST_CASE("frame orientations appear as phases on gauge unitaries") {
  auto& f = frame();
  Rng rng(96);
  QuasiFreeState w = l2_state(f.s.space);
  Eigen::VectorXd phi1 = rng.vector(f.s.ns);
  Eigen::VectorXd phi2 = rng.vector(f.s.ns);
  bool separated = false;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd lam = rng.vector(f.s.ns);
    WeylElement ug = generator(f.x.total, gauge_direction(f.x, lam));
    std::complex<double> v1 = evaluate(w, gamma_phi(f.x, ug, phi1));
    std::complex<double> v2 = evaluate(w, gamma_phi(f.x, ug, phi2));
    CHECK(std::abs(v1 - std::exp(std::complex<double>(0.0, phi1.dot(lam)))) < 1e-10);
    CHECK(std::abs(v2 - std::exp(std::complex<double>(0.0, phi2.dot(lam)))) < 1e-10);
    if (std::abs(v1 - v2) > 1e-3) separated = true;
  }
  CHECK(separated);
  // zero orientation reduces to gamma
  WeylElement ra = relativise(f.x, generator(f.s.space, rng.vector(f.s.space->dim)));
  CHECK(exactly_equal(gamma_phi(f.x, ra, Eigen::VectorXd::Zero(f.s.ns)), gamma(f.x, ra)));
}

TEST_CASE("boundary spectrum is ascending with the expected kernel") {
  auto& f = frame();
  Eigen::VectorXd theta = angular_spectrum(f.c);
  CHECK(theta.size() == f.s.ns);
  for (int i = 1; i < theta.size(); ++i) CHECK(theta[i] >= theta[i - 1]);
  double top = theta[theta.size() - 1];
  // two circles support one mean-free locally constant function
  CHECK(theta[0] < 1e-9 * (1.0 + top));
  CHECK(theta[1] > 1e-6);
  Eigen::VectorXd again = angular_spectrum(f.c);
  CHECK((again - theta).cwiseAbs().maxCoeff() == 0.0);

  BoundaryCalculus disk(builtin_mesh("disk(1,5,16)"));
  Eigen::VectorXd dtheta = angular_spectrum(disk);
  CHECK(dtheta[0] > 1e-6);
}

TEST_CASE("truncation reaches the full dressing and shrinks monotonically") {
  auto& f = frame();
  Rng rng(97);
  Eigen::VectorXd theta = angular_spectrum(f.c);
  double top = theta[theta.size() - 1];
  WeylElement a = generator(f.s.space, rng.vector(f.s.space->dim));
  CHECK(exactly_equal(truncated_relativise(f.x, a, top), relativise(f.x, a)));
  CHECK(exactly_equal(truncated_relativise(f.x, a, 2.0 * top), relativise(f.x, a)));
  CHECK_THROWS_AS(truncated_relativise(f.x, a, -1.0), ValidationError);

  Eigen::VectorXd h = rng.vector(f.s.ns);
  double prev = -1.0;
  bool decreased = false;
  for (double cut : {0.0, theta[theta.size() / 4], theta[theta.size() / 2],
                     theta[3 * theta.size() / 4], top}) {
    Eigen::MatrixXd pi = angular_projector(f.c, cut);
    double err = (h - pi * h).norm();
    if (prev >= 0.0) {
      CHECK(err <= prev + 1e-12);
      if (err < prev - 1e-12) decreased = true;
    }
    prev = err;
  }
  CHECK(decreased);
  CHECK(prev < 1e-9);  // the full projector keeps everything

  // at zero cutoff only the locally constant direction survives
  Eigen::MatrixXd pi0 = angular_projector(f.c, 0.0);
  CHECK(std::abs(pi0.trace() - 1.0) < 1e-8);
}

TEST_SUITE_END();
