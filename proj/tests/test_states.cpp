#include <complex>
#include <filesystem>

#include "doctest.h"
#include "lens/hodge.hpp"
#include "lens/mesh.hpp"
#include "lens/rng.hpp"
#include "lens/states.hpp"
#include "lens/weyl.hpp"

using namespace lens;

namespace {

SpacePtr standard_space(int npairs) {
  const int n = 2 * npairs;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
  sigma.topRightCorner(npairs, npairs) = Eigen::MatrixXd::Identity(npairs, npairs);
  sigma.bottomLeftCorner(npairs, npairs) = -Eigen::MatrixXd::Identity(npairs, npairs);
  return make_symplectic_space("std", sigma);
}

}  // namespace

TEST_SUITE_BEGIN("states");

TEST_CASE("minimal covariance saturates the domination bound") {
  SpacePtr s = standard_space(3);
  QuasiFreeState w = l2_state(s);
  double m = domination_margin(s, w.mu);
  CHECK(std::abs(m - 1.0) < 1e-12);
  CHECK(m <= 1.0 + 1e-10);
  CHECK(evaluate(w, WeylElement::unit(s)) == std::complex<double>(1.0, 0.0));
  CHECK(evaluate(w, WeylElement::zero(s)) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("undersized covariances are rejected with the right margin") {
  SpacePtr s = standard_space(2);
  Eigen::MatrixXd mu = 0.4 * (0.5 * Eigen::MatrixXd::Identity(4, 4));
  CHECK(std::abs(domination_margin(s, mu) - 2.5) < 1e-10);
  CHECK_THROWS_AS(make_state(s, mu), ValidationError);
  Eigen::MatrixXd indef = Eigen::MatrixXd::Identity(4, 4);
  indef(3, 3) = -1.0;
  CHECK_THROWS_AS(make_state(s, indef), ValidationError);
  Eigen::MatrixXd asym = 0.5 * Eigen::MatrixXd::Identity(4, 4);
  asym(0, 1) = 0.1;
  CHECK_THROWS_AS(make_state(s, asym), ValidationError);
}

TEST_CASE("enlarged covariances keep dominating") {
  SpacePtr s = standard_space(3);
  Rng rng(80);
  Eigen::VectorXd dir = rng.vector(6);
  Eigen::MatrixXd mu = 0.5 * Eigen::MatrixXd::Identity(6, 6) + 0.4 * dir * dir.transpose();
  QuasiFreeState w = make_state(s, mu);
  CHECK(domination_margin(s, w.mu) <= 1.0 + 1e-10);
  std::vector<Eigen::VectorXd> labels;
  for (int i = 0; i < 20; ++i) labels.push_back(rng.vector(6));
  CHECK(gram_min_eigenvalue(w, labels) >= -1e-10);
}

TEST_CASE("evaluation respects the star structure") {
  SpacePtr s = standard_space(2);
  Rng rng(81);
  QuasiFreeState w = l2_state(s);
  WeylElement a = WeylElement::zero(s);
  for (int k = 0; k < 4; ++k)
    a.add_term(rng.vector(4), std::complex<double>(rng.symmetric(), rng.symmetric()));
  std::complex<double> v1 = evaluate(w, a);
  std::complex<double> v2 = evaluate(w, star(a));
  CHECK(std::abs(v2 - std::conj(v1)) < 1e-14);
}

TEST_CASE("products factorize through the covariance cross term") {
  SpacePtr s = standard_space(3);
  Rng rng(82);
  QuasiFreeState w = l2_state(s);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd u = rng.vector(6);
    Eigen::VectorXd v = rng.vector(6);
    std::complex<double> lhs = evaluate(w, multiply(generator(s, u), generator(s, v)));
    std::complex<double> rhs = evaluate(w, generator(s, u)) * evaluate(w, generator(s, v)) *
                               std::exp(std::complex<double>(0.0, -0.5 * s->pair(u, v))) *
                               std::exp(-u.dot(w.mu * v));
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("positivity gram stays nonnegative for the minimal state") {
  SpacePtr s = standard_space(2);
  Rng rng(83);
  QuasiFreeState w = l2_state(s);
  std::vector<Eigen::VectorXd> labels;
  for (int i = 0; i < 20; ++i) labels.push_back(3.0 * rng.vector(4));
  CHECK(gram_min_eigenvalue(w, labels) >= -1e-10);
  std::vector<Eigen::VectorXd> too_many(201, Eigen::VectorXd::Zero(4));
  CHECK_THROWS_AS(gram_min_eigenvalue(w, too_many), ValidationError);
}

TEST_CASE("charge functionals shift under conjugation") {
  SpacePtr s = standard_space(3);
  Rng rng(84);
  Eigen::VectorXd diff = rng.vector(6);
  QuasiFreeState w = make_state(s, 0.5 * Eigen::MatrixXd::Identity(6, 6), rng.vector(6));
  QuasiFreeState ws = shifted_state(w, diff);
  for (int trial = 0; trial < 10; ++trial) {
    WeylElement a = generator(s, rng.vector(6));
    std::complex<double> lhs = evaluate(w, background_shift(a, diff));
    std::complex<double> rhs = evaluate(ws, a);
    CHECK(std::abs(lhs - rhs) < 1e-13);
  }
}

TEST_CASE("large gauge covariance on corner coordinates") {
  BoundaryCalculus c(builtin_mesh("annulus(1,2,6,30)"));
  ChhSpace s = make_chh_space(c);
  QuasiFreeState w = l2_state(s.space);
  Rng rng(85);
  Eigen::VectorXd lam = rng.vector(c.n_bvertices());
  QuasiFreeState ws = shifted_state(w, gauge_coords(s, lam));
  for (int trial = 0; trial < 5; ++trial) {
    WeylElement a = generator(s.space, rng.vector(s.space->dim));
    CHECK(std::abs(evaluate(w, large_gauge(s, a, lam)) - evaluate(ws, a)) < 1e-12);
  }
}

TEST_CASE("covariances survive a file round trip") {
  SpacePtr s = standard_space(2);
  Rng rng(86);
  Eigen::VectorXd dir = rng.vector(4);
  Eigen::MatrixXd mu = 0.5 * Eigen::MatrixXd::Identity(4, 4) + 0.2 * dir * dir.transpose();
  std::string path =
      (std::filesystem::temp_directory_path() / "states_mu_roundtrip.mtx").string();
  write_matrix_market_dense(mu, path);
  Eigen::MatrixXd back = read_matrix_market_dense(path);
  CHECK((back - mu).cwiseAbs().maxCoeff() == 0.0);
  QuasiFreeState w = make_state(s, back);
  CHECK(domination_margin(s, w.mu) <= 1.0 + 1e-10);
}

TEST_SUITE_END();
