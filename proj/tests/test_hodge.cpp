#include <doctest.h>

#include <cmath>
#include <cstring>

#include "lens/calculus.hpp"
#include "lens/hodge.hpp"
#include "lens/mesh.hpp"
#include "lens/rng.hpp"

using namespace lens;

namespace {

Eigen::VectorXd radial_log(const BoundaryCalculus& c) {
  Eigen::VectorXd u(c.n_vertices());
  for (int v = 0; v < c.n_vertices(); ++v)
    u[v] = std::log(c.mesh.vertices.row(v).head<2>().norm());
  return u;
}

double dirichlet_log_sup_error(int nr, int na) {
  Mesh m = make_annulus(1.0, 2.0, nr, na);
  BoundaryCalculus c(std::move(m));
  Eigen::VectorXd exact = radial_log(c);
  Eigen::VectorXd f(c.n_bvertices());
  for (int i = 0; i < c.n_bvertices(); ++i) f[i] = exact[c.bvertex_to_vertex[i]];
  Eigen::VectorXd phi = solve_dirichlet(c, Eigen::VectorXd::Zero(c.n_vertices()), f);
  return (phi - exact).lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST_SUITE("hodge") {

TEST_CASE("dirichlet flat disk matches (1 - r^2)/4") {
  BoundaryCalculus c(make_disk(1.0, 14, 56));
  Eigen::VectorXd rho = Eigen::VectorXd::Ones(c.n_vertices());
  Eigen::VectorXd phi =
      solve_dirichlet(c, rho, Eigen::VectorXd::Zero(c.n_bvertices()));
  double worst = 0.0;
  for (int v = 0; v < c.n_vertices(); ++v) {
    double r2 = c.mesh.vertices.row(v).head<2>().squaredNorm();
    worst = std::max(worst, std::abs(phi[v] - (1.0 - r2) / 4.0));
  }
  CHECK(worst < 1e-2);
}

TEST_CASE("dirichlet annulus log data converges at first order or better") {
  double e1 = dirichlet_log_sup_error(6, 30);
  double e2 = dirichlet_log_sup_error(12, 60);
  double e3 = dirichlet_log_sup_error(24, 120);
  double order = std::log2(e1 / e3) / 2.0;
  CHECK(order >= 1.0);
  CHECK(e2 < e1);
  CHECK(e3 < e2);
}

TEST_CASE("dirichlet solve is bitwise reproducible") {
  BoundaryCalculus c(builtin_mesh("annulus(1,2,8,40)"));
  Rng rng(99);
  Eigen::VectorXd rho = rng.normal_vector(c.n_vertices());
  Eigen::VectorXd f = rng.normal_vector(c.n_bvertices());
  Eigen::VectorXd a = solve_dirichlet(c, rho, f);
  Eigen::VectorXd b = solve_dirichlet(c, rho, f);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
}

TEST_CASE("dirichlet on closed surface wants a balanced source") {
  BoundaryCalculus c(make_sphere(2));
  CHECK_THROWS_AS(
      solve_dirichlet(c, Eigen::VectorXd::Ones(c.n_vertices()), Eigen::VectorXd(0)),
      IncompatibleData);
  Rng rng(3);
  Eigen::VectorXd rho = rng.normal_vector(c.n_vertices());
  double total = c.m0.dot(rho), mass = c.m0.sum();
  rho.array() -= total / mass;
  Eigen::VectorXd phi = solve_dirichlet(c, rho, Eigen::VectorXd(0));
  CHECK(std::abs(c.m0.dot(phi)) < 1e-12 * phi.lpNorm<Eigen::Infinity>() * mass);
  // interior equation holds everywhere on a closed surface
  Eigen::VectorXd resid =
      Eigen::VectorXd(c.d0.transpose() * (c.M1 * (c.d0 * phi))) - c.m0.cwiseProduct(rho);
  CHECK(resid.lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("neumann annulus radial flux reproduces log potential") {
  BoundaryCalculus c(builtin_mesh("annulus(1,2,24,96)"));
  // outward flux of grad(log r): +1/2 on the outer circle, -1 on the inner
  Eigen::VectorXd f(c.n_bvertices());
  for (int i = 0; i < c.n_bvertices(); ++i) {
    double r = c.mesh.vertices.row(c.bvertex_to_vertex[i]).head<2>().norm();
    f[i] = (r > 1.5) ? 1.0 / r : -1.0 / r;
  }
  Eigen::VectorXd phi = solve_neumann(c, Eigen::VectorXd::Zero(c.n_vertices()), f);
  Eigen::VectorXd exact = radial_log(c);
  exact.array() -= c.m0.dot(exact) / c.m0.sum();
  CHECK((phi - exact).lpNorm<Eigen::Infinity>() < 2e-2);
}

TEST_CASE("neumann rejects incompatible totals and accepts balanced ones") {
  BoundaryCalculus c(builtin_mesh("disk(1,8,32)"));
  Eigen::VectorXd zero_rho = Eigen::VectorXd::Zero(c.n_vertices());
  CHECK_THROWS_AS(solve_neumann(c, zero_rho, Eigen::VectorXd::Ones(c.n_bvertices())),
                  IncompatibleData);
  // unit source balanced by uniform outward flux area/length
  Eigen::VectorXd rho = Eigen::VectorXd::Ones(c.n_vertices());
  double area = c.m0.sum(), length = c.b0.sum();
  Eigen::VectorXd f = Eigen::VectorXd::Constant(c.n_bvertices(), -area / length);
  Eigen::VectorXd phi = solve_neumann(c, rho, f);
  CHECK(std::isfinite(phi.norm()));
  CHECK(std::abs(c.m0.dot(phi)) < 1e-10);
}

TEST_CASE("neumann solution leaves natural flux equal to the data") {
  BoundaryCalculus c(builtin_mesh("annulus(1,2,8,40)"));
  Rng rng(17);
  Eigen::VectorXd f = rng.normal_vector(c.n_bvertices());
  f.array() -= c.b0.dot(f) / c.b0.sum();
  Eigen::VectorXd phi = solve_neumann(c, Eigen::VectorXd::Zero(c.n_vertices()), f);
  // flux of -grad(phi) through the boundary: compare against -f
  Eigen::VectorXd h = natural_flux(c, c.d0 * phi, Eigen::VectorXd::Zero(c.n_vertices()));
  CHECK((h - f).lpNorm<Eigen::Infinity>() < 1e-9 * (1.0 + f.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("tangential split reconstructs exactly and kills gradients") {
  for (const char* spec : {"annulus(1,2,8,40)", "disk(1,8,32)", "sphere(2)"}) {
    CAPTURE(spec);
    BoundaryCalculus c(builtin_mesh(spec));
    Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd beta = rng.normal_vector(c.n_edges());
      TangentialSplit s = tangential_hodge_helmholtz(c, beta);
      double scale = beta.lpNorm<Eigen::Infinity>() + 1.0;
      CHECK((s.tangential + c.d0 * s.potential - beta).lpNorm<Eigen::Infinity>() <
            1e-12 * scale);
      Eigen::VectorXd defect = c.d0.transpose() * (c.M1 * s.tangential);
      CHECK(defect.lpNorm<Eigen::Infinity>() < 1e-9 * scale);
    }
  }
}

TEST_CASE("coclosed split vanishes on interior rows and is orthogonal") {
  BoundaryCalculus c(builtin_mesh("annulus(1,2,8,40)"));
  Rng rng(7);
  Eigen::VectorXd a = rng.normal_vector(c.n_edges());
  CoclosedSplit s = nontangential_hodge(c, a);
  CHECK((s.coclosed + c.d0 * s.potential - a).lpNorm<Eigen::Infinity>() < 1e-12);
  Eigen::VectorXd rows = c.d0.transpose() * (c.M1 * s.coclosed);
  for (int v : c.interior_vertex_ids) CHECK(std::abs(rows[v]) < 1e-9);
  // potential is interior supported, so the removed part is orthogonal to
  // every coclosed field in the M1 inner product
  for (int i = 0; i < c.n_bvertices(); ++i)
    CHECK(s.potential[c.bvertex_to_vertex[i]] == 0.0);
}

TEST_CASE("boundary split takes one joint mean per surface component") {
  BoundaryCalculus c(builtin_mesh("annulus(1,2,8,40)"));
  // +1 on the outer circle, -1 on the inner: joint mean weighted by length
  Eigen::VectorXd u(c.n_bvertices());
  double lin = 0.0, lout = 0.0;
  for (int i = 0; i < c.n_bvertices(); ++i) {
    double r = c.mesh.vertices.row(c.bvertex_to_vertex[i]).head<2>().norm();
    u[i] = (r > 1.5) ? 1.0 : -1.0;
    (r > 1.5 ? lout : lin) += c.b0[i];
  }
  BoundaryFunctionSplit s = split_boundary_function(c, u);
  double expected = (lout - lin) / (lout + lin);
  CHECK(s.const_part.lpNorm<Eigen::Infinity>() ==
        doctest::Approx(std::abs(expected)).epsilon(1e-12));
  CHECK((s.lg + s.const_part - u).lpNorm<Eigen::Infinity>() < 1e-14);
  CHECK(std::abs(c.b0.dot(s.lg)) < 1e-12);
}

TEST_CASE("minimal coclosed extension reproduces its flux data") {
  BoundaryCalculus c(builtin_mesh("annulus(1,2,10,48)"));
  Rng rng(11);
  Eigen::VectorXd h = rng.normal_vector(c.n_bvertices());
  h = split_boundary_function(c, h).lg;
  Eigen::VectorXd ext = minimal_coclosed_extension(c, h);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(c.n_vertices());
  Eigen::VectorXd back = natural_flux(c, ext, zero);
  CHECK((back - h).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK_THROWS_AS(minimal_coclosed_extension(c, Eigen::VectorXd::Ones(c.n_bvertices())),
                  IncompatibleData);
}

TEST_CASE("kernel basis dimensions follow the topology") {
  for (const char* spec :
       {"annulus(1,2,5,16)", "disk(1,5,16)", "sphere(1)", "cylinder_band(1,2,12,3)"}) {
    CAPTURE(spec);
    BoundaryCalculus c(builtin_mesh(spec));
    const Eigen::MatrixXd& weak = tangential_space_basis(c);
    int expected = c.n_edges() - c.n_vertices() + c.mesh.n_components;
    CHECK(weak.cols() == expected);
    Eigen::MatrixXd gram = weak.transpose() * (c.M1 * weak);
    CHECK((gram - Eigen::MatrixXd::Identity(weak.cols(), weak.cols()))
              .lpNorm<Eigen::Infinity>() < 1e-10);
    Eigen::MatrixXd rows = c.d0.transpose() * (c.M1 * weak);
    CHECK(rows.lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("strict kernel sits inside the weak kernel") {
  BoundaryCalculus c(builtin_mesh("annulus(1,2,5,16)"));
  const Eigen::MatrixXd& weak = tangential_space_basis(c);
  const Eigen::MatrixXd& strict = tangential_coclosed_basis(c);
  // the normal trace is full rank on the weak kernel, so the strict kernel
  // loses one dimension per boundary vertex
  CHECK(strict.cols() == weak.cols() - c.n_bvertices());
  Eigen::MatrixXd gram = strict.transpose() * (c.M1 * strict);
  CHECK((gram - Eigen::MatrixXd::Identity(strict.cols(), strict.cols()))
            .lpNorm<Eigen::Infinity>() < 1e-10);
  // both constraints vanish on the strict basis
  CHECK(Eigen::MatrixXd(Eigen::MatrixXd(c.dstar1) * strict).lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK(Eigen::MatrixXd(Eigen::MatrixXd(c.nml) * strict).lpNorm<Eigen::Infinity>() < 1e-6);
  // containment: projecting onto the weak basis loses nothing
  Eigen::MatrixXd coeff = weak.transpose() * (c.M1 * strict);
  CHECK((weak * coeff - strict).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("closed surface has no strict defect") {
  BoundaryCalculus c(builtin_mesh("sphere(1)"));
  const Eigen::MatrixXd& weak = tangential_space_basis(c);
  const Eigen::MatrixXd& strict = tangential_coclosed_basis(c);
  CHECK(weak.cols() == strict.cols());
}

TEST_CASE("boundary function basis spans the mean free space") {
  BoundaryCalculus c(builtin_mesh("annulus(1,2,5,16)"));
  const Eigen::MatrixXd& lg = lg_space_basis(c);
  CHECK(lg.cols() == c.n_bvertices() - 1);  // one surface component
  Eigen::MatrixXd gram = lg.transpose() * c.b0.asDiagonal() * lg;
  CHECK((gram - Eigen::MatrixXd::Identity(lg.cols(), lg.cols())).lpNorm<Eigen::Infinity>() <
        1e-10);
  Eigen::VectorXd means = lg.transpose() * c.b0;
  CHECK(means.lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("harmonic representative is idempotent") {
  BoundaryCalculus c(builtin_mesh("annulus(1,2,8,40)"));
  Rng rng(23);
  Eigen::VectorXd alpha = rng.normal_vector(c.n_vertices());
  Eigen::VectorXd h1 = harmonic_representative(c, alpha);
  Eigen::VectorXd h2 = harmonic_representative(c, h1);
  CHECK((h1 - h2).lpNorm<Eigen::Infinity>() < 1e-10 * (1.0 + h1.lpNorm<Eigen::Infinity>()));
  // trace of the representative is mean free
  Eigen::VectorXd trh = c.tr * h1;
  CHECK(std::abs(c.b0.dot(trh)) < 1e-10);
}

TEST_CASE("interior charge projection restores the constraint minimally") {
  BoundaryCalculus c(builtin_mesh("annulus(1,2,8,40)"));
  Rng rng(31);
  Eigen::VectorXd e = rng.normal_vector(c.n_edges());
  Eigen::VectorXd rho = rng.normal_vector(c.n_vertices());
  Eigen::VectorXd fixed = enforce_interior_gauss(c, e, rho);
  Eigen::VectorXd rows =
      Eigen::VectorXd(c.d0.transpose() * (c.M1 * fixed)) + c.m0.cwiseProduct(rho);
  for (int v : c.interior_vertex_ids) CHECK(std::abs(rows[v]) < 1e-9);
  // projection: applying it twice changes nothing
  Eigen::VectorXd again = enforce_interior_gauss(c, fixed, rho);
  CHECK((again - fixed).lpNorm<Eigen::Infinity>() < 1e-10);
  // a field already satisfying the constraint is untouched
  Eigen::VectorXd same = enforce_interior_gauss(c, fixed, rho);
  CHECK((same - fixed).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("charge offset spreads component charge over its boundary") {
  BoundaryCalculus c(builtin_mesh("disk(1,6,24)"));
  Eigen::VectorXd rho = Eigen::VectorXd::Ones(c.n_vertices());
  Eigen::VectorXd f = charge_offset(c, rho);
  double q = c.m0.sum(), len = c.b0.sum();
  for (int i = 0; i < c.n_bvertices(); ++i)
    CHECK(f[i] == doctest::Approx(q / len).epsilon(1e-12));
  // pairing against the boundary measure recovers the total charge
  CHECK(c.b0.dot(f) == doctest::Approx(q).epsilon(1e-12));
}

}  // TEST_SUITE
