#include <cmath>
#include <complex>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "lens/gluing.hpp"
#include "lens/hodge.hpp"
#include "lens/mesh.hpp"
#include "lens/phasespace.hpp"
#include "lens/rng.hpp"
#include "lens/states.hpp"
#include "lens/weyl.hpp"
#include "weyl_testing.hpp"

using namespace lens;

namespace {

std::vector<int> identity_match(int n) {
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 0);
  return m;
}

// two hemispheres sharing their equator; the south winding is mirrored, so
// the matched circles run in opposite directions
struct SplitSphere {
  BoundaryCalculus cn, cs;
  ChhSpace sn, ss;
  GluingSetup g;
  SplitSphere(const std::string& north, const std::string& south)
      : cn(builtin_mesh(north)), cs(builtin_mesh(south)) {
    sn = make_chh_space(cn, "n");
    ss = make_chh_space(cs, "s");
    g = make_gluing(sn, ss, identity_match(cn.n_bvertices()), true);
  }
};

SplitSphere& small() {
  static SplitSphere s("hemisphere_north(3,12)", "hemisphere_south(3,12)");
  return s;
}

SplitSphere& mid() {
  static SplitSphere* s = [] {
    auto* m = new SplitSphere("hemisphere_north(6,24)", "hemisphere_south(6,24)");
    attach_global(m->g);
    return m;
  }();
  return *s;
}

Eigen::VectorXd random_invariant_label(const GluingSetup& g, Rng& rng) {
  const int nc1 = g.side1->nc, nc2 = g.side2->nc, ns = g.side1->ns;
  Eigen::VectorXd v = rng.vector(2 * nc1 + 2 * nc2 + 4 * ns);
  v.tail(ns) = -(g.transfer * v.segment(2 * nc1 + ns, ns));
  return v;
}

WeylElement random_invariant_element(const GluingSetup& g, Rng& rng, int nterms) {
  WeylElement a = WeylElement::zero(g.pair12);
  for (int t = 0; t < nterms; ++t)
    a.add_term(random_invariant_label(g, rng),
               std::complex<double>(rng.symmetric(), rng.symmetric()));
  return a;
}

}  // namespace

TEST_SUITE_BEGIN("gluing");

TEST_CASE("setup validation accepts the split sphere and rejects broken matches") {
  auto& f = small();
  const int nb = f.cn.n_bvertices();
  const int nc1 = f.sn.nc, nc2 = f.ss.nc, ns = f.sn.ns;

  auto [match, reversed] = match_boundaries(f.cn, f.cs);
  CHECK(match == identity_match(nb));
  CHECK(reversed);

  CHECK(f.g.glued->dim == 2 * nc1 + 2 * ns + 2 * nc2);
  CHECK(f.g.half12->dim == f.g.glued->dim);
  CHECK(f.g.half21->dim == f.g.glued->dim);
  CHECK(f.g.pair12->dim == f.g.glued->dim + 2 * ns);
  CHECK(f.g.invariants.basis.cols() == f.g.pair12->dim - ns);

  // the equators coincide point for point, so the transfer is near identity
  Eigen::MatrixXd defect =
      f.g.transfer.transpose() * f.g.transfer - Eigen::MatrixXd::Identity(ns, ns);
  CHECK(defect.cwiseAbs().maxCoeff() < 1e-12);

  std::vector<int> bad = identity_match(nb);
  bad.pop_back();
  CHECK_THROWS_AS(make_gluing(f.sn, f.ss, bad, true), ValidationError);

  bad = identity_match(nb);
  bad[4] = bad[5];
  CHECK_THROWS_AS(make_gluing(f.sn, f.ss, bad, true), ValidationError);

  bad = identity_match(nb);
  std::swap(bad[3], bad[7]);  // matched segments stop being adjacent
  CHECK_THROWS_AS(make_gluing(f.sn, f.ss, bad, true), ValidationError);

  CHECK_THROWS_AS(make_gluing(f.sn, f.ss, identity_match(nb), false), ValidationError);

  BoundaryCalculus scaled(builtin_mesh("hemisphere_south(3,12,1.05)"));
  ChhSpace sscaled = make_chh_space(scaled, "s_scaled");
  CHECK_THROWS_AS(make_gluing(f.sn, sscaled, identity_match(nb), true), ValidationError);
}

TEST_CASE("xi isomorphisms flip the surface slot and invert each other") {
  auto& f = small();
  const int nc1 = f.sn.nc, nc2 = f.ss.nc, ns = f.sn.ns;
  Rng rng(301);

  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd u = rng.vector(f.g.half12->dim);
    WeylElement image = xi_21(f.g, generator(f.g.half12, u));
    REQUIRE(image.terms().size() == 1);
    const Eigen::VectorXd& w = image.terms().begin()->second.v;
    CHECK((w.head(2 * nc1) - u.head(2 * nc1)).norm() == 0.0);
    CHECK((w.segment(2 * nc1, 2 * nc2) - u.tail(2 * nc2)).norm() == 0.0);
    CHECK((w.segment(2 * nc1 + 2 * nc2, ns) + f.g.transfer * u.segment(2 * nc1, ns)).norm() <=
          1e-14);
    CHECK((w.tail(ns) + f.g.transfer * u.segment(2 * nc1 + ns, ns)).norm() <= 1e-14);
  }

  // a pure closed-loop label moves across untouched
  Eigen::VectorXd loops = Eigen::VectorXd::Zero(f.g.half12->dim);
  loops.head(2 * nc1) = rng.vector(2 * nc1);
  loops.tail(2 * nc2) = rng.vector(2 * nc2);
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(f.g.half21->dim);
  expected.head(2 * nc1) = loops.head(2 * nc1);
  expected.segment(2 * nc1, 2 * nc2) = loops.tail(2 * nc2);
  CHECK(exactly_equal(xi_21(f.g, generator(f.g.half12, loops)),
                      generator(f.g.half21, expected)));

  for (int trial = 0; trial < 10; ++trial) {
    WeylElement a = WeylElement::zero(f.g.half12);
    for (int t = 0; t < 3; ++t)
      a.add_term(rng.vector(f.g.half12->dim),
                 std::complex<double>(rng.symmetric(), rng.symmetric()));
    CHECK(approx_equal(xi_12(f.g, xi_21(f.g, a)), a, 1e-9, 1e-12));
  }

  CHECK_THROWS_AS(xi_21(f.g, WeylElement::unit(f.g.half21)), SpaceMismatch);
  CHECK_THROWS_AS(xi_12(f.g, WeylElement::unit(f.g.half12)), SpaceMismatch);
}

TEST_CASE("diagonal invariance characterizes matched fluxes") {
  auto& f = small();
  const int nc1 = f.sn.nc, ns = f.sn.ns;
  Rng rng(302);

  auto dirs = diagonal_gauge_directions(f.g);
  CHECK(static_cast<int>(dirs.size()) == ns);
  for (const auto& d : dirs) CHECK(f.g.invariants.contains(d));

  for (int trial = 0; trial < 20; ++trial)
    CHECK(f.g.invariants.contains(random_invariant_label(f.g, rng)));

  Eigen::VectorXd v = random_invariant_label(f.g, rng);
  v[v.size() - ns + 2] += 1e-6;  // side-2 flux slot off by one part in a million
  CHECK(!f.g.invariants.contains(v));

  Eigen::VectorXd interior = Eigen::VectorXd::Zero(f.g.pair12->dim);
  interior.head(2 * nc1) = rng.vector(2 * nc1);
  interior.segment(2 * nc1 + 2 * ns, 2 * f.ss.nc) = rng.vector(2 * f.ss.nc);
  CHECK(f.g.invariants.contains(interior));

  Eigen::VectorXd surface = Eigen::VectorXd::Zero(f.g.pair12->dim);
  surface.segment(2 * nc1, 2 * ns) = rng.vector(2 * ns);
  surface.segment(f.g.pair12->dim - 2 * ns, ns) = rng.vector(ns);
  surface.tail(ns) = -(f.g.transfer * surface.segment(2 * nc1 + ns, ns));
  CHECK(f.g.invariants.contains(surface));
}

TEST_CASE("won normal form annihilates the diagonal ideal") {
  auto& f = small();
  const int nc1 = f.sn.nc, nc2 = f.ss.nc, ns = f.sn.ns;
  Rng rng(303);

  for (int trial = 0; trial < 5; ++trial) {
    WeylElement u = diagonal_gauge_unitary(f.g, rng.vector(ns));
    CHECK(approx_equal(won_normal_form(f.g, u), WeylElement::unit(f.g.glued), 1e-9, 1e-10));
  }

  for (int trial = 0; trial < 10; ++trial) {
    WeylElement a = random_invariant_element(f.g, rng, 3);
    WeylElement u = diagonal_gauge_unitary(f.g, rng.vector(ns));
    CHECK(approx_equal(won_normal_form(f.g, multiply(a, u)), won_normal_form(f.g, a), 1e-9,
                       1e-10));
  }

  for (int trial = 0; trial < 10; ++trial) {
    WeylElement a = random_invariant_element(f.g, rng, 2);
    WeylElement b = random_invariant_element(f.g, rng, 2);
    CHECK(approx_equal(won_normal_form(f.g, multiply(a, b)),
                       multiply(won_normal_form(f.g, a), won_normal_form(f.g, b)), 1e-9,
                       1e-12));
    CHECK(approx_equal(won_normal_form(f.g, star(a)), star(won_normal_form(f.g, a)), 1e-9,
                       1e-12));
  }

  // no side-2 potential slot: the normal form is a bitwise slot copy
  Eigen::VectorXd v = random_invariant_label(f.g, rng);
  v.segment(2 * nc1 + 2 * ns + 2 * nc2, ns).setZero();
  Eigen::VectorXd expected(f.g.glued->dim);
  expected.head(2 * nc1 + 2 * ns) = v.head(2 * nc1 + 2 * ns);
  expected.tail(2 * nc2) = v.segment(2 * nc1 + 2 * ns, 2 * nc2);
  CHECK(exactly_equal(won_normal_form(f.g, generator(f.g.pair12, v)),
                      generator(f.g.glued, expected)));

  Eigen::VectorXd bad = rng.vector(f.g.pair12->dim);
  CHECK_THROWS_AS(won_normal_form(f.g, generator(f.g.pair12, bad)), NotInvariant);
  CHECK_THROWS_AS(won_normal_form(f.g, WeylElement::unit(f.g.half12)), SpaceMismatch);
}

TEST_CASE("psi maps commute with xi in the gluing diagram") {
  auto& f = small();
  const int nc1 = f.sn.nc, nc2 = f.ss.nc, ns = f.sn.ns;
  Rng rng(304);

  CHECK(exactly_equal(psi_bullet_circle(f.g, WeylElement::unit(f.g.half12)),
                      WeylElement::unit(f.g.glued)));
  CHECK(exactly_equal(psi_circle_bullet(f.g, WeylElement::unit(f.g.half21)),
                      WeylElement::unit(f.g.glued)));

  // psi on the bullet-circle side is a bitwise slot permutation
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd u = rng.vector(f.g.half12->dim);
    Eigen::VectorXd expected(f.g.glued->dim);
    expected.head(2 * nc1 + 2 * ns) = u.head(2 * nc1 + 2 * ns);
    expected.tail(2 * nc2) = u.tail(2 * nc2);
    CHECK(exactly_equal(psi_bullet_circle(f.g, generator(f.g.half12, u)),
                        generator(f.g.glued, expected)));
  }

  std::set<std::string> labels;
  for (int k = 0; k < f.g.half12->dim; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(f.g.half12->dim);
    e[k] = 1.0;
    WeylElement image = psi_bullet_circle(f.g, generator(f.g.half12, e));
    REQUIRE(image.terms().size() == 1);
    labels.insert(image.terms().begin()->first);
  }
  CHECK(static_cast<int>(labels.size()) == f.g.half12->dim);

  for (int trial = 0; trial < 50; ++trial) {
    WeylElement a = trial < 40 ? generator(f.g.half12, rng.vector(f.g.half12->dim))
                               : [&] {
                                   WeylElement e = WeylElement::zero(f.g.half12);
                                   for (int t = 0; t < 3; ++t)
                                     e.add_term(rng.vector(f.g.half12->dim),
                                                std::complex<double>(rng.symmetric(),
                                                                     rng.symmetric()));
                                   return e;
                                 }();
    CHECK(approx_equal(psi_circle_bullet(f.g, xi_21(f.g, a)), psi_bullet_circle(f.g, a),
                       1e-9, 1e-12));
  }

  CHECK_THROWS_AS(psi_bullet_circle(f.g, WeylElement::unit(f.g.half21)), SpaceMismatch);
  CHECK_THROWS_AS(psi_circle_bullet(f.g, WeylElement::unit(f.g.half12)), SpaceMismatch);
}

TEST_CASE("rotated identification exercises a dense transfer") {
  auto& f = small();
  const int nb = f.cn.n_bvertices();
  const int ns = f.sn.ns;
  std::vector<int> rot(nb);
  for (int i = 0; i < nb; ++i) rot[i] = (i + 5) % nb;
  GluingSetup g = make_gluing(f.sn, f.ss, rot, true);

  CHECK((g.transfer - Eigen::MatrixXd::Identity(ns, ns)).cwiseAbs().maxCoeff() > 0.1);
  CHECK((g.transfer.transpose() * g.transfer - Eigen::MatrixXd::Identity(ns, ns))
            .cwiseAbs()
            .maxCoeff() < 1e-9);

  Rng rng(305);
  for (int trial = 0; trial < 15; ++trial) {
    WeylElement a = generator(g.half12, rng.vector(g.half12->dim));
    CHECK(approx_equal(psi_circle_bullet(g, xi_21(g, a)), psi_bullet_circle(g, a), 1e-9,
                       1e-12));
  }
  for (int trial = 0; trial < 5; ++trial) {
    WeylElement u = diagonal_gauge_unitary(g, rng.vector(ns));
    CHECK(approx_equal(won_normal_form(g, u), WeylElement::unit(g.glued), 1e-9, 1e-10));
    WeylElement a = WeylElement::zero(g.half12);
    for (int t = 0; t < 2; ++t)
      a.add_term(rng.vector(g.half12->dim),
                 std::complex<double>(rng.symmetric(), rng.symmetric()));
    CHECK(approx_equal(xi_12(g, xi_21(g, a)), a, 1e-9, 1e-12));
  }
}

TEST_CASE("sigma additivity of the global embedding") {
  auto& f = mid();
  const BoundaryCalculus& cg = *f.g.global->calc;

  CHECK(cg.n_bvertices() == 0);
  CHECK(cg.mesh.euler_characteristic() == 2);
  CHECK(cg.n_vertices() == f.cn.n_vertices() + f.cs.n_vertices() - f.cn.n_bvertices());

  InitialData zero = InitialData::zero(cg);
  CHECK(exactly_equal(embed_global(f.g, zero), WeylElement::unit(f.g.glued)));
  CHECK(glued_label(f.g, reduce_global(f.g, zero)).cwiseAbs().maxCoeff() == 0.0);

  InitialData charged = InitialData::zero(cg);
  charged.rho[3] = 1.0;
  CHECK_THROWS_AS(embed_global(f.g, charged), ValidationError);
  CHECK_THROWS_AS(reduce_global(small().g, InitialData::zero(cg)), ValidationError);

  Rng rng(306);
  auto draw = [&] {
    InitialData d = InitialData::zero(cg);
    d.a = rng.vector(cg.n_edges());
    d.e = rng.vector(cg.n_edges());
    return reduce_global(f.g, d);
  };
  for (int trial = 0; trial < 30; ++trial) {
    InitialData x = draw(), y = draw();
    double s_global = sigma(cg, x, y);
    Eigen::VectorXd lx = glued_label(f.g, x), ly = glued_label(f.g, y);
    double s_glued = f.g.glued->pair(lx, ly);
    CHECK(std::abs(s_glued - s_global) <= 1e-8 * std::max(1.0, std::abs(s_global)));

    double s_sides = 0.0;
    for (int side = 1; side <= 2; ++side) {
      const BoundaryCalculus& c = side == 1 ? f.cn : f.cs;
      InitialData xs, ys;
      xs.a = restrict_to_side(f.g, side, x.a);
      xs.e = restrict_to_side(f.g, side, x.e);
      xs.rho = Eigen::VectorXd::Zero(c.n_vertices());
      ys.a = restrict_to_side(f.g, side, y.a);
      ys.e = restrict_to_side(f.g, side, y.e);
      ys.rho = Eigen::VectorXd::Zero(c.n_vertices());
      s_sides += sigma(c, xs, ys);
    }
    // the edge Gram assembles triangle by triangle and every union triangle
    // lies in exactly one side
    CHECK(std::abs(s_sides - s_global) <= 1e-10 * std::max(1.0, std::abs(s_global)));
  }

  // products of embedded generators carry the global pairing as their phase
  InitialData x = draw(), y = draw();
  InitialData sum;
  sum.a = x.a + y.a;
  sum.e = x.e + y.e;
  sum.rho = Eigen::VectorXd::Zero(cg.n_vertices());
  std::complex<double> phase =
      std::exp(std::complex<double>(0.0, -0.5 * sigma(cg, x, y)));
  CHECK(approx_equal(multiply(embed_global(f.g, x), embed_global(f.g, y)),
                     scale(phase, embed_global(f.g, sum)), 1e-7, 1e-6));
}

TEST_CASE("interior data embeds as a one sided label") {
  auto& f = mid();
  const BoundaryCalculus& cg = *f.g.global->calc;
  const int nc1 = f.sn.nc, nc2 = f.ss.nc, ns = f.sn.ns;

  // support away from the seam: side-1 edges with no endpoint on the equator
  std::vector<char> seam(cg.n_vertices(), 0);
  for (int v : f.cn.bvertex_to_vertex) seam[f.g.global->side1_vertex[v]] = 1;
  Rng rng(307);
  InitialData d = InitialData::zero(cg);
  for (int e1 = 0; e1 < f.cn.n_edges(); ++e1) {
    int ge = f.g.global->side1_edge[e1];
    if (!seam[cg.mesh.edges(ge, 0)] && !seam[cg.mesh.edges(ge, 1)])
      d.a[ge] = 0.3 * rng.symmetric();  // keeps the Gaussian values O(1)
  }

  InitialData own;
  own.a = restrict_to_side(f.g, 1, d.a);
  own.e = Eigen::VectorXd::Zero(f.cn.n_edges());
  own.rho = Eigen::VectorXd::Zero(f.cn.n_vertices());
  Eigen::VectorXd vown = coords_of(f.sn, chh_decompose(f.cn, own));

  Eigen::VectorXd expected(f.g.glued->dim);
  expected.head(2 * nc1 + 2 * ns) = vown;
  expected.tail(2 * nc2).setZero();

  Eigen::VectorXd l = glued_label(f.g, reduce_global(f.g, d));
  // the union potential is single valued, so its traces cancel between the
  // two sides and only the side-1 label survives
  CHECK((l - expected).norm() <= 1e-9 * (1.0 + expected.norm()));
  CHECK(l.tail(2 * nc2).norm() <= 1e-9);

  QuasiFreeState w1 = l2_state(f.sn.space);
  QuasiFreeState w2 = l2_state(f.ss.space);
  WeylElement emb = embed_global(f.g, d);
  std::complex<double> side1_value = evaluate(w1, generator(f.sn.space, vown));
  for (GlueMode mode : {GlueMode::one_two, GlueMode::mix}) {
    GluedState gs = glue_states(f.g, w1, w2, mode);
    CHECK(std::abs(evaluate(gs, emb) - side1_value) <= 1e-10);
  }
}

TEST_CASE("glued states factor and detect correlation") {
  auto& f = small();
  const int nc1 = f.sn.nc, ns = f.sn.ns;
  const int dim1 = f.sn.space->dim;
  Rng rng(308);

  QuasiFreeState w1 = l2_state(f.sn.space);
  QuasiFreeState w2 = l2_state(f.ss.space);
  GluedState g12 = glue_states(f.g, w1, w2, GlueMode::one_two);
  GluedState g21 = glue_states(f.g, w1, w2, GlueMode::two_one);
  GluedState gmix = glue_states(f.g, w1, w2, GlueMode::mix);

  CHECK(std::abs(evaluate(g12, WeylElement::unit(f.g.glued)) - 1.0) <= 1e-15);

  for (int trial = 0; trial < 5; ++trial) {
    WeylElement a = WeylElement::zero(f.g.glued);
    for (int t = 0; t < 3; ++t)
      a.add_term(0.3 * rng.vector(f.g.glued->dim),
                 std::complex<double>(rng.symmetric(), rng.symmetric()));
    std::complex<double> v12 = evaluate(g12, a), v21 = evaluate(g21, a);
    std::complex<double> vmix = evaluate(gmix, a);
    CHECK(std::abs(v12 - v21) <= 1e-12);  // both sides factorize
    CHECK(std::abs(vmix - 0.5 * (v12 + v21)) <= 1e-14);
  }

  // partial trace onto side 1: a label without side-2 loops evaluates to the
  // side-1 state of its own coordinates
  Eigen::VectorXd l = Eigen::VectorXd::Zero(f.g.glued->dim);
  l.head(2 * nc1 + 2 * ns) = rng.vector(2 * nc1 + 2 * ns);
  std::complex<double> lhs = evaluate(g12, generator(f.g.glued, l));
  std::complex<double> rhs = evaluate(w1, generator(f.sn.space, l.head(dim1)));
  CHECK(std::abs(lhs - rhs) <= 1e-15);

  // covariance with a loop-surface cross term: the two orders disagree
  const int nq = nc1 + ns;
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(dim1, dim1);
  for (int i = 0; i < nc1; ++i) {
    perm(i, i) = 1.0;              // F -> q
    perm(nq + i, nc1 + i) = 1.0;   // H -> p
  }
  for (int i = 0; i < ns; ++i) {
    perm(nc1 + i, 2 * nc1 + i) = 1.0;        // f -> q
    perm(nq + nc1 + i, 2 * nc1 + ns + i) = 1.0;  // h -> p
  }
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(nq, nq);
  cross(0, nc1) = cross(nc1, 0) = 0.4;
  Eigen::MatrixXd shear = Eigen::MatrixXd::Identity(dim1, dim1);
  shear.bottomLeftCorner(nq, nq) = cross;
  Eigen::MatrixXd mu_std = 0.5 * shear * shear.transpose();
  QuasiFreeState wc = make_state(f.sn.space, perm.transpose() * mu_std * perm);

  Eigen::VectorXd probe = Eigen::VectorXd::Zero(f.g.glued->dim);
  probe[nc1] = 1.0;          // the loop momentum the shear couples
  probe[2 * nc1] = 1.0;      // shared surface potential slot
  GluedState c12 = glue_states(f.g, wc, w2, GlueMode::one_two);
  GluedState c21 = glue_states(f.g, wc, w2, GlueMode::two_one);
  WeylElement pe = generator(f.g.glued, probe);
  CHECK(std::abs(evaluate(c12, pe) - evaluate(c21, pe)) > 1e-3);

  CHECK_THROWS_AS(glue_states(f.g, w2, w2, GlueMode::one_two), SpaceMismatch);
  CHECK_THROWS_AS(evaluate(g12, WeylElement::unit(f.g.pair12)), SpaceMismatch);
}

TEST_CASE("surface marginals decide state compatibility") {
  auto& f = small();
  const int ns = f.sn.ns;

  QuasiFreeState w1 = l2_state(f.sn.space);
  QuasiFreeState w2 = l2_state(f.ss.space);
  CompatibilityReport rep = compatibility_check(f.g, w1, w2);
  CHECK(rep.compatible);
  CHECK(rep.max_defect < 1e-10);

  // a one point charge on the side-2 surface sector breaks the match
  Eigen::VectorXd diff = Eigen::VectorXd::Zero(f.ss.space->dim);
  diff[2 * f.ss.nc + 1] = 1.0;
  CompatibilityReport rep2 = compatibility_check(f.g, w1, shifted_state(w2, diff));
  CHECK(!rep2.compatible);
  CHECK(rep2.max_defect > 1e-3);

  // matched nontrivial covariances stay compatible under the identification
  Eigen::MatrixXd mu1 = 0.5 * Eigen::MatrixXd::Identity(f.sn.space->dim, f.sn.space->dim);
  for (int i = 0; i < ns; ++i) mu1(2 * f.sn.nc + i, 2 * f.sn.nc + i) = 0.8;
  Eigen::MatrixXd mu2 = 0.5 * Eigen::MatrixXd::Identity(f.ss.space->dim, f.ss.space->dim);
  for (int i = 0; i < ns; ++i) mu2(2 * f.ss.nc + i, 2 * f.ss.nc + i) = 0.8;
  CompatibilityReport rep3 =
      compatibility_check(f.g, make_state(f.sn.space, mu1), make_state(f.ss.space, mu2));
  CHECK(rep3.compatible);
}

TEST_CASE("closed loop sectors of the two sides commute exactly") {
  auto& f = small();
  const int nc1 = f.sn.nc, nc2 = f.ss.nc;
  Rng rng(309);

  for (int trial = 0; trial < 10; ++trial) {
    // side-1 loops through one psi, side-2 loops through the other
    Eigen::VectorXd u1 = Eigen::VectorXd::Zero(f.sn.space->dim);
    u1.head(2 * nc1) = rng.vector(2 * nc1);
    WeylElement a =
        psi_bullet_circle(f.g, tensor(generator(f.sn.space, u1), WeylElement::unit(f.g.loops2)));

    Eigen::VectorXd u2 = Eigen::VectorXd::Zero(f.ss.space->dim);
    u2.head(2 * nc2) = rng.vector(2 * nc2);
    WeylElement b =
        psi_circle_bullet(f.g, tensor(WeylElement::unit(f.g.loops1), generator(f.ss.space, u2)));

    CHECK(exactly_equal(multiply(a, b), multiply(b, a)));

    Eigen::VectorXd joint = Eigen::VectorXd::Zero(f.g.glued->dim);
    joint.head(2 * nc1) = u1.head(2 * nc1);
    joint.tail(2 * nc2) = u2.head(2 * nc2);
    CHECK(exactly_equal(multiply(a, b), generator(f.g.glued, joint)));
  }
}

TEST_SUITE_END();
