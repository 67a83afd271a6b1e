// Hot-path timings: operator assembly, the elliptic solves behind the
// corner-mode split, and the algebra layer. Steady-state solves reuse the
// cached factorization, so the first iteration is the expensive one.
#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "lens/calculus.hpp"
#include "lens/gluing.hpp"
#include "lens/hodge.hpp"
#include "lens/mesh.hpp"
#include "lens/phasespace.hpp"
#include "lens/relativize.hpp"
#include "lens/rng.hpp"
#include "lens/weyl.hpp"

namespace {

const lens::BoundaryCalculus& bench_calc() {
  static lens::BoundaryCalculus c(lens::builtin_mesh("annulus(1,2,8,48)"));
  return c;
}

void BM_OperatorAssembly(benchmark::State& state) {
  lens::Mesh m = lens::builtin_mesh("annulus(1,2,8,48)");
  for (auto _ : state) {
    lens::BoundaryCalculus c(m);
    benchmark::DoNotOptimize(c.d1.nonZeros());
  }
}
BENCHMARK(BM_OperatorAssembly);

void BM_DirichletResolve(benchmark::State& state) {
  const lens::BoundaryCalculus& c = bench_calc();
  lens::Rng rng(1);
  Eigen::VectorXd rho = rng.normal_vector(c.n_vertices());
  Eigen::VectorXd f = rng.normal_vector(c.n_bvertices());
  lens::solve_dirichlet(c, rho, f);  // warm the factorization cache
  for (auto _ : state) {
    Eigen::VectorXd phi = lens::solve_dirichlet(c, rho, f);
    benchmark::DoNotOptimize(phi.norm());
  }
}
BENCHMARK(BM_DirichletResolve);

void BM_DirichletFactorize(benchmark::State& state) {
  lens::Mesh m = lens::builtin_mesh("annulus(1,2,8,48)");
  lens::Rng rng(1);
  Eigen::VectorXd rho, f;
  for (auto _ : state) {
    state.PauseTiming();
    lens::BoundaryCalculus c(m);
    rho = rng.normal_vector(c.n_vertices());
    f = rng.normal_vector(c.n_bvertices());
    state.ResumeTiming();
    Eigen::VectorXd phi = lens::solve_dirichlet(c, rho, f);
    benchmark::DoNotOptimize(phi.norm());
  }
}
BENCHMARK(BM_DirichletFactorize);

void BM_CornerModeSplit(benchmark::State& state) {
  const lens::BoundaryCalculus& c = bench_calc();
  lens::Rng rng(2);
  lens::InitialData d = lens::InitialData::zero(c);
  d.a = rng.normal_vector(c.n_edges());
  d.e = lens::enforce_interior_gauss(c, rng.normal_vector(c.n_edges()), d.rho);
  lens::chh_decompose(c, d);
  for (auto _ : state) {
    lens::CHHCoords x = lens::chh_decompose(c, d);
    benchmark::DoNotOptimize(x.h.norm());
  }
}
BENCHMARK(BM_CornerModeSplit);

void BM_CornerModeRoundtrip(benchmark::State& state) {
  const lens::BoundaryCalculus& c = bench_calc();
  lens::Rng rng(3);
  lens::InitialData d = lens::InitialData::zero(c);
  d.a = rng.normal_vector(c.n_edges());
  d.e = lens::enforce_interior_gauss(c, rng.normal_vector(c.n_edges()), d.rho);
  lens::CHHCoords x = lens::chh_decompose(c, d);
  for (auto _ : state) {
    lens::InitialData rep = lens::chh_reconstruct(c, x, d.rho);
    benchmark::DoNotOptimize(rep.a.norm());
  }
}
BENCHMARK(BM_CornerModeRoundtrip);

void BM_WeylMultiply(benchmark::State& state) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(40, 40);
  s.topRightCorner(20, 20).setIdentity();
  s.bottomLeftCorner(20, 20) = -Eigen::MatrixXd::Identity(20, 20);
  lens::SpacePtr space = lens::make_symplectic_space("bench", s);
  lens::Rng rng(4);
  lens::WeylElement a = lens::WeylElement::zero(space);
  lens::WeylElement b = lens::WeylElement::zero(space);
  for (int t = 0; t < 8; ++t) {
    a.add_term(rng.vector(40), {rng.symmetric(), rng.symmetric()});
    b.add_term(rng.vector(40), {rng.symmetric(), rng.symmetric()});
  }
  for (auto _ : state) {
    lens::WeylElement p = lens::multiply(a, b);
    benchmark::DoNotOptimize(p.two_norm());
  }
}
BENCHMARK(BM_WeylMultiply);

void BM_FrameDressing(benchmark::State& state) {
  static lens::BoundaryCalculus c(lens::builtin_mesh("annulus(1,2,5,16)"));
  static lens::ChhSpace s = lens::make_chh_space(c);
  static lens::ExtendedSpace x = lens::make_extended_space(s);
  lens::Rng rng(5);
  lens::WeylElement a = lens::WeylElement::zero(s.space);
  for (int t = 0; t < 4; ++t) a.add_term(rng.vector(s.space->dim), {rng.symmetric(), 0.0});
  for (auto _ : state) {
    lens::WeylElement ra = lens::relativise(x, a);
    benchmark::DoNotOptimize(ra.two_norm());
  }
}
BENCHMARK(BM_FrameDressing);

void BM_GluedLabel(benchmark::State& state) {
  static lens::BoundaryCalculus c1(lens::builtin_mesh("hemisphere_north(3,12)"));
  static lens::BoundaryCalculus c2(lens::builtin_mesh("hemisphere_south(3,12)"));
  static lens::ChhSpace s1 = lens::make_chh_space(c1, "bench_n");
  static lens::ChhSpace s2 = lens::make_chh_space(c2, "bench_s");
  static lens::GluingSetup g = [] {
    auto m = lens::match_boundaries(c1, c2);
    lens::GluingSetup setup = lens::make_gluing(s1, s2, m.first, m.second);
    lens::attach_global(setup);
    return setup;
  }();
  const lens::BoundaryCalculus& cu = *g.global->calc;
  lens::Rng rng(6);
  lens::InitialData d = lens::InitialData::zero(cu);
  d.a = rng.normal_vector(cu.n_edges());
  d.e = lens::enforce_interior_gauss(cu, rng.normal_vector(cu.n_edges()), d.rho);
  for (auto _ : state) {
    Eigen::VectorXd label = lens::glued_label(g, lens::reduce_global(g, d));
    benchmark::DoNotOptimize(label.norm());
  }
}
BENCHMARK(BM_GluedLabel);

}  // namespace

BENCHMARK_MAIN();
