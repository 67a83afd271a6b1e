#include "lens/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <limits>
#include <string>
#include <set>
#include <tuple>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>

#include "lens/calculus.hpp"
#include "lens/errors.hpp"
#include "lens/gluing.hpp"
#include "lens/hodge.hpp"
#include "lens/mesh.hpp"
#include "lens/phasespace.hpp"
#include "lens/relativize.hpp"
#include "lens/rng.hpp"
#include "lens/states.hpp"
#include "lens/weyl.hpp"

namespace lens {

namespace {

using cplx = std::complex<double>;

CheckResult upper(std::string suite, std::string name, std::string qty, double value,
                  double tol) {
  CheckResult r;
  r.suite = std::move(suite);
  r.name = std::move(name);
  r.quantity = std::move(qty);
  r.value = value;
  r.tolerance = tol;
  r.pass = value <= tol;
  return r;
}

CheckResult lower(std::string suite, std::string name, std::string qty, double value,
                  double tol) {
  CheckResult r;
  r.suite = std::move(suite);
  r.name = std::move(name);
  r.quantity = std::move(qty);
  r.value = value;
  r.tolerance = tol;
  r.pass = value >= tol;
  return r;
}

constexpr double kUnmatched = std::numeric_limits<double>::infinity();

// max coefficient defect after matching terms by label; an unmatched term on
// either side counts with its full coefficient magnitude, no label within
// label_tol counts as unmatched
double element_distance(const WeylElement& a, const WeylElement& b, double label_tol) {
  double worst = 0.0;
  std::set<std::string> used;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  for (const auto& [key, term] : ta) {
    auto hit = tb.find(key);
    if (hit != tb.end() && !used.count(key)) {
      used.insert(key);
      worst = std::max(worst, std::abs(term.c - hit->second.c));
      continue;
    }
    const double scale = label_tol * (1.0 + term.v.lpNorm<Eigen::Infinity>());
    double best = kUnmatched;
    std::string best_key;
    for (const auto& [key2, term2] : tb) {
      if (used.count(key2)) continue;
      if (term2.v.size() != term.v.size()) return kUnmatched;
      const double d = (term.v - term2.v).lpNorm<Eigen::Infinity>();
      if (d <= scale && d < best) {
        best = d;
        best_key = key2;
      }
    }
    if (best_key.empty()) {
      worst = std::max(worst, std::abs(term.c));
      continue;
    }
    used.insert(best_key);
    worst = std::max(worst, std::abs(term.c - tb.at(best_key).c));
  }
  for (const auto& [key, term] : tb)
    if (!used.count(key)) worst = std::max(worst, std::abs(term.c));
  return worst;
}

// identical label strings in order and coefficients equal as complex values
bool bitwise_equal(const WeylElement& a, const WeylElement& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  if (ta.size() != tb.size()) return false;
  auto ia = ta.begin();
  auto ib = tb.begin();
  for (; ia != ta.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (!(ia->second.c == ib->second.c)) return false;
  }
  return true;
}

InitialData random_homogeneous(const BoundaryCalculus& c, Rng& rng) {
  InitialData d = InitialData::zero(c);
  d.a = rng.normal_vector(c.n_edges());
  d.e = enforce_interior_gauss(c, rng.normal_vector(c.n_edges()), d.rho);
  return d;
}

double slot_distance(const CHHCoords& x, const CHHCoords& y) {
  double worst = (x.F - y.F).lpNorm<Eigen::Infinity>();
  worst = std::max(worst, (x.H - y.H).lpNorm<Eigen::Infinity>());
  worst = std::max(worst, (x.f - y.f).lpNorm<Eigen::Infinity>());
  return std::max(worst, (x.h - y.h).lpNorm<Eigen::Infinity>());
}

double slot_norm(const CHHCoords& x) {
  double worst = x.F.lpNorm<Eigen::Infinity>();
  worst = std::max(worst, x.H.lpNorm<Eigen::Infinity>());
  worst = std::max(worst, x.f.lpNorm<Eigen::Infinity>());
  return std::max(worst, x.h.lpNorm<Eigen::Infinity>());
}

int rank_of(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol * sv[0]) ++rank;
  return rank;
}

std::vector<int> edge_star(const BoundaryCalculus& c, int vertex) {
  std::vector<int> star;
  for (SpMat::InnerIterator it(c.d0, vertex); it; ++it) star.push_back(static_cast<int>(it.row()));
  return star;
}

}  // namespace

std::vector<CheckResult> verify_green(uint64_t seed) {
  const std::pair<const char*, const char*> meshes[] = {
      {"annulus", "annulus(1,2,8,96)"},
      {"disk", "disk(1,10,40)"},
      {"cylinder_band", "cylinder_band(1,2,40,8)"},
      {"sphere_north", "hemisphere_north(6,24)"},
      {"sphere_south", "hemisphere_south(6,24)"},
  };
  std::vector<CheckResult> out;
  uint64_t tag = 0;
  for (const auto& [name, spec] : meshes) {
    BoundaryCalculus c(builtin_mesh(spec));
    Rng rng = Rng(seed).child(100 + tag++);
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
      Eigen::VectorXd u = rng.normal_vector(c.n_vertices());
      Eigen::VectorXd b = rng.normal_vector(c.n_edges());
      worst = std::max(worst, c.green_residual(u, b));
    }
    out.push_back(upper("green", name, "max_rel_residual", worst, 1e-12));
  }
  return out;
}

std::vector<CheckResult> verify_hodge(uint64_t seed) {
  const double tol = 1e-9;
  BoundaryCalculus ca(builtin_mesh("annulus(1,2,6,40)"));
  BoundaryCalculus cc(builtin_mesh("cylinder_band(1,2,24,6)"));
  BoundaryCalculus cd(builtin_mesh("disk(1,8,32)"));
  const BoundaryCalculus* calcs[] = {&ca, &cc, &cd};

  double tang_recon = 0.0, tang_cross = 0.0;
  double co_recon = 0.0, co_trace = 0.0, co_div = 0.0;
  double bsplit_recon = 0.0, bsplit_mean = 0.0;
  double flux_defect = 0.0;

  Rng rng = Rng(seed).child(200);
  for (int k = 0; k < 100; ++k) {
    const BoundaryCalculus& c = *calcs[k % 3];
    const int ne = c.n_edges();
    const int nv = c.n_vertices();
    const int nb = c.n_bvertices();

    Eigen::VectorXd beta = rng.normal_vector(ne);
    TangentialSplit ts = tangential_hodge_helmholtz(c, beta);
    double den = 1.0 + beta.lpNorm<Eigen::Infinity>();
    tang_recon = std::max(
        tang_recon, (beta - ts.tangential - c.d0 * ts.potential).lpNorm<Eigen::Infinity>() / den);
    Eigen::VectorXd grad = c.d0 * rng.normal_vector(nv);
    double nt = std::sqrt(ts.tangential.dot(c.M1 * ts.tangential));
    double ng = std::sqrt(grad.dot(c.M1 * grad));
    tang_cross = std::max(tang_cross,
                          std::abs(ts.tangential.dot(c.M1 * grad)) / ((1.0 + nt) * (1.0 + ng)));

    Eigen::VectorXd a = rng.normal_vector(ne);
    CoclosedSplit cs = nontangential_hodge(c, a);
    den = 1.0 + a.lpNorm<Eigen::Infinity>();
    co_recon = std::max(co_recon,
                        (a - cs.coclosed - c.d0 * cs.potential).lpNorm<Eigen::Infinity>() / den);
    co_trace = std::max(co_trace, (c.tr * cs.potential).lpNorm<Eigen::Infinity>() /
                                      (1.0 + cs.potential.lpNorm<Eigen::Infinity>()));
    Eigen::VectorXd div = c.d0.transpose() * (c.M1 * cs.coclosed);
    double dmax = 0.0;
    for (int v : c.interior_vertex_ids) dmax = std::max(dmax, std::abs(div[v]));
    co_div = std::max(co_div, dmax / den);

    Eigen::VectorXd raw = rng.vector(nb);
    BoundaryFunctionSplit sp = split_boundary_function(c, raw);
    den = 1.0 + raw.lpNorm<Eigen::Infinity>();
    bsplit_recon =
        std::max(bsplit_recon, (raw - sp.lg - sp.const_part).lpNorm<Eigen::Infinity>() / den);
    // the mean-free part has zero weighted mean over each component's boundary
    Eigen::VectorXd comp_mean = Eigen::VectorXd::Zero(c.mesh.n_components);
    for (int i = 0; i < nb; ++i)
      comp_mean[c.mesh.vertex_component[c.bvertex_to_vertex[i]]] += c.b0[i] * sp.lg[i];
    bsplit_mean = std::max(bsplit_mean, comp_mean.lpNorm<Eigen::Infinity>() / den);

    Eigen::VectorXd h = split_boundary_function(c, rng.vector(nb)).lg;
    Eigen::VectorXd e = minimal_coclosed_extension(c, h);
    Eigen::VectorXd nf = natural_flux(c, e, Eigen::VectorXd::Zero(nv));
    flux_defect = std::max(flux_defect, (nf - h).lpNorm<Eigen::Infinity>() /
                                            (1.0 + h.lpNorm<Eigen::Infinity>()));
  }

  std::vector<CheckResult> out;
  out.push_back(upper("hodge", "tangential", "max_reconstruction_defect", tang_recon, tol));
  out.push_back(upper("hodge", "tangential", "max_gradient_pairing", tang_cross, tol));
  out.push_back(upper("hodge", "coclosed", "max_reconstruction_defect", co_recon, tol));
  out.push_back(upper("hodge", "coclosed", "max_trace_defect", co_trace, tol));
  out.push_back(upper("hodge", "coclosed", "max_interior_divergence", co_div, tol));
  out.push_back(upper("hodge", "boundary_split", "max_reconstruction_defect", bsplit_recon, tol));
  out.push_back(upper("hodge", "boundary_split", "max_mean_defect", bsplit_mean, tol));
  out.push_back(upper("hodge", "flux_extension", "max_flux_defect", flux_defect, tol));

  // dimension of the locally constant boundary space, one constant per
  // surface component that has a boundary at all
  const std::pair<const char*, const char*> dim_meshes[] = {
      {"annulus", "annulus(1,2,6,40)"},
      {"cylinder_band", "cylinder_band(1,2,24,6)"},
      {"disk", "disk(1,8,32)"},
      {"hemisphere", "hemisphere_north(4,16)"},
      {"sphere", "sphere(2)"},
  };
  for (const auto& [name, spec] : dim_meshes) {
    BoundaryCalculus c(builtin_mesh(spec));
    int expected = 0;
    for (char has : c.mesh.component_has_boundary)
      if (has) ++expected;
    int computed = 0;
    const int nb = c.n_bvertices();
    if (nb > 0) {
      Eigen::MatrixXd img(nb, nb);
      for (int i = 0; i < nb; ++i)
        img.col(i) = split_boundary_function(c, Eigen::VectorXd::Unit(nb, i)).const_part;
      computed = rank_of(img, 1e-9);
    }
    out.push_back(upper("hodge", name, "locally_constant_dim_defect",
                        std::abs(computed - expected), 0.0));
  }
  return out;
}

namespace {

// sup error of the Dirichlet solve against the radial logarithm on an annulus
double dirichlet_log_error(int nr, int na) {
  BoundaryCalculus c(builtin_mesh("annulus(1,2," + std::to_string(nr) + "," +
                                  std::to_string(na) + ")"));
  Eigen::VectorXd f(c.n_bvertices());
  for (int i = 0; i < c.n_bvertices(); ++i)
    f[i] = std::log(c.mesh.vertices.row(c.bvertex_to_vertex[i]).head(2).norm());
  Eigen::VectorXd phi = solve_dirichlet(c, Eigen::VectorXd::Zero(c.n_vertices()), f);
  double err = 0.0;
  for (int v = 0; v < c.n_vertices(); ++v)
    err = std::max(err, std::abs(phi[v] - std::log(c.mesh.vertices.row(v).head(2).norm())));
  return err;
}

}  // namespace

std::vector<CheckResult> verify_bvp(uint64_t seed) {
  std::vector<CheckResult> out;

  {
    BoundaryCalculus c(builtin_mesh("annulus(1,2,8,40)"));
    Rng rng = Rng(seed).child(300);
    Eigen::VectorXd rho = rng.normal_vector(c.n_vertices());
    Eigen::VectorXd f = rng.normal_vector(c.n_bvertices());
    Eigen::VectorXd phi1 = solve_dirichlet(c, rho, f);
    Eigen::VectorXd phi2 = solve_dirichlet(c, rho, f);
    BoundaryCalculus fresh(builtin_mesh("annulus(1,2,8,40)"));
    Eigen::VectorXd phi3 = solve_dirichlet(fresh, rho, f);
    int defects = 0;
    for (int v = 0; v < c.n_vertices(); ++v) {
      if (std::memcmp(&phi1[v], &phi2[v], sizeof(double)) != 0) ++defects;
      if (std::memcmp(&phi1[v], &phi3[v], sizeof(double)) != 0) ++defects;
    }
    out.push_back(upper("bvp", "dirichlet", "repeat_solve_bit_defects", defects, 0.0));
  }

  {
    // the obstruction gate must agree with the discrete integral test; probe
    // imbalances a decade away from the 1e-9 threshold on both sides
    const char* specs[] = {"disk(1,8,32)", "annulus(1,2,6,24)"};
    const double eps[] = {0.0, 1e-15, 1e-13, 1e-12, 1e-11, 1e-10, 1e-8, 1e-7, 1e-5, 1e-3, 1e-1};
    int disagreements = 0;
    Rng rng = Rng(seed).child(301);
    for (const char* spec : specs) {
      BoundaryCalculus c(builtin_mesh(spec));
      const int nb = c.n_bvertices();
      const int nv = c.n_vertices();
      for (double e : eps) {
        Eigen::VectorXd f = split_boundary_function(c, rng.vector(nb)).lg;
        double blen = c.b0.sum();
        double shift = e * (1.0 + c.b0.cwiseProduct(f).lpNorm<1>()) / blen;
        f.array() += shift;
        Eigen::VectorXd rho = Eigen::VectorXd::Zero(nv);
        // the solver's own test: per-component charge against 1e-9 of the
        // data scale
        double scale = 1.0 + c.b0.cwiseProduct(f).lpNorm<1>();
        Eigen::VectorXd charge = Eigen::VectorXd::Zero(c.mesh.n_components);
        for (int i = 0; i < nb; ++i)
          charge[c.mesh.vertex_component[c.bvertex_to_vertex[i]]] += c.b0[i] * f[i];
        bool predicted_ok = charge.lpNorm<Eigen::Infinity>() <= 1e-9 * scale;
        bool solved = true;
        try {
          solve_neumann(c, rho, f);
        } catch (const IncompatibleData&) {
          solved = false;
        }
        if (solved != predicted_ok) ++disagreements;
      }
    }
    out.push_back(upper("bvp", "neumann_gate", "disagreement_count", disagreements, 0.0));
  }

  {
    double e1 = dirichlet_log_error(6, 30);
    double e2 = dirichlet_log_error(12, 60);
    double e3 = dirichlet_log_error(24, 120);
    out.push_back(
        upper("bvp", "log_benchmark", "error_decrease", std::max(e2 - e1, e3 - e2), 0.0));
    out.push_back(
        lower("bvp", "log_benchmark", "convergence_order", std::log2(e1 / e3) / 2.0, 1.0));
  }
  return out;
}

std::vector<CheckResult> verify_canonical(uint64_t seed) {
  const std::pair<const char*, const char*> meshes[] = {
      {"annulus", "annulus(1,2,5,16)"},
      {"cylinder_band", "cylinder_band(1,2,24,6)"},
  };
  std::vector<CheckResult> out;
  uint64_t tag = 0;
  for (const auto& [name, spec] : meshes) {
    BoundaryCalculus c(builtin_mesh(spec));
    Rng rng = Rng(seed).child(400 + tag++);
    double sig_defect = 0.0, round_defect = 0.0, gauge_defect = 0.0;
    for (int k = 0; k < 50; ++k) {
      InitialData d1 = random_homogeneous(c, rng);
      InitialData d2 = random_homogeneous(c, rng);
      double s_data = sigma(c, d1, d2);
      CHHCoords x1 = chh_decompose(c, d1);
      CHHCoords x2 = chh_decompose(c, d2);
      double s_cs = sigma_cs(c, x1, x2);
      sig_defect = std::max(sig_defect, std::abs(s_data - s_cs) / (1.0 + std::abs(s_data)));

      InitialData rep = chh_reconstruct(c, x1, d1.rho);
      CHHCoords x1b = chh_decompose(c, rep);
      round_defect = std::max(round_defect, slot_distance(x1, x1b) / (1.0 + slot_norm(x1)));
    }
    for (int k = 0; k < 25; ++k) {
      Eigen::VectorXd lam = rng.vector(c.n_bvertices());
      CHHCoords xg = chh_decompose(c, gauge_generator(c, lam));
      Eigen::VectorXd want_f = split_boundary_function(c, lam).lg;
      double den = 1.0 + lam.lpNorm<Eigen::Infinity>();
      double defect = xg.F.lpNorm<Eigen::Infinity>();
      defect = std::max(defect, xg.H.lpNorm<Eigen::Infinity>());
      defect = std::max(defect, xg.h.lpNorm<Eigen::Infinity>());
      defect = std::max(defect, (xg.f - want_f).lpNorm<Eigen::Infinity>());
      gauge_defect = std::max(gauge_defect, defect / den);
    }
    out.push_back(upper("canonical", name, "max_sigma_defect", sig_defect, 1e-8));
    out.push_back(upper("canonical", name, "max_roundtrip_defect", round_defect, 1e-8));
    out.push_back(upper("canonical", name, "max_gauge_image_defect", gauge_defect, 1e-8));
  }
  return out;
}

std::vector<CheckResult> verify_radical(uint64_t seed) {
  BoundaryCalculus c(builtin_mesh("annulus(1,2,5,16)"));
  const int ne = c.n_edges();
  const int n_int = static_cast<int>(c.interior_vertex_ids.size());
  std::vector<InitialData> rad = radical_basis(c);
  std::vector<CheckResult> out;
  out.push_back(upper("radical", "annulus", "basis_count_defect",
                      std::abs(static_cast<int>(rad.size()) - n_int), 0.0));

  Eigen::MatrixXd amat(ne, static_cast<int>(rad.size()));
  double e_part = 0.0;
  for (int j = 0; j < amat.cols(); ++j) {
    amat.col(j) = rad[j].a;
    e_part = std::max(e_part, rad[j].e.lpNorm<Eigen::Infinity>());
  }
  out.push_back(upper("radical", "annulus", "basis_rank_defect",
                      std::abs(rank_of(amat, 1e-9) - static_cast<int>(rad.size())) + e_part, 0.0));

  Rng rng = Rng(seed).child(500);
  double pairing = 0.0;
  for (int k = 0; k < 40; ++k) {
    InitialData probe = random_homogeneous(c, rng);
    double scale = 1.0 + probe.a.lpNorm<Eigen::Infinity>() + probe.e.lpNorm<Eigen::Infinity>();
    for (const InitialData& r : rad)
      pairing = std::max(pairing, std::abs(sigma(c, r, probe)) / scale);
  }
  out.push_back(upper("radical", "annulus", "max_pairing", pairing, 1e-9));

  // nullity of the form on the pre-reduced space: a free, e in the weak
  // kernel of the interior divergence rows
  Eigen::MatrixXd div = Eigen::MatrixXd(SpMat(c.d0.transpose() * c.M1));
  Eigen::MatrixXd g(n_int, ne);
  for (int i = 0; i < n_int; ++i) g.row(i) = div.row(c.interior_vertex_ids[i]);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-9 * sv[0]) ++rank;
  Eigen::MatrixXd kernel = svd.matrixV().rightCols(ne - rank);

  const int kd = static_cast<int>(kernel.cols());
  Eigen::MatrixXd m1k = Eigen::MatrixXd(c.M1) * kernel;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(ne + kd, ne + kd);
  s.topRightCorner(ne, kd) = m1k;
  s.bottomLeftCorner(kd, ne) = -m1k.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> ssvd(s);
  const auto& ssv = ssvd.singularValues();
  int nullity = 0;
  for (int i = 0; i < ssv.size(); ++i)
    if (ssv[i] <= 1e-9 * ssv[0]) ++nullity;
  out.push_back(upper("radical", "annulus", "null_dimension_defect",
                      std::abs(nullity - static_cast<int>(rad.size())), 0.0));
  return out;
}

std::vector<CheckResult> verify_flux(uint64_t seed) {
  BoundaryCalculus c(builtin_mesh("cylinder_band(1,2,24,8)"));
  const int ne = c.n_edges();
  const int nv = c.n_vertices();
  InitialData obs0 = flux_observable(c, {0});
  InitialData obs1 = flux_observable(c, {1});
  std::vector<int> band = one_ring_edges(c, support_of(c, obs0));
  std::vector<int> band1 = one_ring_edges(c, support_of(c, obs1));
  band.insert(band.end(), band1.begin(), band1.end());
  std::set<int> blocked(band.begin(), band.end());

  // face -> edge incidence
  std::vector<std::array<int, 3>> face_edges(c.n_cells());
  std::vector<int> filled(c.n_cells(), 0);
  for (int e = 0; e < ne; ++e)
    for (SpMat::InnerIterator it(c.d1, e); it; ++it) {
      int f = static_cast<int>(it.row());
      face_edges[f][filled[f]++] = e;
    }
  std::vector<int> clear_faces;
  for (int f = 0; f < c.n_cells(); ++f)
    if (!blocked.count(face_edges[f][0]) && !blocked.count(face_edges[f][1]) &&
        !blocked.count(face_edges[f][2]))
      clear_faces.push_back(f);

  Eigen::SimplicialLDLT<SpMat> mass(c.M1);
  Rng rng = Rng(seed).child(600);
  double interior_pairing = 0.0;
  for (int k = 0; k < 50; ++k) {
    int f = clear_faces[rng.next_u64() % clear_faces.size()];
    // curl of a single-face 2-form bump, a weakly divergence-free field
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(c.n_cells());
    beta[f] = 1.0 + rng.uniform();
    Eigen::VectorXd e = mass.solve(c.d1.transpose() * c.m2.cwiseProduct(beta));
    e /= e.lpNorm<Eigen::Infinity>();
    InitialData d = InitialData::zero(c);
    d.e = e;
    interior_pairing = std::max(interior_pairing, std::abs(sigma(c, obs0, d)));
    interior_pairing = std::max(interior_pairing, std::abs(sigma(c, obs1, d)));
  }

  double surface_defect = 0.0;
  std::vector<int> circle = boundary_circle_ids(c);
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd h = split_boundary_function(c, rng.vector(c.n_bvertices())).lg;
    InitialData d = InitialData::zero(c);
    d.e = minimal_coclosed_extension(c, h);
    Eigen::VectorXd nf = natural_flux(c, d.e, Eigen::VectorXd::Zero(nv));
    double flux0 = 0.0, flux1 = 0.0;
    for (int i = 0; i < c.n_bvertices(); ++i)
      (circle[i] == 0 ? flux0 : flux1) += c.b0[i] * nf[i];
    surface_defect = std::max(
        surface_defect, std::abs(sigma(c, obs0, d) - flux0) / (1.0 + std::abs(flux0)));
    surface_defect = std::max(
        surface_defect, std::abs(sigma(c, obs1, d) - flux1) / (1.0 + std::abs(flux1)));
  }

  std::vector<CheckResult> out;
  out.push_back(upper("flux", "cylinder_band", "max_interior_pairing", interior_pairing, 1e-10));
  out.push_back(upper("flux", "cylinder_band", "max_surface_flux_defect", surface_defect, 1e-10));
  return out;
}

std::vector<CheckResult> verify_weyl(uint64_t seed) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(8, 8);
  s.topRightCorner(4, 4) = Eigen::MatrixXd::Identity(4, 4);
  s.bottomLeftCorner(4, 4) = -Eigen::MatrixXd::Identity(4, 4);
  SpacePtr ws = make_symplectic_space("acc_std", s);

  Rng rng = Rng(seed).child(700);
  int relation_defects = 0;
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd u = rng.vector(8);
    Eigen::VectorXd v = rng.vector(8);
    WeylElement a = generator(ws, u);
    WeylElement b = generator(ws, v);
    cplx phase = std::exp(cplx(0.0, -0.5 * ws->pair(u, v)));
    if (!bitwise_equal(multiply(a, b), scale(phase, generator(ws, u + v)))) ++relation_defects;
    if (!bitwise_equal(star(a), generator(ws, -u))) ++relation_defects;
  }
  if (!bitwise_equal(generator(ws, Eigen::VectorXd::Zero(8)), WeylElement::unit(ws)))
    ++relation_defects;

  double assoc = 0.0;
  for (int k = 0; k < 50; ++k) {
    WeylElement a = add(generator(ws, rng.vector(8)),
                        scale(cplx(rng.symmetric(), rng.symmetric()), generator(ws, rng.vector(8))));
    WeylElement b = add(generator(ws, rng.vector(8)),
                        scale(cplx(rng.symmetric(), rng.symmetric()), generator(ws, rng.vector(8))));
    WeylElement c = generator(ws, rng.vector(8));
    assoc = std::max(assoc, element_distance(multiply(multiply(a, b), c),
                                             multiply(a, multiply(b, c)), 1e-9));
  }

  double shift_defect = 0.0;
  for (int k = 0; k < 25; ++k) {
    Eigen::VectorXd diff = rng.vector(8);
    WeylElement a = add(generator(ws, rng.vector(8)),
                        scale(cplx(rng.symmetric(), rng.symmetric()), generator(ws, rng.vector(8))));
    WeylElement manual = WeylElement::zero(ws);
    for (const auto& [key, term] : a.terms())
      manual = add(manual, scale(term.c * std::exp(cplx(0.0, ws->pair(term.v, diff))),
                                 generator(ws, term.v)));
    shift_defect = std::max(shift_defect, element_distance(background_shift(a, diff), manual, 1e-9));
  }

  // exact commutation for one-ring separated supports: the pairing sums only
  // stored zeros, so both products carry the same phase bit for bit
  BoundaryCalculus c(builtin_mesh("cylinder_band(1,2,16,5)"));
  const int ne = c.n_edges();
  Eigen::MatrixXd m1d = Eigen::MatrixXd(c.M1);
  Eigen::MatrixXd cs = Eigen::MatrixXd::Zero(2 * ne, 2 * ne);
  cs.topRightCorner(ne, ne) = m1d;
  cs.bottomLeftCorner(ne, ne) = -m1d;
  SpacePtr cauchy = make_symplectic_space("acc_edges", cs);
  int commute_defects = 0;
  for (int k = 0; k < 20; ++k) {
    int v1 = c.interior_vertex_ids[rng.next_u64() % c.interior_vertex_ids.size()];
    std::vector<int> sup1 = edge_star(c, v1);
    std::vector<int> ring = one_ring_edges(c, sup1);
    std::set<int> ring_set(ring.begin(), ring.end());
    int v2 = -1;
    for (int tries = 0; tries < 200 && v2 < 0; ++tries) {
      int cand = c.interior_vertex_ids[rng.next_u64() % c.interior_vertex_ids.size()];
      bool clear = true;
      for (int e : edge_star(c, cand))
        if (ring_set.count(e)) clear = false;
      if (clear) v2 = cand;
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * ne);
    for (int e : sup1) {
      x[e] = rng.symmetric();
      x[ne + e] = rng.symmetric();
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(2 * ne);
    for (int e : edge_star(c, v2)) {
      y[e] = rng.symmetric();
      y[ne + e] = rng.symmetric();
    }
    WeylElement a = generator(cauchy, x);
    WeylElement b = generator(cauchy, y);
    if (!bitwise_equal(multiply(a, b), multiply(b, a))) ++commute_defects;
  }

  std::vector<CheckResult> out;
  out.push_back(upper("weyl", "relations", "bit_defects", relation_defects, 0.0));
  out.push_back(upper("weyl", "associativity", "max_defect", assoc, 1e-12));
  out.push_back(upper("weyl", "background_shift", "max_defect", shift_defect, 1e-12));
  out.push_back(upper("weyl", "disjoint_support", "bit_defects", commute_defects, 0.0));
  return out;
}

std::vector<CheckResult> verify_states(uint64_t seed) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(10, 10);
  s.topRightCorner(5, 5) = Eigen::MatrixXd::Identity(5, 5);
  s.bottomLeftCorner(5, 5) = -Eigen::MatrixXd::Identity(5, 5);
  SpacePtr ws = make_symplectic_space("acc_states", s);
  std::vector<CheckResult> out;

  QuasiFreeState base = l2_state(ws);
  out.push_back(
      upper("states", "l2", "domination_margin", domination_margin(ws, base.mu), 1.0 + 1e-10));

  Rng rng = Rng(seed).child(800);
  Eigen::VectorXd dir = rng.normal_vector(10).normalized();
  QuasiFreeState wide = make_state(
      ws, 0.5 * Eigen::MatrixXd::Identity(10, 10) + 0.4 * dir * dir.transpose());
  std::vector<Eigen::VectorXd> labels;
  for (int k = 0; k < 20; ++k) labels.push_back(rng.vector(10));
  out.push_back(
      lower("states", "gram", "min_eigenvalue", gram_min_eigenvalue(wide, labels), -1e-10));

  QuasiFreeState shifted = make_state(ws, wide.mu, rng.vector(10));
  int defects = 0;
  for (int k = 0; k < 25; ++k) {
    Eigen::VectorXd v = rng.vector(10);
    cplx lhs = evaluate(shifted, generator(ws, v));
    cplx rhs = cplx(1.0, 0.0) * std::exp(cplx(0.0, shifted.ell.dot(v))) *
               std::exp(-0.5 * v.dot(shifted.mu * v));
    if (!(lhs == rhs)) ++defects;
  }
  for (int k = 0; k < 5; ++k) {
    WeylElement a = WeylElement::zero(ws);
    for (int t = 0; t < 3; ++t)
      a.add_term(rng.vector(10), cplx(rng.symmetric(), rng.symmetric()));
    cplx acc(0.0, 0.0);
    for (const auto& [key, term] : a.terms())
      acc += term.c * std::exp(cplx(0.0, shifted.ell.dot(term.v))) *
             std::exp(-0.5 * term.v.dot(shifted.mu * term.v));
    if (!(evaluate(shifted, a) == acc)) ++defects;
  }
  out.push_back(upper("states", "factorization", "bit_defects", defects, 0.0));
  return out;
}

namespace {

struct RelFrame {
  BoundaryCalculus c;
  ChhSpace s;
  ExtendedSpace x;
  RelFrame() : c(builtin_mesh("annulus(1,2,6,30)")), s(make_chh_space(c, "acc_bulk")),
               x(make_extended_space(s)) {}
};

}  // namespace

std::vector<CheckResult> verify_relativisation(uint64_t seed) {
  RelFrame f;
  Rng rng = Rng(seed).child(900);
  const int dim = f.s.space->dim;

  int hom_defects = 0;
  for (int k = 0; k < 50; ++k) {
    WeylElement a = generator(f.s.space, rng.vector(dim));
    WeylElement b = generator(f.s.space, rng.vector(dim));
    if (!bitwise_equal(relativise(f.x, multiply(a, b)),
                       multiply(relativise(f.x, a), relativise(f.x, b))))
      ++hom_defects;
  }

  WeylElement bulk = WeylElement::zero(f.s.space);
  for (int t = 0; t < 3; ++t)
    bulk.add_term(rng.vector(dim), cplx(rng.symmetric(), rng.symmetric()));
  WeylElement ra = relativise(f.x, bulk);
  double invariance = 0.0;
  for (int k = 0; k < 25; ++k) {
    Eigen::VectorXd lam = rng.vector(f.c.n_bvertices());
    invariance = std::max(invariance, element_distance(joint_large_gauge(f.x, ra, lam), ra, 1e-9));
  }

  double cond = element_distance(gamma(f.x, ra), bulk, 1e-9);
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd u = rng.vector(dim);
    cond = std::max(cond, element_distance(gamma(f.x, relativise(f.x, generator(f.s.space, u))),
                                           generator(f.s.space, u), 1e-9));
    WeylElement ug = generator(f.x.total, gauge_direction(f.x, rng.vector(f.s.ns)));
    cond = std::max(cond, element_distance(gamma(f.x, ug), WeylElement::unit(f.s.space), 1e-9));
  }

  double factor = 0.0;
  for (int k = 0; k < 25; ++k) {
    Eigen::VectorXd u = rng.vector(dim);
    Eigen::VectorXd fu = u.segment(2 * f.s.nc, f.s.ns);
    Eigen::VectorXd hu = u.segment(2 * f.s.nc + f.s.ns, f.s.ns);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(f.x.total->dim);
    y.segment(dim, f.s.ns) = fu;
    WeylElement lhs =
        multiply(relativise(f.x, generator(f.s.space, u)), generator(f.x.total, y));
    Eigen::VectorXd full = embed_with_dressing(f.x, u);
    full.segment(dim, f.s.ns) = fu;
    WeylElement rhs =
        scale(std::exp(cplx(0.0, -0.5 * fu.dot(hu))), generator(f.x.total, full));
    factor = std::max(factor, element_distance(lhs, rhs, 1e-9));
  }

  std::vector<CheckResult> out;
  out.push_back(upper("relativisation", "homomorphism", "bit_defects", hom_defects, 0.0));
  out.push_back(upper("relativisation", "invariance", "max_defect", invariance, 1e-12));
  out.push_back(upper("relativisation", "conditional_expectation", "max_defect", cond, 1e-12));
  out.push_back(upper("relativisation", "factorization", "max_defect", factor, 1e-12));
  return out;
}

std::vector<CheckResult> verify_observer_charges(uint64_t seed) {
  RelFrame f;
  Rng rng = Rng(seed).child(1000);
  QuasiFreeState w = l2_state(f.s.space);

  double phase_defect = 0.0;
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd phi = rng.vector(f.s.ns);
    Eigen::VectorXd lam = rng.vector(f.s.ns);
    WeylElement ug = generator(f.x.total, gauge_direction(f.x, lam));
    cplx got = evaluate(w, gamma_phi(f.x, ug, phi));
    phase_defect = std::max(phase_defect, std::abs(got - std::exp(cplx(0.0, phi.dot(lam)))));
  }

  Eigen::VectorXd phi1 = rng.vector(f.s.ns);
  Eigen::VectorXd phi2 = rng.vector(f.s.ns);
  double separation = 0.0;
  for (int k = 0; k < f.s.ns; ++k) {
    Eigen::VectorXd lam = Eigen::VectorXd::Unit(f.s.ns, k);
    WeylElement ug = generator(f.x.total, gauge_direction(f.x, lam));
    cplx v1 = evaluate(w, gamma_phi(f.x, ug, phi1));
    cplx v2 = evaluate(w, gamma_phi(f.x, ug, phi2));
    separation = std::max(separation, std::abs(v1 - v2));
  }

  std::vector<CheckResult> out;
  out.push_back(upper("observer_charges", "phases", "max_defect", phase_defect, 1e-10));
  out.push_back(lower("observer_charges", "separation", "best_basis_gap", separation, 1e-6));
  return out;
}

std::vector<CheckResult> verify_truncation(uint64_t seed) {
  RelFrame f;
  Rng rng = Rng(seed).child(1100);
  Eigen::VectorXd theta = angular_spectrum(f.c);
  const double top = theta[theta.size() - 1];

  int exact_defects = 0;
  for (int k = 0; k < 5; ++k) {
    WeylElement a = generator(f.s.space, rng.vector(f.s.space->dim));
    if (!bitwise_equal(truncated_relativise(f.x, a, top), relativise(f.x, a))) ++exact_defects;
    if (!bitwise_equal(truncated_relativise(f.x, a, 2.0 * top), relativise(f.x, a)))
      ++exact_defects;
  }

  const double cuts[] = {0.0, theta[theta.size() / 4], theta[theta.size() / 2],
                         theta[3 * theta.size() / 4], top};
  double max_increase = -std::numeric_limits<double>::infinity();
  double full_error = 0.0;
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd h = rng.vector(f.s.ns);
    double prev = -1.0;
    for (double cut : cuts) {
      Eigen::MatrixXd pi = angular_projector(f.c, cut);
      double err = (h - pi * h).norm();
      if (prev >= 0.0) max_increase = std::max(max_increase, err - prev);
      prev = err;
    }
    full_error = std::max(full_error, prev);
  }

  std::vector<CheckResult> out;
  out.push_back(upper("truncation", "exact_at_top", "bit_defects", exact_defects, 0.0));
  out.push_back(upper("truncation", "ladder", "max_error_increase", max_increase, 1e-12));
  out.push_back(upper("truncation", "ladder", "full_projector_error", full_error, 1e-9));
  return out;
}

namespace {

std::vector<int> identity_match(int n) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) m[i] = i;
  return m;
}

Eigen::VectorXd random_invariant_label(const GluingSetup& g, Rng& rng) {
  const int nc1 = g.side1->nc;
  const int nc2 = g.side2->nc;
  const int ns = g.side1->ns;
  Eigen::VectorXd v = rng.vector(2 * nc1 + 2 * nc2 + 4 * ns);
  v.tail(ns) = -(g.transfer * v.segment(2 * nc1 + ns, ns));
  return v;
}

}  // namespace

std::vector<CheckResult> verify_gluing(uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng = Rng(seed).child(1200);

  {
    BoundaryCalculus cn(builtin_mesh("hemisphere_north(3,12)"));
    BoundaryCalculus cs(builtin_mesh("hemisphere_south(3,12)"));
    ChhSpace sn = make_chh_space(cn, "acc_n");
    ChhSpace ss = make_chh_space(cs, "acc_s");
    GluingSetup g = make_gluing(sn, ss, identity_match(cn.n_bvertices()), true);

    double diagram = 0.0;
    for (int k = 0; k < 50; ++k) {
      WeylElement a = generator(g.half12, rng.vector(g.half12->dim));
      diagram = std::max(
          diagram, element_distance(psi_circle_bullet(g, xi_21(g, a)), psi_bullet_circle(g, a),
                                    1e-9));
    }
    out.push_back(upper("gluing", "diagram", "max_defect", diagram, 1e-12));

    double ideal = 0.0;
    for (int k = 0; k < 10; ++k) {
      WeylElement ug = diagonal_gauge_unitary(g, rng.vector(g.side1->ns));
      ideal = std::max(ideal,
                       element_distance(won_normal_form(g, ug), WeylElement::unit(g.glued), 1e-9));
      WeylElement a = generator(g.pair12, random_invariant_label(g, rng));
      ideal = std::max(ideal, element_distance(won_normal_form(g, multiply(a, ug)),
                                               won_normal_form(g, a), 1e-9));
    }
    out.push_back(upper("gluing", "ideal", "max_defect", ideal, 1e-10));

    // equal modes for a factorizing reference state, strict separation for a
    // correlated covariance that mixes a closed-loop mode into the surface
    QuasiFreeState l2n = l2_state(sn.space);
    QuasiFreeState l2s = l2_state(ss.space);
    GluedState st12 = glue_states(g, l2n, l2s, GlueMode::one_two);
    GluedState st21 = glue_states(g, l2n, l2s, GlueMode::two_one);
    GluedState stmix = glue_states(g, l2n, l2s, GlueMode::mix);
    double l2_defect = 0.0;
    double mix_defect = 0.0;
    for (int k = 0; k < 5; ++k) {
      WeylElement a = WeylElement::zero(g.glued);
      for (int t = 0; t < 3; ++t)
        a.add_term(0.3 * rng.vector(g.glued->dim), cplx(rng.symmetric(), rng.symmetric()));
      cplx v12 = evaluate(st12, a);
      cplx v21 = evaluate(st21, a);
      l2_defect = std::max(l2_defect, std::abs(v12 - v21));
      mix_defect = std::max(mix_defect, std::abs(evaluate(stmix, a) - 0.5 * (v12 + v21)));
    }
    out.push_back(upper("gluing", "modes", "l2_equal_defect", l2_defect + mix_defect, 1e-12));

    const int nc1 = sn.nc;
    const int ns = sn.ns;
    const int d1 = sn.space->dim;
    Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(d1, d1);  // (F,H,f,h) -> ((F,f),(H,h))
    for (int i = 0; i < nc1; ++i) {
      perm(i, i) = 1.0;
      perm(nc1 + ns + i, nc1 + i) = 1.0;
    }
    for (int i = 0; i < ns; ++i) {
      perm(nc1 + i, 2 * nc1 + i) = 1.0;
      perm(2 * nc1 + ns + i, 2 * nc1 + ns + i) = 1.0;
    }
    const int half = nc1 + ns;
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(half, half);
    cross(0, nc1) = 0.4;  // couples H_0 with the first surface mode
    cross(nc1, 0) = 0.4;
    Eigen::MatrixXd mu_std(d1, d1);
    mu_std.topLeftCorner(half, half) = 0.5 * Eigen::MatrixXd::Identity(half, half);
    mu_std.topRightCorner(half, half) = 0.5 * cross.transpose();
    mu_std.bottomLeftCorner(half, half) = 0.5 * cross;
    mu_std.bottomRightCorner(half, half) =
        0.5 * (Eigen::MatrixXd::Identity(half, half) + cross * cross.transpose());
    QuasiFreeState corr = make_state(sn.space, perm.transpose() * mu_std * perm);
    GluedState c12 = glue_states(g, corr, l2s, GlueMode::one_two);
    GluedState c21 = glue_states(g, corr, l2s, GlueMode::two_one);
    Eigen::VectorXd probe = Eigen::VectorXd::Zero(g.glued->dim);
    probe[nc1] = 1.0;      // H_0 of side 1
    probe[2 * nc1] = 1.0;  // first shared surface mode
    WeylElement pa = generator(g.glued, probe);
    out.push_back(lower("gluing", "modes", "correlated_separation",
                        std::abs(evaluate(c12, pa) - evaluate(c21, pa)), 1e-3));

    CompatibilityReport rep = compatibility_check(g, l2n, l2s);
    out.push_back(upper("gluing", "compatibility", "max_defect",
                        rep.compatible ? rep.max_defect : 1.0, 1e-10));
  }

  {
    BoundaryCalculus cn(builtin_mesh("hemisphere_north(4,16)"));
    BoundaryCalculus cs(builtin_mesh("hemisphere_south(4,16)"));
    ChhSpace sn = make_chh_space(cn, "acc_gn");
    ChhSpace ss = make_chh_space(cs, "acc_gs");
    GluingSetup g = make_gluing(sn, ss, identity_match(cn.n_bvertices()), true);
    attach_global(g);
    const BoundaryCalculus& cu = *g.global->calc;

    double additivity = 0.0;
    for (int k = 0; k < 100; ++k) {
      InitialData dx = random_homogeneous(cu, rng);
      InitialData dy = random_homogeneous(cu, rng);
      double s_global = sigma(cu, dx, dy);
      Eigen::VectorXd lx = glued_label(g, reduce_global(g, dx));
      Eigen::VectorXd ly = glued_label(g, reduce_global(g, dy));
      additivity = std::max(additivity, std::abs(g.glued->pair(lx, ly) - s_global) /
                                            (1.0 + std::abs(s_global)));
    }
    out.push_back(upper("gluing", "additivity", "max_sigma_defect", additivity, 1e-8));

    // data supported strictly inside side 1 evaluates like the side-1 state
    std::vector<char> seam(cu.n_vertices(), 0);
    for (int v : cn.bvertex_to_vertex) seam[g.global->side1_vertex[v]] = 1;
    QuasiFreeState w1 = l2_state(sn.space);
    QuasiFreeState w2 = l2_state(ss.space);
    GluedState st = glue_states(g, w1, w2, GlueMode::one_two);
    GluedState stm = glue_states(g, w1, w2, GlueMode::mix);
    double interior_defect = 0.0;
    for (int k = 0; k < 3; ++k) {
      InitialData d = InitialData::zero(cu);
      for (int e = 0; e < cn.n_edges(); ++e) {
        int a = cn.mesh.edges(e, 0);
        int b = cn.mesh.edges(e, 1);
        if (seam[g.global->side1_vertex[a]] || seam[g.global->side1_vertex[b]]) continue;
        // amplitude kept small so the Gaussian values stay O(1)
        d.a[g.global->side1_edge[e]] = 0.3 * rng.symmetric();
      }
      WeylElement emb = embed_global(g, d);
      InitialData own = InitialData::zero(cn);
      own.a = restrict_to_side(g, 1, d.a);
      Eigen::VectorXd vown = coords_of(sn, chh_decompose(cn, own));
      cplx expect = evaluate(w1, generator(sn.space, vown));
      interior_defect = std::max(interior_defect, std::abs(evaluate(st, emb) - expect));
      interior_defect = std::max(interior_defect, std::abs(evaluate(stm, emb) - expect));
    }
    out.push_back(
        upper("gluing", "interior_restriction", "max_value_defect", interior_defect, 1e-10));
  }
  return out;
}

std::vector<CheckResult> verify_reproducibility(uint64_t seed) {
  auto subset = [](uint64_t s) {
    std::vector<CheckResult> rows;
    for (auto fn : {&verify_canonical, &verify_weyl, &verify_states, &verify_flux}) {
      std::vector<CheckResult> r = fn(s);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    return csv_report(std::move(rows), s);
  };
  std::string first = subset(seed);
  std::string second = subset(seed);
  std::vector<CheckResult> out;
  out.push_back(upper("reproducibility", "rerun", "report_byte_defects",
                      first == second ? 0.0 : 1.0, 0.0));
  return out;
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {
      "green",  "hodge",          "bvp",
      "canonical", "radical",     "flux",
      "weyl",   "states",         "relativisation",
      "observer_charges", "truncation", "gluing",
      "reproducibility"};
  return names;
}

namespace {

using SuiteFn = std::vector<CheckResult> (*)(uint64_t);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> reg = {
      {"green", &verify_green},
      {"hodge", &verify_hodge},
      {"bvp", &verify_bvp},
      {"canonical", &verify_canonical},
      {"radical", &verify_radical},
      {"flux", &verify_flux},
      {"weyl", &verify_weyl},
      {"states", &verify_states},
      {"relativisation", &verify_relativisation},
      {"observer_charges", &verify_observer_charges},
      {"truncation", &verify_truncation},
      {"gluing", &verify_gluing},
      {"reproducibility", &verify_reproducibility},
  };
  return reg;
}

}  // namespace

std::vector<CheckResult> run_verify(const std::string& suite, uint64_t seed) {
  std::vector<CheckResult> rows;
  bool found = false;
  for (const auto& [name, fn] : registry()) {
    if (suite != "all" && suite != name) continue;
    found = true;
    std::vector<CheckResult> r = fn(seed);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (!found) throw ValidationError("unknown verify suite: " + suite);
  return rows;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    if (!r.pass) return false;
  return !results.empty();
}

std::string csv_report(std::vector<CheckResult> results, uint64_t seed) {
  std::stable_sort(results.begin(), results.end(),
                   [](const CheckResult& a, const CheckResult& b) {
                     return std::tie(a.suite, a.name, a.quantity) <
                            std::tie(b.suite, b.name, b.quantity);
                   });
  auto fmt = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  std::string out = "# lens verify 0.1.0\n# seed=" + std::to_string(seed) +
                    "\nsuite,case,quantity,value,tolerance,pass\n";
  for (const CheckResult& r : results) {
    out += r.suite;
    out += ',';
    out += r.name;
    out += ',';
    out += r.quantity;
    out += ',';
    out += fmt(r.value);
    out += ',';
    out += fmt(r.tolerance);
    out += ',';
    out += r.pass ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace lens
