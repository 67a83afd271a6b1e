#include "lens/hodge.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <Eigen/SVD>

#include "cache_impl.hpp"

namespace lens {

namespace {

constexpr double kCompatTol = 1e-9;
constexpr double kSolveTol = 1e-10;
constexpr double kRankTol = 1e-9;
constexpr int kDenseEdgeCap = 4000;

const SpMat& stiffness(const BoundaryCalculus& c, CalculusCache& k) {
  if (!k.stiffness) k.stiffness = SpMat(SpMat(c.d0.transpose()) * c.M1 * c.d0);
  return *k.stiffness;
}

const SpMat& d0t_m1(const BoundaryCalculus& c, CalculusCache& k) {
  if (!k.d0t_m1) k.d0t_m1 = SpMat(SpMat(c.d0.transpose()) * c.M1);
  return *k.d0t_m1;
}

SpMat submatrix(const SpMat& s, const std::vector<int>& index, int nsub) {
  // index maps full row/col -> sub position or -1
  std::vector<Eigen::Triplet<double>> trip;
  for (int outer = 0; outer < s.outerSize(); ++outer)
    for (SpMat::InnerIterator it(s, outer); it; ++it) {
      int r = index[it.row()], c = index[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  SpMat out(nsub, nsub);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

void build_dirichlet(const BoundaryCalculus& c, CalculusCache& k) {
  if (k.dirichlet) return;
  const int nv = c.n_vertices();
  k.closed_pinned.assign(c.mesh.n_components, -1);
  std::vector<char> pin(nv, 0);
  for (int v = 0; v < nv; ++v) {
    int comp = c.mesh.vertex_component[v];
    if (!c.mesh.component_has_boundary[comp] && k.closed_pinned[comp] < 0) {
      k.closed_pinned[comp] = v;
      pin[v] = 1;
    }
  }
  k.dir_unknowns.clear();
  k.dir_index.assign(nv, -1);
  for (int v : c.interior_vertex_ids)
    if (!pin[v]) {
      k.dir_index[v] = static_cast<int>(k.dir_unknowns.size());
      k.dir_unknowns.push_back(v);
    }
  SpMat s = submatrix(stiffness(c, k), k.dir_index, static_cast<int>(k.dir_unknowns.size()));
  k.dirichlet = std::make_unique<Eigen::SimplicialLLT<SpMat>>();
  if (!k.dir_unknowns.empty()) {
    k.dirichlet->compute(s);
    if (k.dirichlet->info() != Eigen::Success)
      throw SolverFailure("Dirichlet stiffness factorization failed");
  }
}

void build_neumann(const BoundaryCalculus& c, CalculusCache& k) {
  if (k.neumann) return;
  const int nv = c.n_vertices();
  k.pinned_vertex.assign(c.mesh.n_components, -1);
  k.reduced_index.assign(nv, -1);
  int row = 0;
  for (int v = 0; v < nv; ++v) {
    int comp = c.mesh.vertex_component[v];
    if (k.pinned_vertex[comp] < 0)
      k.pinned_vertex[comp] = v;  // smallest vertex of each component
    else
      k.reduced_index[v] = row++;
  }
  SpMat s = submatrix(stiffness(c, k), k.reduced_index, row);
  k.neumann = std::make_unique<Eigen::SimplicialLLT<SpMat>>();
  if (row > 0) {
    k.neumann->compute(s);
    if (k.neumann->info() != Eigen::Success)
      throw SolverFailure("Neumann stiffness factorization failed");
  }
}

// solve the pinned system S phi = rhs, scatter with zeros at pinned vertices
Eigen::VectorXd neumann_solve_raw(const BoundaryCalculus& c, CalculusCache& k,
                                  const Eigen::VectorXd& rhs) {
  build_neumann(c, k);
  const int nred = static_cast<int>(rhs.size()) - c.mesh.n_components;
  Eigen::VectorXd r(nred);
  for (int v = 0; v < c.n_vertices(); ++v)
    if (k.reduced_index[v] >= 0) r[k.reduced_index[v]] = rhs[v];
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nred);
  if (nred > 0) {
    x = k.neumann->solve(r);
    SpMat s = submatrix(stiffness(c, k), k.reduced_index, nred);
    double resid = (s * x - r).norm();
    if (!(resid <= kSolveTol * (1.0 + r.norm())))
      throw SolverFailure("Neumann solve residual too large");
  }
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(c.n_vertices());
  for (int v = 0; v < c.n_vertices(); ++v)
    if (k.reduced_index[v] >= 0) phi[v] = x[k.reduced_index[v]];
  return phi;
}

void mean_center(const BoundaryCalculus& c, Eigen::VectorXd& phi) {
  for (int comp = 0; comp < c.mesh.n_components; ++comp) {
    double num = 0.0, den = 0.0;
    for (int v = 0; v < c.n_vertices(); ++v)
      if (c.mesh.vertex_component[v] == comp) {
        num += c.m0[v] * phi[v];
        den += c.m0[v];
      }
    double mean = num / den;
    for (int v = 0; v < c.n_vertices(); ++v)
      if (c.mesh.vertex_component[v] == comp) phi[v] -= mean;
  }
}

// Cholesky-based orthonormalization of the columns of B in the inner product
// given by gram(B). Two passes keep the result orthonormal to roundoff even
// for moderately ill conditioned inputs.
template <typename GramFn>
Eigen::MatrixXd orthonormalize(Eigen::MatrixXd B, GramFn gram) {
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::MatrixXd G = gram(B);
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) throw EigensolveFailure("basis orthonormalization failed");
    B = llt.matrixU().solve<Eigen::OnTheRight>(B);
  }
  for (int j = 0; j < B.cols(); ++j) {
    double mx = B.col(j).cwiseAbs().maxCoeff();
    for (int i = 0; i < B.rows(); ++i)
      if (std::abs(B(i, j)) > 1e-8 * mx) {
        if (B(i, j) < 0) B.col(j) = -B.col(j);
        break;
      }
  }
  return B;
}

}  // namespace

Eigen::VectorXd solve_dirichlet(const BoundaryCalculus& c, const Eigen::VectorXd& rho,
                                const Eigen::VectorXd& f) {
  if (rho.size() != c.n_vertices()) throw MeshMismatch("dirichlet source size");
  if (f.size() != c.n_bvertices()) throw MeshMismatch("dirichlet boundary data size");
  CalculusCache& k = c.cache();
  std::lock_guard<std::recursive_mutex> lock(k.m);
  build_dirichlet(c, k);

  Eigen::VectorXd m0rho = c.m0.cwiseProduct(rho);
  double scale = 1.0 + m0rho.lpNorm<1>();
  for (int comp = 0; comp < c.mesh.n_components; ++comp) {
    if (c.mesh.component_has_boundary[comp]) continue;
    double q = 0.0;
    for (int v = 0; v < c.n_vertices(); ++v)
      if (c.mesh.vertex_component[v] == comp) q += m0rho[v];
    if (!(std::abs(q) <= kCompatTol * scale))
      throw IncompatibleData("source on a closed component must integrate to zero");
  }

  Eigen::VectorXd known = Eigen::VectorXd::Zero(c.n_vertices());
  for (int i = 0; i < c.n_bvertices(); ++i) known[c.bvertex_to_vertex[i]] = f[i];
  Eigen::VectorXd rhs_full = m0rho - stiffness(c, k) * known;
  const int nu = static_cast<int>(k.dir_unknowns.size());
  Eigen::VectorXd rhs(nu);
  for (int i = 0; i < nu; ++i) rhs[i] = rhs_full[k.dir_unknowns[i]];
  Eigen::VectorXd phi = known;
  if (nu > 0) {
    Eigen::VectorXd x = k.dirichlet->solve(rhs);
    SpMat s = submatrix(stiffness(c, k), k.dir_index, nu);
    if (!((s * x - rhs).norm() <= kSolveTol * (1.0 + rhs.norm())))
      throw SolverFailure("Dirichlet solve residual too large");
    for (int i = 0; i < nu; ++i) phi[k.dir_unknowns[i]] = x[i];
  }
  // canonical representative on closed components
  for (int comp = 0; comp < c.mesh.n_components; ++comp) {
    if (c.mesh.component_has_boundary[comp]) continue;
    double num = 0.0, den = 0.0;
    for (int v = 0; v < c.n_vertices(); ++v)
      if (c.mesh.vertex_component[v] == comp) {
        num += c.m0[v] * phi[v];
        den += c.m0[v];
      }
    for (int v = 0; v < c.n_vertices(); ++v)
      if (c.mesh.vertex_component[v] == comp) phi[v] -= num / den;
  }
  return phi;
}

Eigen::VectorXd solve_neumann(const BoundaryCalculus& c, const Eigen::VectorXd& rho,
                              const Eigen::VectorXd& f) {
  if (rho.size() != c.n_vertices()) throw MeshMismatch("neumann source size");
  if (f.size() != c.n_bvertices()) throw MeshMismatch("neumann flux data size");
  CalculusCache& k = c.cache();
  std::lock_guard<std::recursive_mutex> lock(k.m);

  Eigen::VectorXd m0rho = c.m0.cwiseProduct(rho);
  Eigen::VectorXd b0f = c.b0.cwiseProduct(f);
  double scale = 1.0 + m0rho.lpNorm<1>() + b0f.lpNorm<1>();

  std::vector<double> defect(c.mesh.n_components, 0.0);
  std::vector<double> bmass(c.mesh.n_components, 0.0), vmass(c.mesh.n_components, 0.0);
  for (int v = 0; v < c.n_vertices(); ++v) {
    defect[c.mesh.vertex_component[v]] += m0rho[v];
    vmass[c.mesh.vertex_component[v]] += c.m0[v];
  }
  for (int i = 0; i < c.n_bvertices(); ++i) {
    int comp = c.mesh.vertex_component[c.bvertex_to_vertex[i]];
    defect[comp] += b0f[i];
    bmass[comp] += c.b0[i];
  }
  for (int comp = 0; comp < c.mesh.n_components; ++comp)
    if (!(std::abs(defect[comp]) <= kCompatTol * scale))
      throw IncompatibleData("flux data violates the integral constraint on component " +
                             std::to_string(comp));

  // remove the (tolerance checked) defect so the pinned solve is consistent
  Eigen::VectorXd rhs = m0rho;
  for (int i = 0; i < c.n_bvertices(); ++i) rhs[c.bvertex_to_vertex[i]] += b0f[i];
  for (int v = 0; v < c.n_vertices(); ++v) {
    int comp = c.mesh.vertex_component[v];
    if (c.mesh.component_has_boundary[comp]) {
      if (c.mesh.on_boundary[v])
        rhs[v] -= defect[comp] * c.b0[c.vertex_to_bvertex[v]] / bmass[comp];
    } else {
      rhs[v] -= defect[comp] * c.m0[v] / vmass[comp];
    }
  }

  Eigen::VectorXd phi = neumann_solve_raw(c, k, rhs);
  mean_center(c, phi);
  return phi;
}

TangentialSplit tangential_hodge_helmholtz(const BoundaryCalculus& c, const Eigen::VectorXd& beta) {
  if (beta.size() != c.n_edges()) throw MeshMismatch("1-cochain size");
  CalculusCache& k = c.cache();
  std::lock_guard<std::recursive_mutex> lock(k.m);
  Eigen::VectorXd rhs = d0t_m1(c, k) * beta;
  Eigen::VectorXd alpha = neumann_solve_raw(c, k, rhs);
  mean_center(c, alpha);
  return {beta - c.d0 * alpha, alpha};
}

CoclosedSplit nontangential_hodge(const BoundaryCalculus& c, const Eigen::VectorXd& a) {
  if (a.size() != c.n_edges()) throw MeshMismatch("1-cochain size");
  CalculusCache& k = c.cache();
  std::lock_guard<std::recursive_mutex> lock(k.m);
  build_dirichlet(c, k);
  Eigen::VectorXd rhs_full = d0t_m1(c, k) * a;
  const int nu = static_cast<int>(k.dir_unknowns.size());
  Eigen::VectorXd rhs(nu);
  for (int i = 0; i < nu; ++i) rhs[i] = rhs_full[k.dir_unknowns[i]];
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(c.n_vertices());
  if (nu > 0) {
    Eigen::VectorXd x = k.dirichlet->solve(rhs);
    SpMat s = submatrix(stiffness(c, k), k.dir_index, nu);
    if (!((s * x - rhs).norm() <= kSolveTol * (1.0 + rhs.norm())))
      throw SolverFailure("coclosed projection residual too large");
    for (int i = 0; i < nu; ++i) lambda[k.dir_unknowns[i]] = x[i];
  }
  // canonical: closed components carry a zero-mean potential
  for (int comp = 0; comp < c.mesh.n_components; ++comp) {
    if (c.mesh.component_has_boundary[comp]) continue;
    double num = 0.0, den = 0.0;
    for (int v = 0; v < c.n_vertices(); ++v)
      if (c.mesh.vertex_component[v] == comp) {
        num += c.m0[v] * lambda[v];
        den += c.m0[v];
      }
    for (int v = 0; v < c.n_vertices(); ++v)
      if (c.mesh.vertex_component[v] == comp) lambda[v] -= num / den;
  }
  return {a - c.d0 * lambda, lambda};
}

BoundaryFunctionSplit split_boundary_function(const BoundaryCalculus& c, const Eigen::VectorXd& u) {
  if (u.size() != c.n_bvertices()) throw MeshMismatch("boundary function size");
  std::vector<double> num(c.mesh.n_components, 0.0), den(c.mesh.n_components, 0.0);
  for (int i = 0; i < c.n_bvertices(); ++i) {
    int comp = c.mesh.vertex_component[c.bvertex_to_vertex[i]];
    num[comp] += c.b0[i] * u[i];
    den[comp] += c.b0[i];
  }
  BoundaryFunctionSplit out;
  out.const_part.resize(u.size());
  for (int i = 0; i < c.n_bvertices(); ++i) {
    int comp = c.mesh.vertex_component[c.bvertex_to_vertex[i]];
    out.const_part[i] = num[comp] / den[comp];
  }
  out.lg = u - out.const_part;
  return out;
}

Eigen::VectorXd minimal_coclosed_extension(const BoundaryCalculus& c, const Eigen::VectorXd& h) {
  Eigen::VectorXd xi = solve_neumann(c, Eigen::VectorXd::Zero(c.n_vertices()), h);
  return c.d0 * xi;
}

const Eigen::MatrixXd& tangential_space_basis(const BoundaryCalculus& c) {
  CalculusCache& k = c.cache();
  std::lock_guard<std::recursive_mutex> lock(k.m);
  if (k.tangential_basis) return *k.tangential_basis;
  if (c.n_edges() > kDenseEdgeCap)
    throw SolverFailure("mesh too large for dense kernel bases");

  // kernel of d0^T M1 is M1^{-1} applied to the cycle space of the edge graph
  const int nv = c.n_vertices();
  const int ne = c.n_edges();
  std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (neighbor, edge id)
  for (int e = 0; e < ne; ++e) {
    adj[c.mesh.edges(e, 0)].emplace_back(c.mesh.edges(e, 1), e);
    adj[c.mesh.edges(e, 1)].emplace_back(c.mesh.edges(e, 0), e);
  }
  std::vector<int> parent(nv, -1), parent_edge(nv, -1), depth(nv, 0);
  std::vector<char> seen(nv, 0), in_tree(ne, 0);
  for (int root = 0; root < nv; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [w, e] : adj[u])
        if (!seen[w]) {
          seen[w] = 1;
          parent[w] = u;
          parent_edge[w] = e;
          depth[w] = depth[u] + 1;
          in_tree[e] = 1;
          q.push(w);
        }
    }
  }
  std::vector<Eigen::Triplet<double>> ctrip;
  int col = 0;
  for (int e = 0; e < ne; ++e) {
    if (in_tree[e]) continue;
    // fundamental cycle: traverse e from u to w, close through the tree
    int u = c.mesh.edges(e, 0), w = c.mesh.edges(e, 1);
    ctrip.emplace_back(e, col, 1.0);
    int a = u, b = w;
    while (a != b) {
      if (depth[a] > depth[b]) {
        // a-side tree edges are traversed parent -> a (descending toward u)
        int pe = parent_edge[a];
        double s = (c.mesh.edges(pe, 0) == a) ? -1.0 : 1.0;
        ctrip.emplace_back(pe, col, s);
        a = parent[a];
      } else {
        // b-side tree edges are traversed b -> parent (ascending from w)
        int pe = parent_edge[b];
        double s = (c.mesh.edges(pe, 0) == b) ? 1.0 : -1.0;
        ctrip.emplace_back(pe, col, s);
        b = parent[b];
      }
    }
    ++col;
  }
  SpMat C(ne, col);
  C.setFromTriplets(ctrip.begin(), ctrip.end());

  if (!k.m1_llt) {
    k.m1_llt = std::make_unique<Eigen::SimplicialLLT<SpMat>>();
    k.m1_llt->compute(c.M1);
    if (k.m1_llt->info() != Eigen::Success) throw SolverFailure("M1 factorization failed");
  }
  Eigen::MatrixXd B = k.m1_llt->solve(Eigen::MatrixXd(C));
  B = orthonormalize(std::move(B), [&](const Eigen::MatrixXd& X) {
    return Eigen::MatrixXd(X.transpose() * (c.M1 * X));
  });
  k.tangential_basis = std::move(B);
  return *k.tangential_basis;
}

const Eigen::MatrixXd& tangential_coclosed_basis(const BoundaryCalculus& c) {
  CalculusCache& k = c.cache();
  std::lock_guard<std::recursive_mutex> lock(k.m);
  if (k.strict_basis) return *k.strict_basis;
  if (c.n_edges() > kDenseEdgeCap)
    throw SolverFailure("mesh too large for dense kernel bases");
  Eigen::MatrixXd stacked(c.n_vertices() + c.n_bvertices(), c.n_edges());
  stacked.topRows(c.n_vertices()) = Eigen::MatrixXd(c.dstar1);
  stacked.bottomRows(c.n_bvertices()) = Eigen::MatrixXd(c.nml);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  const auto& sig = svd.singularValues();
  double tol = kRankTol * (sig.size() ? sig[0] : 0.0);
  int rank = 0;
  for (int i = 0; i < sig.size(); ++i)
    if (sig[i] > tol) ++rank;
  Eigen::MatrixXd kernel = svd.matrixV().rightCols(c.n_edges() - rank);
  kernel = orthonormalize(std::move(kernel), [&](const Eigen::MatrixXd& X) {
    return Eigen::MatrixXd(X.transpose() * (c.M1 * X));
  });
  k.strict_basis = std::move(kernel);
  return *k.strict_basis;
}

const Eigen::MatrixXd& lg_space_basis(const BoundaryCalculus& c) {
  CalculusCache& k = c.cache();
  std::lock_guard<std::recursive_mutex> lock(k.m);
  if (k.lg_basis) return *k.lg_basis;
  const int nb = c.n_bvertices();
  std::vector<std::vector<int>> comp_bverts(c.mesh.n_components);
  for (int i = 0; i < nb; ++i)
    comp_bverts[c.mesh.vertex_component[c.bvertex_to_vertex[i]]].push_back(i);
  int ncols = 0;
  for (const auto& g : comp_bverts)
    if (!g.empty()) ncols += static_cast<int>(g.size()) - 1;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nb, ncols);
  int col = 0;
  for (const auto& g : comp_bverts) {
    if (g.empty()) continue;
    double wsum = 0.0;
    for (int i : g) wsum += c.b0[i];
    for (size_t j = 1; j < g.size(); ++j) {
      // indicator of g[j] minus its weighted mean over the component boundary
      for (int i : g) B(i, col) = -c.b0[g[j]] / wsum;
      B(g[j], col) += 1.0;
      ++col;
    }
  }
  if (ncols > 0) {
    B = orthonormalize(std::move(B), [&](const Eigen::MatrixXd& X) {
      return Eigen::MatrixXd(X.transpose() * c.b0.asDiagonal() * X);
    });
  }
  k.lg_basis = std::move(B);
  return *k.lg_basis;
}

Eigen::VectorXd harmonic_representative(const BoundaryCalculus& c, const Eigen::VectorXd& alpha) {
  if (alpha.size() != c.n_vertices()) throw MeshMismatch("potential size");
  Eigen::VectorXd u = c.tr * alpha;
  BoundaryFunctionSplit s = split_boundary_function(c, u);
  return solve_dirichlet(c, Eigen::VectorXd::Zero(c.n_vertices()), s.lg);
}

Eigen::VectorXd enforce_interior_gauss(const BoundaryCalculus& c, const Eigen::VectorXd& e,
                                       const Eigen::VectorXd& rho) {
  if (e.size() != c.n_edges() || rho.size() != c.n_vertices())
    throw MeshMismatch("gauss projection sizes");
  CalculusCache& k = c.cache();
  std::lock_guard<std::recursive_mutex> lock(k.m);
  if (!k.gauss_rows) {
    // on a closed component the rows sum to zero, so one is redundant; drop it
    // to keep the Gram nonsingular (a violated dropped row still shows up in
    // the residual afterwards)
    std::vector<char> skip_comp(static_cast<size_t>(c.mesh.n_components), 0);
    k.gauss_row_vertex.clear();
    for (int v : c.interior_vertex_ids) {
      int comp = c.mesh.vertex_component[v];
      if (!c.mesh.component_has_boundary[comp] && !skip_comp[comp]) {
        skip_comp[comp] = 1;
        continue;
      }
      k.gauss_row_vertex.push_back(v);
    }
    const int ni = static_cast<int>(k.gauss_row_vertex.size());
    std::vector<int> map(c.n_vertices(), -1);
    for (int i = 0; i < ni; ++i) map[k.gauss_row_vertex[i]] = i;
    std::vector<Eigen::Triplet<double>> trip;
    const SpMat& g = d0t_m1(c, k);
    for (int outer = 0; outer < g.outerSize(); ++outer)
      for (SpMat::InnerIterator it(g, outer); it; ++it)
        if (map[it.row()] >= 0) trip.emplace_back(map[it.row()], it.col(), it.value());
    SpMat rows(ni, c.n_edges());
    rows.setFromTriplets(trip.begin(), trip.end());
    k.gauss_rows = rows;
    k.gauss_gram = std::make_unique<Eigen::SimplicialLLT<SpMat>>();
    if (ni > 0) {
      k.gauss_gram->compute(SpMat(rows * SpMat(rows.transpose())));
      if (k.gauss_gram->info() != Eigen::Success)
        throw SolverFailure("constraint Gram factorization failed");
    }
  }
  const SpMat& g = *k.gauss_rows;
  if (g.rows() == 0) return e;
  Eigen::VectorXd target(g.rows());
  {
    Eigen::VectorXd m0rho = c.m0.cwiseProduct(rho);
    for (int i = 0; i < g.rows(); ++i) target[i] = -m0rho[k.gauss_row_vertex[i]];
  }
  Eigen::VectorXd defect = g * e - target;
  return e - SpMat(g.transpose()) * k.gauss_gram->solve(defect);
}

Eigen::VectorXd natural_flux(const BoundaryCalculus& c, const Eigen::VectorXd& e,
                             const Eigen::VectorXd& rho) {
  if (e.size() != c.n_edges() || rho.size() != c.n_vertices())
    throw MeshMismatch("natural flux sizes");
  CalculusCache& k = c.cache();
  std::lock_guard<std::recursive_mutex> lock(k.m);
  Eigen::VectorXd full = d0t_m1(c, k) * e + c.m0.cwiseProduct(rho);
  Eigen::VectorXd out(c.n_bvertices());
  for (int i = 0; i < c.n_bvertices(); ++i)
    out[i] = full[c.bvertex_to_vertex[i]] / c.b0[i];
  return out;
}

Eigen::VectorXd charge_offset(const BoundaryCalculus& c, const Eigen::VectorXd& rho) {
  if (rho.size() != c.n_vertices()) throw MeshMismatch("charge size");
  std::vector<double> q(c.mesh.n_components, 0.0), w(c.mesh.n_components, 0.0);
  for (int v = 0; v < c.n_vertices(); ++v)
    q[c.mesh.vertex_component[v]] += c.m0[v] * rho[v];
  for (int i = 0; i < c.n_bvertices(); ++i)
    w[c.mesh.vertex_component[c.bvertex_to_vertex[i]]] += c.b0[i];
  Eigen::VectorXd f(c.n_bvertices());
  for (int i = 0; i < c.n_bvertices(); ++i) {
    int comp = c.mesh.vertex_component[c.bvertex_to_vertex[i]];
    f[i] = q[comp] / w[comp];
  }
  return f;
}

}  // namespace lens
