#include "lens/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include <nlohmann/json.hpp>

namespace lens {

namespace {

constexpr double kGaussTol = 1e-8;

Eigen::VectorXd json_vector(const nlohmann::json& j, const char* key, int expected) {
  if (!j.contains(key)) throw ParseError(std::string("missing field ") + key);
  const auto& arr = j.at(key);
  if (!arr.is_array() || static_cast<int>(arr.size()) != expected)
    throw ParseError(std::string(key) + " must be an array of length " +
                     std::to_string(expected));
  Eigen::VectorXd v(expected);
  for (int i = 0; i < expected; ++i) v[i] = arr[i].get<double>();
  return v;
}

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

InitialData InitialData::zero(const BoundaryCalculus& c) {
  return {Eigen::VectorXd::Zero(c.n_edges()), Eigen::VectorXd::Zero(c.n_edges()),
          Eigen::VectorXd::Zero(c.n_vertices())};
}

CHHCoords CHHCoords::zero(const BoundaryCalculus& c) {
  return {Eigen::VectorXd::Zero(c.n_edges()), Eigen::VectorXd::Zero(c.n_edges()),
          Eigen::VectorXd::Zero(c.n_bvertices()), Eigen::VectorXd::Zero(c.n_bvertices())};
}

double gauss_residual(const BoundaryCalculus& c, const Eigen::VectorXd& e,
                      const Eigen::VectorXd& rho) {
  if (e.size() != c.n_edges() || rho.size() != c.n_vertices())
    throw MeshMismatch("gauss residual sizes");
  Eigen::VectorXd rows = Eigen::VectorXd(c.d0.transpose() * (c.M1 * e)) + c.m0.cwiseProduct(rho);
  double scale = 1.0;
  scale += Eigen::VectorXd(c.M1 * e).lpNorm<Eigen::Infinity>();
  scale += c.m0.cwiseProduct(rho).lpNorm<Eigen::Infinity>();
  double worst = 0.0;
  for (int v : c.interior_vertex_ids) worst = std::max(worst, std::abs(rows[v]));
  return worst / scale;
}

InitialData make_initial_data(const BoundaryCalculus& c, Eigen::VectorXd a, Eigen::VectorXd e,
                              Eigen::VectorXd rho, bool enforce) {
  if (a.size() != c.n_edges() || e.size() != c.n_edges() || rho.size() != c.n_vertices())
    throw MeshMismatch("initial data sizes");
  if (enforce) e = enforce_interior_gauss(c, e, rho);
  double res = gauss_residual(c, e, rho);
  if (!(res <= kGaussTol))
    throw GaussViolation("charge constraint residual " + std::to_string(res));
  InitialData out;
  out.a = nontangential_hodge(c, a).coclosed;
  out.e = std::move(e);
  out.rho = std::move(rho);
  return out;
}

CHHCoords chh_decompose(const BoundaryCalculus& c, const InitialData& data) {
  if (data.a.size() != c.n_edges() || data.e.size() != c.n_edges() ||
      data.rho.size() != c.n_vertices())
    throw MeshMismatch("initial data sizes");
  double res = gauss_residual(c, data.e, data.rho);
  if (!(res <= kGaussTol))
    throw GaussViolation("charge constraint residual " + std::to_string(res));

  CHHCoords out;
  Eigen::VectorXd arep = nontangential_hodge(c, data.a).coclosed;
  TangentialSplit asplit = tangential_hodge_helmholtz(c, arep);
  out.F = asplit.tangential;
  // the potential's trace, shifted to its mean free representative; the
  // shift is a per-component constant so the split itself is untouched
  Eigen::VectorXd tra = c.tr * asplit.potential;
  out.f = split_boundary_function(c, tra).lg;

  out.H = tangential_hodge_helmholtz(c, data.e).tangential;
  out.h = natural_flux(c, data.e, data.rho) - charge_offset(c, data.rho);
  return out;
}

InitialData chh_reconstruct(const BoundaryCalculus& c, const CHHCoords& coords,
                            const Eigen::VectorXd& rho) {
  if (coords.F.size() != c.n_edges() || coords.H.size() != c.n_edges() ||
      coords.f.size() != c.n_bvertices() || coords.h.size() != c.n_bvertices() ||
      rho.size() != c.n_vertices())
    throw MeshMismatch("chh coordinate sizes");
  InitialData out;
  Eigen::VectorXd phi = solve_dirichlet(c, Eigen::VectorXd::Zero(c.n_vertices()), coords.f);
  out.a = coords.F + c.d0 * phi;
  Eigen::VectorXd xi = solve_neumann(c, Eigen::VectorXd(-rho),
                                     Eigen::VectorXd(coords.h + charge_offset(c, rho)));
  out.e = coords.H + c.d0 * xi;
  out.rho = rho;
  return out;
}

double sigma(const BoundaryCalculus& c, const InitialData& d1, const InitialData& d2) {
  if (d1.a.size() != c.n_edges() || d2.a.size() != c.n_edges() ||
      d1.e.size() != c.n_edges() || d2.e.size() != c.n_edges())
    throw MeshMismatch("sigma operand sizes");
  return c.inner(Cochain{1, d1.a}, Cochain{1, d2.e}) -
         c.inner(Cochain{1, d2.a}, Cochain{1, d1.e});
}

double sigma_cs(const BoundaryCalculus& c, const CHHCoords& x, const CHHCoords& y) {
  if (x.F.size() != c.n_edges() || y.F.size() != c.n_edges() ||
      x.f.size() != c.n_bvertices() || y.f.size() != c.n_bvertices())
    throw MeshMismatch("sigma_cs operand sizes");
  double bulk = c.inner(Cochain{1, x.F}, Cochain{1, y.H}) -
                c.inner(Cochain{1, y.F}, Cochain{1, x.H});
  double surf = x.f.dot(c.b0.cwiseProduct(y.h)) - y.f.dot(c.b0.cwiseProduct(x.h));
  return bulk + surf;
}

InitialData gauge_generator(const BoundaryCalculus& c, const Eigen::VectorXd& lam) {
  if (lam.size() != c.n_bvertices()) throw MeshMismatch("gauge parameter size");
  Eigen::VectorXd lg = split_boundary_function(c, lam).lg;
  Eigen::VectorXd big = solve_dirichlet(c, Eigen::VectorXd::Zero(c.n_vertices()), lg);
  InitialData out = InitialData::zero(c);
  out.a = c.d0 * big;
  return out;
}

std::vector<InitialData> radical_basis(const BoundaryCalculus& c) {
  std::vector<int> skip(c.mesh.n_components, -1);
  for (int comp = 0; comp < c.mesh.n_components; ++comp)
    if (!c.mesh.component_has_boundary[comp])
      for (int v = 0; v < c.n_vertices(); ++v)
        if (c.mesh.vertex_component[v] == comp) {
          skip[comp] = v;
          break;
        }
  std::vector<InitialData> out;
  for (int v : c.interior_vertex_ids) {
    if (skip[c.mesh.vertex_component[v]] == v) continue;
    Eigen::VectorXd bump = Eigen::VectorXd::Zero(c.n_vertices());
    bump[v] = 1.0;
    InitialData d = InitialData::zero(c);
    d.a = c.d0 * bump;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<int> boundary_circle_ids(const BoundaryCalculus& c) {
  const int nb = c.n_bvertices();
  // successor along the induced traversal lives in the boundary mesh cells
  std::vector<std::vector<int>> adj(nb);
  for (int s = 0; s < c.boundary.cells.rows(); ++s) {
    adj[c.boundary.cells(s, 0)].push_back(c.boundary.cells(s, 1));
    adj[c.boundary.cells(s, 1)].push_back(c.boundary.cells(s, 0));
  }
  std::vector<int> circle(nb, -1);
  int next_id = 0;
  for (int start = 0; start < nb; ++start) {
    if (circle[start] >= 0) continue;
    // nb is ordered by parent vertex id, so new circles appear in order of
    // their smallest parent vertex
    std::queue<int> q;
    q.push(start);
    circle[start] = next_id;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : adj[u])
        if (circle[w] < 0) {
          circle[w] = next_id;
          q.push(w);
        }
    }
    ++next_id;
  }
  return circle;
}

int n_boundary_circles(const BoundaryCalculus& c) {
  auto ids = boundary_circle_ids(c);
  int n = 0;
  for (int id : ids) n = std::max(n, id + 1);
  return n;
}

InitialData flux_observable(const BoundaryCalculus& c, const std::vector<int>& circles) {
  std::vector<int> circle_of = boundary_circle_ids(c);
  int ncirc = 0;
  for (int id : circle_of) ncirc = std::max(ncirc, id + 1);
  std::vector<char> selected(ncirc, 0);
  for (int id : circles) {
    if (id < 0 || id >= ncirc) throw InvalidCut("no boundary circle " + std::to_string(id));
    selected[id] = 1;
  }

  // per surface component the selection must leave circles on both sides
  {
    std::vector<int> total(c.mesh.n_components, 0), chosen(c.mesh.n_components, 0);
    for (int i = 0; i < c.n_bvertices(); ++i) {
      int comp = c.mesh.vertex_component[c.bvertex_to_vertex[i]];
      ++total[comp];
      if (selected[circle_of[i]]) ++chosen[comp];
    }
    bool separates = false;
    for (int comp = 0; comp < c.mesh.n_components; ++comp)
      if (chosen[comp] > 0 && chosen[comp] < total[comp]) separates = true;
    if (!separates) throw InvalidCut("selection does not separate any boundary");
  }

  // nearest-circle labels by multi-source BFS over the vertex graph
  const int nv = c.n_vertices();
  std::vector<std::vector<int>> vadj(nv);
  for (int e = 0; e < c.n_edges(); ++e) {
    vadj[c.mesh.edges(e, 0)].push_back(c.mesh.edges(e, 1));
    vadj[c.mesh.edges(e, 1)].push_back(c.mesh.edges(e, 0));
  }
  std::vector<int> label(nv, -1);
  std::queue<int> q;
  for (int i = 0; i < c.n_bvertices(); ++i) {
    int v = c.bvertex_to_vertex[i];
    label[v] = circle_of[i];
    q.push(v);
  }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : vadj[u])
      if (label[w] < 0) {
        label[w] = label[u];
        q.push(w);
      }
  }
  // ties across equal distance resolved deterministically: BFS visits sources
  // in bvertex order, so the smallest-circle front claims a tied vertex first

  Eigen::VectorXd step = Eigen::VectorXd::Zero(nv);
  for (int v = 0; v < nv; ++v)
    if (label[v] >= 0 && selected[label[v]]) step[v] = 1.0;

  // the transition must stay clear of every boundary star
  for (int e = 0; e < c.n_edges(); ++e) {
    int u = c.mesh.edges(e, 0), w = c.mesh.edges(e, 1);
    if ((c.mesh.on_boundary[u] || c.mesh.on_boundary[w]) && step[u] != step[w])
      throw InvalidCut("cut has no interior buffer around the boundary");
  }

  InitialData out = InitialData::zero(c);
  out.a = c.d0 * step;
  return out;
}

std::vector<int> support_of(const BoundaryCalculus& c, const InitialData& data) {
  if (data.a.size() != c.n_edges() || data.e.size() != c.n_edges())
    throw MeshMismatch("support operand sizes");
  double mx = std::max(data.a.lpNorm<Eigen::Infinity>(), data.e.lpNorm<Eigen::Infinity>());
  std::vector<int> out;
  if (mx == 0.0) return out;
  double cut = 1e-12 * mx;
  for (int e = 0; e < c.n_edges(); ++e)
    if (std::abs(data.a[e]) > cut || std::abs(data.e[e]) > cut) out.push_back(e);
  return out;
}

bool is_localised_in(const BoundaryCalculus& c, const InitialData& data,
                     const std::vector<int>& edges) {
  std::set<int> region(edges.begin(), edges.end());
  for (int e : support_of(c, data))
    if (!region.count(e)) return false;
  return true;
}

std::vector<int> one_ring_edges(const BoundaryCalculus& c, const std::vector<int>& edges) {
  std::set<int> in(edges.begin(), edges.end()), out(in);
  for (int t = 0; t < c.mesh.cells.rows(); ++t) {
    bool touches = false;
    for (int k = 0; k < 3; ++k)
      if (in.count(c.mesh.cell_edges(t, k))) touches = true;
    if (touches)
      for (int k = 0; k < 3; ++k) out.insert(c.mesh.cell_edges(t, k));
  }
  return {out.begin(), out.end()};
}

std::string initial_data_to_json(const InitialData& data) {
  nlohmann::json j;
  j["A"] = vector_json(data.a);
  j["E"] = vector_json(data.e);
  j["rho"] = vector_json(data.rho);
  return j.dump(2);
}

InitialData initial_data_from_json_text(const BoundaryCalculus& c, const std::string& text,
                                        bool enforce) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(err.what());
  }
  Eigen::VectorXd a = json_vector(j, "A", c.n_edges());
  Eigen::VectorXd e = json_vector(j, "E", c.n_edges());
  Eigen::VectorXd rho = j.contains("rho") ? json_vector(j, "rho", c.n_vertices())
                                          : Eigen::VectorXd::Zero(c.n_vertices());
  return make_initial_data(c, std::move(a), std::move(e), std::move(rho), enforce);
}

std::string chh_to_json(const CHHCoords& coords) {
  nlohmann::json j;
  j["F"] = vector_json(coords.F);
  j["H"] = vector_json(coords.H);
  j["f"] = vector_json(coords.f);
  j["h"] = vector_json(coords.h);
  return j.dump(2);
}

CHHCoords chh_from_json_text(const BoundaryCalculus& c, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(err.what());
  }
  CHHCoords out;
  out.F = json_vector(j, "F", c.n_edges());
  out.H = json_vector(j, "H", c.n_edges());
  out.f = json_vector(j, "f", c.n_bvertices());
  out.h = json_vector(j, "h", c.n_bvertices());
  return out;
}

}  // namespace lens
