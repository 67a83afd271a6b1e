#include "lens/gluing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <utility>

#include "lens/hodge.hpp"
#include "lens/rng.hpp"

namespace lens {

namespace {

constexpr double kMatchTol = 1e-10;
constexpr double kOrthoTol = 1e-8;
constexpr double kCompatTol = 1e-10;

Eigen::MatrixXd j_block(int k) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  s.topRightCorner(k, k) = Eigen::MatrixXd::Identity(k, k);
  s.bottomLeftCorner(k, k) = -Eigen::MatrixXd::Identity(k, k);
  return s;
}

// oriented endpoints of boundary segment s, in boundary-vertex ids
std::pair<int, int> oriented_segment(const BoundaryCalculus& c, int s) {
  int lo = c.boundary.cells(s, 0), hi = c.boundary.cells(s, 1);
  return c.boundary.cell_sign[s] > 0 ? std::make_pair(lo, hi) : std::make_pair(hi, lo);
}

std::pair<int, int> ascending(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

}  // namespace

GluingSetup make_gluing(const ChhSpace& side1, const ChhSpace& side2,
                        const std::vector<int>& match, bool reversed) {
  const BoundaryCalculus& c1 = *side1.calc;
  const BoundaryCalculus& c2 = *side2.calc;
  const int nb = c1.n_bvertices();
  if (c2.n_bvertices() != nb || c2.n_bsegments() != c1.n_bsegments())
    throw ValidationError("boundary complexes have different sizes");
  if (nb == 0) throw ValidationError("gluing needs a nonempty shared boundary");
  if (side1.ns != side2.ns) throw SpaceMismatch("surface sectors have different dimensions");

  if (static_cast<int>(match.size()) != nb)
    throw ValidationError("boundary match must cover every boundary vertex");
  std::vector<char> hit(nb, 0);
  for (int i = 0; i < nb; ++i) {
    if (match[i] < 0 || match[i] >= nb || hit[match[i]])
      throw ValidationError("boundary match is not a bijection");
    hit[match[i]] = 1;
  }

  double bscale = std::max(c1.b0.maxCoeff(), c2.b0.maxCoeff());
  for (int i = 0; i < nb; ++i)
    if (std::abs(c1.b0[i] - c2.b0[match[i]]) > kMatchTol * bscale)
      throw ValidationError("matched boundary masses differ");

  std::map<std::pair<int, int>, int> seg2;
  for (int s = 0; s < c2.n_bsegments(); ++s)
    seg2[ascending(c2.boundary.cells(s, 0), c2.boundary.cells(s, 1))] = s;
  double lscale = std::max(c1.seg_len.maxCoeff(), c2.seg_len.maxCoeff());
  for (int s = 0; s < c1.n_bsegments(); ++s) {
    auto [u, v] = oriented_segment(c1, s);
    auto it = seg2.find(ascending(match[u], match[v]));
    if (it == seg2.end()) throw ValidationError("matched boundary segments are not adjacent");
    auto [u2, v2] = oriented_segment(c2, it->second);
    bool same = (u2 == match[u] && v2 == match[v]);
    if (same == reversed)
      throw ValidationError("boundary traversal disagrees with the orientation flag");
    if (std::abs(c1.seg_len[s] - c2.seg_len[it->second]) > kMatchTol * lscale)
      throw ValidationError("matched boundary segments are not isometric");
  }

  GluingSetup g;
  g.side1 = &side1;
  g.side2 = &side2;
  g.match = match;
  g.reversed = reversed;

  const int ns = side1.ns;
  Eigen::MatrixXd pq1(nb, ns);
  for (int i = 0; i < nb; ++i) pq1.row(match[i]) = side1.lg.row(i);
  g.transfer = side2.lg.transpose() * c2.b0.asDiagonal() * pq1;
  double ortho =
      (g.transfer.transpose() * g.transfer - Eigen::MatrixXd::Identity(ns, ns)).cwiseAbs().maxCoeff();
  if (ortho > kOrthoTol)
    throw ValidationError(
        "surface transfer is not orthogonal; boundary component structures do not match");

  const int nc1 = side1.nc, nc2 = side2.nc;
  g.loops1 = make_symplectic_space(side1.space->name + "/loops", j_block(nc1));
  g.loops2 = make_symplectic_space(side2.space->name + "/loops", j_block(nc2));
  g.pair12 = direct_sum(side1.space, side2.space);
  g.half12 = direct_sum(side1.space, g.loops2);
  g.half21 = direct_sum(g.loops1, side2.space);

  Eigen::MatrixXd gs = Eigen::MatrixXd::Zero(2 * nc1 + 2 * ns + 2 * nc2, 2 * nc1 + 2 * ns + 2 * nc2);
  gs.topLeftCorner(2 * nc1, 2 * nc1) = j_block(nc1);
  gs.block(2 * nc1, 2 * nc1, 2 * ns, 2 * ns) = j_block(ns);
  gs.bottomRightCorner(2 * nc2, 2 * nc2) = j_block(nc2);
  g.glued = make_symplectic_space("glued(" + side1.space->name + "," + side2.space->name + ")", gs);

  g.invariants = fixed_point_generators(g.pair12, diagonal_gauge_directions(g));
  return g;
}

std::pair<std::vector<int>, bool> match_boundaries(const BoundaryCalculus& c1,
                                                   const BoundaryCalculus& c2, double tol) {
  const int nb = c1.n_bvertices();
  if (c2.n_bvertices() != nb) throw ValidationError("boundary complexes have different sizes");
  double scale = std::max(c1.mesh.length_scale(), c2.mesh.length_scale());
  std::vector<int> match(nb, -1);
  std::vector<char> taken(nb, 0);
  for (int i = 0; i < nb; ++i) {
    Eigen::RowVector3d p = c1.mesh.vertices.row(c1.bvertex_to_vertex[i]);
    int best = -1;
    for (int j = 0; j < nb; ++j) {
      if ((p - c2.mesh.vertices.row(c2.bvertex_to_vertex[j])).norm() <= tol * scale) {
        if (best >= 0) throw ValidationError("ambiguous coordinate match for a boundary vertex");
        best = j;
      }
    }
    if (best < 0 || taken[best])
      throw ValidationError("no unique coordinate match for a boundary vertex");
    taken[best] = 1;
    match[i] = best;
  }

  std::map<std::pair<int, int>, int> seg2;
  for (int s = 0; s < c2.n_bsegments(); ++s)
    seg2[ascending(c2.boundary.cells(s, 0), c2.boundary.cells(s, 1))] = s;
  int same = 0, opposite = 0;
  for (int s = 0; s < c1.n_bsegments(); ++s) {
    auto [u, v] = oriented_segment(c1, s);
    auto it = seg2.find(ascending(match[u], match[v]));
    if (it == seg2.end()) throw ValidationError("matched boundary segments are not adjacent");
    auto [u2, v2] = oriented_segment(c2, it->second);
    ((u2 == match[u] && v2 == match[v]) ? same : opposite)++;
  }
  if (same > 0 && opposite > 0)
    throw ValidationError("matched boundary traversal directions are inconsistent");
  return {match, opposite > 0};
}

std::vector<Eigen::VectorXd> diagonal_gauge_directions(const GluingSetup& g) {
  const int nc1 = g.side1->nc, nc2 = g.side2->nc, ns = g.side1->ns;
  const int off2 = 2 * nc1 + 2 * ns;
  std::vector<Eigen::VectorXd> out;
  out.reserve(ns);
  for (int k = 0; k < ns; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(off2 + 2 * nc2 + 2 * ns);
    v[2 * nc1 + k] = 1.0;
    v.segment(off2 + 2 * nc2, ns) = g.transfer.col(k);
    out.push_back(std::move(v));
  }
  return out;
}

WeylElement diagonal_gauge_unitary(const GluingSetup& g, const Eigen::VectorXd& lam_coords) {
  const int nc1 = g.side1->nc, nc2 = g.side2->nc, ns = g.side1->ns;
  if (lam_coords.size() != ns) throw DimensionMismatch("surface coordinate vector");
  const int off2 = 2 * nc1 + 2 * ns;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(off2 + 2 * nc2 + 2 * ns);
  v.segment(2 * nc1, ns) = lam_coords;
  v.segment(off2 + 2 * nc2, ns) = g.transfer * lam_coords;
  return generator(g.pair12, v);
}

const FixedPointSet& diag_invariant_labels(const GluingSetup& g) { return g.invariants; }

WeylElement xi_21(const GluingSetup& g, const WeylElement& a) {
  if (!same_space(a.space(), g.half12)) throw SpaceMismatch("xi_21 input space");
  const int nc1 = g.side1->nc, nc2 = g.side2->nc, ns = g.side1->ns;
  const int dim = 2 * nc1 + 2 * ns + 2 * nc2;
  Eigen::MatrixXd iota = Eigen::MatrixXd::Zero(dim, dim);
  iota.block(0, 0, 2 * nc1, 2 * nc1).setIdentity();
  iota.block(2 * nc1, 2 * nc1 + 2 * ns, 2 * nc2, 2 * nc2).setIdentity();
  iota.block(2 * nc1 + 2 * nc2, 2 * nc1, ns, ns) = -g.transfer;
  iota.block(2 * nc1 + 2 * nc2 + ns, 2 * nc1 + ns, ns, ns) = -g.transfer;
  return weyl_map(iota, a, g.half21);
}

WeylElement xi_12(const GluingSetup& g, const WeylElement& a) {
  if (!same_space(a.space(), g.half21)) throw SpaceMismatch("xi_12 input space");
  const int nc1 = g.side1->nc, nc2 = g.side2->nc, ns = g.side1->ns;
  const int dim = 2 * nc1 + 2 * ns + 2 * nc2;
  Eigen::MatrixXd iota = Eigen::MatrixXd::Zero(dim, dim);
  iota.block(0, 0, 2 * nc1, 2 * nc1).setIdentity();
  iota.block(2 * nc1 + 2 * ns, 2 * nc1, 2 * nc2, 2 * nc2).setIdentity();
  iota.block(2 * nc1, 2 * nc1 + 2 * nc2, ns, ns) = -g.transfer.transpose();
  iota.block(2 * nc1 + ns, 2 * nc1 + 2 * nc2 + ns, ns, ns) = -g.transfer.transpose();
  return weyl_map(iota, a, g.half12);
}

namespace {

struct Reduction {
  Eigen::VectorXd label;  // glued coordinates
  Eigen::VectorXd red;    // pair label after the gauge reduction
  Eigen::VectorXd gd;     // the diagonal gauge direction removed
};

// reduce an invariant pair label along lam = T' f2; exact passthrough when
// the side-2 potential slot is zero
Reduction reduce_invariant(const GluingSetup& g, const Eigen::VectorXd& v) {
  const int nc1 = g.side1->nc, nc2 = g.side2->nc, ns = g.side1->ns;
  const int off2 = 2 * nc1 + 2 * ns;
  Reduction r;
  Eigen::VectorXd lam = g.transfer.transpose() * v.segment(off2 + 2 * nc2, ns);
  r.gd = Eigen::VectorXd::Zero(v.size());
  r.gd.segment(2 * nc1, ns) = lam;
  r.gd.segment(off2 + 2 * nc2, ns) = g.transfer * lam;
  r.red = v - r.gd;
  r.label.resize(2 * nc1 + 2 * ns + 2 * nc2);
  r.label.head(2 * nc1) = v.head(2 * nc1);
  r.label.segment(2 * nc1, ns) = v.segment(2 * nc1, ns) - lam;
  r.label.segment(2 * nc1 + ns, ns) = v.segment(2 * nc1 + ns, ns);
  r.label.tail(2 * nc2) = v.segment(off2, 2 * nc2);
  return r;
}

}  // namespace

WeylElement won_normal_form(const GluingSetup& g, const WeylElement& a) {
  if (!same_space(a.space(), g.pair12)) throw SpaceMismatch("won input space");
  WeylElement out = WeylElement::zero(g.glued);
  for (const auto& [key, term] : a.terms()) {
    (void)key;
    if (!g.invariants.contains(term.v))
      throw NotInvariant("label pairs with a diagonal gauge direction");
    Reduction r = reduce_invariant(g, term.v);
    std::complex<double> phase =
        std::exp(std::complex<double>(0.0, 0.5 * g.pair12->pair(r.red, r.gd)));
    out.add_term(r.label, term.c * phase);
  }
  return out;
}

WeylElement psi_bullet_circle(const GluingSetup& g, const WeylElement& a) {
  if (!same_space(a.space(), g.half12)) throw SpaceMismatch("psi input space");
  const int nc1 = g.side1->nc, nc2 = g.side2->nc, ns = g.side1->ns;
  const int off2 = 2 * nc1 + 2 * ns;
  WeylElement b = WeylElement::zero(g.pair12);
  for (const auto& [key, term] : a.terms()) {
    (void)key;
    const Eigen::VectorXd& u = term.v;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(off2 + 2 * nc2 + 2 * ns);
    w.head(2 * nc1 + 2 * ns) = u.head(2 * nc1 + 2 * ns);
    w.segment(off2, 2 * nc2) = u.tail(2 * nc2);
    w.segment(off2 + 2 * nc2 + ns, ns) = -(g.transfer * u.segment(2 * nc1 + ns, ns));
    b.add_term(w, term.c);
  }
  return won_normal_form(g, b);
}

WeylElement psi_circle_bullet(const GluingSetup& g, const WeylElement& a) {
  if (!same_space(a.space(), g.half21)) throw SpaceMismatch("psi input space");
  const int nc1 = g.side1->nc, nc2 = g.side2->nc, ns = g.side1->ns;
  const int off2 = 2 * nc1 + 2 * ns;
  WeylElement b = WeylElement::zero(g.pair12);
  for (const auto& [key, term] : a.terms()) {
    (void)key;
    const Eigen::VectorXd& u = term.v;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(off2 + 2 * nc2 + 2 * ns);
    w.head(2 * nc1) = u.head(2 * nc1);
    Eigen::VectorXd t = g.transfer.transpose() * u.tail(ns);
    w.segment(2 * nc1 + ns, ns) = -t;
    w.segment(off2, 2 * nc2 + 2 * ns) = u.segment(2 * nc1, 2 * nc2 + 2 * ns);
    b.add_term(w, term.c);
  }
  return won_normal_form(g, b);
}

void attach_global(GluingSetup& g) {
  const Mesh& m1 = g.side1->calc->mesh;
  const Mesh& m2 = g.side2->calc->mesh;
  const BoundaryCalculus& c1 = *g.side1->calc;
  const BoundaryCalculus& c2 = *g.side2->calc;
  const int n1 = m1.n_vertices(), n2 = m2.n_vertices(), nb = c1.n_bvertices();

  auto st = std::make_shared<GlobalStack>();
  st->side1_vertex.resize(n1);
  for (int v = 0; v < n1; ++v) st->side1_vertex[v] = v;
  std::vector<int> inv(nb);
  for (int i = 0; i < nb; ++i) inv[g.match[i]] = i;
  st->side2_vertex.assign(n2, -1);
  int next = n1;
  for (int v = 0; v < n2; ++v) {
    int j = c2.vertex_to_bvertex[v];
    st->side2_vertex[v] = j >= 0 ? c1.bvertex_to_vertex[inv[j]] : next++;
  }

  Eigen::MatrixXd verts(next, 3);
  verts.topRows(n1) = m1.vertices;
  for (int v = 0; v < n2; ++v)
    if (st->side2_vertex[v] >= n1) verts.row(st->side2_vertex[v]) = m2.vertices.row(v);

  auto oriented_cell = [](const Mesh& m, int t) {
    std::array<int, 3> c = {m.cells(t, 0), m.cells(t, 1), m.cells(t, 2)};
    if (m.cell_sign[t] < 0) std::swap(c[1], c[2]);
    return c;
  };
  Eigen::MatrixXi cells(m1.n_cells() + m2.n_cells(), 3);
  for (int t = 0; t < m1.n_cells(); ++t) {
    auto c = oriented_cell(m1, t);
    cells.row(t) << c[0], c[1], c[2];
  }
  for (int t = 0; t < m2.n_cells(); ++t) {
    auto c = oriented_cell(m2, t);
    cells.row(m1.n_cells() + t) << st->side2_vertex[c[0]], st->side2_vertex[c[1]],
        st->side2_vertex[c[2]];
  }

  st->calc = std::make_unique<BoundaryCalculus>(make_mesh(verts, cells, 2));
  if (st->calc->n_bvertices() != 0)
    throw ValidationError("glued union surface is not closed");

  std::map<std::pair<int, int>, int> eix;
  for (int e = 0; e < st->calc->n_edges(); ++e)
    eix[{st->calc->mesh.edges(e, 0), st->calc->mesh.edges(e, 1)}] = e;
  auto fill = [&](const Mesh& m, const std::vector<int>& vmap, std::vector<int>& edges,
                  std::vector<int>& signs) {
    edges.resize(m.n_edges());
    signs.resize(m.n_edges());
    for (int e = 0; e < m.n_edges(); ++e) {
      int gu = vmap[m.edges(e, 0)], gv = vmap[m.edges(e, 1)];
      edges[e] = eix.at(ascending(gu, gv));
      signs[e] = gu < gv ? 1 : -1;
    }
  };
  fill(m1, st->side1_vertex, st->side1_edge, st->side1_edge_sign);
  fill(m2, st->side2_vertex, st->side2_edge, st->side2_edge_sign);
  g.global = st;
}

InitialData reduce_global(const GluingSetup& g, const InitialData& gdata) {
  if (!g.global) throw ValidationError("global stack not attached");
  const BoundaryCalculus& cg = *g.global->calc;
  if (gdata.a.size() != cg.n_edges() || gdata.e.size() != cg.n_edges())
    throw MeshMismatch("global data sizes");
  if (gdata.rho.size() != 0) {
    if (gdata.rho.size() != cg.n_vertices()) throw MeshMismatch("global charge size");
    if (gdata.rho.cwiseAbs().maxCoeff() > 0.0)
      throw ValidationError("the global embedding needs homogeneous data");
  }
  InitialData out;
  out.rho = Eigen::VectorXd::Zero(cg.n_vertices());
  out.a = nontangential_hodge(cg, gdata.a).coclosed;
  out.e = enforce_interior_gauss(cg, gdata.e, out.rho);
  return out;
}

Eigen::VectorXd restrict_to_side(const GluingSetup& g, int side,
                                 const Eigen::VectorXd& edge_field) {
  if (!g.global) throw ValidationError("global stack not attached");
  if (side != 1 && side != 2) throw ValidationError("side must be 1 or 2");
  if (edge_field.size() != g.global->calc->n_edges())
    throw DimensionMismatch("global edge field");
  const auto& edges = side == 1 ? g.global->side1_edge : g.global->side2_edge;
  const auto& signs = side == 1 ? g.global->side1_edge_sign : g.global->side2_edge_sign;
  Eigen::VectorXd out(edges.size());
  for (size_t e = 0; e < edges.size(); ++e) out[e] = signs[e] * edge_field[edges[e]];
  return out;
}

namespace {

// invariant pair label of reduced global data: side coordinates with the
// side-2 flux slot forced onto -T h1, killing the enforcement rounding
Eigen::VectorXd invariant_pair_label(const GluingSetup& g, const InitialData& red) {
  const int nc1 = g.side1->nc, nc2 = g.side2->nc, ns = g.side1->ns;
  const int off2 = 2 * nc1 + 2 * ns;
  Eigen::VectorXd w(off2 + 2 * nc2 + 2 * ns);
  for (int side = 1; side <= 2; ++side) {
    const ChhSpace& s = side == 1 ? *g.side1 : *g.side2;
    InitialData d;
    d.a = restrict_to_side(g, side, red.a);
    d.e = restrict_to_side(g, side, red.e);
    d.rho = Eigen::VectorXd::Zero(s.calc->n_vertices());
    Eigen::VectorXd v = coords_of(s, chh_decompose(*s.calc, d));
    if (side == 1)
      w.head(2 * nc1 + 2 * ns) = v;
    else
      w.segment(off2, 2 * nc2 + 2 * ns) = v;
  }
  w.segment(off2 + 2 * nc2 + ns, ns) = -(g.transfer * w.segment(2 * nc1 + ns, ns));
  return w;
}

}  // namespace

Eigen::VectorXd glued_label(const GluingSetup& g, const InitialData& reduced) {
  return reduce_invariant(g, invariant_pair_label(g, reduced)).label;
}

WeylElement embed_global(const GluingSetup& g, const InitialData& gdata) {
  InitialData red = reduce_global(g, gdata);
  return won_normal_form(g, generator(g.pair12, invariant_pair_label(g, red)));
}

GluedState glue_states(const GluingSetup& g, QuasiFreeState w1, QuasiFreeState w2,
                       GlueMode mode) {
  if (!same_space(w1.space, g.side1->space))
    throw SpaceMismatch("first state must live on the side-1 corner space");
  if (!same_space(w2.space, g.side2->space))
    throw SpaceMismatch("second state must live on the side-2 corner space");
  GluedState s;
  s.setup = &g;
  s.w1 = std::move(w1);
  s.w2 = std::move(w2);
  s.mode = mode;
  return s;
}

namespace {

std::complex<double> state_at(const QuasiFreeState& w, const Eigen::VectorXd& u) {
  return evaluate(w, generator(w.space, u));
}

// (w1 x w2 restricted to loops) through the inverse of psi_bullet_circle;
// that psi has phase exactly one, so only the labels move
std::complex<double> value_one_two(const GluedState& s, const Eigen::VectorXd& l) {
  const GluingSetup& g = *s.setup;
  const int nc1 = g.side1->nc, nc2 = g.side2->nc, ns = g.side1->ns;
  Eigen::VectorXd u1 = l.head(2 * nc1 + 2 * ns);
  Eigen::VectorXd u2 = Eigen::VectorXd::Zero(2 * nc2 + 2 * ns);
  u2.head(2 * nc2) = l.tail(2 * nc2);
  return state_at(s.w1, u1) * state_at(s.w2, u2);
}

// mirrored pairing through the inverse of psi_circle_bullet, whose reduction
// phase is only rounding but is carried anyway
std::complex<double> value_two_one(const GluedState& s, const Eigen::VectorXd& l) {
  const GluingSetup& g = *s.setup;
  const int nc1 = g.side1->nc, nc2 = g.side2->nc, ns = g.side1->ns;
  const int off2 = 2 * nc1 + 2 * ns;
  Eigen::VectorXd u1 = Eigen::VectorXd::Zero(2 * nc1 + 2 * ns);
  u1.head(2 * nc1) = l.head(2 * nc1);
  Eigen::VectorXd u2(2 * nc2 + 2 * ns);
  u2.head(2 * nc2) = l.tail(2 * nc2);
  u2.segment(2 * nc2, ns) = -(g.transfer * l.segment(2 * nc1, ns));
  u2.tail(ns) = -(g.transfer * l.segment(2 * nc1 + ns, ns));

  Eigen::VectorXd w = Eigen::VectorXd::Zero(off2 + 2 * nc2 + 2 * ns);
  w.head(2 * nc1) = u1.head(2 * nc1);
  Eigen::VectorXd t = g.transfer.transpose() * u2.tail(ns);
  w.segment(2 * nc1 + ns, ns) = -t;
  w.segment(off2, 2 * nc2 + 2 * ns) = u2;
  Reduction r = reduce_invariant(g, w);
  std::complex<double> phase =
      std::exp(std::complex<double>(0.0, 0.5 * g.pair12->pair(r.red, r.gd)));
  return std::conj(phase) * state_at(s.w1, u1) * state_at(s.w2, u2);
}

}  // namespace

std::complex<double> evaluate(const GluedState& s, const WeylElement& a) {
  if (!same_space(a.space(), s.setup->glued)) throw SpaceMismatch("glued state input space");
  std::complex<double> val = 0.0;
  for (const auto& [key, term] : a.terms()) {
    (void)key;
    switch (s.mode) {
      case GlueMode::one_two:
        val += term.c * value_one_two(s, term.v);
        break;
      case GlueMode::two_one:
        val += term.c * value_two_one(s, term.v);
        break;
      case GlueMode::mix:
        val += term.c * 0.5 * (value_one_two(s, term.v) + value_two_one(s, term.v));
        break;
    }
  }
  return val;
}

CompatibilityReport compatibility_check(const GluingSetup& g, const QuasiFreeState& w1,
                                        const QuasiFreeState& w2, int n_random,
                                        uint64_t seed) {
  if (!same_space(w1.space, g.side1->space))
    throw SpaceMismatch("first state must live on the side-1 corner space");
  if (!same_space(w2.space, g.side2->space))
    throw SpaceMismatch("second state must live on the side-2 corner space");
  const int nc1 = g.side1->nc, nc2 = g.side2->nc, ns = g.side1->ns;

  std::vector<Eigen::VectorXd> samples;
  for (int k = 0; k < 2 * ns; ++k) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(2 * ns);
    s[k] = 1.0;
    samples.push_back(std::move(s));
  }
  Rng rng(seed);
  for (int j = 0; j < n_random; ++j) samples.push_back(rng.normal_vector(2 * ns));

  CompatibilityReport rep;
  for (const Eigen::VectorXd& s : samples) {
    Eigen::VectorXd u1 = Eigen::VectorXd::Zero(2 * nc1 + 2 * ns);
    u1.tail(2 * ns) = s;
    Eigen::VectorXd u2 = Eigen::VectorXd::Zero(2 * nc2 + 2 * ns);
    u2.segment(2 * nc2, ns) = -(g.transfer * s.head(ns));
    u2.tail(ns) = -(g.transfer * s.tail(ns));
    rep.max_defect = std::max(rep.max_defect, std::abs(state_at(w1, u1) - state_at(w2, u2)));
  }
  rep.compatible = rep.max_defect < kCompatTol;
  return rep;
}

}  // namespace lens
