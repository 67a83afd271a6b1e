#include "lens/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cache_impl.hpp"

namespace lens {

namespace {

// angle at local vertex slot `a` of a triangle with chart Gram g
double corner_angle(const Eigen::Matrix2d& g, int a) {
  double dot = 0.0, la = 0.0, lb = 0.0;
  double g11 = g(0, 0), g22 = g(1, 1), g12 = g(0, 1);
  if (a == 0) {
    dot = g12;
    la = std::sqrt(g11);
    lb = std::sqrt(g22);
  } else if (a == 1) {
    dot = g11 - g12;
    la = std::sqrt(g11);
    lb = std::sqrt(std::max(g11 + g22 - 2.0 * g12, 0.0));
  } else {
    dot = g22 - g12;
    la = std::sqrt(g22);
    lb = std::sqrt(std::max(g11 + g22 - 2.0 * g12, 0.0));
  }
  double c = dot / (la * lb);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace

BoundaryCalculus::BoundaryCalculus(Mesh m) : mesh(std::move(m)) {
  if (mesh.dim != 2) throw UnsupportedDegree("BoundaryCalculus expects a surface mesh");
  mesh.finalize();
  BoundaryExtraction be = boundary_mesh(mesh);
  boundary = std::move(be.boundary);
  bvertex_to_vertex = std::move(be.vertex_map);
  bsegment_to_edge = std::move(be.edge_map);
  vertex_to_bvertex.assign(mesh.n_vertices(), -1);
  for (int i = 0; i < n_bvertices(); ++i) vertex_to_bvertex[bvertex_to_vertex[i]] = i;
  interior_vertex_ids.clear();
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (!mesh.on_boundary[v]) interior_vertex_ids.push_back(v);
  assemble();
}

void BoundaryCalculus::assemble() {
  const int nv = mesh.n_vertices();
  const int ne = mesh.n_edges();
  const int nt = mesh.n_cells();
  const int nb = n_bvertices();
  const int ns = n_bsegments();

  {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * ne);
    for (int e = 0; e < ne; ++e) {
      trip.emplace_back(e, mesh.edges(e, 0), -1.0);
      trip.emplace_back(e, mesh.edges(e, 1), 1.0);
    }
    d0.resize(ne, nv);
    d0.setFromTriplets(trip.begin(), trip.end());
  }
  {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(3 * nt);
    for (int t = 0; t < nt; ++t)
      for (int k = 0; k < 3; ++k)
        trip.emplace_back(t, mesh.cell_edges(t, k), static_cast<double>(mesh.cell_edge_dir(t, k)));
    d1.resize(nt, ne);
    d1.setFromTriplets(trip.begin(), trip.end());
  }

  m0 = Eigen::VectorXd::Zero(nv);
  m2.resize(nt);
  std::vector<Eigen::Triplet<double>> m1trip;
  m1trip.reserve(9 * nt);
  for (int t = 0; t < nt; ++t) {
    const double A = mesh.area(t);
    m2[t] = 1.0 / A;
    for (int k = 0; k < 3; ++k) m0[mesh.cells(t, k)] += A / 3.0;

    Eigen::Matrix2d ginv = mesh.gram(t).inverse();
    // pairwise inner products of the barycentric differentials
    double g[3][3];
    g[1][1] = ginv(0, 0);
    g[1][2] = ginv(0, 1);
    g[2][1] = ginv(0, 1);
    g[2][2] = ginv(1, 1);
    g[0][1] = -(ginv(0, 0) + ginv(0, 1));
    g[1][0] = g[0][1];
    g[0][2] = -(ginv(0, 1) + ginv(1, 1));
    g[2][0] = g[0][2];
    g[0][0] = ginv(0, 0) + 2.0 * ginv(0, 1) + ginv(1, 1);

    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};  // matches cell_edges layout
    for (int a = 0; a < 3; ++a) {
      int i = pairs[a][0], j = pairs[a][1];
      for (int b = 0; b < 3; ++b) {
        int k = pairs[b][0], l = pairs[b][1];
        double val = (A / 12.0) * ((1.0 + (i == k)) * g[j][l] - (1.0 + (i == l)) * g[j][k] -
                                   (1.0 + (j == k)) * g[i][l] + (1.0 + (j == l)) * g[i][k]);
        m1trip.emplace_back(mesh.cell_edges(t, a), mesh.cell_edges(t, b), val);
      }
    }
  }
  M1.resize(ne, ne);
  M1.setFromTriplets(m1trip.begin(), m1trip.end());

  {
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < nb; ++i) trip.emplace_back(i, bvertex_to_vertex[i], 1.0);
    tr.resize(nb, nv);
    tr.setFromTriplets(trip.begin(), trip.end());
  }

  b0 = Eigen::VectorXd::Zero(nb);
  seg_len.resize(ns);
  for (int s = 0; s < ns; ++s) {
    double len = boundary.segment_length(s);
    seg_len[s] = len;
    b0[boundary.cells(s, 0)] += 0.5 * len;
    b0[boundary.cells(s, 1)] += 0.5 * len;
  }
  {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * ns);
    for (int s = 0; s < ns; ++s) {
      trip.emplace_back(s, boundary.cells(s, 0), -1.0);
      trip.emplace_back(s, boundary.cells(s, 1), 1.0);
    }
    d_bnd.resize(ns, nb);
    d_bnd.setFromTriplets(trip.begin(), trip.end());
  }
  {
    SpMat b1(ns, ns), b0inv(nb, nb);
    std::vector<Eigen::Triplet<double>> t1, t2;
    for (int s = 0; s < ns; ++s) t1.emplace_back(s, s, 1.0 / seg_len[s]);
    for (int i = 0; i < nb; ++i) t2.emplace_back(i, i, 1.0 / b0[i]);
    b1.setFromTriplets(t1.begin(), t1.end());
    b0inv.setFromTriplets(t2.begin(), t2.end());
    dstar_bnd = b0inv * SpMat(d_bnd.transpose()) * b1;
  }

  // nml: unfold the triangle fan at each boundary vertex into a flat chart,
  // fit one constant covector to the incident edge values, read off its
  // outward component
  {
    std::vector<std::vector<int>> vert_tris(nv);
    for (int t = 0; t < nt; ++t)
      for (int k = 0; k < 3; ++k) vert_tris[mesh.cells(t, k)].push_back(t);
    std::vector<std::array<int, 2>> edge_tris(ne, {-1, -1});
    for (int t = 0; t < nt; ++t)
      for (int k = 0; k < 3; ++k) {
        int e = mesh.cell_edges(t, k);
        if (edge_tris[e][0] < 0)
          edge_tris[e][0] = t;
        else
          edge_tris[e][1] = t;
      }
    // outgoing boundary edge per boundary vertex
    std::vector<int> outgoing(nv, -1);
    for (size_t i = 0; i < mesh.boundary_edge_ids.size(); ++i) {
      int e = mesh.boundary_edge_ids[i];
      int dir = mesh.bnd_edge_dir[i];
      int from = dir > 0 ? mesh.edges(e, 0) : mesh.edges(e, 1);
      outgoing[from] = e;
    }

    std::vector<Eigen::Triplet<double>> trip;
    for (int bi = 0; bi < nb; ++bi) {
      const int v = bvertex_to_vertex[bi];
      int e_cur = outgoing[v];
      if (e_cur < 0) throw ValidationError("boundary vertex without outgoing edge");
      double phi = 0.0;
      int t_prev = -1;
      std::vector<std::pair<int, double>> fan;  // (edge id, angle of its direction from v)
      fan.emplace_back(e_cur, 0.0);
      const int n_tri = static_cast<int>(vert_tris[v].size());
      for (int step = 0; step < n_tri; ++step) {
        int t_cur = (edge_tris[e_cur][0] == t_prev) ? edge_tris[e_cur][1] : edge_tris[e_cur][0];
        if (t_cur < 0) throw ValidationError("broken triangle fan at a boundary vertex");
        int la = -1;
        for (int a = 0; a < 3; ++a)
          if (mesh.cells(t_cur, a) == v) la = a;
        // the other edge at v inside t_cur
        int e_next = -1;
        for (int k = 0; k < 3; ++k) {
          int e = mesh.cell_edges(t_cur, k);
          if (e == e_cur) continue;
          if (mesh.edges(e, 0) == v || mesh.edges(e, 1) == v) e_next = e;
        }
        phi += corner_angle(mesh.gram(t_cur), la);
        fan.emplace_back(e_next, phi);
        t_prev = t_cur;
        e_cur = e_next;
      }
      // n_tri + 1 edge directions; total wedge angle is phi
      Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
      std::vector<Eigen::Vector2d> delta(fan.size());
      for (size_t k = 0; k < fan.size(); ++k) {
        int e = fan[k].first;
        double ang = fan[k].second;
        // length of e, read in any containing triangle
        int t_any = edge_tris[e][0];
        int la = -1, lb = -1;
        for (int a = 0; a < 3; ++a) {
          if (mesh.cells(t_any, a) == mesh.edges(e, 0)) la = a;
          if (mesh.cells(t_any, a) == mesh.edges(e, 1)) lb = a;
        }
        double len = mesh.edge_length_in(t_any, la, lb);
        Eigen::Vector2d dir(std::cos(ang), std::sin(ang));
        // canonical edge vector points low -> high
        delta[k] = (mesh.edges(e, 0) == v) ? (len * dir).eval() : (-len * dir).eval();
        A += delta[k] * delta[k].transpose();
      }
      Eigen::Vector2d n_out(-std::cos(0.5 * phi), -std::sin(0.5 * phi));
      Eigen::Matrix2d Ainv = A.inverse();
      for (size_t k = 0; k < fan.size(); ++k) {
        double coef = n_out.dot(Ainv * delta[k]);
        trip.emplace_back(bi, fan[k].first, coef);
      }
    }
    nml.resize(nb, ne);
    nml.setFromTriplets(trip.begin(), trip.end());
  }

  {
    SpMat m0inv(nv, nv), b0diag(nb, nb);
    std::vector<Eigen::Triplet<double>> t1, t2;
    for (int v = 0; v < nv; ++v) t1.emplace_back(v, v, 1.0 / m0[v]);
    for (int i = 0; i < nb; ++i) t2.emplace_back(i, i, b0[i]);
    m0inv.setFromTriplets(t1.begin(), t1.end());
    b0diag.setFromTriplets(t2.begin(), t2.end());
    dstar1 = m0inv * (SpMat(d0.transpose()) * M1 - SpMat(tr.transpose()) * b0diag * nml);
  }
}

Cochain BoundaryCalculus::d(const Cochain& c) const {
  if (c.degree == 0) {
    if (c.values.size() != n_vertices()) throw MeshMismatch("0-cochain size");
    return {1, d0 * c.values};
  }
  if (c.degree == 1) {
    if (c.values.size() != n_edges()) throw MeshMismatch("1-cochain size");
    return {2, d1 * c.values};
  }
  throw UnsupportedDegree("d on degree " + std::to_string(c.degree));
}

Cochain BoundaryCalculus::dstar(const Cochain& c) const {
  if (c.degree != 1) throw UnsupportedDegree("dstar implemented for degree 1 only");
  if (c.values.size() != n_edges()) throw MeshMismatch("1-cochain size");
  return {0, dstar1 * c.values};
}

Cochain BoundaryCalculus::trace(const Cochain& c) const {
  if (c.degree != 0) throw UnsupportedDegree("trace expects a 0-cochain");
  if (c.values.size() != n_vertices()) throw MeshMismatch("0-cochain size");
  return {0, tr * c.values};
}

Cochain BoundaryCalculus::normal(const Cochain& c) const {
  if (c.degree != 1) throw UnsupportedDegree("normal trace expects a 1-cochain");
  if (c.values.size() != n_edges()) throw MeshMismatch("1-cochain size");
  return {0, nml * c.values};
}

Cochain BoundaryCalculus::d_boundary(const Cochain& c) const {
  if (c.degree != 0) throw UnsupportedDegree("boundary d expects a 0-cochain");
  if (c.values.size() != n_bvertices()) throw MeshMismatch("boundary cochain size");
  return {1, d_bnd * c.values};
}

Cochain BoundaryCalculus::dstar_boundary(const Cochain& c) const {
  if (c.degree != 1) throw UnsupportedDegree("boundary dstar expects a 1-cochain");
  if (c.values.size() != n_bsegments()) throw MeshMismatch("boundary cochain size");
  return {0, dstar_bnd * c.values};
}

double BoundaryCalculus::inner(const Cochain& a, const Cochain& b) const {
  if (a.degree != b.degree) throw DegreeMismatch("inner product degrees differ");
  if (a.degree == 0) {
    if (a.values.size() != n_vertices() || b.values.size() != n_vertices())
      throw MeshMismatch("0-cochain size");
    return a.values.dot(m0.cwiseProduct(b.values));
  }
  if (a.degree == 1) {
    if (a.values.size() != n_edges() || b.values.size() != n_edges())
      throw MeshMismatch("1-cochain size");
    return a.values.dot(M1 * b.values);
  }
  if (a.degree == 2) {
    if (a.values.size() != n_cells() || b.values.size() != n_cells())
      throw MeshMismatch("2-cochain size");
    return a.values.dot(m2.cwiseProduct(b.values));
  }
  throw UnsupportedDegree("inner product degree");
}

double BoundaryCalculus::inner_boundary(const Cochain& a, const Cochain& b) const {
  if (a.degree != b.degree) throw DegreeMismatch("inner product degrees differ");
  if (a.degree == 0) {
    if (a.values.size() != n_bvertices() || b.values.size() != n_bvertices())
      throw MeshMismatch("boundary cochain size");
    return a.values.dot(b0.cwiseProduct(b.values));
  }
  if (a.degree == 1) {
    if (a.values.size() != n_bsegments() || b.values.size() != n_bsegments())
      throw MeshMismatch("boundary cochain size");
    return a.values.dot(b.values.cwiseQuotient(seg_len));
  }
  throw UnsupportedDegree("boundary inner product degree");
}

double BoundaryCalculus::green_residual(const Eigen::VectorXd& u, const Eigen::VectorXd& b) const {
  double lhs = (d0 * u).dot(M1 * b);
  double mid = u.dot(m0.cwiseProduct(dstar1 * b));
  double bnd = (tr * u).dot(b0.cwiseProduct(nml * b));
  double rhs = mid + bnd;
  return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1.0);
}

SpMat BoundaryCalculus::named_operator(const std::string& name) const {
  auto diag = [](const Eigen::VectorXd& v) {
    SpMat m(v.size(), v.size());
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < v.size(); ++i) t.emplace_back(i, i, v[i]);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  };
  if (name == "d0") return d0;
  if (name == "d1") return d1;
  if (name == "M0") return diag(m0);
  if (name == "M1") return M1;
  if (name == "M2") return diag(m2);
  if (name == "tr") return tr;
  if (name == "B0") return diag(b0);
  if (name == "B1") return diag(seg_len.cwiseInverse());
  if (name == "d_bnd") return d_bnd;
  if (name == "nml") return nml;
  if (name == "dstar") return dstar1;
  if (name == "dstar_bnd") return dstar_bnd;
  throw ParseError("unknown operator name " + name);
}

CalculusCache& BoundaryCalculus::cache() const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (!cache_) cache_ = std::make_shared<CalculusCache>();
  return *cache_;
}

void write_matrix_market(const SpMat& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SolverFailure("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
  out.precision(17);
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
}

void write_matrix_market_dense(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SolverFailure("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << " " << m.cols() << "\n";
  out.precision(17);
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) out << m(i, j) << "\n";
}

Eigen::MatrixXd read_matrix_market_dense(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  bool coordinate = false;
  if (!std::getline(in, line)) throw ParseError("empty matrix market file");
  if (line.find("MatrixMarket") == std::string::npos) throw ParseError("missing MatrixMarket header");
  coordinate = line.find("coordinate") != std::string::npos;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream hdr(line);
  long rows = 0, cols = 0, nnz = 0;
  hdr >> rows >> cols;
  if (coordinate) hdr >> nnz;
  if (rows <= 0 || cols <= 0) throw ParseError("bad matrix market sizes");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  if (coordinate) {
    for (long k = 0; k < nnz; ++k) {
      long i, j;
      double v;
      if (!(in >> i >> j >> v)) throw ParseError("truncated matrix market data");
      m(i - 1, j - 1) = v;
    }
  } else {
    for (long j = 0; j < cols; ++j)
      for (long i = 0; i < rows; ++i)
        if (!(in >> m(i, j))) throw ParseError("truncated matrix market data");
  }
  return m;
}

}  // namespace lens
