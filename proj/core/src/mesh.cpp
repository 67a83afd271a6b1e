#include "lens/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace lens {

namespace {

constexpr double kDegenerateRel = 1e-12;

int perm_sign3(int i, int j, int k) {
  int inv = (i > j) + (i > k) + (j > k);
  return (inv % 2 == 0) ? 1 : -1;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Eigen::Matrix2d Mesh::gram(int t) const {
  if (!metric.empty()) return metric[t];
  Eigen::Vector3d p0 = vertices.row(cells(t, 0));
  Eigen::Vector3d e1 = Eigen::Vector3d(vertices.row(cells(t, 1))) - p0;
  Eigen::Vector3d e2 = Eigen::Vector3d(vertices.row(cells(t, 2))) - p0;
  Eigen::Matrix2d g;
  g << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
  return g;
}

double Mesh::area(int t) const {
  Eigen::Matrix2d g = gram(t);
  double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  return 0.5 * std::sqrt(std::max(det, 0.0));
}

double Mesh::edge_length_in(int t, int la, int lb) const {
  Eigen::Matrix2d g = gram(t);
  if (la > lb) std::swap(la, lb);
  if (la == 0 && lb == 1) return std::sqrt(g(0, 0));
  if (la == 0 && lb == 2) return std::sqrt(g(1, 1));
  return std::sqrt(std::max(g(0, 0) + g(1, 1) - 2.0 * g(0, 1), 0.0));
}

double Mesh::segment_length(int s) const {
  if (!seg_length.empty()) return seg_length[s];
  return (vertices.row(cells(s, 0)) - vertices.row(cells(s, 1))).norm();
}

double Mesh::length_scale() const {
  double scale = 0.0;
  if (dim == 2) {
    for (int t = 0; t < n_cells(); ++t)
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) scale = std::max(scale, edge_length_in(t, a, b));
  } else {
    for (int s = 0; s < n_cells(); ++s) scale = std::max(scale, segment_length(s));
  }
  return scale;
}

int Mesh::euler_characteristic() const {
  if (dim == 2) return n_vertices() - n_edges() + n_cells();
  return n_vertices() - n_cells();
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int t = 0; t < n_cells(); ++t) a += area(t);
  return a;
}

void Mesh::finalize() {
  const int nv = n_vertices();
  const int nc = n_cells();
  if (dim != 1 && dim != 2) throw ValidationError("mesh dimension must be 1 or 2");
  if (nv == 0) {
    // the empty mesh: legitimate as the boundary of a closed surface
    if (nc != 0) throw ValidationError("cells without vertices");
    edges.resize(0, 2);
    cell_edges.resize(0, 0);
    cell_edge_dir.resize(0, 0);
    boundary_edge_ids.clear();
    boundary_vertex_ids.clear();
    bnd_edge_dir.clear();
    on_boundary.clear();
    vertex_component.clear();
    n_components = 0;
    component_has_boundary.clear();
    return;
  }
  if (vertices.cols() != 3) throw ValidationError("vertex coordinates must be 3d");
  if (cells.cols() != dim + 1) throw ValidationError("cell arity does not match dimension");
  if (static_cast<int>(cell_sign.size()) != nc) throw ValidationError("cell_sign size mismatch");
  if (!metric.empty() && static_cast<int>(metric.size()) != nc)
    throw ValidationError("metric override must cover every cell");

  std::vector<char> used(nv, 0);
  for (int c = 0; c < nc; ++c) {
    for (int a = 0; a <= dim; ++a) {
      int v = cells(c, a);
      if (v < 0 || v >= nv) throw ValidationError("cell references missing vertex");
      used[v] = 1;
      if (a > 0 && cells(c, a - 1) >= v) throw ValidationError("cell rows must be strictly ascending");
    }
    if (cell_sign[c] != 1 && cell_sign[c] != -1) throw ValidationError("cell sign must be +-1");
  }
  for (int v = 0; v < nv; ++v)
    if (!used[v]) throw ValidationError("vertex " + std::to_string(v) + " belongs to no cell");

  if (!metric.empty()) {
    for (int t = 0; t < nc; ++t) {
      const Eigen::Matrix2d& g = metric[t];
      if (std::abs(g(0, 1) - g(1, 0)) > 0.0) throw ValidationError("metric override must be symmetric");
      if (!(g(0, 0) > 0.0) || !(g(1, 1) > 0.0) || !(g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0) > 0.0))
        throw ValidationError("metric override must be positive definite");
    }
  }

  const double scale = length_scale();
  if (!(scale > 0.0)) throw DegenerateSimplex("mesh has no extent");

  if (dim == 2) {
    for (int t = 0; t < nc; ++t)
      if (area(t) < kDegenerateRel * scale * scale)
        throw DegenerateSimplex("triangle " + std::to_string(t) + " has vanishing area");

    std::map<std::pair<int, int>, int> edge_id;
    std::vector<std::pair<int, int>> edge_list;
    auto intern = [&](int a, int b) {
      auto key = std::make_pair(a, b);
      auto it = edge_id.find(key);
      if (it != edge_id.end()) return it->second;
      int id = static_cast<int>(edge_list.size());
      edge_id.emplace(key, id);
      edge_list.push_back(key);
      return id;
    };
    // first pass: intern in lexicographic order for deterministic ids
    std::vector<std::pair<int, int>> all;
    all.reserve(3 * nc);
    for (int t = 0; t < nc; ++t) {
      int a = cells(t, 0), b = cells(t, 1), c = cells(t, 2);
      all.emplace_back(a, b);
      all.emplace_back(a, c);
      all.emplace_back(b, c);
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    for (auto& e : all) intern(e.first, e.second);

    const int ne = static_cast<int>(edge_list.size());
    edges.resize(ne, 2);
    for (int e = 0; e < ne; ++e) {
      edges(e, 0) = edge_list[e].first;
      edges(e, 1) = edge_list[e].second;
    }

    cell_edges.resize(nc, 3);
    cell_edge_dir.resize(nc, 3);
    std::vector<int> tri_count(ne, 0), dir_sum(ne, 0);
    for (int t = 0; t < nc; ++t) {
      int a = cells(t, 0), b = cells(t, 1), c = cells(t, 2);
      int s = cell_sign[t];
      int ids[3] = {intern(a, b), intern(a, c), intern(b, c)};
      int dirs[3] = {s, -s, s};  // oriented boundary of (a,b,c): +(a,b) -(a,c) +(b,c)
      for (int k = 0; k < 3; ++k) {
        cell_edges(t, k) = ids[k];
        cell_edge_dir(t, k) = dirs[k];
        tri_count[ids[k]] += 1;
        dir_sum[ids[k]] += dirs[k];
      }
    }

    boundary_edge_ids.clear();
    bnd_edge_dir.clear();
    on_boundary.assign(nv, 0);
    for (int e = 0; e < ne; ++e) {
      if (tri_count[e] > 2) throw ValidationError("edge shared by more than two triangles");
      if (tri_count[e] == 2) {
        if (dir_sum[e] != 0) throw ValidationError("inconsistent orientation across an interior edge");
      } else {
        boundary_edge_ids.push_back(e);
        bnd_edge_dir.push_back(dir_sum[e]);
        on_boundary[edges(e, 0)] = 1;
        on_boundary[edges(e, 1)] = 1;
      }
    }

    boundary_vertex_ids.clear();
    std::vector<int> bnd_degree(nv, 0);
    for (int e : boundary_edge_ids) {
      bnd_degree[edges(e, 0)] += 1;
      bnd_degree[edges(e, 1)] += 1;
    }
    for (int v = 0; v < nv; ++v) {
      if (on_boundary[v]) {
        if (bnd_degree[v] != 2) throw ValidationError("boundary is not a closed curve at vertex " + std::to_string(v));
        boundary_vertex_ids.push_back(v);
      }
    }

    // vertex link check: disk condition ties incident edge and triangle counts
    std::vector<int> vtx_tris(nv, 0), vtx_edges(nv, 0);
    for (int t = 0; t < nc; ++t)
      for (int k = 0; k < 3; ++k) vtx_tris[cells(t, k)] += 1;
    for (int e = 0; e < ne; ++e) {
      vtx_edges[edges(e, 0)] += 1;
      vtx_edges[edges(e, 1)] += 1;
    }
    for (int v = 0; v < nv; ++v) {
      int expect = on_boundary[v] ? vtx_tris[v] + 1 : vtx_tris[v];
      if (vtx_edges[v] != expect) throw ValidationError("nonmanifold vertex " + std::to_string(v));
    }
  } else {
    for (int s = 0; s < nc; ++s)
      if (segment_length(s) < kDegenerateRel * scale)
        throw DegenerateSimplex("segment " + std::to_string(s) + " has vanishing length");
    edges = cells;
    cell_edges.resize(0, 0);
    cell_edge_dir.resize(0, 0);
    boundary_edge_ids.clear();
    boundary_vertex_ids.clear();
    bnd_edge_dir.clear();
    on_boundary.assign(nv, 0);
    std::vector<int> in_deg(nv, 0), out_deg(nv, 0);
    for (int s = 0; s < nc; ++s) {
      int u = cells(s, 0), v = cells(s, 1);
      if (cell_sign[s] > 0) {
        out_deg[u] += 1;
        in_deg[v] += 1;
      } else {
        out_deg[v] += 1;
        in_deg[u] += 1;
      }
    }
    for (int v = 0; v < nv; ++v)
      if (in_deg[v] != 1 || out_deg[v] != 1)
        throw ValidationError("curve is not a disjoint union of oriented circles at vertex " + std::to_string(v));
  }

  // components, labeled in order of their smallest vertex
  UnionFind uf(nv);
  for (int c = 0; c < nc; ++c)
    for (int a = 1; a <= dim; ++a) uf.join(cells(c, 0), cells(c, a));
  vertex_component.assign(nv, -1);
  std::map<int, int> root_to_comp;
  for (int v = 0; v < nv; ++v) {
    int r = uf.find(v);
    auto it = root_to_comp.find(r);
    if (it == root_to_comp.end()) {
      int id = static_cast<int>(root_to_comp.size());
      root_to_comp.emplace(r, id);
      vertex_component[v] = id;
    } else {
      vertex_component[v] = it->second;
    }
  }
  n_components = static_cast<int>(root_to_comp.size());
  component_has_boundary.assign(n_components, 0);
  for (int v = 0; v < nv; ++v)
    if (dim == 2 && on_boundary[v]) component_has_boundary[vertex_component[v]] = 1;
  if (dim == 1) component_has_boundary.assign(n_components, 0);
}

Mesh make_mesh(const Eigen::MatrixXd& vertices, const Eigen::MatrixXi& cells_as_given, int dim) {
  Mesh m;
  m.dim = dim;
  m.vertices = vertices;
  const int nc = static_cast<int>(cells_as_given.rows());
  m.cells.resize(nc, dim + 1);
  m.cell_sign.resize(nc);
  for (int c = 0; c < nc; ++c) {
    if (dim == 2) {
      int i = cells_as_given(c, 0), j = cells_as_given(c, 1), k = cells_as_given(c, 2);
      if (i == j || j == k || i == k) throw ValidationError("cell with repeated vertex");
      int s[3] = {i, j, k};
      std::sort(s, s + 3);
      m.cells(c, 0) = s[0];
      m.cells(c, 1) = s[1];
      m.cells(c, 2) = s[2];
      m.cell_sign[c] = perm_sign3(i, j, k);
    } else {
      int u = cells_as_given(c, 0), v = cells_as_given(c, 1);
      if (u == v) throw ValidationError("cell with repeated vertex");
      m.cells(c, 0) = std::min(u, v);
      m.cells(c, 1) = std::max(u, v);
      m.cell_sign[c] = (u < v) ? 1 : -1;
    }
  }
  m.finalize();
  return m;
}

BoundaryExtraction boundary_mesh(const Mesh& m) {
  if (m.dim != 2) throw UnsupportedDegree("boundary_mesh expects a surface mesh");
  BoundaryExtraction out;
  out.vertex_map = m.boundary_vertex_ids;
  std::vector<int> local(m.n_vertices(), -1);
  for (int i = 0; i < static_cast<int>(out.vertex_map.size()); ++i) local[out.vertex_map[i]] = i;

  const int ns = static_cast<int>(m.boundary_edge_ids.size());
  Mesh b;
  b.dim = 1;
  b.vertices.resize(out.vertex_map.size(), 3);
  for (int i = 0; i < static_cast<int>(out.vertex_map.size()); ++i)
    b.vertices.row(i) = m.vertices.row(out.vertex_map[i]);
  b.cells.resize(ns, 2);
  b.cell_sign.resize(ns);
  b.seg_length.resize(ns);
  out.edge_map = m.boundary_edge_ids;
  for (int s = 0; s < ns; ++s) {
    int e = m.boundary_edge_ids[s];
    int p = m.edges(e, 0), q = m.edges(e, 1);
    // vertex_map is ascending, so local order agrees with parent order
    b.cells(s, 0) = local[p];
    b.cells(s, 1) = local[q];
    b.cell_sign[s] = m.bnd_edge_dir[s];
    // inherited length: read it off the unique triangle containing the edge
    double len = 0.0;
    bool found = false;
    for (int t = 0; t < m.n_cells() && !found; ++t)
      for (int k = 0; k < 3; ++k)
        if (m.cell_edges(t, k) == e) {
          int la = -1, lb = -1;
          for (int a = 0; a < 3; ++a) {
            if (m.cells(t, a) == p) la = a;
            if (m.cells(t, a) == q) lb = a;
          }
          len = m.edge_length_in(t, la, lb);
          found = true;
          break;
        }
    b.seg_length[s] = len;
  }
  b.finalize();
  out.boundary = std::move(b);
  return out;
}

// ---------------------------------------------------------------------------
// io

Mesh mesh_from_off_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_tokens = [&](std::vector<std::string>& toks) {
    toks.clear();
    while (std::getline(in, line)) {
      auto h = line.find('#');
      if (h != std::string::npos) line = line.substr(0, h);
      std::istringstream ls(line);
      std::string t;
      while (ls >> t) toks.push_back(t);
      if (!toks.empty()) return true;
    }
    return false;
  };
  std::vector<std::string> toks;
  if (!next_tokens(toks) || toks[0] != "OFF") throw ParseError("missing OFF header");
  if (toks.size() == 1 && !next_tokens(toks)) throw ParseError("truncated OFF header");
  size_t pos = (toks[0] == "OFF") ? 1 : 0;
  if (toks.size() - pos < 3) throw ParseError("OFF header needs vertex and face counts");
  long nv = 0, nf = 0;
  try {
    nv = std::stol(toks[pos]);
    nf = std::stol(toks[pos + 1]);
  } catch (const std::exception&) {
    throw ParseError("bad OFF counts");
  }
  if (nv <= 0 || nf <= 0) throw ParseError("OFF mesh must have vertices and faces");
  Eigen::MatrixXd verts(nv, 3);
  for (long v = 0; v < nv; ++v) {
    if (!next_tokens(toks) || toks.size() < 3) throw ParseError("truncated OFF vertex block");
    try {
      verts(v, 0) = std::stod(toks[0]);
      verts(v, 1) = std::stod(toks[1]);
      verts(v, 2) = std::stod(toks[2]);
    } catch (const std::exception&) {
      throw ParseError("bad OFF vertex coordinates");
    }
  }
  Eigen::MatrixXi faces(nf, 3);
  for (long f = 0; f < nf; ++f) {
    if (!next_tokens(toks) || toks.size() < 4) throw ParseError("truncated OFF face block");
    long arity = 0;
    try {
      arity = std::stol(toks[0]);
      if (arity != 3) throw ParseError("only triangle faces are supported");
      faces(f, 0) = static_cast<int>(std::stol(toks[1]));
      faces(f, 1) = static_cast<int>(std::stol(toks[2]));
      faces(f, 2) = static_cast<int>(std::stol(toks[3]));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("bad OFF face row");
    }
  }
  return make_mesh(verts, faces, 2);
}

Mesh mesh_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad mesh json: ") + e.what());
  }
  try {
    int dim = j.value("dim", 2);
    const auto& jv = j.at("vertices");
    Eigen::MatrixXd verts(jv.size(), 3);
    for (size_t v = 0; v < jv.size(); ++v) {
      const auto& row = jv[v];
      if (row.size() != 2 && row.size() != 3) throw ParseError("vertex rows need 2 or 3 coordinates");
      verts(v, 0) = row[0].get<double>();
      verts(v, 1) = row[1].get<double>();
      verts(v, 2) = row.size() == 3 ? row[2].get<double>() : 0.0;
    }
    const auto& jc = j.contains("triangles") ? j.at("triangles") : j.at("cells");
    Eigen::MatrixXi cells(jc.size(), dim + 1);
    for (size_t c = 0; c < jc.size(); ++c) {
      const auto& row = jc[c];
      if (static_cast<int>(row.size()) != dim + 1) throw ParseError("cell arity does not match dim");
      for (int a = 0; a <= dim; ++a) cells(c, a) = row[a].get<int>();
    }
    Mesh m = make_mesh(verts, cells, dim);
    if (j.contains("metric")) {
      const auto& jm = j.at("metric");
      if (jm.size() != jc.size()) throw ParseError("metric must cover every cell");
      // metric rows refer to cells in file order, which make_mesh preserves
      std::vector<Eigen::Matrix2d> metric(jm.size());
      for (size_t t = 0; t < jm.size(); ++t) {
        const auto& g = jm[t];
        Eigen::Matrix2d G;
        if (g.size() == 3) {
          G << g[0].get<double>(), g[1].get<double>(), g[1].get<double>(), g[2].get<double>();
        } else if (g.size() == 2 && g[0].size() == 2) {
          G << g[0][0].get<double>(), g[0][1].get<double>(), g[1][0].get<double>(), g[1][1].get<double>();
        } else {
          throw ParseError("metric entries must be [g11,g12,g22] or 2x2");
        }
        metric[t] = G;
      }
      m.metric = std::move(metric);
      m.finalize();
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad mesh json: ") + e.what());
  }
}

std::string mesh_to_json(const Mesh& m) {
  nlohmann::json j;
  j["dim"] = m.dim;
  auto jv = nlohmann::json::array();
  for (int v = 0; v < m.n_vertices(); ++v)
    jv.push_back({m.vertices(v, 0), m.vertices(v, 1), m.vertices(v, 2)});
  j["vertices"] = std::move(jv);
  auto jc = nlohmann::json::array();
  for (int c = 0; c < m.n_cells(); ++c) {
    if (m.dim == 2) {
      int a = m.cells(c, 0), b = m.cells(c, 1), cc = m.cells(c, 2);
      if (m.cell_sign[c] > 0)
        jc.push_back({a, b, cc});
      else
        jc.push_back({a, cc, b});
    } else {
      if (m.cell_sign[c] > 0)
        jc.push_back({m.cells(c, 0), m.cells(c, 1)});
      else
        jc.push_back({m.cells(c, 1), m.cells(c, 0)});
    }
  }
  j[m.dim == 2 ? "triangles" : "cells"] = std::move(jc);
  if (!m.metric.empty()) {
    auto jm = nlohmann::json::array();
    for (const auto& G : m.metric) jm.push_back({G(0, 0), G(0, 1), G(1, 1)});
    j["metric"] = std::move(jm);
  }
  return j.dump(2);
}

std::string mesh_to_off(const Mesh& m) {
  if (m.dim != 2) throw UnsupportedDegree("OFF export expects a surface mesh");
  std::ostringstream out;
  out.precision(17);
  out << "OFF\n" << m.n_vertices() << " " << m.n_cells() << " " << m.n_edges() << "\n";
  for (int v = 0; v < m.n_vertices(); ++v)
    out << m.vertices(v, 0) << " " << m.vertices(v, 1) << " " << m.vertices(v, 2) << "\n";
  for (int c = 0; c < m.n_cells(); ++c) {
    int a = m.cells(c, 0), b = m.cells(c, 1), cc = m.cells(c, 2);
    if (m.cell_sign[c] < 0) std::swap(b, cc);
    out << "3 " << a << " " << b << " " << cc << "\n";
  }
  return out.str();
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".off") return mesh_from_off_text(text);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return mesh_from_json_text(text);
  // sniff
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '['))
    return mesh_from_json_text(text);
  return mesh_from_off_text(text);
}

// ---------------------------------------------------------------------------
// generators

namespace {
constexpr double kTau = 6.283185307179586476925286766559;
}

Mesh make_annulus(double r_in, double r_out, int n_radial, int n_angular) {
  if (!(r_in > 0.0) || !(r_out > r_in)) throw ValidationError("annulus radii must satisfy 0 < r_in < r_out");
  if (n_radial < 1 || n_angular < 3) throw ValidationError("annulus resolution too small");
  const int nr = n_radial, na = n_angular;
  Eigen::MatrixXd verts((nr + 1) * na, 3);
  for (int i = 0; i <= nr; ++i) {
    double r = r_in + (r_out - r_in) * static_cast<double>(i) / nr;
    for (int j = 0; j < na; ++j) {
      double th = kTau * j / na;
      verts.row(i * na + j) << r * std::cos(th), r * std::sin(th), 0.0;
    }
  }
  Eigen::MatrixXi faces(2 * nr * na, 3);
  int f = 0;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < na; ++j) {
      int jp = (j + 1) % na;
      int v00 = i * na + j, v01 = i * na + jp, v10 = (i + 1) * na + j, v11 = (i + 1) * na + jp;
      faces.row(f++) << v00, v10, v11;
      faces.row(f++) << v00, v11, v01;
    }
  }
  return make_mesh(verts, faces, 2);
}

Mesh make_disk(double radius, int n_radial, int n_angular) {
  if (!(radius > 0.0)) throw ValidationError("disk radius must be positive");
  if (n_radial < 1 || n_angular < 3) throw ValidationError("disk resolution too small");
  const int nr = n_radial, na = n_angular;
  Eigen::MatrixXd verts(1 + nr * na, 3);
  verts.row(0) << 0.0, 0.0, 0.0;
  auto vid = [&](int i, int j) { return 1 + (i - 1) * na + (j % na); };
  for (int i = 1; i <= nr; ++i) {
    double r = radius * static_cast<double>(i) / nr;
    for (int j = 0; j < na; ++j) {
      double th = kTau * j / na;
      verts.row(vid(i, j)) << r * std::cos(th), r * std::sin(th), 0.0;
    }
  }
  Eigen::MatrixXi faces(na + 2 * (nr - 1) * na, 3);
  int f = 0;
  for (int j = 0; j < na; ++j) faces.row(f++) << 0, vid(1, j), vid(1, j + 1);
  for (int i = 1; i < nr; ++i) {
    for (int j = 0; j < na; ++j) {
      int v00 = vid(i, j), v01 = vid(i, j + 1), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1);
      faces.row(f++) << v00, v10, v11;
      faces.row(f++) << v00, v11, v01;
    }
  }
  return make_mesh(verts, faces, 2);
}

Mesh make_sphere(int subdivisions, double radius) {
  if (subdivisions < 0 || subdivisions > 7) throw ValidationError("sphere subdivisions out of range");
  if (!(radius > 0.0)) throw ValidationError("sphere radius must be positive");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& v : verts) v.normalize();
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Eigen::Vector3d m = (verts[a] + verts[b]).normalized();
      int id = static_cast<int>(verts.size());
      verts.push_back(m);
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& fc : faces) {
      int a = fc[0], b = fc[1], c = fc[2];
      int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({ab, b, bc});
      next.push_back({ca, bc, c});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  Eigen::MatrixXd V(verts.size(), 3);
  for (size_t i = 0; i < verts.size(); ++i) V.row(i) = radius * verts[i];
  Eigen::MatrixXi F(faces.size(), 3);
  for (size_t i = 0; i < faces.size(); ++i) F.row(i) << faces[i][0], faces[i][1], faces[i][2];
  return make_mesh(V, F, 2);
}

Mesh make_cylinder_band(double radius, double height, int n_angular, int n_axial) {
  if (!(radius > 0.0) || !(height > 0.0)) throw ValidationError("cylinder dimensions must be positive");
  if (n_angular < 3 || n_axial < 1) throw ValidationError("cylinder resolution too small");
  const int na = n_angular, nz = n_axial;
  Eigen::MatrixXd verts((nz + 1) * na, 3);
  for (int i = 0; i <= nz; ++i) {
    double z = height * static_cast<double>(i) / nz;
    for (int j = 0; j < na; ++j) {
      double th = kTau * j / na;
      verts.row(i * na + j) << radius * std::cos(th), radius * std::sin(th), z;
    }
  }
  Eigen::MatrixXi faces(2 * nz * na, 3);
  int f = 0;
  for (int i = 0; i < nz; ++i) {
    for (int j = 0; j < na; ++j) {
      int jp = (j + 1) % na;
      int v00 = i * na + j, v01 = i * na + jp, v10 = (i + 1) * na + j, v11 = (i + 1) * na + jp;
      // outward orientation, normals pointing away from the axis
      faces.row(f++) << v00, v01, v11;
      faces.row(f++) << v00, v11, v10;
    }
  }
  return make_mesh(verts, faces, 2);
}

Mesh make_hemisphere(int n_polar, int n_angular, bool north, double radius) {
  if (n_polar < 1 || n_angular < 3) throw ValidationError("hemisphere resolution too small");
  if (!(radius > 0.0)) throw ValidationError("hemisphere radius must be positive");
  const int np = n_polar, na = n_angular;
  Eigen::MatrixXd verts(1 + np * na, 3);
  verts.row(0) << 0.0, 0.0, north ? radius : -radius;
  auto vid = [&](int i, int j) { return 1 + (i - 1) * na + (j % na); };
  for (int i = 1; i <= np; ++i) {
    double alpha = (kTau / 4.0) * static_cast<double>(i) / np;
    double z = radius * std::cos(alpha);
    for (int j = 0; j < na; ++j) {
      double th = kTau * j / na;
      verts.row(vid(i, j)) << radius * std::sin(alpha) * std::cos(th),
          radius * std::sin(alpha) * std::sin(th), north ? z : -z;
    }
  }
  Eigen::MatrixXi faces(na + 2 * (np - 1) * na, 3);
  int f = 0;
  for (int j = 0; j < na; ++j) {
    if (north)
      faces.row(f++) << 0, vid(1, j), vid(1, j + 1);
    else
      faces.row(f++) << 0, vid(1, j + 1), vid(1, j);
  }
  for (int i = 1; i < np; ++i) {
    for (int j = 0; j < na; ++j) {
      int v00 = vid(i, j), v01 = vid(i, j + 1), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1);
      if (north) {
        faces.row(f++) << v00, v10, v11;
        faces.row(f++) << v00, v11, v01;
      } else {
        faces.row(f++) << v00, v11, v10;
        faces.row(f++) << v00, v01, v11;
      }
    }
  }
  return make_mesh(verts, faces, 2);
}

Mesh builtin_mesh(const std::string& spec) {
  std::string name = spec;
  std::vector<double> args;
  auto open = spec.find('(');
  if (open != std::string::npos) {
    if (spec.back() != ')') throw ParseError("unbalanced parentheses in mesh spec " + spec);
    name = spec.substr(0, open);
    std::string inner = spec.substr(open + 1, spec.size() - open - 2);
    std::istringstream in(inner);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        args.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ParseError("bad argument in mesh spec " + spec);
      }
    }
  }
  auto arg = [&](size_t i, double dflt) { return i < args.size() ? args[i] : dflt; };
  if (name == "annulus")
    return make_annulus(arg(0, 1.0), arg(1, 2.0), static_cast<int>(arg(2, 12)), static_cast<int>(arg(3, 60)));
  if (name == "disk")
    return make_disk(arg(0, 1.0), static_cast<int>(arg(1, 10)), static_cast<int>(arg(2, 40)));
  if (name == "sphere") return make_sphere(static_cast<int>(arg(0, 3)), arg(1, 1.0));
  if (name == "cylinder_band" || name == "cylinder")
    return make_cylinder_band(arg(0, 1.0), arg(1, 2.0), static_cast<int>(arg(2, 40)), static_cast<int>(arg(3, 8)));
  if (name == "hemisphere_north")
    return make_hemisphere(static_cast<int>(arg(0, 8)), static_cast<int>(arg(1, 40)), true, arg(2, 1.0));
  if (name == "hemisphere_south")
    return make_hemisphere(static_cast<int>(arg(0, 8)), static_cast<int>(arg(1, 40)), false, arg(2, 1.0));
  throw ParseError("unknown builtin mesh " + name);
}

}  // namespace lens
