#include "lens/weyl.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "lens/hodge.hpp"

namespace lens {

namespace {

constexpr double kCoeffDrop = 1e-14;
constexpr double kSymplecticTol = 1e-10;
constexpr double kRankTol = 1e-9;

std::string canonical_coord(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.11e", x);
  double parsed = std::strtod(buf, nullptr);
  if (parsed == 0.0) std::snprintf(buf, sizeof(buf), "%.11e", 0.0);
  return buf;
}

void check_space(const SpacePtr& a, const SpacePtr& b, const char* what) {
  if (!same_space(a, b)) throw SpaceMismatch(what);
}

// columns of b made orthonormal for the metric g, in place
void gram_orthonormalize(Eigen::MatrixXd& b, const Eigen::MatrixXd& g) {
  if (b.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::MatrixXd gram = b.transpose() * (g * b);
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw SolverFailure("orthonormalization failed");
    b = llt.matrixU().solve<Eigen::OnTheRight>(b);
  }
  for (int j = 0; j < b.cols(); ++j) {
    for (int i = 0; i < b.rows(); ++i) {
      if (std::abs(b(i, j)) > 1e-8) {
        if (b(i, j) < 0) b.col(j) = -b.col(j);
        break;
      }
    }
  }
}

}  // namespace

double SymplecticSpace::pair(const Eigen::VectorXd& v, const Eigen::VectorXd& w) const {
  if (v.size() != dim || w.size() != dim) throw DimensionMismatch("sigma arguments");
  return v.dot(sigma * w);
}

double SymplecticSpace::norm(const Eigen::VectorXd& v) const {
  if (v.size() != dim) throw DimensionMismatch("norm argument");
  return std::sqrt(std::max(0.0, v.dot(gram * v)));
}

SpacePtr make_symplectic_space(const std::string& name, const Eigen::MatrixXd& sigma) {
  return make_symplectic_space(
      name, sigma, Eigen::MatrixXd::Identity(sigma.rows(), sigma.rows()));
}

SpacePtr make_symplectic_space(const std::string& name, const Eigen::MatrixXd& sigma,
                               const Eigen::MatrixXd& gram) {
  if (sigma.rows() != sigma.cols()) throw ValidationError("sigma must be square");
  const int n = static_cast<int>(sigma.rows());
  if (gram.rows() != n || gram.cols() != n) throw ValidationError("gram size");
  double scale = 1.0 + sigma.cwiseAbs().maxCoeff();
  if ((sigma + sigma.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale)
    throw ValidationError("sigma must be antisymmetric");
  double gscale = 1.0 + gram.cwiseAbs().maxCoeff();
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-14 * gscale)
    throw ValidationError("gram must be symmetric");
  auto s = std::make_shared<SymplecticSpace>();
  s->name = name;
  s->dim = n;
  s->sigma = sigma;
  s->gram = gram;
  return s;
}

SpacePtr direct_sum(const SpacePtr& a, const SpacePtr& b) {
  const int n = a->dim + b->dim;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
  sigma.topLeftCorner(a->dim, a->dim) = a->sigma;
  sigma.bottomRightCorner(b->dim, b->dim) = b->sigma;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  gram.topLeftCorner(a->dim, a->dim) = a->gram;
  gram.bottomRightCorner(b->dim, b->dim) = b->gram;
  return make_symplectic_space("(" + a->name + "+" + b->name + ")", sigma, gram);
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (!a || !b) return false;
  if (a.get() == b.get()) return true;
  return a->dim == b->dim && a->name == b->name;
}

Eigen::VectorXd canonical_vector(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (int i = 0; i < v.size(); ++i)
    out[i] = std::strtod(canonical_coord(v[i]).c_str(), nullptr);
  return out;
}

std::string canonical_label(const Eigen::VectorXd& v) {
  std::string s;
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += canonical_coord(v[i]);
  }
  return s;
}

WeylElement WeylElement::zero(SpacePtr space) { return WeylElement(std::move(space)); }

WeylElement WeylElement::unit(SpacePtr space) {
  WeylElement e(space);
  e.add_term(Eigen::VectorXd::Zero(space->dim), 1.0);
  return e;
}

double WeylElement::two_norm() const {
  double s = 0.0;
  for (const auto& [label, t] : terms_) s += std::norm(t.c);
  return std::sqrt(s);
}

void WeylElement::add_term(const Eigen::VectorXd& v, std::complex<double> c) {
  if (v.size() != space_->dim) throw DimensionMismatch("term vector");
  // the label is only the merge key; the exact vector is kept so that phase
  // bookkeeping stays bilinear to machine precision
  std::string label = canonical_label(canonical_vector(v));
  auto it = terms_.find(label);
  if (it == terms_.end()) {
    if (std::abs(c) >= kCoeffDrop) terms_.emplace(std::move(label), Term{v, c});
    return;
  }
  it->second.c += c;
  if (std::abs(it->second.c) < kCoeffDrop) terms_.erase(it);
}

WeylElement generator(const SpacePtr& space, const Eigen::VectorXd& v) {
  WeylElement e(space);
  e.add_term(v, 1.0);
  return e;
}

WeylElement generator(const SpacePtr& space, const Eigen::VectorXd& v,
                      const Eigen::VectorXd& background) {
  WeylElement e(space);
  e.add_term(v, std::exp(std::complex<double>(0.0, space->pair(v, background))));
  return e;
}

WeylElement add(const WeylElement& a, const WeylElement& b) {
  check_space(a.space_, b.space_, "add");
  WeylElement out = a;
  for (const auto& [label, t] : b.terms_) out.add_term(t.v, t.c);
  return out;
}

WeylElement scale(std::complex<double> c, const WeylElement& a) {
  WeylElement out = WeylElement::zero(a.space_);
  for (const auto& [label, t] : a.terms_) out.add_term(t.v, c * t.c);
  return out;
}

WeylElement multiply(const WeylElement& a, const WeylElement& b) {
  check_space(a.space_, b.space_, "multiply");
  WeylElement out = WeylElement::zero(a.space_);
  for (const auto& [la, ta] : a.terms_) {
    for (const auto& [lb, tb] : b.terms_) {
      std::complex<double> phase =
          std::exp(std::complex<double>(0.0, -0.5 * a.space_->pair(ta.v, tb.v)));
      out.add_term(ta.v + tb.v, ta.c * tb.c * phase);
    }
  }
  return out;
}

WeylElement star(const WeylElement& a) {
  WeylElement out = WeylElement::zero(a.space_);
  for (const auto& [label, t] : a.terms_) out.add_term(-t.v, std::conj(t.c));
  return out;
}

WeylElement background_shift(const WeylElement& a, const Eigen::VectorXd& diff) {
  WeylElement out = WeylElement::zero(a.space_);
  for (const auto& [label, t] : a.terms_) {
    std::complex<double> phase =
        std::exp(std::complex<double>(0.0, a.space_->pair(t.v, diff)));
    out.add_term(t.v, phase * t.c);
  }
  return out;
}

WeylElement tensor(const WeylElement& a, const WeylElement& b) {
  SpacePtr sum = direct_sum(a.space_, b.space_);
  WeylElement out = WeylElement::zero(sum);
  for (const auto& [la, ta] : a.terms_) {
    for (const auto& [lb, tb] : b.terms_) {
      Eigen::VectorXd v(sum->dim);
      v.head(a.space_->dim) = ta.v;
      v.tail(b.space_->dim) = tb.v;
      out.add_term(v, ta.c * tb.c);
    }
  }
  return out;
}

WeylElement weyl_map(const Eigen::MatrixXd& iota, const WeylElement& a, const SpacePtr& target) {
  if (iota.rows() != target->dim || iota.cols() != a.space_->dim)
    throw DimensionMismatch("weyl map shape");
  Eigen::MatrixXd pulled = iota.transpose() * target->sigma * iota;
  double scale = 1.0 + a.space_->sigma.cwiseAbs().maxCoeff();
  if ((pulled - a.space_->sigma).cwiseAbs().maxCoeff() > kSymplecticTol * scale)
    throw NotSymplectic("map does not preserve sigma");
  WeylElement out = WeylElement::zero(target);
  for (const auto& [label, t] : a.terms_) out.add_term(iota * t.v, t.c);
  return out;
}

bool approx_equal(const WeylElement& a, const WeylElement& b, double label_tol,
                  double coeff_tol) {
  if (!same_space(a.space(), b.space())) return false;
  std::map<std::string, bool> used;
  for (const auto& [label, t] : b.terms()) used[label] = false;
  for (const auto& [label, t] : a.terms()) {
    const WeylElement::Term* match = nullptr;
    std::string match_label;
    auto exact = b.terms().find(label);
    if (exact != b.terms().end() && !used[label]) {
      match = &exact->second;
      match_label = label;
    } else {
      for (const auto& [lb, tb] : b.terms()) {
        if (used[lb]) continue;
        if (a.space()->norm(t.v - tb.v) <= label_tol * (1.0 + a.space()->norm(t.v))) {
          match = &tb;
          match_label = lb;
          break;
        }
      }
    }
    if (!match) {
      if (std::abs(t.c) > coeff_tol) return false;
      continue;
    }
    used[match_label] = true;
    if (std::abs(t.c - match->c) > coeff_tol) return false;
  }
  for (const auto& [label, t] : b.terms())
    if (!used[label] && std::abs(t.c) > coeff_tol) return false;
  return true;
}

std::string weyl_to_json(const WeylElement& a) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [label, t] : a.terms()) {
    nlohmann::json term;
    term["v"] = std::vector<double>(t.v.data(), t.v.data() + t.v.size());
    term["re"] = t.c.real();
    term["im"] = t.c.imag();
    arr.push_back(term);
  }
  return arr.dump();
}

WeylElement weyl_from_json_text(const SpacePtr& space, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  if (!j.is_array()) throw ParseError("expected an array of terms");
  WeylElement out = WeylElement::zero(space);
  for (const auto& term : j) {
    if (!term.contains("v") || !term.contains("re") || !term.contains("im"))
      throw ParseError("term needs v, re, im");
    const auto& arr = term.at("v");
    if (!arr.is_array() || static_cast<int>(arr.size()) != space->dim)
      throw ParseError("term vector has wrong length");
    Eigen::VectorXd v(space->dim);
    for (int i = 0; i < space->dim; ++i) {
      if (!arr[i].is_number()) throw ParseError("term vector entries must be numbers");
      v[i] = arr[i].get<double>();
    }
    out.add_term(v, std::complex<double>(term.at("re").get<double>(),
                                         term.at("im").get<double>()));
  }
  return out;
}

bool FixedPointSet::contains(const Eigen::VectorXd& v, double tol) const {
  if (v.size() != space->dim) throw DimensionMismatch("contains argument");
  Eigen::VectorXd r = v;
  if (basis.cols() > 0) r -= basis * (basis.transpose() * (space->gram * v));
  return space->norm(r) <= tol * (1.0 + space->norm(v));
}

FixedPointSet fixed_point_generators(const SpacePtr& space,
                                     const std::vector<Eigen::VectorXd>& group) {
  const int n = space->dim;
  Eigen::MatrixXd rows(static_cast<int>(group.size()), n);
  for (size_t i = 0; i < group.size(); ++i) {
    if (group[i].size() != n) throw DimensionMismatch("group generator size");
    rows.row(static_cast<int>(i)) = (space->sigma * group[i]).transpose();
  }
  Eigen::MatrixXd basis;
  if (rows.rows() == 0) {
    basis = Eigen::MatrixXd::Identity(n, n);
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cut = sv.size() > 0 ? kRankTol * sv[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > cut) ++rank;
    basis = svd.matrixV().rightCols(n - rank);
  }
  gram_orthonormalize(basis, space->gram);
  return FixedPointSet{space, std::move(basis)};
}

ChhSpace make_chh_space(const BoundaryCalculus& c, const std::string& name) {
  ChhSpace s;
  s.calc = &c;
  s.tang = tangential_space_basis(c);
  s.lg = lg_space_basis(c);
  s.nc = static_cast<int>(s.tang.cols());
  s.ns = static_cast<int>(s.lg.cols());
  const int n = 2 * s.nc + 2 * s.ns;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
  sigma.block(0, s.nc, s.nc, s.nc) = Eigen::MatrixXd::Identity(s.nc, s.nc);
  sigma.block(s.nc, 0, s.nc, s.nc) = -Eigen::MatrixXd::Identity(s.nc, s.nc);
  sigma.block(2 * s.nc, 2 * s.nc + s.ns, s.ns, s.ns) =
      Eigen::MatrixXd::Identity(s.ns, s.ns);
  sigma.block(2 * s.nc + s.ns, 2 * s.nc, s.ns, s.ns) =
      -Eigen::MatrixXd::Identity(s.ns, s.ns);
  s.space = make_symplectic_space(name, sigma);
  return s;
}

Eigen::VectorXd coords_of(const ChhSpace& s, const CHHCoords& x, double tol) {
  const BoundaryCalculus& c = *s.calc;
  if (x.F.size() != c.n_edges() || x.H.size() != c.n_edges() ||
      x.f.size() != c.n_bvertices() || x.h.size() != c.n_bvertices())
    throw MeshMismatch("coordinate sizes");
  Eigen::VectorXd out(s.space->dim);
  auto tang_part = [&](const Eigen::VectorXd& v, const char* what) {
    Eigen::VectorXd coords = s.tang.transpose() * (c.M1 * v);
    Eigen::VectorXd res = v - s.tang * coords;
    double nv = std::sqrt(std::max(0.0, v.dot(c.M1 * v)));
    double nr = std::sqrt(std::max(0.0, res.dot(c.M1 * res)));
    if (nr > tol * (1.0 + nv))
      throw SpaceMismatch(std::string(what) + " is not tangential");
    return coords;
  };
  auto lg_part = [&](const Eigen::VectorXd& v, const char* what) {
    Eigen::VectorXd coords = s.lg.transpose() * v.cwiseProduct(c.b0);
    Eigen::VectorXd res = v - s.lg * coords;
    double nv = std::sqrt(std::max(0.0, v.dot(v.cwiseProduct(c.b0))));
    double nr = std::sqrt(std::max(0.0, res.dot(res.cwiseProduct(c.b0))));
    if (nr > tol * (1.0 + nv))
      throw SpaceMismatch(std::string(what) + " is not mean-free on each circle");
    return coords;
  };
  out.segment(0, s.nc) = tang_part(x.F, "F");
  out.segment(s.nc, s.nc) = tang_part(x.H, "H");
  out.segment(2 * s.nc, s.ns) = lg_part(x.f, "f");
  out.segment(2 * s.nc + s.ns, s.ns) = lg_part(x.h, "h");
  return out;
}

CHHCoords coords_to_chh(const ChhSpace& s, const Eigen::VectorXd& v) {
  if (v.size() != s.space->dim) throw DimensionMismatch("coordinate vector");
  CHHCoords x;
  x.F = s.tang * v.segment(0, s.nc);
  x.H = s.tang * v.segment(s.nc, s.nc);
  x.f = s.lg * v.segment(2 * s.nc, s.ns);
  x.h = s.lg * v.segment(2 * s.nc + s.ns, s.ns);
  return x;
}

Eigen::VectorXd gauge_coords(const ChhSpace& s, const Eigen::VectorXd& lam) {
  const BoundaryCalculus& c = *s.calc;
  if (lam.size() != c.n_bvertices()) throw MeshMismatch("gauge function size");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s.space->dim);
  // the basis columns are mean-free per circle, so locally constant parts of
  // lam drop out here by themselves
  out.segment(2 * s.nc, s.ns) = s.lg.transpose() * lam.cwiseProduct(c.b0);
  return out;
}

WeylElement large_gauge(const ChhSpace& s, const WeylElement& a, const Eigen::VectorXd& lam) {
  check_space(a.space(), s.space, "large gauge");
  return background_shift(a, gauge_coords(s, lam));
}

}  // namespace lens
