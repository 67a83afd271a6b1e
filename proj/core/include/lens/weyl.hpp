#pragma once

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lens/errors.hpp"
#include "lens/phasespace.hpp"

namespace lens {

// A finite-dimensional real vector space with an antisymmetric pairing sigma
// and a Euclidean gram used for label norms.  Spaces are compared
// structurally: same dimension and same name.
struct SymplecticSpace {
  std::string name;
  int dim = 0;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd gram;

  double pair(const Eigen::VectorXd& v, const Eigen::VectorXd& w) const;
  double norm(const Eigen::VectorXd& v) const;
};

using SpacePtr = std::shared_ptr<const SymplecticSpace>;

SpacePtr make_symplectic_space(const std::string& name, const Eigen::MatrixXd& sigma);
SpacePtr make_symplectic_space(const std::string& name, const Eigen::MatrixXd& sigma,
                               const Eigen::MatrixXd& gram);
SpacePtr direct_sum(const SpacePtr& a, const SpacePtr& b);
bool same_space(const SpacePtr& a, const SpacePtr& b);

// Finite linear combination of Weyl generators W(v).  Each term is keyed by a
// canonical label: every coordinate rounded to 12 significant digits, so
// vectors agreeing to that precision share one term.  Coefficients below
// 1e-14 are dropped.
class WeylElement {
 public:
  struct Term {
    Eigen::VectorXd v;
    std::complex<double> c;
  };

  static WeylElement zero(SpacePtr space);
  static WeylElement unit(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const std::map<std::string, Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  double two_norm() const;

  void add_term(const Eigen::VectorXd& v, std::complex<double> c);

 private:
  explicit WeylElement(SpacePtr space) : space_(std::move(space)) {}
  friend WeylElement generator(const SpacePtr&, const Eigen::VectorXd&);
  friend WeylElement generator(const SpacePtr&, const Eigen::VectorXd&, const Eigen::VectorXd&);
  friend WeylElement add(const WeylElement&, const WeylElement&);
  friend WeylElement scale(std::complex<double>, const WeylElement&);
  friend WeylElement multiply(const WeylElement&, const WeylElement&);
  friend WeylElement star(const WeylElement&);
  friend WeylElement background_shift(const WeylElement&, const Eigen::VectorXd&);
  friend WeylElement tensor(const WeylElement&, const WeylElement&);
  friend WeylElement weyl_map(const Eigen::MatrixXd&, const WeylElement&, const SpacePtr&);
  friend WeylElement weyl_from_json_text(const SpacePtr&, const std::string&);

  SpacePtr space_;
  std::map<std::string, Term> terms_;
};

// round a vector to its canonical label representative
Eigen::VectorXd canonical_vector(const Eigen::VectorXd& v);
std::string canonical_label(const Eigen::VectorXd& v);

WeylElement generator(const SpacePtr& space, const Eigen::VectorXd& v);
// generator taken relative to a background solution: picks up e^{i sigma(v, bg)}
WeylElement generator(const SpacePtr& space, const Eigen::VectorXd& v,
                      const Eigen::VectorXd& background);

WeylElement add(const WeylElement& a, const WeylElement& b);
WeylElement scale(std::complex<double> c, const WeylElement& a);
// W(v) W(w) = e^{-(i/2) sigma(v,w)} W(v+w), extended bilinearly
WeylElement multiply(const WeylElement& a, const WeylElement& b);
WeylElement star(const WeylElement& a);
// change of background: W(v) picks up e^{i sigma(v, diff)}
WeylElement background_shift(const WeylElement& a, const Eigen::VectorXd& diff);
// product element on the direct sum of the two spaces
WeylElement tensor(const WeylElement& a, const WeylElement& b);
// push forward along a linear symplectic map iota (checked, else NotSymplectic)
WeylElement weyl_map(const Eigen::MatrixXd& iota, const WeylElement& a, const SpacePtr& target);

bool approx_equal(const WeylElement& a, const WeylElement& b, double label_tol = 1e-9,
                  double coeff_tol = 1e-10);

std::string weyl_to_json(const WeylElement& a);
WeylElement weyl_from_json_text(const SpacePtr& space, const std::string& text);

// generators commuting with every W(g) for g in the given list
struct FixedPointSet {
  SpacePtr space;
  Eigen::MatrixXd basis;  // gram-orthonormal columns spanning the fixed directions
  bool contains(const Eigen::VectorXd& v, double tol = 1e-9) const;
};

FixedPointSet fixed_point_generators(const SpacePtr& space,
                                     const std::vector<Eigen::VectorXd>& group);

// Symplectic coordinates for the corner decomposition of a surface: the layout
// is (F, H, f, h) over an orthonormal tangential basis (nc columns) and an
// orthonormal mean-free boundary basis (ns columns), dim = 2 nc + 2 ns.
// The calculus object must outlive the space.
struct ChhSpace {
  const BoundaryCalculus* calc = nullptr;
  SpacePtr space;
  Eigen::MatrixXd tang;  // E x nc, orthonormal for the edge mass
  Eigen::MatrixXd lg;    // nb x ns, orthonormal for the boundary mass
  int nc = 0;
  int ns = 0;
};

ChhSpace make_chh_space(const BoundaryCalculus& c, const std::string& name = "chh");

// coordinates of a decomposition; throws SpaceMismatch if any slot fails to
// lie in its subspace within tol
Eigen::VectorXd coords_of(const ChhSpace& s, const CHHCoords& x, double tol = 1e-9);
CHHCoords coords_to_chh(const ChhSpace& s, const Eigen::VectorXd& v);

// coordinates of the gauge direction generated by a boundary function
Eigen::VectorXd gauge_coords(const ChhSpace& s, const Eigen::VectorXd& lam);

// large gauge action: W(v) picks up e^{-i <lam, h(v)>} on the boundary
WeylElement large_gauge(const ChhSpace& s, const WeylElement& a, const Eigen::VectorXd& lam);

}  // namespace lens
