#pragma once

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lens/phasespace.hpp"
#include "lens/states.hpp"
#include "lens/weyl.hpp"

namespace lens {

// Union of the two surfaces along the matched boundary, with provenance maps
// back into the sides. Matched boundary vertices collapse to the side-1
// vertex; everything else keeps its side ordering.
struct GlobalStack {
  std::unique_ptr<BoundaryCalculus> calc;  // closed union surface
  std::vector<int> side1_vertex;           // side-local vertex -> global vertex
  std::vector<int> side2_vertex;
  std::vector<int> side1_edge;             // side-local edge -> global edge
  std::vector<int> side2_edge;
  std::vector<int> side1_edge_sign;        // ascending-order flip under renumbering
  std::vector<int> side2_edge_sign;
};

// Two corner decompositions glued along their shared boundary. `match` sends
// side-1 boundary vertices to side-2 boundary vertices; it must be a
// bijection, preserve boundary masses and segment lengths to 1e-10, and carry
// segments to segments with the traversal direction prescribed by `reversed`.
// `transfer` maps side-1 surface coordinates to side-2 surface coordinates
// through the match and is orthogonal whenever the boundary component
// structures correspond. Both ChhSpace objects must outlive the setup.
struct GluingSetup {
  const ChhSpace* side1 = nullptr;
  const ChhSpace* side2 = nullptr;
  std::vector<int> match;
  bool reversed = false;
  Eigen::MatrixXd transfer;  // ns x ns

  SpacePtr loops1, loops2;  // closed-loop (F, H) sectors of the sides
  SpacePtr pair12;          // side1 + side2
  SpacePtr half12;          // side1 + loops2
  SpacePtr half21;          // loops1 + side2
  SpacePtr glued;           // loops1 + shared surface (side-1 coords) + loops2

  // labels commuting with every diagonal gauge unitary, over pair12
  FixedPointSet invariants;

  std::shared_ptr<const GlobalStack> global;
};

GluingSetup make_gluing(const ChhSpace& side1, const ChhSpace& side2,
                        const std::vector<int>& match, bool reversed);

// Derive the match by nearest-coordinate pairing of boundary vertices, along
// with the traversal flag. Throws ValidationError when some vertex has no
// partner within tol or the segment directions disagree among themselves.
std::pair<std::vector<int>, bool> match_boundaries(const BoundaryCalculus& c1,
                                                   const BoundaryCalculus& c2,
                                                   double tol = 1e-8);

// Directions of the diagonal gauge group inside pair12: the k-th entry acts
// as lambda_k on the side-1 surface slot and as transfer * lambda_k on the
// side-2 one.
std::vector<Eigen::VectorXd> diagonal_gauge_directions(const GluingSetup& g);

// W(lam on side 1) tensor W(lam through the match on side 2)
WeylElement diagonal_gauge_unitary(const GluingSetup& g, const Eigen::VectorXd& lam_coords);

const FixedPointSet& diag_invariant_labels(const GluingSetup& g);

// Mutually inverse isomorphisms moving the surface sector across the tensor
// product with a sign flip: (v1, f, h; c2) <-> (c1; c2, -Tf, -Th).
WeylElement xi_21(const GluingSetup& g, const WeylElement& a);  // half12 -> half21
WeylElement xi_12(const GluingSetup& g, const WeylElement& a);  // half21 -> half12

// Quotient normal form over the glued label space: an invariant generator
// (v1, f1, h1; v2, f2, h2) reduces along the diagonal gauge direction
// lam = T' f2 to the glued label (v1, f1 - T' f2, h1, v2). The accompanying
// phase is the Weyl phase of that reduction, computed from the pairing, never
// assumed. Throws NotInvariant when a label fails the invariance predicate.
WeylElement won_normal_form(const GluingSetup& g, const WeylElement& a);

// won after embedding with the complementary surface slot filled in so the
// label is invariant: side-2 slot (0, -h1 through the match), respectively
// side-1 slot (0, -h2 pulled back).
WeylElement psi_bullet_circle(const GluingSetup& g, const WeylElement& a);  // half12 -> glued
WeylElement psi_circle_bullet(const GluingSetup& g, const WeylElement& a);  // half21 -> glued

// Build the closed union surface and its restriction maps.
void attach_global(GluingSetup& g);

// Representative of homogeneous initial data on the union surface: coclosed
// vector potential, electric field projected onto the interior constraint
// space. The charge slot must be zero (ValidationError otherwise).
InitialData reduce_global(const GluingSetup& g, const InitialData& gdata);

// side is 1 or 2; pulls a global edge field back to the side with the
// orientation signs of the renumbering.
Eigen::VectorXd restrict_to_side(const GluingSetup& g, int side,
                                 const Eigen::VectorXd& edge_field);

// The glued-label map: restrict reduced data to both sides, take corner
// coordinates, force the flux identification, reduce. Symplectic: the glued
// pairing of two labels reproduces the global pairing of the data.
Eigen::VectorXd glued_label(const GluingSetup& g, const InitialData& reduced);

// reduce_global, then the invariant pair label, then won.
WeylElement embed_global(const GluingSetup& g, const InitialData& gdata);

enum class GlueMode { one_two, two_one, mix };

// (w1 x w2^loops) pulled through psi_bullet_circle, or the mirrored pairing,
// or their average.
struct GluedState {
  const GluingSetup* setup = nullptr;
  QuasiFreeState w1, w2;
  GlueMode mode = GlueMode::one_two;
};

GluedState glue_states(const GluingSetup& g, QuasiFreeState w1, QuasiFreeState w2,
                       GlueMode mode);

std::complex<double> evaluate(const GluedState& s, const WeylElement& a);

// Compares the two surface marginals on basis labels and seeded random ones:
// w1 at (0, f, h) against w2 at (0, -Tf, -Th).
struct CompatibilityReport {
  bool compatible = false;
  double max_defect = 0.0;
};

CompatibilityReport compatibility_check(const GluingSetup& g, const QuasiFreeState& w1,
                                        const QuasiFreeState& w2, int n_random = 12,
                                        uint64_t seed = 7);

}  // namespace lens
