// Faces, the cubical boundary operator, and the geometric side conditions:
// admissibility (proper intersection with all cube faces), negligibility
// (cycles that vanish in the reduced complex), and degeneracy (parametrization
// of non-generic rank).
#pragma once

#include "chow/cycles.hpp"

namespace chow {

// epsilon: 0 for the t_i = 0 face, 1 for the t_i = infinity face.
struct Face {
  int index;  // 0-based coordinate index
  int eps;    // 0 or 1
};

// One component of a face locus: the parameters solved so far and the
// remaining free ones.
struct LocusLeaf {
  Subst chain;
  std::vector<int> free_params;
  int mult = 1;
};

// Decompose the common zero locus of `constraints` inside the parameter space.
// Constraints that vanish identically are dropped; nonzero constraints free of
// the cycle parameters cut out the empty set (field parameters are generic).
std::vector<LocusLeaf> decompose_locus(std::vector<MPoly> constraints, std::vector<int> params);

// Restriction of a term to one face: solve the face equation on the
// parameter space, substitute each branch, delete the face coordinate.
CycleSum face_restrict(const CycleTerm& t, const Face& f);

// boundary = sum_i (-1)^(i-1) (face(i,0) - face(i,inf))
CycleSum boundary(const CycleTerm& t);
CycleSum boundary(const CycleSum& s);

struct ComponentCheck {
  int dim;
  int bound;
  bool excluded;            // lies in some {t_j = 1}, outside the cube
  std::vector<int> ones;    // coordinates identically 1 on the component
  bool ok;
};
struct FaceCheck {
  std::vector<Face> faces;
  std::vector<ComponentCheck> comps;
  bool ok = true;
};
struct AdmissibilityReport {
  bool admissible = true;
  std::vector<FaceCheck> codim1;      // full detail for single faces
  std::vector<FaceCheck> violations;  // any codimension
  std::string summary() const;
};
AdmissibilityReport is_admissible(const CycleTerm& t);
AdmissibilityReport is_admissible_sum(const CycleSum& s);  // every term

// For a codimension-1 face: if every component of the face locus lies in some
// hyperplane {t_j = 1}, returns the sorted union of those j (0-based); the
// face restriction then vanishes.  Returns nullopt when some component meets
// the open cube.
std::optional<std::vector<int>> face_containment(const CycleTerm& t, const Face& f);

struct NegligibilityReport {
  bool negligible = false;
  std::string pattern;  // "constant_coordinate" or "disjoint_product"
  int coordinate = -1;  // constant coordinate index when applicable
};
NegligibilityReport is_negligible(const CycleTerm& t);

struct DegeneracyReport {
  bool degenerate = false;
  int rank = 0;
};
DegeneracyReport is_degenerate(const CycleTerm& t);

}  // namespace chow
