#pragma once

// Counting engine for primitive tropical cylinders.
//
// The count of the extended cylinder V^ at its contributing class
// beta^(j) = pi^*T_V - sum_s E_{i(s) j_s} is the product of elementary counts;
// the infinitesimal cylinder V is counted at beta^ - delta^_V.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "tropcyl/classes.hpp"
#include "tropcyl/lattice.hpp"
#include "tropcyl/model.hpp"
#include "tropcyl/tropical.hpp"
#include "tropcyl/walls.hpp"

namespace tropcyl {

// Elementary count N(V_i, beta) for each exceptional component; components
// without an entry count 1.
class ElementaryCountTable {
 public:
  ElementaryCountTable() = default;

  void set(const ExcIndex& e, Int count);
  Int weight(const ExcIndex& e) const;
  bool is_default() const { return entries_.empty(); }
  const std::map<ExcIndex, Int>& entries() const { return entries_; }

 private:
  std::map<ExcIndex, Int> entries_;
};

struct CylinderSpine {
  Vec2 p1;
  Vec2 p2;
  Point2 bend;
};

struct PrimitiveCylinder {
  CylinderSpine spine;
  std::vector<Vec2> twig_type;
  std::vector<std::size_t> leaf_ray;  // i(s)
  bool extended = false;
};

// Throws NotPrimitive unless the tree classifies as a primitive cylinder.
PrimitiveCylinder cylinder_from_tree(const ToricModel& model, const WallStructure& walls, const MappedTree& tree);
// Bend at -2 w0, legs along the rays of the cone containing -w0.
PrimitiveCylinder canonical_cylinder(const ToricModel& model, const std::vector<Vec2>& twig_type, bool extended = false);
// Single leaf u_i; bend at u_i / 2, legs u_{i+1} and -u_i - u_{i+1}.
PrimitiveCylinder elementary_cylinder(const ToricModel& model, std::size_t ray, bool extended = false);
MappedTree cylinder_tree(const PrimitiveCylinder& v);

// Component choice j_s (0-based) for every leaf.
using Choice = std::vector<std::size_t>;

std::vector<Choice> all_choices(const ToricModel& model, const PrimitiveCylinder& v);

CurveClass extension_class(const ToricModel& model, const PrimitiveCylinder& v);
CurveClass extended_class(const ToricModel& model, const PrimitiveCylinder& v, const Choice& j);
CurveClass infinitesimal_class(const ToricModel& model, const PrimitiveCylinder& v, const Choice& j);
// Infinitesimal class of the elementary cylinder through E_ij.
CurveClass elementary_class(const ToricModel& model, const ExcIndex& e);
// beta(j) - sum_s elementary_class(i(s), j_s); independent of j.
CurveClass frame_discrepancy(const ToricModel& model, const PrimitiveCylinder& v);

Int elementary_count(const ElementaryCountTable& table, const ToricModel& model, const ExcIndex& e,
                     const CurveClass& beta);

struct Contribution {
  Choice choice;
  CurveClass beta;      // in the frame of v: infinitesimal or extended
  CurveClass beta_hat;  // extended class
  std::vector<Int> factors;
  Int count = 0;
};

std::vector<Contribution> contributing_classes(const ToricModel& model, const ElementaryCountTable& table,
                                               const PrimitiveCylinder& v);

struct CountResult {
  Int value = 0;
  std::vector<Contribution> splittings;
};

CountResult count_primitive_cylinder(const ToricModel& model, const ElementaryCountTable& table,
                                     const PrimitiveCylinder& v, const CurveClass& beta);

// Independent evaluation of the product formula by enumerating every way of
// writing beta (corrected by the frame discrepancy) as a sum of elementary classes.
Int splitting_sum(const ToricModel& model, const ElementaryCountTable& table, const PrimitiveCylinder& v,
                  const CurveClass& beta);

// Sum over the twig types compatible with beta; throws OutOfPrimitiveScope
// when a leaf of degree > 1 or a repeated direction would be required.
Int count_spine(const ToricModel& model, const ElementaryCountTable& table, const CylinderSpine& spine,
                const CurveClass& beta, bool extended = false);

}  // namespace tropcyl
