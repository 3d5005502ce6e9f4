#pragma once

// Tropical curves as mapped metric trees in M_R = R^2, their validation and
// decomposition into spine and twigs, and spine extension classes.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tropcyl/classes.hpp"
#include "tropcyl/lattice.hpp"
#include "tropcyl/model.hpp"
#include "tropcyl/walls.hpp"

namespace tropcyl {

enum class MarkKind { Interior, Boundary, Finite };

const char* to_string(MarkKind k);

struct Mark {
  std::string label;
  MarkKind kind = MarkKind::Interior;
  std::size_t vertex = 0;
  bool operator==(const Mark&) const = default;
};

// weight is the slope along tail -> head; length nullopt means infinite, in
// which case head is the 1-valent vertex at infinity.
struct Edge {
  std::size_t tail = 0;
  std::size_t head = 0;
  std::optional<Rational> length;
  Vec2 weight;
  bool operator==(const Edge&) const = default;
};

struct MappedTree {
  std::vector<std::optional<Point2>> positions;  // nullopt: vertex at infinity
  std::vector<Edge> edges;
  std::vector<Mark> marks;

  std::size_t add_vertex(const Point2& p);
  std::size_t add_vertex_at_infinity();
  std::size_t add_edge(std::size_t tail, std::size_t head, const Vec2& weight, std::optional<Rational> length);
  // New finite vertex at position(from) + length * weight, joined to `from`.
  std::size_t add_segment(std::size_t from, const Vec2& weight, const Rational& length);
  // New vertex at infinity joined to `from`.
  std::size_t add_leg(std::size_t from, const Vec2& weight);
  void add_mark(const std::string& label, MarkKind kind, std::size_t vertex);

  std::size_t num_vertices() const { return positions.size(); }
  std::vector<std::size_t> incident(std::size_t v) const;
  std::size_t valence(std::size_t v) const { return incident(v).size(); }
  // Weight of edge e read outward from its endpoint v.
  Vec2 outgoing(std::size_t e, std::size_t v) const;
  std::size_t other_end(std::size_t e, std::size_t v) const;
  std::optional<std::size_t> mark_at(std::size_t v) const;
  bool has_unmarked_infinite_legs() const;

  bool operator==(const MappedTree&) const = default;
};

enum class Clause {
  NotATree,
  AffineInconsistent,
  NonPositiveLength,
  InfiniteEdgeShape,
  MarkNotOnLeaf,
  InteriorLegNotConstant,
  BoundaryLegConstant,
  FiniteLegNotFinite,
  UnmarkedFiniteLeaf,
  LeafNotExceptional,
  Unbalanced,
  TwigNotInWalls,
};

const char* to_string(Clause c);

struct Reason {
  Clause clause;
  std::optional<std::size_t> vertex;
  std::optional<std::size_t> edge;
  std::string detail;
};

enum class VertexStatus { Balanced, Bending, Unbalanced };

struct VertexReport {
  std::size_t vertex = 0;
  VertexStatus status = VertexStatus::Balanced;
  Vec2 sum;  // zero, the bending direction, or the deficit
};

// Tree shape and affine consistency only.
std::vector<Reason> structural_problems(const MappedTree& tree);

// Reports every vertex of valence > 1. Bending is admitted only for trees
// without unmarked infinite legs (spines); curves with twigs must balance.
// Throws AffineInconsistent when the tree is not a consistent mapped tree.
std::vector<VertexReport> validate_balancing(const WallStructure& walls, const MappedTree& tree);

enum class CurveKind { Invalid, Twig, Spine, TropicalCurve, Cylinder };

const char* to_string(CurveKind k);

struct CylinderInfo {
  std::size_t bend = 0;
  std::size_t mark1 = 0;  // indices into tree.marks of the two legs
  std::size_t mark2 = 0;
  Vec2 p1;
  Vec2 p2;
  Vec2 twig_direction;  // weight at the root, pointing into the twig
  std::vector<Vec2> twig_type;
  std::optional<std::size_t> interior_mark;
  bool primitive = false;
};

struct Classification {
  CurveKind kind = CurveKind::Invalid;
  std::vector<Reason> reasons;
  std::vector<std::string> notes;  // why a valid curve is not a cylinder
  std::optional<CylinderInfo> cylinder;
  bool primitive() const { return cylinder && cylinder->primitive; }
};

Classification classify(const ToricModel& model, const WallStructure& walls, const MappedTree& tree);

struct TwigPiece {
  MappedTree tree;
  std::size_t root = 0;                     // vertex of `tree`
  std::size_t attach = 0;                   // vertex of the original tree
  std::vector<std::size_t> original_vertex;  // tree vertex -> original vertex
  std::vector<std::size_t> original_edge;
  std::vector<Vec2> leaves() const;         // leaf weights in edge order
  Vec2 direction() const;                   // weight at the root
};

struct SpineDecomposition {
  MappedTree spine;
  std::vector<std::size_t> original_vertex;
  std::vector<std::size_t> original_edge;
  std::vector<TwigPiece> twigs;
};

SpineDecomposition spine_decomposition(const ToricModel& model, const WallStructure& walls, const MappedTree& curve);
// Reassembles the pieces on the original vertex numbering.
MappedTree glue(const SpineDecomposition& d, std::size_t num_vertices);

// Class of extending a leg from x with slope p to infinity over the given
// fan: |det(u_i, p)| [D_{t,i}] for every crossing of a ray rho_i at s > 0.
CurveClass leg_extension_class(const ToricModel& model, const Point2& x, const Vec2& p);
// Same over the segment x + s p, 0 < s <= S.
CurveClass segment_extension_class(const ToricModel& model, const Point2& x, const Vec2& p, const Rational& S);

struct LegExtension {
  std::size_t mark = 0;
  Point2 start;
  Vec2 slope;
  CurveClass delta;
};

struct ExtendedSpine {
  ToricModel model;  // refined when some slope was not a ray
  MappedTree tree;
  std::vector<LegExtension> legs;
  CurveClass delta_hat;
};

ExtendedSpine extend_spine(const ToricModel& model, const MappedTree& spine, bool auto_refine = true);

// Contact profile of the leg classes of a tree: boundary legs contribute the
// cone profile of their slope, finite legs the linear profile of the cone
// they leave from.
std::vector<Int> leg_profile(const ToricModel& model, const MappedTree& tree);

struct TropicalLine {
  Vec2 w;
  Vec2 w_prime;
  Point2 through;
  std::vector<Int> profile;
  std::optional<std::size_t> ray;  // ray containing w, if any
  bool meets_ray_once = false;
};

Vec2 unimodular_complement(const Fan& fan, const Vec2& w);
TropicalLine tropical_line(const ToricModel& model, const Vec2& w, const Point2& through,
                           std::optional<Vec2> w_prime = std::nullopt);

// Infinitesimal (finite legs) or extended (boundary legs) cylinder with its
// twig rooted at `bend`; the twig runs from the bend to the origin and splits
// into the leaves there, or, for a single leaf with the bend on its own ray,
// leaves the bend directly. `interior_at` places the constant leg on the first
// leg at bend + interior_at * p1 when set.
struct CylinderShape {
  Vec2 p1;
  Vec2 p2;
  Point2 bend;
  std::vector<Vec2> twig_type;
  bool extended = false;
  std::optional<Rational> interior_at = Rational(1, 2);
  Rational leg_length{1};
};

MappedTree assemble_cylinder(const CylinderShape& shape);

}  // namespace tropcyl
