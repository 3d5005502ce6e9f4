#pragma once

// The families L_k, M_k, N_k deforming a primitive cylinder into elementary
// pieces, their extension classes, and the inductive splitting identities
// replayed numerically with the counting engine.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tropcyl/classes.hpp"
#include "tropcyl/counting.hpp"
#include "tropcyl/lattice.hpp"
#include "tropcyl/model.hpp"
#include "tropcyl/tropical.hpp"
#include "tropcyl/walls.hpp"

namespace tropcyl {

// Anchors are given as parameters along the twig rays R_{>=0} w_k.
// Missing entries use g = 1, t = 2; missing generic points are searched on
// the first spine leg.
struct Anchors {
  std::vector<Rational> g;
  std::vector<Rational> t;
  std::optional<Point2> x_w;
  std::vector<Point2> x_w_prime;  // one per k
};

enum class Family { L, M, N };

const char* to_string(Family f);

struct FamilyCurve {
  Family family = Family::L;
  std::size_t k = 1;  // 1-based as in L_1 .. L_{t+1}
  MappedTree tree;
  Classification classification;
  std::string tag() const;
};

using IndexSet = std::set<std::string>;

struct DeformationData {
  PrimitiveCylinder base;  // extended
  std::vector<Rational> g, t;
  Point2 x_w;
  std::vector<Point2> x_w_prime;
  std::vector<TropicalLine> h_g, h_t;
  std::vector<PrimitiveCylinder> elementary;  // V^_k, bend before x_{g^k}
  std::vector<FamilyCurve> L, M, N;           // L has t+1 entries

  IndexSet J_L, J_M, J_N, I_M, B_M, I_N, B_N, J_g;
  std::vector<IndexSet> B_L, I_L, B_g, I_g;  // indexed by k, entry 0 unused for B_g/I_g

  std::size_t size() const { return base.twig_type.size(); }
};

DeformationData build_deformation(const ToricModel& model, const WallStructure& walls, const PrimitiveCylinder& v,
                                  const Anchors& anchors = {});

// Extension class of a tree whose boundary legs are truncated: each leg is
// extended from the start of its straight run, walking back through
// vertices that only carry a constant leg.
CurveClass truncation_class(const ToricModel& model, const MappedTree& tree, const std::set<std::string>& legs = {});

struct ExtensionLedger {
  CurveClass delta_V;
  std::vector<CurveClass> delta_hat;     // delta^_k of the elementary pieces
  std::vector<CurveClass> delta;         // delta_s of the t^s legs
  std::vector<CurveClass> m_truncation;  // 1', 2' legs of M_k
  CurveClass l_truncation;               // all boundary legs of L_{t+1}
  bool consistent = false;
};

ExtensionLedger extension_ledger(const ToricModel& model, const DeformationData& data);

// Finite support of a family count: class -> value.
using Support = std::map<CurveClass, Int>;

Support support_L(const ToricModel& model, const ElementaryCountTable& table, const DeformationData& data,
                  std::size_t k);
Support support_M(const ToricModel& model, const DeformationData& data, std::size_t k);
Support support_N(const ToricModel& model, const ElementaryCountTable& table, const DeformationData& data,
                  std::size_t k);
Int value(const Support& s, const CurveClass& c);
// sum over c1 + c2 = target of a(c1) b(c2), by enumeration of both supports
Int convolve(const Support& a, const Support& b, const CurveClass& target);

struct ReplayStep {
  std::size_t k = 0;
  std::size_t classes = 0;  // arguments checked at this step
  Int splitting_lhs = 0;    // sum of N(L_k, a) over the arguments
  Int splitting_rhs = 0;    // sum of the L_{k+1} * N_k convolutions
  Int glued_rhs = 0;        // sum of the L_k * M_k convolutions
};

struct ReplayReport {
  std::vector<ReplayStep> steps;
  Int count = 0;          // N(V, beta)
  Int initial = 0;        // N(L_1, beta + delta^_V)
  Int extended = 0;       // N(V^, beta + delta^_V)
  Int telescoped = 0;     // iterated splitting down to L_{t+1}
  bool endpoint = false;  // N(L_{t+1}, .) is the indicator of the ledger class
};

// Throws IdentityViolation naming the step and both sides on failure.
ReplayReport replay_induction(const ToricModel& model, const WallStructure& walls, const ElementaryCountTable& table,
                              const PrimitiveCylinder& v, const CurveClass& beta, const Anchors& anchors = {});
ReplayReport replay_induction(const ToricModel& model, const ElementaryCountTable& table, const DeformationData& data,
                              const CurveClass& beta);

// Abstract tree with labelled legs; edges of infinite length are nullopt.
struct AbstractTree {
  struct Link {
    std::size_t a = 0, b = 0;
    std::optional<Rational> length;
  };
  std::size_t vertices = 0;
  std::vector<Link> links;
  std::map<std::string, std::size_t> legs;

  std::size_t add_vertex() { return vertices++; }
  void link(std::size_t a, std::size_t b, std::optional<Rational> length) { links.push_back({a, b, length}); }

  // Stable form: nontrivial leg splits with summed lengths, zero lengths dropped.
  std::map<IndexSet, std::optional<Rational>> splits() const;
  bool same_as(const AbstractTree& o) const { return legs.size() == o.legs.size() && splits() == o.splits(); }
};

// Stabilised domains of L_k and M_k (branch 0), or L_{k+1} and N_k
// (branch 1), glued at v_{g^k} by an edge of length r (nullopt = infinity).
AbstractTree degeneration_path(const DeformationData& data, std::size_t k, int branch, std::optional<Rational> r);

}  // namespace tropcyl
