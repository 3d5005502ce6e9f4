#include "tropcyl/tropical.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "tropcyl/error.hpp"

namespace tropcyl {

const char* to_string(MarkKind k) {
  switch (k) {
    case MarkKind::Interior: return "interior";
    case MarkKind::Boundary: return "boundary";
    case MarkKind::Finite: return "finite";
  }
  return "?";
}

const char* to_string(Clause c) {
  switch (c) {
    case Clause::NotATree: return "not_a_tree";
    case Clause::AffineInconsistent: return "affine_inconsistent";
    case Clause::NonPositiveLength: return "non_positive_length";
    case Clause::InfiniteEdgeShape: return "infinite_edge_shape";
    case Clause::MarkNotOnLeaf: return "mark_not_on_leaf";
    case Clause::InteriorLegNotConstant: return "interior_leg_not_constant";
    case Clause::BoundaryLegConstant: return "boundary_leg_constant";
    case Clause::FiniteLegNotFinite: return "finite_leg_not_finite";
    case Clause::UnmarkedFiniteLeaf: return "unmarked_finite_leaf";
    case Clause::LeafNotExceptional: return "leaf_not_exceptional";
    case Clause::Unbalanced: return "unbalanced";
    case Clause::TwigNotInWalls: return "twig_not_in_walls";
  }
  return "?";
}

const char* to_string(CurveKind k) {
  switch (k) {
    case CurveKind::Invalid: return "invalid";
    case CurveKind::Twig: return "twig";
    case CurveKind::Spine: return "spine";
    case CurveKind::TropicalCurve: return "tropical_curve";
    case CurveKind::Cylinder: return "cylinder";
  }
  return "?";
}

std::size_t MappedTree::add_vertex(const Point2& p) {
  positions.emplace_back(p);
  return positions.size() - 1;
}

std::size_t MappedTree::add_vertex_at_infinity() {
  positions.emplace_back(std::nullopt);
  return positions.size() - 1;
}

std::size_t MappedTree::add_edge(std::size_t tail, std::size_t head, const Vec2& weight,
                                 std::optional<Rational> length) {
  edges.push_back({tail, head, length, weight});
  return edges.size() - 1;
}

std::size_t MappedTree::add_segment(std::size_t from, const Vec2& weight, const Rational& length) {
  if (!positions.at(from)) throw Error(ErrorCode::AffineInconsistent, "segment from a vertex at infinity");
  const std::size_t v = add_vertex(*positions[from] + length * weight);
  add_edge(from, v, weight, length);
  return v;
}

std::size_t MappedTree::add_leg(std::size_t from, const Vec2& weight) {
  const std::size_t v = add_vertex_at_infinity();
  add_edge(from, v, weight, std::nullopt);
  return v;
}

void MappedTree::add_mark(const std::string& label, MarkKind kind, std::size_t vertex) {
  marks.push_back({label, kind, vertex});
}

std::vector<std::size_t> MappedTree::incident(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (edges[e].tail == v || edges[e].head == v) out.push_back(e);
  return out;
}

Vec2 MappedTree::outgoing(std::size_t e, std::size_t v) const {
  return edges[e].tail == v ? edges[e].weight : -edges[e].weight;
}

std::size_t MappedTree::other_end(std::size_t e, std::size_t v) const {
  return edges[e].tail == v ? edges[e].head : edges[e].tail;
}

std::optional<std::size_t> MappedTree::mark_at(std::size_t v) const {
  for (std::size_t k = 0; k < marks.size(); ++k)
    if (marks[k].vertex == v) return k;
  return std::nullopt;
}

bool MappedTree::has_unmarked_infinite_legs() const {
  for (std::size_t v = 0; v < positions.size(); ++v)
    if (!positions[v] && !mark_at(v)) return true;
  return false;
}

namespace {

Reason reason(Clause c, std::optional<std::size_t> vertex, std::optional<std::size_t> edge, std::string detail) {
  return {c, vertex, edge, std::move(detail)};
}

std::vector<Vec2> exceptional_rays(const ToricModel& model) {
  std::vector<Vec2> out;
  for (const auto& e : exceptional_directions(model)) out.push_back(e.direction);
  return out;
}

// The leg edge at a 1-valent vertex and the vertex it hangs from.
std::pair<std::size_t, std::size_t> leg_of(const MappedTree& t, std::size_t leaf) {
  const std::size_t e = t.incident(leaf).at(0);
  return {e, t.other_end(e, leaf)};
}

Vec2 vertex_sum(const MappedTree& t, std::size_t v, const std::vector<bool>* keep_edge = nullptr) {
  Vec2 s{0, 0};
  for (std::size_t e : t.incident(v))
    if (!keep_edge || (*keep_edge)[e]) s += t.outgoing(e, v);
  return s;
}

bool leaf_toward_exceptional(const ToricModel& model, const MappedTree& t, std::size_t leaf) {
  const auto [e, v] = leg_of(t, leaf);
  const Vec2 w = t.outgoing(e, v);
  const Point2& base = *t.positions[v];
  for (std::size_t i = 0; i < model.num_rays(); ++i) {
    const Vec2& u = model.fan().rays()[i];
    if (model.blowups()[i] > 0 && same_ray(w, u) && is_zero(det(u, base))) return true;
  }
  return false;
}

bool edge_in_walls(const std::vector<Vec2>& support, const MappedTree& t, std::size_t e) {
  const Edge& ed = t.edges[e];
  if (ed.weight.is_zero()) return true;
  const std::size_t finite_end = t.positions[ed.tail] ? ed.tail : ed.head;
  return is_zero(det(ed.weight, *t.positions[finite_end])) && is_wall_direction(support, ed.weight);
}

// Edges kept after repeatedly deleting unmarked leaves: the hull of the marks.
std::vector<bool> hull_edges(const MappedTree& t) {
  std::vector<bool> keep(t.edges.size(), true);
  std::vector<std::size_t> deg(t.num_vertices(), 0);
  for (const Edge& e : t.edges) {
    ++deg[e.tail];
    ++deg[e.head];
  }
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < t.num_vertices(); ++v)
    if (deg[v] == 1 && !t.mark_at(v)) queue.push_back(v);
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    if (deg[v] != 1) continue;
    for (std::size_t e : t.incident(v)) {
      if (!keep[e]) continue;
      keep[e] = false;
      --deg[v];
      const std::size_t w = t.other_end(e, v);
      if (--deg[w] == 1 && !t.mark_at(w)) queue.push_back(w);
    }
  }
  return keep;
}

std::vector<TwigPiece> twig_pieces(const MappedTree& t, const std::vector<bool>& keep) {
  std::vector<bool> on_spine(t.num_vertices(), false);
  for (std::size_t e = 0; e < t.edges.size(); ++e)
    if (keep[e]) on_spine[t.edges[e].tail] = on_spine[t.edges[e].head] = true;
  std::vector<TwigPiece> out;
  std::vector<bool> used(t.edges.size(), false);
  for (std::size_t v = 0; v < t.num_vertices(); ++v) {
    if (!on_spine[v]) continue;
    for (std::size_t start : t.incident(v)) {
      if (keep[start] || used[start]) continue;
      TwigPiece piece;
      piece.attach = v;
      std::vector<std::optional<std::size_t>> local(t.num_vertices());
      auto local_vertex = [&](std::size_t orig) {
        if (!local[orig]) {
          piece.tree.positions.push_back(t.positions[orig]);
          piece.original_vertex.push_back(orig);
          local[orig] = piece.tree.positions.size() - 1;
        }
        return *local[orig];
      };
      piece.root = local_vertex(v);
      std::deque<std::size_t> queue{start};
      used[start] = true;
      std::vector<std::size_t> edges;
      while (!queue.empty()) {
        const std::size_t e = queue.front();
        queue.pop_front();
        edges.push_back(e);
        for (std::size_t end : {t.edges[e].tail, t.edges[e].head}) {
          if (end == v) continue;
          for (std::size_t f : t.incident(end))
            if (!used[f] && !keep[f]) {
              used[f] = true;
              queue.push_back(f);
            }
        }
      }
      std::sort(edges.begin(), edges.end());
      for (std::size_t e : edges) {
        const Edge& ed = t.edges[e];
        const std::size_t a = local_vertex(ed.tail);
        const std::size_t b = local_vertex(ed.head);
        piece.tree.add_edge(a, b, ed.weight, ed.length);
        piece.original_edge.push_back(e);
      }
      out.push_back(std::move(piece));
    }
  }
  return out;
}

}  // namespace

std::vector<Vec2> TwigPiece::leaves() const {
  std::vector<Vec2> out;
  for (std::size_t v = 0; v < tree.num_vertices(); ++v) {
    if (tree.positions[v]) continue;
    const auto [e, inner] = leg_of(tree, v);
    out.push_back(tree.outgoing(e, inner));
  }
  return out;
}

Vec2 TwigPiece::direction() const {
  const auto inc = tree.incident(root);
  return inc.empty() ? Vec2{0, 0} : tree.outgoing(inc[0], root);
}

std::vector<Reason> structural_problems(const MappedTree& t) {
  std::vector<Reason> out;
  const std::size_t n = t.num_vertices();
  for (std::size_t e = 0; e < t.edges.size(); ++e)
    if (t.edges[e].tail >= n || t.edges[e].head >= n || t.edges[e].tail == t.edges[e].head)
      out.push_back(reason(Clause::NotATree, std::nullopt, e, "bad endpoints"));
  if (!out.empty()) return out;
  if (n == 0 || t.edges.size() + 1 != n) {
    out.push_back(reason(Clause::NotATree, std::nullopt, std::nullopt, "edge count is not vertex count - 1"));
    return out;
  }
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t e : t.incident(v)) {
      const std::size_t w = t.other_end(e, v);
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    out.push_back(reason(Clause::NotATree, std::nullopt, std::nullopt, "disconnected"));
    return out;
  }

  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    const Edge& ed = t.edges[e];
    if (ed.length) {
      if (!t.positions[ed.tail] || !t.positions[ed.head]) {
        out.push_back(reason(Clause::InfiniteEdgeShape, std::nullopt, e, "finite edge meets a vertex at infinity"));
        continue;
      }
      if (sign(*ed.length) <= 0) {
        out.push_back(reason(Clause::NonPositiveLength, std::nullopt, e, "length must be positive"));
        continue;
      }
      if (!(*t.positions[ed.head] - *t.positions[ed.tail] == *ed.length * ed.weight))
        out.push_back(reason(Clause::AffineInconsistent, std::nullopt, e, "head - tail != length * weight"));
    } else if (!t.positions[ed.tail] || t.positions[ed.head] || t.valence(ed.head) != 1) {
      out.push_back(reason(Clause::InfiniteEdgeShape, std::nullopt, e, "infinite edge needs a finite tail and a 1-valent head at infinity"));
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!t.positions[v] && t.valence(v) != 1)
      out.push_back(reason(Clause::InfiniteEdgeShape, v, std::nullopt, "vertex at infinity must be 1-valent"));

  for (std::size_t k = 0; k < t.marks.size(); ++k) {
    const Mark& m = t.marks[k];
    if (m.vertex >= n || t.valence(m.vertex) != 1) {
      out.push_back(reason(Clause::MarkNotOnLeaf, m.vertex < n ? std::optional(m.vertex) : std::nullopt, std::nullopt,
                           "mark " + m.label));
      continue;
    }
    const auto [e, inner] = leg_of(t, m.vertex);
    const bool infinite = !t.positions[m.vertex];
    switch (m.kind) {
      case MarkKind::Interior:
        if (!infinite || !t.edges[e].weight.is_zero())
          out.push_back(reason(Clause::InteriorLegNotConstant, m.vertex, e, "mark " + m.label));
        break;
      case MarkKind::Boundary:
        if (!infinite || t.edges[e].weight.is_zero())
          out.push_back(reason(Clause::BoundaryLegConstant, m.vertex, e, "mark " + m.label));
        break;
      case MarkKind::Finite:
        if (infinite || t.edges[e].weight.is_zero())
          out.push_back(reason(Clause::FiniteLegNotFinite, m.vertex, e, "mark " + m.label));
        break;
    }
  }
  return out;
}

std::vector<VertexReport> validate_balancing(const WallStructure& walls, const MappedTree& tree) {
  const auto problems = structural_problems(tree);
  if (!problems.empty()) {
    const Reason& r = problems.front();
    throw Error(ErrorCode::AffineInconsistent, std::string(to_string(r.clause)) +
                                                   (r.edge ? " at edge " + std::to_string(*r.edge) : "") + ": " + r.detail);
  }
  const bool bending_allowed = !tree.has_unmarked_infinite_legs();
  std::vector<VertexReport> out;
  for (std::size_t v = 0; v < tree.num_vertices(); ++v) {
    if (!tree.positions[v] || tree.valence(v) < 2) continue;
    const Vec2 s = vertex_sum(tree, v);
    VertexStatus st = VertexStatus::Balanced;
    if (!s.is_zero())
      st = bending_allowed && is_wall_direction(walls.support, s) ? VertexStatus::Bending : VertexStatus::Unbalanced;
    out.push_back({v, st, s});
  }
  return out;
}

Classification classify(const ToricModel& model, const WallStructure& walls, const MappedTree& t) {
  Classification c;
  c.reasons = structural_problems(t);
  if (!c.reasons.empty()) return c;

  const auto support = exceptional_rays(model);
  std::vector<std::size_t> finite_unmarked;
  bool has_leaves = false;
  for (std::size_t v = 0; v < t.num_vertices(); ++v) {
    if (t.valence(v) != 1 || t.mark_at(v)) continue;
    if (t.positions[v]) {
      finite_unmarked.push_back(v);
    } else {
      has_leaves = true;
      if (!leaf_toward_exceptional(model, t, v))
        c.reasons.push_back(reason(Clause::LeafNotExceptional, v, leg_of(t, v).first,
                                   "slope " + to_string(t.outgoing(leg_of(t, v).first, leg_of(t, v).second))));
    }
  }

  auto check_full_balance = [&] {
    for (std::size_t v = 0; v < t.num_vertices(); ++v) {
      if (!t.positions[v] || t.valence(v) < 2) continue;
      const Vec2 s = vertex_sum(t, v);
      if (!s.is_zero()) c.reasons.push_back(reason(Clause::Unbalanced, v, std::nullopt, "deficit " + to_string(s)));
    }
  };

  if (t.marks.empty()) {
    if (finite_unmarked.size() != 1) {
      c.reasons.push_back(reason(Clause::UnmarkedFiniteLeaf, finite_unmarked.empty() ? std::nullopt : std::optional(finite_unmarked[0]),
                                 std::nullopt, "no boundary contact and no unique twig root"));
      return c;
    }
    check_full_balance();
    for (std::size_t e = 0; e < t.edges.size(); ++e)
      if (!edge_in_walls(support, t, e)) c.reasons.push_back(reason(Clause::TwigNotInWalls, std::nullopt, e, ""));
    if (c.reasons.empty()) c.kind = CurveKind::Twig;
    return c;
  }

  for (std::size_t v : finite_unmarked)
    c.reasons.push_back(reason(Clause::UnmarkedFiniteLeaf, v, std::nullopt, "unmarked finite leaf"));

  if (!has_leaves) {
    for (const auto& r : validate_balancing(walls, t))
      if (r.status == VertexStatus::Unbalanced)
        c.reasons.push_back(reason(Clause::Unbalanced, r.vertex, std::nullopt, "deficit " + to_string(r.sum)));
    if (c.reasons.empty()) c.kind = CurveKind::Spine;
    return c;
  }

  check_full_balance();
  const auto keep = hull_edges(t);
  for (std::size_t e = 0; e < t.edges.size(); ++e)
    if (!keep[e] && !edge_in_walls(support, t, e)) c.reasons.push_back(reason(Clause::TwigNotInWalls, std::nullopt, e, ""));
  if (!c.reasons.empty()) return c;
  c.kind = CurveKind::TropicalCurve;

  // Cylinder clauses.
  std::vector<std::size_t> legs, interior;
  for (std::size_t k = 0; k < t.marks.size(); ++k)
    (t.marks[k].kind == MarkKind::Interior ? interior : legs).push_back(k);
  const auto twigs = twig_pieces(t, keep);
  std::vector<std::size_t> bends;
  for (std::size_t v = 0; v < t.num_vertices(); ++v) {
    if (!t.positions[v]) continue;
    bool on_spine = false;
    for (std::size_t e : t.incident(v)) on_spine = on_spine || keep[e];
    if (on_spine && t.valence(v) > 1 && !vertex_sum(t, v, &keep).is_zero()) bends.push_back(v);
  }
  if (legs.size() != 2) c.notes.push_back("spine needs exactly two boundary or finite legs");
  if (interior.size() > 1) c.notes.push_back("more than one interior leg");
  if (twigs.size() != 1) c.notes.push_back("needs exactly one twig");
  if (bends.size() != 1) c.notes.push_back("needs exactly one bending vertex");
  if (twigs.size() == 1 && bends.size() == 1 && twigs[0].attach != bends[0])
    c.notes.push_back("twig is not attached at the bending vertex");
  if (interior.size() == 1 && bends.size() == 1 && leg_of(t, t.marks[interior[0]].vertex).second == bends[0])
    c.notes.push_back("interior leg sits at the bending vertex");
  if (!c.notes.empty()) return c;

  CylinderInfo info;
  info.bend = bends[0];
  info.mark1 = legs[0];
  info.mark2 = legs[1];
  const auto [e1, v1] = leg_of(t, t.marks[legs[0]].vertex);
  const auto [e2, v2] = leg_of(t, t.marks[legs[1]].vertex);
  info.p1 = t.outgoing(e1, v1);
  info.p2 = t.outgoing(e2, v2);
  info.twig_direction = twigs[0].direction();
  info.twig_type = twigs[0].leaves();
  if (!interior.empty()) info.interior_mark = interior[0];
  std::set<Vec2> dirs;
  info.primitive = true;
  for (const Vec2& w : info.twig_type) {
    if (!is_primitive(w) || !dirs.insert(w).second) info.primitive = false;
  }
  c.cylinder = std::move(info);
  c.kind = CurveKind::Cylinder;
  return c;
}

SpineDecomposition spine_decomposition(const ToricModel& model, const WallStructure& walls, const MappedTree& curve) {
  const auto cls = classify(model, walls, curve);
  if (cls.kind == CurveKind::Invalid || cls.kind == CurveKind::Twig)
    throw Error(ErrorCode::NotATropicalCurve, std::string("curve classifies as ") + to_string(cls.kind));
  const auto keep = hull_edges(curve);
  SpineDecomposition d;
  std::vector<std::optional<std::size_t>> local(curve.num_vertices());
  for (std::size_t v = 0; v < curve.num_vertices(); ++v) {
    bool on_spine = curve.mark_at(v).has_value();
    for (std::size_t e : curve.incident(v)) on_spine = on_spine || keep[e];
    if (!on_spine) continue;
    local[v] = d.spine.positions.size();
    d.spine.positions.push_back(curve.positions[v]);
    d.original_vertex.push_back(v);
  }
  for (std::size_t e = 0; e < curve.edges.size(); ++e) {
    if (!keep[e]) continue;
    const Edge& ed = curve.edges[e];
    d.spine.add_edge(*local[ed.tail], *local[ed.head], ed.weight, ed.length);
    d.original_edge.push_back(e);
  }
  for (const Mark& m : curve.marks) d.spine.add_mark(m.label, m.kind, *local[m.vertex]);
  d.twigs = twig_pieces(curve, keep);
  return d;
}

MappedTree glue(const SpineDecomposition& d, std::size_t num_vertices) {
  MappedTree out;
  out.positions.assign(num_vertices, std::nullopt);
  std::size_t num_edges = d.original_edge.size();
  for (const auto& tw : d.twigs) num_edges += tw.original_edge.size();
  out.edges.resize(num_edges);
  for (std::size_t v = 0; v < d.spine.num_vertices(); ++v) out.positions[d.original_vertex[v]] = d.spine.positions[v];
  for (std::size_t e = 0; e < d.spine.edges.size(); ++e) {
    const Edge& ed = d.spine.edges[e];
    out.edges[d.original_edge[e]] = {d.original_vertex[ed.tail], d.original_vertex[ed.head], ed.length, ed.weight};
  }
  for (const auto& tw : d.twigs) {
    for (std::size_t v = 0; v < tw.tree.num_vertices(); ++v) out.positions[tw.original_vertex[v]] = tw.tree.positions[v];
    for (std::size_t e = 0; e < tw.tree.edges.size(); ++e) {
      const Edge& ed = tw.tree.edges[e];
      out.edges[tw.original_edge[e]] = {tw.original_vertex[ed.tail], tw.original_vertex[ed.head], ed.length, ed.weight};
    }
  }
  for (const Mark& m : d.spine.marks) out.add_mark(m.label, m.kind, d.original_vertex[m.vertex]);
  return out;
}

namespace {

CurveClass crossing_class(const ToricModel& model, const Point2& x, const Vec2& p, const std::optional<Rational>& limit) {
  if (p.is_zero()) return zero_class(model);
  const Fan& fan = model.fan();
  // Does the path reach the origin at some s > 0?
  if (!x.is_zero() && is_zero(det(p, x)) && sign(dot(p, x)) < 0) {
    const Rational s0 = -dot(p, x) / Rational(dot(p, p));
    if (!limit || !(*limit < s0)) throw Error(ErrorCode::PathThroughOrigin, "extension path meets the origin");
  }
  std::vector<Int> coeffs(fan.size(), 0);
  for (std::size_t i = 0; i < fan.size(); ++i) {
    const Vec2& u = fan.rays()[i];
    const Int d = det(u, p);
    if (d == 0) continue;
    const Rational s = -det(u, x) / Rational(d);
    if (sign(s) <= 0 || (limit && *limit < s)) continue;
    const Point2 y = x + s * p;
    if (sign(dot(u, y)) > 0) coeffs[i] += d < 0 ? -d : d;
  }
  return toric_class(model, std::move(coeffs));
}

}  // namespace

CurveClass leg_extension_class(const ToricModel& model, const Point2& x, const Vec2& p) {
  return crossing_class(model, x, p, std::nullopt);
}

CurveClass segment_extension_class(const ToricModel& model, const Point2& x, const Vec2& p, const Rational& S) {
  return crossing_class(model, x, p, S);
}

ExtendedSpine extend_spine(const ToricModel& model, const MappedTree& spine, bool auto_refine) {
  ExtendedSpine out{model, spine, {}, zero_class(model)};
  std::vector<std::size_t> finite;
  for (std::size_t k = 0; k < spine.marks.size(); ++k)
    if (spine.marks[k].kind == MarkKind::Finite) finite.push_back(k);
  for (std::size_t k : finite) {
    const auto [e, inner] = leg_of(spine, spine.marks[k].vertex);
    const Vec2 dir = primitive_part(spine.outgoing(e, inner));
    if (out.model.fan().ray_index(dir)) continue;
    if (!auto_refine) throw Error(ErrorCode::SlopeNotRayDirection, "slope " + to_string(dir) + " of leg " + spine.marks[k].label);
    out.model = refine_model(out.model, dir).model;
  }
  out.delta_hat = zero_class(out.model);
  for (std::size_t k : finite) {
    const std::size_t leaf = spine.marks[k].vertex;
    const auto [e, inner] = leg_of(spine, leaf);
    const Vec2 p = spine.outgoing(e, inner);
    LegExtension leg{k, *spine.positions[leaf], p, leg_extension_class(out.model, *spine.positions[leaf], p)};
    out.delta_hat = out.delta_hat + leg.delta;
    out.legs.push_back(std::move(leg));
    Edge& ed = out.tree.edges[e];
    ed = Edge{inner, leaf, std::nullopt, p};
    out.tree.positions[leaf] = std::nullopt;
    out.tree.marks[k].kind = MarkKind::Boundary;
  }
  return out;
}

std::vector<Int> leg_profile(const ToricModel& model, const MappedTree& tree) {
  std::vector<Int> t(model.num_rays(), 0);
  for (const Mark& m : tree.marks) {
    if (m.kind == MarkKind::Interior) continue;
    const auto [e, inner] = leg_of(tree, m.vertex);
    const Vec2 p = tree.outgoing(e, inner);
    const std::vector<Int> prof =
        m.kind == MarkKind::Boundary
            ? cone_profile(model.fan(), p)
            : linear_profile(model.fan(), germ_cone(model.fan(), *tree.positions[m.vertex], p), p);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += prof[i];
  }
  return t;
}

Vec2 unimodular_complement(const Fan& fan, const Vec2& w) {
  if (w.is_zero()) throw Error(ErrorCode::ZeroVector, "tropical line direction");
  for (Int bound = 1;; ++bound) {
    std::optional<Vec2> best;
    for (const Vec2& c : directions_up_to_norm(fan, bound)) {
      const Int d = det(w, c);
      if (d != 1 && d != -1) continue;
      if (!best || c < *best) best = c;
    }
    if (best) return *best;
  }
}

TropicalLine tropical_line(const ToricModel& model, const Vec2& w, const Point2& through, std::optional<Vec2> w_prime) {
  if (w.is_zero()) throw Error(ErrorCode::ZeroVector, "tropical line direction");
  if (through.is_zero()) throw Error(ErrorCode::ZeroVector, "tropical line through the origin");
  const Fan& fan = model.fan();
  TropicalLine line;
  line.w = primitive_part(w);
  line.through = through;
  if (w_prime) {
    const Int d = det(line.w, *w_prime);
    if (d != 1 && d != -1) throw Error(ErrorCode::NotUnimodular, "det(w, w') = " + std::to_string(d));
    line.w_prime = *w_prime;
  } else {
    line.w_prime = unimodular_complement(fan, line.w);
  }
  const auto a = cone_profile(fan, line.w_prime);
  const auto b = cone_profile(fan, -line.w_prime);
  line.profile.resize(fan.size());
  for (std::size_t i = 0; i < fan.size(); ++i) line.profile[i] = a[i] + b[i];
  line.ray = fan.ray_index(line.w);
  line.meets_ray_once = line.ray && line.profile[*line.ray] == 1;
  return line;
}

MappedTree assemble_cylinder(const CylinderShape& s) {
  if (s.twig_type.empty()) throw Error(ErrorCode::NotATropicalCurve, "empty twig type");
  Vec2 w0{0, 0};
  for (const Vec2& w : s.twig_type) w0 += w;
  if (w0.is_zero()) throw Error(ErrorCode::NotATropicalCurve, "twig leaves sum to zero");
  if (s.p1 + s.p2 != -w0)
    throw Error(ErrorCode::NotATropicalCurve, "spine legs " + to_string(s.p1) + " + " + to_string(s.p2) +
                                                  " do not balance the twig " + to_string(w0));
  // Either the twig runs from the bend to the origin and splits there, or a
  // single leaf leaves the bend directly along its own ray.
  const bool direct = s.twig_type.size() == 1 && is_zero(det(w0, s.bend)) && sign(dot(w0, s.bend)) > 0;
  if (!direct && (!is_zero(det(w0, s.bend)) || sign(dot(w0, s.bend)) >= 0))
    throw Error(ErrorCode::NotATropicalCurve, "bending point is not on the ray of direction " + to_string(-w0));
  const Rational lambda = -dot(w0, s.bend) / Rational(dot(w0, w0));
  if (s.interior_at && (sign(*s.interior_at) <= 0 || (!s.extended && !(*s.interior_at < s.leg_length))))
    throw Error(ErrorCode::AffineInconsistent, "interior leg position");

  MappedTree t;
  const std::size_t b = t.add_vertex(s.bend);
  auto leg = [&](const Vec2& p, const std::string& label, bool with_interior) {
    std::size_t from = b;
    Rational rest = s.leg_length;
    if (with_interior) {
      from = t.add_segment(b, p, *s.interior_at);
      t.add_mark("w", MarkKind::Interior, t.add_leg(from, {0, 0}));
      rest = rest - *s.interior_at;
    }
    if (s.extended) t.add_mark(label, MarkKind::Boundary, t.add_leg(from, p));
    else t.add_mark(label, MarkKind::Finite, t.add_segment(from, p, rest));
  };
  leg(s.p1, "1", s.interior_at.has_value());
  leg(s.p2, "2", false);
  if (direct) {
    t.add_leg(b, w0);
    return t;
  }
  const std::size_t o = t.add_segment(b, w0, lambda);
  for (const Vec2& w : s.twig_type) t.add_leg(o, w);
  return t;
}

}  // namespace tropcyl
