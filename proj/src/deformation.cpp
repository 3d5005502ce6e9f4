#include "tropcyl/deformation.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "tropcyl/error.hpp"

namespace tropcyl {

namespace {

std::string label(char kind, std::size_t s) { return std::string(1, kind) + std::to_string(s); }

std::pair<std::size_t, std::size_t> leg_edge(const MappedTree& t, std::size_t leaf) {
  const std::size_t e = t.incident(leaf).front();
  return {e, t.other_end(e, leaf)};
}

bool has_constant_leg(const MappedTree& t, std::size_t v) {
  for (std::size_t e : t.incident(v)) {
    const std::size_t o = t.other_end(e, v);
    if (t.edges[e].weight.is_zero() && !t.positions[o]) return true;
  }
  return false;
}

void constant_leg(MappedTree& t, std::size_t v, const std::string& name) {
  t.add_mark(name, MarkKind::Interior, t.add_leg(v, {0, 0}));
}

bool off_walls(const ToricModel& model, const WallStructure& walls, const Point2& x) {
  const auto d = integral_direction(x);
  if (!d) return false;
  const Vec2 p = primitive_part(*d);
  return !walls.contains_line(p) && !model.fan().ray_index(p) && !model.fan().ray_index(-p);
}

// Parameter along the segment bend + s p, 0 < s, at which a generic marked
// point sits: the segment up to it crosses no ray and it avoids every wall.
Rational generic_parameter(const ToricModel& model, const WallStructure& walls, const Point2& bend, const Vec2& p) {
  for (Int n = 2;; ++n) {
    const Rational s(1, n);
    if (!segment_extension_class(model, bend, p, s).is_zero()) continue;
    if (off_walls(model, walls, bend + s * p)) return s;
  }
}

// Leg (1 or 2) and parameter carrying a prescribed point, or throw.
std::pair<int, Rational> locate_on_legs(const ToricModel& model, const WallStructure& walls, const Point2& bend,
                                        const Vec2& p1, const Vec2& p2, const Point2& x, const char* name) {
  if (!off_walls(model, walls, x)) throw Error(ErrorCode::AnchorOnWall, std::string(name) + " lies on a wall");
  const Point2 d = x - bend;
  int leg = 1;
  for (const Vec2& p : {p1, p2}) {
    if (is_zero(det(p, d)) && sign(dot(p, d)) > 0) {
      const Rational s = p.x != 0 ? d.x / Rational(p.x) : d.y / Rational(p.y);
      return {leg, s};
    }
    ++leg;
  }
  throw Error(ErrorCode::AffineInconsistent, std::string(name) + " is not on a spine leg");
}

// Bend with its two legs; the interior point sits on `w_leg` at parameter w_at.
std::size_t add_spine(MappedTree& t, const Point2& bend, const Vec2& p1, const Vec2& p2, int w_leg,
                      const Rational& w_at, const std::string& suffix) {
  const std::size_t b = t.add_vertex(bend);
  const Vec2 p[2] = {p1, p2};
  for (int leg = 1; leg <= 2; ++leg) {
    const Vec2& q = p[leg - 1];
    std::size_t from = b;
    if (leg == w_leg) {
      from = t.add_segment(b, q, w_at);
      constant_leg(t, from, "w" + suffix);
    }
    t.add_mark(std::to_string(leg) + suffix, MarkKind::Boundary, t.add_leg(from, q));
  }
  return b;
}

Rational param_on(const Vec2& w, const Point2& x) {
  return w.x != 0 ? x.x / Rational(w.x) : x.y / Rational(w.y);
}

Classification checked(const ToricModel& model, const WallStructure& walls, const FamilyCurve& f) {
  Classification c = classify(model, walls, f.tree);
  if (c.kind == CurveKind::Invalid) {
    std::string why = f.tag();
    if (!c.reasons.empty()) why += ": " + std::string(to_string(c.reasons[0].clause)) + " " + c.reasons[0].detail;
    throw Error(ErrorCode::NotATropicalCurve, why);
  }
  return c;
}

std::string show(const Int v) { return std::to_string(v); }

[[noreturn]] void violation(std::size_t k, const std::string& what, Int lhs, Int rhs) {
  throw Error(ErrorCode::IdentityViolation,
              "k=" + std::to_string(k) + " " + what + " lhs=" + show(lhs) + " rhs=" + show(rhs));
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::L: return "L";
    case Family::M: return "M";
    case Family::N: return "N";
  }
  return "?";
}

std::string FamilyCurve::tag() const { return std::string(to_string(family)) + "_" + std::to_string(k); }

DeformationData build_deformation(const ToricModel& model, const WallStructure& walls, const PrimitiveCylinder& v,
                                  const Anchors& anchors) {
  DeformationData d;
  d.base = cylinder_from_tree(model, walls, cylinder_tree(v));
  d.base.spine = v.spine;
  d.base.extended = true;
  const std::size_t t = d.size();
  const auto& w = d.base.twig_type;
  const CylinderSpine& sp = d.base.spine;

  for (const auto* a : {&anchors.g, &anchors.t})
    if (!a->empty() && a->size() != t) throw Error(ErrorCode::LengthMismatch, "one anchor per twig leaf");
  if (!anchors.x_w_prime.empty() && anchors.x_w_prime.size() != t)
    throw Error(ErrorCode::LengthMismatch, "one x_w' per twig leaf");
  d.g = anchors.g.empty() ? std::vector<Rational>(t, Rational(1)) : anchors.g;
  d.t = anchors.t.empty() ? std::vector<Rational>(t, Rational(2)) : anchors.t;

  // The twig either passes through the origin or, for one leaf, leaves the bend along +w.
  const bool direct = t == 1 && same_ray(w[0], *integral_direction(sp.bend));
  const Rational start = direct ? param_on(w[0], sp.bend) : Rational(0);
  for (std::size_t s = 0; s < t; ++s) {
    if (sign(d.t[s]) <= 0) throw Error(ErrorCode::AnchorOrderViolation, "x_t" + std::to_string(s + 1) + " must not be O");
    if (!(start < d.g[s] && d.g[s] < d.t[s]))
      throw Error(ErrorCode::AnchorOrderViolation, "x_g" + std::to_string(s + 1) + " must lie strictly between the twig root and x_t");
  }

  int w_leg = 1;
  Rational w_at;
  if (anchors.x_w) {
    std::tie(w_leg, w_at) = locate_on_legs(model, walls, sp.bend, sp.p1, sp.p2, *anchors.x_w, "x_w");
  } else {
    w_at = generic_parameter(model, walls, sp.bend, sp.p1);
  }
  d.x_w = sp.bend + w_at * (w_leg == 1 ? sp.p1 : sp.p2);

  for (std::size_t s = 0; s < t; ++s) {
    d.h_g.push_back(tropical_line(model, w[s], d.g[s] * w[s]));
    d.h_t.push_back(tropical_line(model, w[s], d.t[s] * w[s]));
  }

  // L_k for k = 1 .. t+1: leaves s < k are replaced by the boundary t^s legs.
  for (std::size_t k = 1; k <= t + 1; ++k) {
    FamilyCurve f{Family::L, k, {}, {}};
    MappedTree& tr = f.tree;
    const std::size_t b = add_spine(tr, sp.bend, sp.p1, sp.p2, w_leg, w_at, "");
    std::size_t root = b;
    if (!direct) root = tr.add_segment(b, -(sp.p1 + sp.p2), param_on(sp.p1 + sp.p2, sp.bend));
    for (std::size_t s = 0; s < t; ++s) {
      const std::size_t gs = tr.add_segment(root, w[s], d.g[s] - start);
      constant_leg(tr, gs, label('g', s + 1));
      const std::size_t ts = tr.add_segment(gs, w[s], d.t[s] - d.g[s]);
      if (s + 1 < k) {
        tr.add_mark(label('t', s + 1), MarkKind::Boundary, tr.add_leg(ts, w[s]));
      } else {
        constant_leg(tr, ts, label('t', s + 1));
        tr.add_leg(ts, w[s]);
      }
    }
    f.classification = checked(model, walls, f);
    d.L.push_back(std::move(f));
  }

  // Elementary pieces, bent halfway to x_{g^k}.
  for (std::size_t s = 0; s < t; ++s) {
    PrimitiveCylinder e = elementary_cylinder(model, d.base.leaf_ray[s], true);
    e.spine.bend = (d.g[s] / Rational(2)) * w[s];
    const CylinderSpine& es = e.spine;
    int leg = 1;
    Rational at;
    if (!anchors.x_w_prime.empty()) {
      std::tie(leg, at) = locate_on_legs(model, walls, es.bend, es.p1, es.p2, anchors.x_w_prime[s], "x_w'");
    } else {
      at = generic_parameter(model, walls, es.bend, es.p1);
    }
    d.x_w_prime.push_back(es.bend + at * (leg == 1 ? es.p1 : es.p2));
    for (Family fam : {Family::M, Family::N}) {
      FamilyCurve f{fam, s + 1, {}, {}};
      MappedTree& tr = f.tree;
      const std::size_t b = add_spine(tr, es.bend, es.p1, es.p2, leg, at, "'");
      const std::size_t gs = tr.add_segment(b, w[s], d.g[s] / Rational(2));
      constant_leg(tr, gs, "g'");
      if (fam == Family::M) {
        tr.add_mark("t'", MarkKind::Boundary, tr.add_leg(gs, w[s]));
      } else {
        const std::size_t ts = tr.add_segment(gs, w[s], d.t[s] - d.g[s]);
        constant_leg(tr, ts, "t'");
        tr.add_leg(ts, w[s]);
      }
      f.classification = checked(model, walls, f);
      (fam == Family::M ? d.M : d.N).push_back(std::move(f));
    }
    d.elementary.push_back(std::move(e));
  }

  d.J_L = {"1", "2", "w"};
  for (std::size_t s = 1; s <= t; ++s) d.J_L.insert({label('g', s), label('t', s)});
  d.J_M = d.J_N = {"1'", "2'", "w'", "g'", "t'"};
  d.I_M = {"w'", "g'"};
  d.B_M = {"1'", "2'", "t'"};
  d.I_N = {"w'", "g'", "t'"};
  d.B_N = {"1'", "2'"};
  d.J_g = d.J_L;
  d.J_g.insert(d.J_M.begin(), d.J_M.end());
  d.J_g.erase("g'");

  d.B_L.push_back({"1", "2"});
  for (std::size_t k = 1; k <= t + 1; ++k) {
    IndexSet b = d.B_L.back();
    if (k >= 2) b.insert(label('t', k - 1));
    d.B_L.push_back(std::move(b));
  }
  for (const IndexSet& b : d.B_L) {
    IndexSet i;
    std::set_difference(d.J_L.begin(), d.J_L.end(), b.begin(), b.end(), std::inserter(i, i.end()));
    d.I_L.push_back(std::move(i));
  }
  d.B_g.resize(t + 1);
  d.I_g.resize(t + 1);
  for (std::size_t k = 1; k <= t; ++k) {
    d.B_g[k] = d.B_L[k];
    d.B_g[k].insert(d.B_M.begin(), d.B_M.end());
    d.I_g[k] = d.I_L[k];
    d.I_g[k].insert(d.I_M.begin(), d.I_M.end());
    d.I_g[k].erase("g'");
  }
  return d;
}

CurveClass truncation_class(const ToricModel& model, const MappedTree& tree, const std::set<std::string>& legs) {
  CurveClass total = zero_class(model);
  for (const Mark& m : tree.marks) {
    if (m.kind != MarkKind::Boundary || (!legs.empty() && !legs.count(m.label))) continue;
    auto [e, v] = leg_edge(tree, m.vertex);
    const Vec2 p = tree.outgoing(e, v);
    // Walk back through points that only carry a constant leg.
    for (;;) {
      if (!has_constant_leg(tree, v)) break;
      std::optional<std::size_t> back;
      int moving = 0;
      for (std::size_t f : tree.incident(v)) {
        if (f == e || tree.edges[f].weight.is_zero()) continue;
        ++moving;
        if (tree.outgoing(f, v) == -p && tree.edges[f].length) back = f;
      }
      if (moving != 1 || !back) break;
      e = *back;
      v = tree.other_end(e, v);
    }
    total = total + leg_extension_class(model, *tree.positions[v], p);
  }
  return total;
}

ExtensionLedger extension_ledger(const ToricModel& model, const DeformationData& data) {
  ExtensionLedger l;
  const std::size_t t = data.size();
  l.delta_V = extension_class(model, data.base);
  CurveClass expected = l.delta_V;
  for (std::size_t s = 0; s < t; ++s) {
    const Vec2& w = data.base.twig_type[s];
    l.delta.push_back(leg_extension_class(model, data.t[s] * w, w));
    expected = expected + l.delta.back();
    l.delta_hat.push_back(extension_class(model, data.elementary[s]));
    l.m_truncation.push_back(truncation_class(model, data.M[s].tree, {"1'", "2'"}));
  }
  l.l_truncation = truncation_class(model, data.L[t].tree);
  l.consistent = l.l_truncation == expected && l.m_truncation == l.delta_hat &&
                 truncation_class(model, data.L[0].tree, {"1", "2"}) == l.delta_V;
  return l;
}

Support support_L(const ToricModel& model, const ElementaryCountTable& table, const DeformationData& data,
                  std::size_t k) {
  const std::size_t t = data.size();
  const ExtensionLedger l = extension_ledger(model, data);
  CurveClass lambda = l.delta_V + frame_discrepancy(model, data.base);
  for (const CurveClass& c : l.delta) lambda = lambda + c;
  Support out{{lambda, 1}};
  for (std::size_t s = k - 1; s < t; ++s) {
    const std::size_t i = data.base.leaf_ray[s];
    Support next;
    for (const auto& [c, n] : out)
      for (std::size_t j = 0; j < static_cast<std::size_t>(model.blowups()[i]); ++j) {
        const Int wgt = table.weight({i, j});
        if (wgt != 0) next[c + elementary_class(model, {i, j})] += n * wgt;
      }
    out = std::move(next);
  }
  return out;
}

Support support_M(const ToricModel& model, const DeformationData& data, std::size_t k) {
  return {{extension_class(model, data.elementary[k - 1]), 1}};
}

Support support_N(const ToricModel& model, const ElementaryCountTable& table, const DeformationData& data,
                  std::size_t k) {
  const PrimitiveCylinder& e = data.elementary[k - 1];
  const std::size_t i = e.leaf_ray[0];
  Support out;
  for (std::size_t j = 0; j < static_cast<std::size_t>(model.blowups()[i]); ++j) {
    const Int wgt = table.weight({i, j});
    if (wgt != 0) out[extended_class(model, e, {j})] += wgt;
  }
  return out;
}

Int value(const Support& s, const CurveClass& c) {
  const auto it = s.find(c);
  return it == s.end() ? 0 : it->second;
}

Int convolve(const Support& a, const Support& b, const CurveClass& target) {
  Int sum = 0;
  for (const auto& [c1, n1] : a)
    for (const auto& [c2, n2] : b)
      if (c1 + c2 == target) sum += n1 * n2;
  return sum;
}

ReplayReport replay_induction(const ToricModel& model, const WallStructure& walls, const ElementaryCountTable& table,
                              const PrimitiveCylinder& v, const CurveClass& beta, const Anchors& anchors) {
  return replay_induction(model, table, build_deformation(model, walls, v, anchors), beta);
}

ReplayReport replay_induction(const ToricModel& model, const ElementaryCountTable& table, const DeformationData& data,
                              const CurveClass& beta) {
  const std::size_t t = data.size();
  const ExtensionLedger ledger = extension_ledger(model, data);
  ReplayReport rep;
  PrimitiveCylinder inf = data.base;
  inf.extended = false;
  const CurveClass start = beta + ledger.delta_V;
  rep.count = count_primitive_cylinder(model, table, inf, beta).value;
  rep.extended = count_primitive_cylinder(model, table, data.base, start).value;

  std::vector<Support> L, M, N;
  for (std::size_t k = 1; k <= t + 1; ++k) L.push_back(support_L(model, table, data, k));
  for (std::size_t k = 1; k <= t; ++k) {
    M.push_back(support_M(model, data, k));
    N.push_back(support_N(model, table, data, k));
  }
  rep.initial = value(L[0], start);
  if (rep.count != rep.extended) violation(0, "N(V) vs N(V^)", rep.count, rep.extended);
  if (rep.initial != rep.extended) violation(1, "N(L_1) vs N(V^)", rep.initial, rep.extended);

  std::set<CurveClass> args{start};
  for (std::size_t k = 1; k <= t; ++k) {
    ReplayStep st;
    st.k = k;
    st.classes = args.size();
    std::set<CurveClass> next;
    for (const CurveClass& a : args) {
      const CurveClass shifted = a + ledger.delta_hat[k - 1];
      const Int lhs = value(L[k - 1], a);
      const Int rhs = convolve(L[k], N[k - 1], shifted);
      const Int glued = convolve(L[k - 1], M[k - 1], shifted);
      if (lhs != rhs) violation(k, "splitting", lhs, rhs);
      if (lhs != glued) violation(k, "glued with M_k", lhs, glued);
      st.splitting_lhs += lhs;
      st.splitting_rhs += rhs;
      st.glued_rhs += glued;
      for (const auto& [c, n] : N[k - 1]) next.insert(shifted - c);
    }
    rep.steps.push_back(st);
    args = std::move(next);
  }

  CurveClass shift = start;
  for (const CurveClass& c : ledger.delta_hat) shift = shift + c;
  std::function<Int(std::size_t, const CurveClass&)> tele = [&](std::size_t s, const CurveClass& rest) -> Int {
    if (s == t) return value(L[t], rest);
    Int sum = 0;
    for (const auto& [c, n] : N[s]) sum += n * tele(s + 1, rest - c);
    return sum;
  };
  rep.telescoped = tele(0, shift);
  if (rep.telescoped != rep.count) violation(t, "telescoped", rep.count, rep.telescoped);

  CurveClass lambda = ledger.l_truncation + frame_discrepancy(model, data.base);
  rep.endpoint = ledger.consistent && L[t].size() == 1 && value(L[t], lambda) == 1;
  if (!rep.endpoint) violation(t + 1, "endpoint N(L_{t+1})", value(L[t], lambda), 1);
  return rep;
}

std::map<IndexSet, std::optional<Rational>> AbstractTree::splits() const {
  std::vector<std::vector<std::size_t>> adj(vertices);
  for (std::size_t i = 0; i < links.size(); ++i) {
    adj[links[i].a].push_back(i);
    adj[links[i].b].push_back(i);
  }
  std::vector<std::vector<std::string>> at(vertices);
  for (const auto& [name, v] : legs) at[v].push_back(name);
  const std::string first = legs.empty() ? "" : legs.begin()->first;

  std::map<IndexSet, std::optional<Rational>> out;
  for (std::size_t i = 0; i < links.size(); ++i) {
    IndexSet side;
    std::vector<std::size_t> stack{links[i].b};
    std::vector<bool> seen(vertices, false);
    seen[links[i].b] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      side.insert(at[v].begin(), at[v].end());
      for (std::size_t l : adj[v]) {
        if (l == i) continue;
        const std::size_t o = links[l].a == v ? links[l].b : links[l].a;
        if (!seen[o]) {
          seen[o] = true;
          stack.push_back(o);
        }
      }
    }
    if (side.count(first)) {
      IndexSet other;
      for (const auto& [name, v] : legs)
        if (!side.count(name)) other.insert(name);
      side = std::move(other);
    }
    if (side.size() < 2 || legs.size() - side.size() < 2) continue;
    auto [it, fresh] = out.emplace(side, links[i].length);
    if (!fresh) it->second = it->second && links[i].length ? std::optional(*it->second + *links[i].length) : std::nullopt;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second && kv.second->numerator() == 0; });
  return out;
}

AbstractTree degeneration_path(const DeformationData& data, std::size_t k, int branch, std::optional<Rational> r) {
  const std::size_t t = data.size();
  const CylinderSpine& sp = data.base.spine;
  AbstractTree a;

  // Stabilised L side: identical for L_k and L_{k+1}.
  const std::size_t b = a.add_vertex();
  const Point2 dw = data.x_w - sp.bend;
  const bool w_on_1 = is_zero(det(sp.p1, dw));
  const std::size_t wv = a.add_vertex();
  a.link(b, wv, param_on(w_on_1 ? sp.p1 : sp.p2, dw));
  a.legs["w"] = wv;
  a.legs[w_on_1 ? "1" : "2"] = wv;
  a.legs[w_on_1 ? "2" : "1"] = b;
  const bool direct = t == 1 && same_ray(data.base.twig_type[0], *integral_direction(sp.bend));
  const Rational start = direct ? param_on(data.base.twig_type[0], sp.bend) : Rational(0);
  std::size_t root = b;
  if (!direct) {
    root = a.add_vertex();
    a.link(b, root, param_on(sp.p1 + sp.p2, sp.bend));
  }
  std::vector<std::size_t> gv;
  for (std::size_t s = 0; s < t; ++s) {
    gv.push_back(a.add_vertex());
    a.link(root, gv[s], data.g[s] - start);
    a.legs[label('g', s + 1)] = gv[s];
    a.legs[label('t', s + 1)] = gv[s];
  }

  // Stabilised M_k / N_k side.
  const PrimitiveCylinder& e = data.elementary[k - 1];
  const std::size_t eb = a.add_vertex();
  const Point2 dwp = data.x_w_prime[k - 1] - e.spine.bend;
  const bool wp_on_1 = is_zero(det(e.spine.p1, dwp));
  const std::size_t ewv = a.add_vertex();
  a.link(eb, ewv, param_on(wp_on_1 ? e.spine.p1 : e.spine.p2, dwp));
  a.legs["w'"] = ewv;
  a.legs[wp_on_1 ? "1'" : "2'"] = ewv;
  a.legs[wp_on_1 ? "2'" : "1'"] = eb;
  const std::size_t eg = a.add_vertex();
  a.link(eb, eg, data.g[k - 1] / Rational(2));

  const std::size_t lk = gv[k - 1];
  a.link(lk, eg, r);
  if (branch == 0) {
    a.legs["t'"] = eg;
  } else {
    a.legs["t'"] = lk;
    a.legs[label('t', k)] = eg;
  }
  return a;
}

}  // namespace tropcyl
