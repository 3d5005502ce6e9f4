#include <doctest.h>

#include <algorithm>

#include "tropical_fixtures.hpp"
#include "tropcyl/error.hpp"

using namespace tropcyl;

namespace {

bool has_clause(const Classification& c, Clause cl) {
  return std::any_of(c.reasons.begin(), c.reasons.end(), [&](const Reason& r) { return r.clause == cl; });
}

WallStructure cubic_walls() { return generate_walls(fixtures::cubic(), 3, 8); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ParseError;
}

// Subdivides edge e at its midpoint (or one unit out for infinite edges).
MappedTree subdivide(MappedTree t, std::size_t e) {
  const Edge ed = t.edges[e];
  const Rational first = ed.length ? *ed.length / Rational(2) : Rational(1);
  const std::size_t mid = t.add_vertex(*t.positions[ed.tail] + first * ed.weight);
  t.edges[e] = Edge{ed.tail, mid, first, ed.weight};
  t.add_edge(mid, ed.head, ed.weight, ed.length ? std::optional(*ed.length - first) : std::nullopt);
  return t;
}

}  // namespace

TEST_CASE("balancing reports") {
  const auto walls = cubic_walls();
  MappedTree star;
  const std::size_t c = star.add_vertex(Point2(Vec2{1, 1}));
  star.add_mark("a", MarkKind::Boundary, star.add_leg(c, {1, 0}));
  star.add_mark("b", MarkKind::Boundary, star.add_leg(c, {0, 1}));
  star.add_mark("c", MarkKind::Boundary, star.add_leg(c, {-1, -1}));
  auto rep = validate_balancing(walls, star);
  REQUIRE(rep.size() == 1);
  CHECK(rep[0].status == VertexStatus::Balanced);

  const MappedTree tl = fixtures::figure3_top_left();
  for (const auto& r : validate_balancing(walls, tl)) CHECK(r.status == VertexStatus::Balanced);
  const auto dec = spine_decomposition(fixtures::cubic(), walls, tl);
  rep = validate_balancing(walls, dec.spine);
  REQUIRE(rep.size() == 1);
  CHECK(rep[0].status == VertexStatus::Bending);
  CHECK(rep[0].sum == Vec2{1, 1});

  // Root edge weight doubled (length halved to stay affine).
  MappedTree mutated = tl;
  for (Edge& e : mutated.edges)
    if (e.length && e.weight == Vec2{-1, -1}) {
      e.weight = {-2, -2};
      e.length = Rational(1);
    }
  bool found = false;
  for (const auto& r : validate_balancing(walls, mutated)) {
    if (r.vertex != 0) continue;
    found = true;
    CHECK(r.status == VertexStatus::Unbalanced);
    CHECK(r.sum == Vec2{-1, -1});
  }
  CHECK(found);

  MappedTree broken = tl;
  broken.edges[2].length = Rational(3);
  CHECK(code_of([&] { validate_balancing(walls, broken); }) == ErrorCode::AffineInconsistent);
}

TEST_CASE("figure three fixtures") {
  const ToricModel cubic = fixtures::cubic();
  const auto walls = cubic_walls();
  auto c = classify(cubic, walls, fixtures::figure3_top_left());
  REQUIRE(c.kind == CurveKind::Cylinder);
  CHECK(c.primitive());
  CHECK(c.cylinder->twig_type == std::vector<Vec2>{{-1, -1}});
  CHECK(c.cylinder->p1 + c.cylinder->p2 == Vec2{1, 1});

  c = classify(cubic, walls, fixtures::figure3_top_right());
  REQUIRE(c.kind == CurveKind::Cylinder);
  CHECK_FALSE(c.primitive());

  c = classify(cubic, walls, fixtures::figure3_bottom_left());
  CHECK(c.kind == CurveKind::Invalid);
  REQUIRE(c.reasons.size() == 1);
  CHECK(c.reasons[0].clause == Clause::Unbalanced);
  CHECK(c.reasons[0].detail == "deficit (-2,0)");

  MappedTree seg;
  const std::size_t a = seg.add_vertex(Point2(Vec2{1, 0}));
  seg.add_segment(a, {0, 0}, 1);
  c = classify(cubic, walls, seg);
  CHECK(c.kind == CurveKind::Invalid);
  CHECK(has_clause(c, Clause::UnmarkedFiniteLeaf));
}

TEST_CASE("single weight mutations name the failing clause") {
  const ToricModel cubic = fixtures::cubic();
  const auto walls = cubic_walls();
  const MappedTree base = fixtures::figure3_top_left();

  // Leaf turned away from the exceptional ray.
  MappedTree m = base;
  m.edges.back().weight = {-1, 0};
  auto c = classify(cubic, walls, m);
  CHECK(c.kind == CurveKind::Invalid);
  CHECK(has_clause(c, Clause::LeafNotExceptional));
  CHECK(has_clause(c, Clause::Unbalanced));

  // Spine leg weight changed.
  m = base;
  m.edges[0].weight = {0, 2};
  c = classify(cubic, walls, m);
  CHECK(c.kind == CurveKind::Invalid);
  CHECK(has_clause(c, Clause::Unbalanced));

  // Root edge weight changed without moving the endpoints.
  m = base;
  m.edges[2].weight = {-1, -2};
  c = classify(cubic, walls, m);
  CHECK(c.kind == CurveKind::Invalid);
  CHECK(has_clause(c, Clause::AffineInconsistent));

  // Boundary leg made constant.
  m = base;
  m.edges[1].weight = {0, 0};
  c = classify(cubic, walls, m);
  CHECK(has_clause(c, Clause::BoundaryLegConstant));

  // Leaf toward a ray without blowups.
  const ToricModel sparse = fixtures::model(fixtures::p2_fan(), {2, 2, 0});
  c = classify(sparse, generate_walls(sparse, 2, 6), base);
  CHECK(has_clause(c, Clause::LeafNotExceptional));
}

TEST_CASE("twigs and spines") {
  const ToricModel cubic = fixtures::cubic();
  const auto walls = cubic_walls();
  const auto dec = spine_decomposition(cubic, walls, fixtures::figure3_top_left());
  CHECK(dec.spine.marks.size() == 2);
  CHECK(dec.spine.edges.size() == 2);
  REQUIRE(dec.twigs.size() == 1);
  CHECK(dec.twigs[0].leaves() == std::vector<Vec2>{{-1, -1}});
  CHECK(dec.twigs[0].direction() == Vec2{-1, -1});
  CHECK(classify(cubic, walls, dec.twigs[0].tree).kind == CurveKind::Twig);
  CHECK(classify(cubic, walls, dec.spine).kind == CurveKind::Spine);
  CHECK(glue(dec, fixtures::figure3_top_left().num_vertices()) == fixtures::figure3_top_left());

  // A twig whose edge leaves the wall lines.
  MappedTree twig;
  const std::size_t r = twig.add_vertex(Point2(Vec2{1, 2}));
  const std::size_t o = twig.add_segment(r, {-1, -1}, 1);
  twig.add_leg(o, {-1, -1});
  CHECK(classify(cubic, walls, twig).kind == CurveKind::Invalid);

  MappedTree star;
  const std::size_t c = star.add_vertex(Point2(Vec2{1, 1}));
  star.add_mark("a", MarkKind::Boundary, star.add_leg(c, {1, 0}));
  star.add_mark("b", MarkKind::Boundary, star.add_leg(c, {-1, 0}));
  const auto d2 = spine_decomposition(cubic, walls, star);
  CHECK(d2.twigs.empty());
  CHECK(d2.spine == star);
  CHECK(code_of([&] { spine_decomposition(cubic, walls, twig); }) == ErrorCode::NotATropicalCurve);
}

TEST_CASE("random cylinders classify, decompose and survive subdivision") {
  const ToricModel cubic = fixtures::cubic();
  const auto walls = cubic_walls();
  fixtures::Rng rng(31);
  const std::vector<Vec2> rays{{1, 0}, {0, 1}, {-1, -1}};
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<Vec2> type;
    for (const Vec2& u : rays)
      if (rng.uniform(0, 1)) type.push_back(rng.uniform(1, 2) * u);
    if (type.empty()) type.push_back(rays[static_cast<std::size_t>(rng.uniform(0, 2))]);
    Vec2 w0{0, 0};
    for (const Vec2& w : type) w0 += w;
    if (w0.is_zero()) continue;
    const Vec2 sigma = -w0;
    const auto cc = cone_coordinates(cubic.fan(), sigma);
    CylinderShape s;
    s.p1 = cc.a * cubic.fan().rays()[cc.cone];
    s.p2 = sigma - s.p1;
    if (s.p2.is_zero()) {
      s.p1 = cubic.fan().ray(static_cast<std::ptrdiff_t>(cc.cone) + 1);
      s.p2 = sigma - s.p1;
    }
    s.bend = Rational(rng.uniform(1, 4)) * sigma;
    s.twig_type = type;
    s.extended = rng.uniform(0, 1) == 1;
    const MappedTree t = assemble_cylinder(s);
    const auto c = classify(cubic, walls, t);
    REQUIRE(c.kind == CurveKind::Cylinder);
    bool prim = true;
    for (const Vec2& w : type) prim = prim && is_primitive(w);
    CHECK(c.primitive() == prim);
    const auto dec = spine_decomposition(cubic, walls, t);
    CHECK(glue(dec, t.num_vertices()) == t);
    const std::size_t e = static_cast<std::size_t>(rng.uniform(0, static_cast<Int>(t.edges.size()) - 1));
    const auto c2 = classify(cubic, walls, subdivide(t, e));
    CHECK(c2.kind == CurveKind::Cylinder);
    CHECK(c2.primitive() == prim);
  }
}

TEST_CASE("extension classes of single legs") {
  const ToricModel cubic = fixtures::cubic();
  const CurveClass h = toric_class(cubic, {1, 0, 0});
  CHECK(leg_extension_class(cubic, Point2(Vec2{2, 2}), {0, 1}).is_zero());
  CHECK(leg_extension_class(cubic, Point2(Vec2{2, 2}), {-1, 0}) == h);
  CHECK(leg_extension_class(cubic, Point2(Vec2{1, 2}), {1, -2}) == scale(2, h));
  CHECK(code_of([&] { leg_extension_class(cubic, Point2(Vec2{1, 1}), {-1, -1}); }) == ErrorCode::PathThroughOrigin);
}

TEST_CASE("extension classes: additivity, identity and compatibility") {
  const ToricModel cubic = fixtures::cubic();
  fixtures::Rng rng(37);
  int checked = 0;
  while (checked < 100) {
    const Point2 x(Rational(rng.uniform(-12, 12), 2), Rational(rng.uniform(-12, 12), 3));
    const Vec2 p = rng.nonzero_vec(4);
    if (x.is_zero() || (is_zero(det(p, x)) && sign(dot(p, x)) < 0)) continue;
    ++checked;
    const CurveClass d = leg_extension_class(cubic, x, p);
    for (Int v : d.exc) CHECK(v == 0);
    // Splitting the path at x + S p.
    const Rational S(rng.uniform(1, 9), rng.uniform(1, 3));
    const Point2 y = x + S * p;
    if (!y.is_zero()) CHECK(segment_extension_class(cubic, x, p, S) + leg_extension_class(cubic, y, p) == d);
    // Kink identity: phi(p) = phi_germ(x)(p) + delta.
    const auto start = linear_profile(cubic.fan(), germ_cone(cubic.fan(), x, p), p);
    const auto end = cone_profile(cubic.fan(), p);
    const auto dd = intersect(cubic, d).dD;
    for (std::size_t i = 0; i < 3; ++i) CHECK(start[i] + dd[i] == end[i]);
    // No ray crossed: every sample point stays in the starting cone.
    bool crosses = false;
    for (std::size_t i = 0; i < 3; ++i) {
      const Vec2 u = cubic.fan().rays()[i];
      const Int dp = det(u, p);
      if (dp == 0) continue;
      const Rational s = -det(u, x) / Rational(dp);
      if (sign(s) > 0 && sign(dot(u, x + s * p)) > 0) crosses = true;
    }
    if (!crosses) CHECK(d.is_zero());
  }
}

TEST_CASE("extending a spine") {
  const ToricModel cubic = fixtures::cubic();
  // Balanced toric vertex with one finite leg; boundary legs decompose -p.
  fixtures::Rng rng(41);
  int checked = 0;
  while (checked < 60) {
    const Point2 c(Rational(rng.uniform(-6, 6)), Rational(rng.uniform(-6, 6)));
    const Vec2 p = rng.primitive_vec(3);
    const Rational len(rng.uniform(1, 4), 2);
    const Point2 x = c + len * p;
    if (x.is_zero() || (is_zero(det(p, x)) && sign(dot(p, x)) < 0)) continue;
    if (c.is_zero()) continue;
    ++checked;
    MappedTree t;
    const std::size_t v = t.add_vertex(c);
    t.add_mark("f", MarkKind::Finite, t.add_segment(v, p, len));
    const auto cc = cone_coordinates(cubic.fan(), -p);
    int k = 0;
    if (cc.a) t.add_mark("b" + std::to_string(k++), MarkKind::Boundary, t.add_leg(v, cc.a * cubic.fan().rays()[cc.cone]));
    if (cc.b) t.add_mark("b" + std::to_string(k++), MarkKind::Boundary,
                         t.add_leg(v, cc.b * cubic.fan().ray(static_cast<std::ptrdiff_t>(cc.cone) + 1)));
    const auto ext = extend_spine(cubic, t, true);
    const ToricModel& m = ext.model;
    CHECK(ext.legs.size() == 1);
    for (Int e : ext.delta_hat.exc) CHECK(e == 0);
    // Class of the unextended spine from its leg profile.
    const CurveClass beta = toric_class_from_intersections(m, leg_profile(m, t));
    CHECK(intersect(m, beta + ext.delta_hat).dD == leg_profile(m, ext.tree));
    CHECK(ext.legs[0].delta == leg_extension_class(m, x, p));
    for (const Mark& m : ext.tree.marks) CHECK(m.kind == MarkKind::Boundary);
  }

  MappedTree t;
  const std::size_t v = t.add_vertex(Point2(Vec2{1, 1}));
  t.add_mark("f", MarkKind::Finite, t.add_segment(v, {1, 2}, 1));
  t.add_mark("b", MarkKind::Boundary, t.add_leg(v, {-1, -2}));
  CHECK(code_of([&] { extend_spine(cubic, t, false); }) == ErrorCode::SlopeNotRayDirection);
  const auto ext = extend_spine(cubic, t, true);
  CHECK(ext.model.num_rays() > 3);
  CHECK(ext.model.fan().ray_index({1, 2}).has_value());
}

TEST_CASE("tropical lines") {
  const ToricModel cubic = fixtures::cubic();
  auto line = tropical_line(cubic, {0, 1}, Point2(Vec2{0, 2}), Vec2{1, 0});
  CHECK(line.profile == std::vector<Int>{1, 1, 1});
  CHECK(line.meets_ray_once);
  // (1,0) and (-1,-1) both have norm 1; the lexicographic tie-break picks (-1,-1).
  line = tropical_line(cubic, {0, 1}, Point2(Vec2{0, 2}));
  CHECK(line.w_prime == Vec2{-1, -1});
  CHECK(line.profile == std::vector<Int>{1, 1, 1});
  CHECK(code_of([&] { tropical_line(cubic, {0, 1}, Point2(Vec2{0, 2}), Vec2{0, 1}); }) == ErrorCode::NotUnimodular);

  const ToricModel refined = refine_model(cubic, {1, 1}).model;
  line = tropical_line(refined, {1, 1}, Point2(Vec2{1, 1}), Vec2{1, 0});
  CHECK(line.ray.has_value());
  CHECK(line.profile.size() == 4);

  fixtures::Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec2 w = rng.primitive_vec(5);
    const Vec2 c = unimodular_complement(cubic.fan(), w);
    const Int d = det(w, c);
    CHECK((d == 1 || d == -1));
    CHECK(is_toric_profile(cubic.fan(), tropical_line(cubic, w, Point2(w)).profile));
  }
}
