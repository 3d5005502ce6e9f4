#include <doctest.h>

#include "support.hpp"
#include "tropcyl/error.hpp"

using namespace tropcyl;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ParseError;
}

// Oracle: the full divisor lattice spanned by pi^*D_{t,i} and E_ij with its
// bilinear form, assembled from adjacency in the fan alone.
struct BlowupPairing {
  std::size_t m;
  std::vector<std::size_t> exc_ray;
  std::vector<std::vector<Int>> form;

  explicit BlowupPairing(const ToricModel& model) : m(model.num_rays()) {
    const Fan& fan = model.fan();
    for (const auto& e : model.exceptional()) exc_ray.push_back(e.ray);
    const std::size_t n = m + exc_ray.size();
    form.assign(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) {
          // u_{i-1} + u_{i+1} = k u_i; recover k from a coordinate.
          const Vec2 s = fan.ray(static_cast<std::ptrdiff_t>(i) - 1) + fan.ray(static_cast<std::ptrdiff_t>(i) + 1);
          const Vec2 u = fan.ray(static_cast<std::ptrdiff_t>(i));
          form[i][i] = -(u.x != 0 ? s.x / u.x : s.y / u.y);
        } else if (fan.next(i) == j || fan.next(j) == i) {
          form[i][j] = 1;
        }
      }
    }
    for (std::size_t k = 0; k < exc_ray.size(); ++k) form[m + k][m + k] = -1;
  }

  Int pair(const std::vector<Int>& a, const std::vector<Int>& b) const {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * form[i][j] * b[j];
    return s;
  }

  std::vector<Int> embed(const CurveClass& c) const {
    std::vector<Int> v(c.toric);
    v.insert(v.end(), c.exc.begin(), c.exc.end());
    return v;
  }

  std::vector<Int> strict_transform(std::size_t i) const {
    std::vector<Int> v(m + exc_ray.size(), 0);
    v[i] = 1;
    for (std::size_t k = 0; k < exc_ray.size(); ++k)
      if (exc_ray[k] == i) v[m + k] = -1;
    return v;
  }

  IntersectionProfile profile(const CurveClass& c) const {
    IntersectionProfile p;
    const auto v = embed(c);
    for (std::size_t i = 0; i < m; ++i) p.dD.push_back(pair(v, strict_transform(i)));
    for (std::size_t k = 0; k < exc_ray.size(); ++k) {
      std::vector<Int> e(m + exc_ray.size(), 0);
      e[m + k] = 1;
      p.dE.push_back(pair(v, e));
    }
    return p;
  }
};

std::vector<ToricModel> test_models() {
  return {fixtures::cubic(), fixtures::model(fixtures::p1p1_fan(), {1, 2, 0, 3}),
          fixtures::model(fixtures::f1_fan(), {2, 1, 1, 0})};
}

CurveClass random_class(const ToricModel& model, fixtures::Rng& rng) {
  std::vector<Int> t(model.num_rays());
  for (auto& v : t) v = rng.uniform(-5, 5);
  CurveClass c = toric_class(model, t);
  for (auto& v : c.exc) v = rng.uniform(-3, 3);
  return c;
}

// A random vector t with sum t_i u_i = 0, built without the pairing.
std::vector<Int> random_balanced(const Fan& fan, fixtures::Rng& rng) {
  const std::size_t m = fan.size();
  std::vector<Int> t(m, 0);
  Vec2 s{0, 0};
  for (std::size_t i = 2; i < m; ++i) {
    t[i] = rng.uniform(-6, 6);
    s += t[i] * fan.ray(static_cast<std::ptrdiff_t>(i));
  }
  const Vec2 u0 = fan.ray(0), u1 = fan.ray(1);
  // Solve a u0 + b u1 = -s with det(u0, u1) = 1.
  t[0] = det(-1 * s, u1);
  t[1] = det(u0, -1 * s);
  return t;
}

}  // namespace

TEST_CASE("toric intersection matrices") {
  CHECK(toric_intersection_matrix(fixtures::p2_fan()) == IntMatrix{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  CHECK(toric_intersection_matrix(fixtures::p1p1_fan()) ==
        IntMatrix{{0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 1, 0}});
  const Fan f1 = fixtures::f1_fan();
  const auto mat = toric_intersection_matrix(f1);
  CHECK(mat[*f1.ray_index({1, 1})][*f1.ray_index({1, 1})] == -1);
  for (std::size_t i = 0; i < mat.size(); ++i)
    for (std::size_t j = 0; j < mat.size(); ++j) CHECK(mat[i][j] == mat[j][i]);

  // On the projective plane all three lines are linearly equivalent.
  const ToricModel p2 = fixtures::model(fixtures::p2_fan(), {0, 0, 0});
  CHECK(toric_class(p2, {1, 0, 0}) == toric_class(p2, {0, 1, 0}));
  CHECK(toric_class(p2, {1, 0, 0}) == toric_class(p2, {0, 0, 1}));
}

TEST_CASE("intersection examples on the cubic model") {
  const ToricModel cubic = fixtures::cubic();
  const CurveClass h = toric_class(cubic, {1, 0, 0});
  const CurveClass beta = h - exceptional_class(cubic, {2, 0});
  auto p = intersect(cubic, beta);
  CHECK(p.dD == std::vector<Int>{1, 1, 0});
  CHECK(p.dE == std::vector<Int>{0, 0, 0, 0, 1, 0});
  CHECK(class_from_profile(cubic, p) == beta);

  p = intersect(cubic, exceptional_class(cubic, {0, 0}));
  CHECK(p.dD == std::vector<Int>{1, 0, 0});
  CHECK(p.dE == std::vector<Int>{-1, 0, 0, 0, 0, 0});

  CHECK(intersect(cubic, zero_class(cubic)) == zero_profile(cubic));
  CHECK(class_from_profile(cubic, zero_profile(cubic)) == zero_class(cubic));

  IntersectionProfile bad = zero_profile(cubic);
  bad.dD = {1, 0, 0};
  CHECK(code_of([&] { class_from_profile(cubic, bad); }) == ErrorCode::NonRepresentable);

  const ToricModel other = fixtures::model(fixtures::p2_fan(), {1, 0, 0});
  CHECK(code_of([&] { intersect(other, beta); }) == ErrorCode::ModelMismatch);
}

TEST_CASE("compatibility from boundary legs") {
  const ToricModel cubic = fixtures::cubic();
  CHECK(compatibility_intersections(cubic, {{0, 1}, {1, 1}}) == std::vector<Int>{1, 1, 0});
  CHECK(compatibility_intersections(cubic, {}) == std::vector<Int>{0, 0, 0});
  CHECK(compatibility_intersections(cubic, {{2, 2}}) == std::vector<Int>{0, 0, 2});
  CHECK(code_of([&] { compatibility_intersections(cubic, {{3, 1}}); }) == ErrorCode::RayIndexOutOfRange);
}

TEST_CASE("intersection agrees with the divisor lattice oracle") {
  fixtures::Rng rng(19);
  for (const ToricModel& model : test_models()) {
    const BlowupPairing oracle(model);
    for (int trial = 0; trial < 200; ++trial) {
      const CurveClass a = random_class(model, rng);
      const CurveClass b = random_class(model, rng);
      CHECK(intersect(model, a) == oracle.profile(a));
      CHECK(intersect(model, a + b) == intersect(model, a) + intersect(model, b));
      CHECK(class_from_profile(model, intersect(model, a)) == a);
      // Symmetry of the pairing on the spanning set of divisor classes.
      CHECK(oracle.pair(oracle.embed(a), oracle.embed(b)) == oracle.pair(oracle.embed(b), oracle.embed(a)));
      // Pullbacks are orthogonal to every exceptional curve.
      CurveClass pulled = a;
      for (auto& v : pulled.exc) v = 0;
      for (Int v : intersect(model, pulled).dE) CHECK(v == 0);
    }
  }
}

TEST_CASE("round trip on random representable profiles") {
  fixtures::Rng rng(23);
  for (const ToricModel& model : test_models()) {
    for (int trial = 0; trial < 200; ++trial) {
      IntersectionProfile p;
      p.dD = random_balanced(model.fan(), rng);
      p.dE.resize(model.num_exceptional());
      for (auto& v : p.dE) v = rng.uniform(-3, 3);
      // Undo the exceptional contribution so that the toric part stays balanced.
      for (std::size_t k = 0; k < p.dE.size(); ++k) p.dD[model.exceptional()[k].ray] -= p.dE[k];
      CHECK(intersect(model, class_from_profile(model, p)) == p);
    }
  }
}

TEST_CASE("translating classes along toric blowups") {
  fixtures::Rng rng(29);
  for (const ToricModel& model : test_models()) {
    for (int trial = 0; trial < 60; ++trial) {
      const Vec2 d = rng.primitive_vec(5);
      if (model.fan().ray_index(d)) continue;
      const auto ref = refine_model(model, d);
      const CurveClass a = random_class(model, rng);
      const CurveClass b = translate_class(model, ref, a);
      const auto pa = intersect(model, a);
      const auto pb = intersect(ref.model, b);
      // The pullback meets every new toric divisor trivially and the old ones as before.
      for (std::size_t r = 0; r < ref.model.num_rays(); ++r) {
        if (ref.origin[r]) CHECK(pb.dD[r] == pa.dD[*ref.origin[r]]);
        else CHECK(pb.dD[r] == 0);
      }
      CHECK(pb.dE == pa.dE);
    }
  }
}
