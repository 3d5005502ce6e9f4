#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <set>

#include "support.hpp"
#include "tropcyl/error.hpp"
#include "tropcyl/walls.hpp"

using namespace tropcyl;

namespace {

std::set<Vec2> at_step(const WallStructure& ws, int step) {
  std::set<Vec2> out;
  for (const auto& [d, s] : ws.walls)
    if (s == step) out.insert(d);
  return out;
}

// Oracle for the pair-sum rule: repeat "close under pair sums" on plain vectors.
std::vector<std::pair<Vec2, int>> naive_pair_sum(const ToricModel& model, int steps, Int bound) {
  std::vector<std::pair<Vec2, int>> walls;
  for (std::size_t i = 0; i < model.num_rays(); ++i)
    if (model.blowups()[i] > 0) walls.push_back({model.fan().rays()[i], 0});
  for (int step = 1; step <= steps; ++step) {
    const auto current = walls;
    for (const auto& [a, sa] : current) {
      for (const auto& [b, sb] : current) {
        if (a == b || a == -b) continue;
        Vec2 s = a + b;
        const Int g = std::gcd(s.x, s.y);
        s = Vec2{s.x / g, s.y / g};
        if (norm(model.fan(), s) > bound) continue;
        if (std::none_of(walls.begin(), walls.end(), [&](const auto& w) { return w.first == s; }))
          walls.push_back({s, step});
      }
    }
  }
  std::sort(walls.begin(), walls.end());
  return walls;
}

// Oracle for the support rule: least total coefficient over explicit
// coefficient vectors with entries up to `cap`.
std::optional<Int> least_coefficient_sum(const std::vector<Vec2>& gens, const Vec2& d, Int cap) {
  std::optional<Int> best;
  std::vector<Int> c(gens.size(), 0);
  for (;;) {
    std::size_t k = 0;
    while (k < c.size() && c[k] == cap) c[k++] = 0;
    if (k == c.size()) break;
    ++c[k];
    Vec2 v{0, 0};
    Int s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      v += c[i] * gens[i];
      s += c[i];
    }
    if (same_ray(v, d) && (!best || s < *best)) best = s;
  }
  return best;
}

}  // namespace

TEST_CASE("cubic wall structure") {
  const ToricModel cubic = fixtures::cubic();
  auto ws = generate_walls(cubic, 0, 10);
  CHECK(at_step(ws, 0) == std::set<Vec2>{{1, 0}, {0, 1}, {-1, -1}});
  CHECK(ws.walls.size() == 3);

  ws = generate_walls(cubic, 1, 10);
  CHECK(at_step(ws, 1) == std::set<Vec2>{{1, 1}, {-1, 0}, {0, -1}});

  ws = generate_walls(cubic, 2, 3);
  const auto s2 = at_step(ws, 2);
  for (Vec2 d : {Vec2{2, 1}, Vec2{1, 2}, Vec2{-2, -1}, Vec2{-1, -2}}) CHECK(s2.count(d) == 1);
  CHECK(s2 == std::set<Vec2>{{2, 1}, {1, 2}, {-2, -1}, {-1, -2}, {1, -1}, {-1, 1}});

  const auto sup = generate_walls(cubic, 2, 3, WallRule::Support);
  CHECK(at_step(sup, 0) == at_step(ws, 0));
  CHECK(at_step(sup, 1) == at_step(ws, 1));
  CHECK(at_step(sup, 2) == s2);
}

TEST_CASE("single wall and toric case") {
  for (int n = 0; n < 5; ++n) {
    const auto ws = generate_walls(fixtures::model(fixtures::p2_fan(), {1, 0, 0}), n, 10);
    CHECK(ws.walls == std::map<Vec2, int>{{{1, 0}, 0}});
    CHECK(generate_walls(fixtures::model(fixtures::p2_fan(), {0, 0, 0}), n, 10).walls.empty());
    CHECK(generate_walls(fixtures::model(fixtures::p2_fan(), {0, 0, 0}), n, 10, WallRule::Support).walls.empty());
  }
}

TEST_CASE("wall directions") {
  const ToricModel cubic = fixtures::cubic();
  CHECK(is_wall_direction(cubic, {2, 1}));
  CHECK_FALSE(is_wall_direction(fixtures::model(fixtures::p2_fan(), {1, 0, 0}), {0, 1}));
  CHECK(is_wall_direction(fixtures::model(fixtures::p2_fan(), {1, 0, 0}), {-1, 0}));
  CHECK(is_wall_direction(fixtures::model(fixtures::p2_fan(), {1, 1, 0}), {-1, -1}));
  CHECK_FALSE(is_wall_direction(fixtures::model(fixtures::p2_fan(), {1, 1, 0}), {1, -1}));
  CHECK_THROWS_AS(is_wall_direction(cubic, {0, 0}), Error);
}

TEST_CASE("pair-sum rule against a naive closure") {
  fixtures::Rng rng(5);
  const std::vector<Fan> fans{fixtures::p2_fan(), fixtures::p1p1_fan(), fixtures::f1_fan()};
  for (int trial = 0; trial < 40; ++trial) {
    const Fan& fan = fans[trial % 3];
    std::vector<int> l(fan.size());
    for (auto& v : l) v = static_cast<int>(rng.uniform(0, 2));
    const ToricModel m = build_model(fan, l);
    const int steps = static_cast<int>(rng.uniform(0, 3));
    const Int bound = rng.uniform(1, 6);
    const auto ws = generate_walls(m, steps, bound);
    std::vector<std::pair<Vec2, int>> got(ws.walls.begin(), ws.walls.end());
    CHECK(got == naive_pair_sum(m, steps, bound));
    for (const auto& [d, s] : ws.walls) CHECK(is_wall_direction(m, d));
    // Monotone in steps and in the norm bound.
    const auto more = generate_walls(m, steps + 1, bound + 1);
    for (const auto& [d, s] : ws.walls) CHECK(more.walls.count(d) == 1);
    CHECK(generate_walls(m, steps, bound).walls == ws.walls);
  }
}

TEST_CASE("support rule against explicit coefficient search") {
  const std::vector<ToricModel> models{fixtures::cubic(), fixtures::model(fixtures::p1p1_fan(), {1, 1, 0, 0}),
                                       fixtures::model(fixtures::f1_fan(), {1, 0, 1, 1})};
  for (const ToricModel& m : models) {
    const auto ws = generate_walls(m, 3, 4, WallRule::Support);
    std::vector<Vec2> gens;
    for (const auto& e : exceptional_directions(m)) gens.push_back(e.direction);
    for (const Vec2& d : directions_up_to_norm(m.fan(), 4)) {
      const auto s = least_coefficient_sum(gens, d, 8);
      if (!s) {
        CHECK(ws.walls.count(d) == 0);
        continue;
      }
      int step = 0;
      while ((Int{1} << step) < *s) ++step;
      if (step <= 3) CHECK(ws.step_of(d) == std::optional<int>{step});
      else CHECK(ws.walls.count(d) == 0);
    }
  }
}

TEST_CASE("lines are compared up to sign") {
  const auto ws = generate_walls(fixtures::model(fixtures::p2_fan(), {1, 0, 0}), 2, 5);
  CHECK(ws.contains_line({-3, 0}));
  CHECK(ws.contains_line({2, 0}));
  CHECK_FALSE(ws.contains_line({1, 1}));
}

TEST_CASE("generation time at the acceptance bound") {
  const auto start = std::chrono::steady_clock::now();
  const auto ws = generate_walls(fixtures::cubic(), 4, 10);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 1.0);
  CHECK(ws.walls.size() > 6);
}
