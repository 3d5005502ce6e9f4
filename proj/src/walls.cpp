#include "tropcyl/walls.hpp"

#include <algorithm>
#include <set>

#include "tropcyl/error.hpp"

namespace tropcyl {

const char* to_string(WallRule rule) { return rule == WallRule::PairSum ? "pair_sum" : "support"; }

std::optional<WallRule> parse_wall_rule(const std::string& s) {
  if (s == "pair_sum") return WallRule::PairSum;
  if (s == "support") return WallRule::Support;
  return std::nullopt;
}

bool positively_supported(const std::vector<Vec2>& support, const Vec2& d) {
  for (std::size_t a = 0; a < support.size(); ++a) {
    if (same_ray(support[a], d)) return true;
    for (std::size_t b = 0; b < support.size(); ++b) {
      if (det(support[a], support[b]) > 0 && det(support[a], d) > 0 && det(d, support[b]) > 0) return true;
    }
  }
  return false;
}

bool is_wall_direction(const std::vector<Vec2>& support, const Vec2& d) {
  if (d.is_zero()) throw Error(ErrorCode::ZeroVector, "wall direction");
  return positively_supported(support, d) || positively_supported(support, -d);
}

namespace {

std::vector<Vec2> support_of(const ToricModel& model) {
  std::vector<Vec2> out;
  for (const auto& e : exceptional_directions(model)) out.push_back(e.direction);
  return out;
}

int ceil_log2(Int s) {
  int k = 0;
  while ((Int{1} << k) < s) ++k;
  return k;
}

void generate_pair_sum(WallStructure& ws, const Fan& fan) {
  for (int step = 1; step <= ws.steps; ++step) {
    std::vector<Vec2> current;
    for (const auto& [d, s] : ws.walls) current.push_back(d);
    std::set<Vec2> fresh;
    for (std::size_t a = 0; a < current.size(); ++a) {
      for (std::size_t b = a + 1; b < current.size(); ++b) {
        if (current[a] == -current[b]) continue;
        const Vec2 d = primitive_part(current[a] + current[b]);
        if (ws.walls.count(d) || norm(fan, d) > ws.norm_bound) continue;
        fresh.insert(d);
      }
    }
    if (fresh.empty()) break;
    for (const Vec2& d : fresh) ws.walls.emplace(d, step);
  }
}

// Step of a supported direction d: ceil(log2 s) for the least number s of
// exceptional ray generators (with repetition) summing to a positive multiple of d.
void generate_support(WallStructure& ws, const Fan& fan) {
  std::set<Vec2> pending;
  for (const Vec2& d : directions_up_to_norm(fan, ws.norm_bound))
    if (positively_supported(ws.support, d)) pending.insert(d);
  const Int max_sum = ws.steps >= 62 ? Int{1} << 62 : Int{1} << ws.steps;
  std::set<Vec2> layer{Vec2{0, 0}};
  for (Int s = 1; s <= max_sum && !pending.empty(); ++s) {
    std::set<Vec2> next;
    for (const Vec2& p : layer)
      for (const Vec2& u : ws.support) next.insert(p + u);
    for (const Vec2& p : next) {
      if (p.is_zero()) continue;
      const Vec2 d = primitive_part(p);
      if (pending.erase(d)) ws.walls.emplace(d, ceil_log2(s));
    }
    layer = std::move(next);
  }
}

}  // namespace

bool is_wall_direction(const ToricModel& model, const Vec2& d) { return is_wall_direction(support_of(model), d); }

std::vector<Vec2> directions_up_to_norm(const Fan& fan, Int bound) {
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < fan.size(); ++i) {
    const Vec2 u = fan.ray(static_cast<std::ptrdiff_t>(i));
    const Vec2 w = fan.ray(static_cast<std::ptrdiff_t>(i) + 1);
    // a u + b w with a >= 1, b >= 0, a + b <= bound covers the half-open cone once.
    for (Int a = 1; a <= bound; ++a)
      for (Int b = 0; a + b <= bound; ++b) {
        const Vec2 v = a * u + b * w;
        if (is_primitive(v)) out.push_back(v);
      }
  }
  std::sort(out.begin(), out.end(), angle_less);
  return out;
}

bool WallStructure::contains_line(const Vec2& d) const {
  if (d.is_zero()) throw Error(ErrorCode::ZeroVector, "wall membership");
  const Vec2 p = primitive_part(d);
  return walls.count(p) > 0 || walls.count(-p) > 0;
}

std::optional<int> WallStructure::step_of(const Vec2& d) const {
  auto it = walls.find(primitive_part(d));
  if (it == walls.end()) return std::nullopt;
  return it->second;
}

std::vector<Wall> WallStructure::listing(const Fan& fan) const {
  std::vector<Wall> out;
  for (const auto& [d, s] : walls) out.push_back({d, s, norm(fan, d)});
  std::sort(out.begin(), out.end(), [](const Wall& a, const Wall& b) {
    if (a.step != b.step) return a.step < b.step;
    return angle_less(a.direction, b.direction);
  });
  return out;
}

WallStructure generate_walls(const ToricModel& model, int steps, Int norm_bound, WallRule rule) {
  if (steps < 0) throw Error(ErrorCode::ParseError, "steps must be nonnegative");
  if (norm_bound < 1) throw Error(ErrorCode::ParseError, "norm bound must be positive");
  WallStructure ws;
  ws.rule = rule;
  ws.steps = steps;
  ws.norm_bound = norm_bound;
  ws.support = support_of(model);
  for (const Vec2& d : ws.support) ws.walls.emplace(d, 0);
  if (rule == WallRule::PairSum) generate_pair_sum(ws, model.fan());
  else generate_support(ws, model.fan());
  return ws;
}

}  // namespace tropcyl
