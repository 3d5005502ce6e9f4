#pragma once

// Combinatorial wall structure: rays from the origin labelled by the step in
// which they first appear.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tropcyl/lattice.hpp"
#include "tropcyl/model.hpp"

namespace tropcyl {

enum class WallRule { PairSum, Support };

const char* to_string(WallRule rule);
std::optional<WallRule> parse_wall_rule(const std::string& s);

struct Wall {
  Vec2 direction;
  int step = 0;
  Int norm = 0;
  bool operator==(const Wall&) const = default;
};

struct WallStructure {
  std::map<Vec2, int> walls;  // primitive direction -> first step
  WallRule rule = WallRule::PairSum;
  int steps = 0;
  Int norm_bound = 1;
  std::vector<Vec2> support;  // exceptional ray directions

  // Lines through the origin: d and -d are the same wall for membership.
  bool contains_line(const Vec2& d) const;
  std::optional<int> step_of(const Vec2& d) const;
  // Sorted by step, then by angle.
  std::vector<Wall> listing(const Fan& fan) const;
};

WallStructure generate_walls(const ToricModel& model, int steps, Int norm_bound, WallRule rule = WallRule::PairSum);

// Some nonzero nonnegative combination of exceptional rays is parallel to d, up to sign.
bool is_wall_direction(const ToricModel& model, const Vec2& d);
bool is_wall_direction(const std::vector<Vec2>& support, const Vec2& d);
// Sign-sensitive variant: d itself is a positive multiple of such a combination.
bool positively_supported(const std::vector<Vec2>& support, const Vec2& d);

// Primitive directions v with norm(fan, v) <= bound, in angular order.
std::vector<Vec2> directions_up_to_norm(const Fan& fan, Int bound);

}  // namespace tropcyl
