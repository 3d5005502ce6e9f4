#pragma once

#include <random>
#include <vector>

#include "tropcyl/classes.hpp"
#include "tropcyl/lattice.hpp"
#include "tropcyl/model.hpp"

namespace fixtures {

using namespace tropcyl;

inline Fan p2_fan() {
  const std::vector<Vec2> r{{1, 0}, {0, 1}, {-1, -1}};
  return validate_fan(r);
}

inline Fan p1p1_fan() {
  const std::vector<Vec2> r{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return validate_fan(r);
}

inline Fan f1_fan() {
  const std::vector<Vec2> r{{1, 0}, {1, 1}, {0, 1}, {-1, -1}};
  return validate_fan(r);
}

inline ToricModel cubic() {
  const std::vector<int> l{2, 2, 2};
  return build_model(p2_fan(), l);
}

inline ToricModel model(const Fan& fan, std::vector<int> l) { return build_model(fan, l); }

// Small deterministic generator; tests never share a seed with the library.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(unsigned long long seed) : eng(seed) {}
  Int uniform(Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(eng); }
  Vec2 nonzero_vec(Int r) {
    for (;;) {
      Vec2 v{uniform(-r, r), uniform(-r, r)};
      if (!v.is_zero()) return v;
    }
  }
  Vec2 primitive_vec(Int r) {
    for (;;) {
      Vec2 v = nonzero_vec(r);
      if (is_primitive(v)) return v;
    }
  }
};

}  // namespace fixtures
