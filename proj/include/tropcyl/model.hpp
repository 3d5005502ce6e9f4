#pragma once

// Toric model of a log Calabi-Yau surface: a smooth complete fan together with
// the number of generic points blown up on each boundary divisor.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tropcyl/lattice.hpp"

namespace tropcyl {

// Exceptional curve E_{ray, component}; `component` is 0-based.
struct ExcIndex {
  std::size_t ray = 0;
  std::size_t component = 0;
  friend auto operator<=>(const ExcIndex&, const ExcIndex&) = default;
};

struct ExceptionalDirection {
  std::size_t divisor_index = 0;
  Vec2 direction;
  bool operator==(const ExceptionalDirection&) const = default;
};

class ToricModel {
 public:
  ToricModel(Fan fan, std::vector<int> blowups);

  const Fan& fan() const { return fan_; }
  const std::vector<int>& blowups() const { return blowups_; }
  std::size_t num_rays() const { return fan_.size(); }
  int blowups_at(std::size_t ray) const { return blowups_.at(ray); }

  // All E_ij in (ray, component) order; positions index the dense exceptional
  // coefficient vectors used by `classes`.
  const std::vector<ExcIndex>& exceptional() const { return exceptional_; }
  std::size_t num_exceptional() const { return exceptional_.size(); }
  std::size_t exceptional_position(const ExcIndex& e) const;

  bool operator==(const ToricModel& o) const { return fan_ == o.fan_ && blowups_ == o.blowups_; }

 private:
  Fan fan_;
  std::vector<int> blowups_;
  std::vector<ExcIndex> exceptional_;
};

ToricModel build_model(const Fan& fan, std::span<const int> blowups);
// Builds from unnormalized rays; the blowup list follows the input ray order.
ToricModel build_model_from_rays(std::span<const Vec2> rays, std::span<const int> blowups);

std::vector<ExceptionalDirection> exceptional_directions(const ToricModel& model);

struct ModelRefinement {
  ToricModel model;
  std::vector<Vec2> inserted;
  // For every ray of the refined fan, the index of the same ray in the
  // original fan, or nullopt for inserted rays.
  std::vector<std::optional<std::size_t>> origin;
};

ModelRefinement refine_model(const ToricModel& model, const Vec2& d);

}  // namespace tropcyl
