#include "tropcyl/model.hpp"

#include <algorithm>
#include <string>

#include "tropcyl/error.hpp"

namespace tropcyl {

ToricModel::ToricModel(Fan fan, std::vector<int> blowups)
    : fan_(std::move(fan)), blowups_(std::move(blowups)) {
  if (blowups_.size() != fan_.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(blowups_.size()) + " blowup counts for " +
                                               std::to_string(fan_.size()) + " rays");
  }
  for (std::size_t i = 0; i < blowups_.size(); ++i) {
    if (blowups_[i] < 0) {
      throw Error(ErrorCode::NegativeMultiplicity, "ray " + std::to_string(i));
    }
    for (int j = 0; j < blowups_[i]; ++j) exceptional_.push_back({i, static_cast<std::size_t>(j)});
  }
}

std::size_t ToricModel::exceptional_position(const ExcIndex& e) const {
  const auto it = std::lower_bound(exceptional_.begin(), exceptional_.end(), e);
  if (it == exceptional_.end() || *it != e) {
    throw Error(ErrorCode::ComponentOutOfRange,
                "E(" + std::to_string(e.ray) + "," + std::to_string(e.component) + ")");
  }
  return static_cast<std::size_t>(it - exceptional_.begin());
}

ToricModel build_model(const Fan& fan, std::span<const int> blowups) {
  return ToricModel(fan, std::vector<int>(blowups.begin(), blowups.end()));
}

ToricModel build_model_from_rays(std::span<const Vec2> rays, std::span<const int> blowups) {
  if (rays.size() != blowups.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(blowups.size()) + " blowup counts for " +
                                               std::to_string(rays.size()) + " rays");
  }
  const FanValidation v = validate_fan_rotation(rays);
  std::vector<int> rotated(blowups.size());
  for (std::size_t k = 0; k < rotated.size(); ++k) rotated[k] = blowups[(k + v.rotation) % blowups.size()];
  return ToricModel(v.fan, std::move(rotated));
}

std::vector<ExceptionalDirection> exceptional_directions(const ToricModel& model) {
  std::vector<ExceptionalDirection> out;
  for (std::size_t i = 0; i < model.num_rays(); ++i) {
    if (model.blowups_at(i) > 0) out.push_back({i, model.fan().ray(static_cast<std::ptrdiff_t>(i))});
  }
  return out;
}

ModelRefinement refine_model(const ToricModel& model, const Vec2& d) {
  Refinement r = refine_fan(model.fan(), d);
  std::vector<int> blowups;
  std::vector<std::optional<std::size_t>> origin;
  for (const Vec2& ray : r.fan.rays()) {
    const auto old = model.fan().ray_index(ray);
    origin.push_back(old);
    blowups.push_back(old ? model.blowups_at(*old) : 0);
  }
  return ModelRefinement{ToricModel(std::move(r.fan), std::move(blowups)), std::move(r.inserted),
                         std::move(origin)};
}

}  // namespace tropcyl
