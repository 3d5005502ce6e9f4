#pragma once

// JSON configuration, cylinder specs, count tables and SVG rendering.
// Ray and component indices in JSON are 1-based, in normalized fan order.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tropcyl/classes.hpp"
#include "tropcyl/counting.hpp"
#include "tropcyl/deformation.hpp"
#include "tropcyl/model.hpp"
#include "tropcyl/tropical.hpp"
#include "tropcyl/walls.hpp"

namespace tropcyl {

using Json = nlohmann::ordered_json;

struct RenderOptions {
  int width = 480;
  int height = 480;
  Rational clip{4};  // boundary polygon at fan norm `clip`, grown to fit the curve
  std::string palette = "default";
};

struct Config {
  std::vector<Vec2> rays;
  std::vector<int> blowups;
  int steps = 2;
  Int norm_bound = 10;
  WallRule rule = WallRule::PairSum;
  Anchors anchors;
  RenderOptions render;

  ToricModel model() const;
};

struct CylinderSpec {
  std::optional<CylinderSpine> spine;
  std::vector<Vec2> twig_type;
  bool extended = false;
  std::optional<IntersectionProfile> profile;
};

// Throw ParseError with a JSON-pointer style location.
Config parse_config(const Json& j);
Config cubic_config();
Json to_json(const Config& c);
CylinderSpec parse_cylinder_spec(const ToricModel& model, const Json& j);
Json to_json(const CylinderSpec& s);
ElementaryCountTable parse_table(const ToricModel& model, const Json& j);
Json to_json(const ElementaryCountTable& t);

IntersectionProfile parse_profile(const ToricModel& model, const Json& j, const std::string& where = "");
Json to_json(const ToricModel& model, const IntersectionProfile& p);
Json to_json(const Point2& p);
Json to_json(const Vec2& v);

Json read_json_file(const std::string& path);

// Cylinder described by a spec: the given spine or the canonical one.
PrimitiveCylinder cylinder_of(const ToricModel& model, const WallStructure& walls, const CylinderSpec& spec);
CylinderSpec spec_of(const PrimitiveCylinder& v);

std::string render_walls_svg(const ToricModel& model, const WallStructure& walls, const RenderOptions& o);
// Walls underneath, spine edges in one path and twig edges in another.
std::string render_curve_svg(const ToricModel& model, const WallStructure& walls, const MappedTree& tree,
                             const RenderOptions& o);

}  // namespace tropcyl
