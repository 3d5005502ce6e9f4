#include <doctest.h>

#include <string>

#include "tropical_fixtures.hpp"
#include "tropcyl/error.hpp"
#include "tropcyl/io.hpp"

using namespace tropcyl;

namespace {

std::string error_text(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    return e.what();
  }
  FAIL("no error raised");
  return "";
}

std::size_t occurrences(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

const char* cubic_text = R"({"model":{"fan":{"rays":[[1,0],[0,1],[-1,-1]]},"blowups":[2,2,2]},
  "walls":{"steps":1,"norm_bound":10,"rule":"support"},"render":{"width":300,"height":200,"clip":"7/2"}})";

}  // namespace

TEST_CASE("config parsing") {
  const Config c = parse_config(Json::parse(cubic_text));
  CHECK(c.steps == 1);
  CHECK(c.rule == WallRule::Support);
  CHECK(c.render.clip == Rational(7, 2));
  CHECK(c.model().blowups() == std::vector<int>{2, 2, 2});
  CHECK(parse_config(to_json(c)).rays == c.rays);
  CHECK(to_json(parse_config(to_json(c))) == to_json(c));

  CHECK(error_text([] { parse_config(Json::parse(R"({"walls":{}})")); }).find("/model: missing") != std::string::npos);
  CHECK(error_text([] {
          parse_config(Json::parse(R"({"model":{"fan":{"rays":[[1,0],[0,1],[-1,"x"]]},"blowups":[0,0,0]}})"));
        }).find("/model/fan/rays/2/1") != std::string::npos);
  CHECK(error_text([] {
          parse_config(Json::parse(R"({"model":{"fan":{"rays":[[1,0],[0,1],[-1,-1]]},"blowups":[1,1]}})"));
        }).find("/model") != std::string::npos);
  CHECK(error_text([] {
          parse_config(Json::parse(R"({"model":{"fan":{"rays":[[1,0],[1,2],[-1,-1]]},"blowups":[0,0,0]}})"));
        }).find("/model") != std::string::npos);
  CHECK(error_text([] {
          parse_config(Json::parse(R"({"model":{"fan":{"rays":[[1,0],[0,1],[-1,-1]]},"blowups":[0,0,0]},
                                      "walls":{"rule":"closure"}})"));
        }).find("/walls/rule") != std::string::npos);
  CHECK(error_text([] {
          parse_config(Json::parse(R"({"model":{"fan":{"rays":[[1,0],[0,1],[-1,-1]]},"blowups":[0,0,0]},
                                      "anchors":{"g":["1/0"]}})"));
        }).find("/anchors/g/0") != std::string::npos);
}

TEST_CASE("specs, profiles and tables") {
  const ToricModel cubic = fixtures::cubic();
  const auto walls = generate_walls(cubic, 2, 10);
  const CylinderSpec s = parse_cylinder_spec(
      cubic, Json::parse(R"({"spine":{"p1":[0,1],"p2":[1,0],"bend_at":["2","2"]},"twig_type":[[-1,-1]],
                             "class":{"dD":[1,1,0],"dE":{"3,1":1}}})"));
  REQUIRE(s.spine);
  CHECK(s.spine->bend == Point2(Vec2{2, 2}));
  REQUIRE(s.profile);
  CHECK(s.profile->dE[cubic.exceptional_position({2, 0})] == 1);
  CHECK(parse_profile(cubic, to_json(cubic, *s.profile)) == *s.profile);
  CHECK(parse_cylinder_spec(cubic, to_json(s)).spine->p1 == s.spine->p1);

  const PrimitiveCylinder v = cylinder_of(cubic, walls, s);
  CHECK(v.twig_type == std::vector<Vec2>{{-1, -1}});
  CHECK(v.leaf_ray == std::vector<std::size_t>{2});
  const CylinderSpec canon = parse_cylinder_spec(cubic, Json::parse(R"({"twig_type":[[1,0],[0,1]]})"));
  CHECK(cylinder_of(cubic, walls, canon).spine.bend == canonical_cylinder(cubic, {{1, 0}, {0, 1}}).spine.bend);
  try {
    cylinder_of(cubic, walls, parse_cylinder_spec(cubic, Json::parse(R"({"twig_type":[[1,0],[1,0]]})")));
    FAIL("accepted a repeated leaf");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPrimitive);
  }

  CHECK(error_text([&] { parse_profile(cubic, Json::parse(R"({"dD":[1,1,0],"dE":{"3,3":1}})"), "/class"); })
            .find("/class/dE/3,3") != std::string::npos);
  CHECK(error_text([&] { parse_profile(cubic, Json::parse(R"({"dD":[1,1]})")); }).find("/dD") != std::string::npos);

  const ElementaryCountTable t = parse_table(cubic, Json::parse(R"({"entries":[{"i":1,"j":2,"count":3}]})"));
  CHECK(t.weight({0, 1}) == 3);
  CHECK(t.weight({0, 0}) == 1);
  CHECK(parse_table(cubic, to_json(t)).entries() == t.entries());
  CHECK(error_text([&] { parse_table(cubic, Json::parse(R"({"entries":[{"i":4,"j":1,"count":1}]})")); })
            .find("/entries/0") != std::string::npos);
}

TEST_CASE("svg rendering") {
  const ToricModel cubic = fixtures::cubic();
  const RenderOptions o;
  const auto walls = generate_walls(cubic, 2, 10);
  const std::string svg = render_walls_svg(cubic, walls, o);
  CHECK(svg == render_walls_svg(cubic, walls, o));
  CHECK(occurrences(svg, "class=\"wall initial\"") == 3);
  CHECK(occurrences(svg, "<line") == walls.walls.size());
  CHECK(occurrences(svg, "class=\"step\"") == walls.walls.size());

  const ToricModel bare = fixtures::model(fixtures::p2_fan(), {0, 0, 0});
  const std::string empty = render_walls_svg(bare, generate_walls(bare, 2, 10), o);
  CHECK(occurrences(empty, "<polygon") == 1);
  CHECK(occurrences(empty, "<line") == 0);
  CHECK(occurrences(empty, "<path") == 0);

  const std::string fig = render_curve_svg(cubic, walls, fixtures::figure3_top_left(), o);
  CHECK(occurrences(fig, "class=\"spine\"") == 1);
  CHECK(occurrences(fig, "class=\"twig\"") == 1);
  CHECK(occurrences(fig, "class=\"degree\"") == 3);
  CHECK(fig == render_curve_svg(cubic, walls, fixtures::figure3_top_left(), o));

  const auto d = build_deformation(cubic, walls, canonical_cylinder(cubic, {{1, 0}, {0, 1}}));
  for (const auto* fam : {&d.L, &d.M, &d.N})
    for (const FamilyCurve& f : *fam) CHECK(render_curve_svg(cubic, walls, f.tree, o).find("class=\"spine\"") != std::string::npos);
}
