#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "tropcyl/deformation.hpp"
#include "tropcyl/error.hpp"
#include "tropcyl/io.hpp"

using namespace tropcyl;

namespace {

constexpr int kOk = 0, kParse = 2, kNotPrimitive = 3, kOutOfScope = 4, kIdentity = 5, kBadTarget = 6;

struct Options {
  std::string config, cylinder, table, svg, out, rule, is_wall, target = "walls", family;
  bool json = false;
  std::optional<int> steps;
  std::optional<Int> norm_bound;
  std::uint64_t seed = 42;
  int cases = 100;
};

struct BadTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool color() {
  const char* c = std::getenv("TROPCYL_COLOR");
  return c && std::string(c) == "1";
}

std::string verdict(bool ok) {
  if (!color()) return ok ? "PASS" : "FAIL";
  return ok ? "\033[32mPASS\033[0m" : "\033[31mFAIL\033[0m";
}

Config load(const Options& o) {
  Config c = o.config.empty() ? cubic_config() : parse_config(read_json_file(o.config));
  if (o.steps) c.steps = *o.steps;
  if (o.norm_bound) c.norm_bound = *o.norm_bound;
  if (!o.rule.empty()) {
    const auto r = parse_wall_rule(o.rule);
    if (!r) throw Error(ErrorCode::ParseError, "--rule: unknown rule \"" + o.rule + "\"");
    c.rule = *r;
  }
  return c;
}

Vec2 parse_vec(const std::string& s) {
  long long x = 0, y = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%lld,%lld%c", &x, &y, &tail) != 2) throw Error(ErrorCode::ParseError, "expected X,Y, got \"" + s + "\"");
  return {x, y};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, path + ": cannot write");
  out << text;
}

CylinderSpec load_spec(const Options& o, const ToricModel& model) {
  if (o.cylinder.empty()) throw Error(ErrorCode::ParseError, "--cylinder PATH is required");
  return parse_cylinder_spec(model, read_json_file(o.cylinder));
}

ElementaryCountTable load_table(const Options& o, const ToricModel& model) {
  return o.table.empty() ? ElementaryCountTable{} : parse_table(model, read_json_file(o.table));
}

int cmd_walls(const Options& o) {
  const Config c = load(o);
  const ToricModel model = c.model();
  if (!o.is_wall.empty()) {
    const Vec2 d = parse_vec(o.is_wall);
    const bool yes = c.rule == WallRule::Support ? is_wall_direction(model, d)
                                                 : generate_walls(model, c.steps, c.norm_bound, c.rule).contains_line(d);
    std::cout << (yes ? "true" : "false") << "\n";
    return kOk;
  }
  const WallStructure walls = generate_walls(model, c.steps, c.norm_bound, c.rule);
  const auto list = walls.listing(model.fan());
  if (o.json) {
    Json ws = Json::array();
    for (const Wall& w : list) ws.push_back({{"direction", to_json(w.direction)}, {"step", w.step}, {"norm", w.norm}});
    std::cout << Json{{"rule", to_string(c.rule)}, {"steps", c.steps}, {"norm_bound", c.norm_bound}, {"walls", ws}}.dump(2)
              << "\n";
  } else {
    for (const Wall& w : list) std::cout << to_string(w.direction) << " " << w.step << " " << w.norm << "\n";
  }
  if (!o.svg.empty()) write_file(o.svg, render_walls_svg(model, walls, c.render));
  return kOk;
}

Json choice_json(const Choice& j) {
  Json a = Json::array();
  for (std::size_t x : j) a.push_back(x + 1);
  return a;
}

int cmd_count(const Options& o) {
  const Config c = load(o);
  const ToricModel model = c.model();
  const WallStructure walls = generate_walls(model, c.steps, c.norm_bound, c.rule);
  const CylinderSpec spec = load_spec(o, model);
  const ElementaryCountTable table = load_table(o, model);
  const PrimitiveCylinder v = cylinder_of(model, walls, spec);

  Json out{{"cylinder", to_json(spec_of(v))}};
  if (spec.profile) {
    CurveClass beta;
    try {
      beta = class_from_profile(model, *spec.profile);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, std::string("/class: ") + e.what());
    }
    const CountResult r = count_primitive_cylinder(model, table, v, beta);
    out["class"] = to_json(model, *spec.profile);
    out["count"] = r.value;
    Json sp = Json::array();
    for (const Contribution& s : r.splittings)
      sp.push_back({{"choice", choice_json(s.choice)}, {"factors", s.factors}, {"count", s.count}});
    out["splittings"] = sp;
    if (o.json) {
      std::cout << out.dump(2) << "\n";
      return kOk;
    }
    std::cout << "class " << describe(model, *spec.profile) << "\ncount " << r.value << "\n";
    for (const Contribution& s : r.splittings) {
      std::cout << "splitting j=" << choice_json(s.choice).dump() << " factors=" << Json(s.factors).dump()
                << " count " << s.count << "\n";
    }
    return kOk;
  }
  Json cls = Json::array();
  const auto contributions = contributing_classes(model, table, v);
  for (const Contribution& s : contributions) {
    cls.push_back({{"class", to_json(model, intersect(model, s.beta))},
                   {"choice", choice_json(s.choice)},
                   {"factors", s.factors},
                   {"count", s.count}});
  }
  out["classes"] = cls;
  if (o.json) {
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  std::cout << "twig type";
  for (const Vec2& w : v.twig_type) std::cout << " " << to_string(w);
  std::cout << "\n" << contributions.size() << " contributing classes\n";
  for (const Contribution& s : contributions)
    std::cout << describe(model, intersect(model, s.beta)) << " count " << s.count << "\n";
  return kOk;
}

struct Tally {
  std::size_t cases = 0, classes = 0, perturbed = 0, steps = 0;
};

void verify_cylinder(const ToricModel& model, const WallStructure& walls, const ElementaryCountTable& table,
                     const Anchors& anchors, const PrimitiveCylinder& v, std::mt19937_64& rng, Tally& tally) {
  const DeformationData d = build_deformation(model, walls, v, anchors);
  ++tally.cases;
  for (const Contribution& c : contributing_classes(model, table, v)) {
    const Int closed = count_primitive_cylinder(model, table, v, c.beta).value;
    const Int split = splitting_sum(model, table, v, c.beta);
    if (closed != split || closed != c.count)
      throw Error(ErrorCode::IdentityViolation, "closed form " + std::to_string(closed) + " vs splitting sum " + std::to_string(split));
    const ReplayReport r = replay_induction(model, table, d, c.beta);
    ++tally.classes;
    tally.steps += r.steps.size();

    std::vector<Int> delta(model.num_rays(), 0);
    delta[rng() % model.num_rays()] = 1 + static_cast<Int>(rng() % 2);
    const CurveClass off = c.beta + toric_class(model, delta);
    const Int a = count_primitive_cylinder(model, table, v, off).value;
    const Int b = splitting_sum(model, table, v, off);
    if (a != b) throw Error(ErrorCode::IdentityViolation, "perturbed class: " + std::to_string(a) + " vs " + std::to_string(b));
    replay_induction(model, table, d, off);
    ++tally.perturbed;
  }
}

PrimitiveCylinder random_cylinder(const ToricModel& model, std::mt19937_64& rng) {
  std::vector<Vec2> rays;
  for (const auto& e : exceptional_directions(model)) rays.push_back(e.direction);
  for (;;) {
    std::vector<Vec2> type;
    Vec2 sum{0, 0};
    for (const Vec2& r : rays)
      if (rng() % 2 && type.size() < 3) {
        type.push_back(r);
        sum += r;
      }
    if (type.empty() || sum.is_zero()) continue;
    std::shuffle(type.begin(), type.end(), rng);
    PrimitiveCylinder v = canonical_cylinder(model, type);
    const Vec2 sigma = v.spine.p1 + v.spine.p2;
    if (rng() % 2) {
      for (;;) {
        const Vec2 p1{static_cast<Int>(rng() % 7) - 3, static_cast<Int>(rng() % 7) - 3};
        if (p1.is_zero() || parallel(p1, sigma)) continue;
        v.spine.p1 = p1;
        v.spine.p2 = sigma - p1;
        break;
      }
      v.spine.bend = Rational(static_cast<Int>(1 + rng() % 6), static_cast<Int>(1 + rng() % 3)) * sigma;
    }
    return v;
  }
}

int cmd_verify(const Options& o) {
  const Config c = load(o);
  const ToricModel model = c.model();
  const WallStructure walls = generate_walls(model, c.steps, c.norm_bound, c.rule);
  const ElementaryCountTable table = load_table(o, model);
  std::mt19937_64 rng(o.seed);
  Tally tally;
  try {
    if (!o.cylinder.empty()) {
      verify_cylinder(model, walls, table, c.anchors, cylinder_of(model, walls, load_spec(o, model)), rng, tally);
    } else if (!exceptional_directions(model).empty()) {
      for (int k = 0; k < o.cases; ++k) verify_cylinder(model, walls, table, c.anchors, random_cylinder(model, rng), rng, tally);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IdentityViolation) throw;
    std::cout << verdict(false) << " after " << tally.cases << " cases: " << e.what() << "\n";
    return kIdentity;
  }
  std::cout << "cases " << tally.cases << "\n"
            << "contributing classes " << tally.classes << "\n"
            << "perturbed classes " << tally.perturbed << "\n"
            << "induction steps " << tally.steps << "\n"
            << verdict(true) << "\n";
  return kOk;
}

int cmd_render(const Options& o) {
  if (o.target != "walls" && o.target != "cylinder" && o.target != "family")
    throw BadTarget("unknown render target \"" + o.target + "\"");
  const Config c = load(o);
  const ToricModel model = c.model();
  const WallStructure walls = generate_walls(model, c.steps, c.norm_bound, c.rule);
  std::string svg;
  if (o.target == "walls") {
    svg = render_walls_svg(model, walls, c.render);
  } else {
    const PrimitiveCylinder v = cylinder_of(model, walls, load_spec(o, model));
    if (o.target == "cylinder") {
      CylinderShape s;
      s.p1 = v.spine.p1;
      s.p2 = v.spine.p2;
      s.bend = v.spine.bend;
      s.twig_type = v.twig_type;
      s.extended = v.extended;
      svg = render_curve_svg(model, walls, assemble_cylinder(s), c.render);
    } else {
      const DeformationData d = build_deformation(model, walls, v, c.anchors);
      const FamilyCurve* found = nullptr;
      for (const auto* fam : {&d.L, &d.M, &d.N})
        for (const FamilyCurve& f : *fam)
          if (f.tag() == o.family) found = &f;
      if (!found) throw BadTarget("unknown family curve \"" + o.family + "\"");
      svg = render_curve_svg(model, walls, found->tree, c.render);
    }
  }
  const std::string path = !o.out.empty() ? o.out : o.svg;
  if (path.empty()) {
    std::cout << svg;
  } else {
    write_file(path, svg);
  }
  return kOk;
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotPrimitive: return kNotPrimitive;
    case ErrorCode::OutOfPrimitiveScope: return kOutOfScope;
    case ErrorCode::IdentityViolation: return kIdentity;
    default: return kParse;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tropical cylinder counts on blowups of toric surfaces"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "configuration JSON");
    s->add_option("--steps", o.steps, "wall generation steps");
    s->add_option("--norm-bound", o.norm_bound, "wall norm bound");
    s->add_option("--rule", o.rule, "pair_sum or support");
  };
  auto* walls = app.add_subcommand("walls", "list wall directions with step and norm");
  common(walls);
  walls->add_option("--svg", o.svg, "write a wall diagram");
  walls->add_flag("--json", o.json, "machine-readable output");
  walls->add_option("--is-wall", o.is_wall, "query a direction X,Y");

  auto* count = app.add_subcommand("count", "count a primitive cylinder");
  common(count);
  count->add_option("--cylinder", o.cylinder, "cylinder spec JSON")->required();
  count->add_option("--table", o.table, "elementary count table JSON");
  count->add_flag("--json", o.json, "machine-readable output");

  auto* verify = app.add_subcommand("verify", "check the counting identities");
  common(verify);
  verify->add_option("--cylinder", o.cylinder, "cylinder spec JSON; random cases otherwise");
  verify->add_option("--table", o.table, "elementary count table JSON");
  verify->add_option("--seed", o.seed, "seed for random cases");
  verify->add_option("--cases", o.cases, "number of random cases");

  auto* render = app.add_subcommand("render", "write an SVG diagram");
  common(render);
  render->add_option("--target", o.target, "walls, cylinder or family");
  render->add_option("--cylinder", o.cylinder, "cylinder spec JSON");
  render->add_option("--family", o.family, "family curve tag such as L_1, M_2, N_1");
  render->add_option("--out,--svg", o.out, "output path; stdout otherwise");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*walls) return cmd_walls(o);
    if (*count) return cmd_count(o);
    if (*verify) return cmd_verify(o);
    return cmd_render(o);
  } catch (const BadTarget& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadTarget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
}
