#include "tropcyl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "tropcyl/error.hpp"

namespace tropcyl {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, (where.empty() ? "/" : where) + ": " + what);
}

const Json& field(const Json& j, const std::string& where, const char* key) {
  if (!j.is_object()) bad(where, "expected an object");
  if (!j.contains(key)) bad(where + "/" + key, "missing");
  return j.at(key);
}

Int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<Int>();
}

Rational rational(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<Int>());
  if (!j.is_string()) bad(where, "expected an integer or a string \"p/q\"");
  const std::string s = j.get<std::string>();
  try {
    std::size_t used = 0;
    const Int p = std::stoll(s, &used);
    if (used == s.size()) return Rational(p);
    if (s[used] != '/') bad(where, "malformed rational \"" + s + "\"");
    const std::string rest = s.substr(used + 1);
    const Int q = std::stoll(rest, &used);
    if (used != rest.size() || q == 0) bad(where, "malformed rational \"" + s + "\"");
    return Rational(p, q);
  } catch (const std::logic_error&) {
    bad(where, "malformed rational \"" + s + "\"");
  }
}

Vec2 pair(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) bad(where, "expected an integer pair");
  return {integer(j[0], where + "/0"), integer(j[1], where + "/1")};
}

Point2 point(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) bad(where, "expected a pair of rationals");
  return {rational(j[0], where + "/0"), rational(j[1], where + "/1")};
}

std::vector<Vec2> pairs(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected a list of integer pairs");
  std::vector<Vec2> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(pair(j[k], where + "/" + std::to_string(k)));
  return out;
}

Json rational_json(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

Rational cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }

Rational point_norm(const Fan& fan, const Point2& x) {
  const auto d = integral_direction(x);
  if (!d) return Rational(0);
  const Rational scale = d->x != 0 ? x.x / Rational(d->x) : x.y / Rational(d->y);
  return scale * Rational(norm(fan, *d));
}

Rational ceil_of(const Rational& r) {
  Int q = r.numerator() / r.denominator();
  if (q * r.denominator() < r.numerator()) ++q;
  return Rational(q);
}

// Frame: boundary polygon at fan norm R, mapped into the pixel box.
struct Canvas {
  const Fan& fan;
  Rational R;
  double cx, cy, scale;
  std::vector<Point2> corners;

  Canvas(const Fan& f, const Rational& radius, int width, int height) : fan(f), R(radius) {
    double extent = 0;
    for (const Vec2& u : fan.rays()) {
      corners.push_back(R * u);
      extent = std::max({extent, std::abs(boost::rational_cast<double>(corners.back().x)),
                         std::abs(boost::rational_cast<double>(corners.back().y))});
    }
    cx = width / 2.0;
    cy = height / 2.0;
    scale = (std::min(width, height) / 2.0 - 28.0) / extent;
  }

  double px(const Point2& p) const { return cx + boost::rational_cast<double>(p.x) * scale; }
  double py(const Point2& p) const { return cy - boost::rational_cast<double>(p.y) * scale; }
  std::string at(const Point2& p) const { return num(px(p)) + "," + num(py(p)); }

  // Where a + s p, s > 0, leaves the polygon; a is inside.
  Point2 exit(const Point2& a, const Vec2& p) const {
    const Point2 dir(p);
    std::optional<Rational> best;
    for (std::size_t i = 0; i < corners.size(); ++i) {
      const Point2& A = corners[i];
      const Point2& B = corners[(i + 1) % corners.size()];
      const Point2 e = B - A;
      const Rational den = cross(dir, e);
      if (den.numerator() == 0) continue;
      const Rational s = cross(A - a, e) / den;
      const Rational mu = cross(A - a, dir) / den;
      if (sign(s) <= 0 || sign(mu) < 0 || mu > Rational(1)) continue;
      if (!best || s < *best) best = s;
    }
    return a + *best * p;
  }
};

struct Palette {
  const char* boundary;
  const char* wall;
  const char* spine;
  const char* twig;
  const char* text;
};

Palette palette(const std::string& name) {
  if (name == "mono") return {"#000000", "#9a9a9a", "#000000", "#4d4d4d", "#000000"};
  return {"#000000", "#8c8c8c", "#1f4fbf", "#c81e1e", "#202020"};
}

void header(std::ostringstream& os, const RenderOptions& o) {
  const Palette c = palette(o.palette);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\"" << o.height
     << "\" viewBox=\"0 0 " << o.width << " " << o.height << "\">\n"
     << "<style>\n"
     << ".boundary{fill:none;stroke:" << c.boundary << ";stroke-width:1.5}\n"
     << ".wall{stroke:" << c.wall << ";stroke-width:0.8}\n"
     << ".initial{stroke-width:2.5}\n"
     << ".spine{fill:none;stroke:" << c.spine << ";stroke-width:2}\n"
     << ".twig{fill:none;stroke:" << c.twig << ";stroke-width:2}\n"
     << ".mark{fill:none;stroke:" << c.spine << ";stroke-width:1.5}\n"
     << "text{font-family:sans-serif;font-size:11px;fill:" << c.text << "}\n"
     << "</style>\n";
}

void boundary(std::ostringstream& os, const Canvas& cv) {
  os << "<polygon class=\"boundary\" points=\"";
  for (std::size_t i = 0; i < cv.corners.size(); ++i) os << (i ? " " : "") << cv.at(cv.corners[i]);
  os << "\"/>\n";
}

void wall_layer(std::ostringstream& os, const Canvas& cv, const WallStructure& walls) {
  const auto list = walls.listing(cv.fan);
  if (list.empty()) return;
  os << "<g class=\"walls\">\n";
  for (const Wall& w : list) {
    const Point2 end = (cv.R / Rational(w.norm)) * w.direction;
    os << "<line class=\"wall" << (w.step == 0 ? " initial" : "") << "\" x1=\"" << num(cv.cx) << "\" y1=\""
       << num(cv.cy) << "\" x2=\"" << num(cv.px(end)) << "\" y2=\"" << num(cv.py(end)) << "\"/>\n";
  }
  for (const Wall& w : list) {
    const Point2 end = (cv.R / Rational(w.norm)) * w.direction;
    const double dx = cv.px(end) - cv.cx, dy = cv.py(end) - cv.cy;
    const double len = std::hypot(dx, dy);
    os << "<text class=\"step\" x=\"" << num(cv.px(end) + 10 * dx / len - 3) << "\" y=\""
       << num(cv.py(end) + 10 * dy / len + 4) << "\">" << w.step << "</text>\n";
  }
  os << "</g>\n";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '<') out += "&lt;";
    else if (ch == '>') out += "&gt;";
    else if (ch == '&') out += "&amp;";
    else if (ch == '\'') out += "&apos;";
    else out += ch;
  }
  return out;
}

}  // namespace

ToricModel Config::model() const { return build_model_from_rays(rays, blowups); }

Config cubic_config() {
  Config c;
  c.rays = {{1, 0}, {0, 1}, {-1, -1}};
  c.blowups = {2, 2, 2};
  return c;
}

Config parse_config(const Json& j) {
  Config c;
  const Json& m = field(j, "", "model");
  c.rays = pairs(field(field(m, "/model", "fan"), "/model/fan", "rays"), "/model/fan/rays");
  const Json& b = field(m, "/model", "blowups");
  if (!b.is_array()) bad("/model/blowups", "expected a list of integers");
  for (std::size_t k = 0; k < b.size(); ++k)
    c.blowups.push_back(static_cast<int>(integer(b[k], "/model/blowups/" + std::to_string(k))));
  try {
    (void)c.model();
  } catch (const Error& e) {
    bad("/model", e.what());
  }
  if (j.contains("walls")) {
    const Json& w = j["walls"];
    if (!w.is_object()) bad("/walls", "expected an object");
    if (w.contains("steps")) c.steps = static_cast<int>(integer(w["steps"], "/walls/steps"));
    if (w.contains("norm_bound")) c.norm_bound = integer(w["norm_bound"], "/walls/norm_bound");
    if (w.contains("rule")) {
      if (!w["rule"].is_string()) bad("/walls/rule", "expected a string");
      const auto r = parse_wall_rule(w["rule"].get<std::string>());
      if (!r) bad("/walls/rule", "unknown rule \"" + w["rule"].get<std::string>() + "\"");
      c.rule = *r;
    }
    if (c.steps < 0) bad("/walls/steps", "must be non-negative");
    if (c.norm_bound < 1) bad("/walls/norm_bound", "must be positive");
  }
  if (j.contains("anchors")) {
    const Json& a = j["anchors"];
    if (!a.is_object()) bad("/anchors", "expected an object");
    for (const char* key : {"g", "t"}) {
      if (!a.contains(key)) continue;
      const std::string where = std::string("/anchors/") + key;
      if (!a[key].is_array()) bad(where, "expected a list");
      auto& dst = key[0] == 'g' ? c.anchors.g : c.anchors.t;
      for (std::size_t k = 0; k < a[key].size(); ++k) dst.push_back(rational(a[key][k], where + "/" + std::to_string(k)));
    }
    if (a.contains("x_w")) c.anchors.x_w = point(a["x_w"], "/anchors/x_w");
    if (a.contains("x_w_prime")) {
      if (!a["x_w_prime"].is_array()) bad("/anchors/x_w_prime", "expected a list");
      for (std::size_t k = 0; k < a["x_w_prime"].size(); ++k)
        c.anchors.x_w_prime.push_back(point(a["x_w_prime"][k], "/anchors/x_w_prime/" + std::to_string(k)));
    }
  }
  if (j.contains("render")) {
    const Json& r = j["render"];
    if (!r.is_object()) bad("/render", "expected an object");
    if (r.contains("width")) c.render.width = static_cast<int>(integer(r["width"], "/render/width"));
    if (r.contains("height")) c.render.height = static_cast<int>(integer(r["height"], "/render/height"));
    if (r.contains("clip")) c.render.clip = rational(r["clip"], "/render/clip");
    if (r.contains("palette")) {
      if (!r["palette"].is_string()) bad("/render/palette", "expected a string");
      c.render.palette = r["palette"].get<std::string>();
      if (c.render.palette != "default" && c.render.palette != "mono") bad("/render/palette", "unknown palette");
    }
    if (c.render.width < 64 || c.render.height < 64) bad("/render", "canvas smaller than 64 pixels");
    if (sign(c.render.clip) <= 0) bad("/render/clip", "must be positive");
  }
  return c;
}

Json to_json(const Vec2& v) { return Json::array({v.x, v.y}); }
Json to_json(const Point2& p) { return Json::array({rational_json(p.x), rational_json(p.y)}); }

Json to_json(const Config& c) {
  Json j;
  Json rays = Json::array();
  for (const Vec2& r : c.rays) rays.push_back(to_json(r));
  j["model"]["fan"]["rays"] = rays;
  j["model"]["blowups"] = c.blowups;
  j["walls"] = {{"steps", c.steps}, {"norm_bound", c.norm_bound}, {"rule", to_string(c.rule)}};
  if (!c.anchors.g.empty() || !c.anchors.t.empty() || c.anchors.x_w || !c.anchors.x_w_prime.empty()) {
    Json a = Json::object();
    for (const auto* v : {&c.anchors.g, &c.anchors.t}) {
      if (v->empty()) continue;
      Json l = Json::array();
      for (const Rational& r : *v) l.push_back(rational_json(r));
      a[v == &c.anchors.g ? "g" : "t"] = l;
    }
    if (c.anchors.x_w) a["x_w"] = to_json(*c.anchors.x_w);
    if (!c.anchors.x_w_prime.empty()) {
      Json l = Json::array();
      for (const Point2& p : c.anchors.x_w_prime) l.push_back(to_json(p));
      a["x_w_prime"] = l;
    }
    j["anchors"] = a;
  }
  j["render"] = {{"width", c.render.width},
                 {"height", c.render.height},
                 {"clip", rational_json(c.render.clip)},
                 {"palette", c.render.palette}};
  return j;
}

IntersectionProfile parse_profile(const ToricModel& model, const Json& j, const std::string& where) {
  IntersectionProfile p;
  const Json& d = field(j, where, "dD");
  if (!d.is_array() || d.size() != model.num_rays())
    bad(where + "/dD", "expected " + std::to_string(model.num_rays()) + " integers");
  for (std::size_t k = 0; k < d.size(); ++k) p.dD.push_back(integer(d[k], where + "/dD/" + std::to_string(k)));
  p.dE.assign(model.num_exceptional(), 0);
  if (j.contains("dE")) {
    const Json& e = j["dE"];
    if (!e.is_object()) bad(where + "/dE", "expected an object keyed by \"i,j\"");
    for (const auto& [key, val] : e.items()) {
      const std::string w = where + "/dE/" + key;
      unsigned long i = 0, c = 0;
      char tail = 0;
      if (std::sscanf(key.c_str(), "%lu,%lu%c", &i, &c, &tail) != 2 || i == 0 || c == 0)
        bad(w, "key must be \"i,j\" with 1-based indices");
      if (i > model.num_rays() || c > static_cast<unsigned long>(model.blowups()[i - 1]))
        bad(w, "no exceptional component E" + key);
      p.dE[model.exceptional_position({i - 1, c - 1})] = integer(val, w);
    }
  }
  return p;
}

Json to_json(const ToricModel& model, const IntersectionProfile& p) {
  Json e = Json::object();
  for (std::size_t k = 0; k < p.dE.size(); ++k) {
    if (p.dE[k] == 0) continue;
    const ExcIndex& x = model.exceptional()[k];
    e[std::to_string(x.ray + 1) + "," + std::to_string(x.component + 1)] = p.dE[k];
  }
  return {{"dD", p.dD}, {"dE", e}};
}

CylinderSpec parse_cylinder_spec(const ToricModel& model, const Json& j) {
  CylinderSpec s;
  s.twig_type = pairs(field(j, "", "twig_type"), "/twig_type");
  if (j.contains("spine")) {
    const Json& sp = j["spine"];
    s.spine = CylinderSpine{pair(field(sp, "/spine", "p1"), "/spine/p1"), pair(field(sp, "/spine", "p2"), "/spine/p2"),
                            point(field(sp, "/spine", "bend_at"), "/spine/bend_at")};
  }
  if (j.contains("extended")) {
    if (!j["extended"].is_boolean()) bad("/extended", "expected a boolean");
    s.extended = j["extended"].get<bool>();
  }
  if (j.contains("class")) s.profile = parse_profile(model, j["class"], "/class");
  return s;
}

Json to_json(const CylinderSpec& s) {
  Json j;
  if (s.spine)
    j["spine"] = {{"p1", to_json(s.spine->p1)}, {"p2", to_json(s.spine->p2)}, {"bend_at", to_json(s.spine->bend)}};
  Json t = Json::array();
  for (const Vec2& w : s.twig_type) t.push_back(to_json(w));
  j["twig_type"] = t;
  j["extended"] = s.extended;
  return j;
}

ElementaryCountTable parse_table(const ToricModel& model, const Json& j) {
  ElementaryCountTable t;
  const Json& es = field(j, "", "entries");
  if (!es.is_array()) bad("/entries", "expected a list");
  for (std::size_t k = 0; k < es.size(); ++k) {
    const std::string w = "/entries/" + std::to_string(k);
    const Int i = integer(field(es[k], w, "i"), w + "/i");
    const Int c = integer(field(es[k], w, "j"), w + "/j");
    const Int n = integer(field(es[k], w, "count"), w + "/count");
    if (i < 1 || i > static_cast<Int>(model.num_rays()) || c < 1 || c > model.blowups()[static_cast<std::size_t>(i - 1)])
      bad(w, "no exceptional component E" + std::to_string(i) + "," + std::to_string(c));
    if (n < 0) bad(w + "/count", "must be non-negative");
    t.set({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(c - 1)}, n);
  }
  return t;
}

Json to_json(const ElementaryCountTable& t) {
  Json es = Json::array();
  for (const auto& [e, n] : t.entries()) es.push_back({{"i", e.ray + 1}, {"j", e.component + 1}, {"count", n}});
  return {{"entries", es}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

PrimitiveCylinder cylinder_of(const ToricModel& model, const WallStructure& walls, const CylinderSpec& spec) {
  PrimitiveCylinder v;
  if (spec.spine) {
    v.spine = *spec.spine;
    v.twig_type = spec.twig_type;
    v.extended = spec.extended;
  } else {
    v = canonical_cylinder(model, spec.twig_type, spec.extended);
  }
  PrimitiveCylinder out = cylinder_from_tree(model, walls, cylinder_tree(v));
  out.spine = v.spine;
  return out;
}

CylinderSpec spec_of(const PrimitiveCylinder& v) { return {v.spine, v.twig_type, v.extended, std::nullopt}; }

std::string render_walls_svg(const ToricModel& model, const WallStructure& walls, const RenderOptions& o) {
  const Canvas cv(model.fan(), o.clip, o.width, o.height);
  std::ostringstream os;
  header(os, o);
  boundary(os, cv);
  wall_layer(os, cv, walls);
  os << "</svg>\n";
  return os.str();
}

std::string render_curve_svg(const ToricModel& model, const WallStructure& walls, const MappedTree& tree,
                             const RenderOptions& o) {
  const Fan& fan = model.fan();
  Rational R = o.clip;
  for (const auto& p : tree.positions)
    if (p) R = std::max(R, ceil_of(point_norm(fan, *p)) + Rational(1));
  const Canvas cv(fan, R, o.width, o.height);

  std::set<std::size_t> twig;
  for (const TwigPiece& t : spine_decomposition(model, walls, tree).twigs) twig.insert(t.original_edge.begin(), t.original_edge.end());

  std::ostringstream os;
  header(os, o);
  boundary(os, cv);
  wall_layer(os, cv, walls);

  std::ostringstream spine_d, twig_d, degrees;
  for (std::size_t e = 0; e < tree.edges.size(); ++e) {
    const Edge& ed = tree.edges[e];
    if (ed.weight.is_zero()) continue;
    const Point2 a = *tree.positions[ed.tail];
    const Point2 b = ed.length ? *tree.positions[ed.head] : cv.exit(a, ed.weight);
    std::ostringstream& d = twig.count(e) ? twig_d : spine_d;
    d << (d.tellp() > 0 ? " " : "") << "M" << cv.at(a) << " L" << cv.at(b);
    if (!ed.length) {
      const Point2 mid = Rational(1, 2) * (a + b);
      degrees << "<text class=\"degree\" x=\"" << num(cv.px(mid) + 4) << "\" y=\"" << num(cv.py(mid) - 4) << "\">"
              << norm(fan, ed.weight) << "</text>\n";
    }
  }
  if (spine_d.tellp() > 0) os << "<path class=\"spine\" d=\"" << spine_d.str() << "\"/>\n";
  if (twig_d.tellp() > 0) os << "<path class=\"twig\" d=\"" << twig_d.str() << "\"/>\n";
  if (degrees.tellp() > 0) os << "<g class=\"degrees\">\n" << degrees.str() << "</g>\n";

  std::ostringstream marks, labels;
  for (const Mark& m : tree.marks) {
    const std::size_t e = tree.incident(m.vertex).front();
    const std::size_t inner = tree.other_end(e, m.vertex);
    Point2 at;
    if (m.kind == MarkKind::Interior) {
      at = *tree.positions[inner];
      marks << (marks.tellp() > 0 ? " " : "") << "M" << num(cv.px(at) - 4) << "," << num(cv.py(at)) << " h8 M"
            << num(cv.px(at)) << "," << num(cv.py(at) - 4) << " v8";
    } else if (m.kind == MarkKind::Boundary) {
      at = cv.exit(*tree.positions[inner], tree.outgoing(e, inner));
    } else {
      at = *tree.positions[m.vertex];
    }
    labels << "<text class=\"label\" x=\"" << num(cv.px(at) + 5) << "\" y=\"" << num(cv.py(at) + 12) << "\">"
           << xml_escape(m.label) << "</text>\n";
  }
  if (marks.tellp() > 0) os << "<path class=\"mark\" d=\"" << marks.str() << "\"/>\n";
  if (labels.tellp() > 0) os << "<g class=\"labels\">\n" << labels.str() << "</g>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace tropcyl
