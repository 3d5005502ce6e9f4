#include "tropcyl/counting.hpp"

#include <set>

#include "tropcyl/error.hpp"

namespace tropcyl {

void ElementaryCountTable::set(const ExcIndex& e, Int count) {
  if (count < 0) throw Error(ErrorCode::NegativeMultiplicity, "elementary count");
  entries_[e] = count;
}

Int ElementaryCountTable::weight(const ExcIndex& e) const {
  auto it = entries_.find(e);
  return it == entries_.end() ? 1 : it->second;
}

namespace {

std::size_t exceptional_ray_of(const ToricModel& model, const Vec2& w) {
  const auto i = model.fan().ray_index(w);
  if (!i) throw Error(ErrorCode::NotPrimitive, "leaf " + to_string(w) + " is not a primitive ray generator");
  if (model.blowups()[*i] == 0) throw Error(ErrorCode::NotPrimitive, "leaf " + to_string(w) + " points to a ray without blowups");
  return *i;
}

std::vector<std::size_t> leaf_rays(const ToricModel& model, const std::vector<Vec2>& type) {
  std::vector<std::size_t> out;
  std::set<std::size_t> seen;
  for (const Vec2& w : type) {
    out.push_back(exceptional_ray_of(model, w));
    if (!seen.insert(out.back()).second) throw Error(ErrorCode::NotPrimitive, "repeated leaf direction " + to_string(w));
  }
  if (type.empty()) throw Error(ErrorCode::NotPrimitive, "empty twig type");
  return out;
}

Vec2 leaf_sum(const std::vector<Vec2>& type) {
  Vec2 w0{0, 0};
  for (const Vec2& w : type) w0 += w;
  return w0;
}

void check_choice(const ToricModel& model, const PrimitiveCylinder& v, const Choice& j) {
  if (j.size() != v.leaf_ray.size()) throw Error(ErrorCode::LengthMismatch, "one component per leaf");
  for (std::size_t s = 0; s < j.size(); ++s)
    if (j[s] >= static_cast<std::size_t>(model.blowups()[v.leaf_ray[s]]))
      throw Error(ErrorCode::ComponentOutOfRange, "component " + std::to_string(j[s] + 1) + " on ray " +
                                                      std::to_string(v.leaf_ray[s] + 1));
}

void check_scope(const ToricModel& model, const IntersectionProfile& p) {
  for (std::size_t k = 0; k < p.dE.size(); ++k) {
    if (p.dE[k] == 0 || p.dE[k] == 1) continue;
    const ExcIndex& e = model.exceptional()[k];
    throw Error(ErrorCode::OutOfPrimitiveScope, "beta.E" + std::to_string(e.ray + 1) + "," +
                                                    std::to_string(e.component + 1) + " = " + std::to_string(p.dE[k]));
  }
}

}  // namespace

PrimitiveCylinder cylinder_from_tree(const ToricModel& model, const WallStructure& walls, const MappedTree& tree) {
  const auto c = classify(model, walls, tree);
  if (c.kind != CurveKind::Cylinder) {
    std::string why = std::string("not a cylinder (") + to_string(c.kind) + ")";
    if (!c.reasons.empty()) why += ": " + std::string(to_string(c.reasons[0].clause)) + " " + c.reasons[0].detail;
    if (!c.notes.empty()) why += ": " + c.notes[0];
    throw Error(ErrorCode::NotPrimitive, why);
  }
  if (!c.primitive()) throw Error(ErrorCode::NotPrimitive, "twig leaves must have degree 1 and distinct directions");
  const CylinderInfo& info = *c.cylinder;
  PrimitiveCylinder v;
  v.spine = {info.p1, info.p2, *tree.positions[info.bend]};
  v.twig_type = info.twig_type;
  v.leaf_ray = leaf_rays(model, v.twig_type);
  v.extended = tree.marks[info.mark1].kind == MarkKind::Boundary && tree.marks[info.mark2].kind == MarkKind::Boundary;
  return v;
}

PrimitiveCylinder canonical_cylinder(const ToricModel& model, const std::vector<Vec2>& twig_type, bool extended) {
  PrimitiveCylinder v;
  v.twig_type = twig_type;
  v.leaf_ray = leaf_rays(model, twig_type);
  v.extended = extended;
  const Vec2 sigma = -leaf_sum(twig_type);
  if (sigma.is_zero()) throw Error(ErrorCode::NotPrimitive, "twig leaves sum to zero");
  const Fan& fan = model.fan();
  const ConeCoordinates cc = cone_coordinates(fan, sigma);
  const Vec2 u = fan.ray(static_cast<std::ptrdiff_t>(cc.cone));
  const Vec2 w = fan.ray(static_cast<std::ptrdiff_t>(cc.cone) + 1);
  if (cc.b > 0) {
    v.spine.p1 = cc.a * u;
    v.spine.p2 = cc.b * w;
  } else {
    v.spine.p1 = w;
    v.spine.p2 = sigma - w;
  }
  v.spine.bend = Rational(2) * sigma;
  return v;
}

PrimitiveCylinder elementary_cylinder(const ToricModel& model, std::size_t ray, bool extended) {
  if (ray >= model.num_rays()) throw Error(ErrorCode::RayIndexOutOfRange, "elementary cylinder ray");
  const Fan& fan = model.fan();
  const Vec2 u = fan.ray(static_cast<std::ptrdiff_t>(ray));
  const Vec2 next = fan.ray(static_cast<std::ptrdiff_t>(ray) + 1);
  PrimitiveCylinder v;
  v.twig_type = {u};
  v.leaf_ray = leaf_rays(model, v.twig_type);
  v.extended = extended;
  v.spine.p2 = next;
  v.spine.p1 = -u - next;
  v.spine.bend = Rational(1, 2) * u;
  return v;
}

MappedTree cylinder_tree(const PrimitiveCylinder& v) {
  CylinderShape s;
  s.p1 = v.spine.p1;
  s.p2 = v.spine.p2;
  s.bend = v.spine.bend;
  s.twig_type = v.twig_type;
  s.extended = v.extended;
  // Keep finite legs short enough to stay inside the germ of the bend.
  s.leg_length = Rational(1, 64);
  s.interior_at = Rational(1, 128);
  return assemble_cylinder(s);
}

std::vector<Choice> all_choices(const ToricModel& model, const PrimitiveCylinder& v) {
  std::vector<Choice> out{Choice{}};
  for (std::size_t i : v.leaf_ray) {
    std::vector<Choice> next;
    for (const Choice& c : out)
      for (std::size_t j = 0; j < static_cast<std::size_t>(model.blowups()[i]); ++j) {
        Choice d = c;
        d.push_back(j);
        next.push_back(std::move(d));
      }
    out = std::move(next);
  }
  return out;
}

CurveClass extension_class(const ToricModel& model, const PrimitiveCylinder& v) {
  return leg_extension_class(model, v.spine.bend, v.spine.p1) + leg_extension_class(model, v.spine.bend, v.spine.p2);
}

CurveClass extended_class(const ToricModel& model, const PrimitiveCylinder& v, const Choice& j) {
  check_choice(model, v, j);
  const Fan& fan = model.fan();
  std::vector<Int> t = cone_profile(fan, v.spine.p1);
  const auto t2 = cone_profile(fan, v.spine.p2);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] += t2[i];
  for (std::size_t i : v.leaf_ray) t[i] += 1;
  CurveClass beta = toric_class_from_intersections(model, t);
  for (std::size_t s = 0; s < j.size(); ++s) beta = beta - exceptional_class(model, {v.leaf_ray[s], j[s]});
  return beta;
}

CurveClass infinitesimal_class(const ToricModel& model, const PrimitiveCylinder& v, const Choice& j) {
  return extended_class(model, v, j) - extension_class(model, v);
}

CurveClass elementary_class(const ToricModel& model, const ExcIndex& e) {
  model.exceptional_position(e);
  return infinitesimal_class(model, elementary_cylinder(model, e.ray), {e.component});
}

CurveClass frame_discrepancy(const ToricModel& model, const PrimitiveCylinder& v) {
  const Choice j0(v.leaf_ray.size(), 0);
  CurveClass xi = infinitesimal_class(model, v, j0);
  for (std::size_t i : v.leaf_ray) xi = xi - elementary_class(model, {i, 0});
  return xi;
}

Int elementary_count(const ElementaryCountTable& table, const ToricModel& model, const ExcIndex& e,
                     const CurveClass& beta) {
  const CurveClass eps = elementary_class(model, e);
  return beta == eps ? table.weight(e) : 0;
}

std::vector<Contribution> contributing_classes(const ToricModel& model, const ElementaryCountTable& table,
                                               const PrimitiveCylinder& v) {
  std::vector<Contribution> out;
  const CurveClass delta = extension_class(model, v);
  for (const Choice& j : all_choices(model, v)) {
    Contribution c;
    c.choice = j;
    c.beta_hat = extended_class(model, v, j);
    c.beta = v.extended ? c.beta_hat : c.beta_hat - delta;
    c.count = 1;
    for (std::size_t s = 0; s < j.size(); ++s) {
      c.factors.push_back(table.weight({v.leaf_ray[s], j[s]}));
      c.count *= c.factors.back();
    }
    out.push_back(std::move(c));
  }
  return out;
}

CountResult count_primitive_cylinder(const ToricModel& model, const ElementaryCountTable& table,
                                     const PrimitiveCylinder& v, const CurveClass& beta) {
  const IntersectionProfile p = intersect(model, beta);
  check_scope(model, p);
  const CurveClass beta_hat = v.extended ? beta : beta + extension_class(model, v);
  // The only candidate choice is read off the exceptional contacts.
  Choice j;
  std::set<std::size_t> used;
  for (std::size_t i : v.leaf_ray) {
    std::optional<std::size_t> comp;
    for (std::size_t k = 0; k < p.dE.size(); ++k) {
      if (model.exceptional()[k].ray != i || p.dE[k] == 0) continue;
      if (comp) return {};
      comp = model.exceptional()[k].component;
      used.insert(k);
    }
    if (!comp) return {};
    j.push_back(*comp);
  }
  for (std::size_t k = 0; k < p.dE.size(); ++k)
    if (p.dE[k] != 0 && !used.count(k)) return {};
  if (extended_class(model, v, j) != beta_hat) return {};
  Contribution c;
  c.choice = j;
  c.beta = beta;
  c.beta_hat = beta_hat;
  c.count = 1;
  for (std::size_t s = 0; s < j.size(); ++s) {
    c.factors.push_back(table.weight({v.leaf_ray[s], j[s]}));
    c.count *= c.factors.back();
  }
  CountResult r;
  r.value = c.count;
  r.splittings.push_back(std::move(c));
  return r;
}

Int splitting_sum(const ToricModel& model, const ElementaryCountTable& table, const PrimitiveCylinder& v,
                  const CurveClass& beta) {
  check_scope(model, intersect(model, beta));
  const CurveClass infinitesimal = v.extended ? beta - extension_class(model, v) : beta;
  const IntersectionProfile target = intersect(model, infinitesimal - frame_discrepancy(model, v));
  // Support of each factor: the elementary classes of the leaf's ray.
  std::vector<std::vector<std::pair<ExcIndex, IntersectionProfile>>> support;
  for (std::size_t i : v.leaf_ray) {
    support.emplace_back();
    for (int j = 0; j < model.blowups()[i]; ++j) {
      const ExcIndex e{i, static_cast<std::size_t>(j)};
      support.back().push_back({e, intersect(model, elementary_class(model, e))});
    }
  }
  Int total = 0;
  std::vector<std::size_t> idx(support.size(), 0);
  for (;;) {
    IntersectionProfile sum = zero_profile(model);
    Int product = 1;
    for (std::size_t s = 0; s < support.size(); ++s) {
      const auto& [e, prof] = support[s][idx[s]];
      sum = sum + prof;
      product *= elementary_count(table, model, e, class_from_profile(model, prof));
    }
    if (sum == target) total += product;
    std::size_t s = 0;
    while (s < idx.size() && ++idx[s] == support[s].size()) idx[s++] = 0;
    if (s == idx.size()) break;
  }
  return total;
}

Int count_spine(const ToricModel& model, const ElementaryCountTable& table, const CylinderSpine& spine,
                const CurveClass& beta, bool extended) {
  const IntersectionProfile p = intersect(model, beta);
  check_scope(model, p);
  std::map<std::size_t, int> per_ray;
  for (std::size_t k = 0; k < p.dE.size(); ++k)
    if (p.dE[k] == 1) ++per_ray[model.exceptional()[k].ray];
  PrimitiveCylinder v;
  v.spine = spine;
  v.extended = extended;
  for (const auto& [ray, n] : per_ray) {
    if (n > 1)
      throw Error(ErrorCode::OutOfPrimitiveScope, "beta meets " + std::to_string(n) + " components of E" +
                                                      std::to_string(ray + 1) + ": repeated leaf direction");
    v.twig_type.push_back(model.fan().rays()[ray]);
    v.leaf_ray.push_back(ray);
  }
  if (v.twig_type.empty()) return 0;
  const Vec2 w0 = leaf_sum(v.twig_type);
  if (w0.is_zero() || spine.p1 + spine.p2 != -w0) return 0;
  try {
    cylinder_tree(v);
  } catch (const Error&) {
    return 0;
  }
  return count_primitive_cylinder(model, table, v, beta).value;
}

}  // namespace tropcyl
