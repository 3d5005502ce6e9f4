#include "tropcyl/classes.hpp"

#include <sstream>

#include "tropcyl/error.hpp"

namespace tropcyl {

namespace {

std::vector<Int> add(const std::vector<Int>& a, const std::vector<Int>& b, Int sign) {
  if (a.size() != b.size()) throw Error(ErrorCode::ModelMismatch, "vector length mismatch");
  std::vector<Int> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + sign * b[i];
  return r;
}

void check_shape(const ToricModel& model, const CurveClass& beta) {
  if (beta.toric.size() != model.num_rays() || beta.exc.size() != model.num_exceptional())
    throw Error(ErrorCode::ModelMismatch, "class does not belong to this model");
}

// Solves A x = b over Q; A is square and assumed invertible.
std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].numerator() == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].numerator() == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

}  // namespace

CurveClass CurveClass::operator+(const CurveClass& o) const {
  return {add(toric, o.toric, 1), add(exc, o.exc, 1)};
}

CurveClass CurveClass::operator-(const CurveClass& o) const {
  return {add(toric, o.toric, -1), add(exc, o.exc, -1)};
}

CurveClass CurveClass::operator-() const {
  CurveClass r = *this;
  for (auto& v : r.toric) v = -v;
  for (auto& v : r.exc) v = -v;
  return r;
}

bool CurveClass::is_zero() const {
  for (Int v : toric)
    if (v != 0) return false;
  for (Int v : exc)
    if (v != 0) return false;
  return true;
}

IntersectionProfile IntersectionProfile::operator+(const IntersectionProfile& o) const {
  return {add(dD, o.dD, 1), add(dE, o.dE, 1)};
}

IntersectionProfile IntersectionProfile::operator-(const IntersectionProfile& o) const {
  return {add(dD, o.dD, -1), add(dE, o.dE, -1)};
}

std::vector<Int> canonical_toric(const Fan& fan, std::vector<Int> coeffs) {
  if (coeffs.size() != fan.size()) throw Error(ErrorCode::LengthMismatch, "toric coefficient length");
  const Vec2 u0 = fan.ray(0), u1 = fan.ray(1);
  const Int d = det(u0, u1);  // 1 for a smooth fan
  const Vec2 e{d * (u1.y * coeffs[0] - u0.y * coeffs[1]), d * (-u1.x * coeffs[0] + u0.x * coeffs[1])};
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= dot(e, fan.ray(static_cast<std::ptrdiff_t>(i)));
  return coeffs;
}

CurveClass zero_class(const ToricModel& model) {
  return {std::vector<Int>(model.num_rays(), 0), std::vector<Int>(model.num_exceptional(), 0)};
}

CurveClass toric_class(const ToricModel& model, std::vector<Int> coeffs) {
  CurveClass c = zero_class(model);
  c.toric = canonical_toric(model.fan(), std::move(coeffs));
  return c;
}

CurveClass exceptional_class(const ToricModel& model, const ExcIndex& e, Int coeff) {
  CurveClass c = zero_class(model);
  c.exc[model.exceptional_position(e)] = coeff;
  return c;
}

CurveClass scale(Int k, const CurveClass& c) {
  CurveClass r = c;
  for (auto& v : r.toric) v *= k;
  for (auto& v : r.exc) v *= k;
  return r;
}

IntMatrix toric_intersection_matrix(const Fan& fan) {
  const std::size_t m = fan.size();
  IntMatrix mat(m, std::vector<Int>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    mat[i][i] = fan.self_intersection(i);
    mat[i][fan.next(i)] = 1;
    mat[fan.next(i)][i] = 1;
  }
  return mat;
}

std::vector<Int> toric_intersections(const ToricModel& model, const CurveClass& beta) {
  check_shape(model, beta);
  const IntMatrix mat = toric_intersection_matrix(model.fan());
  const std::size_t m = model.num_rays();
  std::vector<Int> t(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) t[i] += beta.toric[k] * mat[k][i];
  return t;
}

IntersectionProfile intersect(const ToricModel& model, const CurveClass& beta) {
  IntersectionProfile p;
  p.dD = toric_intersections(model, beta);
  p.dE.resize(model.num_exceptional());
  const auto& exc = model.exceptional();
  for (std::size_t k = 0; k < exc.size(); ++k) {
    p.dD[exc[k].ray] += beta.exc[k];
    p.dE[k] = -beta.exc[k];
  }
  return p;
}

bool is_toric_profile(const Fan& fan, const std::vector<Int>& t) {
  if (t.size() != fan.size()) return false;
  Vec2 s{0, 0};
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * fan.ray(static_cast<std::ptrdiff_t>(i));
  return s.is_zero();
}

CurveClass toric_class_from_intersections(const ToricModel& model, const std::vector<Int>& t) {
  const std::size_t m = model.num_rays();
  if (t.size() != m) throw Error(ErrorCode::LengthMismatch, "profile length");
  const IntMatrix mat = toric_intersection_matrix(model.fan());
  const std::size_t n = m - 2;
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  std::vector<Rational> b(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r][c] = mat[r + 2][c + 2];
    b[r] = t[r + 2];
  }
  auto x = solve(std::move(a), std::move(b));
  if (!x) throw Error(ErrorCode::NonRepresentable, "degenerate toric pairing");
  CurveClass c = zero_class(model);
  for (std::size_t i = 0; i < n; ++i) {
    if ((*x)[i].denominator() != 1) throw Error(ErrorCode::NonRepresentable, "profile has no integral class");
    c.toric[i + 2] = (*x)[i].numerator();
  }
  if (toric_intersections(model, c) != t)
    throw Error(ErrorCode::NonRepresentable, "profile is not balanced: sum of t_i u_i is nonzero");
  return c;
}

CurveClass class_from_profile(const ToricModel& model, const IntersectionProfile& profile) {
  if (profile.dD.size() != model.num_rays() || profile.dE.size() != model.num_exceptional())
    throw Error(ErrorCode::LengthMismatch, "profile does not match model");
  std::vector<Int> t = profile.dD;
  const auto& exc = model.exceptional();
  for (std::size_t k = 0; k < exc.size(); ++k) t[exc[k].ray] += profile.dE[k];
  CurveClass c = toric_class_from_intersections(model, t);
  for (std::size_t k = 0; k < exc.size(); ++k) c.exc[k] = -profile.dE[k];
  return c;
}

IntersectionProfile zero_profile(const ToricModel& model) {
  return {std::vector<Int>(model.num_rays(), 0), std::vector<Int>(model.num_exceptional(), 0)};
}

IntersectionProfile exceptional_indicator(const ToricModel& model, const ExcIndex& e) {
  IntersectionProfile p = zero_profile(model);
  p.dE[model.exceptional_position(e)] = 1;
  return p;
}

std::vector<Int> compatibility_intersections(const ToricModel& model,
                                             const std::vector<std::pair<std::size_t, Int>>& legs) {
  std::vector<Int> t(model.num_rays(), 0);
  for (const auto& [ray, mult] : legs) {
    if (ray >= model.num_rays()) throw Error(ErrorCode::RayIndexOutOfRange, "leg ray index");
    if (mult < 0) throw Error(ErrorCode::NegativeMultiplicity, "leg multiplicity");
    t[ray] += mult;
  }
  return t;
}

CurveClass translate_class(const ToricModel& model, const ModelRefinement& refined, const CurveClass& beta) {
  check_shape(model, beta);
  const Fan& old_fan = model.fan();
  const ToricModel& nm = refined.model;
  std::vector<Int> coeffs(nm.num_rays(), 0);
  for (std::size_t r = 0; r < nm.num_rays(); ++r) {
    if (refined.origin[r]) {
      coeffs[r] = beta.toric[*refined.origin[r]];
      continue;
    }
    const ConeCoordinates cc = cone_coordinates(old_fan, nm.fan().ray(static_cast<std::ptrdiff_t>(r)));
    coeffs[r] = cc.a * beta.toric[cc.cone] + cc.b * beta.toric[old_fan.next(cc.cone)];
  }
  CurveClass out = toric_class(nm, std::move(coeffs));
  const auto& exc = model.exceptional();
  for (std::size_t r = 0; r < nm.num_rays(); ++r) {
    if (!refined.origin[r]) continue;
    for (std::size_t k = 0; k < exc.size(); ++k)
      if (exc[k].ray == *refined.origin[r])
        out.exc[nm.exceptional_position({r, exc[k].component})] = beta.exc[k];
  }
  return out;
}

std::string describe(const ToricModel& model, const CurveClass& beta) {
  check_shape(model, beta);
  std::ostringstream os;
  os << "pi*(";
  bool first = true;
  for (std::size_t i = 0; i < beta.toric.size(); ++i) {
    if (beta.toric[i] == 0) continue;
    os << (first ? "" : " + ") << beta.toric[i] << " D" << i + 1;
    first = false;
  }
  if (first) os << "0";
  os << ")";
  const auto& exc = model.exceptional();
  for (std::size_t k = 0; k < exc.size(); ++k) {
    if (beta.exc[k] == 0) continue;
    os << (beta.exc[k] < 0 ? " - " : " + ");
    Int c = beta.exc[k] < 0 ? -beta.exc[k] : beta.exc[k];
    if (c != 1) os << c << " ";
    os << "E" << exc[k].ray + 1 << "," << exc[k].component + 1;
  }
  return os.str();
}

std::string describe(const ToricModel& model, const IntersectionProfile& profile) {
  std::ostringstream os;
  os << "D:[";
  for (std::size_t i = 0; i < profile.dD.size(); ++i) os << (i ? "," : "") << profile.dD[i];
  os << "] E:{";
  const auto& exc = model.exceptional();
  bool first = true;
  for (std::size_t k = 0; k < exc.size() && k < profile.dE.size(); ++k) {
    if (profile.dE[k] == 0) continue;
    os << (first ? "" : ",") << exc[k].ray + 1 << "," << exc[k].component + 1 << ":" << profile.dE[k];
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace tropcyl
