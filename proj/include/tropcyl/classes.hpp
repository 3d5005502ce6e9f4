#pragma once

// Curve classes on the blown-up surface, N_1(Y) = N_1(Y_t) + Z^E.
//
// The toric part is a divisor class sum a_i [D_{t,i}] reduced modulo the
// principal divisors div(chi^e) = sum <e, u_i> D_{t,i}. The normal form makes
// the first two coefficients zero, which is always possible because u_0, u_1
// is a lattice basis; equality of classes is then equality of vectors.

#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tropcyl/lattice.hpp"
#include "tropcyl/model.hpp"

namespace tropcyl {

using IntMatrix = std::vector<std::vector<Int>>;

struct CurveClass {
  std::vector<Int> toric;  // canonical divisor-class coefficients, length m
  std::vector<Int> exc;    // coefficient of [E_ij], aligned with model.exceptional()

  bool operator==(const CurveClass&) const = default;
  bool operator<(const CurveClass& o) const {
    return std::tie(toric, exc) < std::tie(o.toric, o.exc);
  }
  CurveClass operator+(const CurveClass& o) const;
  CurveClass operator-(const CurveClass& o) const;
  CurveClass operator-() const;
  bool is_zero() const;
};

// beta . D_i for every boundary divisor and beta . E_ij for every exceptional curve.
struct IntersectionProfile {
  std::vector<Int> dD;
  std::vector<Int> dE;

  bool operator==(const IntersectionProfile&) const = default;
  bool operator<(const IntersectionProfile& o) const { return std::tie(dD, dE) < std::tie(o.dD, o.dE); }
  IntersectionProfile operator+(const IntersectionProfile& o) const;
  IntersectionProfile operator-(const IntersectionProfile& o) const;
};

std::vector<Int> canonical_toric(const Fan& fan, std::vector<Int> coeffs);

CurveClass zero_class(const ToricModel& model);
// pi^* of sum_i coeffs[i] [D_{t,i}].
CurveClass toric_class(const ToricModel& model, std::vector<Int> coeffs);
CurveClass exceptional_class(const ToricModel& model, const ExcIndex& e, Int coeff = 1);
CurveClass scale(Int k, const CurveClass& c);

IntMatrix toric_intersection_matrix(const Fan& fan);

IntersectionProfile intersect(const ToricModel& model, const CurveClass& beta);
CurveClass class_from_profile(const ToricModel& model, const IntersectionProfile& profile);
// Toric class gamma with gamma . D_{t,i} = t[i]; throws NonRepresentable.
CurveClass toric_class_from_intersections(const ToricModel& model, const std::vector<Int>& t);
// gamma . D_{t,i} for the toric part only.
std::vector<Int> toric_intersections(const ToricModel& model, const CurveClass& beta);
// An integral vector t lies in the image of the toric pairing iff sum t_i u_i = 0.
bool is_toric_profile(const Fan& fan, const std::vector<Int>& t);

IntersectionProfile zero_profile(const ToricModel& model);
IntersectionProfile exceptional_indicator(const ToricModel& model, const ExcIndex& e);

// Boundary legs given as (ray index, multiplicity).
std::vector<Int> compatibility_intersections(const ToricModel& model,
                                             const std::vector<std::pair<std::size_t, Int>>& legs);

// pi^* along a toric blowup: carries a class of `model` to `refined.model`.
CurveClass translate_class(const ToricModel& model, const ModelRefinement& refined, const CurveClass& beta);

std::string describe(const ToricModel& model, const CurveClass& beta);
std::string describe(const ToricModel& model, const IntersectionProfile& profile);

}  // namespace tropcyl
