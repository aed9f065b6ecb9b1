#pragma once

// Asymptotic data sets: the pair (c_minus, c_plus) plus a multiset of
// 4-tuples (delta, eps, (p,p')), their validation, the angle set Lambda,
// and the moduli dimension formula.

#include "exactnum.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace strata {

struct FourTuple {
  int delta{0};  // -1, 0, +1
  int eps{1};    // +1 or -1
  IntPair pair;

  bool operator==(const FourTuple&) const = default;
};

inline std::string to_string(const FourTuple& t) {
  return std::string("(") + std::to_string(t.delta) + "," + (t.eps > 0 ? "+" : "-") + "," +
         to_string(t.pair) + ")";
}

struct AsymptoticData {
  long c_minus{0}, c_plus{0};
  std::vector<FourTuple> tuples;  // indexed carriers; identical tuples stay distinct

  long N_plus() const {
    return std::count_if(tuples.begin(), tuples.end(),
                         [](const FourTuple& t) { return t.delta == 0 && t.eps > 0; });
  }
  long N_minus() const {
    return std::count_if(tuples.begin(), tuples.end(),
                         [](const FourTuple& t) { return t.delta == 0 && t.eps < 0; });
  }
  long N_hat() const {
    return std::count_if(tuples.begin(), tuples.end(),
                         [](const FourTuple& t) { return t.delta != 0; });
  }
};

struct Violation {
  std::string constraint;
  std::string detail;
  std::optional<std::size_t> tuple_index;
};

struct Report {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

struct LambdaEntry {
  AngleSpec angle;
  bool from_c_plus{false}, from_c_minus{false};
  std::vector<std::size_t> tuple_indices;
};

using LambdaSet = std::vector<LambdaEntry>;

// Per-tuple constraints: pair nonzero; delta=0 with p<0 needs an angle;
// delta=+-1 needs p<0 with eps recording which side of -+sqrt(3/2) the
// slope p'/p falls on (as integer inequalities).
inline std::optional<std::string> tuple_violation(const FourTuple& t) {
  const IntPair& P = t.pair;
  if (P.is_zero()) return "integer pair is (0,0)";
  if (t.eps != 1 && t.eps != -1) return "eps must be +1 or -1";
  if (t.delta == 0) {
    if (P.p < 0 && !(2 * P.pp * P.pp > 3 * P.p * P.p))
      return "(0,...) pair with p<0 defines no angle";
    return std::nullopt;
  }
  if (t.delta != 1 && t.delta != -1) return "delta must be -1, 0 or +1";
  if (P.p >= 0) return "(+-1,...) tuple requires p < 0";
  bool steep = 2 * P.pp * P.pp > 3 * P.p * P.p;  // |p'/p| > sqrt(3/2)
  if (t.delta == 1) {
    bool cond = steep && P.pp > 0;  // p'/p < -sqrt(3/2)
    if (t.eps > 0 && !cond) return "(1,+,...) requires p'/p < -sqrt(3/2)";
    if (t.eps < 0 && cond) return "(1,-,...) requires p'/p > -sqrt(3/2)";
  } else {
    bool cond = steep && P.pp < 0;  // p'/p > sqrt(3/2)
    if (t.eps > 0 && !cond) return "(-1,+,...) requires p'/p > sqrt(3/2)";
    if (t.eps < 0 && cond) return "(-1,-,...) requires p'/p < sqrt(3/2)";
  }
  return std::nullopt;
}

// Sorted distinct angles with source tags; tolerates tuples that fail the
// per-tuple constraints only in ways that do not block angle extraction.
inline LambdaSet lambda_set(const AsymptoticData& A) {
  LambdaSet out;
  auto add = [&out](const AngleSpec& a) -> LambdaEntry& {
    for (auto& e : out)
      if (angle_eq(e.angle, a)) return e;
    auto it = std::lower_bound(out.begin(), out.end(), a, [](const LambdaEntry& e, const AngleSpec& x) {
      return angle_lt(e.angle, x);
    });
    return *out.insert(it, LambdaEntry{a, false, false, {}});
  };
  if (A.c_plus > 0) add(AngleSpec::zero()).from_c_plus = true;
  if (A.c_minus > 0) add(AngleSpec::pi()).from_c_minus = true;
  for (std::size_t i = 0; i < A.tuples.size(); ++i) {
    const FourTuple& t = A.tuples[i];
    if (t.pair.is_zero()) continue;
    if (t.delta == 1) add(AngleSpec::zero()).tuple_indices.push_back(i);
    else if (t.delta == -1) add(AngleSpec::pi()).tuple_indices.push_back(i);
    else if (defines_angle(t.pair)) add(AngleSpec::interior(t.pair)).tuple_indices.push_back(i);
  }
  return out;
}

inline Report validate_data(const AsymptoticData& A) {
  Report rep;
  auto flag = [&rep](std::string c, std::string d, std::optional<std::size_t> i = std::nullopt) {
    rep.violations.push_back({std::move(c), std::move(d), i});
  };
  if (A.c_plus < 0 || A.c_minus < 0) flag("counts", "c_plus and c_minus must be non-negative");
  for (std::size_t i = 0; i < A.tuples.size(); ++i)
    if (auto v = tuple_violation(A.tuples[i])) flag("tuple", *v, i);

  Int sp = 0, spp = 0;
  for (const FourTuple& t : A.tuples) {
    sp += Int(t.eps) * t.pair.p;
    spp += Int(t.eps) * t.pair.pp;
  }
  if (sp != 0) flag("sum-p", "sum of eps*p is " + sp.get_str() + ", expected 0");
  if (spp + A.c_plus + A.c_minus != 0)
    flag("sum-p'", "sum of eps*p' + c_plus + c_minus is " +
                       Int(spp + A.c_plus + A.c_minus).get_str() + ", expected 0");

  if (A.tuples.size() == 2 && A.c_plus == 0 && A.c_minus == 0) {
    for (std::size_t i = 0; i < 2; ++i)
      if (!A.tuples[i].pair.is_zero() && content(A.tuples[i].pair) != 1)
        flag("primitivity", "two-tuple data requires relatively prime pairs", i);
  }

  // Lambda shape constraints
  LambdaSet L = lambda_set(A);
  if (L.empty()) {
    flag("lambda", "empty angle set");
    return rep;
  }
  // an extremal angle of a multi-angle Lambda may not be the angle of any
  // (0,+,...) element
  auto has_plus_source = [&A](const LambdaEntry& e) {
    if (!e.angle.is_interior()) return false;
    for (std::size_t i : e.tuple_indices) {
      const FourTuple& t = A.tuples[i];
      if (t.delta == 0 && t.eps > 0) return true;
    }
    return false;
  };
  if (L.size() == 1) {
    bool shape = L[0].angle.is_interior() && A.tuples.size() == 2 && A.c_plus == 0 &&
                 A.c_minus == 0 && A.tuples[0].delta == 0 && A.tuples[1].delta == 0 &&
                 A.tuples[0].eps * A.tuples[1].eps < 0 &&
                 A.tuples[0].pair == A.tuples[1].pair && content(A.tuples[0].pair) == 1;
    if (!shape)
      flag("lambda-singleton",
           "a single-angle data set must be {(0,+,P),(0,-,P)} with P primitive and interior");
  } else {
    if (has_plus_source(L.front()))
      flag("lambda-extremal", "minimal angle defined by a (0,+,...) tuple");
    if (has_plus_source(L.back()))
      flag("lambda-extremal", "maximal angle defined by a (0,+,...) tuple");
  }
  return rep;
}

inline long moduli_dimension(const AsymptoticData& A) {
  return A.N_plus() + 2 * (A.N_minus() + A.N_hat() + A.c_minus + A.c_plus - 1);
}

}  // namespace strata
