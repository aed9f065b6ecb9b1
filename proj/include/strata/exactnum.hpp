#pragma once

// Exact integer/rational kernel for angle definitions, comparisons and sign
// tests of alpha_Q(theta) = q'(1 - 3 cos^2 theta) - q sqrt(6) cos theta.
// Every decision reduces to integer determinants and signs of a + b*sqrt(6);
// no algebraic-number tower is built.

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace strata {

using Int = mpz_class;
using Rat = mpq_class;

enum class Sign { Negative = -1, Zero = 0, Positive = 1 };

inline int sign_int(const Int& x) { return sgn(x); }
inline Sign sign_of(const Int& x) { return static_cast<Sign>(sgn(x)); }
inline Sign sign_of(const Rat& x) { return static_cast<Sign>(sgn(x)); }
inline Sign negate(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }

inline std::string to_string(const Int& x) { return x.get_str(); }
inline std::string to_string(const Rat& x) {
  Rat c(x);
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

struct IntPair {
  Int p{0}, pp{0};  // (p, p')

  IntPair() = default;
  IntPair(Int a, Int b) : p(std::move(a)), pp(std::move(b)) {}
  IntPair(long a, long b) : p(a), pp(b) {}

  bool is_zero() const { return p == 0 && pp == 0; }
  IntPair operator-() const { return {-p, -pp}; }
  IntPair operator+(const IntPair& o) const { return {p + o.p, pp + o.pp}; }
  IntPair operator-(const IntPair& o) const { return {p - o.p, pp - o.pp}; }
  IntPair operator*(const Int& k) const { return {p * k, pp * k}; }
  bool operator==(const IntPair& o) const { return p == o.p && pp == o.pp; }
  bool operator!=(const IntPair& o) const = default;
  // lexicographic; used only for deterministic ordering of containers
  bool operator<(const IntPair& o) const {
    if (p != o.p) return p < o.p;
    return pp < o.pp;
  }
};

// det(P, Q) = p' q - p q'
inline Int det(const IntPair& P, const IntPair& Q) { return P.pp * Q.p - P.p * Q.pp; }

// Largest d > 0 dividing both entries; gcd(0,0) has no meaning here.
inline Int content(const IntPair& P) {
  Int g;
  mpz_gcd(g.get_mpz_t(), P.p.get_mpz_t(), P.pp.get_mpz_t());
  return g;
}

// Divide out the content, preserving direction.
inline IntPair primitive(const IntPair& P) {
  if (P.is_zero()) throw std::invalid_argument("primitive: zero pair");
  Int g = content(P);
  return {P.p / g, P.pp / g};
}

inline std::string to_string(const IntPair& P) {
  return "(" + P.p.get_str() + "," + P.pp.get_str() + ")";
}

// (p, p') defines an angle in (0, pi) iff p >= 0, or p < 0 and 2p'^2 > 3p^2.
inline bool defines_angle(const IntPair& P) {
  if (P.is_zero()) throw std::invalid_argument("undefined angle source: zero pair");
  if (P.p >= 0) return true;
  return 2 * P.pp * P.pp > 3 * P.p * P.p;
}

enum class HalfPlane { BelowEquator = 0, Equator = 1, AboveEquator = 2 };

// cos(theta_P) and p' share sign, so the hemisphere is read off p'.
inline HalfPlane half_plane(const IntPair& P) {
  if (!defines_angle(P)) throw std::invalid_argument("half_plane: pair defines no angle");
  int s = sign_int(P.pp);
  if (s > 0) return HalfPlane::BelowEquator;
  if (s == 0) return HalfPlane::Equator;
  return HalfPlane::AboveEquator;
}

// a + b*sqrt(6) with rational a, b.
struct QuadInt {
  Rat a{0}, b{0};
  QuadInt() = default;
  QuadInt(Rat a_, Rat b_) : a(std::move(a_)), b(std::move(b_)) {}
  QuadInt(const Int& a_, const Int& b_) : a(a_), b(b_) {}
  bool operator==(const QuadInt& o) const { return a == o.a && b == o.b; }
};

inline Sign sign_quadint(const QuadInt& x) {
  int sa = sgn(x.a), sb = sgn(x.b);
  if (sa == 0 && sb == 0) return Sign::Zero;
  if (sa >= 0 && sb >= 0) return Sign::Positive;
  if (sa <= 0 && sb <= 0) return Sign::Negative;
  // mixed signs: compare a^2 with 6 b^2 (sqrt(6) irrational so never ties)
  Rat lhs = x.a * x.a, rhs = 6 * x.b * x.b;
  if (sa > 0) return lhs > rhs ? Sign::Positive : Sign::Negative;  // b < 0
  return lhs < rhs ? Sign::Positive : Sign::Negative;              // a < 0, b > 0
}

struct AngleSpec {
  enum class Kind { Zero = 0, Interior = 1, Pi = 2 };
  Kind kind{Kind::Zero};
  IntPair pair;  // meaningful only for Interior

  static AngleSpec zero() { return AngleSpec{Kind::Zero, {}}; }
  static AngleSpec pi() { return AngleSpec{Kind::Pi, {}}; }
  static AngleSpec interior(IntPair P) {
    if (!defines_angle(P)) throw std::invalid_argument("AngleSpec: pair defines no angle");
    return AngleSpec{Kind::Interior, std::move(P)};
  }
  bool is_interior() const { return kind == Kind::Interior; }
};

inline std::string to_string(const AngleSpec& a) {
  switch (a.kind) {
    case AngleSpec::Kind::Zero: return "zero";
    case AngleSpec::Kind::Pi: return "pi";
    default: return to_string(a.pair);
  }
}

// Sign of alpha_P at the given angle, computed exactly.
inline Sign sign_alpha_at(const IntPair& P, const AngleSpec& at) {
  if (P.is_zero()) throw std::invalid_argument("sign_alpha_at: zero pair");
  switch (at.kind) {
    case AngleSpec::Kind::Zero:
      return sign_quadint(QuadInt(Int(-2 * P.pp), Int(-P.p)));
    case AngleSpec::Kind::Pi:
      return sign_quadint(QuadInt(Int(-2 * P.pp), Int(P.p)));
    default: {
      const IntPair& Q = at.pair;
      if (Q.pp != 0) return sign_of(det(P, Q));  // sign(p'q - pq')
      return sign_of(P.pp);                      // theta = pi/2
    }
  }
}

enum class Cmp { Less = -1, Equal = 0, Greater = 1 };

inline Cmp cmp_angle(const AngleSpec& a, const AngleSpec& b) {
  int ka = static_cast<int>(a.kind), kb = static_cast<int>(b.kind);
  if (a.kind != AngleSpec::Kind::Interior || b.kind != AngleSpec::Kind::Interior) {
    if (ka < kb) return Cmp::Less;
    if (ka > kb) return Cmp::Greater;
    return Cmp::Equal;
  }
  HalfPlane ha = half_plane(a.pair), hb = half_plane(b.pair);
  if (ha != hb) return static_cast<int>(ha) < static_cast<int>(hb) ? Cmp::Less : Cmp::Greater;
  // same hemisphere: theta_P > theta_Q iff p'q - pq' < 0
  int d = sign_int(det(a.pair, b.pair));
  if (d < 0) return Cmp::Greater;
  if (d > 0) return Cmp::Less;
  return Cmp::Equal;
}

inline bool angle_eq(const AngleSpec& a, const AngleSpec& b) { return cmp_angle(a, b) == Cmp::Equal; }
inline bool angle_lt(const AngleSpec& a, const AngleSpec& b) { return cmp_angle(a, b) == Cmp::Less; }

// Numeric angle via the quadratic solution of p'(1-3c^2) - p sqrt(6) c = 0 with
// p' c >= 0; stable form chosen to avoid cancellation.
inline double angle_float(const AngleSpec& a) {
  switch (a.kind) {
    case AngleSpec::Kind::Zero: return 0.0;
    case AngleSpec::Kind::Pi: return M_PI;
    default: break;
  }
  double p = a.pair.p.get_d(), pp = a.pair.pp.get_d();
  if (pp == 0.0) return M_PI / 2;
  double disc = std::sqrt(6.0 * p * p + 12.0 * pp * pp);
  double c;
  if (p <= 0) {
    c = (-std::sqrt(6.0) * p + disc) / (6.0 * pp);
  } else {
    // other root, then use root product c1*c2 = -1/3
    double c2 = (-std::sqrt(6.0) * p - disc) / (6.0 * pp);
    c = -1.0 / (3.0 * c2);
  }
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c);
}

inline double alpha_float(const IntPair& P, double theta) {
  double c = std::cos(theta);
  return P.pp.get_d() * (1.0 - 3.0 * c * c) - P.p.get_d() * std::sqrt(6.0) * c;
}

// alpha_N(theta)/alpha_D(theta) at theta = theta_at, as an exact rational.
inline Rat alpha_ratio(const IntPair& N, const IntPair& D, const IntPair& at) {
  if (!defines_angle(at)) throw std::invalid_argument("alpha_ratio: at defines no angle");
  Int num, den;
  if (at.pp != 0) {
    num = det(N, at);
    den = det(D, at);
  } else {
    num = N.pp;
    den = D.pp;
  }
  if (den == 0)
    throw std::domain_error("alpha_ratio: alpha_" + to_string(D) + " vanishes at " + to_string(at));
  Rat r(num, den);
  r.canonicalize();
  return r;
}

namespace detail {

// Interior angle strictly between lo and hi. Interior angles are parameterized
// per hemisphere by x = p/p' (below: x in (-sqrt(2/3), inf) increasing with
// theta... theta is increasing in x within each hemisphere).
inline IntPair below_pair(const Rat& x) {  // theta < pi/2, p/p' = x, p' > 0
  Rat c(x);
  c.canonicalize();
  return IntPair(c.get_num(), c.get_den());
}
inline IntPair above_pair(const Rat& x) {  // theta > pi/2, p' < 0
  Rat c(x);
  c.canonicalize();
  return IntPair(Int(-c.get_num()), Int(-c.get_den()));
}
inline Rat x_of(const IntPair& P) {
  Rat r(P.p, P.pp);  // requires p' != 0
  r.canonicalize();
  return r;
}

// Largest a >= 0 with 3a^2 < 2b^2 (b > 0): floor of b*sqrt(2/3) adjusted.
inline Int near_limit_coeff(const Int& b) {
  Int t = (2 * b * b) / 3;
  Int a;
  mpz_sqrt(a.get_mpz_t(), t.get_mpz_t());
  while (3 * a * a >= 2 * b * b) --a;
  if (a < 0) a = 0;
  return a;
}

}  // namespace detail

// Some interior angle strictly inside (lo, hi); lo < hi required.
inline AngleSpec angle_between(const AngleSpec& lo, const AngleSpec& hi) {
  if (cmp_angle(lo, hi) != Cmp::Less) throw std::invalid_argument("angle_between: degenerate interval");
  using K = AngleSpec::Kind;
  const AngleSpec equator = AngleSpec::interior(IntPair(1, 0));
  // both endpoints interior and in the same hemisphere: midpoint in x
  if (lo.kind == K::Interior && hi.kind == K::Interior) {
    HalfPlane hl = half_plane(lo.pair), hh = half_plane(hi.pair);
    if (hl == hh && hl != HalfPlane::Equator) {
      Rat mid = (detail::x_of(lo.pair) + detail::x_of(hi.pair)) / 2;
      return AngleSpec::interior(hl == HalfPlane::BelowEquator ? detail::below_pair(mid)
                                                               : detail::above_pair(mid));
    }
    if (hl == HalfPlane::BelowEquator && hh == HalfPlane::AboveEquator) return equator;
    if (hl == HalfPlane::Equator)  // hi above
      return AngleSpec::interior(detail::above_pair(detail::x_of(hi.pair) - 1));
    // hh == Equator, lo below
    return AngleSpec::interior(detail::below_pair(detail::x_of(lo.pair) + 1));
  }
  if (lo.kind == K::Zero && hi.kind == K::Pi) return equator;
  if (lo.kind == K::Zero) {
    if (!angle_lt(equator, hi)) {
      // need an angle approaching 0: pairs (-a, b), a -> b*sqrt(2/3) from below
      for (Int b = 1;; b *= 2) {
        IntPair cand(Int(-detail::near_limit_coeff(b)), b);
        if (cand.p == 0) continue;
        AngleSpec c = AngleSpec::interior(cand);
        if (angle_lt(c, hi)) return c;
      }
    }
    return equator;
  }
  // hi == Pi
  if (!angle_lt(lo, equator)) {
    for (Int b = 1;; b *= 2) {
      IntPair cand(Int(-detail::near_limit_coeff(b)), Int(-b));
      if (cand.p == 0) continue;
      AngleSpec c = AngleSpec::interior(cand);
      if (angle_lt(lo, c)) return c;
    }
  }
  return equator;
}

struct AlphaOnInterval {
  enum class Kind { PositiveThroughout, ZeroAtLo, ZeroAtHi, Fails };
  Kind kind{Kind::PositiveThroughout};
  std::optional<AngleSpec> witness;  // set when kind == Fails

  bool positive_interior() const { return kind != Kind::Fails; }
};

// Decide whether alpha_Q > 0 on the open interval (lo, hi). The roots of
// alpha_Q in (0, pi) are exactly theta_Q (when Q defines an angle; increasing
// crossing) and theta_{-Q} (decreasing crossing); alpha_Q is nonzero at 0 and
// pi for integer pairs. Sign flips across each root.
inline AlphaOnInterval alpha_positive_on(const IntPair& Q, const AngleSpec& lo, const AngleSpec& hi) {
  if (Q.is_zero()) throw std::invalid_argument("alpha_positive_on: zero pair");
  if (cmp_angle(lo, hi) != Cmp::Less) throw std::invalid_argument("alpha_positive_on: degenerate interval");
  AngleSpec roots[2];
  int nroots = 0;
  if (defines_angle(Q)) roots[nroots++] = AngleSpec::interior(Q);
  if (defines_angle(-Q)) {
    AngleSpec r = AngleSpec::interior(-Q);
    // keep sorted
    if (nroots == 1 && angle_lt(r, roots[0])) { roots[1] = roots[0]; roots[0] = r; nroots = 2; }
    else roots[nroots++] = r;
  }
  // a root strictly inside the interval is an immediate failure witness
  for (int i = 0; i < nroots; ++i)
    if (angle_lt(lo, roots[i]) && angle_lt(roots[i], hi))
      return {AlphaOnInterval::Kind::Fails, roots[i]};
  // sign on the interval interior: sign at theta=0 flipped once per root <= lo
  Sign s0 = sign_alpha_at(Q, AngleSpec::zero());
  int flips = 0;
  for (int i = 0; i < nroots; ++i)
    if (!angle_lt(lo, roots[i])) ++flips;  // root <= lo
  Sign inside = (flips % 2 == 0) ? s0 : negate(s0);
  if (inside == Sign::Positive) {
    bool zlo = lo.is_interior() && sign_alpha_at(Q, lo) == Sign::Zero;
    bool zhi = hi.is_interior() && sign_alpha_at(Q, hi) == Sign::Zero;
    if (zlo) return {AlphaOnInterval::Kind::ZeroAtLo, std::nullopt};
    if (zhi) return {AlphaOnInterval::Kind::ZeroAtHi, std::nullopt};
    return {AlphaOnInterval::Kind::PositiveThroughout, std::nullopt};
  }
  return {AlphaOnInterval::Kind::Fails, angle_between(lo, hi)};
}

}  // namespace strata
