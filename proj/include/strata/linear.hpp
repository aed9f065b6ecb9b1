#pragma once

// The linear graph T^A of an asymptotic data set and its existence test.

#include "asymptotic.hpp"
#include "graph.hpp"

#include <string>
#include <variant>
#include <vector>

namespace strata {

struct CylinderCase {
  AngleSpec angle;
};

struct LinearGraphError {
  std::string reason;
};

using LinearGraphResult = std::variant<DecoratedGraph, CylinderCase, LinearGraphError>;

// Build the linear graph: one vertex per Lambda angle, edges between
// consecutive angles, pairs assigned by induction from the bottom rule.
inline LinearGraphResult linear_graph(const AsymptoticData& A) {
  LambdaSet L = lambda_set(A);
  if (L.empty()) return LinearGraphError{"empty angle set"};
  if (L.size() == 1) return CylinderCase{L[0].angle};

  long n_one = 0, n_minus_one = 0;
  for (const FourTuple& t : A.tuples) {
    if (t.delta == 1) ++n_one;
    if (t.delta == -1) ++n_minus_one;
  }
  // uniqueness of the extremal-angle supplier
  if (L.front().angle.kind == AngleSpec::Kind::Zero) {
    if (A.c_plus > 0 && n_one > 0)
      return LinearGraphError{"non-unique supplier at angle 0 (c_plus > 0 and a (1,...) tuple)"};
    if (n_one > 1) return LinearGraphError{"non-unique supplier at angle 0 (several (1,...) tuples)"};
  } else {
    long minus_here = 0;
    for (std::size_t i : L.front().tuple_indices)
      if (A.tuples[i].eps < 0) ++minus_here;
    if (minus_here != 1)
      return LinearGraphError{"minimal interior angle needs exactly one (0,-,...) supplier"};
  }
  if (L.back().angle.kind == AngleSpec::Kind::Pi) {
    if (A.c_minus > 0 && n_minus_one > 0)
      return LinearGraphError{"non-unique supplier at angle pi (c_minus > 0 and a (-1,...) tuple)"};
    if (n_minus_one > 1)
      return LinearGraphError{"non-unique supplier at angle pi (several (-1,...) tuples)"};
  } else {
    long minus_here = 0;
    for (std::size_t i : L.back().tuple_indices)
      if (A.tuples[i].eps < 0) ++minus_here;
    if (minus_here != 1)
      return LinearGraphError{"maximal interior angle needs exactly one (0,-,...) supplier"};
  }

  DecoratedGraph T;
  for (std::size_t i = 0; i < L.size(); ++i) {
    TreeVertex V;
    V.angle = L[i].angle;
    bool extremal = (i == 0 || i + 1 == L.size());
    if (V.angle.kind == AngleSpec::Kind::Zero) {
      if (A.c_plus > 0) {
        V.label.kind = VertexLabel::Kind::ZeroInt;
        V.label.m = A.c_plus;
      } else {
        V.label.kind = VertexLabel::Kind::ZeroEnd;
        for (const FourTuple& t : A.tuples)
          if (t.delta == 1) V.label.end = t;
      }
    } else if (V.angle.kind == AngleSpec::Kind::Pi) {
      if (A.c_minus > 0) {
        V.label.kind = VertexLabel::Kind::PiInt;
        V.label.m = -A.c_minus;
      } else {
        V.label.kind = VertexLabel::Kind::PiEnd;
        for (const FourTuple& t : A.tuples)
          if (t.delta == -1) V.label.end = t;
      }
    } else {
      V.label.kind = VertexLabel::Kind::Interior;
      for (std::size_t ti : L[i].tuple_indices) V.label.tuples.push_back(A.tuples[ti]);
      if (!extremal) {
        // bivalent vertex: circular level-set graph, one vertex per tuple
        VertexGraph& g = V.label.gamma;
        int k = static_cast<int>(V.label.tuples.size());
        int elow = static_cast<int>(i) - 1, eup = static_cast<int>(i);
        if (k == 0) return LinearGraphError{"interior non-extremal angle without tuples"};
        for (const FourTuple& t : V.label.tuples)
          g.vertices.push_back({Int(t.eps) * content(t.pair)});
        std::vector<int> cyc;
        for (int a = 0; a < k; ++a) {
          g.arcs.push_back({a, (a + 1) % k, elow, eup});
          cyc.push_back(a);
        }
        g.loops[elow] = cyc;
        g.loops[eup] = cyc;
      }
    }
    T.vertices.push_back(std::move(V));
  }
  // edge pairs by ascending induction; edge i joins vertices i and i+1
  IntPair q;
  for (std::size_t i = 0; i + 1 < L.size(); ++i) {
    if (i == 0) {
      IntPair P = vertex_pair(T, 0);
      bool plus;
      switch (T.vertices[0].label.kind) {
        case VertexLabel::Kind::ZeroInt: plus = true; break;
        case VertexLabel::Kind::ZeroEnd: plus = T.vertices[0].label.end.eps < 0; break;
        default: plus = false; break;  // interior vertex at the lesser angle
      }
      q = plus ? P : -P;
    } else {
      q = q - vertex_pair(T, static_cast<int>(i));
    }
    T.edges.push_back({static_cast<int>(i), static_cast<int>(i + 1), q});
  }
  // the top monovalent rule must close the induction
  {
    int top = static_cast<int>(L.size()) - 1;
    IntPair P = vertex_pair(T, top);
    bool plus;
    switch (T.vertices[top].label.kind) {
      case VertexLabel::Kind::PiInt: plus = false; break;
      case VertexLabel::Kind::PiEnd: plus = T.vertices[top].label.end.eps > 0; break;
      default: plus = true; break;  // interior vertex at the greater angle
    }
    IntPair want = plus ? P : -P;
    if (T.edges.back().q != want)
      return LinearGraphError{"edge induction does not close at the top vertex"};
  }
  return T;
}

struct LinearExistsResult {
  bool nonempty{true};
  bool cylinder{false};
  int edge{-1};
  std::optional<AngleSpec> witness;
  std::vector<std::string> edge_report;
  std::vector<std::string> alerts;  // internal-consistency alerts vs the determinant test
};

namespace detail {

// the explicit determinant tests of the linear existence condition
inline bool determinant_test(const DecoratedGraph& T) {
  for (const TreeEdge& e : T.edges) {
    for (int v : {e.a, e.b}) {
      if (!T.vertices[v].angle.is_interior() || T.degree(v) < 2) continue;
      IntPair P = angle_primitive(T, v);
      // p q' - p' q > 0
      if (!(P.p * e.q.pp - P.pp * e.q.p > 0)) return false;
    }
    if (e.q.pp < 0) {
      const AngleSpec &aa = T.vertices[e.a].angle, &ab = T.vertices[e.b].angle;
      if (aa.is_interior() && ab.is_interior()) {
        IntPair Pa = angle_primitive(T, e.a), Pb = angle_primitive(T, e.b);
        bool one_pos = Pa.pp > 0 || Pb.pp > 0;
        if (one_pos && !(Pa.pp > 0 && Pb.pp > 0)) return false;
      }
    }
  }
  return true;
}

}  // namespace detail

inline LinearExistsResult check_linear_exists(const AsymptoticData& A) {
  LinearGraphResult R = linear_graph(A);
  if (std::holds_alternative<CylinderCase>(R)) return {true, true, -1, {}, {}, {}};
  if (auto* err = std::get_if<LinearGraphError>(&R))
    return {false, false, -1, {}, {"linear graph construction failed: " + err->reason}, {}};
  const DecoratedGraph& T = std::get<DecoratedGraph>(R);
  LinearExistsResult out;
  ExistsResult ex = check_exists(T);
  out.nonempty = ex.nonempty;
  out.edge = ex.edge;
  out.witness = ex.witness;
  for (std::size_t i = 0; i < T.edges.size(); ++i) {
    const TreeEdge& e = T.edges[i];
    auto res = alpha_positive_on(e.q, T.vertices[e.a].angle, T.vertices[e.b].angle);
    std::string s = "e" + std::to_string(i) + " = " + to_string(e.q) + ": ";
    switch (res.kind) {
      case AlphaOnInterval::Kind::PositiveThroughout: s += "alpha positive throughout"; break;
      case AlphaOnInterval::Kind::ZeroAtLo: s += "alpha positive, zero at lower endpoint"; break;
      case AlphaOnInterval::Kind::ZeroAtHi: s += "alpha positive, zero at upper endpoint"; break;
      case AlphaOnInterval::Kind::Fails:
        s += "alpha fails near " + to_string(*res.witness);
        break;
    }
    out.edge_report.push_back(std::move(s));
  }
  if (detail::determinant_test(T) != out.nonempty)
    out.alerts.push_back("determinant test disagrees with the alpha criterion");
  return out;
}

}  // namespace strata
