#pragma once

// Decorated graphs T: a tree with angle-labeled vertices, integer-pair-labeled
// edges, and per-multivalent-vertex level-set graphs Gamma_o with oriented,
// edge-pair-labeled arcs and explicit loops l_oe.

#include "asymptotic.hpp"
#include "exactnum.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace strata {

struct GammaVertex {
  Int m{0};  // integer label; 0 marks an interior critical point
};

struct GammaArc {
  int from{0}, to{0};  // Gamma-vertex indices
  int eminus{-1}, eplus{-1};  // labeling tree-edge ids (E_minus, E_plus of o)
};

struct VertexGraph {
  std::vector<GammaVertex> vertices;
  std::vector<GammaArc> arcs;
  std::map<int, std::vector<int>> loops;  // tree-edge id -> cyclic arc id sequence

  int valency(int v) const {
    int n = 0;
    for (const auto& a : arcs) n += (a.from == v) + (a.to == v);
    return n;
  }
  // position of arc a in the loop of edge e, or -1
  int loop_pos(int e, int a) const {
    auto it = loops.find(e);
    if (it == loops.end()) return -1;
    for (std::size_t i = 0; i < it->second.size(); ++i)
      if (it->second[i] == a) return static_cast<int>(i);
    return -1;
  }
  int next_in_loop(int e, int a) const {
    const auto& L = loops.at(e);
    int p = loop_pos(e, a);
    return L[(p + 1) % L.size()];
  }
  int prev_in_loop(int e, int a) const {
    const auto& L = loops.at(e);
    int p = loop_pos(e, a);
    return L[(p + L.size() - 1) % L.size()];
  }
};

struct VertexLabel {
  enum class Kind { ZeroInt, ZeroEnd, PiInt, PiEnd, Interior };
  Kind kind{Kind::Interior};
  Int m{0};                       // ZeroInt (m>0) / PiInt (m<0)
  FourTuple end;                  // ZeroEnd (delta=+1) / PiEnd (delta=-1)
  std::vector<FourTuple> tuples;  // Interior: the (0,.,.) elements housed here
  VertexGraph gamma;              // Interior multivalent; empty for monovalent
};

struct TreeVertex {
  AngleSpec angle;
  VertexLabel label;
};

struct TreeEdge {
  int a{0}, b{0};  // endpoint vertex ids (unordered; direction from angles)
  IntPair q;       // Q_e
};

struct DecoratedGraph {
  std::vector<TreeVertex> vertices;
  std::vector<TreeEdge> edges;

  std::vector<int> incident_edges(int v) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].a == v || edges[i].b == v) out.push_back(static_cast<int>(i));
    return out;
  }
  int other_end(int e, int v) const { return edges[e].a == v ? edges[e].b : edges[e].a; }
  int degree(int v) const { return static_cast<int>(incident_edges(v).size()); }
  bool edge_lower(int e, int v) const {  // e approaches v from below
    return angle_lt(vertices[other_end(e, v)].angle, vertices[v].angle);
  }
  // incident edges whose other endpoint sits at a smaller angle
  std::vector<int> e_minus(int v) const {
    std::vector<int> out;
    for (int e : incident_edges(v))
      if (edge_lower(e, v)) out.push_back(e);
    return out;
  }
  std::vector<int> e_plus(int v) const {
    std::vector<int> out;
    for (int e : incident_edges(v))
      if (!edge_lower(e, v)) out.push_back(e);
    return out;
  }
  bool is_multivalent(int v) const { return degree(v) >= 2; }
};

// --- small exact linear algebra -------------------------------------------

// rank over Q of an integer matrix (fraction-free Gaussian elimination)
inline int matrix_rank(std::vector<std::vector<Int>> M) {
  int rows = static_cast<int>(M.size());
  int cols = rows ? static_cast<int>(M[0].size()) : 0;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (M[r][c] != 0) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(M[rank], M[piv]);
    for (int r = rank + 1; r < rows; ++r) {
      if (M[r][c] == 0) continue;
      Int f = M[r][c], g = M[rank][c];
      for (int k = c; k < cols; ++k) M[r][k] = M[r][k] * g - M[rank][k] * f;
    }
    ++rank;
  }
  return rank;
}

// --- P_o -------------------------------------------------------------------

// The integer pair attached to a vertex by its label.
inline IntPair vertex_pair(const DecoratedGraph& T, int v) {
  const VertexLabel& L = T.vertices[v].label;
  switch (L.kind) {
    case VertexLabel::Kind::ZeroInt: return IntPair(Int(0), Int(-L.m));
    case VertexLabel::Kind::PiInt: return IntPair(Int(0), Int(-L.m));
    case VertexLabel::Kind::ZeroEnd: return L.end.pair;
    case VertexLabel::Kind::PiEnd: return L.end.pair;
    case VertexLabel::Kind::Interior: {
      IntPair s(Int(0), Int(0));
      for (const FourTuple& t : L.tuples) s = t.eps > 0 ? s + t.pair : s - t.pair;
      return s;
    }
  }
  return {};
}

// Primitive pair defining the interior angle of vertex v.
inline IntPair angle_primitive(const DecoratedGraph& T, int v) {
  return primitive(T.vertices[v].angle.pair);
}

// --- validation ------------------------------------------------------------

namespace detail {

inline void flag(Report& rep, std::string c, std::string d,
                 std::optional<std::size_t> idx = std::nullopt) {
  rep.violations.push_back({std::move(c), std::move(d), idx});
}

inline void validate_gamma(Report& rep, const DecoratedGraph& T, int v) {
  const VertexGraph& g = T.vertices[v].label.gamma;
  std::string at = "gamma@v" + std::to_string(v) + ": ";
  int deg = T.degree(v);
  int nV = static_cast<int>(g.vertices.size());
  int nA = static_cast<int>(g.arcs.size());
  if (nV == 0) {
    flag(rep, "gamma", at + "multivalent vertex without level-set graph");
    return;
  }
  for (const GammaArc& a : g.arcs)
    if (a.from < 0 || a.from >= nV || a.to < 0 || a.to >= nV) {
      flag(rep, "gamma", at + "arc endpoint out of range");
      return;
    }
  // connectivity (orientation ignored)
  {
    std::vector<int> comp(nV, -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (const GammaArc& a : g.arcs) {
        int y = -1;
        if (a.from == x) y = a.to;
        else if (a.to == x) y = a.from;
        if (y >= 0 && comp[y] < 0) { comp[y] = 0; stack.push_back(y); }
      }
    }
    for (int i = 0; i < nV; ++i)
      if (comp[i] < 0) flag(rep, "gamma", at + "not connected");
  }
  if (nA - nV + 1 != deg - 1)
    flag(rep, "gamma", at + "first Betti number " + std::to_string(nA - nV + 1) +
                           " != valency-1 = " + std::to_string(deg - 1));
  // vertex valencies: even, half in / half out; label 0 needs >= 4 half-arcs
  for (int i = 0; i < nV; ++i) {
    int in = 0, out = 0;
    for (const GammaArc& a : g.arcs) {
      if (a.to == i) ++in;
      if (a.from == i) ++out;
    }
    if (in != out)
      flag(rep, "gamma", at + "vertex " + std::to_string(i) + " has in-degree != out-degree");
    if (g.vertices[i].m == 0 && in + out < 4)
      flag(rep, "gamma", at + "zero-label vertex valency < 4");
  }
  // arc labels and loops
  std::vector<int> em = T.e_minus(v), ep = T.e_plus(v);
  auto in_set = [](const std::vector<int>& s, int x) {
    return std::find(s.begin(), s.end(), x) != s.end();
  };
  for (int i = 0; i < nA; ++i) {
    const GammaArc& a = g.arcs[i];
    if (!in_set(em, a.eminus))
      flag(rep, "gamma", at + "arc " + std::to_string(i) + " eminus label not a lower edge");
    if (!in_set(ep, a.eplus))
      flag(rep, "gamma", at + "arc " + std::to_string(i) + " eplus label not an upper edge");
  }
  std::vector<int> inc = T.incident_edges(v);
  if (g.loops.size() != inc.size()) flag(rep, "gamma", at + "loop map keys != incident edges");
  for (int e : inc) {
    auto it = g.loops.find(e);
    if (it == g.loops.end()) {
      flag(rep, "gamma", at + "missing loop for edge " + std::to_string(e));
      continue;
    }
    const std::vector<int>& L = it->second;
    std::set<int> seen;
    std::vector<int> expect;
    for (int i = 0; i < nA; ++i)
      if (g.arcs[i].eminus == e || g.arcs[i].eplus == e) expect.push_back(i);
    if (L.empty()) {
      flag(rep, "gamma", at + "empty loop for edge " + std::to_string(e));
      continue;
    }
    bool bad = false;
    for (std::size_t i = 0; i < L.size(); ++i) {
      int a = L[i], b = L[(i + 1) % L.size()];
      if (a < 0 || a >= nA || !seen.insert(a).second) { bad = true; break; }
      if (g.arcs[a].to != g.arcs[b].from) {
        flag(rep, "gamma", at + "loop of edge " + std::to_string(e) + " breaks head-to-tail");
        bad = true;
        break;
      }
    }
    if (bad) continue;
    std::vector<int> sorted(L.begin(), L.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted != expect)
      flag(rep, "gamma", at + "loop of edge " + std::to_string(e) +
                             " does not traverse exactly its labeled arcs");
  }
  // loop-class span: rank of the loop/arc incidence matrix must be b1
  {
    std::vector<std::vector<Int>> M;
    for (int e : inc) {
      auto it = g.loops.find(e);
      if (it == g.loops.end()) return;
      std::vector<Int> row(nA, 0);
      for (int a : it->second)
        if (a >= 0 && a < nA) row[a] = 1;
      M.push_back(std::move(row));
    }
    int b1 = nA - nV + 1;
    if (matrix_rank(M) != b1)
      flag(rep, "gamma", at + "loop classes do not span H1 with a single relation");
  }
  // consecutive-pair rule: two arcs consecutive in two different loops force a
  // bivalent shared vertex
  for (std::size_t i = 0; i < inc.size(); ++i)
    for (std::size_t j = i + 1; j < inc.size(); ++j) {
      auto i1 = g.loops.find(inc[i]), i2 = g.loops.find(inc[j]);
      if (i1 == g.loops.end() || i2 == g.loops.end()) continue;
      const auto &L1 = i1->second, &L2 = i2->second;
      for (std::size_t x = 0; x < L1.size(); ++x)
        for (std::size_t y = 0; y < L2.size(); ++y) {
          int a = L1[x], b = L1[(x + 1) % L1.size()];
          if (L1.size() == 1) continue;
          if (L2.size() == 1) continue;
          if (L2[y] == a && L2[(y + 1) % L2.size()] == b) {
            int shared = g.arcs[a].to;
            if (g.valency(shared) != 2)
              flag(rep, "gamma", at + "arcs consecutive in two loops at a non-bivalent vertex");
          }
        }
    }
}

}  // namespace detail

inline Report validate_graph(const DecoratedGraph& T) {
  Report rep;
  auto flag = [&rep](std::string c, std::string d) { detail::flag(rep, std::move(c), std::move(d)); };
  int n = static_cast<int>(T.vertices.size());
  if (n == 0) {
    flag("tree", "no vertices");
    return rep;
  }
  if (static_cast<int>(T.edges.size()) != n - 1) {
    flag("tree", "edge count != vertex count - 1");
    return rep;
  }
  for (const TreeEdge& e : T.edges)
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n || e.a == e.b) {
      flag("tree", "bad edge endpoints");
      return rep;
    }
  {
    std::vector<int> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e : T.incident_edges(v)) {
        int w = T.other_end(e, v);
        if (!seen[w]) { seen[w] = 1; stack.push_back(w); }
      }
    }
    for (int v = 0; v < n; ++v)
      if (!seen[v]) flag("tree", "not connected");
  }
  for (std::size_t i = 0; i < T.edges.size(); ++i) {
    const TreeEdge& e = T.edges[i];
    if (angle_eq(T.vertices[e.a].angle, T.vertices[e.b].angle))
      flag("edge", "edge " + std::to_string(i) + " joins vertices with equal angles");
    if (e.q.is_zero()) flag("edge", "edge " + std::to_string(i) + " has zero pair");
  }
  if (!rep.ok()) return rep;

  for (int v = 0; v < n; ++v) {
    const TreeVertex& V = T.vertices[v];
    const VertexLabel& L = V.label;
    int deg = T.degree(v);
    std::string at = "v" + std::to_string(v) + ": ";
    using K = VertexLabel::Kind;
    switch (L.kind) {
      case K::ZeroInt:
        if (V.angle.kind != AngleSpec::Kind::Zero) flag("label", at + "ZeroInt off angle 0");
        if (L.m <= 0) flag("label", at + "ZeroInt label must be positive");
        break;
      case K::PiInt:
        if (V.angle.kind != AngleSpec::Kind::Pi) flag("label", at + "PiInt off angle pi");
        if (L.m >= 0) flag("label", at + "PiInt label must be negative");
        break;
      case K::ZeroEnd:
        if (V.angle.kind != AngleSpec::Kind::Zero) flag("label", at + "ZeroEnd off angle 0");
        if (L.end.delta != 1) flag("label", at + "ZeroEnd requires a (1,...) tuple");
        break;
      case K::PiEnd:
        if (V.angle.kind != AngleSpec::Kind::Pi) flag("label", at + "PiEnd off angle pi");
        if (L.end.delta != -1) flag("label", at + "PiEnd requires a (-1,...) tuple");
        break;
      case K::Interior: {
        if (!V.angle.is_interior()) {
          flag("label", at + "Interior label off interior angle");
          break;
        }
        for (const FourTuple& t : L.tuples) {
          if (t.delta != 0) flag("label", at + "interior vertex housing a (+-1,...) tuple");
          else if (t.pair.is_zero() || !defines_angle(t.pair) ||
                   !angle_eq(AngleSpec::interior(t.pair), V.angle))
            flag("label", at + "housed tuple pair does not define the vertex angle");
        }
        if (deg == 1) {
          if (L.tuples.size() != 1 || L.tuples[0].delta != 0 || L.tuples[0].eps >= 0)
            flag("label", at + "monovalent interior vertex needs exactly one (0,-,...) tuple");
          if (!L.gamma.vertices.empty() || !L.gamma.arcs.empty())
            flag("label", at + "monovalent interior vertex carries no level-set graph");
        } else if (L.tuples.empty() && deg < 3) {
          flag("label", at + "bivalent interior vertex with empty tuple set");
        }
        break;
      }
    }
    if (V.angle.kind != AngleSpec::Kind::Interior && deg != 1)
      flag("tree", at + "vertex at angle 0/pi must be monovalent");
    if (deg >= 2) {
      if (T.e_minus(v).empty() || T.e_plus(v).empty())
        flag("tree", at + "multivalent vertex angle extremal among its edges");
      if (L.kind == VertexLabel::Kind::Interior) {
        detail::validate_gamma(rep, T, v);
        // label multiset of Gamma matches the housed tuple multiset
        std::multiset<std::pair<int, Int>> fromTuples, fromGamma;
        for (const FourTuple& t : L.tuples)
          if (!t.pair.is_zero()) fromTuples.insert({t.eps, content(t.pair)});
        for (const GammaVertex& gv : L.gamma.vertices)
          if (gv.m != 0) fromGamma.insert({sign_int(gv.m), Int(abs(gv.m))});
        if (fromTuples != fromGamma)
          flag("gamma", at + "nonzero Gamma labels do not match housed tuples");
      }
    }
  }
  if (!rep.ok()) return rep;

  // edge rules: monovalent sign rule and the multivalent sum rule
  for (int v = 0; v < n; ++v) {
    IntPair P = vertex_pair(T, v);
    std::string at = "v" + std::to_string(v) + ": ";
    if (T.degree(v) == 1) {
      int e = T.incident_edges(v)[0];
      const VertexLabel& L = T.vertices[v].label;
      using K = VertexLabel::Kind;
      bool plus;
      switch (L.kind) {
        case K::ZeroInt: plus = true; break;             // positive integer label
        case K::PiInt: plus = false; break;
        case K::ZeroEnd: plus = L.end.eps < 0; break;    // (1,-,...) keeps the pair
        case K::PiEnd: plus = L.end.eps > 0; break;      // (-1,+,...) keeps the pair
        default: plus = T.edge_lower(e, v); break;       // q = -P_o at the lesser angle
      }
      IntPair want = plus ? P : -P;
      if (T.edges[e].q != want)
        flag("edge-rule", at + "monovalent edge pair " + to_string(T.edges[e].q) +
                              " != " + to_string(want));
    } else {
      IntPair s(Int(0), Int(0));
      for (int e : T.e_minus(v)) s = s + T.edges[e].q;
      for (int e : T.e_plus(v)) s = s - T.edges[e].q;
      if (s != P)
        flag("edge-rule", at + "sum over E- minus sum over E+ is " + to_string(s) +
                              " but P_o = " + to_string(P));
    }
  }
  return rep;
}

// --- existence -------------------------------------------------------------

struct ExistsResult {
  bool nonempty{true};
  int edge{-1};
  std::optional<AngleSpec> witness;
  std::string reason;
};

// alpha_{Q_e} must be positive over each edge's open angle interval, with an
// endpoint zero exactly at monovalent interior vertices.
inline ExistsResult check_exists(const DecoratedGraph& T) {
  for (std::size_t i = 0; i < T.edges.size(); ++i) {
    const TreeEdge& e = T.edges[i];
    int lo = e.a, hi = e.b;
    if (angle_lt(T.vertices[hi].angle, T.vertices[lo].angle)) std::swap(lo, hi);
    const AngleSpec &alo = T.vertices[lo].angle, &ahi = T.vertices[hi].angle;
    auto res = alpha_positive_on(e.q, alo, ahi);
    if (!res.positive_interior())
      return {false, static_cast<int>(i), res.witness, "alpha not positive inside the interval"};
    for (int v : {lo, hi}) {
      const AngleSpec& a = T.vertices[v].angle;
      Sign s = sign_alpha_at(e.q, a);
      bool mono_interior = a.is_interior() && T.degree(v) == 1;
      if (mono_interior) {
        if (s != Sign::Zero)
          return {false, static_cast<int>(i), a, "alpha nonzero at a monovalent interior vertex"};
      } else if (s != Sign::Positive) {
        return {false, static_cast<int>(i), a, "alpha not positive at an endpoint"};
      }
    }
  }
  return {};
}

// --- data-set reconstruction ----------------------------------------------

// Recover the asymptotic data set the graph classifies.
inline AsymptoticData asymptotic_of(const DecoratedGraph& T) {
  AsymptoticData A;
  for (const TreeVertex& V : T.vertices) {
    using K = VertexLabel::Kind;
    switch (V.label.kind) {
      case K::ZeroInt: A.c_plus += V.label.m.get_si(); break;
      case K::PiInt: A.c_minus += Int(-V.label.m).get_si(); break;
      case K::ZeroEnd:
      case K::PiEnd: A.tuples.push_back(V.label.end); break;
      case K::Interior:
        for (const FourTuple& t : V.label.tuples) A.tuples.push_back(t);
        break;
    }
  }
  return A;
}

// --- stratum data ----------------------------------------------------------

struct StratumData {
  std::vector<FourTuple> B;            // (0,-,...) tuples housed at multivalent vertices
  int c{0};                            // zero-label Gamma vertices
  std::vector<std::vector<int>> d;     // partition of the N+ + |B| + c carriers by shared angle
  int m{0};                            // free multivalent angles
  long dim{0};
};

inline StratumData stratum_data(const DecoratedGraph& T) {
  StratumData S;
  AsymptoticData A = asymptotic_of(T);
  // angles defined by (0,+) pairs or B pairs
  std::vector<AngleSpec> pinned;
  auto pin = [&pinned](const IntPair& P) {
    AngleSpec a = AngleSpec::interior(P);
    for (const AngleSpec& x : pinned)
      if (angle_eq(x, a)) return;
    pinned.push_back(a);
  };
  for (const FourTuple& t : A.tuples)
    if (t.delta == 0 && t.eps > 0) pin(t.pair);
  // group carriers (Gamma vertices of multivalent interior vertices) by angle
  std::vector<AngleSpec> carrier_angle;
  std::vector<int> carrier_id;
  int carriers = 0;
  std::vector<AngleSpec> mv_angles;
  for (std::size_t v = 0; v < T.vertices.size(); ++v) {
    if (T.degree(static_cast<int>(v)) < 2) continue;
    const TreeVertex& V = T.vertices[v];
    if (V.label.kind != VertexLabel::Kind::Interior) continue;
    mv_angles.push_back(V.angle);
    for (const FourTuple& t : V.label.tuples)
      if (t.eps < 0) {
        S.B.push_back(t);
        pin(t.pair);
      }
    for (const GammaVertex& gv : V.label.gamma.vertices) {
      if (gv.m == 0) ++S.c;
      carrier_angle.push_back(V.angle);
      carrier_id.push_back(carriers++);
    }
  }
  // partition by shared angle
  std::vector<int> assigned(carriers, 0);
  for (int i = 0; i < carriers; ++i) {
    if (assigned[i]) continue;
    std::vector<int> part{carrier_id[i]};
    assigned[i] = 1;
    for (int j = i + 1; j < carriers; ++j)
      if (!assigned[j] && angle_eq(carrier_angle[i], carrier_angle[j])) {
        part.push_back(carrier_id[j]);
        assigned[j] = 1;
      }
    S.d.push_back(std::move(part));
  }
  // distinct multivalent angles not pinned by a (0,+) or B pair
  std::vector<AngleSpec> frees;
  for (const AngleSpec& a : mv_angles) {
    bool isPinned = false;
    for (const AngleSpec& x : pinned)
      if (angle_eq(x, a)) { isPinned = true; break; }
    if (isPinned) continue;
    bool dup = false;
    for (const AngleSpec& x : frees)
      if (angle_eq(x, a)) { dup = true; break; }
    if (!dup) frees.push_back(a);
  }
  S.m = static_cast<int>(frees.size());
  S.dim = A.N_plus() + static_cast<long>(S.B.size()) + S.c + S.m + 2;
  return S;
}

}  // namespace strata
