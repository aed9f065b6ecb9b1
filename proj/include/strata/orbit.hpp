#pragma once

// Exact rational coordinates on the orbit spaces attached to a decorated
// graph, the commuting lattice/vertex-shift group actions, the restricted
// automorphism action, orbit equality, the point stabilizer inside the
// canonical diagonal subgroup, and the numeric Reeb-coordinate invariant.
//
// Normalization: tau coordinates are stored in units of 2*pi; the r value of
// an arc of the level-set graph at o is stored in units of
// 2*pi*alpha_{Q_ref(o)}(theta_o), where ref(o) is the edge joining o toward
// the invariant vertex (at the invariant vertex itself: the distinguished
// fixed edge). In these units every constraint and every translation is an
// exact rational because ratios of alpha values at a common angle are
// rational.

#include "asymptotic.hpp"
#include "exactnum.hpp"
#include "graph.hpp"
#include "log.hpp"
#include "symmetry.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace strata {

struct OrbitPoint {
  Rat tau_minus{0};
  std::map<int, Rat> tau;               // multivalent vertex -> units of 2*pi
  std::map<int, std::vector<Rat>> r;    // multivalent vertex -> per-arc values
};

struct Lattice {
  IntPair n;
};
struct VertexShift {
  int o{-1};
  Int k{0};
};
struct AutElt {
  Isomorphism iso;
};
using GroupElement = std::variant<Lattice, VertexShift, AutElt>;

// Precomputed reference data shared by every orbit operation on one graph.
struct OrbitContext {
  AutGroup aut;
  DiagonalSubgroup diag;
  std::vector<int> multivalent;           // ascending vertex ids
  std::map<int, int> ref_edge;            // o -> edge toward the invariant vertex
  std::map<int, std::vector<int>> subtree;  // o != diamond -> multivalent vertices
                                            // in the branch hanging off o
  int dist_edge{-1};                      // distinguished incident edge orbit rep
  int m_E{1};                             // size of that orbit
};

namespace detail {

inline void orbit_fail(const std::string& msg) { throw std::invalid_argument("orbit: " + msg); }

}  // namespace detail

inline OrbitContext orbit_context(const DecoratedGraph& T) {
  OrbitContext C;
  C.aut = aut_group(T);
  C.diag = canonical_diagonal(T);
  int dia = C.aut.diamond;
  if (dia < 0) detail::orbit_fail("graph has no invariant vertex");
  for (std::size_t v = 0; v < T.vertices.size(); ++v)
    if (T.is_multivalent(static_cast<int>(v))) C.multivalent.push_back(static_cast<int>(v));

  // reference edges via a walk outward from the invariant vertex
  std::vector<int> parent_edge(T.vertices.size(), -1);
  std::vector<int> stack{dia};
  std::vector<char> seen(T.vertices.size(), 0);
  seen[dia] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int e : T.incident_edges(v)) {
      int w = T.other_end(e, v);
      if (seen[w]) continue;
      seen[w] = 1;
      parent_edge[w] = e;
      stack.push_back(w);
    }
  }
  for (int o : C.multivalent) {
    if (o == dia) {
      int e = C.diag.fixed_edge;
      if (e < 0) {
        auto inc = T.incident_edges(dia);
        e = inc.empty() ? -1 : *std::min_element(inc.begin(), inc.end());
        log("orbit_context: no automorphism-fixed edge at the invariant vertex; "
            "using the smallest incident edge as reference");
      }
      C.ref_edge[o] = e;
    } else {
      C.ref_edge[o] = parent_edge[o];
    }
  }
  // distinguished incident edge orbit at the invariant vertex
  if (C.diag.fixed_edge >= 0) {
    C.dist_edge = C.diag.fixed_edge;
    C.m_E = 1;
  } else {
    auto inc = T.incident_edges(dia);
    C.dist_edge = inc.empty() ? -1 : *std::min_element(inc.begin(), inc.end());
    C.m_E = 1;
    if (T.is_multivalent(dia)) {
      auto keys = detail::edge_keys(T, dia, -1, exact_angle_key);
      auto autos = gamma_isos(T.vertices[dia].label.gamma, keys,
                              T.vertices[dia].label.gamma, keys);
      std::vector<int> orbit{C.dist_edge};
      for (std::size_t i = 0; i < orbit.size(); ++i)
        for (const GammaIso& gi : autos) {
          int img = gi.edge.at(orbit[i]);
          if (std::find(orbit.begin(), orbit.end(), img) == orbit.end()) orbit.push_back(img);
        }
      C.m_E = static_cast<int>(orbit.size());
      if (C.m_E > 1) log("orbit_context: distinguished edge orbit has size " +
                         std::to_string(C.m_E));
    }
  }
  // branch membership for the vertex-shift actions
  for (int o : C.multivalent) {
    if (o == dia) continue;
    std::vector<int> members;
    std::vector<int> st{o};
    std::vector<char> sn(T.vertices.size(), 0);
    sn[o] = 1;
    while (!st.empty()) {
      int v = st.back();
      st.pop_back();
      if (T.is_multivalent(v)) members.push_back(v);
      for (int e : T.incident_edges(v)) {
        if (v == o && e == C.ref_edge.at(o)) continue;
        int w = T.other_end(e, v);
        if (sn[w]) continue;
        sn[w] = 1;
        st.push_back(w);
      }
    }
    std::sort(members.begin(), members.end());
    C.subtree[o] = std::move(members);
  }
  return C;
}

// ratio alpha_N / alpha_{Q_ref(o)} at the angle of o, as an exact rational
inline Rat orbit_ratio(const DecoratedGraph& T, const OrbitContext& C, const IntPair& N, int o) {
  return alpha_ratio(N, T.edges[C.ref_edge.at(o)].q, angle_primitive(T, o));
}

inline Report validate_point(const DecoratedGraph& T, const OrbitContext& C,
                             const OrbitPoint& x) {
  Report rep;
  auto flag = [&rep](std::string c, std::string d) {
    rep.violations.push_back({std::move(c), std::move(d), std::nullopt});
  };
  for (int o : C.multivalent) {
    if (!x.tau.count(o)) flag("shape", "missing tau at vertex " + std::to_string(o));
    auto it = x.r.find(o);
    const VertexGraph& g = T.vertices[o].label.gamma;
    if (it == x.r.end() || it->second.size() != g.arcs.size()) {
      flag("shape", "missing or wrongly sized r block at vertex " + std::to_string(o));
      continue;
    }
    for (std::size_t a = 0; a < it->second.size(); ++a)
      if (it->second[a] <= 0)
        flag("positivity", "r <= 0 at vertex " + std::to_string(o) + " arc " +
                               std::to_string(a));
    for (const auto& [e, loop] : g.loops) {
      Rat sum{0};
      for (int a : loop) sum += it->second[a];
      Rat want = orbit_ratio(T, C, T.edges[e].q, o);
      if (sum != want)
        flag("normalization", "arc sum over the loop of edge " + std::to_string(e) +
                                  " at vertex " + std::to_string(o) + " is " + to_string(sum) +
                                  ", expected " + to_string(want));
    }
  }
  if (x.tau.size() != C.multivalent.size())
    flag("shape", "tau defined at a non-multivalent vertex");
  if (x.r.size() != C.multivalent.size())
    flag("shape", "r block at a non-multivalent vertex");
  return rep;
}

inline Report validate_point(const DecoratedGraph& T, const OrbitPoint& x) {
  return validate_point(T, orbit_context(T), x);
}

namespace detail {

// rotation offset of a level-set automorphism on the loop of the given edge;
// -1 when the map does not send the loop to itself by a rotation
inline int loop_offset(const VertexGraph& g, const GammaIso& gi, int e) {
  const auto& L = g.loops.at(e);
  int pos = g.loop_pos(e, gi.arc[L[0]]);
  if (pos < 0) return -1;
  for (std::size_t i = 0; i < L.size(); ++i)
    if (gi.arc[L[i]] != L[(pos + i) % L.size()]) return -1;
  return pos;
}

}  // namespace detail

inline OrbitPoint act(const DecoratedGraph& T, const OrbitContext& C, const GroupElement& g,
                      const OrbitPoint& x) {
  int dia = C.aut.diamond;
  OrbitPoint y = x;
  if (const Lattice* L = std::get_if<Lattice>(&g)) {
    if (C.dist_edge < 0) detail::orbit_fail("no distinguished edge for the lattice action");
    Int shift = Int(C.m_E) * det(L->n, T.edges[C.dist_edge].q);
    y.tau_minus -= Rat(shift);
    for (int o : C.multivalent) y.tau[o] -= orbit_ratio(T, C, L->n, o);
    return y;
  }
  if (const VertexShift* S = std::get_if<VertexShift>(&g)) {
    if (S->o == dia || !C.subtree.count(S->o))
      detail::orbit_fail("vertex shift requires a multivalent vertex other than the "
                         "invariant one");
    const IntPair& Qe = T.edges[C.ref_edge.at(S->o)].q;
    for (int oh : C.subtree.at(S->o))
      y.tau[oh] -= Rat(S->k) * orbit_ratio(T, C, Qe, oh);
    return y;
  }
  const AutElt& A = std::get<AutElt>(g);
  if (!C.diag.edge_fixing_regime)
    throw std::runtime_error("unsupported-extension: automorphism action outside the "
                             "edge-fixing regime");
  if (!is_isomorphism(T, T, A.iso)) detail::orbit_fail("element is not an automorphism");

  // transfer the simplex blocks: r'(iota(arc)) = r(arc)
  y.r.clear();
  y.tau.clear();
  for (int o : C.multivalent) {
    int o2 = A.iso.vertex[o];
    const GammaIso& gi = A.iso.gamma.at(o);
    std::vector<Rat> block(T.vertices[o2].label.gamma.arcs.size());
    const auto& src = x.r.at(o);
    for (std::size_t a = 0; a < src.size(); ++a) block[gi.arc[a]] = src[a];
    y.r[o2] = std::move(block);
    y.tau[o2] = x.tau.at(o);
  }

  // translation part at the invariant vertex: the fractional rotation amount
  Rat z{0};
  int e_fix = C.diag.fixed_edge;
  if (T.is_multivalent(dia)) {
    const VertexGraph& gd = T.vertices[dia].label.gamma;
    int off = detail::loop_offset(gd, A.iso.gamma.at(dia), e_fix);
    if (off < 0) detail::orbit_fail("automorphism does not rotate the fixed-edge loop");
    z = Rat(Int(off), Int(static_cast<long>(gd.loops.at(e_fix).size())));
    z.canonicalize();
    y.tau[dia] -= z;
  }
  if (z != 0) {
    // corrections below the invariant vertex; the branch entry edge decides
    // which form applies
    auto keys = detail::edge_keys(T, dia, -1, exact_angle_key);
    auto autos = gamma_isos(T.vertices[dia].label.gamma, keys, T.vertices[dia].label.gamma,
                            keys);
    Int n_dia = C.aut.n.count(dia) ? Int(C.aut.n.at(dia)) : Int(1);
    for (int oh : C.multivalent) {
      if (oh == dia) continue;
      // first edge on the path from the invariant vertex toward oh
      int cur = oh, entry = C.ref_edge.at(oh);
      while (T.other_end(entry, cur) != dia) {
        cur = T.other_end(entry, cur);
        entry = C.ref_edge.at(cur);
      }
      bool fixed = true;
      std::vector<int> orbit{entry};
      for (std::size_t i = 0; i < orbit.size(); ++i)
        for (const GammaIso& gi : autos) {
          int img = gi.edge.at(orbit[i]);
          if (std::find(orbit.begin(), orbit.end(), img) == orbit.end()) orbit.push_back(img);
        }
      fixed = orbit.size() == 1;
      Rat shift;
      const IntPair& Qe = T.edges[e_fix].q;
      if (fixed) {
        IntPair diff = Qe - T.edges[entry].q;
        shift = Rat(Int(1), n_dia) * orbit_ratio(T, C, diff, oh) + z * orbit_ratio(T, C, Qe, oh);
      } else {
        int dist = *std::min_element(orbit.begin(), orbit.end());
        Rat eps(entry == dist ? 1 : 0);
        shift = (eps + z) * orbit_ratio(T, C, Qe, oh);
      }
      y.tau[A.iso.vertex[oh]] = x.tau.at(oh) - shift;
    }
  }
  // rotations at deeper fixed vertices act as fractional vertex shifts on
  // their branch
  for (int o : C.multivalent) {
    if (o == dia || A.iso.vertex[o] != o) continue;
    const VertexGraph& go = T.vertices[o].label.gamma;
    int off = detail::loop_offset(go, A.iso.gamma.at(o), C.ref_edge.at(o));
    if (off < 0) detail::orbit_fail("automorphism does not rotate the reference loop at " +
                                    std::to_string(o));
    if (off == 0) continue;
    Rat zo(Int(off), Int(static_cast<long>(go.loops.at(C.ref_edge.at(o)).size())));
    zo.canonicalize();
    const IntPair& Qe = T.edges[C.ref_edge.at(o)].q;
    for (int oh : C.subtree.at(o))
      if (A.iso.vertex[oh] == oh) y.tau[oh] -= zo * orbit_ratio(T, C, Qe, oh);
  }
  return y;
}

inline OrbitPoint act(const DecoratedGraph& T, const GroupElement& g, const OrbitPoint& x) {
  return act(T, orbit_context(T), g, x);
}

namespace detail {

// Does the integer system A u = b admit an integer solution?  Diagonalize by
// unimodular row and column operations (row operations carry b along; column
// operations change the unknowns and do not affect solvability), then check
// divisibility on the diagonal and vanishing of the trailing entries of b.
inline bool integer_solvable(std::vector<std::vector<Int>> A, std::vector<Int> b) {
  int rows = static_cast<int>(A.size());
  int cols = rows ? static_cast<int>(A[0].size()) : 0;
  int t = 0;
  while (t < rows && t < cols) {
    int pi = -1, pj = -1;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (A[i][j] != 0 &&
            (pi < 0 || cmp(abs(A[i][j]), abs(A[pi][pj])) < 0)) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    std::swap(A[t], A[pi]);
    std::swap(b[t], b[pi]);
    for (int i = 0; i < rows; ++i) std::swap(A[i][t], A[i][pj]);
    bool clean = true;
    for (int i = 0; i < rows; ++i) {
      if (i == t || A[i][t] == 0) continue;
      Int q = A[i][t] / A[t][t];
      for (int j = 0; j < cols; ++j) A[i][j] -= q * A[t][j];
      b[i] -= q * b[t];
      if (A[i][t] != 0) clean = false;
    }
    for (int j = 0; j < cols; ++j) {
      if (j == t || A[t][j] == 0) continue;
      Int q = A[t][j] / A[t][t];
      for (int i = 0; i < rows; ++i) A[i][j] -= q * A[i][t];
      if (A[t][j] != 0) clean = false;
    }
    if (clean) ++t;
  }
  for (int i = 0; i < rows; ++i) {
    if (i < t) {
      if (b[i] % A[i][i] != 0) return false;
    } else if (b[i] != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

// True when some composite of lattice translations and vertex shifts carries
// x to y: the simplex blocks must agree and the triangular system for the
// shift multiplicities must have an integer solution.
inline bool orbits_equal(const DecoratedGraph& T, const OrbitContext& C, const OrbitPoint& x,
                         const OrbitPoint& y) {
  for (int o : C.multivalent) {
    auto ix = x.r.find(o), iy = y.r.find(o);
    if (ix == x.r.end() || iy == y.r.end() || ix->second != iy->second) return false;
  }
  // unknowns: n, n', then one shift count per non-invariant multivalent vertex
  std::vector<int> shifts;
  for (const auto& [o, members] : C.subtree) {
    shifts.push_back(o);
    (void)members;
  }
  int cols = 2 + static_cast<int>(shifts.size());
  std::vector<std::vector<Rat>> M;
  std::vector<Rat> rhs;
  for (int o : C.multivalent) {
    std::vector<Rat> row(cols, Rat(0));
    // -alpha_ratio(N, ...) is linear in (n, n')
    row[0] = -orbit_ratio(T, C, IntPair(Int(1), Int(0)), o);
    row[1] = -orbit_ratio(T, C, IntPair(Int(0), Int(1)), o);
    for (std::size_t s = 0; s < shifts.size(); ++s) {
      const auto& members = C.subtree.at(shifts[s]);
      if (std::find(members.begin(), members.end(), o) != members.end())
        row[2 + s] = -orbit_ratio(T, C, T.edges[C.ref_edge.at(shifts[s])].q, o);
    }
    M.push_back(std::move(row));
    rhs.push_back(y.tau.at(o) - x.tau.at(o));
  }
  {
    std::vector<Rat> row(cols, Rat(0));
    const IntPair& Q = T.edges[C.dist_edge].q;
    Int cn = Int(C.m_E) * Q.pp, cnp = -Int(C.m_E) * Q.p;
    row[0] = Rat(cn);   // -m * (n' q - n q') : n coefficient
    row[1] = Rat(cnp);  //                      n' coefficient
    M.push_back(std::move(row));
    rhs.push_back(y.tau_minus - x.tau_minus);
  }
  // clear denominators row by row
  std::vector<std::vector<Int>> A;
  std::vector<Int> b;
  for (std::size_t i = 0; i < M.size(); ++i) {
    Int l{1};
    for (const Rat& v : M[i]) l = lcm(l, v.get_den());
    l = lcm(l, rhs[i].get_den());
    std::vector<Int> row;
    for (const Rat& v : M[i]) {
      Rat s = v * Rat(l);
      s.canonicalize();
      row.push_back(s.get_num());
    }
    A.push_back(std::move(row));
    Rat s = rhs[i] * Rat(l);
    s.canonicalize();
    b.push_back(s.get_num());
  }
  return detail::integer_solvable(std::move(A), std::move(b));
}

inline bool orbits_equal(const DecoratedGraph& T, const OrbitPoint& x, const OrbitPoint& y) {
  return orbits_equal(T, orbit_context(T), x, y);
}

// --- stabilizer -------------------------------------------------------------

struct Stabilizer {
  Int order{1};
  std::map<int, int> rotation;  // fixed multivalent vertex -> arc steps of the
                                // order-d canonical rotation
};

namespace detail {

// canonical generating rotation of the level-set automorphisms at o that fix
// the reference edge: the valid rotation with the smallest positive offset
inline std::optional<GammaIso> canonical_rotation(const DecoratedGraph& T, int o, int ref) {
  int pe = ref;
  auto keys = edge_keys(T, o, -1, exact_angle_key);
  auto autos = gamma_isos(T.vertices[o].label.gamma, keys, T.vertices[o].label.gamma, keys);
  const VertexGraph& g = T.vertices[o].label.gamma;
  std::optional<GammaIso> best;
  int best_off = -1;
  for (const GammaIso& gi : autos) {
    auto it = gi.edge.find(pe);
    if (it == gi.edge.end() || it->second != pe) continue;
    int off = loop_offset(g, gi, pe);
    if (off <= 0) continue;
    if (best_off < 0 || off < best_off) {
      best_off = off;
      best = gi;
    }
  }
  return best;
}

}  // namespace detail

// Largest divisor d of k_T whose canonical diagonal rotation of order d fixes
// every simplex block of x; the tau coordinates impose no further condition.
inline Stabilizer stabilizer(const DecoratedGraph& T, const OrbitContext& C,
                             const OrbitPoint& x) {
  Stabilizer S;
  Int k = C.diag.k;
  if (k <= 1) return S;
  std::vector<int> fixed_multi;
  for (int v : C.aut.fixed)
    if (T.is_multivalent(v) && C.aut.n.count(v) && C.aut.n.at(v) > 1) fixed_multi.push_back(v);
  for (Int d = k; d >= 1; d -= 1) {
    if (k % d != 0) continue;
    bool ok = true;
    std::map<int, int> rot;
    for (int o : fixed_multi) {
      auto gen = detail::canonical_rotation(T, o, C.ref_edge.at(o));
      if (!gen) { ok = false; break; }
      int n_o = C.aut.n.at(o);
      // the order-d element rotates by n_o / d canonical steps
      Int steps = Int(n_o) / d;
      const VertexGraph& g = T.vertices[o].label.gamma;
      // apply the generator 'steps' times to the arc permutation
      std::vector<int> perm(g.arcs.size());
      for (std::size_t a = 0; a < perm.size(); ++a) perm[a] = static_cast<int>(a);
      for (Int s = 0; s < steps; s += 1)
        for (std::size_t a = 0; a < perm.size(); ++a) perm[a] = gen->arc[perm[a]];
      const auto& block = x.r.at(o);
      for (std::size_t a = 0; a < perm.size() && ok; ++a)
        if (block[a] != block[perm[a]]) ok = false;
      if (!ok) break;
      rot[o] = detail::loop_offset(g, *gen, C.ref_edge.at(o)) * static_cast<int>(steps.get_si());
    }
    if (ok) {
      S.order = d;
      S.rotation = std::move(rot);
      return S;
    }
  }
  return S;
}

inline Stabilizer stabilizer(const DecoratedGraph& T, const OrbitPoint& x) {
  return stabilizer(T, orbit_context(T), x);
}

// --- Reeb coordinate --------------------------------------------------------

// Numeric limit of the Reeb-coordinate combination on the end labeled by the
// vertex upsilon of the level-set graph at o, in [0, 2*pi).  Exact inputs,
// float output; constant under the lattice and vertex-shift actions.
inline double reeb_invariant(const DecoratedGraph& T, const OrbitContext& C, int o,
                             int upsilon, const OrbitPoint& x) {
  const VertexGraph& g = T.vertices[o].label.gamma;
  if (upsilon < 0 || upsilon >= static_cast<int>(g.vertices.size()))
    detail::orbit_fail("no such vertex in the level-set graph");
  if (g.vertices[upsilon].m == 0)
    detail::orbit_fail("Reeb coordinate needs a vertex with nonzero label");
  int ref = C.ref_edge.at(o);
  IntPair ph = angle_primitive(T, o);
  const IntPair& Q = T.edges[ref].q;
  double theta = angle_float(T.vertices[o].angle);
  // base vertex convention: the tail of the first arc on the reference loop
  int base = g.arcs[g.loops.at(ref)[0]].from;
  // signed sum of r along any arc path from the base vertex to upsilon
  std::vector<Rat> offset(g.vertices.size(), Rat(0));
  std::vector<char> seen(g.vertices.size(), 0);
  std::vector<int> st{base};
  seen[base] = 1;
  const auto& block = x.r.at(o);
  while (!st.empty()) {
    int v = st.back();
    st.pop_back();
    for (std::size_t a = 0; a < g.arcs.size(); ++a) {
      const GammaArc& arc = g.arcs[a];
      if (arc.from == v && !seen[arc.to]) {
        seen[arc.to] = 1;
        offset[arc.to] = offset[v] + block[a];
        st.push_back(arc.to);
      }
      if (arc.to == v && !seen[arc.from]) {
        seen[arc.from] = 1;
        offset[arc.from] = offset[v] - block[a];
        st.push_back(arc.from);
      }
    }
  }
  double A = Int(ph.p * Q.pp - ph.pp * Q.p).get_d();
  double v_lift = 2.0 * M_PI * x.tau.at(o).get_d();
  double s = std::sin(theta), c = std::cos(theta);
  double coeff = std::sqrt((ph.p.get_d() * ph.p.get_d() +
                            ph.pp.get_d() * ph.pp.get_d() * s * s) /
                           (1.0 + 3.0 * c * c * c * c));
  double rsum = 2.0 * M_PI * alpha_float(Q, theta) * offset[upsilon].get_d();
  double val = std::fmod(A * v_lift + coeff * rsum, 2.0 * M_PI);
  if (val < 0) val += 2.0 * M_PI;
  return val;
}

inline double reeb_invariant(const DecoratedGraph& T, int o, int upsilon, const OrbitPoint& x) {
  return reeb_invariant(T, orbit_context(T), o, upsilon, x);
}

// A point with every simplex block at its barycenter and zero tau lifts.
inline OrbitPoint barycenter_point(const DecoratedGraph& T, const OrbitContext& C) {
  OrbitPoint x;
  for (int o : C.multivalent) {
    x.tau[o] = Rat(0);
    const VertexGraph& g = T.vertices[o].label.gamma;
    std::vector<Rat> block(g.arcs.size(), Rat(0));
    // each arc lies on exactly one lower-edge loop; distribute that loop's
    // total evenly over its arcs
    for (const auto& [e, loop] : g.loops) {
      if (!T.edge_lower(e, o)) continue;
      Rat share = orbit_ratio(T, C, T.edges[e].q, o) / Rat(Int(static_cast<long>(loop.size())));
      share.canonicalize();
      for (int a : loop) block[a] = share;
    }
    x.r[o] = std::move(block);
  }
  return x;
}

}  // namespace strata
