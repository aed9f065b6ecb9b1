#pragma once

// Degeneration and refinement moves on decorated graphs: arc-difference
// classes on level-set graphs, arc collapse and parallel-arc splitting,
// vertex refinement, the codimension-one classification, and a stratum
// census with its adjacency poset.

#include "asymptotic.hpp"
#include "canonical.hpp"
#include "exactnum.hpp"
#include "graph.hpp"
#include "linear.hpp"
#include "symmetry.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace strata {

// --- arc-difference classes -----------------------------------------------

// For two arcs sharing both endpoints, the class of (gamma - gamma') in the
// loop lattice: a coefficient in {-1,0,+1} per incident edge, +1 on lower
// edges and -1 on upper edges that label the closure set grown from the two
// seed loops.
struct DifferenceClass {
  std::map<int, int> c;  // incident tree-edge id -> coefficient
  IntPair Q;             // sum of c_e * Q_e
};

inline DifferenceClass arc_difference_class(const DecoratedGraph& T, int o, int g1, int g2) {
  const VertexGraph& g = T.vertices[o].label.gamma;
  int nA = static_cast<int>(g.arcs.size());
  if (g1 < 0 || g2 < 0 || g1 >= nA || g2 >= nA)
    throw std::invalid_argument("arc_difference_class: arc id out of range");
  if (g1 == g2) throw std::invalid_argument("arc_difference_class: arcs must be distinct");
  if (g.arcs[g1].from != g.arcs[g2].from || g.arcs[g1].to != g.arcs[g2].to)
    throw std::invalid_argument("arc_difference_class: arcs do not share both endpoints");

  // closure: seed with the arcs of the two distinguished loops, then close
  // under shared edge labels (the collapsed pair never joins)
  std::set<int> closed;
  std::vector<int> work;
  auto push = [&](int a) {
    if (a == g1 || a == g2) return;
    if (closed.insert(a).second) work.push_back(a);
  };
  for (int a : g.loops.at(g.arcs[g1].eminus)) push(a);
  for (int a : g.loops.at(g.arcs[g2].eplus)) push(a);
  while (!work.empty()) {
    int a = work.back();
    work.pop_back();
    for (int e : {g.arcs[a].eminus, g.arcs[a].eplus})
      for (int b : g.loops.at(e)) push(b);
  }

  DifferenceClass D;
  D.Q = IntPair(Int(0), Int(0));
  for (int e : T.incident_edges(o)) {
    bool labels = false;
    for (int a : closed)
      if (g.arcs[a].eminus == e || g.arcs[a].eplus == e) { labels = true; break; }
    int c = 0;
    if (labels) c = T.edge_lower(e, o) ? 1 : -1;
    D.c[e] = c;
    if (c != 0) D.Q = c > 0 ? D.Q + T.edges[e].q : D.Q - T.edges[e].q;
  }

  // exact chain identity in the free module on the arcs
  std::vector<Int> lhs(nA, Int(0));
  for (const auto& [e, c] : D.c) {
    if (c == 0) continue;
    for (int a : g.loops.at(e)) lhs[a] += c;
  }
  std::vector<Int> rhs(nA, Int(0));
  rhs[g1] = 1;
  rhs[g2] = -1;
  if (lhs != rhs)
    throw std::invalid_argument("arc_difference_class: chain identity fails for this pair");
  return D;
}

enum class ForcedEqual { AlwaysEqual, EqualAtThisAngle, Independent };

inline ForcedEqual forced_equal(const DecoratedGraph& T, int o, int g1, int g2) {
  DifferenceClass D = arc_difference_class(T, o, g1, g2);
  if (D.Q.is_zero()) return ForcedEqual::AlwaysEqual;
  if (sign_alpha_at(D.Q, T.vertices[o].angle) == Sign::Zero) return ForcedEqual::EqualAtThisAngle;
  return ForcedEqual::Independent;
}

// --- surgery helpers -------------------------------------------------------

namespace detail {

// Drop vertices/edges and renumber every id, including level-set arc labels
// and loop keys. edge_alias redirects dropped edge ids onto surviving ones
// (for edge concatenations); edge endpoints must already be adjusted.
inline DecoratedGraph drop_and_renumber(const DecoratedGraph& T, const std::set<int>& drop_v,
                                        const std::set<int>& drop_e,
                                        const std::map<int, int>& edge_alias = {}) {
  std::vector<int> vmap(T.vertices.size(), -1), emap(T.edges.size(), -1);
  int nv = 0, ne = 0;
  for (std::size_t v = 0; v < T.vertices.size(); ++v)
    if (!drop_v.count(static_cast<int>(v))) vmap[v] = nv++;
  for (std::size_t e = 0; e < T.edges.size(); ++e)
    if (!drop_e.count(static_cast<int>(e))) emap[e] = ne++;
  auto eimg = [&](int e) {
    auto it = edge_alias.find(e);
    if (it != edge_alias.end()) e = it->second;
    return emap[e];
  };
  DecoratedGraph R;
  for (std::size_t v = 0; v < T.vertices.size(); ++v) {
    if (vmap[v] < 0) continue;
    TreeVertex V = T.vertices[v];
    VertexGraph& g = V.label.gamma;
    for (GammaArc& a : g.arcs) {
      a.eminus = eimg(a.eminus);
      a.eplus = eimg(a.eplus);
    }
    std::map<int, std::vector<int>> loops;
    for (auto& [e, L] : g.loops) loops[eimg(e)] = L;
    g.loops = std::move(loops);
    R.vertices.push_back(std::move(V));
  }
  for (std::size_t e = 0; e < T.edges.size(); ++e) {
    if (emap[e] < 0) continue;
    TreeEdge E = T.edges[e];
    E.a = vmap[E.a];
    E.b = vmap[E.b];
    R.edges.push_back(E);
  }
  return R;
}

// Remove an arc from a level-set graph and fuse its two endpoint vertices,
// giving the fused vertex the label `merged`.
inline VertexGraph fuse_arc_endpoints(const VertexGraph& g, int arc, const Int& merged) {
  int u = g.arcs[arc].from, w = g.arcs[arc].to;
  VertexGraph h;
  std::vector<int> vmap(g.vertices.size(), -1);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (static_cast<int>(v) == w) continue;
    vmap[v] = static_cast<int>(h.vertices.size());
    h.vertices.push_back(g.vertices[v]);
  }
  vmap[w] = vmap[u];
  h.vertices[vmap[u]].m = merged;
  std::vector<int> amap(g.arcs.size(), -1);
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    if (static_cast<int>(a) == arc) continue;
    amap[a] = static_cast<int>(h.arcs.size());
    GammaArc x = g.arcs[a];
    x.from = vmap[x.from];
    x.to = vmap[x.to];
    h.arcs.push_back(x);
  }
  for (const auto& [e, L] : g.loops) {
    std::vector<int> out;
    for (int a : L)
      if (a != arc) out.push_back(amap[a]);
    h.loops[e] = std::move(out);
  }
  return h;
}

// Tuple list a multivalent interior vertex must carry to match its level-set
// graph labels, all pairs positive multiples of the angle primitive.
inline std::vector<FourTuple> tuples_of_gamma(const VertexGraph& g, const IntPair& prim) {
  std::vector<FourTuple> out;
  for (const GammaVertex& gv : g.vertices)
    if (gv.m != 0) out.push_back(FourTuple{0, sign_int(gv.m), prim * abs(gv.m)});
  return out;
}

inline std::string first_violation(const Report& rep) {
  if (rep.ok()) return "";
  return rep.violations.front().constraint + ": " + rep.violations.front().detail;
}

}  // namespace detail

// --- arc collapse ----------------------------------------------------------

struct CollapseInternal {
  DecoratedGraph graph;
};
struct CollapseSameMerge {
  AsymptoticData data;
  DecoratedGraph graph;
  FourTuple merged;
};
struct CollapseCancel {
  AsymptoticData data;
  DecoratedGraph graph;
  std::vector<FourTuple> removed;
  std::string subcase;
  int k{0};  // sum of the two endpoint valencies minus 4
};
struct CollapseRejected {
  std::string reason;
};
using CollapseOutcome =
    std::variant<CollapseInternal, CollapseSameMerge, CollapseCancel, CollapseRejected>;

// Collapse one arc of the level-set graph at vertex o. A zero endpoint label
// merges internally; same-sign or unequal opposite labels merge the two ends
// into one; equal opposite labels cancel, with three subcases keyed on the
// shape of the level-set graph.
inline CollapseOutcome collapse_arc(const DecoratedGraph& T, int o, int arc) {
  if (o < 0 || o >= static_cast<int>(T.vertices.size()) ||
      T.vertices[o].label.kind != VertexLabel::Kind::Interior || !T.is_multivalent(o))
    return CollapseRejected{"vertex is not a multivalent interior vertex"};
  const VertexGraph& g = T.vertices[o].label.gamma;
  if (arc < 0 || arc >= static_cast<int>(g.arcs.size()))
    return CollapseRejected{"arc id out of range"};
  int u = g.arcs[arc].from, w = g.arcs[arc].to;
  if (u == w) return CollapseRejected{"arc starts and ends at the same vertex"};
  Int m1 = g.vertices[u].m, m2 = g.vertices[w].m;
  IntPair prim = angle_primitive(T, o);

  auto fused_graph = [&](const Int& merged) {
    DecoratedGraph R = T;
    R.vertices[o].label.gamma = detail::fuse_arc_endpoints(g, arc, merged);
    R.vertices[o].label.tuples = detail::tuples_of_gamma(R.vertices[o].label.gamma, prim);
    return R;
  };

  if (m1 == 0 || m2 == 0) {
    DecoratedGraph R = fused_graph(m1 + m2);
    Report rep = validate_graph(R);
    if (!rep.ok()) return CollapseRejected{"invalid result: " + detail::first_violation(rep)};
    return CollapseInternal{std::move(R)};
  }

  if (m1 + m2 != 0) {
    // same sign, or opposite signs with unequal magnitude
    DecoratedGraph R = fused_graph(m1 + m2);
    Report rep = validate_graph(R);
    if (!rep.ok()) return CollapseRejected{"invalid result: " + detail::first_violation(rep)};
    AsymptoticData data = asymptotic_of(R);
    Report drep = validate_data(data);
    if (!drep.ok()) return CollapseRejected{"invalid data: " + detail::first_violation(drep)};
    FourTuple merged{0, sign_int(m1 + m2), prim * abs(m1 + m2)};
    return CollapseSameMerge{std::move(data), std::move(R), merged};
  }

  // opposite equal labels cancel
  std::vector<FourTuple> removed{FourTuple{0, 1, prim * abs(m1)}, FourTuple{0, -1, prim * abs(m1)}};
  int k = g.valency(u) + g.valency(w) - 4;
  int val_u = g.valency(u), val_w = g.valency(w);

  if (g.vertices.size() == 2 && val_u == 2 && val_w == 2) {
    // the whole level set was one circle through the two ends: the vertex o
    // dissolves and its two tree edges concatenate
    std::vector<int> inc = T.incident_edges(o);
    if (inc.size() != 2) return CollapseRejected{"two-vertex circle at a non-bivalent tree vertex"};
    int ea = inc[0], eb = inc[1];
    if (!(T.edges[ea].q == T.edges[eb].q))
      return CollapseRejected{"concatenation needs equal edge pairs"};
    DecoratedGraph R = T;
    int x = R.other_end(ea, o), y = R.other_end(eb, o);
    R.edges[ea].a = x;
    R.edges[ea].b = y;
    R = detail::drop_and_renumber(R, {o}, {eb}, {{eb, ea}});
    Report rep = validate_graph(R);
    if (!rep.ok()) return CollapseRejected{"invalid result: " + detail::first_violation(rep)};
    AsymptoticData data = asymptotic_of(R);
    return CollapseCancel{std::move(data), std::move(R), removed,
                          "delete-vertex-concatenate-edges", k};
  }

  if (val_u == 2 && val_w == 2) {
    // bivalent ends inside a larger graph: the whole arc chain through them
    // is removed and its flanks concatenate, keeping the same edge labels
    int in_u = -1, out_w = -1;
    for (std::size_t a = 0; a < g.arcs.size(); ++a) {
      if (static_cast<int>(a) == arc) continue;
      if (g.arcs[a].to == u) in_u = static_cast<int>(a);
      if (g.arcs[a].from == w) out_w = static_cast<int>(a);
    }
    if (in_u < 0 || out_w < 0 || in_u == out_w)
      return CollapseRejected{"bivalent ends without distinct flanking arcs"};
    if (g.arcs[in_u].eminus != g.arcs[arc].eminus || g.arcs[in_u].eplus != g.arcs[arc].eplus ||
        g.arcs[out_w].eminus != g.arcs[arc].eminus || g.arcs[out_w].eplus != g.arcs[arc].eplus)
      return CollapseRejected{"flanking arcs carry different edge labels"};
    VertexGraph h;
    std::vector<int> vmap(g.vertices.size(), -1);
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      if (static_cast<int>(v) == u || static_cast<int>(v) == w) continue;
      vmap[v] = static_cast<int>(h.vertices.size());
      h.vertices.push_back(g.vertices[v]);
    }
    std::vector<int> amap(g.arcs.size(), -1);
    for (std::size_t a = 0; a < g.arcs.size(); ++a) {
      if (static_cast<int>(a) == arc || static_cast<int>(a) == out_w) continue;
      amap[a] = static_cast<int>(h.arcs.size());
      GammaArc x = g.arcs[a];
      if (static_cast<int>(a) == in_u) x.to = vmap[g.arcs[out_w].to];
      else {
        x.from = vmap[x.from];
        x.to = vmap[x.to];
      }
      if (static_cast<int>(a) == in_u) x.from = vmap[g.arcs[in_u].from];
      h.arcs.push_back(x);
    }
    for (const auto& [e, L] : g.loops) {
      std::vector<int> out;
      for (int a : L)
        if (a != arc && a != out_w) out.push_back(amap[a]);
      h.loops[e] = std::move(out);
    }
    DecoratedGraph R = T;
    R.vertices[o].label.gamma = std::move(h);
    R.vertices[o].label.tuples = detail::tuples_of_gamma(R.vertices[o].label.gamma, prim);
    Report rep = validate_graph(R);
    if (!rep.ok()) return CollapseRejected{"invalid result: " + detail::first_violation(rep)};
    AsymptoticData data = asymptotic_of(R);
    return CollapseCancel{std::move(data), std::move(R), removed, "delete-arc-concatenate", k};
  }

  // at least one end has valency four or more: merge to a zero-labeled vertex
  DecoratedGraph R = fused_graph(Int(0));
  Report rep = validate_graph(R);
  if (!rep.ok()) return CollapseRejected{"invalid result: " + detail::first_violation(rep)};
  AsymptoticData data = asymptotic_of(R);
  return CollapseCancel{std::move(data), std::move(R), removed, "merge-to-zero", k};
}

// --- parallel-arc splitting ------------------------------------------------

namespace detail {

// Copy the components of T - o that contain the given edges, rooted at a
// fresh copy of o placed at index 0; gamma is relabeled through the edge map.
inline DecoratedGraph extract_component(const DecoratedGraph& T, int o,
                                        const std::set<int>& eset, const AngleSpec& angle,
                                        const VertexGraph& gamma, const IntPair& prim) {
  DecoratedGraph R;
  TreeVertex root;
  root.angle = angle;
  root.label.kind = VertexLabel::Kind::Interior;
  R.vertices.push_back(root);
  std::map<int, int> vmap{{o, 0}}, emap;
  std::vector<int> work;
  auto take_vertex = [&](int v) {
    auto it = vmap.find(v);
    if (it != vmap.end()) return it->second;
    int id = static_cast<int>(R.vertices.size());
    vmap[v] = id;
    R.vertices.push_back(T.vertices[v]);
    work.push_back(v);
    return id;
  };
  auto take_edge = [&](int e) {
    if (emap.count(e)) return;
    TreeEdge E = T.edges[e];
    emap[e] = static_cast<int>(R.edges.size());
    E.a = take_vertex(E.a);
    E.b = take_vertex(E.b);
    R.edges.push_back(E);
  };
  for (int e : eset) take_edge(e);
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    for (int e : T.incident_edges(v))
      if (T.other_end(e, v) != o) take_edge(e);
  }
  // relabel gammas of the copied vertices and of the root
  auto fix = [&](VertexGraph& g) {
    for (GammaArc& a : g.arcs) {
      a.eminus = emap.at(a.eminus);
      a.eplus = emap.at(a.eplus);
    }
    std::map<int, std::vector<int>> loops;
    for (auto& [e, L] : g.loops) loops[emap.at(e)] = L;
    g.loops = std::move(loops);
  };
  for (std::size_t v = 1; v < R.vertices.size(); ++v)
    if (!R.vertices[v].label.gamma.arcs.empty()) fix(R.vertices[v].label.gamma);
  VertexGraph g = gamma;
  fix(g);
  R.vertices[0].label.tuples = tuples_of_gamma(g, prim);
  R.vertices[0].label.gamma = std::move(g);
  return R;
}

}  // namespace detail

// Split the level set at a family of parallel, equal-valued arcs: each arc
// contributes the closure of its lower loop, and the pieces reassemble into
// independent graphs with their own asymptotic data.
inline std::vector<std::pair<AsymptoticData, DecoratedGraph>> split_at_arcset(
    const DecoratedGraph& T, int o, const std::vector<int>& A) {
  const VertexGraph& g = T.vertices[o].label.gamma;
  int nA = static_cast<int>(g.arcs.size());
  if (A.size() < 2) throw std::invalid_argument("split_at_arcset: need at least two arcs");
  std::set<int> Aset(A.begin(), A.end());
  if (Aset.size() != A.size()) throw std::invalid_argument("split_at_arcset: repeated arc");
  for (int a : A) {
    if (a < 0 || a >= nA) throw std::invalid_argument("split_at_arcset: arc id out of range");
    if (g.arcs[a].from != g.arcs[A[0]].from || g.arcs[a].to != g.arcs[A[0]].to)
      throw std::invalid_argument("split_at_arcset: arcs do not share both endpoints");
  }
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = i + 1; j < A.size(); ++j)
      if (forced_equal(T, o, A[i], A[j]) == ForcedEqual::Independent)
        throw std::invalid_argument("split_at_arcset: arcs are not forced to equal value");

  int u = g.arcs[A[0]].from, w = g.arcs[A[0]].to;
  IntPair prim = angle_primitive(T, o);

  // per-arc closure of the lower loop, under shared edge labels
  std::vector<std::set<int>> comp(A.size());
  std::vector<std::set<int>> eset(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    std::vector<int> work;
    auto push = [&](int a) {
      if (Aset.count(a)) return;
      if (comp[i].insert(a).second) work.push_back(a);
    };
    for (int a : g.loops.at(g.arcs[A[i]].eminus)) push(a);
    while (!work.empty()) {
      int a = work.back();
      work.pop_back();
      for (int e : {g.arcs[a].eminus, g.arcs[a].eplus})
        for (int b : g.loops.at(e)) push(b);
    }
    for (int a : comp[i]) {
      eset[i].insert(g.arcs[a].eminus);
      eset[i].insert(g.arcs[a].eplus);
    }
  }
  // disjointness and coverage
  std::set<int> all;
  std::size_t covered = 0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    covered += comp[i].size();
    all.insert(comp[i].begin(), comp[i].end());
  }
  if (covered != all.size() || static_cast<int>(all.size() + A.size()) != nA)
    throw std::runtime_error("split_at_arcset: the arc family does not pinch the level set");

  std::vector<std::pair<AsymptoticData, DecoratedGraph>> out;
  for (std::size_t i = 0; i < A.size(); ++i) {
    // Q and the multiplier at the fused vertex
    IntPair Q(Int(0), Int(0));
    for (int e : eset[i]) Q = T.edge_lower(e, o) ? Q + T.edges[e].q : Q - T.edges[e].q;
    Int mhat = 0;
    if (!Q.is_zero()) {
      mhat = prim.p != 0 ? Int(Q.p / prim.p) : Int(Q.pp / prim.pp);
      if (!(prim * mhat == Q))
        throw std::runtime_error("split_at_arcset: piece class is not a multiple of the angle pair");
    }
    // the piece of the level-set graph, with u and w fused to one vertex
    VertexGraph h;
    std::vector<int> vmap(g.vertices.size(), -1);
    int fused = 0;
    h.vertices.push_back(GammaVertex{Int(0)});
    vmap[u] = vmap[w] = fused;
    Int msum = 0;
    std::vector<int> amap(nA, -1);
    for (int a : comp[i]) {
      GammaArc x = g.arcs[a];
      for (int* end : {&x.from, &x.to}) {
        if (vmap[*end] < 0) {
          vmap[*end] = static_cast<int>(h.vertices.size());
          h.vertices.push_back(g.vertices[*end]);
          msum += g.vertices[*end].m;
        }
        *end = vmap[*end];
      }
      amap[a] = static_cast<int>(h.arcs.size());
      h.arcs.push_back(x);
    }
    h.vertices[fused].m = mhat - msum;
    for (int e : eset[i]) {
      std::vector<int> L;
      for (int a : g.loops.at(e))
        if (comp[i].count(a)) L.push_back(amap[a]);
      h.loops[e] = std::move(L);
    }
    int fused_val = h.valency(fused);
    if (h.vertices[fused].m == 0 && fused_val == 2) {
      // the fused point is invisible: its two incident arcs join, or, when
      // they are one self-loop, the whole vertex dissolves from the tree
      int x = -1, y = -1;
      for (std::size_t a = 0; a < h.arcs.size(); ++a) {
        if (h.arcs[a].to == fused) x = static_cast<int>(a);
        if (h.arcs[a].from == fused) y = static_cast<int>(a);
      }
      if (x == y) {
        // single self-loop: the tree vertex is no vertex at all; its two
        // edges concatenate across it
        if (eset[i].size() != 2)
          throw std::runtime_error("split_at_arcset: dissolving piece with extra edges");
        auto it = eset[i].begin();
        int ea = *it++, eb = *it;
        DecoratedGraph R = detail::extract_component(T, o, eset[i], T.vertices[o].angle,
                                                     h, prim);
        // R has root 0 carrying ea/eb images; dissolve it
        int ra = -1, rb = -1;
        for (int e : R.incident_edges(0)) (ra < 0 ? ra : rb) = e;
        (void)ea;
        (void)eb;
        if (rb < 0 || !(R.edges[ra].q == R.edges[rb].q))
          throw std::runtime_error("split_at_arcset: cannot dissolve the fused vertex");
        int xx = R.other_end(ra, 0), yy = R.other_end(rb, 0);
        R.edges[ra].a = xx;
        R.edges[ra].b = yy;
        R = detail::drop_and_renumber(R, {0}, {rb}, {{rb, ra}});
        Report rep = validate_graph(R);
        if (!rep.ok())
          throw std::runtime_error("split_at_arcset: invalid piece: " +
                                   detail::first_violation(rep));
        out.emplace_back(asymptotic_of(R), std::move(R));
        continue;
      }
      if (h.arcs[x].eminus != h.arcs[y].eminus || h.arcs[x].eplus != h.arcs[y].eplus)
        throw std::runtime_error("split_at_arcset: invisible vertex with mismatched labels");
      h.arcs[x].to = h.arcs[y].to;
      VertexGraph h2;
      std::vector<int> vmap2(h.vertices.size(), -1);
      for (std::size_t v = 0; v < h.vertices.size(); ++v) {
        if (static_cast<int>(v) == fused) continue;
        vmap2[v] = static_cast<int>(h2.vertices.size());
        h2.vertices.push_back(h.vertices[v]);
      }
      std::vector<int> amap2(h.arcs.size(), -1);
      for (std::size_t a = 0; a < h.arcs.size(); ++a) {
        if (static_cast<int>(a) == y) continue;
        amap2[a] = static_cast<int>(h2.arcs.size());
        GammaArc z = h.arcs[a];
        z.from = vmap2[z.from];
        z.to = vmap2[z.to];
        h2.arcs.push_back(z);
      }
      for (const auto& [e, L] : h.loops) {
        std::vector<int> L2;
        for (int a : L)
          if (a != y) L2.push_back(amap2[a]);
        h2.loops[e] = std::move(L2);
      }
      h = std::move(h2);
    }
    DecoratedGraph R = detail::extract_component(T, o, eset[i], T.vertices[o].angle, h, prim);
    Report rep = validate_graph(R);
    if (!rep.ok())
      throw std::runtime_error("split_at_arcset: invalid piece: " + detail::first_violation(rep));
    AsymptoticData data = asymptotic_of(R);
    out.emplace_back(std::move(data), std::move(R));
  }
  return out;
}

// --- refinement moves ------------------------------------------------------

struct ReduceVertex {
  int o{0};
  int upsilon{0};
};
struct SplitTrivalent {
  int o{0};
  int upsilon{0};
  bool upper{true};  // whether the two distinguished edges lead upward
  IntPair new_angle;
};
using RefineMove = std::variant<ReduceVertex, SplitTrivalent>;

namespace detail {

inline DecoratedGraph refine_reduce(const DecoratedGraph& T, const ReduceVertex& mv) {
  const VertexGraph& g0 = T.vertices[mv.o].label.gamma;
  int u = mv.upsilon;
  int val = g0.valency(u);
  if (!(val > 4 || (val == 4 && g0.vertices[u].m != 0)))
    throw std::runtime_error("refine: vertex is not reducible");
  std::string last = "no admissible anchor arc";
  for (std::size_t f = 0; f < g0.arcs.size(); ++f) {
    if (g0.arcs[f].to != u) continue;
    int fst = static_cast<int>(f);
    int e = g0.arcs[fst].eminus, ep = g0.arcs[fst].eplus;
    int snd = g0.next_in_loop(e, fst);
    int trd = g0.next_in_loop(ep, fst);
    if (snd == fst || trd == fst || snd == trd) continue;
    if (g0.arcs[snd].from != u || g0.arcs[trd].from != u) continue;
    VertexGraph g = g0;
    int nu = static_cast<int>(g.vertices.size());
    g.vertices.push_back(GammaVertex{Int(0)});
    g.arcs[fst].to = nu;
    g.arcs[snd].from = nu;
    g.arcs[trd].from = nu;
    int epp = g.arcs[snd].eplus, eppp = g.arcs[trd].eminus;
    int nid = static_cast<int>(g.arcs.size());
    g.arcs.push_back(GammaArc{u, nu, eppp, epp});
    auto insert_before = [&](int edge, int before) {
      std::vector<int>& L = g.loops.at(edge);
      auto it = std::find(L.begin(), L.end(), before);
      L.insert(it, nid);
    };
    insert_before(epp, snd);
    insert_before(eppp, trd);
    DecoratedGraph R = T;
    R.vertices[mv.o].label.gamma = std::move(g);
    Report rep = validate_graph(R);
    if (rep.ok()) return R;
    last = first_violation(rep);
  }
  throw std::runtime_error("refine: " + last);
}

inline std::vector<int> rotated_to(const std::vector<int>& L, int first) {
  auto it = std::find(L.begin(), L.end(), first);
  std::vector<int> out(it, L.end());
  out.insert(out.end(), L.begin(), it);
  return out;
}

inline void cyclic_dedupe(std::vector<int>& L) {
  std::vector<int> out;
  for (int x : L)
    if (out.empty() || out.back() != x) out.push_back(x);
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  L = std::move(out);
}

inline DecoratedGraph refine_split(const DecoratedGraph& T, const SplitTrivalent& mv) {
  int o = mv.o, u = mv.upsilon;
  const VertexGraph& g = T.vertices[o].label.gamma;
  if (g.vertices.size() < 2) throw std::runtime_error("refine: level-set graph has one vertex");
  if (g.valency(u) != 4 || g.vertices[u].m != 0)
    throw std::runtime_error("refine: vertex is not a splittable interior crossing");
  auto side = [&](const GammaArc& a) { return mv.upper ? a.eplus : a.eminus; };
  std::vector<int> ins, outs;
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    if (g.arcs[a].to == u) ins.push_back(static_cast<int>(a));
    if (g.arcs[a].from == u) outs.push_back(static_cast<int>(a));
  }
  if (ins.size() != 2 || outs.size() != 2) throw std::runtime_error("refine: unbalanced crossing");
  int e = side(g.arcs[ins[0]]), ep = side(g.arcs[ins[1]]);
  if (e == ep) throw std::runtime_error("refine: no two distinct edges on the chosen side");
  if (e > ep) std::swap(e, ep);
  auto out_with = [&](int label) {
    for (int a : outs)
      if (side(g.arcs[a]) == label) return a;
    throw std::runtime_error("refine: mismatched crossing labels");
  };
  // chains: each entering arc continues on the other distinguished edge
  std::map<int, std::vector<int>> chains;  // chain id -> arc sequence
  std::map<int, int> chain_of;
  {
    int cid = 0;
    std::set<int> used;
    for (int start : ins) {
      if (used.count(start) || g.arcs[start].from == u) continue;
      std::vector<int> chain{start};
      used.insert(start);
      int cur = start;
      while (true) {
        int nxt = out_with(side(g.arcs[cur]) == e ? ep : e);
        if (used.count(nxt) && nxt != chain.front())
          throw std::runtime_error("refine: crossing chains collide");
        chain.push_back(nxt);
        used.insert(nxt);
        if (g.arcs[nxt].to != u) break;
        cur = nxt;
      }
      for (int a : chain) chain_of[a] = cid;
      chains[cid++] = std::move(chain);
    }
    if (used.size() != ins.size() + outs.size() - [&] {
          int self = 0;
          for (int a : ins)
            if (g.arcs[a].from == u) ++self;
          return self;
        }())
      throw std::runtime_error("refine: crossing cannot be resolved into chains");
  }
  // each chain must keep one face on the untouched side
  for (auto& [cid, chain] : chains) {
    int common = mv.upper ? g.arcs[chain[0]].eminus : g.arcs[chain[0]].eplus;
    for (int a : chain)
      if ((mv.upper ? g.arcs[a].eminus : g.arcs[a].eplus) != common)
        throw std::runtime_error("refine: chain crosses several faces");
  }

  // new tree vertex and edge
  AngleSpec na = AngleSpec::interior(mv.new_angle);
  if (mv.upper) {
    if (!angle_lt(T.vertices[o].angle, na))
      throw std::runtime_error("refine: new angle not above the split vertex");
  } else if (!angle_lt(na, T.vertices[o].angle)) {
    throw std::runtime_error("refine: new angle not below the split vertex");
  }
  DecoratedGraph R = T;
  int op = static_cast<int>(R.vertices.size());
  int ehat = static_cast<int>(R.edges.size());
  IntPair qhat = R.edges[e].q + R.edges[ep].q;
  for (int f : {e, ep}) {
    if (R.edges[f].a == o) R.edges[f].a = op;
    else R.edges[f].b = op;
  }
  R.edges.push_back(TreeEdge{o, op, qhat});
  {
    TreeVertex V;
    V.angle = na;
    V.label.kind = VertexLabel::Kind::Interior;
    VertexGraph& fg = V.label.gamma;
    fg.vertices.push_back(GammaVertex{Int(0)});
    if (mv.upper) {
      fg.arcs.push_back(GammaArc{0, 0, ehat, e});
      fg.arcs.push_back(GammaArc{0, 0, ehat, ep});
      fg.loops[e] = {0};
      fg.loops[ep] = {1};
      fg.loops[ehat] = {0, 1};
    } else {
      fg.arcs.push_back(GammaArc{0, 0, e, ehat});
      fg.arcs.push_back(GammaArc{0, 0, ep, ehat});
      fg.loops[e] = {0};
      fg.loops[ep] = {1};
      fg.loops[ehat] = {0, 1};
    }
    R.vertices.push_back(std::move(V));
  }
  // rebuild the level-set graph at o: remove u, fuse the chains
  VertexGraph h;
  std::vector<int> vmap(g.vertices.size(), -1);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (static_cast<int>(v) == u) continue;
    vmap[v] = static_cast<int>(h.vertices.size());
    h.vertices.push_back(g.vertices[v]);
  }
  std::vector<int> aimg(g.arcs.size(), -1);
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    if (chain_of.count(static_cast<int>(a))) continue;
    aimg[a] = static_cast<int>(h.arcs.size());
    GammaArc x = g.arcs[a];
    x.from = vmap[x.from];
    x.to = vmap[x.to];
    h.arcs.push_back(x);
  }
  for (auto& [cid, chain] : chains) {
    int id = static_cast<int>(h.arcs.size());
    GammaArc x;
    x.from = vmap[g.arcs[chain.front()].from];
    x.to = vmap[g.arcs[chain.back()].to];
    if (mv.upper) {
      x.eminus = g.arcs[chain.front()].eminus;
      x.eplus = ehat;
    } else {
      x.eminus = ehat;
      x.eplus = g.arcs[chain.front()].eplus;
    }
    for (int a : chain) aimg[a] = id;
    h.arcs.push_back(x);
  }
  for (const auto& [f, L] : g.loops) {
    if (f == e || f == ep) continue;
    std::vector<int> nl;
    for (int a : L) nl.push_back(aimg[a]);
    cyclic_dedupe(nl);
    h.loops[f] = std::move(nl);
  }
  {
    std::vector<int> combined = rotated_to(g.loops.at(e), out_with(e));
    std::vector<int> part2 = rotated_to(g.loops.at(ep), out_with(ep));
    combined.insert(combined.end(), part2.begin(), part2.end());
    std::vector<int> nl;
    for (int a : combined) nl.push_back(aimg[a]);
    cyclic_dedupe(nl);
    h.loops[ehat] = std::move(nl);
  }
  R.vertices[o].label.gamma = std::move(h);
  Report rep = validate_graph(R);
  if (!rep.ok()) throw std::runtime_error("refine: invalid result: " + first_violation(rep));
  return R;
}

}  // namespace detail

inline DecoratedGraph refine(const DecoratedGraph& T, const RefineMove& mv) {
  if (const auto* r = std::get_if<ReduceVertex>(&mv)) return detail::refine_reduce(T, *r);
  return detail::refine_split(T, std::get<SplitTrivalent>(mv));
}

// --- fusing two adjacent multivalent vertices ------------------------------

// Collapse a tree edge joining two multivalent interior vertices: the two
// level-set graphs fuse along the shared loop. Every interleaving of the two
// cyclic marker sequences is a candidate; the validated, distinct outcomes
// are returned.
inline std::vector<DecoratedGraph> merge_adjacent(const DecoratedGraph& T, int e) {
  std::vector<DecoratedGraph> out;
  int o1 = T.edges[e].a, o2 = T.edges[e].b;
  if (angle_lt(T.vertices[o2].angle, T.vertices[o1].angle)) std::swap(o1, o2);
  for (int v : {o1, o2})
    if (T.vertices[v].label.kind != VertexLabel::Kind::Interior || !T.is_multivalent(v))
      return out;
  const VertexLabel &L1 = T.vertices[o1].label, &L2 = T.vertices[o2].label;
  if (!L1.tuples.empty() && !L2.tuples.empty()) return out;  // both pinned
  AngleSpec angle = !L1.tuples.empty()   ? T.vertices[o1].angle
                    : !L2.tuples.empty() ? T.vertices[o2].angle
                                         : T.vertices[o1].angle;
  const VertexGraph &g1 = L1.gamma, &g2 = L2.gamma;
  const std::vector<int> &low = g1.loops.at(e), &up = g2.loops.at(e);
  int n1 = static_cast<int>(low.size()), n2 = static_cast<int>(up.size());
  int off = static_cast<int>(g1.vertices.size());

  // enumerate cyclic interleavings: markers are the loop positions; the first
  // lower marker is pinned at the front
  std::vector<std::vector<std::pair<int, int>>> seqs;  // (side, loop position)
  for (int rot = 0; rot < n2; ++rot) {
    std::vector<std::pair<int, int>> seq{{0, 0}};
    std::function<void(int, int)> rec = [&](int i, int j) {
      if (i == n1 && j == n2) {
        seqs.push_back(seq);
        return;
      }
      if (i < n1) {
        seq.push_back({0, i});
        rec(i + 1, j);
        seq.pop_back();
      }
      if (j < n2) {
        seq.push_back({1, (rot + j) % n2});
        rec(i, j + 1);
        seq.pop_back();
      }
    };
    rec(1, 0);
  }

  std::set<std::string> seen;
  for (const auto& seq : seqs) {
    VertexGraph h;
    for (const GammaVertex& v : g1.vertices) h.vertices.push_back(v);
    for (const GammaVertex& v : g2.vertices) h.vertices.push_back(v);
    std::map<int, std::vector<int>> cover;  // old arc -> new arcs in order
    std::set<int> in_low(low.begin(), low.end()), in_up(up.begin(), up.end());
    for (std::size_t a = 0; a < g1.arcs.size(); ++a)
      if (!in_low.count(static_cast<int>(a))) {
        cover[static_cast<int>(a)] = {static_cast<int>(h.arcs.size())};
        h.arcs.push_back(g1.arcs[a]);
      }
    for (std::size_t a = 0; a < g2.arcs.size(); ++a)
      if (!in_up.count(static_cast<int>(a))) {
        GammaArc x = g2.arcs[a];
        x.from += off;
        x.to += off;
        cover[1000000 + static_cast<int>(a)] = {static_cast<int>(h.arcs.size())};
        h.arcs.push_back(x);
      }
    int m = static_cast<int>(seq.size());
    auto marker_vertex = [&](std::pair<int, int> mk) {
      return mk.first == 0 ? g1.arcs[low[mk.second]].to : g2.arcs[up[mk.second]].to + off;
    };
    // active arcs right after each marker
    auto active_low_after = [&](int t) {
      for (int s = t; s >= t - m + 1; --s) {
        auto mk = seq[((s % m) + m) % m];
        if (mk.first == 0) return low[(mk.second + 1) % n1];
      }
      return low[0];
    };
    auto active_up_after = [&](int t) {
      for (int s = t; s >= t - m + 1; --s) {
        auto mk = seq[((s % m) + m) % m];
        if (mk.first == 1) return up[(mk.second + 1) % n2];
      }
      return up[0];
    };
    bool ok = true;
    for (int t = 0; t < m && ok; ++t) {
      int al = active_low_after(t), au = active_up_after(t);
      int id = static_cast<int>(h.arcs.size());
      GammaArc x;
      x.from = marker_vertex(seq[t]);
      x.to = marker_vertex(seq[(t + 1) % m]);
      x.eminus = g1.arcs[al].eminus;
      x.eplus = g2.arcs[au].eplus;
      h.arcs.push_back(x);
      cover[al].push_back(id);
      cover[1000000 + au].push_back(id);
    }
    if (!ok) continue;
    for (const auto& [f, L] : g1.loops) {
      if (f == e) continue;
      std::vector<int> nl;
      for (int a : L)
        for (int b : cover[a]) nl.push_back(b);
      h.loops[f] = std::move(nl);
    }
    for (const auto& [f, L] : g2.loops) {
      if (f == e) continue;
      std::vector<int> nl;
      for (int a : L)
        for (int b : cover[1000000 + a]) nl.push_back(b);
      h.loops[f] = std::move(nl);
    }

    DecoratedGraph R = T;
    R.vertices[o1].angle = angle;
    R.vertices[o1].label.gamma = std::move(h);
    std::vector<FourTuple> tuples = L1.tuples;
    tuples.insert(tuples.end(), L2.tuples.begin(), L2.tuples.end());
    R.vertices[o1].label.tuples = std::move(tuples);
    // reroute o2's other edges to o1 and drop o2 and the shared edge
    for (std::size_t f = 0; f < R.edges.size(); ++f) {
      if (static_cast<int>(f) == e) continue;
      if (R.edges[f].a == o2) R.edges[f].a = o1;
      if (R.edges[f].b == o2) R.edges[f].b = o1;
    }
    R = detail::drop_and_renumber(R, {o2}, {e});
    Report rep = validate_graph(R);
    if (!rep.ok()) continue;
    std::string key = canonical_encoding(R, exact_angle_key);
    if (seen.insert(key).second) out.push_back(std::move(R));
  }
  return out;
}

// --- single-vertex degenerations ------------------------------------------

// Move the angle of a free multivalent vertex; fails (nullopt) when the
// vertex is pinned by housed tuples or the result does not validate.
inline std::optional<DecoratedGraph> set_vertex_angle(const DecoratedGraph& T, int v,
                                                      const AngleSpec& a) {
  if (!a.is_interior()) return std::nullopt;
  if (T.vertices[v].label.kind != VertexLabel::Kind::Interior || !T.is_multivalent(v))
    return std::nullopt;
  if (!T.vertices[v].label.tuples.empty()) return std::nullopt;
  if (angle_eq(T.vertices[v].angle, a)) return std::nullopt;
  DecoratedGraph R = T;
  R.vertices[v].angle = a;
  if (!validate_graph(R).ok()) return std::nullopt;
  return R;
}

// Slide a monovalent end onto its neighboring free vertex: the neighbor takes
// the end's angle and houses its tuple, and the level-set circle of the
// connecting edge contracts onto the end.
inline std::optional<DecoratedGraph> absorb_leg(const DecoratedGraph& T, int leg) {
  if (T.degree(leg) != 1) return std::nullopt;
  const VertexLabel& LL = T.vertices[leg].label;
  if (LL.kind != VertexLabel::Kind::Interior || LL.tuples.size() != 1) return std::nullopt;
  int el = T.incident_edges(leg)[0];
  int o = T.other_end(el, leg);
  if (T.vertices[o].label.kind != VertexLabel::Kind::Interior || !T.is_multivalent(o))
    return std::nullopt;
  if (!T.vertices[o].label.tuples.empty()) return std::nullopt;  // pinned
  const VertexGraph& g = T.vertices[o].label.gamma;
  auto it = g.loops.find(el);
  if (it == g.loops.end() || it->second.size() != 1) return std::nullopt;
  int arc = it->second[0];
  if (g.arcs[arc].from != g.arcs[arc].to) return std::nullopt;
  int x = g.arcs[arc].from;
  Int mlabel = -Int(content(LL.tuples[0].pair));  // the end is a (0,-,...) tuple
  VertexGraph h;
  std::vector<int> amap(g.arcs.size(), -1);
  h.vertices = g.vertices;
  h.vertices[x].m = h.vertices[x].m + mlabel;
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    if (static_cast<int>(a) == arc) continue;
    amap[a] = static_cast<int>(h.arcs.size());
    h.arcs.push_back(g.arcs[a]);
  }
  for (const auto& [f, L] : g.loops) {
    if (f == el) continue;
    std::vector<int> nl;
    for (int a : L)
      if (a != arc) nl.push_back(amap[a]);
    h.loops[f] = std::move(nl);
  }
  DecoratedGraph R = T;
  R.vertices[o].angle = T.vertices[leg].angle;
  R.vertices[o].label.gamma = std::move(h);
  R.vertices[o].label.tuples = {LL.tuples[0]};
  R = detail::drop_and_renumber(R, {leg}, {el});
  if (!validate_graph(R).ok()) return std::nullopt;
  return R;
}

// --- codimension-one classification ---------------------------------------

enum class StratumClass { Codim0, Type1, Type2, Type3, Type4, Deeper };

inline std::string to_string(StratumClass c) {
  switch (c) {
    case StratumClass::Codim0: return "codim0";
    case StratumClass::Type1: return "type1";
    case StratumClass::Type2: return "type2";
    case StratumClass::Type3: return "type3";
    case StratumClass::Type4: return "type4";
    default: return "deeper";
  }
}

namespace detail {

enum class MvKind { Circle, Trivalent, Quad, Other };

inline MvKind mv_kind(const DecoratedGraph& T, int v) {
  const VertexGraph& g = T.vertices[v].label.gamma;
  int deg = T.degree(v);
  int zeros = 0, zero_id = -1;
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    if (g.vertices[i].m == 0) {
      ++zeros;
      zero_id = static_cast<int>(i);
    }
  if (deg == 2 && zeros == 0) return MvKind::Circle;
  if (deg == 3 && zeros == 1 && g.valency(zero_id) == 4) {
    bool rest = true;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
      if (static_cast<int>(i) != zero_id && g.valency(static_cast<int>(i)) != 2) rest = false;
    if (rest) return MvKind::Trivalent;
  }
  if (deg == 4 && g.vertices.size() == 2) return MvKind::Quad;
  return MvKind::Other;
}

}  // namespace detail

// Structural match of a validated graph against the four codimension-one
// patterns: a coincident pair of trivalent angles, a four-valent vertex with
// a two-vertex level set, an extra end-carrying bivalent vertex, or a
// trivalent angle that lands on a (0,+,...) pair angle.
inline StratumClass classify_codim1(const DecoratedGraph& T) {
  AsymptoticData A = asymptotic_of(T);
  StratumData S = stratum_data(T);
  long total = moduli_dimension(A);
  if (S.dim == total) return StratumClass::Codim0;
  if (S.dim != total - 1) return StratumClass::Deeper;
  long k = A.N_minus() + A.N_hat() + A.c_minus + A.c_plus - 2;

  std::vector<AngleSpec> plus_angles;
  for (const FourTuple& t : A.tuples)
    if (t.delta == 0 && t.eps > 0 && defines_angle(t.pair))
      plus_angles.push_back(AngleSpec::interior(t.pair));

  long tri = 0, quad = 0, circle = 0, other = 0, hits = 0, coincident = 0;
  std::vector<AngleSpec> tri_angles;
  for (std::size_t v = 0; v < T.vertices.size(); ++v) {
    if (T.vertices[v].label.kind != VertexLabel::Kind::Interior ||
        !T.is_multivalent(static_cast<int>(v)))
      continue;
    switch (detail::mv_kind(T, static_cast<int>(v))) {
      case detail::MvKind::Circle: ++circle; break;
      case detail::MvKind::Trivalent:
        ++tri;
        tri_angles.push_back(T.vertices[v].angle);
        break;
      case detail::MvKind::Quad: ++quad; break;
      default: ++other; break;
    }
  }
  if (other > 0) return StratumClass::Deeper;
  for (const AngleSpec& a : tri_angles)
    for (const AngleSpec& p : plus_angles)
      if (angle_eq(a, p)) { ++hits; break; }
  for (std::size_t i = 0; i < tri_angles.size(); ++i)
    for (std::size_t j = i + 1; j < tri_angles.size(); ++j)
      if (angle_eq(tri_angles[i], tri_angles[j])) ++coincident;

  if (quad == 1 && tri == k - 2 && hits == 0 && coincident == 0) return StratumClass::Type2;
  if (quad > 0) return StratumClass::Deeper;
  if (tri == k && coincident == 1 && hits == 0) return StratumClass::Type1;
  if (tri == k && hits == 1 && coincident == 0) return StratumClass::Type4;
  if (tri == k - 1 && hits == 0 && coincident == 0 && S.B.size() == 1) return StratumClass::Type3;
  return StratumClass::Deeper;
}

// --- census ----------------------------------------------------------------

struct CensusBounds {
  int max_entries{256};
  int max_leaves{7};
  int closure_depth{3};
  bool with_boundary{true};
};

struct CensusEntry {
  std::string signature;
  std::optional<DecoratedGraph> rep;
  AsymptoticData data;
  StratumData stratum;
  Int aut_order{1};
  bool nonempty{true};
  bool boundary{false};
  bool cylinder{false};
  StratumClass cls{StratumClass::Codim0};
};

namespace detail {

struct LeafSpec {
  AngleSpec angle;
  VertexLabel label;
  bool plus_rule{true};  // whether the leaf edge carries +P when the leaf sits on top
};

// Monovalent edge pair as the validator expects it, given which endpoint of
// the edge sits above.
inline IntPair leaf_edge_pair(const DecoratedGraph& T, int v) {
  int e = T.incident_edges(v)[0];
  const VertexLabel& L = T.vertices[v].label;
  IntPair P = vertex_pair(T, v);
  using K = VertexLabel::Kind;
  bool plus;
  switch (L.kind) {
    case K::ZeroInt: plus = true; break;
    case K::PiInt: plus = false; break;
    case K::ZeroEnd: plus = L.end.eps < 0; break;
    case K::PiEnd: plus = L.end.eps > 0; break;
    default: plus = T.edge_lower(e, v); break;
  }
  return plus ? P : -P;
}

struct CirclePlacement {
  int edge;                     // topology edge index
  AngleSpec angle;
  std::vector<FourTuple> ring;  // cyclic order of housed tuples
};

inline std::optional<DecoratedGraph> assemble_candidate(
    const std::vector<LeafSpec>& leaves, const std::vector<std::pair<int, int>>& topo_edges,
    const std::vector<AngleSpec>& node_angle, const std::vector<CirclePlacement>& circles) {
  DecoratedGraph R;
  int L = static_cast<int>(leaves.size());
  int N = static_cast<int>(node_angle.size());
  for (int i = 0; i < N; ++i) {
    TreeVertex V;
    V.angle = node_angle[i];
    if (i < L) V.label = leaves[i].label;
    else V.label.kind = VertexLabel::Kind::Interior;
    R.vertices.push_back(std::move(V));
  }
  // subdivide topology edges by their circles (sorted by angle along the edge)
  for (std::size_t te = 0; te < topo_edges.size(); ++te) {
    int a = topo_edges[te].first, b = topo_edges[te].second;
    if (angle_lt(node_angle[b], node_angle[a])) std::swap(a, b);
    std::vector<int> here;
    for (std::size_t c = 0; c < circles.size(); ++c)
      if (circles[c].edge == static_cast<int>(te)) here.push_back(static_cast<int>(c));
    std::sort(here.begin(), here.end(), [&](int x, int y) {
      return angle_lt(circles[x].angle, circles[y].angle);
    });
    int prev = a;
    for (int c : here) {
      if (!angle_lt(node_angle[a], circles[c].angle) ||
          !angle_lt(circles[c].angle, node_angle[b]))
        return std::nullopt;
      TreeVertex V;
      V.angle = circles[c].angle;
      V.label.kind = VertexLabel::Kind::Interior;
      V.label.tuples = circles[c].ring;
      int id = static_cast<int>(R.vertices.size());
      R.vertices.push_back(std::move(V));
      R.edges.push_back(TreeEdge{prev, id, IntPair(Int(0), Int(0))});
      prev = id;
    }
    R.edges.push_back(TreeEdge{prev, b, IntPair(Int(0), Int(0))});
  }
  // solve the edge pairs: monovalent rules seed, vertex sums propagate
  int nE = static_cast<int>(R.edges.size());
  std::vector<char> known(nE, 0);
  for (int v = 0; v < static_cast<int>(R.vertices.size()); ++v) {
    if (R.degree(v) != 1) continue;
    int e = R.incident_edges(v)[0];
    R.edges[e].q = leaf_edge_pair(R, v);
    known[e] = 1;
  }
  bool progress = true;
  while (progress) {
    progress = false;
    for (int v = 0; v < static_cast<int>(R.vertices.size()); ++v) {
      if (R.degree(v) < 2) continue;
      std::vector<int> inc = R.incident_edges(v);
      int unknown = -1, cnt = 0;
      for (int e : inc)
        if (!known[e]) {
          unknown = e;
          ++cnt;
        }
      if (cnt != 1) continue;
      IntPair target = vertex_pair(R, v);
      IntPair sum(Int(0), Int(0));
      for (int e : inc) {
        if (!known[e]) continue;
        sum = R.edge_lower(e, v) ? sum + R.edges[e].q : sum - R.edges[e].q;
      }
      R.edges[unknown].q = R.edge_lower(unknown, v) ? target - sum : sum - target;
      known[unknown] = 1;
      progress = true;
    }
  }
  for (int e = 0; e < nE; ++e)
    if (!known[e] || R.edges[e].q.is_zero()) return std::nullopt;
  // level-set graphs
  for (int v = 0; v < static_cast<int>(R.vertices.size()); ++v) {
    if (R.degree(v) < 2 || R.vertices[v].label.kind != VertexLabel::Kind::Interior) continue;
    std::vector<int> lo = R.e_minus(v), hi = R.e_plus(v);
    VertexGraph& g = R.vertices[v].label.gamma;
    if (R.vertices[v].label.tuples.empty()) {
      if (lo.size() == 2 && hi.size() == 1) {
        g.vertices.push_back(GammaVertex{Int(0)});
        g.arcs.push_back(GammaArc{0, 0, lo[0], hi[0]});
        g.arcs.push_back(GammaArc{0, 0, lo[1], hi[0]});
        g.loops[lo[0]] = {0};
        g.loops[lo[1]] = {1};
        g.loops[hi[0]] = {0, 1};
      } else if (lo.size() == 1 && hi.size() == 2) {
        g.vertices.push_back(GammaVertex{Int(0)});
        g.arcs.push_back(GammaArc{0, 0, lo[0], hi[0]});
        g.arcs.push_back(GammaArc{0, 0, lo[0], hi[1]});
        g.loops[hi[0]] = {0};
        g.loops[hi[1]] = {1};
        g.loops[lo[0]] = {0, 1};
      } else {
        return std::nullopt;
      }
    } else {
      if (lo.size() != 1 || hi.size() != 1) return std::nullopt;
      int n = static_cast<int>(R.vertices[v].label.tuples.size());
      std::vector<int> ring;
      for (int i = 0; i < n; ++i) {
        const FourTuple& t = R.vertices[v].label.tuples[i];
        g.vertices.push_back(GammaVertex{Int(t.eps) * content(t.pair)});
        g.arcs.push_back(GammaArc{i, (i + 1) % n, lo[0], hi[0]});
        ring.push_back(i);
      }
      g.loops[lo[0]] = ring;
      g.loops[hi[0]] = ring;
    }
  }
  if (!validate_graph(R).ok()) return std::nullopt;
  return R;
}

// All generic graphs of a data set: ends as monovalent leaves, one trivalent
// junction per branching, circles on edges per (0,+,...) angle.
inline std::vector<DecoratedGraph> generic_graphs(const AsymptoticData& A,
                                                  const CensusBounds& b) {
  std::vector<LeafSpec> leaves;
  std::vector<std::pair<AngleSpec, std::vector<FourTuple>>> plus_groups;
  for (const FourTuple& t : A.tuples) {
    if (t.delta == 0 && t.eps < 0) {
      LeafSpec s;
      s.angle = AngleSpec::interior(t.pair);
      s.label.kind = VertexLabel::Kind::Interior;
      s.label.tuples = {t};
      leaves.push_back(std::move(s));
    } else if (t.delta == 1) {
      LeafSpec s;
      s.angle = AngleSpec::zero();
      s.label.kind = VertexLabel::Kind::ZeroEnd;
      s.label.end = t;
      leaves.push_back(std::move(s));
    } else if (t.delta == -1) {
      LeafSpec s;
      s.angle = AngleSpec::pi();
      s.label.kind = VertexLabel::Kind::PiEnd;
      s.label.end = t;
      leaves.push_back(std::move(s));
    } else {
      AngleSpec a = AngleSpec::interior(t.pair);
      bool found = false;
      for (auto& [x, ts] : plus_groups)
        if (angle_eq(x, a)) {
          ts.push_back(t);
          found = true;
        }
      if (!found) plus_groups.push_back({a, {t}});
    }
  }
  for (long i = 0; i < A.c_plus; ++i) {
    LeafSpec s;
    s.angle = AngleSpec::zero();
    s.label.kind = VertexLabel::Kind::ZeroInt;
    s.label.m = 1;
    leaves.push_back(std::move(s));
  }
  for (long i = 0; i < A.c_minus; ++i) {
    LeafSpec s;
    s.angle = AngleSpec::pi();
    s.label.kind = VertexLabel::Kind::PiInt;
    s.label.m = -1;
    leaves.push_back(std::move(s));
  }
  int L = static_cast<int>(leaves.size());
  if (L > b.max_leaves) throw std::runtime_error("census: bounds exceeded (too many ends)");
  std::vector<DecoratedGraph> out;
  if (L < 2) return out;

  // pinned angles, sorted and distinct
  std::vector<AngleSpec> pinned;
  auto addp = [&](const AngleSpec& a) {
    for (const AngleSpec& x : pinned)
      if (angle_eq(x, a)) return;
    auto it = std::lower_bound(pinned.begin(), pinned.end(), a,
                               [](const AngleSpec& x, const AngleSpec& y) { return angle_lt(x, y); });
    pinned.insert(it, a);
  };
  for (const LeafSpec& s : leaves) addp(s.angle);
  for (const auto& [a, ts] : plus_groups) addp(a);
  int gaps = static_cast<int>(pinned.size()) - 1;
  if (gaps < 0) return out;

  // tree topologies over the leaves
  std::vector<std::vector<std::pair<int, int>>> topologies;
  {
    std::vector<std::pair<int, int>> edges{{0, 1}};
    std::function<void(int, int)> grow = [&](int leaf, int next_internal) {
      if (leaf == L) {
        topologies.push_back(edges);
        return;
      }
      std::size_t n = edges.size();
      for (std::size_t e = 0; e < n; ++e) {
        auto saved = edges[e];
        int mid = next_internal;
        edges[e] = {saved.first, mid};
        edges.push_back({mid, saved.second});
        edges.push_back({mid, leaf});
        grow(leaf + 1, next_internal + 1);
        edges.pop_back();
        edges.pop_back();
        edges[e] = saved;
      }
    };
    if (L == 2) topologies.push_back(edges);
    else grow(2, L);
  }

  for (const auto& topo : topologies) {
    int J = L > 2 ? L - 2 : 0;
    // place internal nodes in gaps, with an order within each gap
    std::vector<std::vector<int>> gap_nodes(std::max(gaps, 0));
    std::function<void(int)> place = [&](int j) {
      if (j == J) {
        // representative angles per gap
        std::vector<AngleSpec> node_angle(L + J);
        for (int i = 0; i < L; ++i) node_angle[i] = leaves[i].angle;
        for (int gp = 0; gp < gaps; ++gp) {
          AngleSpec lo = pinned[gp];
          for (int node : gap_nodes[gp]) {
            AngleSpec a = angle_between(lo, pinned[gp + 1]);
            node_angle[node] = a;
            lo = a;
          }
        }
        // local non-extremality at internal nodes
        for (int node = L; node < L + J; ++node) {
          bool below = false, above = false;
          for (const auto& [a, bb] : topo) {
            int othr = -1;
            if (a == node) othr = bb;
            if (bb == node) othr = a;
            if (othr < 0) continue;
            if (angle_lt(node_angle[othr], node_angle[node])) below = true;
            if (angle_lt(node_angle[node], node_angle[othr])) above = true;
          }
          if (!below || !above) return;
        }
        // circle placements per (0,+,...) angle
        std::vector<CirclePlacement> placed;
        std::function<void(std::size_t)> circ = [&](std::size_t gi) {
          if (gi == plus_groups.size()) {
            if (auto R = assemble_candidate(leaves, topo, node_angle, placed)) {
              if (static_cast<int>(out.size()) < 4 * b.max_entries) out.push_back(std::move(*R));
            }
            return;
          }
          const auto& [a, ts] = plus_groups[gi];
          std::vector<int> hosts;
          for (std::size_t te = 0; te < topo.size(); ++te) {
            int x = topo[te].first, y = topo[te].second;
            if (angle_lt(node_angle[y], node_angle[x])) std::swap(x, y);
            if (angle_lt(node_angle[x], a) && angle_lt(a, node_angle[y]))
              hosts.push_back(static_cast<int>(te));
          }
          // partitions of the tuples into groups, injectively hosted
          int n = static_cast<int>(ts.size());
          std::vector<std::vector<int>> groups;
          std::function<void(int)> part = [&](int i) {
            if (i == n) {
              // assign groups to distinct host edges
              std::vector<int> choice(groups.size(), -1);
              std::function<void(std::size_t)> assign = [&](std::size_t gidx) {
                if (gidx == groups.size()) {
                  // cyclic orders per group: fix the first element
                  std::vector<std::vector<int>> orders(groups.size());
                  std::function<void(std::size_t)> ord = [&](std::size_t oi) {
                    if (oi == groups.size()) {
                      std::size_t base = placed.size();
                      for (std::size_t gg = 0; gg < groups.size(); ++gg) {
                        CirclePlacement cp;
                        cp.edge = choice[gg];
                        cp.angle = a;
                        for (int idx : orders[gg]) cp.ring.push_back(ts[idx]);
                        placed.push_back(std::move(cp));
                      }
                      circ(gi + 1);
                      placed.resize(base);
                      return;
                    }
                    std::vector<int> rest(groups[oi].begin() + 1, groups[oi].end());
                    std::sort(rest.begin(), rest.end());
                    do {
                      orders[oi] = {groups[oi][0]};
                      orders[oi].insert(orders[oi].end(), rest.begin(), rest.end());
                      ord(oi + 1);
                    } while (std::next_permutation(rest.begin(), rest.end()));
                  };
                  ord(0);
                  return;
                }
                for (int hst : hosts) {
                  bool used = false;
                  for (std::size_t p = 0; p < gidx; ++p)
                    if (choice[p] == hst) used = true;
                  if (used) continue;
                  choice[gidx] = hst;
                  assign(gidx + 1);
                  choice[gidx] = -1;
                }
              };
              assign(0);
              return;
            }
            for (auto& grp : groups) {
              grp.push_back(i);
              part(i + 1);
              grp.pop_back();
            }
            groups.push_back({i});
            part(i + 1);
            groups.pop_back();
          };
          part(0);
        };
        circ(0);
        return;
      }
      for (int gp = 0; gp < gaps; ++gp) {
        for (std::size_t pos = 0; pos <= gap_nodes[gp].size(); ++pos) {
          gap_nodes[gp].insert(gap_nodes[gp].begin() + pos, L + j);
          place(j + 1);
          gap_nodes[gp].erase(gap_nodes[gp].begin() + pos);
        }
      }
    };
    place(0);
  }
  return out;
}

inline std::string data_key(const AsymptoticData& A) {
  std::vector<std::string> ts;
  for (const FourTuple& t : A.tuples) ts.push_back(to_string(t));
  std::sort(ts.begin(), ts.end());
  std::string out = std::to_string(A.c_minus) + "/" + std::to_string(A.c_plus) + ":";
  for (const std::string& s : ts) out += s;
  return out;
}

}  // namespace detail

struct MoveResult {
  DecoratedGraph graph;
  bool boundary{false};
  std::string via;
};

// All single-step degenerations of a graph: angle coincidences, fusing of
// adjacent multivalent vertices, end absorption, and arc collapses. Boundary
// results change the asymptotic data.
inline std::vector<MoveResult> degeneration_moves(const DecoratedGraph& T, bool with_boundary) {
  std::vector<MoveResult> out;
  int n = static_cast<int>(T.vertices.size());
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) {
      if (v == w || !T.vertices[w].angle.is_interior()) continue;
      if (auto R = set_vertex_angle(T, v, T.vertices[w].angle))
        out.push_back({std::move(*R), false, "equalize"});
    }
  for (std::size_t e = 0; e < T.edges.size(); ++e)
    for (DecoratedGraph& R : merge_adjacent(T, static_cast<int>(e)))
      out.push_back({std::move(R), false, "merge"});
  for (int v = 0; v < n; ++v)
    if (auto R = absorb_leg(T, v)) out.push_back({std::move(*R), false, "absorb"});
  for (int v = 0; v < n; ++v) {
    if (T.vertices[v].label.kind != VertexLabel::Kind::Interior || !T.is_multivalent(v)) continue;
    const VertexGraph& g = T.vertices[v].label.gamma;
    for (std::size_t a = 0; a < g.arcs.size(); ++a) {
      CollapseOutcome res = collapse_arc(T, v, static_cast<int>(a));
      if (auto* in = std::get_if<CollapseInternal>(&res)) {
        out.push_back({std::move(in->graph), false, "collapse"});
      } else if (with_boundary) {
        if (auto* sm = std::get_if<CollapseSameMerge>(&res))
          out.push_back({std::move(sm->graph), true, "collapse-boundary"});
        else if (auto* cc = std::get_if<CollapseCancel>(&res))
          out.push_back({std::move(cc->graph), true, "collapse-boundary"});
      }
    }
  }
  return out;
}

inline std::vector<CensusEntry> census(const AsymptoticData& A, const CensusBounds& b = {}) {
  Report drep = validate_data(A);
  if (!drep.ok())
    throw std::invalid_argument("census: invalid data: " + detail::first_violation(drep));
  std::vector<CensusEntry> entries;
  LinearGraphResult lr = linear_graph(A);
  if (auto* cyl = std::get_if<CylinderCase>(&lr)) {
    CensusEntry e;
    e.signature = "cylinder:" + to_string(cyl->angle);
    e.data = A;
    e.stratum.dim = 1;
    e.cylinder = true;
    entries.push_back(std::move(e));
    return entries;
  }

  std::map<std::string, CensusEntry> table;
  std::vector<std::pair<DecoratedGraph, int>> work;  // graph, closure depth
  auto add = [&](DecoratedGraph R, bool boundary, int depth) {
    if (static_cast<int>(table.size()) >= b.max_entries) return;
    AsymptoticData data = asymptotic_of(R);
    std::string key = homotopy_signature(R);
    if (boundary) key += "|" + detail::data_key(data);
    if (table.count(key)) return;
    CensusEntry e;
    e.signature = key;
    e.data = std::move(data);
    e.stratum = stratum_data(R);
    e.aut_order = aut_group(R).order;
    e.nonempty = check_exists(R).nonempty;
    e.boundary = boundary;
    e.cls = classify_codim1(R);
    e.rep = R;
    table.emplace(key, std::move(e));
    if (!boundary && depth < b.closure_depth) work.push_back({std::move(R), depth});
  };
  for (DecoratedGraph& R : detail::generic_graphs(A, b)) add(std::move(R), false, 0);
  std::size_t head = 0;
  while (head < work.size()) {
    auto [T, depth] = work[head++];
    for (MoveResult& mr : degeneration_moves(T, b.with_boundary))
      add(std::move(mr.graph), mr.boundary, depth + 1);
  }
  for (auto& [k, e] : table) entries.push_back(std::move(e));
  std::sort(entries.begin(), entries.end(), [](const CensusEntry& x, const CensusEntry& y) {
    if (x.boundary != y.boundary) return !x.boundary;
    if (x.stratum.dim != y.stratum.dim) return x.stratum.dim > y.stratum.dim;
    return x.signature < y.signature;
  });
  return entries;
}

// --- adjacency poset -------------------------------------------------------

struct StratumPoset {
  struct Edge {
    int upper{0}, lower{0};
    StratumClass type{StratumClass::Deeper};
    std::string picture;
  };
  std::vector<CensusEntry> entries;
  std::vector<Edge> edges;
};

namespace detail {

inline std::string picture_class(const DecoratedGraph& T, StratumClass cls) {
  if (cls == StratumClass::Type4) return "figure-eight";
  if (cls != StratumClass::Type2) return "";
  for (std::size_t v = 0; v < T.vertices.size(); ++v) {
    if (T.degree(static_cast<int>(v)) != 4 ||
        T.vertices[v].label.kind != VertexLabel::Kind::Interior)
      continue;
    std::size_t lo = T.e_minus(static_cast<int>(v)).size();
    return lo == 2 ? "circles-and-arc" : "three-ray-pants";
  }
  return "";
}

}  // namespace detail

inline StratumPoset adjacency(const std::vector<CensusEntry>& entries,
                              bool include_boundary = false) {
  StratumPoset P;
  P.entries = entries;
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < entries.size(); ++i) index[entries[i].signature] = static_cast<int>(i);
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const CensusEntry& U = entries[i];
    if (U.boundary || !U.rep) continue;
    for (MoveResult& mr : degeneration_moves(*U.rep, include_boundary)) {
      std::string key = homotopy_signature(mr.graph);
      if (mr.boundary) key += "|" + detail::data_key(asymptotic_of(mr.graph));
      auto it = index.find(key);
      if (it == index.end()) continue;
      const CensusEntry& D = entries[it->second];
      if (D.stratum.dim + 1 != U.stratum.dim) continue;
      if (!seen.insert({static_cast<int>(i), it->second}).second) continue;
      StratumPoset::Edge e;
      e.upper = static_cast<int>(i);
      e.lower = it->second;
      e.type = D.cls;
      e.picture = D.rep ? detail::picture_class(*D.rep, D.cls) : "";
      P.edges.push_back(e);
    }
  }
  return P;
}

}  // namespace strata
