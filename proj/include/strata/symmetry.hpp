#pragma once

// Label-preserving isomorphisms of decorated graphs, the automorphism group
// with its per-vertex cyclic orders, and the canonical diagonal subgroup.

#include "canonical.hpp"
#include "exactnum.hpp"
#include "graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace strata {

// vertex/arc bijection of one level-set graph onto another together with the
// induced bijection of the labeling tree edges
struct GammaIso {
  std::vector<int> vertex, arc;
  std::map<int, int> edge;
};

struct Isomorphism {
  std::vector<int> vertex;          // T-vertex bijection
  std::vector<int> edge;            // T-edge bijection
  std::map<int, GammaIso> gamma;    // per multivalent vertex o -> map onto Gamma at image
};

namespace detail {

// Enumerate all isomorphisms g1 -> g2 that preserve vertex labels, arc
// orientation, loop structure, and the given per-edge keys. An isomorphism is
// propagated from a single arc image through the next-in-loop pointers; the
// search branches when the pointers do not force every arc.
inline void gamma_isos_impl(const VertexGraph& g1, const std::map<int, std::string>& key1,
                            const VertexGraph& g2, const std::map<int, std::string>& key2,
                            std::vector<GammaIso>& out) {
  int nA = static_cast<int>(g1.arcs.size());
  int nV = static_cast<int>(g1.vertices.size());
  if (nA != static_cast<int>(g2.arcs.size()) || nV != static_cast<int>(g2.vertices.size()))
    return;
  if (nA == 0) return;

  auto compatible = [&](int a, int b) {
    const GammaArc &x = g1.arcs[a], &y = g2.arcs[b];
    return g1.vertices[x.from].m == g2.vertices[y.from].m &&
           g1.vertices[x.to].m == g2.vertices[y.to].m &&
           key1.at(x.eminus) == key2.at(y.eminus) && key1.at(x.eplus) == key2.at(y.eplus);
  };

  struct State {
    std::vector<int> am, vm;
    std::vector<char> used_arc, used_v;
    std::map<int, int> em;
  };

  std::function<void(State&)> extend = [&](State& st) {
    // propagate forced images
    bool changed = true;
    while (changed) {
      changed = false;
      for (int a = 0; a < nA; ++a) {
        if (st.am[a] < 0) continue;
        int b = st.am[a];
        const GammaArc &x = g1.arcs[a], &y = g2.arcs[b];
        std::pair<int, int> force[2] = {
            {g1.next_in_loop(x.eminus, a), g2.next_in_loop(y.eminus, b)},
            {g1.next_in_loop(x.eplus, a), g2.next_in_loop(y.eplus, b)}};
        for (auto [na, nb] : force) {
          if (st.am[na] < 0) {
            if (st.used_arc[nb] || !compatible(na, nb)) return;
            st.am[na] = nb;
            st.used_arc[nb] = 1;
            changed = true;
          } else if (st.am[na] != nb) {
            return;
          }
        }
      }
    }
    int miss = -1;
    for (int a = 0; a < nA; ++a)
      if (st.am[a] < 0) { miss = a; break; }
    if (miss >= 0) {
      for (int b = 0; b < nA; ++b) {
        if (st.used_arc[b] || !compatible(miss, b)) continue;
        State st2 = st;
        st2.am[miss] = b;
        st2.used_arc[b] = 1;
        extend(st2);
      }
      return;
    }
    // complete arc map: derive and verify vertex and edge maps
    GammaIso iso;
    iso.arc = st.am;
    iso.vertex.assign(nV, -1);
    std::vector<char> vused(nV, 0);
    for (int a = 0; a < nA; ++a) {
      const GammaArc &x = g1.arcs[a], &y = g2.arcs[st.am[a]];
      std::pair<int, int> vp[2] = {{x.from, y.from}, {x.to, y.to}};
      for (auto [u, w] : vp) {
        if (iso.vertex[u] < 0) {
          if (vused[w]) return;
          iso.vertex[u] = w;
          vused[w] = 1;
        } else if (iso.vertex[u] != w) {
          return;
        }
      }
      std::pair<int, int> ep[2] = {{x.eminus, y.eminus}, {x.eplus, y.eplus}};
      for (auto [e, f] : ep) {
        auto it = iso.edge.find(e);
        if (it == iso.edge.end()) iso.edge[e] = f;
        else if (it->second != f) return;
      }
    }
    // edge map must be injective and loops must correspond up to rotation
    {
      std::map<int, int> inv;
      for (auto [e, f] : iso.edge)
        if (!inv.emplace(f, e).second) return;
    }
    for (auto [e, f] : iso.edge) {
      const auto& L1 = g1.loops.at(e);
      const auto& L2 = g2.loops.at(f);
      if (L1.size() != L2.size()) return;
      int pos = g2.loop_pos(f, iso.arc[L1[0]]);
      if (pos < 0) return;
      for (std::size_t i = 0; i < L1.size(); ++i)
        if (iso.arc[L1[i]] != L2[(pos + i) % L2.size()]) return;
    }
    out.push_back(std::move(iso));
  };

  for (int b = 0; b < nA; ++b) {
    if (!compatible(0, b)) continue;
    State st;
    st.am.assign(nA, -1);
    st.used_arc.assign(nA, 0);
    st.am[0] = b;
    st.used_arc[b] = 1;
    extend(st);
  }
}

}  // namespace detail

inline std::vector<GammaIso> gamma_isos(const VertexGraph& g1,
                                        const std::map<int, std::string>& key1,
                                        const VertexGraph& g2,
                                        const std::map<int, std::string>& key2) {
  std::vector<GammaIso> out;
  detail::gamma_isos_impl(g1, key1, g2, key2, out);
  return out;
}

namespace detail {

inline bool labels_equal(const VertexLabel& a, const VertexLabel& b) {
  if (a.kind != b.kind || a.m != b.m) return false;
  if (!(a.end == b.end)) return false;
  std::vector<std::string> x, y;
  for (const FourTuple& t : a.tuples) x.push_back(to_string(t));
  for (const FourTuple& t : b.tuples) y.push_back(to_string(t));
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

inline std::map<int, std::string> edge_keys(
    const DecoratedGraph& T, int v, int parent_edge,
    const std::function<std::string(const AngleSpec&)>& akey) {
  std::map<int, std::string> keys;
  for (int e : T.incident_edges(v)) {
    if (e == parent_edge) keys[e] = "^";
    else
      keys[e] = "[" + to_string(T.edges[e].q) + ";" +
                encode_subtree(T, T.other_end(e, v), e, akey) + "]";
  }
  return keys;
}

// recursive rooted matching; fills iso and returns success
inline bool match_subtree(const DecoratedGraph& T1, int v1, int pe1, const DecoratedGraph& T2,
                          int v2, int pe2, Isomorphism& iso) {
  if (!angle_eq(T1.vertices[v1].angle, T2.vertices[v2].angle)) return false;
  if (!labels_equal(T1.vertices[v1].label, T2.vertices[v2].label)) return false;
  iso.vertex[v1] = v2;
  if (pe1 >= 0) iso.edge[pe1] = pe2;
  std::vector<int> inc1 = T1.incident_edges(v1);
  if (inc1.size() <= 1 && T1.vertices[v1].label.gamma.arcs.empty()) {
    if (T2.incident_edges(v2).size() != inc1.size()) return false;
    if (pe1 < 0 && !inc1.empty()) {
      // monovalent root: match through its single edge
      int e1 = inc1[0], e2 = T2.incident_edges(v2)[0];
      if (T1.edges[e1].q != T2.edges[e2].q) return false;
      iso.edge[e1] = e2;
      return match_subtree(T1, T1.other_end(e1, v1), e1, T2, T2.other_end(e2, v2), e2, iso);
    }
    return true;
  }
  auto k1 = edge_keys(T1, v1, pe1, exact_angle_key);
  auto k2 = edge_keys(T2, v2, pe2, exact_angle_key);
  auto isos = gamma_isos(T1.vertices[v1].label.gamma, k1, T2.vertices[v2].label.gamma, k2);
  for (const GammaIso& gi : isos) {
    if (pe1 >= 0) {
      auto it = gi.edge.find(pe1);
      if (it == gi.edge.end() || it->second != pe2) continue;
    }
    Isomorphism trial = iso;
    trial.gamma[v1] = gi;
    bool ok = true;
    for (auto [e1, e2] : gi.edge) {
      if (e1 == pe1) continue;
      if (T1.edges[e1].q != T2.edges[e2].q) { ok = false; break; }
      if (!match_subtree(T1, T1.other_end(e1, v1), e1, T2, T2.other_end(e2, v2), e2, trial)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      iso = std::move(trial);
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Verify that a candidate map is a label-preserving isomorphism T1 -> T2.
inline bool is_isomorphism(const DecoratedGraph& T1, const DecoratedGraph& T2,
                           const Isomorphism& iso) {
  int n = static_cast<int>(T1.vertices.size());
  if (n != static_cast<int>(T2.vertices.size())) return false;
  if (T1.edges.size() != T2.edges.size()) return false;
  if (static_cast<int>(iso.vertex.size()) != n ||
      iso.edge.size() != T1.edges.size()) return false;
  std::vector<char> vseen(n, 0), eseen(T1.edges.size(), 0);
  for (int v = 0; v < n; ++v) {
    int w = iso.vertex[v];
    if (w < 0 || w >= n || vseen[w]) return false;
    vseen[w] = 1;
    if (!angle_eq(T1.vertices[v].angle, T2.vertices[w].angle)) return false;
    if (!detail::labels_equal(T1.vertices[v].label, T2.vertices[w].label)) return false;
  }
  for (std::size_t e = 0; e < T1.edges.size(); ++e) {
    int f = iso.edge[e];
    if (f < 0 || f >= static_cast<int>(T2.edges.size()) || eseen[f]) return false;
    eseen[f] = 1;
    const TreeEdge &x = T1.edges[e], &y = T2.edges[f];
    bool straight = iso.vertex[x.a] == y.a && iso.vertex[x.b] == y.b;
    bool crossed = iso.vertex[x.a] == y.b && iso.vertex[x.b] == y.a;
    if (!straight && !crossed) return false;
    if (x.q != y.q) return false;
  }
  for (int v = 0; v < n; ++v) {
    if (!T1.is_multivalent(v)) continue;
    auto it = iso.gamma.find(v);
    if (it == iso.gamma.end()) return false;
    const GammaIso& gi = it->second;
    const VertexGraph& g1 = T1.vertices[v].label.gamma;
    const VertexGraph& g2 = T2.vertices[iso.vertex[v]].label.gamma;
    if (gi.arc.size() != g1.arcs.size() || gi.vertex.size() != g1.vertices.size()) return false;
    if (g1.arcs.size() != g2.arcs.size() || g1.vertices.size() != g2.vertices.size())
      return false;
    for (std::size_t u = 0; u < g1.vertices.size(); ++u)
      if (g1.vertices[u].m != g2.vertices[gi.vertex[u]].m) return false;
    for (std::size_t a = 0; a < g1.arcs.size(); ++a) {
      const GammaArc& x = g1.arcs[a];
      const GammaArc& y = g2.arcs[gi.arc[a]];
      if (gi.vertex[x.from] != y.from || gi.vertex[x.to] != y.to) return false;
      if (iso.edge[x.eminus] != y.eminus || iso.edge[x.eplus] != y.eplus) return false;
    }
    for (const auto& [e, L1] : g1.loops) {
      const auto& L2 = g2.loops.at(iso.edge[e]);
      if (L1.size() != L2.size()) return false;
      int pos = g2.loop_pos(iso.edge[e], gi.arc[L1[0]]);
      if (pos < 0) return false;
      for (std::size_t i = 0; i < L1.size(); ++i)
        if (gi.arc[L1[i]] != L2[(pos + i) % L2.size()]) return false;
    }
  }
  return true;
}

inline std::optional<Isomorphism> are_isomorphic(const DecoratedGraph& T1,
                                                 const DecoratedGraph& T2) {
  if (T1.vertices.size() != T2.vertices.size() || T1.edges.size() != T2.edges.size())
    return std::nullopt;
  for (std::size_t v1 = 0; v1 < T1.vertices.size(); ++v1) {
    for (std::size_t v2 = 0; v2 < T2.vertices.size(); ++v2) {
      Isomorphism iso;
      iso.vertex.assign(T1.vertices.size(), -1);
      iso.edge.assign(T1.edges.size(), -1);
      if (detail::match_subtree(T1, static_cast<int>(v1), -1, T2, static_cast<int>(v2), -1,
                                iso) &&
          is_isomorphism(T1, T2, iso))
        return iso;
    }
    break;  // every vertex of T1 works as a root candidate; one suffices
  }
  return std::nullopt;
}

// --- automorphism group -----------------------------------------------------

struct AutGroup {
  Int order{1};
  int diamond{-1};
  std::map<int, int> n;          // multivalent vertex (rooted at diamond) -> cyclic order
  std::vector<int> fixed;        // T^F: vertices fixed by every automorphism
  std::vector<Isomorphism> generators;
};

namespace detail {

inline Isomorphism identity_iso(const DecoratedGraph& T) {
  Isomorphism id;
  id.vertex.resize(T.vertices.size());
  std::iota(id.vertex.begin(), id.vertex.end(), 0);
  id.edge.resize(T.edges.size());
  std::iota(id.edge.begin(), id.edge.end(), 0);
  for (std::size_t v = 0; v < T.vertices.size(); ++v) {
    if (!T.is_multivalent(static_cast<int>(v))) continue;
    const VertexGraph& g = T.vertices[v].label.gamma;
    GammaIso gi;
    gi.vertex.resize(g.vertices.size());
    std::iota(gi.vertex.begin(), gi.vertex.end(), 0);
    gi.arc.resize(g.arcs.size());
    std::iota(gi.arc.begin(), gi.arc.end(), 0);
    for (const auto& [e, L] : g.loops) gi.edge[e] = e;
    id.gamma[static_cast<int>(v)] = gi;
  }
  return id;
}

// order of a GammaIso as a permutation of arcs
inline int gamma_iso_order(const GammaIso& gi) {
  int n = static_cast<int>(gi.arc.size());
  std::vector<int> cur(n);
  std::iota(cur.begin(), cur.end(), 0);
  for (int k = 1;; ++k) {
    bool ident = true;
    for (int i = 0; i < n; ++i) {
      cur[i] = gi.arc[cur[i]];
      }
    for (int i = 0; i < n; ++i)
      if (cur[i] != i) { ident = false; break; }
    if (ident) return k;
    if (k > n + 1) return -1;  // not reachable for a permutation
  }
}

}  // namespace detail

inline AutGroup aut_group(const DecoratedGraph& T) {
  AutGroup G;
  int n = static_cast<int>(T.vertices.size());
  std::vector<std::string> enc(n);
  for (int v = 0; v < n; ++v) enc[v] = encode_subtree(T, v, -1, exact_angle_key);
  for (int v = 0; v < n; ++v) {
    bool alone = true;
    for (int w = 0; w < n && alone; ++w)
      if (w != v && enc[w] == enc[v]) alone = false;
    if (alone) G.fixed.push_back(v);
  }
  G.diamond = -1;
  for (int v : G.fixed) {
    if (G.diamond < 0) { G.diamond = v; continue; }
    Cmp c = cmp_angle(T.vertices[v].angle, T.vertices[G.diamond].angle);
    if (c == Cmp::Less || (c == Cmp::Equal && enc[v] < enc[G.diamond])) G.diamond = v;
  }

  // rooted pass computing n_o and one generating rotation per vertex
  std::function<void(int, int)> visit = [&](int v, int pe) {
    if (T.is_multivalent(v)) {
      auto keys = detail::edge_keys(T, v, pe, exact_angle_key);
      auto autos = gamma_isos(T.vertices[v].label.gamma, keys, T.vertices[v].label.gamma, keys);
      int count = 0;
      const GammaIso* gen = nullptr;
      for (const GammaIso& gi : autos) {
        if (pe >= 0) {
          auto it = gi.edge.find(pe);
          if (it == gi.edge.end() || it->second != pe) continue;
        }
        ++count;
        if (!gen || detail::gamma_iso_order(gi) > detail::gamma_iso_order(*gen)) gen = &gi;
      }
      G.n[v] = count;
      G.order *= count;
      if (count > 1 && gen) {
        // extend the rotation at v to a full automorphism, identity outside
        Isomorphism iso = detail::identity_iso(T);
        iso.gamma[v] = *gen;
        bool ok = true;
        for (auto [e1, e2] : gen->edge) {
          if (e1 == pe || e1 == e2) continue;
          int c1 = T.other_end(e1, v), c2 = T.other_end(e2, v);
          if (!detail::match_subtree(T, c1, e1, T, c2, e2, iso)) { ok = false; break; }
        }
        if (ok && is_isomorphism(T, T, iso)) G.generators.push_back(std::move(iso));
      }
    }
    for (int e : T.incident_edges(v)) {
      if (e == pe) continue;
      visit(T.other_end(e, v), e);
    }
  };
  if (G.diamond >= 0) visit(G.diamond, -1);
  return G;
}

// --- canonical diagonal subgroup --------------------------------------------

struct DiagonalSubgroup {
  Int k{1};
  bool edge_fixing_regime{true};
  int fixed_edge{-1};                 // the distinguished incident edge of the diamond
  std::map<int, int> rotation;        // multivalent o in T^F -> rotation step n_o / k
  std::string note;
};

inline DiagonalSubgroup canonical_diagonal(const DecoratedGraph& T) {
  AutGroup G = aut_group(T);
  DiagonalSubgroup D;
  if (G.diamond < 0) {
    D.edge_fixing_regime = false;
    D.note = "no invariant vertex";
    return D;
  }
  // regime check: some incident edge of the diamond is fixed by every
  // automorphism of its level-set graph
  std::vector<int> inc = T.incident_edges(G.diamond);
  int fixed_edge = -1;
  if (!T.is_multivalent(G.diamond)) {
    fixed_edge = inc.empty() ? -1 : inc[0];
  } else {
    auto keys = detail::edge_keys(T, G.diamond, -1, exact_angle_key);
    auto autos = gamma_isos(T.vertices[G.diamond].label.gamma, keys,
                            T.vertices[G.diamond].label.gamma, keys);
    for (int e : inc) {
      bool fixed = true;
      for (const GammaIso& gi : autos)
        if (gi.edge.at(e) != e) { fixed = false; break; }
      if (fixed) {
        // canonical choice: the smallest-keyed fixed edge
        if (fixed_edge < 0 || keys.at(e) < keys.at(fixed_edge)) fixed_edge = e;
      }
    }
  }
  if (fixed_edge < 0) {
    D.edge_fixing_regime = false;
    D.note = "no automorphism-fixed edge at the diamond; image description per the "
             "general quotient only";
    return D;
  }
  D.fixed_edge = fixed_edge;
  Int k = content(T.edges[fixed_edge].q);
  for (int v : G.fixed) {
    if (!T.is_multivalent(v)) continue;
    auto it = G.n.find(v);
    if (it != G.n.end()) k = gcd(k, Int(it->second));
  }
  D.k = k;
  for (int v : G.fixed) {
    if (!T.is_multivalent(v)) continue;
    auto it = G.n.find(v);
    if (it != G.n.end() && D.k != 0)
      D.rotation[v] = static_cast<int>(it->second / D.k.get_si());
  }
  return D;
}

}  // namespace strata
