#pragma once

// Canonical string encodings of decorated graphs: rooted subtree encodings,
// a canonical form for level-set graphs with per-edge keys, and the homotopy
// signature (angles reduced to their position relative to the pinned angles).

#include "exactnum.hpp"
#include "graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace strata {

namespace detail {

// Canonical string for Gamma with a comparable key per incident tree edge.
// A deterministic traversal discovers arcs through the next-in-loop pointers;
// the encoding is minimized over start arcs (and over re-seeding choices when
// the loop-adjacency jumps do not reach every arc).
inline std::string canonical_gamma(const VertexGraph& g, const std::map<int, std::string>& keys) {
  int nA = static_cast<int>(g.arcs.size());
  if (nA == 0) return "{}";
  std::string best;
  bool have = false;

  std::function<void(std::vector<int>&, std::vector<int>&, std::string&)> run =
      [&](std::vector<int>& order, std::vector<int>& disc, std::string& acc) {
        // process arcs already queued; returns via recursion on stalls
        std::size_t i = 0;
        // find resume point: count of already-processed arcs encoded in acc is
        // tracked by processing everything from scratch each call; keep simple
        std::vector<int> vdisc(g.vertices.size(), -1);
        int vnext = 0;
        std::string out;
        for (i = 0; i < order.size(); ++i) {
          int a = order[i];
          const GammaArc& arc = g.arcs[a];
          for (int w : {arc.from, arc.to})
            if (vdisc[w] < 0) vdisc[w] = vnext++;
          int na = g.next_in_loop(arc.eminus, a);
          int nb = g.next_in_loop(arc.eplus, a);
          for (int x : {na, nb})
            if (disc[x] < 0) {
              disc[x] = static_cast<int>(order.size());
              order.push_back(x);
            }
          out += "a" + std::to_string(vdisc[arc.from]) + ">" + std::to_string(vdisc[arc.to]) +
                 ":" + g.vertices[arc.from].m.get_str() + "," + g.vertices[arc.to].m.get_str() +
                 "<" + keys.at(arc.eminus) + "|" + keys.at(arc.eplus) + ">" +
                 std::to_string(disc[na]) + "," + std::to_string(disc[nb]) + ";";
        }
        if (static_cast<int>(order.size()) < nA) {
          // stall: branch over every undiscovered arc as the next seed
          for (int s = 0; s < nA; ++s) {
            if (disc[s] >= 0) continue;
            std::vector<int> order2 = order, disc2 = disc;
            disc2[s] = static_cast<int>(order2.size());
            order2.push_back(s);
            std::string acc2;
            run(order2, disc2, acc2);
          }
          return;
        }
        if (!have || out < best) {
          best = out;
          have = true;
        }
        (void)acc;
      };

  for (int s = 0; s < nA; ++s) {
    std::vector<int> order{s}, disc(nA, -1);
    disc[s] = 0;
    std::string acc;
    run(order, disc, acc);
  }
  return best;
}

}  // namespace detail

// Rooted subtree encoding; angle_key must be injective on the angles that the
// intended equivalence distinguishes (exact angles for isomorphism, reduced
// keys for the homotopy signature).
inline std::string encode_subtree(const DecoratedGraph& T, int v, int parent_edge,
                                  const std::function<std::string(const AngleSpec&)>& angle_key) {
  const VertexLabel& L = T.vertices[v].label;
  std::string head = angle_key(T.vertices[v].angle) + "#";
  switch (L.kind) {
    case VertexLabel::Kind::ZeroInt: head += "0i" + L.m.get_str(); break;
    case VertexLabel::Kind::PiInt: head += "pi" + L.m.get_str(); break;
    case VertexLabel::Kind::ZeroEnd: head += "0e" + to_string(L.end); break;
    case VertexLabel::Kind::PiEnd: head += "pe" + to_string(L.end); break;
    case VertexLabel::Kind::Interior: {
      std::vector<std::string> ts;
      for (const FourTuple& t : L.tuples) ts.push_back(to_string(t));
      std::sort(ts.begin(), ts.end());
      head += "in";
      for (const std::string& s : ts) head += s;
      break;
    }
  }
  std::map<int, std::string> keys;
  std::vector<std::string> child_keys;
  for (int e : T.incident_edges(v)) {
    if (e == parent_edge) {
      keys[e] = "^";
      continue;
    }
    std::string k = "[" + to_string(T.edges[e].q) + ";" +
                    encode_subtree(T, T.other_end(e, v), e, angle_key) + "]";
    keys[e] = k;
    child_keys.push_back(std::move(k));
  }
  if (L.gamma.arcs.empty()) {
    std::sort(child_keys.begin(), child_keys.end());
    std::string out = "(" + head;
    for (const std::string& k : child_keys) out += k;
    return out + ")";
  }
  return "(" + head + "|" + detail::canonical_gamma(L.gamma, keys) + ")";
}

inline std::string exact_angle_key(const AngleSpec& a) {
  switch (a.kind) {
    case AngleSpec::Kind::Zero: return "z";
    case AngleSpec::Kind::Pi: return "p";
    default: return "i" + to_string(primitive(a.pair));
  }
}

// Whole-tree canonical encoding: minimum of the rooted encodings.
inline std::string canonical_encoding(const DecoratedGraph& T,
                                      const std::function<std::string(const AngleSpec&)>& key) {
  std::string best;
  for (std::size_t v = 0; v < T.vertices.size(); ++v) {
    std::string e = encode_subtree(T, static_cast<int>(v), -1, key);
    if (v == 0 || e < best) best = std::move(e);
  }
  return best;
}

// The homotopy signature: interior angles are replaced by their defining pair
// when that angle is pinned (the angle of some (0,+,.) tuple or of a (0,-,.)
// tuple housed at a multivalent vertex), and otherwise by the pair (number of
// pinned angles below, rank among the distinct unpinned angles). Two graphs
// get equal signatures exactly when one deforms to the other without an
// unpinned angle crossing a pinned one or another unpinned angle.
inline std::string homotopy_signature(const DecoratedGraph& T) {
  std::vector<AngleSpec> pinned, free_angles;
  auto add_unique = [](std::vector<AngleSpec>& v, const AngleSpec& a) {
    for (const AngleSpec& x : v)
      if (angle_eq(x, a)) return;
    v.push_back(a);
  };
  for (std::size_t v = 0; v < T.vertices.size(); ++v) {
    const TreeVertex& V = T.vertices[v];
    if (V.label.kind != VertexLabel::Kind::Interior) continue;
    bool multi = T.is_multivalent(static_cast<int>(v));
    for (const FourTuple& t : V.label.tuples)
      if (t.eps > 0 || multi) add_unique(pinned, AngleSpec::interior(t.pair));
  }
  for (const TreeVertex& V : T.vertices) {
    if (!V.angle.is_interior()) continue;
    bool is_pinned = false;
    for (const AngleSpec& x : pinned)
      if (angle_eq(x, V.angle)) { is_pinned = true; break; }
    if (!is_pinned) add_unique(free_angles, V.angle);
  }
  auto lt = [](const AngleSpec& a, const AngleSpec& b) { return angle_lt(a, b); };
  std::sort(free_angles.begin(), free_angles.end(), lt);
  std::sort(pinned.begin(), pinned.end(), lt);
  auto key = [&](const AngleSpec& a) -> std::string {
    if (a.kind == AngleSpec::Kind::Zero) return "z";
    if (a.kind == AngleSpec::Kind::Pi) return "p";
    for (const AngleSpec& x : pinned)
      if (angle_eq(x, a)) return "P" + to_string(primitive(a.pair));
    int below = 0;
    for (const AngleSpec& x : pinned)
      if (angle_lt(x, a)) ++below;
    int rank = 0;
    for (const AngleSpec& x : free_angles) {
      if (angle_eq(x, a)) break;
      ++rank;
    }
    return "F" + std::to_string(below) + "." + std::to_string(rank);
  };
  return canonical_encoding(T, key);
}

}  // namespace strata
