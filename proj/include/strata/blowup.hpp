#pragma once

// The blow-up Gamma*_o of a level-set graph: each nonzero-label vertex is
// replaced by an oriented circle of its incident half-arcs, the loops l_oe
// lift to embedded circles l*_oe, and the graph carries the ZxZ-valued
// cohomology class phi_o evaluating loops to integer pairs.

#include "exactnum.hpp"
#include "graph.hpp"
#include "log.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace strata {

struct BlowUpNode {
  int gamma_vertex{-1};  // blow-down image
  int arc{-1};           // half-arc carrier (nonzero-label vertices); -1 otherwise
  bool head{false};      // true: the half-arc pointing into the vertex
};

struct BlowUpArc {
  int from{-1}, to{-1};  // node ids
  bool circle{false};    // circle arc of some l*v vs lifted arc of Gamma_o
  int eminus{-1}, eplus{-1};  // lifted arcs: the edge-pair label of the image
  int upsilon{-1}, edge{-1};  // circle arcs: the (vertex, incident edge) label
  int gamma_arc{-1};          // lifted arcs: blow-down image
};

// a formal sum of directed arcs: (arc id, +-1) per traversal
using ArcChain = std::vector<std::pair<int, int>>;

struct BlowUp {
  std::vector<BlowUpNode> nodes;
  std::vector<BlowUpArc> arcs;
  std::vector<int> lift_of;                // Gamma-arc id -> lifted arc id
  std::map<int, ArcChain> loops;           // incident edge e -> l*_oe as a chain
  std::map<int, std::vector<int>> circles; // Gamma-vertex v -> arcs of l*v in order
  int sign{1};                             // global sign on the circle classes
  std::vector<std::pair<Rat, Rat>> phi;    // a 1-cochain representing phi_o
};

namespace detail {

[[noreturn]] inline void blowup_fail(const std::string& msg) {
  throw std::invalid_argument("blow_up: " + msg);
}

// solve (rows) . x = rhs for any rational solution; rows are dense
inline std::vector<std::pair<Rat, Rat>> solve_cochain(
    std::vector<std::vector<Rat>> M, std::vector<std::pair<Rat, Rat>> rhs) {
  int rows = static_cast<int>(M.size());
  int cols = rows ? static_cast<int>(M[0].size()) : 0;
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (M[i][c] != 0) { p = i; break; }
    if (p < 0) continue;
    std::swap(M[r], M[p]);
    std::swap(rhs[r], rhs[p]);
    Rat inv = M[r][c];
    for (int k = c; k < cols; ++k) M[r][k] /= inv;
    rhs[r].first /= inv;
    rhs[r].second /= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      Rat f = M[i][c];
      for (int k = c; k < cols; ++k) M[i][k] -= f * M[r][k];
      rhs[i].first -= f * rhs[r].first;
      rhs[i].second -= f * rhs[r].second;
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (rhs[i].first != 0 || rhs[i].second != 0)
      blowup_fail("inconsistent loop constraints for phi");
  std::vector<std::pair<Rat, Rat>> x(cols, {Rat(0), Rat(0)});
  for (int i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i];
  return x;
}

}  // namespace detail

inline BlowUp blow_up(const DecoratedGraph& T, int o) {
  const VertexGraph& g = T.vertices[o].label.gamma;
  int nV = static_cast<int>(g.vertices.size());
  int nA = static_cast<int>(g.arcs.size());
  BlowUp B;

  // nodes: one per zero-label vertex, one per half-arc at nonzero vertices
  std::vector<int> zero_node(nV, -1);
  std::vector<int> tail_node(nA, -1), head_node(nA, -1);
  for (int v = 0; v < nV; ++v)
    if (g.vertices[v].m == 0) {
      zero_node[v] = static_cast<int>(B.nodes.size());
      B.nodes.push_back({v, -1, false});
    }
  for (int a = 0; a < nA; ++a) {
    int vf = g.arcs[a].from, vt = g.arcs[a].to;
    if (g.vertices[vf].m == 0) tail_node[a] = zero_node[vf];
    else {
      tail_node[a] = static_cast<int>(B.nodes.size());
      B.nodes.push_back({vf, a, false});
    }
    if (g.vertices[vt].m == 0) head_node[a] = zero_node[vt];
    else {
      head_node[a] = static_cast<int>(B.nodes.size());
      B.nodes.push_back({vt, a, true});
    }
  }

  // lifted arcs
  B.lift_of.assign(nA, -1);
  for (int a = 0; a < nA; ++a) {
    B.lift_of[a] = static_cast<int>(B.arcs.size());
    B.arcs.push_back({tail_node[a], head_node[a], false, g.arcs[a].eminus, g.arcs[a].eplus,
                      -1, -1, a});
  }

  // circles l*v at nonzero-label vertices: successor of an inbound half-arc is
  // the next arc in the E- loop; successor of an outbound one is the previous
  // arc in the E+ loop
  auto succ = [&](int node) -> int {
    const BlowUpNode& n = B.nodes[node];
    const GammaArc& a = g.arcs[n.arc];
    if (n.head) {
      int d = g.next_in_loop(a.eminus, n.arc);
      if (g.arcs[d].from != n.gamma_vertex) detail::blowup_fail("loop not head-to-tail");
      return tail_node[d];
    }
    int d = g.prev_in_loop(a.eplus, n.arc);
    if (g.arcs[d].to != n.gamma_vertex) detail::blowup_fail("loop not head-to-tail");
    return head_node[d];
  };
  for (int v = 0; v < nV; ++v) {
    if (g.vertices[v].m == 0) continue;
    std::vector<int> half;
    for (int a = 0; a < nA; ++a) {
      if (g.arcs[a].from == v) half.push_back(tail_node[a]);
      if (g.arcs[a].to == v) half.push_back(head_node[a]);
    }
    if (half.empty()) detail::blowup_fail("isolated nonzero-label vertex");
    std::vector<int> cyc{half[0]};
    for (int n = succ(half[0]); n != half[0]; n = succ(n)) {
      cyc.push_back(n);
      if (cyc.size() > half.size()) detail::blowup_fail("half-arc successor map not cyclic");
    }
    if (cyc.size() != half.size())
      detail::blowup_fail("half-arc circle misses an incident half-arc");
    std::vector<int>& circle = B.circles[v];
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const BlowUpNode& n = B.nodes[cyc[i]];
      int label = n.head ? g.arcs[n.arc].eminus : g.arcs[n.arc].eplus;
      circle.push_back(static_cast<int>(B.arcs.size()));
      B.arcs.push_back({cyc[i], cyc[(i + 1) % cyc.size()], true, -1, -1, v, label});
    }
  }

  // the embedded circle l*_oe: lifted arcs in loop order, joined through the
  // unique circle arc labeled by e at each intermediate nonzero-label vertex
  auto connector = [&](int x, int y, int e) -> std::pair<int, int> {
    if (x == y) return {-1, 0};
    for (std::size_t i = 0; i < B.arcs.size(); ++i) {
      const BlowUpArc& a = B.arcs[i];
      if (!a.circle || a.edge != e) continue;
      if (a.from == x && a.to == y) return {static_cast<int>(i), 1};
      if (a.from == y && a.to == x) return {static_cast<int>(i), -1};
    }
    return {-2, 0};
  };
  for (const auto& [e, L] : g.loops) {
    ArcChain chain;
    int start = tail_node[L[0]];
    int cur = start;
    for (std::size_t i = 0; i <= L.size(); ++i) {
      int target = i < L.size() ? tail_node[L[i]] : start;
      auto [c, s] = connector(cur, target, e);
      if (c == -2) detail::blowup_fail("lifted loop disconnected at a circle");
      if (c >= 0) {
        chain.push_back({c, s});
        cur = target;
      }
      if (cur != target) detail::blowup_fail("lifted loop disconnected");
      if (i == L.size()) break;
      chain.push_back({B.lift_of[L[i]], 1});
      cur = head_node[L[i]];
    }
    B.loops[e] = std::move(chain);
  }

  // chain-level relation: sum over E+ loops minus sum over E- loops equals a
  // global sign times the sum of the circle chains; the sign fixes phi on the
  // circle classes
  {
    std::vector<Int> rel(B.arcs.size(), 0);
    for (int e : T.e_plus(o))
      for (auto [a, s] : B.loops.at(e)) rel[a] += s;
    for (int e : T.e_minus(o))
      for (auto [a, s] : B.loops.at(e)) rel[a] -= s;
    std::vector<Int> circ(B.arcs.size(), 0);
    for (const auto& [v, c] : B.circles)
      for (int a : c) circ[a] += 1;
    bool plus = true, minus = true;
    for (std::size_t a = 0; a < B.arcs.size(); ++a) {
      if (rel[a] != circ[a]) plus = false;
      if (rel[a] != -circ[a]) minus = false;
    }
    if (!plus && !minus) detail::blowup_fail("loop/circle chain relation fails");
    // phi of the relation chain must reproduce the edge rule at o, which puts
    // the opposite sign on the circle classes
    B.sign = plus ? -1 : 1;
    if (!B.circles.empty())
      log("blow_up: circle classes carry global sign " + std::to_string(B.sign));
  }

  // a cochain representing phi_o: Q_e on each l*_oe, sign * m_v * P_hat on l*v
  {
    IntPair Phat = angle_primitive(T, o);
    std::vector<std::vector<Rat>> M;
    std::vector<std::pair<Rat, Rat>> rhs;
    for (const auto& [e, chain] : B.loops) {
      std::vector<Rat> row(B.arcs.size(), Rat(0));
      for (auto [a, s] : chain) row[a] += s;
      M.push_back(std::move(row));
      rhs.push_back({Rat(T.edges[e].q.p), Rat(T.edges[e].q.pp)});
    }
    for (const auto& [v, c] : B.circles) {
      std::vector<Rat> row(B.arcs.size(), Rat(0));
      for (int a : c) row[a] += 1;
      M.push_back(std::move(row));
      Int w = Int(B.sign) * g.vertices[v].m;
      rhs.push_back({Rat(w * Phat.p), Rat(w * Phat.pp)});
    }
    B.phi = detail::solve_cochain(std::move(M), std::move(rhs));
  }
  return B;
}

// Evaluate phi_o on a closed loop given as a signed arc chain.
inline IntPair phi_eval(const BlowUp& B, const ArcChain& loop) {
  std::vector<Int> boundary(B.nodes.size(), 0);
  Rat p(0), pp(0);
  for (auto [a, s] : loop) {
    if (a < 0 || a >= static_cast<int>(B.arcs.size()) || (s != 1 && s != -1))
      throw std::invalid_argument("phi_eval: malformed chain");
    boundary[B.arcs[a].to] += s;
    boundary[B.arcs[a].from] -= s;
    p += Rat(s) * B.phi[a].first;
    pp += Rat(s) * B.phi[a].second;
  }
  for (const Int& b : boundary)
    if (b != 0) throw std::invalid_argument("phi_eval: chain is not a cycle");
  if (p.get_den() != 1 || pp.get_den() != 1)
    throw std::invalid_argument("phi_eval: non-integral value on a cycle");
  return IntPair(p.get_num(), pp.get_num());
}

// --- concatenating path sets ------------------------------------------------

struct PathStep {
  int arc{-1};
  bool forward{true};
};

struct LabeledPath {
  int edge{-1};  // incident tree edge labeling the path; confined to l_o(edge)
  std::vector<PathStep> steps;
};

using PathSet = std::vector<LabeledPath>;

namespace detail {

[[noreturn]] inline void path_fail(const std::string& msg) {
  throw std::invalid_argument("path_set_pairing: " + msg);
}

}  // namespace detail

// The pairing of a path set: minus phi_o on the closed loop traced by the
// canonical lift of the path set, with the final crossing of the first arc
// removed. The first and last crossings must agree (same arc, same direction).
inline IntPair path_set_pairing(const DecoratedGraph& T, int o, const PathSet& mu) {
  const VertexGraph& g = T.vertices[o].label.gamma;
  BlowUp B = blow_up(T, o);

  struct Crossing {
    int arc;
    bool forward;
    int edge;
  };
  std::vector<Crossing> cr;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const LabeledPath& P = mu[k];
    if (P.steps.empty()) detail::path_fail("empty constituent path");
    if (g.loops.find(P.edge) == g.loops.end()) detail::path_fail("unknown edge label");
    for (const PathStep& s : P.steps)
      if (g.loop_pos(P.edge, s.arc) < 0)
        detail::path_fail("arc outside the loop of its path's edge label");
    std::size_t first = 0;
    if (k > 0) {
      if (mu[k - 1].edge == P.edge) detail::path_fail("consecutive paths share an edge label");
      if (cr.back().arc != P.steps[0].arc)
        detail::path_fail("consecutive paths do not share their boundary arc");
      // same direction: the shared crossing is traversed once
      if (cr.back().forward == P.steps[0].forward) first = 1;
      if (first == 1 && P.steps.size() == 1)
        detail::path_fail("constituent path reduced to its shared arc");
    }
    for (std::size_t i = first; i < P.steps.size(); ++i)
      cr.push_back({P.steps[i].arc, P.steps[i].forward, P.edge});
  }
  if (cr.size() < 2) detail::path_fail("path set too short to close");
  if (cr.front().arc != cr.back().arc || cr.front().forward != cr.back().forward)
    detail::path_fail("first and last crossings differ");

  auto start_node = [&](const Crossing& c) {
    const BlowUpArc& a = B.arcs[B.lift_of[c.arc]];
    return c.forward ? a.from : a.to;
  };
  auto end_node = [&](const Crossing& c) {
    const BlowUpArc& a = B.arcs[B.lift_of[c.arc]];
    return c.forward ? a.to : a.from;
  };
  auto connector = [&](int x, int y, int e) -> std::pair<int, int> {
    if (x == y) return {-1, 0};
    for (std::size_t i = 0; i < B.arcs.size(); ++i) {
      const BlowUpArc& a = B.arcs[i];
      if (!a.circle || a.edge != e) continue;
      if (a.from == x && a.to == y) return {static_cast<int>(i), 1};
      if (a.from == y && a.to == x) return {static_cast<int>(i), -1};
    }
    detail::path_fail("path leaves its loop's circle");
  };

  ArcChain chain;
  int cur = start_node(cr.front());
  for (std::size_t i = 0; i < cr.size(); ++i) {
    auto [c, s] = connector(cur, start_node(cr[i]), cr[i].edge);
    if (c >= 0) chain.push_back({c, s});
    cur = start_node(cr[i]);
    if (i + 1 == cr.size()) break;  // final crossing excluded from the loop
    chain.push_back({B.lift_of[cr[i].arc], cr[i].forward ? 1 : -1});
    cur = end_node(cr[i]);
  }
  if (cur != start_node(cr.front())) detail::path_fail("lifted path does not close");
  IntPair v = phi_eval(B, chain);
  return -v;
}

}  // namespace strata
