#include <strata/strata.hpp>

#include <catch_amalgamated.hpp>

#include "corpus.hpp"

#include <algorithm>
#include <set>
#include <variant>
#include <vector>

using namespace strata;
using corpus::ft;

namespace {

TreeVertex interior_mono(const IntPair& P, const FourTuple& t) {
  TreeVertex V;
  V.angle = AngleSpec::interior(P);
  V.label.kind = VertexLabel::Kind::Interior;
  V.label.tuples = {t};
  return V;
}

TreeVertex free_interior(const IntPair& P) {
  TreeVertex V;
  V.angle = AngleSpec::interior(P);
  V.label.kind = VertexLabel::Kind::Interior;
  return V;
}

void fig8_lower(TreeVertex& V, int el1, int el2, int eu) {
  VertexGraph& g = V.label.gamma;
  g.vertices.push_back({Int(0)});
  g.arcs.push_back({0, 0, el1, eu});
  g.arcs.push_back({0, 0, el2, eu});
  g.loops[el1] = {0};
  g.loops[el2] = {1};
  g.loops[eu] = {0, 1};
}

// Four parallel arcs between two crossings, each pair of opposite faces
// joined; the standard two-circles-with-an-arc shape over a 4-valent vertex.
DecoratedGraph quad_graph(Int m1 = 0, Int m2 = 0) {
  DecoratedGraph T;
  T.vertices.push_back(interior_mono(IntPair(1, 3), ft(0, -1, 1, 3)));    // leg of f1
  T.vertices.push_back(interior_mono(IntPair(1, 2), ft(0, -1, 1, 2)));    // leg of f2
  TreeVertex o = free_interior(IntPair(1, 0));
  if (m1 != 0 || m2 != 0)
    o.label.tuples = {FourTuple{0, +1, IntPair(1, 0)}, FourTuple{0, -1, IntPair(1, 0)}};
  VertexGraph& g = o.label.gamma;
  g.vertices.push_back({m1});
  g.vertices.push_back({m2});
  g.arcs.push_back({0, 1, 0, 2});  // a0: (f1, g1)
  g.arcs.push_back({0, 1, 1, 3});  // a1: (f2, g2)
  g.arcs.push_back({1, 0, 0, 3});  // a2: (f1, g2)
  g.arcs.push_back({1, 0, 1, 2});  // a3: (f2, g1)
  g.loops[0] = {0, 2};
  g.loops[1] = {1, 3};
  g.loops[2] = {0, 3};
  g.loops[3] = {1, 2};
  T.vertices.push_back(std::move(o));
  T.vertices.push_back(interior_mono(IntPair(-1, -2), ft(0, -1, -1, -2)));  // leg of g1
  T.vertices.push_back(interior_mono(IntPair(-1, -3), ft(0, -1, -1, -3)));  // leg of g2
  T.edges.push_back({0, 2, IntPair(1, 3)});  // f1
  T.edges.push_back({1, 2, IntPair(1, 2)});  // f2
  T.edges.push_back({2, 3, IntPair(1, 2)});  // g1
  T.edges.push_back({2, 4, IntPair(1, 3)});  // g2
  return T;
}

// Same shape with the crossing vertex at the angle of (0,-1), arranged so the
// difference class of the second arc pair vanishes exactly at that angle.
DecoratedGraph quad_graph_at_critical() {
  DecoratedGraph T;
  T.vertices.push_back(interior_mono(IntPair(2, 4), ft(0, -1, 2, 4)));
  T.vertices.push_back(interior_mono(IntPair(2, 6), ft(0, -1, 2, 6)));
  TreeVertex o = free_interior(IntPair(0, -1));
  VertexGraph& g = o.label.gamma;
  g.vertices.push_back({Int(0)});
  g.vertices.push_back({Int(0)});
  g.arcs.push_back({0, 1, 0, 2});
  g.arcs.push_back({0, 1, 1, 3});
  g.arcs.push_back({1, 0, 0, 3});
  g.arcs.push_back({1, 0, 1, 2});
  g.loops[0] = {0, 2};
  g.loops[1] = {1, 3};
  g.loops[2] = {0, 3};
  g.loops[3] = {1, 2};
  T.vertices.push_back(std::move(o));
  T.vertices.push_back(interior_mono(IntPair(-2, -5), ft(0, -1, -2, -5)));
  T.vertices.push_back(interior_mono(IntPair(-2, -5), ft(0, -1, -2, -5)));
  T.edges.push_back({0, 2, IntPair(2, 4)});  // f1
  T.edges.push_back({1, 2, IntPair(2, 6)});  // f2
  T.edges.push_back({2, 3, IntPair(2, 5)});  // g1
  T.edges.push_back({2, 4, IntPair(2, 5)});  // g2
  return T;
}

// Circle at the angle of (1,1) carrying the given ring of tuples, hung
// between a lower leg with pair (1,2) and an upper monovalent end.
DecoratedGraph ring_graph(const std::vector<FourTuple>& ring) {
  DecoratedGraph T;
  T.vertices.push_back(interior_mono(IntPair(1, 2), ft(0, -1, 1, 2)));
  TreeVertex c;
  c.angle = AngleSpec::interior(IntPair(1, 1));
  c.label.kind = VertexLabel::Kind::Interior;
  c.label.tuples = ring;
  VertexGraph& g = c.label.gamma;
  int n = static_cast<int>(ring.size());
  std::vector<int> cyc;
  IntPair P(Int(0), Int(0));
  for (int i = 0; i < n; ++i) {
    Int lbl = Int(ring[i].eps) * content(ring[i].pair);
    g.vertices.push_back({lbl});
    g.arcs.push_back({i, (i + 1) % n, 0, 1});
    cyc.push_back(i);
    P = ring[i].eps > 0 ? P + ring[i].pair : P - ring[i].pair;
  }
  g.loops[0] = cyc;
  g.loops[1] = cyc;
  T.vertices.push_back(std::move(c));
  IntPair q_up = IntPair(1, 2) - P;
  T.vertices.push_back(interior_mono(-q_up, ft(0, -1, 0, 0)));
  T.vertices[2].label.tuples = {FourTuple{0, -1, -q_up}};
  T.edges.push_back({0, 1, IntPair(1, 2)});
  T.edges.push_back({1, 2, q_up});
  return T;
}

// A trivalent vertex at the angle of (0,-1) whose level set is a crossing
// with an attached circle: the fused form of the a7 graph.
DecoratedGraph t_pre() {
  DecoratedGraph T;
  T.vertices.push_back(interior_mono(IntPair(1, 0), ft(0, -1, 1, 0)));
  T.vertices.push_back(interior_mono(IntPair(1, 0), ft(0, -1, 1, 0)));
  TreeVertex o;
  o.angle = AngleSpec::interior(IntPair(0, -1));
  o.label.kind = VertexLabel::Kind::Interior;
  o.label.tuples = {ft(0, +1, 0, -3)};
  VertexGraph& g = o.label.gamma;
  g.vertices.push_back({Int(0)});  // the crossing
  g.vertices.push_back({Int(3)});  // the housed end
  g.arcs.push_back({0, 1, 1, 2});  // a0
  g.arcs.push_back({1, 0, 1, 2});  // a1
  g.arcs.push_back({0, 0, 0, 2});  // a2
  g.loops[0] = {2};
  g.loops[1] = {0, 1};
  g.loops[2] = {2, 0, 1};
  T.vertices.push_back(std::move(o));
  T.vertices.push_back(interior_mono(IntPair(-2, -3), ft(0, -1, -2, -3)));
  T.edges.push_back({0, 2, IntPair(1, 0)});
  T.edges.push_back({1, 2, IntPair(1, 0)});
  T.edges.push_back({2, 3, IntPair(2, 3)});
  return T;
}

// Three trivalent junctions over five ends; with all three junction angles
// distinct this is a top stratum of dimension eight.
DecoratedGraph three_junction_graph(bool coincide) {
  DecoratedGraph T;
  T.vertices.push_back(interior_mono(IntPair(1, 1), ft(0, -1, 1, 1)));
  T.vertices.push_back(interior_mono(IntPair(1, 2), ft(0, -1, 1, 2)));
  TreeVertex o1 = free_interior(coincide ? IntPair(3, 1) : IntPair(2, 1));
  fig8_lower(o1, 0, 1, 4);
  T.vertices.push_back(std::move(o1));
  T.vertices.push_back(interior_mono(IntPair(1, 1), ft(0, -1, 1, 1)));
  T.vertices.push_back(interior_mono(IntPair(1, 3), ft(0, -1, 1, 3)));
  TreeVertex o2 = free_interior(IntPair(3, 1));
  fig8_lower(o2, 2, 3, 5);
  T.vertices.push_back(std::move(o2));
  TreeVertex c = free_interior(IntPair(4, 1));
  fig8_lower(c, 4, 5, 6);
  T.vertices.push_back(std::move(c));
  T.vertices.push_back(interior_mono(IntPair(-4, -7), ft(0, -1, -4, -7)));
  T.edges.push_back({0, 2, IntPair(1, 1)});
  T.edges.push_back({1, 2, IntPair(1, 2)});
  T.edges.push_back({3, 5, IntPair(1, 1)});
  T.edges.push_back({4, 5, IntPair(1, 3)});
  T.edges.push_back({2, 6, IntPair(2, 3)});
  T.edges.push_back({5, 6, IntPair(2, 4)});
  T.edges.push_back({6, 7, IntPair(4, 7)});
  return T;
}

}  // namespace

TEST_CASE("arc_difference_class on four parallel arcs") {
  DecoratedGraph T = quad_graph();
  REQUIRE(validate_graph(T).ok());

  DifferenceClass d = arc_difference_class(T, 2, 0, 1);
  CHECK(d.c.at(0) == 1);   // f1
  CHECK(d.c.at(3) == -1);  // g2
  CHECK(d.c.at(1) == 0);
  CHECK(d.c.at(2) == 0);
  CHECK(d.Q == IntPair(0, 0));

  DifferenceClass d2 = arc_difference_class(T, 2, 2, 3);
  CHECK(d2.c.at(0) == 1);   // f1
  CHECK(d2.c.at(2) == -1);  // g1
  CHECK(d2.Q == IntPair(0, 1));

  CHECK_THROWS_AS(arc_difference_class(T, 2, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(arc_difference_class(T, 2, 0, 2), std::invalid_argument);  // endpoints differ
}

TEST_CASE("arc_difference_class rejects label-sharing pairs") {
  // the two petals of a figure-8 share their upper edge: no chain with
  // coefficients in {-1,0,1} separates them
  DecoratedGraph T = corpus::a7_graph();
  CHECK_THROWS_AS(arc_difference_class(T, 2, 0, 1), std::invalid_argument);
}

TEST_CASE("forced_equal distinguishes the three regimes") {
  DecoratedGraph T = quad_graph();
  CHECK(forced_equal(T, 2, 0, 1) == ForcedEqual::AlwaysEqual);
  CHECK(forced_equal(T, 2, 2, 3) == ForcedEqual::Independent);

  DecoratedGraph C = quad_graph_at_critical();
  REQUIRE(validate_graph(C).ok());
  CHECK(forced_equal(C, 2, 0, 1) == ForcedEqual::EqualAtThisAngle);
  CHECK(forced_equal(C, 2, 2, 3) == ForcedEqual::EqualAtThisAngle);
}

TEST_CASE("split_at_arcset splits the four-arc graph into two cylinders") {
  DecoratedGraph T = quad_graph();
  auto pieces = split_at_arcset(T, 2, {0, 1});
  REQUIRE(pieces.size() == 2);
  for (auto& [data, R] : pieces) {
    CHECK(validate_graph(R).ok());
    CHECK(R.vertices.size() == 2);
    CHECK(R.edges.size() == 1);
    CHECK(data.tuples.size() == 2);
  }
  // piece of arc 0 keeps the f1/g2 labels: its edge pair is (1,3)
  CHECK(pieces[0].second.edges[0].q == IntPair(1, 3));
  CHECK(pieces[1].second.edges[0].q == IntPair(1, 2));

  // the independent pair cannot be split
  CHECK_THROWS_AS(split_at_arcset(T, 2, {2, 3}), std::invalid_argument);
}

TEST_CASE("split_at_arcset keeps a visible fused vertex when the class is nonzero") {
  DecoratedGraph C = quad_graph_at_critical();
  auto pieces = split_at_arcset(C, 2, {0, 1});
  REQUIRE(pieces.size() == 2);
  for (auto& [data, R] : pieces) {
    CHECK(validate_graph(R).ok());
    REQUIRE(R.vertices.size() == 3);
    CHECK(data.tuples.size() == 3);
  }
  // the middle vertices survive as circles housing one end each, with the
  // positive end on one side and the negative end on the other
  std::multiset<int> eps;
  for (auto& [data, R] : pieces) {
    const TreeVertex& mid = R.vertices[0];
    REQUIRE(mid.label.tuples.size() == 1);
    CHECK(angle_eq(mid.angle, AngleSpec::interior(IntPair(0, -1))));
    eps.insert(mid.label.tuples[0].eps);
  }
  CHECK(eps == std::multiset<int>{-1, 1});
}

TEST_CASE("collapse_arc merges through a zero label internally") {
  DecoratedGraph T = quad_graph();
  CollapseOutcome res = collapse_arc(T, 2, 0);
  auto* in = std::get_if<CollapseInternal>(&res);
  REQUIRE(in != nullptr);
  const VertexGraph& g = in->graph.vertices[2].label.gamma;
  CHECK(g.vertices.size() == 1);
  CHECK(g.arcs.size() == 3);
  CHECK(g.vertices[0].m == 0);
  CHECK(asymptotic_of(in->graph).tuples.size() == asymptotic_of(T).tuples.size());
}

TEST_CASE("collapse_arc merges two same-sign ends") {
  DecoratedGraph T = corpus::a5_graph();
  int o = -1;
  for (std::size_t v = 0; v < T.vertices.size(); ++v)
    if (T.is_multivalent(static_cast<int>(v))) o = static_cast<int>(v);
  REQUIRE(o >= 0);
  CollapseOutcome res = collapse_arc(T, o, 0);
  auto* sm = std::get_if<CollapseSameMerge>(&res);
  REQUIRE(sm != nullptr);
  CHECK(sm->merged.eps == 1);
  CHECK(sm->merged.pair == IntPair(0, -2));
  CHECK(validate_graph(sm->graph).ok());
  const VertexGraph& g = sm->graph.vertices[o].label.gamma;
  CHECK(g.vertices.size() == 1);
  CHECK(g.vertices[0].m == 2);
  // the data lost one tuple and gained the merged one
  CHECK(sm->data.tuples.size() == 3);
}

TEST_CASE("collapse_arc cancellation: vertex dissolves under a two-point circle") {
  DecoratedGraph T = ring_graph({ft(0, +1, 1, 1), ft(0, -1, 1, 1)});
  REQUIRE(validate_graph(T).ok());
  CollapseOutcome res = collapse_arc(T, 1, 0);
  auto* cc = std::get_if<CollapseCancel>(&res);
  REQUIRE(cc != nullptr);
  CHECK(cc->subcase == "delete-vertex-concatenate-edges");
  CHECK(cc->k == 0);
  REQUIRE(cc->removed.size() == 2);
  CHECK(cc->removed[0].pair == IntPair(1, 1));
  CHECK(cc->graph.vertices.size() == 2);
  CHECK(cc->graph.edges.size() == 1);
  CHECK(cc->graph.edges[0].q == IntPair(1, 2));
  CHECK(validate_graph(cc->graph).ok());
}

TEST_CASE("collapse_arc cancellation: arc chain drops out of a larger circle") {
  DecoratedGraph T = ring_graph({ft(0, +1, 1, 1), ft(0, -1, 1, 1), ft(0, +1, 1, 1)});
  REQUIRE(validate_graph(T).ok());
  CollapseOutcome res = collapse_arc(T, 1, 0);  // the arc from +1 into -1
  auto* cc = std::get_if<CollapseCancel>(&res);
  REQUIRE(cc != nullptr);
  CHECK(cc->subcase == "delete-arc-concatenate");
  CHECK(cc->k == 0);
  const VertexGraph& g = cc->graph.vertices[1].label.gamma;
  CHECK(g.vertices.size() == 1);
  CHECK(g.arcs.size() == 1);
  CHECK(g.vertices[0].m == 1);
  CHECK(validate_graph(cc->graph).ok());
}

TEST_CASE("collapse_arc cancellation: four-valent ends merge to a zero label") {
  DecoratedGraph T = quad_graph(Int(1), Int(-1));
  REQUIRE(validate_graph(T).ok());
  CollapseOutcome res = collapse_arc(T, 2, 0);
  auto* cc = std::get_if<CollapseCancel>(&res);
  REQUIRE(cc != nullptr);
  CHECK(cc->subcase == "merge-to-zero");
  CHECK(cc->k == 4);
  const VertexGraph& g = cc->graph.vertices[2].label.gamma;
  CHECK(g.vertices.size() == 1);
  CHECK(g.vertices[0].m == 0);
  CHECK(validate_graph(cc->graph).ok());
}

TEST_CASE("collapse_arc rejects self-loops") {
  DecoratedGraph T = corpus::a4_graph();
  int o = -1;
  for (std::size_t v = 0; v < T.vertices.size(); ++v)
    if (T.is_multivalent(static_cast<int>(v))) o = static_cast<int>(v);
  CollapseOutcome res = collapse_arc(T, o, 0);
  CHECK(std::holds_alternative<CollapseRejected>(res));
}

TEST_CASE("refine splits a high-valency crossing in two") {
  // six half-arcs at one point: reduce to two four-valent crossings
  DecoratedGraph T = quad_graph(Int(1), Int(-1));
  CollapseOutcome res = collapse_arc(T, 2, 0);
  auto* cc = std::get_if<CollapseCancel>(&res);
  REQUIRE(cc != nullptr);
  DecoratedGraph R = refine(cc->graph, ReduceVertex{2, 0});
  REQUIRE(validate_graph(R).ok());
  const VertexGraph& g = R.vertices[2].label.gamma;
  REQUIRE(g.vertices.size() == 2);
  CHECK(g.valency(0) == 4);
  CHECK(g.valency(1) == 4);
  CHECK(g.vertices[0].m == 0);
  CHECK(g.vertices[1].m == 0);
  // the data set and total dimension are untouched
  CHECK(moduli_dimension(asymptotic_of(R)) == moduli_dimension(asymptotic_of(cc->graph)));
}

TEST_CASE("refine pulls a nonzero label off a four-valent crossing") {
  DecoratedGraph T = quad_graph(Int(1), Int(-1));
  DecoratedGraph R = refine(T, ReduceVertex{2, 0});
  REQUIRE(validate_graph(R).ok());
  const VertexGraph& g = R.vertices[2].label.gamma;
  REQUIRE(g.vertices.size() == 3);
  std::multiset<long> labels, valencies;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    labels.insert(g.vertices[i].m.get_si());
    valencies.insert(g.valency(static_cast<int>(i)));
  }
  CHECK(labels == std::multiset<long>{-1, 0, 1});
  CHECK(valencies == std::multiset<long>{2, 4, 4});
}

TEST_CASE("refine rejects trivial reductions") {
  DecoratedGraph T = quad_graph();
  CHECK_THROWS_AS(refine(T, ReduceVertex{2, 0}), std::runtime_error);  // zero label, 4-valent
}

TEST_CASE("refine splits the fused a7 vertex back apart") {
  DecoratedGraph T = t_pre();
  REQUIRE(validate_graph(T).ok());
  DecoratedGraph R = refine(T, SplitTrivalent{2, 0, false, IntPair(1, -1)});
  REQUIRE(validate_graph(R).ok());
  CHECK(R.vertices.size() == 5);
  CHECK(R.edges.size() == 4);
  auto iso = are_isomorphic(R, corpus::a7_graph(IntPair(1, -1)));
  CHECK(iso.has_value());
  // the split preserves the data set and the total dimension
  AsymptoticData before = asymptotic_of(T), after = asymptotic_of(R);
  CHECK(moduli_dimension(before) == moduli_dimension(after));
  CHECK(before.tuples.size() == after.tuples.size());
  // and raises the stratum dimension by one: a codimension-one face opened up
  CHECK(stratum_data(R).dim == stratum_data(T).dim + 1);
  // existence transfers to the refined graph
  CHECK(check_exists(R).nonempty == check_exists(T).nonempty);
}

TEST_CASE("refine split demands two distinct edges on the chosen side") {
  DecoratedGraph T = t_pre();
  CHECK_THROWS_AS(refine(T, SplitTrivalent{2, 0, true, IntPair(-1, -1)}), std::runtime_error);
}

TEST_CASE("merge_adjacent fuses the a7 crossing with its circle") {
  DecoratedGraph T = corpus::a7_graph();
  auto merged = merge_adjacent(T, 2);
  REQUIRE(!merged.empty());
  bool found = false;
  for (const DecoratedGraph& R : merged) {
    CHECK(validate_graph(R).ok());
    CHECK(stratum_data(R).dim == stratum_data(T).dim - 1);
    if (are_isomorphic(R, t_pre()).has_value()) found = true;
  }
  CHECK(found);
}

TEST_CASE("merge then split is the identity on the stratum") {
  DecoratedGraph T = corpus::a7_graph();
  auto merged = merge_adjacent(T, 2);
  REQUIRE(!merged.empty());
  const DecoratedGraph& M = merged[0];
  // locate the crossing inside the fused level set
  int o = -1, crossing = -1;
  for (std::size_t v = 0; v < M.vertices.size(); ++v) {
    const VertexGraph& g = M.vertices[v].label.gamma;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
      if (g.vertices[i].m == 0 && g.valency(static_cast<int>(i)) == 4) {
        o = static_cast<int>(v);
        crossing = static_cast<int>(i);
      }
  }
  REQUIRE(o >= 0);
  DecoratedGraph R = refine(M, SplitTrivalent{o, crossing, false, IntPair(1, -1)});
  CHECK(homotopy_signature(R) == homotopy_signature(corpus::a7_graph(IntPair(1, -1))));
}

TEST_CASE("absorb_leg pulls an end into a free junction") {
  DecoratedGraph G = three_junction_graph(false);
  auto R = absorb_leg(G, 3);  // the (1,1) leg hanging below the second junction
  REQUIRE(R.has_value());
  CHECK(validate_graph(*R).ok());
  CHECK(stratum_data(*R).dim == stratum_data(G).dim - 1);
  CHECK(classify_codim1(*R) == StratumClass::Type3);

  DecoratedGraph T = corpus::a7_graph();
  // a7's two bottom ends share the angle pi/2: pulling the junction onto one
  // of them collides with the other, so no such face exists
  CHECK(!absorb_leg(T, 0).has_value());
  // absorbing into a pinned vertex is impossible
  CHECK(!absorb_leg(T, 4).has_value());
}

TEST_CASE("classify_codim1 recognizes the four patterns") {
  CHECK(classify_codim1(corpus::a7_graph()) == StratumClass::Codim0);
  CHECK(classify_codim1(corpus::a4_graph()) == StratumClass::Codim0);
  CHECK(classify_codim1(t_pre()) == StratumClass::Type4);
  CHECK(classify_codim1(quad_graph()) == StratumClass::Type2);

  DecoratedGraph gen = three_junction_graph(false);
  REQUIRE(validate_graph(gen).ok());
  CHECK(classify_codim1(gen) == StratumClass::Codim0);
  CHECK(stratum_data(gen).dim == 8);

  DecoratedGraph eq = three_junction_graph(true);
  REQUIRE(validate_graph(eq).ok());
  CHECK(stratum_data(eq).dim == 7);
  CHECK(classify_codim1(eq) == StratumClass::Type1);

  // the coincidence is reachable from the generic stratum by an angle move
  auto moved = set_vertex_angle(gen, 2, AngleSpec::interior(IntPair(3, 1)));
  REQUIRE(moved.has_value());
  CHECK(homotopy_signature(*moved) == homotopy_signature(eq));
}

TEST_CASE("census of a4 is a single nonempty top stratum") {
  auto entries = census(corpus::a4());
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].stratum.dim == 3);
  CHECK(entries[0].stratum.dim == moduli_dimension(corpus::a4()));
  CHECK(entries[0].nonempty);
  CHECK(entries[0].aut_order == 1);
  CHECK(entries[0].cls == StratumClass::Codim0);
  CHECK(!entries[0].boundary);
  REQUIRE(entries[0].rep.has_value());
  CHECK(homotopy_signature(*entries[0].rep) == homotopy_signature(corpus::a4_graph()));
}

TEST_CASE("census of the cylinder data is the special one-dimensional entry") {
  auto entries = census(corpus::cylinder_data());
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].cylinder);
  CHECK(entries[0].stratum.dim == 1);
  CHECK(!entries[0].rep.has_value());
}

TEST_CASE("census of a5 finds the boundary stratum with a merged end") {
  auto entries = census(corpus::a5());
  bool interior = false, boundary = false;
  for (const CensusEntry& e : entries) {
    if (!e.boundary && e.stratum.dim == 4) interior = true;
    if (e.boundary) {
      boundary = true;
      bool merged = false;
      for (const FourTuple& t : e.data.tuples)
        if (t.eps > 0 && content(t.pair) == 2) merged = true;
      CHECK(merged);
    }
  }
  CHECK(interior);
  CHECK(boundary);
}

TEST_CASE("census of a7 finds the top stratum and its degenerations") {
  auto entries = census(corpus::a7());
  long top_dim = moduli_dimension(corpus::a7());
  CHECK(top_dim == 5);
  bool top = false, type4 = false;
  for (const CensusEntry& e : entries) {
    if (e.boundary) continue;
    CHECK(e.stratum.dim <= top_dim);
    if (e.signature == homotopy_signature(corpus::a7_graph())) {
      top = true;
      CHECK(e.stratum.dim == top_dim);
      CHECK(e.nonempty);
      CHECK(e.aut_order == 2);
    }
    if (e.cls == StratumClass::Type4) type4 = true;
  }
  CHECK(top);
  CHECK(type4);
}

TEST_CASE("census of the three-junction data finds coincidence and housing faces") {
  AsymptoticData A{0, 0,
                   {ft(0, -1, 1, 1), ft(0, -1, 1, 1), ft(0, -1, 1, 2), ft(0, -1, 1, 3),
                    ft(0, -1, -4, -7)}};
  REQUIRE(validate_data(A).ok());
  CensusBounds b;
  b.max_entries = 400;
  b.closure_depth = 1;
  b.with_boundary = false;
  auto entries = census(A, b);
  bool top = false, type1 = false, type3 = false;
  for (const CensusEntry& e : entries) {
    if (e.stratum.dim == 8) top = true;
    if (e.cls == StratumClass::Type1) type1 = true;
    if (e.cls == StratumClass::Type3) type3 = true;
  }
  CHECK(top);
  CHECK(type1);
  CHECK(type3);
}

TEST_CASE("census respects its bounds") {
  CensusBounds b;
  b.max_leaves = 2;
  CHECK_THROWS_AS(census(corpus::a7(), b), std::runtime_error);
  CHECK_THROWS_AS(census(AsymptoticData{0, 0, {ft(0, -1, 1, 1)}}), std::invalid_argument);
}

TEST_CASE("adjacency connects the a7 top stratum to its faces") {
  auto entries = census(corpus::a7());
  StratumPoset P = adjacency(entries);
  int top = -1;
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].signature == homotopy_signature(corpus::a7_graph())) top = static_cast<int>(i);
  REQUIRE(top >= 0);
  bool to4 = false;
  for (const StratumPoset::Edge& e : P.edges) {
    CHECK(P.entries[e.upper].stratum.dim == P.entries[e.lower].stratum.dim + 1);
    if (e.upper != top) continue;
    if (e.type == StratumClass::Type4) {
      to4 = true;
      CHECK(e.picture == "figure-eight");
    }
  }
  CHECK(to4);
}

TEST_CASE("adjacency of a single entry is empty") {
  StratumPoset P = adjacency(census(corpus::a4()));
  CHECK(P.edges.empty());
}
