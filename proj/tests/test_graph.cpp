#include <strata/graph.hpp>
#include <strata/blowup.hpp>

#include <catch_amalgamated.hpp>

#include "corpus.hpp"
#include "oracles.hpp"

#include <algorithm>

using namespace strata;
using corpus::ft;

TEST_CASE("matrix_rank") {
  CHECK(matrix_rank({}) == 0);
  CHECK(matrix_rank({{Int(0), Int(0)}}) == 0);
  CHECK(matrix_rank({{Int(1), Int(2)}, {Int(2), Int(4)}}) == 1);
  CHECK(matrix_rank({{Int(1), Int(2)}, {Int(2), Int(5)}}) == 2);
  CHECK(matrix_rank({{Int(1), Int(0), Int(1)},
                     {Int(0), Int(1), Int(1)},
                     {Int(1), Int(1), Int(2)}}) == 2);
}

TEST_CASE("vertex_pair by label kind") {
  DecoratedGraph T = corpus::a4_graph();
  CHECK(vertex_pair(T, 0) == IntPair(-1, -1));
  CHECK(vertex_pair(T, 1) == IntPair(0, -1));
  CHECK(vertex_pair(T, 2) == IntPair(1, 2));

  TreeVertex z;
  z.angle = AngleSpec::zero();
  z.label.kind = VertexLabel::Kind::ZeroInt;
  z.label.m = 3;
  DecoratedGraph S;
  S.vertices.push_back(z);
  CHECK(vertex_pair(S, 0) == IntPair(0, -3));
  S.vertices[0].label.kind = VertexLabel::Kind::ZeroEnd;
  S.vertices[0].label.end = ft(1, -1, -1, 1);
  CHECK(vertex_pair(S, 0) == IntPair(-1, 1));
}

TEST_CASE("validate_graph accepts the corpus") {
  CHECK(validate_graph(corpus::a4_graph()).ok());
  CHECK(validate_graph(corpus::a5_graph()).ok());
  CHECK(validate_graph(corpus::a6_graph()).ok());
  CHECK(validate_graph(corpus::a7_graph()).ok());
  CHECK(validate_graph(corpus::linear_of(corpus::empty_instance())).ok());
}

static bool has_constraint(const Report& r, const std::string& c) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&c](const Violation& v) { return v.constraint == c; });
}

TEST_CASE("validate_graph violations") {
  SECTION("zero edge pair") {
    DecoratedGraph T = corpus::a4_graph();
    T.edges[0].q = IntPair(0, 0);
    CHECK(has_constraint(validate_graph(T), "edge"));
  }
  SECTION("equal endpoint angles") {
    DecoratedGraph T = corpus::a4_graph();
    T.vertices[0].angle = T.vertices[1].angle;
    CHECK(has_constraint(validate_graph(T), "edge"));
  }
  SECTION("broken tree") {
    DecoratedGraph T = corpus::a4_graph();
    T.edges.pop_back();
    CHECK(has_constraint(validate_graph(T), "tree"));
  }
  SECTION("monovalent interior with a level-set graph") {
    DecoratedGraph T = corpus::a4_graph();
    T.vertices[0].label.gamma.vertices.push_back({Int(1)});
    CHECK(has_constraint(validate_graph(T), "label"));
  }
  SECTION("monovalent sign rule") {
    DecoratedGraph T = corpus::a4_graph();
    T.edges[0].q = -T.edges[0].q;
    CHECK(has_constraint(validate_graph(T), "edge-rule"));
  }
  SECTION("multivalent sum rule") {
    DecoratedGraph T = corpus::a7_graph();
    T.edges[2].q = IntPair(2, 1);
    CHECK(has_constraint(validate_graph(T), "edge-rule"));
  }
  SECTION("label multiset vs Gamma labels") {
    DecoratedGraph T = corpus::a7_graph();
    T.vertices[3].label.gamma.vertices[0].m = -3;
    CHECK(has_constraint(validate_graph(T), "gamma"));
  }
  SECTION("missing loop") {
    DecoratedGraph T = corpus::a7_graph();
    T.vertices[2].label.gamma.loops.erase(0);
    CHECK(has_constraint(validate_graph(T), "gamma"));
  }
  SECTION("first Betti number vs valency") {
    DecoratedGraph T = corpus::a7_graph();
    T.vertices[2].label.gamma.arcs.push_back({0, 0, 0, 2});
    CHECK(has_constraint(validate_graph(T), "gamma"));
  }
  SECTION("zero-label vertex valency") {
    DecoratedGraph T = corpus::a7_graph();
    // replace the figure-8 with a single bivalent zero-label vertex
    VertexGraph& g = T.vertices[2].label.gamma;
    g.arcs = {{0, 0, 0, 2}};
    g.loops = {{0, {0}}, {1, {0}}, {2, {0}}};
    auto rep = validate_graph(T);
    CHECK(has_constraint(rep, "gamma"));
  }
  SECTION("multivalent vertex at an extremal angle") {
    DecoratedGraph T = corpus::a7_graph(IntPair(-1, -2));
    // theta(-1,-2) > theta(0,-1): v3's incident edges now both come from above
    CHECK(has_constraint(validate_graph(T), "tree"));
  }
}

TEST_CASE("check_exists on worked instances") {
  CHECK(check_exists(corpus::a4_graph()).nonempty);
  CHECK(check_exists(corpus::a5_graph()).nonempty);
  CHECK(check_exists(corpus::a6_graph()).nonempty);
  CHECK(check_exists(corpus::a7_graph()).nonempty);

  auto r = check_exists(corpus::linear_of(corpus::empty_instance()));
  CHECK(!r.nonempty);
  CHECK(r.edge == 0);
  REQUIRE(r.witness.has_value());
  double w = oracle::angle_of(*r.witness);
  CHECK(w > 0.9553 - 1e-6);
  CHECK(w < 2.1863 + 1e-6);

  DecoratedGraph bad = corpus::a4_graph();
  bad.edges[1].q = -bad.edges[1].q;
  auto r2 = check_exists(bad);
  CHECK(!r2.nonempty);
  CHECK(r2.edge == 1);
}

TEST_CASE("check_exists demands endpoint zeros only at monovalent interior vertices") {
  // an edge pair vanishing at a bivalent endpoint must be rejected
  DecoratedGraph T = corpus::a4_graph();
  T.edges[0].q = IntPair(0, -2);  // alpha_(0,-2) vanishes at theta_(0,-1), vertex 1
  auto r = check_exists(T);
  CHECK(!r.nonempty);
  CHECK(r.edge == 0);
}

TEST_CASE("asymptotic_of round trip") {
  for (const AsymptoticData& A :
       {corpus::a4(), corpus::a5(), corpus::a6(), corpus::empty_instance()}) {
    AsymptoticData B = asymptotic_of(corpus::linear_of(A));
    CHECK(B.c_plus == A.c_plus);
    CHECK(B.c_minus == A.c_minus);
    auto key = [](const FourTuple& t) {
      return std::tuple<int, int, std::string>(t.delta, t.eps, to_string(t.pair));
    };
    std::vector<std::tuple<int, int, std::string>> x, y;
    for (const auto& t : A.tuples) x.push_back(key(t));
    for (const auto& t : B.tuples) y.push_back(key(t));
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    CHECK(x == y);
  }
  AsymptoticData B = asymptotic_of(corpus::a7_graph());
  CHECK(validate_data(B).ok());
  CHECK(B.tuples.size() == corpus::a7().tuples.size());
}

TEST_CASE("stratum_data") {
  auto s4 = stratum_data(corpus::a4_graph());
  CHECK(s4.B.empty());
  CHECK(s4.c == 0);
  CHECK(s4.m == 0);
  REQUIRE(s4.d.size() == 1);
  CHECK(s4.d[0].size() == 1);
  CHECK(s4.dim == 3);
  CHECK(s4.dim == moduli_dimension(corpus::a4()));

  auto s5 = stratum_data(corpus::a5_graph());
  CHECK(s5.dim == 4);
  CHECK(s5.c == 0);
  CHECK(s5.m == 0);
  REQUIRE(s5.d.size() == 1);
  CHECK(s5.d[0].size() == 2);

  auto s6 = stratum_data(corpus::a6_graph());
  CHECK(s6.dim == 6);
  REQUIRE(s6.d.size() == 1);
  CHECK(s6.d[0].size() == 4);

  auto s7 = stratum_data(corpus::a7_graph());
  CHECK(s7.B.empty());
  CHECK(s7.c == 1);
  CHECK(s7.m == 1);
  CHECK(s7.d.size() == 2);
  CHECK(s7.dim == 5);
  CHECK(s7.dim == moduli_dimension(corpus::a7()));

  // dim never exceeds the ambient moduli dimension
  for (const DecoratedGraph& T : {corpus::a4_graph(), corpus::a5_graph(), corpus::a6_graph(),
                                  corpus::a7_graph()})
    CHECK(stratum_data(T).dim <= moduli_dimension(asymptotic_of(T)));
}

// --- blow-up and pairing ----------------------------------------------------


static strata::ArcChain circle_chain(const strata::BlowUp& B, int v) {
  strata::ArcChain c;
  for (int a : B.circles.at(v)) c.push_back({a, 1});
  return c;
}

TEST_CASE("blow_up structure") {
  // bivalent vertex with a one-vertex circle: one lifted arc, one 2-arc circle
  DecoratedGraph T = corpus::a4_graph();
  auto B = blow_up(T, 1);
  CHECK(B.nodes.size() == 2);
  CHECK(B.arcs.size() == 3);
  REQUIRE(B.circles.size() == 1);
  CHECK(B.circles.begin()->second.size() == 2);
  CHECK(B.loops.size() == 2);

  // all labels zero: the blow-up is the graph itself
  DecoratedGraph A7 = corpus::a7_graph();
  auto B2 = blow_up(A7, 2);
  CHECK(B2.circles.empty());
  CHECK(B2.nodes.size() == 1);
  CHECK(B2.arcs.size() == 2);
  for (const auto& [e, chain] : B2.loops)
    for (auto [a, s] : chain) {
      CHECK(!B2.arcs[a].circle);
      CHECK(s == 1);
    }

  // two-vertex circle graph: two 2-arc circles
  DecoratedGraph A5 = corpus::a5_graph();
  auto B3 = blow_up(A5, 1);
  CHECK(B3.circles.size() == 2);
  CHECK(B3.nodes.size() == 4);
  CHECK(B3.arcs.size() == 2 + 4);
}

TEST_CASE("phi_eval on lifted loops and circles") {
  for (const DecoratedGraph& T : {corpus::a4_graph(), corpus::a5_graph(), corpus::a6_graph(),
                                  corpus::a7_graph()}) {
    for (std::size_t v = 0; v < T.vertices.size(); ++v) {
      if (!T.is_multivalent(static_cast<int>(v))) continue;
      auto B = blow_up(T, static_cast<int>(v));
      for (const auto& [e, chain] : B.loops)
        CHECK(phi_eval(B, chain) == T.edges[e].q);
      IntPair Phat = angle_primitive(T, static_cast<int>(v));
      for (const auto& [gv, c] : B.circles) {
        IntPair val = phi_eval(B, circle_chain(B, gv));
        Int m = T.vertices[v].label.gamma.vertices[gv].m;
        CHECK((val == IntPair(m * Phat.p, m * Phat.pp) ||
               val == -IntPair(m * Phat.p, m * Phat.pp)));
      }
    }
  }
  // relation consistency on the worked bivalent circle: Q_e1 - Q_e0 = (0,1)
  DecoratedGraph T = corpus::a4_graph();
  auto B = blow_up(T, 1);
  IntPair diff = T.edges[1].q - T.edges[0].q;
  CHECK(diff == IntPair(0, 1));
  IntPair cval = phi_eval(B, circle_chain(B, 0));
  CHECK((cval == IntPair(0, 1) || cval == IntPair(0, -1)));

  // trivial out-and-back chain
  CHECK(phi_eval(B, {{0, 1}, {0, -1}}) == IntPair(0, 0));
  // homomorphism on a concatenation of loop classes
  ArcChain both = B.loops.at(0);
  for (auto p : B.loops.at(1)) both.push_back(p);
  CHECK(phi_eval(B, both) == T.edges[0].q + T.edges[1].q);
  // non-cycle rejected
  CHECK_THROWS(phi_eval(B, {{0, 1}}));
}

TEST_CASE("path_set_pairing anchors") {
  DecoratedGraph T = corpus::a4_graph();
  // Gamma at v1: one vertex labeled +1, one self-arc a0 labeled (e0,e1)

  // out-and-back
  PathSet back{{0, {{0, true}, {0, false}}}, {1, {{0, false}, {0, true}}}};
  CHECK(path_set_pairing(T, 1, back) == IntPair(0, 0));

  // circumnavigation of l_oe0, then out-and-back closure
  PathSet circ{{0, {{0, true}, {0, true}}}, {1, {{0, false}, {0, true}}}};
  IntPair v = path_set_pairing(T, 1, circ);
  CHECK((v == T.edges[0].q || v == -T.edges[0].q));

  // reversal negates the pairing
  PathSet rev{{1, {{0, false}, {0, true}}}, {0, {{0, false}, {0, false}}}};
  // reverse of circ: each path reversed, order reversed
  IntPair w = path_set_pairing(T, 1, rev);
  CHECK(w == -v);

  // bivalent-vertex loop: two-vertex circle at A5's middle vertex
  DecoratedGraph A5 = corpus::a5_graph();
  PathSet biv{{0, {{0, true}, {1, true}}}, {1, {{1, false}, {0, false}, {0, true}}}};
  IntPair b = path_set_pairing(A5, 1, biv);
  IntPair Phat = angle_primitive(A5, 1);
  CHECK((b == Phat || b == -Phat));

  // malformed sets
  CHECK_THROWS(path_set_pairing(T, 1, PathSet{}));
  CHECK_THROWS(path_set_pairing(T, 1, PathSet{{0, {{0, true}}}}));
  PathSet same_label{{0, {{0, true}, {0, false}}}, {0, {{0, false}, {0, true}}}};
  CHECK_THROWS(path_set_pairing(T, 1, same_label));
}
