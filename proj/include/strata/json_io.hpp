#pragma once

// JSON (de)serialization and DOT export for the library types. Rationals are
// written as decimal-free "num/den" strings; floats appear only in
// annotations, never as canonical state.

#include "asymptotic.hpp"
#include "exactnum.hpp"
#include "graph.hpp"
#include "orbit.hpp"
#include "strata.hpp"
#include "symmetry.hpp"

#include <json.hpp>

#include <cstdio>
#include <stdexcept>
#include <string>

namespace strata::jsonio {

using nlohmann::json;

// --- scalars ---------------------------------------------------------------

inline json int_to_json(const Int& x) {
  if (x.fits_slong_p()) return json(x.get_si());
  return json(x.get_str());
}

inline Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return Int(j.get<std::string>());
  throw std::invalid_argument("json: expected an integer or integer string");
}

inline std::string rat_to_string(const Rat& x) {
  Rat c = x;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  Rat r;
  if (slash == std::string::npos) r = Rat(Int(s));
  else r = Rat(Int(s.substr(0, slash))) / Rat(Int(s.substr(slash + 1)));
  r.canonicalize();
  return r;
}

inline json pair_to_json(const IntPair& P) { return json::array({int_to_json(P.p), int_to_json(P.pp)}); }

inline IntPair pair_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("json: pair must be [p, p']");
  return IntPair(int_from_json(j[0]), int_from_json(j[1]));
}

inline json angle_to_json(const AngleSpec& a) {
  switch (a.kind) {
    case AngleSpec::Kind::Zero: return json("zero");
    case AngleSpec::Kind::Pi: return json("pi");
    default: return pair_to_json(a.pair);
  }
}

inline AngleSpec angle_from_json(const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "zero") return AngleSpec::zero();
    if (s == "pi") return AngleSpec::pi();
    throw std::invalid_argument("json: unknown angle \"" + s + "\"");
  }
  return AngleSpec::interior(pair_from_json(j));
}

// --- asymptotic data --------------------------------------------------------

inline json tuple_to_json(const FourTuple& t) {
  return json{{"delta", t.delta}, {"eps", t.eps > 0 ? "+" : "-"}, {"pair", pair_to_json(t.pair)}};
}

inline FourTuple tuple_from_json(const json& j) {
  FourTuple t;
  t.delta = j.at("delta").get<int>();
  std::string eps = j.at("eps").get<std::string>();
  if (eps != "+" && eps != "-") throw std::invalid_argument("json: eps must be \"+\" or \"-\"");
  t.eps = eps == "+" ? 1 : -1;
  t.pair = pair_from_json(j.at("pair"));
  return t;
}

inline json data_to_json(const AsymptoticData& A) {
  json tuples = json::array();
  for (const FourTuple& t : A.tuples) tuples.push_back(tuple_to_json(t));
  return json{{"c_minus", A.c_minus}, {"c_plus", A.c_plus}, {"tuples", std::move(tuples)}};
}

inline AsymptoticData data_from_json(const json& j) {
  AsymptoticData A;
  A.c_minus = j.at("c_minus").get<long>();
  A.c_plus = j.at("c_plus").get<long>();
  for (const json& t : j.at("tuples")) A.tuples.push_back(tuple_from_json(t));
  return A;
}

// --- decorated graphs -------------------------------------------------------

inline json gamma_to_json(const VertexGraph& g) {
  json vertices = json::array(), arcs = json::array(), loops = json::object();
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    vertices.push_back(json{{"id", i}, {"m", int_to_json(g.vertices[i].m)}});
  for (std::size_t i = 0; i < g.arcs.size(); ++i)
    arcs.push_back(json{{"id", i},
                        {"from", g.arcs[i].from},
                        {"to", g.arcs[i].to},
                        {"eminus", g.arcs[i].eminus},
                        {"eplus", g.arcs[i].eplus}});
  for (const auto& [e, L] : g.loops) loops[std::to_string(e)] = L;
  return json{{"vertices", std::move(vertices)}, {"arcs", std::move(arcs)},
              {"loops", std::move(loops)}};
}

inline VertexGraph gamma_from_json(const json& j) {
  VertexGraph g;
  g.vertices.resize(j.at("vertices").size());
  for (const json& v : j.at("vertices"))
    g.vertices.at(v.at("id").get<std::size_t>()).m = int_from_json(v.at("m"));
  g.arcs.resize(j.at("arcs").size());
  for (const json& a : j.at("arcs")) {
    GammaArc& x = g.arcs.at(a.at("id").get<std::size_t>());
    x.from = a.at("from").get<int>();
    x.to = a.at("to").get<int>();
    x.eminus = a.at("eminus").get<int>();
    x.eplus = a.at("eplus").get<int>();
  }
  for (auto it = j.at("loops").begin(); it != j.at("loops").end(); ++it)
    g.loops[std::stoi(it.key())] = it.value().get<std::vector<int>>();
  return g;
}

inline std::string kind_to_string(VertexLabel::Kind k) {
  switch (k) {
    case VertexLabel::Kind::ZeroInt: return "zero_int";
    case VertexLabel::Kind::PiInt: return "pi_int";
    case VertexLabel::Kind::ZeroEnd: return "zero_end";
    case VertexLabel::Kind::PiEnd: return "pi_end";
    default: return "interior";
  }
}

inline VertexLabel::Kind kind_from_string(const std::string& s) {
  if (s == "zero_int") return VertexLabel::Kind::ZeroInt;
  if (s == "pi_int") return VertexLabel::Kind::PiInt;
  if (s == "zero_end") return VertexLabel::Kind::ZeroEnd;
  if (s == "pi_end") return VertexLabel::Kind::PiEnd;
  if (s == "interior") return VertexLabel::Kind::Interior;
  throw std::invalid_argument("json: unknown vertex label kind \"" + s + "\"");
}

inline json label_to_json(const VertexLabel& L) {
  json out{{"kind", kind_to_string(L.kind)}};
  switch (L.kind) {
    case VertexLabel::Kind::ZeroInt:
    case VertexLabel::Kind::PiInt: out["m"] = int_to_json(L.m); break;
    case VertexLabel::Kind::ZeroEnd:
    case VertexLabel::Kind::PiEnd: out["end"] = tuple_to_json(L.end); break;
    default: {
      json tuples = json::array();
      for (const FourTuple& t : L.tuples) tuples.push_back(tuple_to_json(t));
      out["tuples"] = std::move(tuples);
      if (!L.gamma.vertices.empty()) out["gamma"] = gamma_to_json(L.gamma);
      break;
    }
  }
  return out;
}

inline VertexLabel label_from_json(const json& j) {
  VertexLabel L;
  L.kind = kind_from_string(j.at("kind").get<std::string>());
  switch (L.kind) {
    case VertexLabel::Kind::ZeroInt:
    case VertexLabel::Kind::PiInt: L.m = int_from_json(j.at("m")); break;
    case VertexLabel::Kind::ZeroEnd:
    case VertexLabel::Kind::PiEnd: L.end = tuple_from_json(j.at("end")); break;
    default:
      if (j.contains("tuples"))
        for (const json& t : j.at("tuples")) L.tuples.push_back(tuple_from_json(t));
      if (j.contains("gamma")) L.gamma = gamma_from_json(j.at("gamma"));
      break;
  }
  return L;
}

inline json graph_to_json(const DecoratedGraph& T) {
  json vertices = json::array(), edges = json::array();
  for (std::size_t i = 0; i < T.vertices.size(); ++i)
    vertices.push_back(json{{"id", i},
                            {"angle", angle_to_json(T.vertices[i].angle)},
                            {"label", label_to_json(T.vertices[i].label)}});
  for (std::size_t i = 0; i < T.edges.size(); ++i)
    edges.push_back(json{{"id", i},
                         {"from", T.edges[i].a},
                         {"to", T.edges[i].b},
                         {"pair", pair_to_json(T.edges[i].q)}});
  return json{{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

inline DecoratedGraph graph_from_json(const json& j) {
  DecoratedGraph T;
  T.vertices.resize(j.at("vertices").size());
  for (const json& v : j.at("vertices")) {
    TreeVertex& V = T.vertices.at(v.at("id").get<std::size_t>());
    V.angle = angle_from_json(v.at("angle"));
    V.label = label_from_json(v.at("label"));
  }
  T.edges.resize(j.at("edges").size());
  for (const json& e : j.at("edges")) {
    TreeEdge& E = T.edges.at(e.at("id").get<std::size_t>());
    E.a = e.at("from").get<int>();
    E.b = e.at("to").get<int>();
    E.q = pair_from_json(e.at("pair"));
  }
  return T;
}

// --- orbit points and group elements ---------------------------------------

inline json point_to_json(const OrbitPoint& x) {
  json tau = json::object(), r = json::object();
  for (const auto& [o, t] : x.tau) tau[std::to_string(o)] = rat_to_string(t);
  for (const auto& [o, block] : x.r) {
    json arr = json::array();
    for (const Rat& v : block) arr.push_back(rat_to_string(v));
    r[std::to_string(o)] = std::move(arr);
  }
  return json{{"tau_minus", rat_to_string(x.tau_minus)}, {"tau", std::move(tau)},
              {"r", std::move(r)}};
}

inline OrbitPoint point_from_json(const json& j) {
  OrbitPoint x;
  x.tau_minus = rat_from_string(j.at("tau_minus").get<std::string>());
  for (auto it = j.at("tau").begin(); it != j.at("tau").end(); ++it)
    x.tau[std::stoi(it.key())] = rat_from_string(it.value().get<std::string>());
  for (auto it = j.at("r").begin(); it != j.at("r").end(); ++it) {
    std::vector<Rat> block;
    for (const json& v : it.value()) block.push_back(rat_from_string(v.get<std::string>()));
    x.r[std::stoi(it.key())] = std::move(block);
  }
  return x;
}

// Group elements: {"kind":"lattice","n":[a,b]}, {"kind":"vertex_shift","o":..,"k":..},
// or {"kind":"aut","generator": index into aut_group(T).generators}.
inline GroupElement element_from_json(const json& j, const DecoratedGraph& T) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "lattice") return Lattice{pair_from_json(j.at("n"))};
  if (kind == "vertex_shift")
    return VertexShift{j.at("o").get<int>(), int_from_json(j.at("k"))};
  if (kind == "aut") {
    AutGroup G = aut_group(T);
    std::size_t idx = j.at("generator").get<std::size_t>();
    if (idx >= G.generators.size())
      throw std::invalid_argument("json: aut generator index out of range");
    return AutElt{G.generators[idx]};
  }
  throw std::invalid_argument("json: unknown group element kind \"" + kind + "\"");
}

// --- reports, census, poset -------------------------------------------------

inline json report_to_json(const Report& rep) {
  json v = json::array();
  for (const Violation& x : rep.violations) {
    json e{{"constraint", x.constraint}, {"detail", x.detail}};
    if (x.tuple_index) e["tuple_index"] = *x.tuple_index;
    v.push_back(std::move(e));
  }
  return json{{"ok", rep.ok()}, {"violations", std::move(v)}};
}

inline json iso_to_json(const Isomorphism& iso) {
  json gamma = json::object();
  for (const auto& [v, gi] : iso.gamma)
    gamma[std::to_string(v)] = json{{"arc", gi.arc}, {"vertex", gi.vertex}};
  return json{{"vertex", iso.vertex}, {"edge", iso.edge}, {"gamma", std::move(gamma)}};
}

inline json entry_to_json(const CensusEntry& e) {
  json out{{"signature", e.signature},
           {"dim", e.stratum.dim},
           {"class", to_string(e.cls)},
           {"aut_order", int_to_json(e.aut_order)},
           {"nonempty", e.nonempty},
           {"boundary", e.boundary},
           {"cylinder", e.cylinder},
           {"data", data_to_json(e.data)}};
  if (e.rep) out["rep"] = graph_to_json(*e.rep);
  return out;
}

inline json census_to_json(const std::vector<CensusEntry>& entries) {
  json out = json::array();
  for (const CensusEntry& e : entries) out.push_back(entry_to_json(e));
  return out;
}

inline json poset_to_json(const StratumPoset& P) {
  json edges = json::array();
  for (const StratumPoset::Edge& e : P.edges) {
    json x{{"upper", e.upper}, {"lower", e.lower}, {"type", to_string(e.type)}};
    if (!e.picture.empty()) x["picture"] = e.picture;
    edges.push_back(std::move(x));
  }
  return json{{"entries", census_to_json(P.entries)}, {"edges", std::move(edges)}};
}

// --- DOT export -------------------------------------------------------------

namespace detail {
inline std::string fmt_float(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}
}  // namespace detail

inline std::string render_dot(const DecoratedGraph& T) {
  std::string out = "digraph tree {\n  rankdir=BT;\n";
  for (std::size_t v = 0; v < T.vertices.size(); ++v) {
    const TreeVertex& V = T.vertices[v];
    std::string label = "v" + std::to_string(v) + "\\ntheta~" +
                        detail::fmt_float(angle_float(V.angle));
    label += "\\n" + kind_to_string(V.label.kind);
    for (const FourTuple& t : V.label.tuples) label += "\\n" + to_string(t);
    out += "  v" + std::to_string(v) + " [label=\"" + label + "\"];\n";
  }
  for (std::size_t e = 0; e < T.edges.size(); ++e) {
    int a = T.edges[e].a, b = T.edges[e].b;
    if (angle_lt(T.vertices[b].angle, T.vertices[a].angle)) std::swap(a, b);
    out += "  v" + std::to_string(a) + " -> v" + std::to_string(b) + " [label=\"" +
           to_string(T.edges[e].q) + "\"];\n";
  }
  out += "}\n";
  return out;
}

inline std::string render_dot(const StratumPoset& P) {
  std::string out = "digraph poset {\n";
  for (std::size_t i = 0; i < P.entries.size(); ++i) {
    const CensusEntry& e = P.entries[i];
    std::string label = "dim=" + std::to_string(e.stratum.dim) + "\\n" + to_string(e.cls);
    if (e.boundary) label += "\\nboundary";
    out += "  s" + std::to_string(i) + " [label=\"" + label + "\"];\n";
  }
  for (const StratumPoset::Edge& e : P.edges) {
    out += "  s" + std::to_string(e.upper) + " -> s" + std::to_string(e.lower) + " [label=\"" +
           to_string(e.type) + (e.picture.empty() ? "" : " " + e.picture) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace strata::jsonio
