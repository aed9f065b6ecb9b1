// strata-lab: command-line front end for the library.
//
// Exit codes: 0 on success, 2 when a validation check fails (the violations
// are printed), 1 on malformed input (unreadable file, schema mismatch,
// unknown command).  With --format json the primary output on stdout is a
// single JSON document; diagnostics go to stderr.

#include <strata/json_io.hpp>
#include <strata/log.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using strata::jsonio::json;

std::string g_format = "text";
std::string g_data_file, g_graph_file, g_second_file, g_point_file, g_element_file;
bool g_linear = false, g_include_boundary = false;
int g_bounds = 256, g_depth = 3, g_vertex = -1, g_arc = -1;
long g_seed = 0;
long long g_p = 0, g_pp = 0;
int g_exit = 0;

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  json j;
  in >> j;
  return j;
}

bool looks_like_graph(const json& j) { return j.is_object() && j.contains("vertices"); }

void print_report(const strata::Report& rep) {
  if (g_format == "json") {
    std::cout << strata::jsonio::report_to_json(rep).dump(2) << "\n";
    return;
  }
  if (rep.ok()) {
    std::cout << "OK\n";
    return;
  }
  for (const strata::Violation& v : rep.violations) {
    std::cout << v.constraint << ": " << v.detail;
    if (v.tuple_index) std::cout << " (tuple " << *v.tuple_index << ")";
    std::cout << "\n";
  }
}

// Validates and prints violations on failure; returns false (and sets exit
// code 2) when the check fails.
bool require_valid_data(const strata::AsymptoticData& A) {
  strata::Report rep = strata::validate_data(A);
  if (rep.ok()) return true;
  print_report(rep);
  g_exit = 2;
  return false;
}

bool require_valid_graph(const strata::DecoratedGraph& T) {
  strata::Report rep = strata::validate_graph(T);
  if (rep.ok()) return true;
  print_report(rep);
  g_exit = 2;
  return false;
}

std::string half_plane_word(strata::HalfPlane h) {
  switch (h) {
    case strata::HalfPlane::BelowEquator: return "below";
    case strata::HalfPlane::Equator: return "equator";
    default: return "above";
  }
}

void print_graph(const strata::DecoratedGraph& T) {
  if (g_format == "json") {
    std::cout << strata::jsonio::graph_to_json(T).dump(2) << "\n";
  } else if (g_format == "dot") {
    std::cout << strata::jsonio::render_dot(T);
  } else {
    for (std::size_t v = 0; v < T.vertices.size(); ++v) {
      const strata::TreeVertex& V = T.vertices[v];
      std::cout << "v" << v << ": theta ~ " << fmt4(strata::angle_float(V.angle)) << " ("
                << strata::to_string(V.angle) << "), " << strata::jsonio::kind_to_string(V.label.kind);
      for (const strata::FourTuple& t : V.label.tuples) std::cout << " " << strata::to_string(t);
      if (!V.label.gamma.vertices.empty())
        std::cout << " [Gamma: " << V.label.gamma.vertices.size() << " vertices, "
                  << V.label.gamma.arcs.size() << " arcs]";
      std::cout << "\n";
    }
    for (std::size_t e = 0; e < T.edges.size(); ++e)
      std::cout << "e" << e << ": v" << T.edges[e].a << " -- v" << T.edges[e].b << ", q = "
                << strata::to_string(T.edges[e].q) << "\n";
  }
}

void cmd_validate() {
  json j = load_json(g_data_file);
  strata::Report rep = looks_like_graph(j)
                           ? strata::validate_graph(strata::jsonio::graph_from_json(j))
                           : strata::validate_data(strata::jsonio::data_from_json(j));
  print_report(rep);
  if (!rep.ok()) g_exit = 2;
}

void cmd_angle() {
  strata::IntPair P{strata::Int(static_cast<long>(g_p)), strata::Int(static_cast<long>(g_pp))};
  if (P.is_zero() || !strata::defines_angle(P)) {
    if (g_format == "json")
      std::cout << json{{"defines_angle", false}}.dump(2) << "\n";
    else
      std::cout << "pair " << strata::to_string(P) << " defines no angle\n";
    g_exit = 2;
    return;
  }
  strata::AngleSpec a = strata::AngleSpec::interior(P);
  double th = strata::angle_float(a);
  std::string hp = half_plane_word(strata::half_plane(P));
  if (g_format == "json")
    std::cout << json{{"defines_angle", true},
                      {"pair", strata::jsonio::pair_to_json(P)},
                      {"theta", th},
                      {"half_plane", hp}}
                     .dump(2)
              << "\n";
  else
    std::cout << "theta ~ " << fmt4(th) << ", half-plane: " << hp << "\n";
}

void cmd_dim() {
  json j = load_json(g_data_file);
  if (looks_like_graph(j)) {
    strata::DecoratedGraph T = strata::jsonio::graph_from_json(j);
    if (!require_valid_graph(T)) return;
    strata::StratumData S = strata::stratum_data(T);
    long dm = strata::moduli_dimension(strata::asymptotic_of(T));
    if (g_format == "json")
      std::cout << json{{"dim_stratum", S.dim}, {"dim_moduli", dm}}.dump(2) << "\n";
    else
      std::cout << "dim(S) = " << S.dim << "\n" << "dim(M) = " << dm << "\n";
  } else {
    strata::AsymptoticData A = strata::jsonio::data_from_json(j);
    if (!require_valid_data(A)) return;
    long dm = strata::moduli_dimension(A);
    if (g_format == "json")
      std::cout << json{{"dim_moduli", dm}}.dump(2) << "\n";
    else
      std::cout << "dim(M) = " << dm << "\n";
  }
}

void cmd_linear_graph() {
  strata::AsymptoticData A = strata::jsonio::data_from_json(load_json(g_data_file));
  if (!require_valid_data(A)) return;
  strata::LinearGraphResult R = strata::linear_graph(A);
  if (auto* err = std::get_if<strata::LinearGraphError>(&R)) {
    std::cout << "linear graph construction failed: " << err->reason << "\n";
    g_exit = 2;
    return;
  }
  if (auto* cyl = std::get_if<strata::CylinderCase>(&R)) {
    if (g_format == "json")
      std::cout << json{{"cylinder", true}, {"angle", strata::jsonio::angle_to_json(cyl->angle)}}.dump(2)
                << "\n";
    else
      std::cout << "CYLINDER at theta ~ " << fmt4(strata::angle_float(cyl->angle)) << "\n";
    return;
  }
  print_graph(std::get<strata::DecoratedGraph>(R));
}

void cmd_check_exists() {
  json j = load_json(g_data_file);
  if (looks_like_graph(j)) {
    strata::DecoratedGraph T = strata::jsonio::graph_from_json(j);
    if (!require_valid_graph(T)) return;
    strata::ExistsResult ex = strata::check_exists(T);
    if (g_format == "json") {
      json out{{"nonempty", ex.nonempty}};
      if (!ex.nonempty) {
        out["edge"] = ex.edge;
        out["reason"] = ex.reason;
        if (ex.witness) out["witness"] = strata::jsonio::angle_to_json(*ex.witness);
      }
      std::cout << out.dump(2) << "\n";
    } else if (ex.nonempty) {
      std::cout << "NONEMPTY\n";
    } else {
      std::cout << "EMPTY\n" << "edge e" << ex.edge << ": " << ex.reason;
      if (ex.witness)
        std::cout << " (witness theta ~ " << fmt4(strata::angle_float(*ex.witness)) << ")";
      std::cout << "\n";
    }
    return;
  }
  strata::AsymptoticData A = strata::jsonio::data_from_json(j);
  if (!require_valid_data(A)) return;
  strata::LinearExistsResult R = strata::check_linear_exists(A);
  if (g_format == "json") {
    json out{{"nonempty", R.nonempty}, {"cylinder", R.cylinder}, {"edge_report", R.edge_report},
             {"alerts", R.alerts}};
    if (!R.nonempty) {
      out["edge"] = R.edge;
      if (R.witness) out["witness"] = strata::jsonio::angle_to_json(*R.witness);
    }
    std::cout << out.dump(2) << "\n";
    return;
  }
  std::cout << (R.nonempty ? "NONEMPTY" : "EMPTY") << (R.cylinder ? " (cylinder)" : "") << "\n";
  for (const std::string& line : R.edge_report) std::cout << line << "\n";
  if (!R.nonempty && R.witness)
    std::cout << "witness theta ~ " << fmt4(strata::angle_float(*R.witness)) << "\n";
  for (const std::string& a : R.alerts) std::cerr << "alert: " << a << "\n";
}

void cmd_aut() {
  strata::DecoratedGraph T = strata::jsonio::graph_from_json(load_json(g_graph_file));
  if (!require_valid_graph(T)) return;
  strata::AutGroup G = strata::aut_group(T);
  if (g_format == "json") {
    json gens = json::array();
    for (const strata::Isomorphism& g : G.generators) gens.push_back(strata::jsonio::iso_to_json(g));
    json n = json::object();
    for (const auto& [v, k] : G.n) n[std::to_string(v)] = k;
    std::cout << json{{"order", strata::jsonio::int_to_json(G.order)},
                      {"diamond", G.diamond},
                      {"n", std::move(n)},
                      {"fixed", G.fixed},
                      {"generators", std::move(gens)}}
                     .dump(2)
              << "\n";
    return;
  }
  std::cout << "|Aut| = " << strata::to_string(G.order) << "\n";
  std::cout << "diamond = v" << G.diamond << "\n";
  std::cout << "fixed = [";
  for (std::size_t i = 0; i < G.fixed.size(); ++i) std::cout << (i ? ", " : "") << "v" << G.fixed[i];
  std::cout << "]\n";
  for (const auto& [v, k] : G.n) std::cout << "cyclic order at v" << v << ": " << k << "\n";
}

void cmd_iso() {
  strata::DecoratedGraph T1 = strata::jsonio::graph_from_json(load_json(g_graph_file));
  strata::DecoratedGraph T2 = strata::jsonio::graph_from_json(load_json(g_second_file));
  if (!require_valid_graph(T1) || !require_valid_graph(T2)) return;
  auto iso = strata::are_isomorphic(T1, T2);
  if (g_format == "json") {
    json out{{"isomorphic", iso.has_value()}};
    if (iso) out["iso"] = strata::jsonio::iso_to_json(*iso);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << (iso ? "ISOMORPHIC" : "NOT ISOMORPHIC") << "\n";
  }
}

void cmd_stabilizer() {
  strata::DecoratedGraph T = strata::jsonio::graph_from_json(load_json(g_graph_file));
  if (!require_valid_graph(T)) return;
  strata::OrbitPoint x = strata::jsonio::point_from_json(load_json(g_point_file));
  strata::Report rep = strata::validate_point(T, x);
  if (!rep.ok()) {
    print_report(rep);
    g_exit = 2;
    return;
  }
  strata::Stabilizer S = strata::stabilizer(T, x);
  if (g_format == "json") {
    json rot = json::object();
    for (const auto& [v, s] : S.rotation) rot[std::to_string(v)] = s;
    std::cout << json{{"order", strata::jsonio::int_to_json(S.order)}, {"rotation", std::move(rot)}}.dump(2)
              << "\n";
    return;
  }
  std::cout << "|Stab| = " << strata::to_string(S.order) << "\n";
  for (const auto& [v, s] : S.rotation)
    std::cout << "rotation at v" << v << ": " << s << " arc steps\n";
}

void cmd_orbit_act() {
  strata::DecoratedGraph T = strata::jsonio::graph_from_json(load_json(g_graph_file));
  if (!require_valid_graph(T)) return;
  strata::OrbitPoint x = strata::jsonio::point_from_json(load_json(g_point_file));
  strata::Report rep = strata::validate_point(T, x);
  if (!rep.ok()) {
    print_report(rep);
    g_exit = 2;
    return;
  }
  strata::GroupElement g = strata::jsonio::element_from_json(load_json(g_element_file), T);
  strata::OrbitPoint y = strata::act(T, g, x);
  if (g_format == "json") {
    std::cout << strata::jsonio::point_to_json(y).dump(2) << "\n";
    return;
  }
  std::cout << "tau_minus = " << strata::to_string(y.tau_minus) << "\n";
  for (const auto& [o, t] : y.tau) std::cout << "tau[v" << o << "] = " << strata::to_string(t) << "\n";
  for (const auto& [o, block] : y.r) {
    std::cout << "r[v" << o << "] = [";
    for (std::size_t i = 0; i < block.size(); ++i)
      std::cout << (i ? ", " : "") << strata::to_string(block[i]);
    std::cout << "]\n";
  }
}

void cmd_orbit_equal() {
  strata::DecoratedGraph T = strata::jsonio::graph_from_json(load_json(g_graph_file));
  if (!require_valid_graph(T)) return;
  strata::OrbitPoint x = strata::jsonio::point_from_json(load_json(g_point_file));
  strata::OrbitPoint y = strata::jsonio::point_from_json(load_json(g_second_file));
  for (const strata::OrbitPoint* p : {&x, &y}) {
    strata::Report rep = strata::validate_point(T, *p);
    if (!rep.ok()) {
      print_report(rep);
      g_exit = 2;
      return;
    }
  }
  bool eq = strata::orbits_equal(T, x, y);
  if (g_format == "json")
    std::cout << json{{"equal", eq}}.dump(2) << "\n";
  else
    std::cout << (eq ? "EQUAL" : "DIFFERENT") << "\n";
}

strata::CensusBounds census_bounds() {
  strata::CensusBounds b;
  b.max_entries = g_bounds;
  b.closure_depth = g_depth;
  b.with_boundary = g_include_boundary;
  return b;
}

void print_census_text(const std::vector<strata::CensusEntry>& entries) {
  for (const strata::CensusEntry& e : entries) {
    std::cout << "dim=" << e.stratum.dim << " class=" << strata::to_string(e.cls)
              << " aut=" << strata::to_string(e.aut_order)
              << (e.nonempty ? " nonempty" : " empty") << (e.boundary ? " boundary" : "")
              << (e.cylinder ? " cylinder" : "") << " sig=" << e.signature << "\n";
  }
  std::cout << entries.size() << " strata\n";
}

void cmd_census() {
  strata::AsymptoticData A = strata::jsonio::data_from_json(load_json(g_data_file));
  if (!require_valid_data(A)) return;
  std::vector<strata::CensusEntry> entries = strata::census(A, census_bounds());
  if (g_format == "json")
    std::cout << strata::jsonio::census_to_json(entries).dump(2) << "\n";
  else if (g_format == "dot")
    std::cout << strata::jsonio::render_dot(strata::adjacency(entries, g_include_boundary));
  else
    print_census_text(entries);
}

void cmd_adjacency() {
  strata::AsymptoticData A = strata::jsonio::data_from_json(load_json(g_data_file));
  if (!require_valid_data(A)) return;
  strata::StratumPoset P =
      strata::adjacency(strata::census(A, census_bounds()), g_include_boundary);
  if (g_format == "json") {
    std::cout << strata::jsonio::poset_to_json(P).dump(2) << "\n";
  } else if (g_format == "dot") {
    std::cout << strata::jsonio::render_dot(P);
  } else {
    std::cout << P.entries.size() << " strata, " << P.edges.size() << " adjacencies\n";
    for (const strata::StratumPoset::Edge& e : P.edges) {
      std::cout << "s" << e.upper << " (dim " << P.entries[e.upper].stratum.dim << ") -> s"
                << e.lower << " (dim " << P.entries[e.lower].stratum.dim
                << ") type=" << strata::to_string(e.type);
      if (!e.picture.empty()) std::cout << " picture=" << e.picture;
      std::cout << "\n";
    }
  }
}

void cmd_collapse() {
  strata::DecoratedGraph T = strata::jsonio::graph_from_json(load_json(g_graph_file));
  if (!require_valid_graph(T)) return;
  strata::CollapseOutcome out = strata::collapse_arc(T, g_vertex, g_arc);
  if (auto* rej = std::get_if<strata::CollapseRejected>(&out)) {
    if (g_format == "json")
      std::cout << json{{"outcome", "rejected"}, {"reason", rej->reason}}.dump(2) << "\n";
    else
      std::cout << "REJECTED: " << rej->reason << "\n";
    g_exit = 2;
    return;
  }
  if (auto* in = std::get_if<strata::CollapseInternal>(&out)) {
    if (g_format == "text") std::cout << "INTERNAL (same stratum)\n";
    if (g_format == "json") {
      std::cout << json{{"outcome", "internal"}, {"graph", strata::jsonio::graph_to_json(in->graph)}}.dump(2)
                << "\n";
    } else {
      print_graph(in->graph);
    }
    return;
  }
  if (auto* sm = std::get_if<strata::CollapseSameMerge>(&out)) {
    if (g_format == "text")
      std::cout << "BOUNDARY: ends merge, combined pair " << strata::to_string(sm->merged.pair)
                << "\n";
    if (g_format == "json") {
      std::cout << json{{"outcome", "merge"},
                        {"merged", strata::jsonio::tuple_to_json(sm->merged)},
                        {"data", strata::jsonio::data_to_json(sm->data)},
                        {"graph", strata::jsonio::graph_to_json(sm->graph)}}
                       .dump(2)
                << "\n";
    } else {
      print_graph(sm->graph);
    }
    return;
  }
  auto& cc = std::get<strata::CollapseCancel>(out);
  if (g_format == "text")
    std::cout << "BOUNDARY: ends cancel (" << cc.subcase << ", k = " << cc.k << ")\n";
  if (g_format == "json") {
    std::cout << json{{"outcome", "cancel"},
                      {"subcase", cc.subcase},
                      {"k", cc.k},
                      {"data", strata::jsonio::data_to_json(cc.data)},
                      {"graph", strata::jsonio::graph_to_json(cc.graph)}}
                     .dump(2)
              << "\n";
  } else {
    print_graph(cc.graph);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strata-lab: combinatorial classification of punctured-sphere strata"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", g_format, "output format")
      ->check(CLI::IsMember({"text", "json", "dot"}));
  app.add_option("--seed", g_seed, "seed for randomized subcommands");

  auto* validate = app.add_subcommand("validate", "check a data or graph file");
  validate->add_option("file", g_data_file)->required();

  auto* angle = app.add_subcommand("angle", "angle and hemisphere of an integer pair");
  angle->add_option("p", g_p)->required();
  angle->add_option("pp", g_pp)->required();

  auto* dim = app.add_subcommand("dim", "moduli (and stratum) dimension");
  dim->add_option("file", g_data_file)->required();

  auto* lg = app.add_subcommand("linear-graph", "build the linear graph of a data set");
  lg->add_option("file", g_data_file)->required();

  auto* ce = app.add_subcommand("check-exists", "decide non-emptiness");
  ce->add_option("file", g_data_file)->required();
  ce->add_flag("--linear", g_linear, "use the linear-graph criterion (data files)");

  auto* aut = app.add_subcommand("aut", "automorphism group of a graph");
  aut->add_option("graph", g_graph_file)->required();

  auto* iso = app.add_subcommand("iso", "test two graphs for isomorphism");
  iso->add_option("graph1", g_graph_file)->required();
  iso->add_option("graph2", g_second_file)->required();

  auto* stab = app.add_subcommand("stabilizer", "stabilizer of an orbit point");
  stab->add_option("graph", g_graph_file)->required();
  stab->add_option("point", g_point_file)->required();

  auto* oact = app.add_subcommand("orbit-act", "apply a group element to a point");
  oact->add_option("graph", g_graph_file)->required();
  oact->add_option("point", g_point_file)->required();
  oact->add_option("element", g_element_file)->required();

  auto* oeq = app.add_subcommand("orbit-equal", "test two points for orbit equality");
  oeq->add_option("graph", g_graph_file)->required();
  oeq->add_option("point1", g_point_file)->required();
  oeq->add_option("point2", g_second_file)->required();

  auto* census = app.add_subcommand("census", "enumerate strata for a data set");
  census->add_option("file", g_data_file)->required();
  census->add_option("--bounds", g_bounds, "maximum number of census entries");
  census->add_option("--depth", g_depth, "degeneration closure depth");
  census->add_flag("--include-boundary", g_include_boundary, "include boundary strata");

  auto* collapse = app.add_subcommand("collapse", "collapse one arc of a level-set graph");
  collapse->add_option("graph", g_graph_file)->required();
  collapse->add_option("--vertex", g_vertex, "multivalent tree vertex")->required();
  collapse->add_option("--arc", g_arc, "arc id inside its level-set graph")->required();

  auto* adj = app.add_subcommand("adjacency", "stratum adjacency poset for a data set");
  adj->add_option("file", g_data_file)->required();
  adj->add_option("--bounds", g_bounds, "maximum number of census entries");
  adj->add_option("--depth", g_depth, "degeneration closure depth");
  adj->add_flag("--include-boundary", g_include_boundary, "include boundary strata");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (validate->parsed()) cmd_validate();
    else if (angle->parsed()) cmd_angle();
    else if (dim->parsed()) cmd_dim();
    else if (lg->parsed()) cmd_linear_graph();
    else if (ce->parsed()) cmd_check_exists();
    else if (aut->parsed()) cmd_aut();
    else if (iso->parsed()) cmd_iso();
    else if (stab->parsed()) cmd_stabilizer();
    else if (oact->parsed()) cmd_orbit_act();
    else if (oeq->parsed()) cmd_orbit_equal();
    else if (census->parsed()) cmd_census();
    else if (collapse->parsed()) cmd_collapse();
    else if (adj->parsed()) cmd_adjacency();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return g_exit;
}
