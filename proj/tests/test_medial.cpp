#include <doctest.h>

#include <sstream>

#include "polysym/error.hpp"
#include "polysym/fpgroup.hpp"
#include "polysym/graphsym.hpp"
#include "polysym/medial.hpp"
#include "polysym/polytope.hpp"

using namespace polysym;
using namespace polysym::medial;

namespace {

poly::RotationSystem rotation(const std::string& text, std::vector<long long> schlafli) {
  return poly::build_rotation_system(fp::parse_presentation(text), std::move(schlafli));
}

struct Pipeline {
  poly::RotationSystem sys;
  poly::FaceLattice lat;
  MedialGraph medial;
  ExtendedRotationGroup ext;
  PolaritySet ps;
  CayleyGraph cayley;
  CoveringData cov;
};

Pipeline run(const std::string& text, std::vector<long long> schlafli) {
  Pipeline p;
  p.sys = rotation(text, std::move(schlafli));
  p.lat = poly::build_face_lattice(p.sys);
  p.medial = medial_layer_graph(p.lat);
  p.ext = build_extended_rotation_group(p.sys, poly::classify_self_duality(p.sys));
  p.ps = polarity_set(p.ext);
  p.cayley = cayley_graph(p.ext, p.ps);
  p.cov = covering_map(p.sys, p.lat, p.medial, p.ext, p.ps, p.cayley);
  return p;
}

}  // namespace

TEST_CASE("medial graph of the 5-cell") {
  auto p = run("gens s1 s2 s3\nrotation 3 3 3\n", {3, 3, 3});
  const auto& g = p.medial.graph;
  CHECK(g.order() == 20);
  CHECK(g.regular_degree() == 3u);
  CHECK(graph::is_bipartite(g));
  CHECK(graph::is_connected(g));
  auto rep = graph::analyze_graph(g);
  CHECK(rep.aut_order == 240);
  CHECK(rep.s_transitive == 3);
  REQUIRE(rep.dm_class);
  CHECK(graph::to_string(*rep.dm_class) == "3");
  std::ostringstream os;
  write_parts(os, p.medial);
  CHECK(os.str().rfind("0 part=1\n", 0) == 0);
  CHECK(os.str().find("19 part=2\n") != std::string::npos);
}

TEST_CASE("extended group, polarities and Cayley cover of the 5-cell") {
  auto p = run("gens s1 s2 s3\nrotation 3 3 3\n", {3, 3, 3});
  CHECK(p.ext.group->order() == 120);
  CHECK(p.ext.presentation_checked);
  CHECK(p.ps.deltas.size() == 3);
  CHECK(p.ps.group.order() == 120);
  for (const auto& d : p.ps.deltas) CHECK(p.ext.group->contains(d));

  const auto& c = p.cayley.graph;
  CHECK(c.order() == 120);
  CHECK(c.regular_degree() == 3u);
  CHECK(graph::is_connected(c));
  auto rep = graph::analyze_graph(c);
  CHECK(rep.aut_order == 720);
  CHECK(rep.s_regular == 2);

  CHECK(p.cov.multiplicity == 6);
  CHECK(p.cov.m_value == 6);

  auto t = cayley_two_arc_group(p.ext, p.cayley);
  CHECK(t.group.order() == 120 * 6);
  for (const auto& x : {t.h, t.p, t.a}) CHECK(graph::is_automorphism(c, x));
  CHECK_FALSE(graph::check_3ar_extension(t.group, t.h, t.p, t.a));
  // The medial graph is at least as arc-transitive as its cover.
  CHECK(graph::analyze_graph(p.medial.graph).s_transitive >= *rep.s_regular);
}

TEST_CASE("24-cell: Cayley graph and medial graph coincide") {
  auto p = run("gens s1 s2 s3\nrotation 3 4 3\n", {3, 4, 3});
  CHECK(p.ext.group->order() == 1152);
  CHECK(p.ps.group.order() == 192);
  CHECK(p.medial.graph.order() == 192);
  CHECK(p.cayley.graph.order() == 192);
  CHECK(p.cov.multiplicity == 1);
  auto iso = graph::isomorphic(p.cayley.graph, p.medial.graph);
  CHECK(iso.has_value());
  auto rep = graph::analyze_graph(p.cayley.graph);
  CHECK(rep.aut_order == 2304);
  CHECK(rep.s_regular == 3);
  auto t = cayley_two_arc_group(p.ext, p.cayley);
  CHECK(t.group.order() == 192 * 6);
  CHECK(graph::check_3ar_extension(t.group, t.h, t.p, t.a));
}

TEST_CASE("polarity identities") {
  for (auto [text, schlafli] : {std::pair{"gens s1 s2 s3\nrotation 3 3 3\n", std::vector<long long>{3, 3, 3}},
                                std::pair{"gens s1 s2 s3\nrotation 3 4 3\n", std::vector<long long>{3, 4, 3}}}) {
    auto sys = rotation(text, schlafli);
    auto ext = build_extended_rotation_group(sys, poly::classify_self_duality(sys));
    auto rep = verify_delta_identities(ext);
    CHECK(rep.all_hold());
    for (const auto& c : rep.checks) {
      if (c.name.rfind("d ", 0) == 0) continue;
      CHECK_MESSAGE(c.holds, c.name << " " << c.detail);
    }
    MESSAGE("reading of d: " << rep.d_reading());
    CHECK(rep.d_reading() != "neither");
  }
}

TEST_CASE("extended group needs a proper duality") {
  auto sys = rotation("gens s1 s2 s3\nrotation 4 3 3\n", {4, 3, 3});
  CHECK_THROWS_AS(build_extended_rotation_group(sys, poly::classify_self_duality(sys)), InvalidArgument);
}

namespace {

const char* kChiral363 =
    "gens s1 s2 s3\n"
    "rotation 3 6 3\n"
    "rel (s1^-1*s2^2)^4*s1*s2^-2\n"
    "rel (s2^2*s3^-1)^3*s2^2*s3*s2^-2*s3^-1\n"
    "rel (s2^-1*s3*s1*s2^-1*s3*s2*s1)^2\n";

const char* kChiral3183 =
    "gens s1 s2 s3\n"
    "rotation 3 18 3\n"
    "rel s2^5*s1*s2^-2*s1*s2^-1*s1*s2^-4*s1\n"
    "rel (s2^-1*s3*s1*s2^-1*s3^-1*s1*s2^-1*s1)^2\n"
    "rel s2^2*s1^-1*s3*s2*s1*s2^-1*s3*s2^2*s1^-1*s3*s2*s1^-1*s2*s1^-1\n";

// 2-arc-regular action of the extension by the duality, with no extension
// of (h, p, a) -> (h, p, a p).
void check_chiral_medial(const char* text, std::vector<long long> schlafli, std::size_t vertices) {
  auto sys = rotation(text, std::move(schlafli));
  auto lat = poly::build_face_lattice(sys);
  auto m = medial_layer_graph(lat);
  CHECK(m.graph.order() == vertices);
  CHECK(m.graph.regular_degree() == 3u);
  CHECK(graph::is_bipartite(m.graph));
  CHECK(graph::is_connected(m.graph));
  auto sd = poly::classify_self_duality(sys);
  REQUIRE(sd.kind == poly::SelfDuality::improperly_self_dual);
  CHECK_THROWS_AS(build_extended_rotation_group(sys, sd), InvalidArgument);
  auto d = poly::base_duality(sys, lat, *sd.witness);
  auto ext = medial_extended_group(sys, lat, m, d);
  CHECK(ext.order() == 2 * sys.order());
  CHECK(ext.order() == 6 * vertices);
  CHECK(ext.order() == graph::count_s_arcs(m.graph, 2));
  auto arc = std::vector<Point>{0, m.graph.neighbors(0)[0], 0};
  arc[2] = m.graph.neighbors(arc[1])[0] == 0 ? m.graph.neighbors(arc[1])[1] : m.graph.neighbors(arc[1])[0];
  CHECK(ext.pointwise_stabiliser_order(arc) == 1);
  auto t = graph::two_arc_triple(m.graph, ext);
  for (const auto& x : {t.h, t.p, t.a}) CHECK(graph::is_automorphism(m.graph, x));
  CHECK_FALSE(graph::check_3ar_extension(ext, t.h, t.p, t.a));
}

}  // namespace

TEST_CASE("medial graph of the chiral {3,6,3}") { check_chiral_medial(kChiral363, {3, 6, 3}, 6174); }

TEST_CASE("medial graph of the chiral {3,18,3}") { check_chiral_medial(kChiral3183, {3, 18, 3}, 13122); }

TEST_CASE("two-arc triple on the regular covers") {
  auto p = run("gens s1 s2 s3\nrotation 3 4 3\n", {3, 4, 3});
  auto t = cayley_two_arc_group(p.ext, p.cayley);
  auto tri = graph::two_arc_triple(p.cayley.graph, t.group);
  CHECK(graph::check_3ar_extension(t.group, tri.h, tri.p, tri.a));
  auto aut = graph::automorphism_group(p.medial.graph).group;
  CHECK_THROWS_AS(graph::two_arc_triple(p.medial.graph, aut), InvalidArgument);
}

TEST_CASE("medial graph needs even rank; fibres export") {
  auto tri = rotation("gens s1 s2\nrotation 3 3\n", {3, 3});
  CHECK_THROWS_AS(medial_layer_graph(poly::build_face_lattice(tri)), InvalidArgument);
  auto p = run("gens s1 s2 s3\nrotation 3 3 3\n", {3, 3, 3});
  std::ostringstream os;
  write_fibres(os, p.cov);
  std::size_t lines = 0;
  for (char ch : os.str()) lines += ch == '\n';
  CHECK(lines == 120);
  CHECK(os.str().rfind("0 fibre=", 0) == 0);
  CHECK(p.cov.m_value >= 1);
  CHECK(p.cov.m_value <= 2 * p.ext.p);
}
