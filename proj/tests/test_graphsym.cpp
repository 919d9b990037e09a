#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "polysym/error.hpp"
#include "polysym/graph_polytope.hpp"
#include "polysym/graphsym.hpp"
#include "fixtures.hpp"

using namespace polysym;
using namespace polysym::graph;
using namespace polysym::fixtures;

namespace {

SymGraph random_connected(std::mt19937_64& rng, std::size_t n, double density) {
  std::bernoulli_distribution coin(density);
  while (true) {
    std::vector<Edge> e;
    for (Point u = 0; u < n; ++u) {
      for (Point v = u + 1; v < n; ++v) {
        if (coin(rng)) e.emplace_back(u, v);
      }
    }
    auto g = SymGraph::from_edges(n, e);
    if (is_connected(g)) return g;
  }
}

perm::Perm random_perm(std::mt19937_64& rng, std::size_t n) {
  std::vector<Point> p(n);
  std::iota(p.begin(), p.end(), Point{0});
  std::shuffle(p.begin(), p.end(), rng);
  return perm::Perm(p);
}

}  // namespace

TEST_CASE("graph construction and IO") {
  auto g = generalized_petersen(5, 2);
  CHECK(g.order() == 10);
  CHECK(g.edge_count() == 15);
  CHECK(g.regular_degree() == 3u);
  std::stringstream ss;
  g.write(ss);
  CHECK(SymGraph::read(ss) == g);
  CHECK_THROWS_AS(SymGraph::from_edges(3, {{0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(SymGraph::from_edges(3, {{0, 1}, {1, 0}}), InvalidArgument);
  std::stringstream bad("3 1\n0 7\n");
  CHECK_THROWS_AS(SymGraph::read(bad), ParseError);
  std::stringstream truncated("3 2\n0 1\n");
  CHECK_THROWS_AS(SymGraph::read(truncated), ParseError);
}

TEST_CASE("girth, bipartiteness, connectivity") {
  CHECK(girth(complete_bipartite(3, 3)) == 4u);
  CHECK(is_bipartite(complete_bipartite(3, 3)));
  CHECK(girth(generalized_petersen(5, 2)) == 5u);
  CHECK_FALSE(is_bipartite(generalized_petersen(5, 2)));
  CHECK(girth(heawood()) == 6u);
  CHECK(girth(tutte_cage()) == 8u);
  CHECK(girth(cycle_graph(7)) == 7u);
  CHECK_FALSE(is_bipartite(cycle_graph(7)));
  CHECK_FALSE(girth(SymGraph::from_edges(4, {{0, 1}, {1, 2}, {1, 3}})).has_value());
  CHECK_FALSE(is_connected(SymGraph::from_edges(4, {{0, 1}, {2, 3}})));
}

TEST_CASE("s-arc counts") {
  auto k4 = complete_graph(4);
  CHECK(count_s_arcs(k4, 0) == 4);
  CHECK(count_s_arcs(k4, 1) == 12);
  CHECK(count_s_arcs(k4, 2) == 24);
  std::mt19937_64 rng(5);
  std::vector<SymGraph> graphs = {generalized_petersen(5, 2), heawood(), complete_bipartite(2, 4), cycle_graph(5)};
  for (int i = 0; i < 5; ++i) graphs.push_back(random_connected(rng, 7, 0.4));
  for (const auto& g : graphs) {
    for (std::size_t s = 0; s <= 6; ++s) {
      CHECK(count_s_arcs(g, s) == dfs_arcs(g, s));
      std::size_t visited = 0;
      for_each_s_arc(g, s, [&](std::span<const Point> a) {
        ++visited;
        return a.size() == s + 1;
      });
      CHECK(visited == dfs_arcs(g, s));
      if (s >= 1) {
        CHECK(count_s_arcs(g, s + 1) <= count_s_arcs(g, s) * (g.max_degree() - 1));
      }
    }
  }
  // Regular graph of girth > s + 1: equality in the growth bound.
  auto t = tutte_cage();
  for (std::size_t s = 1; s + 1 < 8; ++s) CHECK(count_s_arcs(t, s + 1) == count_s_arcs(t, s) * 2);
}

TEST_CASE("automorphism groups against brute force") {
  std::mt19937_64 rng(11);
  std::vector<SymGraph> graphs = {complete_graph(4), complete_bipartite(3, 3), cycle_graph(6), generalized_petersen(4, 1),
                                  complete_bipartite(2, 5), SymGraph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}})};
  for (int i = 0; i < 12; ++i) graphs.push_back(random_connected(rng, 5 + static_cast<std::size_t>(i % 4), 0.45));
  for (const auto& g : graphs) {
    auto res = automorphism_group(g);
    REQUIRE(res.complete);
    CHECK(res.group.order() == brute_force_aut(g));
    for (const auto& x : res.generators) CHECK(is_automorphism(g, x));
  }
  CHECK_THROWS_AS(automorphism_group(SymGraph::from_edges(4, {{0, 1}, {2, 3}})), InvalidArgument);
}

TEST_CASE("well-known automorphism groups and arc transitivity") {
  struct Case {
    SymGraph g;
    long long order;
    int s;
    DmClass dm;
  };
  std::vector<Case> cases = {
      {complete_graph(4), 24, 2, {2, 1}},
      {complete_bipartite(3, 3), 72, 3, {3, 0}},
      {generalized_petersen(4, 1), 48, 2, {2, 1}},      // cube
      {generalized_petersen(5, 2), 120, 3, {3, 0}},     // Petersen
      {generalized_petersen(8, 3), 96, 2, {2, 1}},      // Moebius-Kantor
      {generalized_petersen(10, 2), 120, 2, {2, 1}},    // dodecahedron
      {generalized_petersen(10, 3), 240, 3, {3, 0}},    // Desargues
      {heawood(), 336, 4, {4, 1}},
      {pappus(), 216, 3, {3, 0}},
      {tutte_cage(), 1440, 5, {5, 0}},
  };
  for (const auto& c : cases) {
    auto rep = analyze_graph(c.g);
    CHECK(rep.aut_order == c.order);
    CHECK(rep.s_transitive == c.s);
    CHECK(rep.s_regular == c.s);
    REQUIRE(rep.dm_class);
    CHECK_MESSAGE(*rep.dm_class == c.dm, c.g.order() << " vertices: got " << to_string(*rep.dm_class));
    // |Aut| = n * 3 * 2^(s-1)
    CHECK(rep.aut_order == BigInt(c.g.order()) * 3 * (BigInt(1) << (c.s - 1)));
    CHECK_FALSE(rep.lower_bound);
  }
  CHECK(to_string(DmClass{2, 2}) == "2^2");
  CHECK(to_string(DmClass{3, 0}) == "3");
}

TEST_CASE("arc-reversing involution agrees with brute force on K4 and the cube") {
  for (const auto& g : {complete_graph(4), generalized_petersen(4, 1)}) {
    Point u = 0, v = g.neighbors(0).front();
    std::vector<Point> p(g.order());
    std::iota(p.begin(), p.end(), Point{0});
    bool found = false;
    do {
      perm::Perm x(p);
      if (x[u] == v && x[v] == u && (x * x).is_identity() && is_automorphism(g, x)) found = true;
    } while (std::next_permutation(p.begin(), p.end()));
    auto c = dm_class(g, automorphism_group(g).group);
    CHECK(c.superscript == (found ? 1 : 2));
  }
}

TEST_CASE("cycles use the long cap") {
  auto c6 = cycle_graph(6);
  auto rep = analyze_graph(c6);
  CHECK(rep.aut_order == 12);
  CHECK(rep.s_transitive == 6);
  CHECK(rep.s_regular == 6);
  CHECK_FALSE(rep.dm_class.has_value());
}

TEST_CASE("non vertex-transitive graphs") {
  auto path = SymGraph::from_edges(3, {{0, 1}, {1, 2}});
  auto rep = analyze_graph(path);
  CHECK(rep.s_transitive == -1);
  auto star = complete_bipartite(1, 3);
  CHECK(analyze_graph(star).s_transitive == -1);
  // Not preserving adjacency.
  auto g = generalized_petersen(5, 2);
  perm::Perm bad(std::vector<Point>{1, 0, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK_THROWS_AS(arc_transitivity(g, perm::PermGroup::build({bad})), InvalidArgument);
}

TEST_CASE("isomorphism") {
  std::mt19937_64 rng(3);
  std::vector<SymGraph> graphs = {generalized_petersen(10, 3), tutte_cage(), pappus(), random_connected(rng, 12, 0.3)};
  for (const auto& g : graphs) {
    auto p = random_perm(rng, g.order());
    auto h = g.relabel(p);
    auto w = isomorphic(g, h);
    REQUIRE(w);
    for (auto [a, b] : g.edges()) CHECK(h.adjacent((*w)[a], (*w)[b]));
    auto back = isomorphic(h, g);
    CHECK(back.has_value());
  }
  CHECK_FALSE(isomorphic(cycle_graph(6), complete_bipartite(3, 3)));
  CHECK_FALSE(isomorphic(generalized_petersen(5, 2), generalized_petersen(5, 1)));
  // Same degrees and order, different girth.
  CHECK_FALSE(isomorphic(generalized_petersen(8, 3), generalized_petersen(8, 1)));
  CHECK_FALSE(isomorphic(generalized_petersen(10, 3), generalized_petersen(10, 2)));
}

TEST_CASE("timeouts give a flagged lower bound") {
  SearchOptions quick;
  quick.timeout_seconds = -1;
  auto res = automorphism_group(complete_bipartite(8, 8), quick);
  CHECK_FALSE(res.complete);
  CHECK(res.group.order() <= BigInt(2) * 40320 * 40320);
  std::mt19937_64 rng(1);
  auto k88 = complete_bipartite(8, 8);
  CHECK_THROWS_AS(isomorphic(k88, k88.relabel(random_perm(rng, 16)), quick), LimitExceeded);
}

TEST_CASE("certificate lines") {
  auto g = generalized_petersen(10, 3);
  std::ostringstream os;
  write_certificate(os, g, analyze_graph(g));
  CHECK(os.str() ==
        "order=20\ngirth=6\nbipartite=yes\ns_transitive=3\ns_regular=3\ndm_class=3\naut_order=240\n");
}

TEST_CASE("polytopes from 3-arc-regular cubic graphs") {
  auto desargues = generalized_petersen(10, 3);
  std::optional<std::vector<Point>> first;
  for_each_s_arc(desargues, 3, [&](std::span<const Point> a) {
    first.emplace(a.begin(), a.end());
    return false;
  });
  std::array<Point, 4> arc{(*first)[0], (*first)[1], (*first)[2], (*first)[3]};
  auto gp = poly::polytope_from_3ar_cubic_graph(desargues, arc);
  CHECK(gp.system.group->order() == 120);
  CHECK(gp.system.schlafli == std::vector<long long>{3, 3, 3});
  CHECK((gp.delta * gp.delta).is_identity());
  CHECK(gp.delta[arc[0]] == arc[3]);
  for (std::size_t j = 0; j < 4; ++j) CHECK(gp.delta * gp.system.rho[j] * gp.delta == gp.system.rho[3 - j]);
  auto lat = poly::build_face_lattice(gp.system);
  CHECK(lat.f_vector() == std::vector<std::size_t>{5, 10, 10, 5});
  CHECK(poly::validate_polytope(lat).ok());

  // Recorded outcomes: K33 gives the {3,2,3} polytope, Petersen the 5-cell.
  struct Golden {
    SymGraph g;
    long long order;
    std::vector<long long> type;
  };
  for (const auto& c : {Golden{complete_bipartite(3, 3), 36, {3, 2, 3}}, Golden{generalized_petersen(5, 2), 120, {3, 3, 3}}}) {
    std::array<Point, 4> a{};
    for_each_s_arc(c.g, 3, [&](std::span<const Point> x) {
      std::copy(x.begin(), x.end(), a.begin());
      return false;
    });
    auto r = poly::polytope_from_3ar_cubic_graph(c.g, a);
    CHECK(r.system.group->order() == c.order);
    CHECK(r.system.schlafli == c.type);
    CHECK(poly::validate_polytope(poly::build_face_lattice(r.system)).ok());
  }

  // 2-arc-regular input is rejected.
  CHECK_THROWS_AS(poly::polytope_from_3ar_cubic_graph(generalized_petersen(8, 3), {0, 1, 2, 3}), InvalidArgument);
  // Not a 3-arc.
  CHECK_THROWS_AS(poly::polytope_from_3ar_cubic_graph(desargues, {0, 1, 0, 1}), InvalidArgument);
}
