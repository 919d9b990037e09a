#include "polysym/graph_polytope.hpp"

#include "polysym/error.hpp"

namespace polysym::poly {

using perm::Perm;
using perm::PermGroup;

namespace {

// The unique non-trivial automorphism fixing v and its neighbours.
Perm neighbourhood_fixer(const graph::SymGraph& g, const PermGroup& aut, Point v) {
  std::vector<Point> fixed{v};
  fixed.insert(fixed.end(), g.neighbors(v).begin(), g.neighbors(v).end());
  PermGroup stab = aut.pointwise_stabiliser(fixed);
  if (stab.order() != 2) {
    throw InvalidArgument("stabiliser of vertex " + std::to_string(v) + " and its neighbours has order " +
                          stab.order().str() + ", expected 2");
  }
  std::optional<Perm> out;
  stab.for_each_element([&](const Perm& x) {
    if (!x.is_identity()) out = x;
    return !out;
  });
  return *out;
}

}  // namespace

GraphPolytope polytope_from_3ar_cubic_graph(const graph::SymGraph& g, const std::array<Point, 4>& arc,
                                            const graph::SearchOptions& options) {
  if (g.regular_degree() != 3u || !graph::is_connected(g)) {
    throw InvalidArgument("construction needs a connected cubic graph");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (arc[i] >= g.order()) throw InvalidArgument("arc vertex out of range");
    if (i > 0 && !g.adjacent(arc[i - 1], arc[i])) throw InvalidArgument("not a 3-arc: missing edge");
    if (i > 1 && arc[i] == arc[i - 2]) throw InvalidArgument("not a 3-arc: backtracking");
  }
  auto aut = graph::automorphism_group(g, options);
  if (!aut.complete) throw LimitExceeded("automorphism search timed out");
  auto report = graph::arc_transitivity(g, aut.group);
  if (report.s_regular != 3) throw InvalidArgument("graph is not 3-arc-regular");

  std::vector<Perm> rho(4);
  rho[2] = neighbourhood_fixer(g, aut.group, arc[0]);
  rho[0] = neighbourhood_fixer(g, aut.group, arc[1]);
  rho[3] = neighbourhood_fixer(g, aut.group, arc[2]);
  rho[1] = neighbourhood_fixer(g, aut.group, arc[3]);

  PermGroup chain = aut.group.with_base({arc[0], arc[1], arc[2], arc[3]});
  if (chain.base_length() != 4) throw InvariantViolation("3-arc stabiliser is not trivial");
  std::vector<Point> images{arc[3], arc[2], arc[1], arc[0]};
  auto delta = chain.element_from_base_images(images);
  if (!delta) throw InvalidArgument("no automorphism reverses the 3-arc");
  if (!(*delta * *delta).is_identity()) throw InvalidArgument("3-arc reverser is not an involution");

  ReflectionSystem sys = reflection_system_from_perms(std::move(rho));
  auto inter = check_intersection_conditions(sys);
  if (!inter.ok) throw InvalidArgument("intersection conditions fail: " + inter.detail);
  return {std::move(sys), std::move(*delta), std::move(aut.group)};
}

}  // namespace polysym::poly
