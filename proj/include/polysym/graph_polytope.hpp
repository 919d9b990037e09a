#pragma once

#include <array>

#include "polysym/graphsym.hpp"
#include "polysym/polytope.hpp"

namespace polysym::poly {

struct GraphPolytope {
  ReflectionSystem system;
  perm::Perm delta;  // the involution reversing the 3-arc
  perm::PermGroup automorphisms;
};

// Regular polytope from a 3-arc-regular cubic graph and one of its 3-arcs
// (v0, v1, v2, v3). rho_2, rho_0, rho_3, rho_1 are the automorphisms fixing
// v0, v1, v2, v3 together with their neighbours. Throws InvalidArgument when
// the graph is not 3-arc-regular or the intersection conditions fail.
GraphPolytope polytope_from_3ar_cubic_graph(const graph::SymGraph& g, const std::array<Point, 4>& arc,
                                            const graph::SearchOptions& options = {});

}  // namespace polysym::poly
