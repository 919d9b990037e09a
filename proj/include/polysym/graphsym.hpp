#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polysym/permgroup.hpp"

namespace polysym::graph {

using Edge = std::pair<Point, Point>;

// Finite simple undirected graph with sorted adjacency lists.
class SymGraph {
 public:
  SymGraph() = default;
  // Rejects loops, repeated edges and out-of-range endpoints.
  static SymGraph from_edges(std::size_t n, const std::vector<Edge>& edges);

  std::size_t order() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_; }
  const std::vector<Point>& neighbors(Point v) const { return adj_[v]; }
  std::size_t degree(Point v) const { return adj_[v].size(); }
  std::size_t max_degree() const;
  // Common degree, or nullopt if irregular (0 for the empty graph).
  std::optional<std::size_t> regular_degree() const;
  bool adjacent(Point u, Point v) const;
  std::vector<Edge> edges() const;  // u < v, sorted

  // Image graph under the vertex map v -> p[v].
  SymGraph relabel(const perm::Perm& p) const;

  // `n m` then m lines `u v`.
  void write(std::ostream& os) const;
  static SymGraph read(std::istream& is);

  bool operator==(const SymGraph&) const = default;

 private:
  std::vector<std::vector<Point>> adj_;
  std::size_t edges_ = 0;
};

SymGraph complete_graph(std::size_t n);
SymGraph complete_bipartite(std::size_t a, std::size_t b);
SymGraph cycle_graph(std::size_t n);
// Outer cycle i ~ i+1, spokes i ~ n+i, inner n+i ~ n+(i+k).
SymGraph generalized_petersen(std::size_t n, std::size_t k);

bool is_connected(const SymGraph& g);
bool is_bipartite(const SymGraph& g);
// Length of a shortest cycle; nullopt for forests.
std::optional<std::size_t> girth(const SymGraph& g);

// Number of s-arcs: walks v0..vs with v_{i+1} != v_{i-1}.
BigInt count_s_arcs(const SymGraph& g, std::size_t s);
// Visits s-arcs in lexicographic order; the callback returns false to stop.
void for_each_s_arc(const SymGraph& g, std::size_t s, const std::function<bool(std::span<const Point>)>& visit);

bool is_automorphism(const SymGraph& g, const perm::Perm& p);

struct SearchOptions {
  double timeout_seconds = 60.0;
};

struct AutomorphismResult {
  perm::PermGroup group;
  std::vector<perm::Perm> generators;
  // False when the search ran out of time: `group` is then a subgroup.
  bool complete = true;
  std::size_t nodes = 0;
};

// Individualisation/refinement search; rejects disconnected graphs.
AutomorphismResult automorphism_group(const SymGraph& g, const SearchOptions& options = {});

// Vertex bijection g1 -> g2 preserving adjacency, if one exists. Throws
// LimitExceeded on timeout.
std::optional<std::vector<Point>> isomorphic(const SymGraph& g1, const SymGraph& g2,
                                             const SearchOptions& options = {});

// Djokovic-Miller class of an arc-transitive cubic graph: s with superscript
// 1 when an involution reverses an arc, 2 when none does; classes 1, 3 and 5
// carry no superscript.
struct DmClass {
  int s = 0;
  int superscript = 0;
  bool operator==(const DmClass&) const = default;
};
std::string to_string(const DmClass& c);

struct ArcReport {
  // Largest s with the group transitive on s-arcs; -1 if not vertex-transitive.
  int s_transitive = -1;
  std::optional<int> s_regular;
  std::optional<DmClass> dm_class;
  BigInt aut_order;
  std::vector<perm::Perm> aut_generators;
  bool lower_bound = false;
};

// Transitivity on s-arcs, tested on the orbit of one s-arc. The s search is
// capped at n for graphs of maximum degree <= 2 and at 16 otherwise.
ArcReport arc_transitivity(const SymGraph& g, const perm::PermGroup& group);

// Requires a cubic graph and an arc-transitive group (the full group for the
// class proper).
DmClass dm_class(const SymGraph& g, const perm::PermGroup& group);

// Generators of a 2-arc-regular group on a cubic graph: h of order 3 fixing
// vertex 0, p the involution fixing 0 and its first neighbour w, and a
// reversing the arc (0, w), an involution when one exists and otherwise with
// a^2 = p. Throws InvalidArgument if the group is not 2-arc-regular.
struct TwoArcTriple {
  perm::Perm h, p, a;
};
TwoArcTriple two_arc_triple(const SymGraph& g, const perm::PermGroup& group);

// True iff (h, p, a) -> (h, p, a*p) extends to an automorphism of T.
bool check_3ar_extension(const perm::PermGroup& t, const perm::Perm& h, const perm::Perm& p, const perm::Perm& a);

// Full analysis with the automorphism group from the search.
ArcReport analyze_graph(const SymGraph& g, const SearchOptions& options = {});

// Key-value lines: order, girth, bipartite, s_transitive, s_regular,
// dm_class, aut_order.
void write_certificate(std::ostream& os, const SymGraph& g, const ArcReport& report);

}  // namespace polysym::graph
