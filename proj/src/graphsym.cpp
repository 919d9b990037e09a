#include "polysym/graphsym.hpp"

#include <algorithm>
#include <chrono>
#include <istream>
#include <ostream>
#include <set>

#include "polysym/error.hpp"

namespace polysym::graph {

using perm::Perm;
using perm::PermGroup;

SymGraph SymGraph::from_edges(std::size_t n, const std::vector<Edge>& edges) {
  SymGraph g;
  g.adj_.assign(n, {});
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw InvalidArgument("edge endpoint out of range");
    if (u == v) throw InvalidArgument("loop at vertex " + std::to_string(u));
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (Point v = 0; v < n; ++v) {
    auto& l = g.adj_[v];
    std::sort(l.begin(), l.end());
    if (std::adjacent_find(l.begin(), l.end()) != l.end()) {
      throw InvalidArgument("repeated edge at vertex " + std::to_string(v));
    }
  }
  g.edges_ = edges.size();
  return g;
}

std::size_t SymGraph::max_degree() const {
  std::size_t d = 0;
  for (const auto& l : adj_) d = std::max(d, l.size());
  return d;
}

std::optional<std::size_t> SymGraph::regular_degree() const {
  if (adj_.empty()) return 0;
  for (const auto& l : adj_) {
    if (l.size() != adj_[0].size()) return std::nullopt;
  }
  return adj_[0].size();
}

bool SymGraph::adjacent(Point u, Point v) const { return std::binary_search(adj_[u].begin(), adj_[u].end(), v); }

std::vector<Edge> SymGraph::edges() const {
  std::vector<Edge> out;
  for (Point u = 0; u < order(); ++u) {
    for (Point v : adj_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

SymGraph SymGraph::relabel(const Perm& p) const {
  if (p.degree() != order()) throw InvalidArgument("relabelling has the wrong degree");
  auto e = edges();
  for (auto& [u, v] : e) {
    u = p[u];
    v = p[v];
  }
  return from_edges(order(), e);
}

void SymGraph::write(std::ostream& os) const {
  os << order() << ' ' << edge_count() << '\n';
  for (auto [u, v] : edges()) os << u << ' ' << v << '\n';
}

SymGraph SymGraph::read(std::istream& is) {
  long long n = -1, m = -1;
  if (!(is >> n >> m) || n < 0 || m < 0) throw ParseError("expected `n m` header", 1, 1);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = -1, v = -1;
    if (!(is >> u >> v)) throw ParseError("expected edge `u v`", static_cast<std::size_t>(i + 2), 1);
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw ParseError("edge endpoint out of range", static_cast<std::size_t>(i + 2), 1);
    }
    edges.emplace_back(static_cast<Point>(u), static_cast<Point>(v));
  }
  return from_edges(static_cast<std::size_t>(n), edges);
}

SymGraph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Point u = 0; u < n; ++u) {
    for (Point v = u + 1; v < n; ++v) e.emplace_back(u, v);
  }
  return SymGraph::from_edges(n, e);
}

SymGraph complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<Edge> e;
  for (Point u = 0; u < a; ++u) {
    for (Point v = 0; v < b; ++v) e.emplace_back(u, static_cast<Point>(a + v));
  }
  return SymGraph::from_edges(a + b, e);
}

SymGraph cycle_graph(std::size_t n) {
  if (n < 3) throw InvalidArgument("cycle needs at least 3 vertices");
  std::vector<Edge> e;
  for (Point u = 0; u < n; ++u) e.emplace_back(u, static_cast<Point>((u + 1) % n));
  return SymGraph::from_edges(n, e);
}

SymGraph generalized_petersen(std::size_t n, std::size_t k) {
  if (n < 3 || k == 0 || 2 * k >= n) throw InvalidArgument("generalized Petersen graph needs 0 < k < n/2");
  std::vector<Edge> e;
  for (Point i = 0; i < n; ++i) {
    e.emplace_back(i, static_cast<Point>((i + 1) % n));
    e.emplace_back(i, static_cast<Point>(n + i));
    e.emplace_back(static_cast<Point>(n + i), static_cast<Point>(n + (i + k) % n));
  }
  return SymGraph::from_edges(2 * n, e);
}

namespace {

std::vector<int> bfs_distances(const SymGraph& g, Point s) {
  std::vector<int> dist(g.order(), -1);
  std::vector<Point> queue{s};
  dist[s] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    Point v = queue[h];
    for (Point u : g.neighbors(v)) {
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

}  // namespace

bool is_connected(const SymGraph& g) {
  if (g.order() == 0) return true;
  auto d = bfs_distances(g, 0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

bool is_bipartite(const SymGraph& g) {
  std::vector<int> colour(g.order(), -1);
  for (Point s = 0; s < g.order(); ++s) {
    if (colour[s] >= 0) continue;
    colour[s] = 0;
    std::vector<Point> queue{s};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Point v = queue[h];
      for (Point u : g.neighbors(v)) {
        if (colour[u] < 0) {
          colour[u] = 1 - colour[v];
          queue.push_back(u);
        } else if (colour[u] == colour[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::optional<std::size_t> girth(const SymGraph& g) {
  std::optional<std::size_t> best;
  const std::size_t n = g.order();
  std::vector<int> dist(n), parent(n);
  for (Point s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    parent[s] = -1;
    std::vector<Point> queue{s};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Point v = queue[h];
      if (best && static_cast<std::size_t>(2 * dist[v]) + 1 >= *best) break;
      for (Point u : g.neighbors(v)) {
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          parent[u] = static_cast<int>(v);
          queue.push_back(u);
        } else if (static_cast<int>(u) != parent[v]) {
          auto len = static_cast<std::size_t>(dist[u] + dist[v] + 1);
          if (!best || len < *best) best = len;
        }
      }
    }
  }
  return best;
}

BigInt count_s_arcs(const SymGraph& g, std::size_t s) {
  if (s == 0) return BigInt(g.order());
  // ways[k][arc u->v] = number of s-arcs starting with u, v. Arcs indexed by
  // (u, position of v in adj[u]).
  const std::size_t n = g.order();
  std::vector<std::size_t> offset(n + 1, 0);
  for (Point u = 0; u < n; ++u) offset[u + 1] = offset[u] + g.degree(u);
  std::vector<BigInt> ways(offset[n], BigInt(1));
  for (std::size_t step = 1; step < s; ++step) {
    std::vector<BigInt> next(offset[n], BigInt(0));
    // Extending from the end instead of the front gives the same counts.
    std::vector<BigInt> total(n, BigInt(0));
    for (Point v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < g.degree(v); ++i) total[v] += ways[offset[v] + i];
    }
    for (Point u = 0; u < n; ++u) {
      for (std::size_t i = 0; i < g.degree(u); ++i) {
        Point v = g.neighbors(u)[i];
        // Continue from v, excluding the arc back to u.
        auto back = static_cast<std::size_t>(
            std::lower_bound(g.neighbors(v).begin(), g.neighbors(v).end(), u) - g.neighbors(v).begin());
        next[offset[u] + i] = total[v] - ways[offset[v] + back];
      }
    }
    ways = std::move(next);
  }
  BigInt sum = 0;
  for (const auto& w : ways) sum += w;
  return sum;
}

void for_each_s_arc(const SymGraph& g, std::size_t s, const std::function<bool(std::span<const Point>)>& visit) {
  std::vector<Point> arc(s + 1);
  bool stop = false;
  auto extend = [&](auto&& self, std::size_t k) -> void {
    if (stop) return;
    if (k == s + 1) {
      if (!visit(arc)) stop = true;
      return;
    }
    for (Point u : g.neighbors(arc[k - 1])) {
      if (k >= 2 && u == arc[k - 2]) continue;
      arc[k] = u;
      self(self, k + 1);
      if (stop) return;
    }
  };
  for (Point v = 0; v < g.order() && !stop; ++v) {
    arc[0] = v;
    extend(extend, 1);
  }
}

bool is_automorphism(const SymGraph& g, const Perm& p) {
  if (p.degree() != g.order()) return false;
  for (Point v = 0; v < g.order(); ++v) {
    if (g.degree(v) != g.degree(p[v])) return false;
    for (Point u : g.neighbors(v)) {
      if (!g.adjacent(p[v], p[u])) return false;
    }
  }
  return true;
}

// ---- partition refinement search ----

namespace {

struct Timeout {};

// Ordered partition of the vertices; a cell is identified by its first position.
struct Partition {
  std::vector<Point> elems;
  std::vector<std::uint32_t> pos;
  std::vector<std::uint32_t> cell;  // start of the cell of each vertex
  std::vector<std::uint32_t> len;   // length, valid at cell starts
  std::size_t cells = 0;
  std::uint64_t trace = 0;

  explicit Partition(std::size_t n) : elems(n), pos(n), cell(n, 0), len(n, 0), cells(n ? 1 : 0) {
    for (Point v = 0; v < n; ++v) elems[v] = pos[v] = v;
    if (n) len[0] = static_cast<std::uint32_t>(n);
  }
  bool discrete() const { return cells == elems.size(); }
};

void mix(std::uint64_t& h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
}

class Refiner {
 public:
  explicit Refiner(const SymGraph& g) : g_(g), count_(g.order(), 0), queued_(g.order(), 0) {}

  // Makes p equitable, starting from the given splitter cells.
  void refine(Partition& p, std::vector<std::uint32_t> splitters) {
    std::vector<std::uint32_t> queue;
    for (auto s : splitters) {
      if (!queued_[s]) {
        queued_[s] = 1;
        queue.push_back(s);
      }
    }
    std::vector<Point> touched;
    std::vector<std::uint32_t> cells;
    std::vector<Point> splitter;
    for (std::size_t qh = 0; qh < queue.size(); ++qh) {
      std::uint32_t s = queue[qh];
      queued_[s] = 0;
      splitter.assign(p.elems.begin() + s, p.elems.begin() + s + p.len[s]);
      touched.clear();
      for (Point v : splitter) {
        for (Point u : g_.neighbors(v)) {
          if (count_[u]++ == 0) touched.push_back(u);
        }
      }
      cells.clear();
      for (Point u : touched) cells.push_back(p.cell[u]);
      std::sort(cells.begin(), cells.end());
      cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
      mix(p.trace, s);
      for (std::uint32_t c : cells) split(p, c, queue);
      for (Point u : touched) count_[u] = 0;
    }
    queue.clear();
  }

  void individualise(Partition& p, Point v) {
    std::uint32_t c = p.cell[v];
    std::uint32_t l = p.len[c];
    if (l == 1) return;
    swap_positions(p, p.pos[v], c);
    p.len[c] = 1;
    p.len[c + 1] = l - 1;
    for (std::uint32_t i = c + 1; i < c + l; ++i) p.cell[p.elems[i]] = c + 1;
    ++p.cells;
    mix(p.trace, 0xabcdefull ^ c);
    refine(p, {c});
  }

 private:
  static void swap_positions(Partition& p, std::uint32_t a, std::uint32_t b) {
    std::swap(p.elems[a], p.elems[b]);
    p.pos[p.elems[a]] = a;
    p.pos[p.elems[b]] = b;
  }

  void split(Partition& p, std::uint32_t c, std::vector<std::uint32_t>& queue) {
    const std::uint32_t l = p.len[c];
    if (l == 1) return;
    // Touched vertices of the cell go to its tail, then sort the tail by count.
    std::uint32_t tail = c + l;
    for (std::uint32_t i = c; i < tail;) {
      if (count_[p.elems[i]] > 0) {
        --tail;
        swap_positions(p, i, tail);
      } else {
        ++i;
      }
    }
    if (tail == c) {
      std::uint32_t first = count_[p.elems[c]];
      bool same = std::all_of(p.elems.begin() + c, p.elems.begin() + c + l,
                              [&](Point v) { return count_[v] == first; });
      if (same) {
        mix(p.trace, (std::uint64_t{c} << 32) | first);
        return;
      }
    }
    std::sort(p.elems.begin() + tail, p.elems.begin() + c + l,
              [&](Point a, Point b) { return count_[a] < count_[b]; });
    for (std::uint32_t i = tail; i < c + l; ++i) p.pos[p.elems[i]] = i;
    // Fragments: [c, tail) untouched, then runs of equal count.
    std::uint32_t start = c;
    if (tail == c) {
      std::uint32_t i = c;
      while (i < c + l && count_[p.elems[i]] == count_[p.elems[c]]) ++i;
      start = c;
      tail = i;  // first run keeps the cell start
    }
    p.len[c] = tail - c;
    mix(p.trace, (std::uint64_t{c} << 32) | (tail - c));
    for (std::uint32_t i = tail; i < c + l;) {
      std::uint32_t j = i;
      const std::uint32_t k = count_[p.elems[i]];
      while (j < c + l && count_[p.elems[j]] == k) ++j;
      p.len[i] = j - i;
      for (std::uint32_t t = i; t < j; ++t) p.cell[p.elems[t]] = i;
      ++p.cells;
      mix(p.trace, (std::uint64_t{i} << 32) ^ (std::uint64_t{k} << 16) ^ (j - i));
      if (!queued_[i]) {
        queued_[i] = 1;
        queue.push_back(i);
      }
      i = j;
    }
    (void)start;
  }

  const SymGraph& g_;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint8_t> queued_;
};

// First path of the search tree: partitions at each depth and the cell
// (by start) split at each step.
struct BasePath {
  std::vector<Partition> parts;  // depth 0 .. L
  std::vector<std::uint32_t> target;  // depth 0 .. L-1
  std::vector<Point> base;            // individualised vertices

  std::size_t length() const { return target.size(); }
};

std::uint32_t choose_target(const Partition& p) {
  std::uint32_t best = 0, best_len = UINT32_MAX;
  for (std::uint32_t i = 0; i < p.elems.size(); i += p.len[i]) {
    if (p.len[i] > 1 && p.len[i] < best_len) {
      best = i;
      best_len = p.len[i];
    }
  }
  return best;
}

Partition initial_partition(const SymGraph& g, Refiner& r) {
  Partition p(g.order());
  if (g.order()) r.refine(p, {0});
  return p;
}

BasePath first_path(const SymGraph& g, Refiner& r) {
  BasePath path;
  path.parts.push_back(initial_partition(g, r));
  while (!path.parts.back().discrete()) {
    Partition next = path.parts.back();
    std::uint32_t t = choose_target(next);
    Point v = next.elems[t];
    r.individualise(next, v);
    path.target.push_back(t);
    path.base.push_back(v);
    path.parts.push_back(std::move(next));
  }
  return path;
}

bool same_shape(const Partition& a, const Partition& b) { return a.cells == b.cells && a.trace == b.trace; }

class LeafSearch {
 public:
  LeafSearch(const SymGraph& g, const SymGraph& h, const BasePath& path, Refiner& rh,
             std::chrono::steady_clock::time_point deadline, std::size_t& nodes)
      : g_(g), h_(h), path_(path), rh_(rh), deadline_(deadline), nodes_(nodes) {}

  // Below depth d, with h's partition matching the base path at depth d.
  std::optional<std::vector<Point>> search(std::size_t d, const Partition& p) {
    if ((nodes_++ & 255) == 0 && std::chrono::steady_clock::now() > deadline_) throw Timeout{};
    if (d == path_.length()) return leaf(p);
    const std::uint32_t t = path_.target[d];
    std::vector<Point> choices(p.elems.begin() + t, p.elems.begin() + t + p.len[t]);
    for (Point x : choices) {
      if (auto r = step(d, p, x)) return r;
    }
    return std::nullopt;
  }

  // Individualise x at depth d and continue.
  std::optional<std::vector<Point>> step(std::size_t d, const Partition& p, Point x) {
    Partition q = p;
    rh_.individualise(q, x);
    if (!same_shape(q, path_.parts[d + 1])) return std::nullopt;
    return search(d + 1, q);
  }

 private:
  std::optional<std::vector<Point>> leaf(const Partition& p) {
    const auto& base = path_.parts.back().elems;
    std::vector<Point> map(g_.order());
    for (std::size_t i = 0; i < base.size(); ++i) map[base[i]] = p.elems[i];
    for (Point v = 0; v < g_.order(); ++v) {
      if (g_.degree(v) != h_.degree(map[v])) return std::nullopt;
      for (Point u : g_.neighbors(v)) {
        if (!h_.adjacent(map[v], map[u])) return std::nullopt;
      }
    }
    return map;
  }

  const SymGraph& g_;
  const SymGraph& h_;
  const BasePath& path_;
  Refiner& rh_;
  std::chrono::steady_clock::time_point deadline_;
  std::size_t& nodes_;
};

std::chrono::steady_clock::time_point deadline_from(const SearchOptions& o) {
  return std::chrono::steady_clock::now() +
         std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(o.timeout_seconds));
}

std::vector<Point> orbit_of(Point x, const std::vector<Perm>& gens, std::size_t n) {
  std::vector<bool> seen(n, false);
  std::vector<Point> out{x};
  seen[x] = true;
  for (std::size_t h = 0; h < out.size(); ++h) {
    for (const auto& g : gens) {
      Point y = g[out[h]];
      if (!seen[y]) {
        seen[y] = true;
        out.push_back(y);
      }
    }
  }
  return out;
}

}  // namespace

AutomorphismResult automorphism_group(const SymGraph& g, const SearchOptions& options) {
  const std::size_t n = g.order();
  if (!is_connected(g)) throw InvalidArgument("automorphism search needs a connected graph");
  AutomorphismResult res;
  if (n <= 1) {
    res.group = PermGroup(n);
    return res;
  }
  const auto deadline = deadline_from(options);
  Refiner r(g);
  BasePath path = first_path(g, r);
  LeafSearch search(g, g, path, r, deadline, res.nodes);

  // Deepest level first; generators found at level d fix base[0..d).
  std::vector<std::size_t> level_orbit(path.length(), 1);
  try {
    for (std::size_t d = path.length(); d-- > 0;) {
      const Point b = path.base[d];
      const Partition& p = path.parts[d];
      const std::uint32_t t = path.target[d];
      std::vector<bool> known(n, false), failed(n, false);
      for (Point x : orbit_of(b, res.generators, n)) known[x] = true;
      for (std::uint32_t i = t; i < t + p.len[t]; ++i) {
        Point w = p.elems[i];
        if (known[w] || failed[w]) continue;
        auto found = search.step(d, p, w);
        if (found) {
          res.generators.emplace_back(std::move(*found));
          for (Point x : orbit_of(b, res.generators, n)) known[x] = true;
        } else {
          for (Point x : orbit_of(w, res.generators, n)) failed[x] = true;
        }
      }
      level_orbit[d] = orbit_of(b, res.generators, n).size();
    }
  } catch (const Timeout&) {
    res.complete = false;
  }
  perm::ChainOptions opts;
  if (res.complete) {
    BigInt order = 1;
    for (auto o : level_orbit) order *= o;
    opts.known_order = order;
    opts.base_prefix = path.base;
  }
  res.group = res.generators.empty() ? PermGroup(n) : PermGroup::build(res.generators, n, opts);
  return res;
}

std::optional<std::vector<Point>> isomorphic(const SymGraph& g1, const SymGraph& g2, const SearchOptions& options) {
  if (g1.order() != g2.order() || g1.edge_count() != g2.edge_count()) return std::nullopt;
  std::vector<std::size_t> d1, d2;
  for (Point v = 0; v < g1.order(); ++v) {
    d1.push_back(g1.degree(v));
    d2.push_back(g2.degree(v));
  }
  std::sort(d1.begin(), d1.end());
  std::sort(d2.begin(), d2.end());
  if (d1 != d2) return std::nullopt;
  if (g1.order() == 0) return std::vector<Point>{};

  Refiner r1(g1), r2(g2);
  BasePath path = first_path(g1, r1);
  Partition start = initial_partition(g2, r2);
  if (!same_shape(start, path.parts[0])) return std::nullopt;
  std::size_t nodes = 0;
  LeafSearch search(g1, g2, path, r2, deadline_from(options), nodes);
  try {
    return search.search(0, start);
  } catch (const Timeout&) {
    throw LimitExceeded("isomorphism search timed out");
  }
}

// ---- arc transitivity ----

std::string to_string(const DmClass& c) {
  std::string s = std::to_string(c.s);
  if (c.superscript) s += "^" + std::to_string(c.superscript);
  return s;
}

namespace {

std::optional<std::vector<Point>> first_arc(const SymGraph& g, std::size_t s) {
  std::optional<std::vector<Point>> out;
  for_each_s_arc(g, s, [&](std::span<const Point> a) {
    out.emplace(a.begin(), a.end());
    return false;
  });
  return out;
}

}  // namespace

ArcReport arc_transitivity(const SymGraph& g, const PermGroup& group) {
  for (const auto& x : group.generators()) {
    if (!is_automorphism(g, x)) throw InvalidArgument("group does not preserve adjacency");
  }
  ArcReport rep;
  rep.aut_order = group.order();
  rep.aut_generators = group.generators();
  const std::size_t cap = g.max_degree() <= 2 ? g.order() : 16;
  for (std::size_t s = 0; s <= cap; ++s) {
    auto arc = first_arc(g, s);
    if (!arc) break;
    BigInt total = count_s_arcs(g, s);
    BigInt orbit = rep.aut_order / group.pointwise_stabiliser_order(*arc);
    if (orbit != total) break;
    rep.s_transitive = static_cast<int>(s);
    if (total == rep.aut_order) {
      rep.s_regular = static_cast<int>(s);
    } else {
      rep.s_regular.reset();
    }
  }
  if (rep.s_transitive >= 1 && g.regular_degree() == 3u) {
    rep.dm_class = dm_class(g, group);
  }
  return rep;
}

DmClass dm_class(const SymGraph& g, const PermGroup& group) {
  if (g.regular_degree() != 3u) throw InvalidArgument("DM class needs a cubic graph");
  if (!is_connected(g)) throw InvalidArgument("DM class needs a connected graph");
  const Point u = 0, v = g.neighbors(0).front();
  // Largest s with transitivity; the group is then s-arc-regular.
  int s = 0;
  for (std::size_t k = 1; k <= 16; ++k) {
    auto arc = first_arc(g, k);
    if (!arc || group.order() / group.pointwise_stabiliser_order(*arc) != count_s_arcs(g, k)) break;
    s = static_cast<int>(k);
  }
  if (s == 0) throw InvalidArgument("graph is not arc-transitive under the group");

  PermGroup chain = group.with_base({u, v});
  const auto& orbit0 = chain.basic_orbit(0);
  if (std::find(orbit0.begin(), orbit0.end(), v) == orbit0.end()) {
    throw InvariantViolation("arc-transitive group does not move u to v");
  }
  // g0 with g0(u) = v, then a in Stab(u) so that (a * g0) swaps u and v.
  Perm g0 = chain.transversal_element(0, v);
  Point target = g0.inverse()[u];
  const auto& orbit1 = chain.basic_orbit(1);
  if (std::find(orbit1.begin(), orbit1.end(), target) == orbit1.end()) {
    throw InvariantViolation("no automorphism reverses the arc");
  }
  Perm reverser = chain.transversal_element(1, target) * g0;
  bool involution = false;
  group.pointwise_stabiliser({u, v}).for_each_element([&](const Perm& h) {
    Perm x = h * reverser;
    if ((x * x).is_identity()) {
      involution = true;
      return false;
    }
    return true;
  });
  DmClass c{s, 0};
  if (s == 2 || s == 4) {
    c.superscript = involution ? 1 : 2;
  } else if (!involution) {
    throw InvariantViolation("odd class without an involutory arc reverser");
  }
  return c;
}

TwoArcTriple two_arc_triple(const SymGraph& g, const PermGroup& group) {
  if (g.regular_degree() != 3u || !is_connected(g)) throw InvalidArgument("2-arc triple needs a connected cubic graph");
  if (group.order() != count_s_arcs(g, 2)) throw InvalidArgument("group order is not the 2-arc count");
  const Point u = 0, w = g.neighbors(0).front();
  auto arc = first_arc(g, 2);
  if (group.pointwise_stabiliser_order(*arc) != 1) throw InvalidArgument("group is not 2-arc-regular");
  TwoArcTriple t;
  bool have_h = false;
  group.pointwise_stabiliser({u}).for_each_element([&](const Perm& x) {
    if (!x.is_identity() && (x * x * x).is_identity()) {
      t.h = x;
      have_h = true;
    }
    return !have_h;
  });
  auto fix = group.pointwise_stabiliser({u, w});
  if (!have_h || fix.order() != 2) throw InvalidArgument("vertex stabiliser is not S3");
  t.p = fix.generators().front();
  for (const auto& x : fix.generators()) {
    if (!x.is_identity()) t.p = x;
  }
  PermGroup chain = group.with_base({u, w});
  Perm g0 = chain.transversal_element(0, w);
  Perm reverser = chain.transversal_element(1, g0.inverse()[u]) * g0;
  Perm alt = t.p * reverser;
  if ((reverser * reverser).is_identity()) {
    t.a = reverser;
  } else if ((alt * alt).is_identity()) {
    t.a = alt;
  } else if (reverser * reverser == t.p) {
    t.a = reverser;
  } else {
    t.a = alt;
  }
  return t;
}

bool check_3ar_extension(const PermGroup& t, const Perm& h, const Perm& p, const Perm& a) {
  perm::GenMap m;
  m.domain = {h, p, a};
  m.images = {h, p, a * p};
  return perm::extend_generator_map(m, t).has_value();
}

ArcReport analyze_graph(const SymGraph& g, const SearchOptions& options) {
  auto aut = automorphism_group(g, options);
  ArcReport rep = arc_transitivity(g, aut.group);
  rep.lower_bound = !aut.complete;
  return rep;
}

void write_certificate(std::ostream& os, const SymGraph& g, const ArcReport& report) {
  os << "order=" << g.order() << '\n';
  auto gi = girth(g);
  os << "girth=" << (gi ? std::to_string(*gi) : std::string("inf")) << '\n';
  os << "bipartite=" << (is_bipartite(g) ? "yes" : "no") << '\n';
  os << "s_transitive=" << report.s_transitive << '\n';
  os << "s_regular=" << (report.s_regular ? std::to_string(*report.s_regular) : std::string("none")) << '\n';
  os << "dm_class=" << (report.dm_class ? to_string(*report.dm_class) : std::string("none")) << '\n';
  os << "aut_order=" << report.aut_order.str() << (report.lower_bound ? " (lower bound)" : "") << '\n';
}

}  // namespace polysym::graph
