#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <utility>
#include <vector>

#include "polysym/graphsym.hpp"

namespace polysym::fixtures {

using graph::Edge;
using graph::SymGraph;
using graph::is_automorphism;

// Levi graph of the generalized quadrangle of order 2: pairs of {0..5}
// against partitions into three pairs. Tutte's 8-cage.
inline SymGraph tutte_cage() {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) pairs.emplace_back(a, b);
  }
  std::vector<std::array<int, 3>> synthemes;
  for (int i = 0; i < 15; ++i) {
    for (int j = i + 1; j < 15; ++j) {
      for (int k = j + 1; k < 15; ++k) {
        std::array<int, 6> pts{pairs[i].first, pairs[i].second, pairs[j].first,
                               pairs[j].second, pairs[k].first, pairs[k].second};
        std::sort(pts.begin(), pts.end());
        if (std::adjacent_find(pts.begin(), pts.end()) == pts.end()) synthemes.push_back({i, j, k});
      }
    }
  }
  std::vector<Edge> e;
  for (std::size_t s = 0; s < synthemes.size(); ++s) {
    for (int p : synthemes[s]) e.emplace_back(static_cast<Point>(p), static_cast<Point>(15 + s));
  }
  return SymGraph::from_edges(30, e);
}

// Incidence graph of the Fano plane.
inline SymGraph heawood() {
  std::vector<Edge> e;
  for (Point l = 0; l < 7; ++l) {
    for (Point d : {0u, 1u, 3u}) e.emplace_back((l + d) % 7, 7 + l);
  }
  return SymGraph::from_edges(14, e);
}

inline SymGraph pappus() {
  // Vertices (i, side) on a 18-cycle with LCF notation [5, 7, -7, 7, -7, -5]^3.
  const int lcf[6] = {5, 7, -7, 7, -7, -5};
  std::vector<Edge> e;
  for (int i = 0; i < 18; ++i) {
    e.emplace_back(i, (i + 1) % 18);
    int j = ((i + lcf[i % 6]) % 18 + 18) % 18;
    if (i < j) e.emplace_back(i, j);
  }
  return SymGraph::from_edges(18, e);
}

inline std::size_t brute_force_aut(const SymGraph& g) {
  std::vector<Point> p(g.order());
  std::iota(p.begin(), p.end(), Point{0});
  std::size_t count = 0;
  do {
    if (is_automorphism(g, perm::Perm(p))) ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

inline std::size_t dfs_arcs(const SymGraph& g, std::size_t s) {
  std::size_t count = 0;
  std::vector<Point> arc;
  auto go = [&](auto&& self) -> void {
    if (arc.size() == s + 1) {
      ++count;
      return;
    }
    for (Point u : g.neighbors(arc.back())) {
      if (arc.size() >= 2 && u == arc[arc.size() - 2]) continue;
      arc.push_back(u);
      self(self);
      arc.pop_back();
    }
  };
  for (Point v = 0; v < g.order(); ++v) {
    arc = {v};
    go(go);
  }
  return count;
}

}  // namespace polysym::fixtures

namespace polysym::fixtures {

// Automorphisms counted by backtracking over vertex images, keeping
// adjacency to already placed vertices.
inline std::size_t pruned_aut_count(const SymGraph& g) {
  const std::size_t n = g.order();
  std::vector<Point> image(n);
  std::vector<bool> used(n, false);
  std::size_t count = 0;
  auto go = [&](auto&& self, Point v) -> void {
    if (v == n) {
      ++count;
      return;
    }
    for (Point w = 0; w < n; ++w) {
      if (used[w] || g.degree(w) != g.degree(v)) continue;
      bool ok = true;
      for (Point u = 0; u < v && ok; ++u) ok = g.adjacent(u, v) == g.adjacent(image[u], w);
      if (!ok) continue;
      used[w] = true;
      image[v] = w;
      self(self, v + 1);
      used[w] = false;
    }
  };
  go(go, 0);
  return count;
}

}  // namespace polysym::fixtures
