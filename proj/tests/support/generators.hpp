#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "bufpart/graph.hpp"
#include "bufpart/rng.hpp"

namespace testgen {

using bufpart::Edge;
using bufpart::Graph;
using bufpart::Stream;
using bufpart::StreamTag;
using bufpart::Vertex;

inline Stream rng_for(std::uint64_t seed, std::uint64_t which = 0) { return Stream(seed, StreamTag::generator, which); }

inline Graph complete(std::size_t n, double w = 0.0) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) e.push_back({u, v, 1.0});
  if (w > 0.0) return Graph(n, e, std::vector<double>(n, w));
  return Graph(n, e);
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u) e.push_back({u, static_cast<Vertex>((u + 1) % n), 1.0});
  return Graph(n, e);
}

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex u = 0; u + 1 < n; ++u) e.push_back({u, u + 1, 1.0});
  return Graph(n, e);
}

// k disjoint cliques of size s
inline Graph cliques(std::size_t k, std::size_t s) {
  std::vector<Edge> e;
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i + 1; j < s; ++j)
        e.push_back({static_cast<Vertex>(c * s + i), static_cast<Vertex>(c * s + j), 1.0});
  return Graph(k * s, e);
}

inline Graph two_triangles_bridge() {
  return Graph(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 1}});
}

// Random d-regular simple graph: stubs are paired one valid pair at a time, restarting when stuck.
inline Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  Stream r = rng_for(seed, 1);
  for (;;) {
    std::vector<Vertex> stubs;
    for (Vertex u = 0; u < n; ++u)
      for (std::size_t i = 0; i < d; ++i) stubs.push_back(u);
    std::set<std::pair<Vertex, Vertex>> seen;
    std::size_t misses = 0;
    while (stubs.size() >= 2 && misses < 1000) {
      std::size_t i = r.below(stubs.size()), j = r.below(stubs.size());
      Vertex a = std::min(stubs[i], stubs[j]), b = std::max(stubs[i], stubs[j]);
      if (i == j || a == b || seen.count({a, b})) {
        ++misses;
        continue;
      }
      misses = 0;
      seen.insert({a, b});
      if (i < j) std::swap(i, j);
      stubs[i] = stubs.back();
      stubs.pop_back();
      stubs[j] = stubs.back();
      stubs.pop_back();
    }
    if (!stubs.empty()) continue;
    std::vector<Edge> e;
    for (auto [a, b] : seen) e.push_back({a, b, 1.0});
    return Graph(n, e, std::vector<double>(n, static_cast<double>(d)));
  }
}

inline bool connected(const Graph& g) { return bufpart::connected_components(g).size() == 1; }

// G(n, p) with costs uniform in [0.5, 2); a spanning path keeps it connected when `link` is set.
inline Graph weighted_er(std::size_t n, double p, std::uint64_t seed, bool link = true, bool random_weights = false) {
  Stream r = rng_for(seed, 2);
  std::set<std::pair<Vertex, Vertex>> seen;
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (r.uniform() < p || (link && v == u + 1)) {
        seen.insert({u, v});
        e.push_back({u, v, 0.5 + 1.5 * r.uniform()});
      }
  if (!random_weights) return Graph(n, e);
  std::vector<double> w(n, 0.0);
  for (const Edge& x : e) {
    w[x.u] += x.cost;
    w[x.v] += x.cost;
  }
  for (auto& x : w) x *= 1.0 + r.uniform();
  return Graph(n, e, w);
}

struct Planted {
  Graph graph;
  std::vector<int> label;
  double planted_cut = 0.0;
};

// Communities of the given sizes; connected, no isolated vertices.
inline Planted communities(const std::vector<std::size_t>& sizes, double p_in, double p_out, std::uint64_t seed) {
  Stream r = rng_for(seed, 3);
  std::vector<int> label;
  for (std::size_t b = 0; b < sizes.size(); ++b) label.insert(label.end(), sizes[b], static_cast<int>(b));
  const std::size_t n = label.size();
  for (;;) {
    std::vector<Edge> e;
    double cut = 0.0;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) {
        bool same = label[u] == label[v];
        if (r.uniform() < (same ? p_in : p_out)) {
          e.push_back({u, v, 1.0});
          if (!same) cut += 1.0;
        }
      }
    std::vector<int> deg(n, 0);
    for (const Edge& x : e) {
      ++deg[x.u];
      ++deg[x.v];
    }
    if (std::find(deg.begin(), deg.end(), 0) != deg.end()) continue;
    Graph g(n, e);
    if (!connected(g)) continue;
    return Planted{std::move(g), label, cut};
  }
}

inline Planted planted(std::size_t blocks, std::size_t size, double p_in, double p_out, std::uint64_t seed) {
  return communities(std::vector<std::size_t>(blocks, size), p_in, p_out, seed);
}

// Small connected graphs for oracle sweeps: random trees plus extra edges.
inline Graph small_connected(std::size_t n, double extra, std::uint64_t seed, bool random_costs = true) {
  Stream r = rng_for(seed, 4);
  std::set<std::pair<Vertex, Vertex>> seen;
  for (Vertex v = 1; v < n; ++v) {
    Vertex u = static_cast<Vertex>(r.below(v));
    seen.insert({u, v});
  }
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (r.uniform() < extra) seen.insert({u, v});
  std::vector<Edge> e;
  for (auto [a, b] : seen) e.push_back({a, b, random_costs ? 0.25 + 1.75 * r.uniform() : 1.0});
  return Graph(n, e);
}

}  // namespace testgen
