#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bufpart {

using Vertex = std::uint32_t;
using VertexSet = std::vector<Vertex>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

struct Edge {
  Vertex u;
  Vertex v;
  double cost;
};

struct Arc {
  Vertex to;
  double cost;
};

// Undirected graph with positive vertex weights and edge costs, stored as CSR.
class Graph {
 public:
  Graph() = default;

  // An empty weight vector selects the incident-cost default.
  Graph(std::size_t n, std::vector<Edge> edges, std::vector<double> weights = {})
      : n_(n), edges_(std::move(edges)), weights_(std::move(weights)) {
    if (n_ == 0) throw PreconditionError("graph must have at least one vertex");
    if (n_ > std::numeric_limits<Vertex>::max()) throw PreconditionError("too many vertices");
    std::vector<std::pair<Vertex, Vertex>> keys;
    keys.reserve(edges_.size());
    incident_.assign(n_, 0.0);
    std::vector<std::size_t> deg(n_, 0);
    for (const Edge& e : edges_) {
      if (e.u >= n_ || e.v >= n_) throw PreconditionError("edge endpoint out of range");
      if (e.u == e.v) throw PreconditionError("self-loop at vertex " + std::to_string(e.u));
      if (!(e.cost > 0.0) || !std::isfinite(e.cost))
        throw PreconditionError("edge cost must be positive and finite");
      keys.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
      incident_[e.u] += e.cost;
      incident_[e.v] += e.cost;
      ++deg[e.u];
      ++deg[e.v];
    }
    std::sort(keys.begin(), keys.end());
    auto dup = std::adjacent_find(keys.begin(), keys.end());
    if (dup != keys.end()) {
      throw PreconditionError("duplicate edge " + std::to_string(dup->first) + " " +
                              std::to_string(dup->second));
    }
    if (weights_.empty()) {
      weights_ = incident_;
      for (std::size_t u = 0; u < n_; ++u) {
        if (!(weights_[u] > 0.0))
          throw PreconditionError("vertex " + std::to_string(u) +
                                  " has no incident edges and no explicit weight");
      }
    } else {
      if (weights_.size() != n_) throw PreconditionError("weight vector has wrong length");
      for (double w : weights_) {
        if (!(w > 0.0) || !std::isfinite(w))
          throw PreconditionError("vertex weight must be positive and finite");
      }
    }
    offsets_.assign(n_ + 1, 0);
    for (std::size_t u = 0; u < n_; ++u) offsets_[u + 1] = offsets_[u] + deg[u];
    arcs_.resize(offsets_[n_]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
      arcs_[fill[e.u]++] = Arc{e.v, e.cost};
      arcs_[fill[e.v]++] = Arc{e.u, e.cost};
    }
    for (std::size_t u = 0; u < n_; ++u) {
      std::sort(arcs_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]),
                arcs_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]),
                [](const Arc& a, const Arc& b) { return a.to < b.to; });
    }
    total_weight_ = 0.0;
    for (double w : weights_) total_weight_ += w;
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(Vertex u) const { return weights_[u]; }
  double total_weight() const { return total_weight_; }
  // Sum of costs of edges incident on u.
  double incident_cost(Vertex u) const { return incident_[u]; }

  std::span<const Arc> neighbors(Vertex u) const {
    return {arcs_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }

  // True when every w_u equals its incident cost sum (classical normalization).
  bool degree_weighted(double rel_tol = 1e-12) const {
    for (std::size_t u = 0; u < n_; ++u) {
      if (std::abs(weights_[u] - incident_[u]) > rel_tol * std::max(1.0, incident_[u])) return false;
    }
    return true;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  std::vector<double> incident_;
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
  double total_weight_ = 0.0;
};

using Mask = std::vector<std::uint8_t>;

inline Mask make_mask(std::size_t n, std::span<const Vertex> s) {
  Mask m(n, 0);
  for (Vertex u : s) {
    if (u >= n) throw PreconditionError("vertex " + std::to_string(u) + " out of range");
    m[u] = 1;
  }
  return m;
}

inline double set_weight(const Graph& g, std::span<const Vertex> s) {
  double w = 0.0;
  for (Vertex u : s) w += g.weight(u);
  return w;
}

inline VertexSet sorted_set(VertexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return sorted_set(std::move(out));
}

inline VertexSet complement(std::size_t n, std::span<const Vertex> s) {
  Mask m = make_mask(n, s);
  VertexSet out;
  for (std::size_t u = 0; u < n; ++u)
    if (!m[u]) out.push_back(static_cast<Vertex>(u));
  return out;
}

namespace detail {

inline void require_disjoint(std::size_t n, std::span<const Vertex> a, std::span<const Vertex> b,
                             const char* what) {
  Mask m = make_mask(n, a);
  for (Vertex v : b) {
    if (v >= n) throw PreconditionError("vertex " + std::to_string(v) + " out of range");
    if (m[v]) throw PreconditionError(std::string(what) + ": sets overlap at vertex " + std::to_string(v));
  }
}

// Cost of edges from a to vertices accepted by pred.
template <class Pred>
double cost_from(const Graph& g, std::span<const Vertex> a, Pred pred) {
  double s = 0.0;
  for (Vertex u : a)
    for (const Arc& arc : g.neighbors(u))
      if (pred(arc.to)) s += arc.cost;
  return s;
}

}  // namespace detail

// delta_G(a, b) for disjoint a, b.
inline double cut_cost(const Graph& g, std::span<const Vertex> a, std::span<const Vertex> b) {
  detail::require_disjoint(g.n(), a, b, "cut_cost");
  Mask mb = make_mask(g.n(), b);
  return detail::cost_from(g, a, [&](Vertex v) { return mb[v] != 0; });
}

// phi(P || B) = delta(P, V \ (P u B)) / w(P).
inline double buffered_expansion(const Graph& g, std::span<const Vertex> p, std::span<const Vertex> b) {
  if (p.empty()) throw PreconditionError("buffered_expansion: empty part");
  detail::require_disjoint(g.n(), p, b, "buffered_expansion");
  Mask in(g.n(), 0);
  for (Vertex u : p) in[u] = 1;
  for (Vertex u : b) in[u] = 1;
  double out = detail::cost_from(g, p, [&](Vertex v) { return in[v] == 0; });
  return out / set_weight(g, p);
}

struct BufferedPartition {
  std::vector<VertexSet> parts;
  std::vector<VertexSet> buffers;
  double epsilon = 0.0;

  std::size_t k() const { return parts.size(); }
};

struct Violation {
  int condition = 0;  // 0 structural, 1 disjointness, 2 coverage, 3 nonempty, 4 buffer budget
  long part = -1;
  long vertex = -1;
  std::string message;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;
};

inline ValidationReport validate_partition(const Graph& g, const BufferedPartition& bp) {
  ValidationReport rep;
  auto add = [&](int c, long part, long vertex, std::string msg) {
    rep.valid = false;
    rep.violations.push_back(Violation{c, part, vertex, std::move(msg)});
  };
  const std::size_t n = g.n();
  if (bp.parts.size() != bp.buffers.size()) {
    add(0, -1, -1, "number of parts and buffers differ");
    return rep;
  }
  if (!(bp.epsilon >= 0.0 && bp.epsilon < 1.0)) add(0, -1, -1, "epsilon outside [0,1)");
  // owner[u] = first set containing u, encoded as 2i (part) or 2i+1 (buffer)
  std::vector<long> owner(n, -1);
  auto set_name = [](long code) {
    return (code % 2 == 0 ? "P" : "B") + std::to_string(code / 2 + 1);
  };
  for (std::size_t i = 0; i < bp.parts.size(); ++i) {
    for (int side = 0; side < 2; ++side) {
      const VertexSet& s = side == 0 ? bp.parts[i] : bp.buffers[i];
      long code = static_cast<long>(2 * i + side);
      for (Vertex u : s) {
        if (u >= n) {
          add(0, static_cast<long>(i), u, "vertex " + std::to_string(u) + " out of range in " + set_name(code));
          continue;
        }
        if (owner[u] >= 0) {
          add(1, static_cast<long>(i), u,
              "condition 1 (disjointness): vertex " + std::to_string(u) + " in both " + set_name(owner[u]) +
                  " and " + set_name(code));
        } else {
          owner[u] = code;
        }
      }
    }
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (owner[u] < 0)
      add(2, -1, static_cast<long>(u), "condition 2 (coverage): vertex " + std::to_string(u) + " not covered");
  }
  for (std::size_t i = 0; i < bp.parts.size(); ++i) {
    if (bp.parts[i].empty())
      add(3, static_cast<long>(i), -1, "condition 3 (nonempty): P" + std::to_string(i + 1) + " is empty");
  }
  for (std::size_t i = 0; i < bp.parts.size(); ++i) {
    double wp = 0.0, wb = 0.0;
    for (Vertex u : bp.parts[i])
      if (u < n) wp += g.weight(u);
    for (Vertex u : bp.buffers[i])
      if (u < n) wb += g.weight(u);
    if (!(wb <= bp.epsilon * wp)) {
      std::ostringstream os;
      os.precision(17);
      os << "condition 4 (buffer budget): w(B" << i + 1 << ") = " << wb << " > eps * w(P" << i + 1
         << ") = " << bp.epsilon * wp;
      add(4, static_cast<long>(i), -1, os.str());
    }
  }
  return rep;
}

struct CutReport {
  std::vector<double> per_part_expansion;
  double max_expansion = 0.0;
  std::vector<double> buffer_ratios;
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
};

// Requires conditions 1-3; budget violations are reported, not thrown.
inline CutReport partition_cost(const Graph& g, const BufferedPartition& bp) {
  ValidationReport v = validate_partition(g, bp);
  CutReport rep;
  for (const Violation& x : v.violations) {
    if (x.condition != 4) throw PreconditionError("invalid partition: " + x.message);
    rep.violations.push_back(x);
  }
  for (std::size_t i = 0; i < bp.parts.size(); ++i) {
    double phi = buffered_expansion(g, bp.parts[i], bp.buffers[i]);
    rep.per_part_expansion.push_back(phi);
    rep.max_expansion = std::max(rep.max_expansion, phi);
    rep.buffer_ratios.push_back(set_weight(g, bp.buffers[i]) / set_weight(g, bp.parts[i]));
  }
  return rep;
}

struct Subgraph {
  Graph graph;
  VertexSet to_parent;
};

// Induced subgraph keeping the parent's vertex weights and edge costs.
inline Subgraph induced_subgraph(const Graph& g, std::span<const Vertex> s) {
  Subgraph out;
  out.to_parent = sorted_set(VertexSet(s.begin(), s.end()));
  std::vector<long> local(g.n(), -1);
  for (std::size_t i = 0; i < out.to_parent.size(); ++i) local[out.to_parent[i]] = static_cast<long>(i);
  std::vector<Edge> edges;
  std::vector<double> w;
  w.reserve(out.to_parent.size());
  for (Vertex u : out.to_parent) {
    w.push_back(g.weight(u));
    for (const Arc& a : g.neighbors(u)) {
      if (a.to > u && local[a.to] >= 0)
        edges.push_back(Edge{static_cast<Vertex>(local[u]), static_cast<Vertex>(local[a.to]), a.cost});
    }
  }
  out.graph = Graph(out.to_parent.size(), std::move(edges), std::move(w));
  return out;
}

// Connected components, each sorted, ordered by smallest vertex.
inline std::vector<VertexSet> connected_components(const Graph& g) {
  std::vector<long> comp(g.n(), -1);
  std::vector<VertexSet> out;
  std::vector<Vertex> stack;
  for (std::size_t s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    long id = static_cast<long>(out.size());
    out.emplace_back();
    comp[s] = id;
    stack.push_back(static_cast<Vertex>(s));
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      out.back().push_back(u);
      for (const Arc& a : g.neighbors(u)) {
        if (comp[a.to] < 0) {
          comp[a.to] = id;
          stack.push_back(a.to);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

}  // namespace bufpart
