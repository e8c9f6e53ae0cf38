#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "graph.hpp"
#include "spectral.hpp"

namespace bufpart {

struct BufferedCut {
  VertexSet s, t, b;
  double cut = 0.0;           // delta(S, T)
  double phi = 0.0;           // delta(S, T) / min(w(S), w(T))
  double phi_s = 0.0;         // delta(S, T) / w(S)
  double buffer_ratio = 0.0;  // w(B) / min(w(S), w(T))
  double threshold = 0.0;
  double lambda2 = 0.0;
  double epsilon = 0.0;
  double internal_epsilon = 0.0;
  bool disconnected = false;
  std::vector<double> u;  // thresholding vector, |u|_inf = 1
};

namespace detail {

inline double laplacian_form(const Graph& g, const std::vector<double>& x) {
  double s = 0.0;
  for (const Edge& e : g.edges()) {
    double d = x[e.u] - x[e.v];
    s += e.cost * d * d;
  }
  return s;
}

inline double weighted_norm_sq(const Graph& g, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += g.weight(static_cast<Vertex>(i)) * x[i] * x[i];
  return s;
}

inline void finish_cut(const Graph& g, BufferedCut& c) {
  c.cut = cut_cost(g, c.s, c.t);
  double ws = set_weight(g, c.s), wt = set_weight(g, c.t), wb = set_weight(g, c.b);
  c.phi_s = c.cut / ws;
  c.phi = c.cut / std::min(ws, wt);
  c.buffer_ratio = wb / std::min(ws, wt);
}

}  // namespace detail

// Two-threshold rule at eps/2 on the split second eigenvector; the minimum-phi threshold with
// w(B) <= eps w(S) is returned.
inline BufferedCut cheeger2_buffered(const Graph& g, double eps, const EigenOptions& eo = {}) {
  const std::size_t n = g.n();
  if (n < 2) throw PreconditionError("cheeger2_buffered: need at least two vertices");
  if (!(eps > 0.0 && eps < 0.25)) throw PreconditionError("cheeger2_buffered: epsilon must lie in (0, 1/4)");
  BufferedCut c;
  c.epsilon = eps;
  c.internal_epsilon = eps / 2.0;
  auto comps = connected_components(g);
  if (comps.size() > 1) {
    std::size_t light = 0;
    double wl = set_weight(g, comps[0]);
    for (std::size_t i = 1; i < comps.size(); ++i) {
      double w = set_weight(g, comps[i]);
      if (w < wl) {
        wl = w;
        light = i;
      }
    }
    c.disconnected = true;
    c.s = comps[light];
    c.t = complement(n, c.s);
    c.lambda2 = 0.0;
    c.threshold = std::numeric_limits<double>::quiet_NaN();
    detail::finish_cut(g, c);
    return c;
  }
  SpectralBasis basis = eigenbasis(g, 2, eo);
  c.lambda2 = basis.eigenvalues[1];
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = basis.eigenvectors[1][i] / std::sqrt(g.weight(static_cast<Vertex>(i)));

  // weighted median: smallest z with w({v > z}) <= W/2
  std::vector<std::size_t> ord(n);
  for (std::size_t i = 0; i < n; ++i) ord[i] = i;
  std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b] || (v[a] == v[b] && a < b); });
  const double W = g.total_weight();
  double z = v[ord[n - 1]];
  double below = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    below += g.weight(static_cast<Vertex>(ord[i]));
    if (i + 1 < n && v[ord[i + 1]] == v[ord[i]]) continue;
    if (W - below <= W / 2.0) {
      z = v[ord[i]];
      break;
    }
  }
  std::vector<double> vp(n, 0.0), vm(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] >= z) vp[i] = v[i] - z;
    else vm[i] = z - v[i];
  }
  struct Cand {
    std::vector<double>* x;
    double rq;
    bool ok;
  };
  std::vector<Cand> cands;
  for (auto* x : {&vp, &vm}) {
    double den = detail::weighted_norm_sq(g, *x);
    if (!(den > 0.0)) continue;
    double num = detail::laplacian_form(g, *x);
    cands.push_back(Cand{x, num / den, num <= c.lambda2 * den * (1.0 + 1e-12) + 1e-300});
  }
  if (cands.empty()) throw Error("cheeger2_buffered: second eigenvector is constant");
  const Cand* pick = nullptr;
  for (const auto& cd : cands)
    if (cd.ok && (!pick || cd.rq < pick->rq)) pick = &cd;
  if (!pick)
    for (const auto& cd : cands)
      if (!pick || cd.rq < pick->rq) pick = &cd;
  std::vector<double> u = *pick->x;
  double mx = *std::max_element(u.begin(), u.end());
  for (double& x : u) x /= mx;

  const double ei = c.internal_epsilon;
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = u[i] * u[i];
  std::vector<std::size_t> qs(n);
  for (std::size_t i = 0; i < n; ++i) qs[i] = i;
  std::sort(qs.begin(), qs.end(), [&](std::size_t a, std::size_t b) { return q[a] < q[b] || (q[a] == q[b] && a < b); });
  std::vector<double> thr;
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i] < 1.0) thr.push_back(q[i]);
    if ((1.0 + ei) * q[i] < 1.0) thr.push_back((1.0 + ei) * q[i]);
  }
  std::sort(thr.begin(), thr.end());
  thr.erase(std::unique(thr.begin(), thr.end()), thr.end());

  enum : std::uint8_t { S = 0, B = 1, T = 2 };
  std::vector<std::uint8_t> st(n, S);
  double ws = W, wb = 0.0, cut = 0.0;
  std::size_t ps = 0, pt = 0;
  bool found = false;
  double best_phi = 0.0, best_ws = 0.0, best_t = 0.0;
  for (double t : thr) {
    while (ps < n && q[qs[ps]] <= t) {
      std::size_t x = qs[ps++];
      for (const Arc& a : g.neighbors(static_cast<Vertex>(x)))
        if (st[a.to] == T) cut -= a.cost;
      st[x] = B;
      ws -= g.weight(static_cast<Vertex>(x));
      wb += g.weight(static_cast<Vertex>(x));
    }
    while (pt < ps && q[qs[pt]] <= t / (1.0 + ei)) {
      std::size_t x = qs[pt++];
      for (const Arc& a : g.neighbors(static_cast<Vertex>(x)))
        if (st[a.to] == S) cut += a.cost;
      st[x] = T;
      wb -= g.weight(static_cast<Vertex>(x));
    }
    if (!(ws > 0.0)) continue;
    if (!(wb <= 2.0 * ei * ws)) continue;
    double phi = std::max(cut, 0.0) / ws;
    if (!found || phi < best_phi || (phi == best_phi && ws > best_ws)) {
      found = true;
      best_phi = phi;
      best_ws = ws;
      best_t = t;
    }
  }
  if (!found) throw Error("cheeger2_buffered: no feasible threshold");
  c.threshold = best_t;
  for (std::size_t i = 0; i < n; ++i) {
    auto x = static_cast<Vertex>(i);
    if (q[i] > best_t) c.s.push_back(x);
    else if (q[i] <= best_t / (1.0 + ei)) c.t.push_back(x);
    else c.b.push_back(x);
  }
  c.u = std::move(u);
  detail::finish_cut(g, c);
  return c;
}

struct BalancedCut {
  VertexSet l, r, b;
  double cut = 0.0;  // delta(L, R)
  double weight_l = 0.0, weight_r = 0.0, weight_b = 0.0, total_weight = 0.0;
  double buffer_ratio = 0.0;  // w(B) / min(w(L), w(R))
  std::vector<double> per_level_lambda2;
  std::vector<double> per_level_phi;
  bool balanced = false;
  bool buffer_ok = false;
  bool per_level_bound_ok = true;
  std::vector<std::string> violations;
};

inline BalancedCut buffered_balanced_cut(const Graph& g, double eps, const EigenOptions& eo = {}) {
  if (g.n() < 2) throw PreconditionError("buffered_balanced_cut: need at least two vertices");
  if (!(eps > 0.0 && eps < 0.25)) throw PreconditionError("buffered_balanced_cut: epsilon must lie in (0, 1/4)");
  BalancedCut out;
  const double W = g.total_weight();
  out.total_weight = W;
  VertexSet remaining(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) remaining[i] = static_cast<Vertex>(i);
  double wl = 0.0;
  while (wl < W / 4.0) {
    if (remaining.size() < 2) {
      out.violations.push_back("remaining subgraph has fewer than two vertices before balance was reached");
      break;
    }
    Subgraph sub = induced_subgraph(g, remaining);
    BufferedCut c = cheeger2_buffered(sub.graph, eps, eo);
    out.per_level_lambda2.push_back(c.lambda2);
    out.per_level_phi.push_back(c.phi_s);
    if (!(c.phi_s <= 4.0 * (1.0 + 2.0 / eps) * c.lambda2 + 1e-12)) out.per_level_bound_ok = false;
    for (Vertex x : c.s) out.l.push_back(sub.to_parent[x]);
    for (Vertex x : c.b) out.b.push_back(sub.to_parent[x]);
    VertexSet next;
    for (Vertex x : c.t) next.push_back(sub.to_parent[x]);
    remaining = std::move(next);
    wl = set_weight(g, out.l);
  }
  std::sort(out.l.begin(), out.l.end());
  std::sort(out.b.begin(), out.b.end());
  out.r = remaining;
  out.weight_l = set_weight(g, out.l);
  out.weight_r = set_weight(g, out.r);
  out.weight_b = set_weight(g, out.b);
  out.cut = (out.l.empty() || out.r.empty()) ? 0.0 : cut_cost(g, out.l, out.r);
  double mn = std::min(out.weight_l, out.weight_r);
  out.buffer_ratio = mn > 0.0 ? out.weight_b / mn : std::numeric_limits<double>::infinity();
  out.balanced = out.weight_l >= W / 4.0 && out.weight_l <= 3.0 * W / 4.0 && out.weight_r >= W / 4.0 &&
                 out.weight_r <= 3.0 * W / 4.0;
  out.buffer_ok = out.weight_b <= 3.0 * eps * mn;
  if (!out.balanced) out.violations.push_back("w(L) or w(R) outside [W/4, 3W/4]");
  if (!out.buffer_ok) out.violations.push_back("w(B) exceeds 3 eps min(w(L), w(R))");
  return out;
}

struct KwayBalanced {
  std::vector<VertexSet> parts;
  VertexSet buffer;
  double crossing_cost = 0.0;     // sum over i<j of delta(P_i, P_j)
  double buffer_fraction = 0.0;   // w(B) / w(V)
  double max_part_ratio = 0.0;    // max_i w(P_i) / (w(V)/k)
  bool balanced = false;          // every w(P_i) <= 6 w(V)/k
  std::vector<std::string> violations;
};

namespace detail {

inline void kway_split(const Graph& g, const VertexSet& set, std::size_t k, double eps, const EigenOptions& eo,
                       KwayBalanced& out) {
  if (k == 1) {
    out.parts.push_back(set);
    return;
  }
  if (set.size() < k) throw PreconditionError("kway_balanced: subproblem has fewer vertices than parts");
  Subgraph sub = induced_subgraph(g, set);
  BalancedCut bc = buffered_balanced_cut(sub.graph, eps, eo);
  for (const auto& v : bc.violations) out.violations.push_back(v);
  VertexSet l, r;
  for (Vertex x : bc.l) l.push_back(sub.to_parent[x]);
  for (Vertex x : bc.r) r.push_back(sub.to_parent[x]);
  for (Vertex x : bc.b) out.buffer.push_back(sub.to_parent[x]);
  double wl = bc.weight_l, wr = bc.weight_r;
  // part count for L minimizing the larger per-part load; ties favour ceil(k/2) on the heavier side
  std::size_t heavy_share = (k + 1) / 2;
  std::size_t kl_default = wl >= wr ? heavy_share : k - heavy_share;
  std::size_t best = kl_default;
  double best_load = std::max(wl / static_cast<double>(kl_default), wr / static_cast<double>(k - kl_default));
  for (std::size_t kl = 1; kl < k; ++kl) {
    double load = std::max(wl / static_cast<double>(kl), wr / static_cast<double>(k - kl));
    if (load < best_load) {
      best_load = load;
      best = kl;
    }
  }
  kway_split(g, l, best, eps, eo, out);
  kway_split(g, r, k - best, eps, eo, out);
}

}  // namespace detail

inline KwayBalanced kway_balanced(const Graph& g, std::size_t k, double eps, const EigenOptions& eo = {}) {
  if (k < 1) throw PreconditionError("kway_balanced: k must be positive");
  if (!(eps > 0.0 && eps < 0.25)) throw PreconditionError("kway_balanced: epsilon must lie in (0, 1/4)");
  KwayBalanced out;
  VertexSet all(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) all[i] = static_cast<Vertex>(i);
  detail::kway_split(g, all, k, eps, eo, out);
  std::sort(out.buffer.begin(), out.buffer.end());
  const double W = g.total_weight();
  std::vector<long> label(g.n(), -1);
  for (std::size_t i = 0; i < out.parts.size(); ++i)
    for (Vertex u : out.parts[i]) label[u] = static_cast<long>(i);
  for (const Edge& e : g.edges())
    if (label[e.u] >= 0 && label[e.v] >= 0 && label[e.u] != label[e.v]) out.crossing_cost += e.cost;
  out.buffer_fraction = set_weight(g, out.buffer) / W;
  out.balanced = true;
  for (const auto& p : out.parts) {
    double w = set_weight(g, p);
    out.max_part_ratio = std::max(out.max_part_ratio, w / (W / static_cast<double>(k)));
    if (!(w <= 6.0 * W / static_cast<double>(k))) out.balanced = false;
  }
  if (!out.balanced) out.violations.push_back("some part exceeds 6 w(V)/k");
  return out;
}

}  // namespace bufpart
