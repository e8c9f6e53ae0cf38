#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"
#include "parallel.hpp"
#include "spectral.hpp"

namespace bufpart {

inline double lower_bound_unbuffered(const Graph& g, std::size_t k, const EigenOptions& eo = {}) {
  if (k < 2 || k > g.n()) throw PreconditionError("lower_bound_unbuffered: need 2 <= k <= n");
  SpectralBasis b = eigenbasis(g, k, eo);
  return b.eigenvalues[k - 1] / 2.0;
}

// w_u >= sum of incident costs for every u
inline bool weights_dominate_degrees(const Graph& g) {
  for (std::size_t u = 0; u < g.n(); ++u)
    if (g.weight(static_cast<Vertex>(u)) < g.incident_cost(static_cast<Vertex>(u))) return false;
  return true;
}

struct BufferedLowerBoundCheck {
  double lambda_k = 0.0;
  double phi = 0.0;
  double epsilon = 0.0;
  double rhs = 0.0;    // 2 phi + eps
  double slack = 0.0;  // rhs - lambda_k
  bool pass = false;
  bool lower_bound_applies = false;
  double rayleigh_bound = 0.0;  // max_i (2 delta(P_i, out) + delta(P_i, B_i)) / w(P_i)
  bool rayleigh_pass = false;
  std::string message;
};

inline BufferedLowerBoundCheck check_buffered_lower_bound(const Graph& g, const BufferedPartition& bp, double lambda_k,
                                                          double tol = 1e-9) {
  ValidationReport v = validate_partition(g, bp);
  if (!v.valid) throw PreconditionError("check_buffered_lower_bound: invalid partition: " + v.violations[0].message);
  BufferedLowerBoundCheck c;
  c.lambda_k = lambda_k;
  c.epsilon = bp.epsilon;
  c.lower_bound_applies = weights_dominate_degrees(g);
  const std::size_t n = g.n();
  for (std::size_t i = 0; i < bp.k(); ++i) {
    Mask in_p = make_mask(n, bp.parts[i]), in_b = make_mask(n, bp.buffers[i]);
    double out = 0.0, tob = 0.0;
    for (Vertex u : bp.parts[i])
      for (const Arc& a : g.neighbors(u)) {
        if (in_b[a.to]) tob += a.cost;
        else if (!in_p[a.to]) out += a.cost;
      }
    double wp = set_weight(g, bp.parts[i]);
    c.phi = std::max(c.phi, out / wp);
    c.rayleigh_bound = std::max(c.rayleigh_bound, (2.0 * out + tob) / wp);
  }
  c.rhs = 2.0 * c.phi + c.epsilon;
  c.slack = c.rhs - lambda_k;
  c.pass = lambda_k <= c.rhs + tol;
  c.rayleigh_pass = lambda_k <= c.rayleigh_bound + tol;
  if (!c.rayleigh_pass)
    c.message = "lambda_k exceeds the Rayleigh-quotient bound of the partition: implementation bug";
  else if (c.lower_bound_applies && !c.pass)
    c.message = "lambda_k > 2 phi + eps although w_u >= incident cost everywhere: implementation bug";
  else if (!c.lower_bound_applies)
    c.message = "some w_u below incident cost; 2 phi + eps bound not guaranteed, Rayleigh bound checked instead";
  return c;
}

inline BufferedLowerBoundCheck check_buffered_lower_bound(const Graph& g, const BufferedPartition& bp, std::size_t k,
                                                          const EigenOptions& eo = {}) {
  if (k != bp.k()) throw PreconditionError("check_buffered_lower_bound: k differs from the number of parts");
  if (k > g.n()) throw PreconditionError("check_buffered_lower_bound: k exceeds n");
  SpectralBasis b = eigenbasis(g, k, eo);
  return check_buffered_lower_bound(g, bp, b.eigenvalues[k - 1]);
}

struct BruteForceResult {
  double value = std::numeric_limits<double>::infinity();
  BufferedPartition witness;
  std::uint64_t leaves = 0;
};

namespace detail {

class BruteSearch {
 public:
  BruteSearch(const Graph& g, std::size_t k, double eps)
      : g_(g), n_(g.n()), k_(k), eps_(eps), label_(g.n(), 0), wp_(k), wb_(k), cut_(k) {}

  // labels: 2p core of part p, 2p+1 buffer of part p
  std::vector<std::vector<std::uint32_t>> prefixes(std::size_t depth) const {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
    expand_prefix(cur, 0, depth, out);
    return out;
  }

  void run(const std::vector<std::uint32_t>& prefix) {
    std::size_t used = 0;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      label_[i] = prefix[i];
      used = std::max<std::size_t>(used, prefix[i] / 2 + 1);
    }
    dfs(prefix.size(), used);
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> best_label;
  std::uint64_t leaves = 0;

 private:
  bool allow_buffer() const { return eps_ > 0.0; }

  void expand_prefix(std::vector<std::uint32_t>& cur, std::size_t used, std::size_t depth,
                     std::vector<std::vector<std::uint32_t>>& out) const {
    if (cur.size() == depth) {
      out.push_back(cur);
      return;
    }
    std::size_t v = cur.size();
    std::size_t lim = std::min(used + 1, k_);
    for (std::size_t p = 0; p < lim; ++p)
      for (std::uint32_t side = 0; side < (allow_buffer() ? 2u : 1u); ++side) {
        std::size_t nu = std::max(used, p + 1);
        if (n_ - v - 1 < k_ - nu) continue;
        cur.push_back(static_cast<std::uint32_t>(2 * p + side));
        expand_prefix(cur, nu, depth, out);
        cur.pop_back();
      }
  }

  void dfs(std::size_t v, std::size_t used) {
    if (v == n_) {
      leaf();
      return;
    }
    std::size_t lim = std::min(used + 1, k_);
    for (std::size_t p = 0; p < lim; ++p)
      for (std::uint32_t side = 0; side < (allow_buffer() ? 2u : 1u); ++side) {
        std::size_t nu = std::max(used, p + 1);
        if (n_ - v - 1 < k_ - nu) continue;
        label_[v] = static_cast<std::uint32_t>(2 * p + side);
        dfs(v + 1, nu);
      }
  }

  void leaf() {
    ++leaves;
    std::fill(wp_.begin(), wp_.end(), 0.0);
    std::fill(wb_.begin(), wb_.end(), 0.0);
    std::fill(cut_.begin(), cut_.end(), 0.0);
    for (std::size_t u = 0; u < n_; ++u) {
      double w = g_.weight(static_cast<Vertex>(u));
      if (label_[u] % 2 == 0) wp_[label_[u] / 2] += w;
      else wb_[label_[u] / 2] += w;
    }
    for (std::size_t p = 0; p < k_; ++p)
      if (!(wp_[p] > 0.0) || !(wb_[p] <= eps_ * wp_[p])) return;
    for (const Edge& e : g_.edges()) {
      std::uint32_t a = label_[e.u], b = label_[e.v];
      if (a / 2 == b / 2) continue;
      if (a % 2 == 0) cut_[a / 2] += e.cost;
      if (b % 2 == 0) cut_[b / 2] += e.cost;
    }
    double phi = 0.0;
    for (std::size_t p = 0; p < k_; ++p) phi = std::max(phi, cut_[p] / wp_[p]);
    if (phi < best) {
      best = phi;
      best_label = label_;
    }
  }

  const Graph& g_;
  std::size_t n_, k_;
  double eps_;
  std::vector<std::uint32_t> label_;
  std::vector<double> wp_, wb_, cut_;
};

}  // namespace detail

// Exact h^{k,eps} over all assignments V -> {core, buffer} x {1..k}, part labels in first-appearance order.
inline BruteForceResult brute_force_h_k_eps(const Graph& g, std::size_t k, double eps, std::size_t cap = 10,
                                            std::size_t threads = 0) {
  const std::size_t n = g.n();
  if (n > cap) throw PreconditionError("brute_force_h_k_eps: n = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  if (k < 1 || k > n) throw PreconditionError("brute_force_h_k_eps: need 1 <= k <= n");
  if (!(eps >= 0.0 && eps < 1.0)) throw PreconditionError("brute_force_h_k_eps: epsilon must lie in [0,1)");
  detail::BruteSearch proto(g, k, eps);
  auto pre = proto.prefixes(std::min<std::size_t>(2, n));
  std::vector<detail::BruteSearch> runs(pre.size(), proto);
  parallel_for(
      pre.size(), [&](std::size_t i) { runs[i].run(pre[i]); }, threads ? threads : thread_count());
  BruteForceResult res;
  const std::vector<std::uint32_t>* lab = nullptr;
  for (const auto& r : runs) {
    res.leaves += r.leaves;
    if (r.best < res.value) {
      res.value = r.best;
      lab = &r.best_label;
    }
  }
  if (!lab) throw Error("brute_force_h_k_eps: no feasible buffered partition");
  res.witness.epsilon = eps;
  res.witness.parts.assign(k, {});
  res.witness.buffers.assign(k, {});
  for (std::size_t u = 0; u < n; ++u) {
    std::uint32_t l = (*lab)[u];
    (l % 2 == 0 ? res.witness.parts : res.witness.buffers)[l / 2].push_back(static_cast<Vertex>(u));
  }
  return res;
}

struct RobustExpansion {
  std::size_t n_eta = 0;
  double phi_v = 0.0;       // n_eta / |S|
  double target = 0.0;      // (1 - eta) delta(S, V \ S)
  double total_cut = 0.0;   // delta(S, V \ S)
  VertexSet t;
};

namespace detail {

inline bool reaches(double sum, double target, double total) { return sum >= target - 1e-12 * total; }

inline std::vector<double> cost_into(const Graph& g, const VertexSet& s, Mask& in_s) {
  in_s = make_mask(g.n(), s);
  std::vector<double> c(g.n(), 0.0);
  for (Vertex u : s)
    for (const Arc& a : g.neighbors(u))
      if (!in_s[a.to]) c[a.to] += a.cost;
  return c;
}

inline void check_robust_args(const Graph& g, const VertexSet& s, double eta) {
  if (s.empty() || s.size() >= g.n()) throw PreconditionError("robust_expansion: S must be a nonempty proper subset");
  for (Vertex u : s)
    if (u >= g.n()) throw PreconditionError("robust_expansion: vertex out of range");
  if (!(eta >= 0.0 && eta <= 1.0)) throw PreconditionError("robust_expansion: eta must lie in [0,1]");
}

}  // namespace detail

inline RobustExpansion robust_expansion(const Graph& g, const VertexSet& s, double eta) {
  detail::check_robust_args(g, s, eta);
  Mask in_s;
  std::vector<double> c = detail::cost_into(g, s, in_s);
  RobustExpansion r;
  std::vector<Vertex> cand;
  for (std::size_t v = 0; v < g.n(); ++v)
    if (!in_s[v] && c[v] > 0.0) {
      cand.push_back(static_cast<Vertex>(v));
      r.total_cut += c[v];
    }
  r.target = (1.0 - eta) * r.total_cut;
  std::stable_sort(cand.begin(), cand.end(), [&](Vertex a, Vertex b) { return c[a] > c[b]; });
  double sum = 0.0;
  for (Vertex v : cand) {
    if (detail::reaches(sum, r.target, r.total_cut)) break;
    sum += c[v];
    r.t.push_back(v);
  }
  std::sort(r.t.begin(), r.t.end());
  r.n_eta = r.t.size();
  r.phi_v = static_cast<double>(r.n_eta) / static_cast<double>(s.size());
  return r;
}

// Enumerates every subset of V \ S; same acceptance rule as the greedy version.
inline RobustExpansion robust_expansion_exhaustive(const Graph& g, const VertexSet& s, double eta) {
  detail::check_robust_args(g, s, eta);
  Mask in_s;
  std::vector<double> c = detail::cost_into(g, s, in_s);
  std::vector<Vertex> rest;
  RobustExpansion r;
  for (std::size_t v = 0; v < g.n(); ++v)
    if (!in_s[v]) {
      rest.push_back(static_cast<Vertex>(v));
      r.total_cut += c[v];
    }
  if (rest.size() > 24) throw PreconditionError("robust_expansion_exhaustive: too many outside vertices");
  r.target = (1.0 - eta) * r.total_cut;
  std::size_t best = rest.size() + 1;
  std::uint32_t best_mask = 0;
  for (std::uint32_t m = 0; m < (1u << rest.size()); ++m) {
    std::size_t cnt = static_cast<std::size_t>(__builtin_popcount(m));
    if (cnt >= best) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < rest.size(); ++i)
      if (m >> i & 1u) sum += c[rest[i]];
    if (detail::reaches(sum, r.target, r.total_cut)) {
      best = cnt;
      best_mask = m;
    }
  }
  for (std::size_t i = 0; i < rest.size(); ++i)
    if (best_mask >> i & 1u) r.t.push_back(rest[i]);
  r.n_eta = best;
  r.phi_v = static_cast<double>(best) / static_cast<double>(s.size());
  return r;
}

struct Certificate {
  std::size_t k = 0;
  std::size_t k_hat = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double lambda_k = 0.0;
  double lambda_k_hat = 0.0;
  double achieved_cost = 0.0;
  double lower_bound_unbuffered = 0.0;
  bool lower_bound_buffered_check = false;
  BufferedLowerBoundCheck buffered_check;
  std::optional<double> approx_ratio;  // achieved * eps / (lambda_khat * ln khat)
  std::optional<double> brute_force_optimum;
  std::string log_base = "natural";
};

inline std::size_t k_hat_of(std::size_t k, double delta) {
  return static_cast<std::size_t>(std::floor((1.0 + delta) * static_cast<double>(k)));
}

inline Certificate certify_run(const Graph& g, std::size_t k, double eps, double delta, const BufferedPartition& part,
                               const SpectralBasis& basis, std::size_t brute_cap = 8) {
  Certificate c;
  c.k = k;
  c.epsilon = eps;
  c.delta = delta;
  c.k_hat = std::min(k_hat_of(k, delta), g.n());
  if (k < 1 || basis.eigenvalues.size() < std::max(k, c.k_hat))
    throw PreconditionError("certify_run: spectral basis has fewer than max(k, k_hat) eigenvalues");
  c.lambda_k = basis.eigenvalues[k - 1];
  c.lambda_k_hat = basis.eigenvalues[c.k_hat - 1];
  c.lower_bound_unbuffered = c.lambda_k / 2.0;
  BufferedPartition p = part;
  p.epsilon = std::max(part.epsilon, eps);
  CutReport rep = partition_cost(g, p);
  c.achieved_cost = rep.max_expansion;
  if (part.k() == k) {
    c.buffered_check = check_buffered_lower_bound(g, p, c.lambda_k);
    c.lower_bound_buffered_check = c.buffered_check.pass;
  }
  if (c.achieved_cost == 0.0) c.approx_ratio = 0.0;
  else if (c.lambda_k_hat > 1e-12 && c.k_hat >= 2)
    c.approx_ratio = c.achieved_cost * eps / (c.lambda_k_hat * std::log(static_cast<double>(c.k_hat)));
  if (g.n() <= brute_cap && k <= g.n()) c.brute_force_optimum = brute_force_h_k_eps(g, k, eps, brute_cap).value;
  return c;
}

}  // namespace bufpart
