#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"
#include "orthoseps.hpp"
#include "rng.hpp"
#include "spectral.hpp"

namespace bufpart {

enum class FilterMode { theory, keep_best };

inline const char* to_string(FilterMode m) { return m == FilterMode::theory ? "theory" : "keep-best"; }

struct AlgoConstants {
  std::optional<double> c_prime;         // default 192 / delta
  std::optional<double> c_double_prime;  // default 10 / delta
  int max_restarts = 8;
  double separator_threshold_cap = 2.0;
  std::size_t max_rounds = 1000000;
  FilterMode filter = FilterMode::theory;
  std::string source = "theory-free practical defaults";

  double c_prime_at(double delta) const { return c_prime ? *c_prime : 192.0 / delta; }
  double c_double_prime_at(double delta) const { return c_double_prime ? *c_double_prime : 10.0 / delta; }

  void check() const {
    if (c_prime && !(*c_prime > 0.0)) throw PreconditionError("c_prime must be positive");
    if (c_double_prime && !(*c_double_prime > 0.0)) throw PreconditionError("c_double_prime must be positive");
    if (max_restarts < 1) throw PreconditionError("max_restarts must be at least 1");
    if (!(separator_threshold_cap > 0.0)) throw PreconditionError("separator_threshold_cap must be positive");
  }
};

struct PartialParams {
  std::size_t k = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double epsilon_requested = 0.0;
  double delta_requested = 0.0;
  std::vector<std::string> warnings;
};

// eps is clamped to delta, delta is raised to 1/(3k).
inline PartialParams adjust_partial_params(std::size_t k, double eps, double delta) {
  if (k < 2) throw PreconditionError("partial partitioning needs k > 1");
  if (!(eps >= 0.0 && eps < 1.0)) throw PreconditionError("epsilon must lie in [0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0,1)");
  PartialParams p{k, eps, delta, eps, delta, {}};
  if (p.epsilon > p.delta) {
    p.epsilon = p.delta;
    p.warnings.push_back("epsilon clamped to delta");
  }
  double floor = 1.0 / (3.0 * static_cast<double>(k));
  if (p.delta < floor) {
    p.delta = floor;
    p.warnings.push_back("delta raised to 1/(3k)");
  }
  if (p.delta >= 1.0 / 80.0) p.warnings.push_back("delta is not below 1/80 after adjustment");
  return p;
}

struct CrudeRound {
  VertexSet x, y, z;
  VertexSet p_tilde, b_tilde;
  bool rejected = false;
};

struct CrudePartition {
  std::vector<CrudeRound> rounds;
  VertexSet sigma, gamma, r_p, r_b;
  SeparatorParams separator;
  double radius = 0.0;
  double delta_prime = 0.0;
  std::size_t planned_rounds = 0;
  std::size_t rejected_rounds = 0;
};

// Bookkeeping over T rounds of the two-buffer separator on psi with measure mu.
inline CrudePartition crude_partition(const Embedding& e, std::size_t k, double eps, double delta, Stream& rng,
                                      const AlgoConstants& consts = {}) {
  if (k < 1) throw PreconditionError("crude_partition: k must be positive");
  const std::size_t n = e.n;
  CrudePartition c;
  c.radius = std::sqrt(delta / 6.0);
  c.delta_prime = delta / (2.0 * static_cast<double>(k));
  c.separator = calibrate_capped(eps, 2.0 / c.delta_prime, c.radius, consts.separator_threshold_cap);
  double T = std::ceil((2.0 / c.separator.alpha) * std::log(1.0 / delta));
  if (!(T <= static_cast<double>(consts.max_rounds)))
    throw CalibrationError("crude_partition: round count exceeds max_rounds");
  c.planned_rounds = static_cast<std::size_t>(std::max(T, 1.0));
  VectorView v{e.psi.data(), n, e.dim};
  require_unit_vectors(v);
  Mask xi(n, 0), sigma(n, 0), gamma(n, 0);
  std::size_t covered = 0;  // |Sigma u Gamma|
  for (std::size_t t = 0; t < c.planned_rounds && covered < n; ++t) {
    SeparatorSample s = detail::sample_with_rejection(v, e.mu, c.separator, c.delta_prime, rng, true);
    CrudeRound r;
    r.rejected = s.rejected;
    if (s.rejected) ++c.rejected_rounds;
    for (Vertex u : s.x)
      if (!xi[u]) r.p_tilde.push_back(u);
    for (Vertex u : r.p_tilde) {
      sigma[u] = 1;
      ++covered;
    }
    VertexSet xy = set_union(s.x, s.y);
    for (Vertex u : xy)
      if (!sigma[u] && !gamma[u]) r.b_tilde.push_back(u);
    for (Vertex u : r.b_tilde) {
      gamma[u] = 1;
      ++covered;
    }
    for (const VertexSet* set : {&s.x, &s.y, &s.z})
      for (Vertex u : *set) xi[u] = 1;
    r.x = std::move(s.x);
    r.y = std::move(s.y);
    r.z = std::move(s.z);
    c.rounds.push_back(std::move(r));
  }
  for (std::size_t u = 0; u < n; ++u) {
    auto uu = static_cast<Vertex>(u);
    if (sigma[u]) c.sigma.push_back(uu);
    else if (gamma[u]) c.gamma.push_back(uu);
    else if (!xi[u]) c.r_p.push_back(uu);
    else c.r_b.push_back(uu);
  }
  return c;
}

struct EtaCosts {
  std::vector<double> eta;        // eta(P~_t) per round
  std::vector<double> eta_tilde;  // eta~(P~_t u B~_t) per round
  double eta_total = 0.0;
  double eta_tilde_total = 0.0;
};

inline double zhat_sq(const Embedding& e, Vertex u) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.dim; ++i) s += e.zhat_row(u)[i] * e.zhat_row(u)[i];
  return s;
}

inline double zhat_dist_sq(const Embedding& e, Vertex u, Vertex v) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.dim; ++i) {
    double d = e.zhat_row(u)[i] - e.zhat_row(v)[i];
    s += d * d;
  }
  return s;
}

// Diagnostic edge costs, cost-weighted, on z_hat vectors.
inline EtaCosts eta_costs(const CrudePartition& c, const Embedding& e, const Graph& g, double eps) {
  const std::size_t n = g.n();
  EtaCosts out;
  std::vector<long> owner(n, -1);  // round index of P~ or B~ containing u
  std::vector<std::uint8_t> in_p(n, 0);
  for (std::size_t t = 0; t < c.rounds.size(); ++t) {
    for (Vertex u : c.rounds[t].p_tilde) {
      owner[u] = static_cast<long>(t);
      in_p[u] = 1;
    }
    for (Vertex u : c.rounds[t].b_tilde) owner[u] = static_cast<long>(t);
  }
  Mask sigma_prev(n, 0), xyz(n, 0);
  for (std::size_t t = 0; t < c.rounds.size(); ++t) {
    const CrudeRound& r = c.rounds[t];
    double eta = 0.0;
    for (Vertex u : r.p_tilde) {
      for (const Arc& a : g.neighbors(u)) {
        if (owner[a.to] == static_cast<long>(t)) {
          eta += a.cost * (eps > 0.0 ? zhat_dist_sq(e, u, a.to) / eps : std::numeric_limits<double>::infinity());
        } else {
          eta += a.cost * zhat_sq(e, u);
        }
      }
    }
    for (const VertexSet* s : {&r.x, &r.y, &r.z})
      for (Vertex u : *s) xyz[u] = 1;
    double eta_t = 0.0;
    for (const VertexSet* s : {&r.p_tilde, &r.b_tilde}) {
      for (Vertex u : *s) {
        for (const Arc& a : g.neighbors(u)) {
          bool inside = xyz[a.to] && !sigma_prev[a.to];
          if (!inside) eta_t += a.cost * zhat_sq(e, u);
        }
      }
    }
    for (const VertexSet* s : {&r.x, &r.y, &r.z})
      for (Vertex u : *s) xyz[u] = 0;
    for (Vertex u : r.p_tilde) sigma_prev[u] = 1;
    out.eta.push_back(eta);
    out.eta_tilde.push_back(eta_t);
    out.eta_total += eta;
    out.eta_tilde_total += eta_t;
  }
  return out;
}

enum class Role : std::uint8_t { none = 0, core, buffer, a_double_prime, a_prime };

// Role of a P~ vertex with measure mu at threshold r.
inline Role tilde_p_role(double mu, double r, double eps) {
  if (mu >= r) return Role::core;
  if (mu >= r / (1.0 + eps)) return Role::buffer;
  if (mu > r / ((1.0 + eps) * (1.0 + eps))) return Role::a_double_prime;
  return Role::a_prime;
}

inline Role tilde_b_role(double mu, double r, double eps) { return mu >= r / (1.0 + eps) ? Role::buffer : Role::none; }

struct PartialTuple {
  VertexSet p, b, a_prime, a_double_prime;
  double r = 0.0;
  double phi = 0.0;
  std::size_t round = 0;
  double buffer_weight = 0.0;
  double a_double_prime_weight = 0.0;
  double a_prime_cut = 0.0;     // delta(A', P u B)
  double leftover_cut = 0.0;    // delta(P u B, (Sigma_T u R_P) \ P~_t)
};

struct PartialPartition {
  std::vector<PartialTuple> tuples;
  VertexSet r_p_prime, r_b_prime;
  std::size_t k = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double lambda_k = 0.0;
  double c_prime = 0.0;
  double c_double_prime = 0.0;
  double phi_bound = 0.0;         // (C''/eps) lambda_k ln k
  double buffer_ratio_cap = 0.0;  // effective buffer multiplier in the feasibility filter
  std::size_t rounds_considered = 0;
  std::size_t infeasible_rounds = 0;
  std::size_t above_phi_bound = 0;  // tuples over phi_bound
  std::size_t discarded = 0;        // tuples actually discarded
  std::string filter_mode;
};

struct RefineOptions {
  double buffer_ratio_limit = std::numeric_limits<double>::infinity();
};

inline PartialPartition refine_and_discard(const CrudePartition& c, const Embedding& e, const Graph& g, std::size_t k,
                                           double eps, double delta, const AlgoConstants& consts = {},
                                           const RefineOptions& ropt = {}) {
  const std::size_t n = g.n();
  if (e.eigenvalues.size() < k) throw PreconditionError("refine_and_discard: embedding has fewer than k eigenvalues");
  PartialPartition pp;
  pp.k = k;
  pp.epsilon = eps;
  pp.delta = delta;
  pp.lambda_k = std::max(0.0, e.eigenvalues[k - 1]);
  pp.c_prime = consts.c_prime_at(delta);
  pp.c_double_prime = consts.c_double_prime_at(delta);
  pp.filter_mode = to_string(consts.filter);
  const double logk = std::log(static_cast<double>(k));
  pp.phi_bound = eps > 0.0 ? pp.c_double_prime / eps * pp.lambda_k * logk : std::numeric_limits<double>::infinity();
  pp.buffer_ratio_cap = std::min(pp.c_prime * eps, ropt.buffer_ratio_limit);
  const double cut_bound = pp.phi_bound;
  pp.r_p_prime = c.r_p;
  pp.r_b_prime = c.r_b;

  Mask sigma_rp(n, 0);
  for (Vertex u : c.sigma) sigma_rp[u] = 1;
  for (Vertex u : c.r_p) sigma_rp[u] = 1;
  std::vector<Role> role(n, Role::none);
  Mask in_pt(n, 0);

  for (std::size_t t = 0; t < c.rounds.size(); ++t) {
    const CrudeRound& rd = c.rounds[t];
    if (rd.p_tilde.empty()) {
      pp.r_b_prime.insert(pp.r_b_prime.end(), rd.b_tilde.begin(), rd.b_tilde.end());
      continue;
    }
    ++pp.rounds_considered;
    for (Vertex u : rd.p_tilde) in_pt[u] = 1;
    std::vector<double> cand;
    double top = 0.0;
    for (Vertex u : rd.p_tilde) {
      cand.push_back(e.mu[u]);
      top = std::max(top, e.mu[u]);
    }
    for (Vertex u : rd.b_tilde) cand.push_back(e.mu[u]);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    bool found = false;
    PartialTuple best;
    double best_wp = 0.0;
    for (double r : cand) {
      if (r > top) break;  // P would be empty
      double wp = 0.0, wb = 0.0, wa2 = 0.0;
      for (Vertex u : rd.p_tilde) {
        role[u] = tilde_p_role(e.mu[u], r, eps);
        if (role[u] == Role::core) wp += g.weight(u);
        else if (role[u] == Role::buffer) wb += g.weight(u);
        else if (role[u] == Role::a_double_prime) wa2 += g.weight(u);
      }
      for (Vertex u : rd.b_tilde) {
        role[u] = tilde_b_role(e.mu[u], r, eps);
        if (role[u] == Role::buffer) wb += g.weight(u);
      }
      double out = 0.0, a1cut = 0.0, left = 0.0;
      for (Vertex u : rd.p_tilde) {
        Role ru = role[u];
        for (const Arc& a : g.neighbors(u)) {
          Role rv = role[a.to];
          bool v_pb = rv == Role::core || rv == Role::buffer;
          if (ru == Role::core && !v_pb) out += a.cost;
          if (ru == Role::a_prime && v_pb) a1cut += a.cost;
          if ((ru == Role::core || ru == Role::buffer) && sigma_rp[a.to] && !in_pt[a.to]) left += a.cost;
        }
      }
      for (Vertex u : rd.b_tilde) {
        if (role[u] != Role::buffer) continue;
        for (const Arc& a : g.neighbors(u))
          if (sigma_rp[a.to] && !in_pt[a.to]) left += a.cost;
      }
      bool feasible = wp > 0.0 && wb <= pp.buffer_ratio_cap * wp && wa2 <= 10.0 * eps * wp &&
                      a1cut <= cut_bound * wp && left <= cut_bound * wp;
      if (feasible) {
        double phi = out / wp;
        bool better = !found || phi < best.phi || (phi == best.phi && wp > best_wp);
        if (better) {
          found = true;
          best_wp = wp;
          best.r = r;
          best.phi = phi;
          best.buffer_weight = wb;
          best.a_double_prime_weight = wa2;
          best.a_prime_cut = a1cut;
          best.leftover_cut = left;
        }
      }
      for (Vertex u : rd.p_tilde) role[u] = Role::none;
      for (Vertex u : rd.b_tilde) role[u] = Role::none;
    }

    bool keep = found;
    if (found) {
      best.round = t;
      for (Vertex u : rd.p_tilde) {
        switch (tilde_p_role(e.mu[u], best.r, eps)) {
          case Role::core: best.p.push_back(u); break;
          case Role::buffer: best.b.push_back(u); break;
          case Role::a_double_prime: best.a_double_prime.push_back(u); break;
          default: best.a_prime.push_back(u); break;
        }
      }
      VertexSet b_left;
      for (Vertex u : rd.b_tilde) {
        if (tilde_b_role(e.mu[u], best.r, eps) == Role::buffer) best.b.push_back(u);
        else b_left.push_back(u);
      }
      std::sort(best.b.begin(), best.b.end());
      bool above = best.phi > pp.phi_bound;
      if (above) ++pp.above_phi_bound;
      if (above && consts.filter == FilterMode::theory) {
        keep = false;
        ++pp.discarded;
      } else {
        pp.r_b_prime.insert(pp.r_b_prime.end(), b_left.begin(), b_left.end());
        pp.tuples.push_back(std::move(best));
      }
    } else {
      ++pp.infeasible_rounds;
    }
    if (!keep) {
      pp.r_p_prime.insert(pp.r_p_prime.end(), rd.p_tilde.begin(), rd.p_tilde.end());
      pp.r_b_prime.insert(pp.r_b_prime.end(), rd.b_tilde.begin(), rd.b_tilde.end());
    }
    for (Vertex u : rd.p_tilde) in_pt[u] = 0;
  }
  std::sort(pp.r_p_prime.begin(), pp.r_p_prime.end());
  std::sort(pp.r_b_prime.begin(), pp.r_b_prime.end());
  return pp;
}

// All sets of the partial partition are pairwise disjoint and cover V.
inline bool partial_is_partition(const PartialPartition& pp, std::size_t n, std::string* why = nullptr) {
  std::vector<std::uint8_t> seen(n, 0);
  auto mark = [&](const VertexSet& s) {
    for (Vertex u : s) {
      if (u >= n || seen[u]) {
        if (why) *why = "vertex " + std::to_string(u) + " repeated or out of range";
        return false;
      }
      seen[u] = 1;
    }
    return true;
  };
  for (const auto& t : pp.tuples) {
    if (t.p.empty()) {
      if (why) *why = "empty core in surviving tuple";
      return false;
    }
    if (!mark(t.p) || !mark(t.b) || !mark(t.a_prime) || !mark(t.a_double_prime)) return false;
  }
  if (!mark(pp.r_p_prime) || !mark(pp.r_b_prime)) return false;
  for (std::size_t u = 0; u < n; ++u) {
    if (!seen[u]) {
      if (why) *why = "vertex " + std::to_string(u) + " not covered";
      return false;
    }
  }
  return true;
}

struct CrudeCheck {
  double count = 0.0;   // |R_B| + sum |B~_t|
  double weight = 0.0;  // weighted analogue
  double count_limit = 0.0;
  double weight_limit = 0.0;
  bool pass = false;
};

inline CrudeCheck check_crude(const CrudePartition& c, const Graph& g, double eps) {
  CrudeCheck s;
  s.count = static_cast<double>(c.r_b.size() + c.gamma.size());
  s.weight = set_weight(g, c.r_b) + set_weight(g, c.gamma);
  s.count_limit = 16.0 * eps * static_cast<double>(g.n());
  s.weight_limit = 16.0 * eps * g.total_weight();
  s.pass = s.count <= s.count_limit && s.weight <= s.weight_limit;
  return s;
}

struct PartialRun {
  PartialPartition partial;
  CrudePartition crude;
  CrudeCheck crude_check;
  std::size_t restart = 0;
};

// One crude-partition, filter and cleanup attempt on a fixed embedding.
inline PartialRun partial_attempt(const Graph& g, const Embedding& e, const PartialParams& pr,
                                  const AlgoConstants& consts, std::uint64_t seed, std::size_t restart,
                                  const RefineOptions& ropt = {}) {
  Stream rng(seed, StreamTag::partition, restart);
  PartialRun run;
  run.restart = restart;
  run.crude = crude_partition(e, pr.k, pr.epsilon, pr.delta, rng, consts);
  run.crude_check = check_crude(run.crude, g, pr.epsilon);
  run.partial = refine_and_discard(run.crude, e, g, pr.k, pr.epsilon, pr.delta, consts, ropt);
  return run;
}

inline double max_tuple_phi(const PartialPartition& pp) {
  double m = 0.0;
  for (const auto& t : pp.tuples) m = std::max(m, t.phi);
  return m;
}

struct PartialResult {
  PartialPartition partial;
  PartialParams params;
  std::size_t attempts = 0;
  std::size_t crude_failures = 0;
  std::size_t selected_restart = 0;
  double required_tuples = 0.0;  // (1 - 2 delta) k
  std::vector<std::string> warnings;
};

// Composition with restarts; selection key (#tuples desc, max phi asc).
inline PartialResult partial_partition(const Graph& g, std::size_t k, double eps, double delta,
                                       const AlgoConstants& consts = {}, std::uint64_t seed = 0) {
  consts.check();
  PartialResult res;
  res.params = adjust_partial_params(k, eps, delta);
  if (k > g.n()) throw PreconditionError("partial_partition: k exceeds vertex count");
  res.warnings = res.params.warnings;
  double wmax = *std::max_element(g.weights().begin(), g.weights().end());
  if (wmax > res.params.epsilon * g.total_weight() / (3.0 * static_cast<double>(k)))
    res.warnings.push_back("max vertex weight exceeds eps w(V)/(3k); weighted guarantee not covered");
  EigenOptions eo;
  eo.seed = seed;
  SpectralBasis basis = eigenbasis(g, k, eo);
  Embedding e = embed(basis, g);
  res.required_tuples = (1.0 - 2.0 * res.params.delta) * static_cast<double>(k);
  bool have = false;
  for (int r = 0; r < consts.max_restarts; ++r) {
    PartialRun run = partial_attempt(g, e, res.params, consts, seed, static_cast<std::size_t>(r));
    ++res.attempts;
    if (!run.crude_check.pass) {
      ++res.crude_failures;
      continue;
    }
    std::string why;
    if (!partial_is_partition(run.partial, g.n(), &why)) throw Error("partial partition invariant broken: " + why);
    bool better = !have || run.partial.tuples.size() > res.partial.tuples.size() ||
                  (run.partial.tuples.size() == res.partial.tuples.size() &&
                   max_tuple_phi(run.partial) < max_tuple_phi(res.partial));
    if (better) {
      res.partial = std::move(run.partial);
      res.selected_restart = static_cast<std::size_t>(r);
      have = true;
    }
  }
  if (!have)
    throw Error("partial_partition: all " + std::to_string(res.attempts) +
                " restarts failed the |R_B| + sum|B~_t| <= 16 eps n check");
  return res;
}

// Conversion to exactly k_target parts: the k_target-1 lightest tuples stay, everything else merges into one part.
inline BufferedPartition complete_partition(const PartialPartition& pp, const Graph& g, std::size_t k_target) {
  if (k_target < 1) throw PreconditionError("complete_partition: k_target must be positive");
  if (k_target > pp.tuples.size())
    throw PreconditionError("complete_partition: only " + std::to_string(pp.tuples.size()) +
                            " tuples for k_target=" + std::to_string(k_target) + "; rerun with larger delta slack");
  std::vector<std::size_t> order(pp.tuples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> wp(pp.tuples.size());
  for (std::size_t i = 0; i < wp.size(); ++i) wp[i] = set_weight(g, pp.tuples[i].p);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return wp[a] < wp[b]; });
  BufferedPartition bp;
  for (std::size_t j = 0; j + 1 < k_target; ++j) {
    bp.parts.push_back(pp.tuples[order[j]].p);
    bp.buffers.push_back(pp.tuples[order[j]].b);
  }
  VertexSet last_p = pp.r_p_prime, last_b = pp.r_b_prime;
  for (std::size_t j = 0; j < order.size(); ++j) {
    const PartialTuple& t = pp.tuples[order[j]];
    last_p.insert(last_p.end(), t.a_prime.begin(), t.a_prime.end());
    last_b.insert(last_b.end(), t.a_double_prime.begin(), t.a_double_prime.end());
    if (j + 1 >= k_target) {
      last_p.insert(last_p.end(), t.p.begin(), t.p.end());
      last_b.insert(last_b.end(), t.b.begin(), t.b.end());
    }
  }
  std::sort(last_p.begin(), last_p.end());
  std::sort(last_b.begin(), last_b.end());
  bp.parts.push_back(std::move(last_p));
  bp.buffers.push_back(std::move(last_b));
  double eps = 0.0;
  for (std::size_t i = 0; i < bp.parts.size(); ++i)
    eps = std::max(eps, set_weight(g, bp.buffers[i]) / set_weight(g, bp.parts[i]));
  bp.epsilon = eps;
  return bp;
}

// Merge the heaviest k' - k_target + 1 parts and their buffers.
inline BufferedPartition merge_tail(const BufferedPartition& bp, const Graph& g, std::size_t k_target) {
  if (k_target < 1) throw PreconditionError("merge_tail: k_target must be positive");
  if (k_target > bp.k()) throw PreconditionError("merge_tail: k_target exceeds the number of parts");
  std::vector<std::size_t> order(bp.k());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> wp(bp.k());
  for (std::size_t i = 0; i < wp.size(); ++i) wp[i] = set_weight(g, bp.parts[i]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return wp[a] < wp[b]; });
  BufferedPartition out;
  out.epsilon = bp.epsilon;
  for (std::size_t j = 0; j + 1 < k_target; ++j) {
    out.parts.push_back(bp.parts[order[j]]);
    out.buffers.push_back(bp.buffers[order[j]]);
  }
  VertexSet p, b;
  for (std::size_t j = k_target - 1; j < order.size(); ++j) {
    p.insert(p.end(), bp.parts[order[j]].begin(), bp.parts[order[j]].end());
    b.insert(b.end(), bp.buffers[order[j]].begin(), bp.buffers[order[j]].end());
  }
  std::sort(p.begin(), p.end());
  std::sort(b.begin(), b.end());
  out.parts.push_back(std::move(p));
  out.buffers.push_back(std::move(b));
  return out;
}

}  // namespace bufpart
