#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "certify.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "partitioner.hpp"
#include "spectral.hpp"

namespace bufpart {

struct DriverParams {
  std::size_t k = 0;
  std::size_t k_hat = 0;           // floor((1 + delta) k)
  std::size_t tuples_expected = 0; // ceil((1 - 2 delta_hat) k_hat)
  double epsilon = 0.0;
  double delta = 0.0;
  double delta_hat = 0.0;
  double delta_prime = 0.0;        // (k' - k + 1) / k'
  double eps_hat = 0.0;            // eps delta' / 54
  PartialParams partial;
};

inline DriverParams driver_params(std::size_t k, double eps, double delta) {
  if (k < 2) throw PreconditionError("buffered_k_partition: k must be at least 2");
  if (!(eps >= 0.0 && eps < 1.0)) throw PreconditionError("buffered_k_partition: epsilon must lie in [0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("buffered_k_partition: delta must lie in (0,1)");
  DriverParams p;
  p.k = k;
  p.epsilon = eps;
  p.delta = delta;
  p.k_hat = k_hat_of(k, delta);
  p.delta_hat = std::min((1.0 - 1.0 / std::sqrt(1.0 + delta)) / 2.0, 1.0 / 80.0);
  p.tuples_expected =
      static_cast<std::size_t>(std::ceil((1.0 - 2.0 * p.delta_hat) * static_cast<double>(p.k_hat) - 1e-12));
  p.tuples_expected = std::max(p.tuples_expected, k);
  p.delta_prime = static_cast<double>(p.tuples_expected - k + 1) / static_cast<double>(p.tuples_expected);
  p.eps_hat = eps * p.delta_prime / 54.0;
  p.partial = adjust_partial_params(p.k_hat, p.eps_hat, p.delta_hat);
  return p;
}

struct RestartOutcome {
  std::size_t restart = 0;
  bool accepted = false;
  std::string reason;
  std::size_t tuples = 0;
  double max_phi = std::numeric_limits<double>::infinity();
  CrudeCheck crude_check;
  std::size_t r_b_prime_size = 0;
  double r_b_prime_weight = 0.0;
  std::size_t rounds = 0;
  std::size_t rejected_rounds = 0;
};

class GuaranteeError : public Error {
 public:
  GuaranteeError(const std::string& what, std::vector<RestartOutcome> r) : Error(what), restarts(std::move(r)) {}
  std::vector<RestartOutcome> restarts;
};

struct DriverResult {
  BufferedPartition partition;
  CutReport report;
  Certificate certificate;
  DriverParams params;
  std::vector<double> eigenvalues;
  std::string solver;
  PartialPartition partial;
  std::size_t selected_restart = 0;
  std::vector<RestartOutcome> restarts;
  std::vector<std::string> warnings;
  bool calibration_capped = false;
  double separator_threshold = 0.0;
  double separator_threshold_exact = 0.0;
};

inline DriverResult buffered_k_partition(const Graph& g, std::size_t k, double eps, double delta,
                                         const AlgoConstants& consts = {}, std::uint64_t seed = 0) {
  consts.check();
  DriverResult res;
  res.params = driver_params(k, eps, delta);
  const DriverParams& dp = res.params;
  if (dp.k_hat > g.n()) throw PreconditionError("buffered_k_partition: floor((1+delta)k) exceeds the vertex count");
  res.warnings = dp.partial.warnings;
  EigenOptions eo;
  eo.seed = seed;
  SpectralBasis basis = eigenbasis(g, dp.k_hat, eo);
  Embedding e = embed(basis, g);
  res.eigenvalues = basis.eigenvalues;
  res.solver = basis.solver;

  const std::size_t R = static_cast<std::size_t>(consts.max_restarts);
  std::vector<PartialRun> runs(R);
  std::vector<BufferedPartition> finals(R);
  res.restarts.resize(R);
  RefineOptions ropt;
  ropt.buffer_ratio_limit = eps;
  parallel_for(R, [&](std::size_t r) {
    PartialRun run = partial_attempt(g, e, dp.partial, consts, seed, r, ropt);
    RestartOutcome& o = res.restarts[r];
    o.restart = r;
    o.crude_check = run.crude_check;
    o.tuples = run.partial.tuples.size();
    o.r_b_prime_size = run.partial.r_b_prime.size();
    o.r_b_prime_weight = set_weight(g, run.partial.r_b_prime);
    o.rounds = run.crude.rounds.size();
    o.rejected_rounds = run.crude.rejected_rounds;
    std::string why;
    if (!partial_is_partition(run.partial, g.n(), &why)) throw Error("partial partition invariant broken: " + why);
    if (!run.crude_check.pass) {
      o.reason = "crude buffer check failed (|R_B| + sum|B~_t| > 16 eps n)";
    } else if (run.partial.tuples.size() < k) {
      o.reason = "only " + std::to_string(run.partial.tuples.size()) + " tuples survived, need " + std::to_string(k);
    } else {
      BufferedPartition bp = complete_partition(run.partial, g, k);
      bp.epsilon = eps;
      ValidationReport v = validate_partition(g, bp);
      if (!v.valid) {
        o.reason = "completed partition invalid: " + v.violations[0].message;
      } else {
        o.accepted = true;
        o.max_phi = partition_cost(g, bp).max_expansion;
        finals[r] = std::move(bp);
      }
    }
    runs[r] = std::move(run);
  });

  bool have = false;
  for (std::size_t r = 0; r < R; ++r) {
    if (!res.restarts[r].accepted) continue;
    if (!have || res.restarts[r].max_phi < res.restarts[res.selected_restart].max_phi) {
      res.selected_restart = r;
      have = true;
    }
  }
  if (!have) {
    std::string msg = "buffered_k_partition: no restart produced a valid partition (" + std::to_string(R) + " tried)";
    if (!res.restarts.empty()) msg += "; first failure: " + res.restarts[0].reason;
    throw GuaranteeError(msg, res.restarts);
  }
  res.partition = std::move(finals[res.selected_restart]);
  res.partial = std::move(runs[res.selected_restart].partial);
  const CrudePartition& c = runs[res.selected_restart].crude;
  res.calibration_capped = c.separator.capped;
  res.separator_threshold = c.separator.t;
  res.separator_threshold_exact = c.separator.t_exact;
  res.report = partition_cost(g, res.partition);
  res.certificate = certify_run(g, k, eps, delta, res.partition, basis);
  return res;
}

}  // namespace bufpart
