#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "bufpart/certify.hpp"
#include "support/generators.hpp"

using namespace bufpart;

namespace {

Graph k_components(std::size_t k) { return testgen::cliques(k, 3); }

BufferedPartition component_partition(const Graph& g) {
  BufferedPartition bp;
  for (auto& c : connected_components(g)) {
    bp.parts.push_back(c);
    bp.buffers.emplace_back();
  }
  return bp;
}

// Random valid buffered partition with every part nonempty; epsilon is set to the largest buffer ratio.
BufferedPartition random_partition(const Graph& g, std::size_t k, Stream& r) {
  const std::size_t n = g.n();
  for (;;) {
    BufferedPartition bp;
    bp.parts.resize(k);
    bp.buffers.resize(k);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[r.below(i + 1)]);
    for (std::size_t i = 0; i < n; ++i) {
      auto u = static_cast<Vertex>(perm[i]);
      std::size_t p = i < k ? i : r.below(k);
      bool buf = i >= k && r.uniform() < 0.25;
      (buf ? bp.buffers[p] : bp.parts[p]).push_back(u);
    }
    double eps = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      std::sort(bp.parts[i].begin(), bp.parts[i].end());
      std::sort(bp.buffers[i].begin(), bp.buffers[i].end());
      eps = std::max(eps, set_weight(g, bp.buffers[i]) / set_weight(g, bp.parts[i]));
    }
    eps = std::nextafter(eps, 2.0);
    if (eps >= 1.0) continue;
    bp.epsilon = eps;
    return bp;
  }
}

std::vector<Graph> tiny_suite() {
  std::vector<Graph> gs{testgen::complete(4), testgen::complete(5), testgen::cycle(6), testgen::path(5),
                        testgen::two_triangles_bridge(), testgen::cycle(8)};
  for (std::uint64_t s = 0; s < 6; ++s) gs.push_back(testgen::small_connected(6 + s % 3, 0.35, s));
  return gs;
}

}  // namespace

TEST(LowerBound, K4MatchesBruteForce) {
  Graph g = testgen::complete(4);
  EXPECT_NEAR(lower_bound_unbuffered(g, 2), 2.0 / 3.0, 1e-12);
  BruteForceResult b = brute_force_h_k_eps(g, 2, 0.0);
  EXPECT_NEAR(b.value, 2.0 / 3.0, 1e-12);
  ASSERT_EQ(b.witness.k(), 2u);
  EXPECT_EQ(b.witness.parts[0].size(), 2u);
  EXPECT_TRUE(b.witness.buffers[0].empty() && b.witness.buffers[1].empty());
  EXPECT_THROW(lower_bound_unbuffered(g, 1), PreconditionError);
  EXPECT_THROW(lower_bound_unbuffered(g, 5), PreconditionError);
}

TEST(LowerBound, ComponentsGiveZero) {
  for (std::size_t k : {2u, 3u}) {
    Graph g = k_components(k);
    EXPECT_NEAR(lower_bound_unbuffered(g, k), 0.0, 1e-12);
    for (double eps : {0.0, 0.5}) EXPECT_EQ(brute_force_h_k_eps(g, k, eps).value, 0.0);
    BufferedLowerBoundCheck c = check_buffered_lower_bound(g, component_partition(g), k);
    EXPECT_TRUE(c.pass);
    EXPECT_NEAR(c.slack, 0.0, 1e-12);
  }
}

TEST(BruteForce, MonotoneInEpsilonAndWitnessValid) {
  for (const Graph& g : tiny_suite())
    for (std::size_t k : {2u, 3u}) {
      double prev = std::numeric_limits<double>::infinity();
      for (double eps : {0.0, 0.25, 0.5}) {
        BruteForceResult b = brute_force_h_k_eps(g, k, eps);
        EXPECT_LE(b.value, prev + 1e-15);
        prev = b.value;
        BufferedPartition w = b.witness;
        w.epsilon = eps;
        ValidationReport v = validate_partition(g, w);
        EXPECT_TRUE(v.valid);
        EXPECT_NEAR(partition_cost(g, w).max_expansion, b.value, 1e-12);
      }
    }
}

TEST(BruteForce, ThreadCountDoesNotMatter) {
  Graph g = testgen::small_connected(8, 0.4, 9);
  BruteForceResult a = brute_force_h_k_eps(g, 3, 0.25, 10, 1);
  BruteForceResult b = brute_force_h_k_eps(g, 3, 0.25, 10, 4);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.witness.parts, b.witness.parts);
  EXPECT_EQ(a.witness.buffers, b.witness.buffers);
  EXPECT_THROW(brute_force_h_k_eps(testgen::path(11), 2, 0.0), PreconditionError);
}

TEST(LowerBound, SandwichOnTinyGraphs) {
  for (const Graph& g : tiny_suite())
    for (std::size_t k : {2u, 3u}) {
      double lk = eigenbasis(g, k).eigenvalues[k - 1];
      EXPECT_LE(lk / 2 - 1e-9, brute_force_h_k_eps(g, k, 0.0).value);
      for (double eps : {0.0, 0.25, 0.5}) EXPECT_LE(lk, 2 * brute_force_h_k_eps(g, k, eps).value + eps + 1e-9);
    }
}

TEST(BufferedCheck, RandomPartitionsAlwaysPass) {
  Stream r(7, StreamTag::check);
  std::size_t applies = 0;
  for (int i = 0; i < 10000; ++i) {
    std::size_t n = 4 + r.below(9);
    Graph g = testgen::small_connected(n, 0.3, static_cast<std::uint64_t>(i), i % 2 == 0);
    std::size_t k = 2 + r.below(std::min<std::size_t>(3, n - 1));
    BufferedPartition bp = random_partition(g, k, r);
    double lk = eigenbasis(g, k).eigenvalues[k - 1];
    BufferedLowerBoundCheck c = check_buffered_lower_bound(g, bp, lk);
    EXPECT_TRUE(c.rayleigh_pass) << i;
    if (c.lower_bound_applies) {
      ++applies;
      EXPECT_TRUE(c.pass) << i << " " << c.message;
    }
  }
  EXPECT_EQ(applies, 10000u);
}

TEST(BufferedCheck, RejectsInvalidPartition) {
  Graph g = testgen::complete(4);
  BufferedPartition bp{{{0, 1}, {1, 2, 3}}, {{}, {}}, 0.0};
  EXPECT_THROW(check_buffered_lower_bound(g, bp, 1.0), PreconditionError);
  BufferedPartition ok{{{0, 1}, {2, 3}}, {{}, {}}, 0.0};
  EXPECT_THROW(check_buffered_lower_bound(g, ok, std::size_t{3}), PreconditionError);
}

TEST(RobustExpansion, K4Examples) {
  Graph g = testgen::complete(4);
  RobustExpansion a = robust_expansion(g, {0}, 1.0 / 3.0);
  EXPECT_EQ(a.n_eta, 2u);
  EXPECT_EQ(a.phi_v, 2.0);
  EXPECT_EQ(a.total_cut, 3.0);
  RobustExpansion b = robust_expansion(g, {0}, 1.0);
  EXPECT_EQ(b.n_eta, 0u);
  EXPECT_EQ(robust_expansion_exhaustive(g, {0}, 1.0 / 3.0).n_eta, 2u);
  EXPECT_THROW(robust_expansion(g, {}, 0.5), PreconditionError);
  EXPECT_THROW(robust_expansion(g, {0, 1, 2, 3}, 0.5), PreconditionError);
  EXPECT_THROW(robust_expansion(g, {0}, 1.5), PreconditionError);
}

TEST(RobustExpansion, GreedyEqualsExhaustive) {
  Stream r(3, StreamTag::check);
  for (int i = 0; i < 400; ++i) {
    std::size_t n = 3 + r.below(6);
    Graph g = testgen::small_connected(n, 0.4, 100 + static_cast<std::uint64_t>(i), i % 3 != 0);
    VertexSet s;
    for (std::size_t u = 0; u < n; ++u)
      if (r.uniform() < 0.4) s.push_back(static_cast<Vertex>(u));
    if (s.empty() || s.size() == n) continue;
    for (double eta : {0.0, 0.1, 1.0 / 3.0, 0.5, 0.9, 1.0}) {
      RobustExpansion a = robust_expansion(g, s, eta);
      RobustExpansion b = robust_expansion_exhaustive(g, s, eta);
      EXPECT_EQ(a.n_eta, b.n_eta) << i << " " << eta;
      double sum = 0;
      for (Vertex v : a.t) sum += cut_cost(g, s, VertexSet{v});
      EXPECT_GE(sum, a.target - 1e-9);
    }
  }
}

TEST(RobustExpansion, FittedSpectralConstant) {
  double fitted = std::numeric_limits<double>::infinity();
  const double eta = 0.25;
  for (const Graph& g : tiny_suite()) {
    const std::size_t n = g.n();
    double lambda2 = eigenbasis(g, 2).eigenvalues[1];
    double h = brute_force_h_k_eps(g, 2, 0.0).value;
    double phi_v = std::numeric_limits<double>::infinity();
    for (std::uint32_t m = 1; m + 1 < (1u << n); ++m) {
      VertexSet s;
      for (std::size_t u = 0; u < n; ++u)
        if (m >> u & 1u) s.push_back(static_cast<Vertex>(u));
      if (2 * s.size() > n) continue;
      phi_v = std::min(phi_v, robust_expansion(g, s, eta).phi_v);
    }
    ASSERT_GT(h * phi_v, 0.0);
    fitted = std::min(fitted, lambda2 / (eta * h * phi_v));
  }
  RecordProperty("fitted_constant", std::to_string(fitted));
  EXPECT_GT(fitted, 0.0);
  EXPECT_TRUE(std::isfinite(fitted));
}

TEST(Certificate, ZeroCostGivesZeroRatio) {
  Graph g = k_components(3);
  SpectralBasis basis = eigenbasis(g, 4);
  Certificate c = certify_run(g, 3, 0.1, 0.5, component_partition(g), basis);
  EXPECT_EQ(c.k_hat, 4u);
  EXPECT_EQ(c.achieved_cost, 0.0);
  ASSERT_TRUE(c.approx_ratio.has_value());
  EXPECT_EQ(*c.approx_ratio, 0.0);
  EXPECT_TRUE(c.lower_bound_buffered_check);
  EXPECT_EQ(c.lower_bound_unbuffered, c.lambda_k / 2);
  EXPECT_FALSE(c.brute_force_optimum.has_value());
  EXPECT_EQ(c.log_base, "natural");
}

TEST(Certificate, SmallGraphBruteForceBelowAchieved) {
  Graph g = testgen::two_triangles_bridge();
  SpectralBasis basis = eigenbasis(g, 3);
  BufferedPartition bp{{{0, 1, 2}, {3, 4, 5}}, {{}, {}}, 0.0};
  Certificate c = certify_run(g, 2, 0.1, 0.5, bp, basis);
  ASSERT_TRUE(c.brute_force_optimum.has_value());
  EXPECT_GE(c.achieved_cost + 1e-12, *c.brute_force_optimum);
  EXPECT_NEAR(c.achieved_cost, 1.0 / 7.0, 1e-12);
  ASSERT_TRUE(c.approx_ratio.has_value());
  EXPECT_NEAR(*c.approx_ratio, c.achieved_cost * 0.1 / (c.lambda_k_hat * std::log(3.0)), 1e-12);
  EXPECT_THROW(certify_run(g, 2, 0.1, 0.5, bp, eigenbasis(g, 2)), PreconditionError);
}
