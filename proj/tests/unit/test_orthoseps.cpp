#include <gtest/gtest.h>

#include <cmath>

#include "bufpart/gaussian.hpp"
#include "bufpart/orthoseps.hpp"
#include "support/quadrature.hpp"

using namespace bufpart;

TEST(GaussianTail, ExactValuesAndQuadrature) {
  EXPECT_EQ(gaussian_tail(0.0), 0.5);
  EXPECT_NEAR(gaussian_tail(1.6449), 0.05, 1e-4);
  for (double t : {-3.0, -1.0, 0.0, 0.3, 1.0, 2.5, 4.0, 6.0})
    EXPECT_NEAR(gaussian_tail(t), testquad::tail(t), 1e-14) << t;
  for (double t : {8.0, 12.0, 20.0})
    EXPECT_NEAR(gaussian_tail(t) / testquad::tail(t), 1.0, 1e-10) << t;
}

TEST(GaussianTail, Sandwich) {
  for (double t : {0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
    EXPECT_LT(gaussian_tail_lower(t), gaussian_tail(t));
    EXPECT_LT(gaussian_tail(t), gaussian_tail_upper(t));
  }
}

TEST(GaussianTail, LogTailIsContinuousAcrossBranches) {
  for (double t : {29.999, 30.0, 30.001}) EXPECT_NEAR(log_gaussian_tail(t), std::log(gaussian_tail(t)), 1e-9);
  EXPECT_NEAR(log_gaussian_tail(-8.0), std::log1p(-gaussian_tail(8.0)), 1e-18);
  EXPECT_TRUE(std::isfinite(log_gaussian_tail(100.0)));
  for (double t : {40.0, 100.0}) {
    double lu = log_normal_pdf(t) - std::log(t);
    double ll = log_normal_pdf(t) + std::log(t / (t * t + 1));
    EXPECT_LT(log_gaussian_tail(t), lu);
    EXPECT_GT(log_gaussian_tail(t), ll);
  }
}

TEST(GaussianTail, InverseRoundTrip) {
  for (double p : {1e-300, 1e-100, 1e-20, 1e-8, 1e-3, 0.05, 0.2, 0.3, 0.5, 0.6, 0.9, 0.999, 1 - 1e-9}) {
    double t = gaussian_tail_inv(p);
    EXPECT_LE(std::abs(gaussian_tail(t) - p), 1e-12) << p;
    if (p >= 1e-250) EXPECT_NEAR(std::log(gaussian_tail(t)), std::log(p), 1e-10) << p;
  }
  EXPECT_NEAR(gaussian_tail_inv(0.05), 1.6448536269514722, 1e-12);
  EXPECT_THROW(gaussian_tail_inv(0.0), DomainError);
  EXPECT_THROW(gaussian_tail_inv(1.0), DomainError);
  EXPECT_THROW(gaussian_tail_inv(-0.1), DomainError);
}

TEST(Calibrate, CertificateHoldsUnderQuadrature) {
  for (double m : {3.0, 10.0, 16.0, 100.0})
    for (double r : {0.3, 0.5, 1.0, 1.5}) {
      SeparatorParams p = calibrate(0.2, m, r);
      double s = std::sqrt(1 - r * r / 4);
      EXPECT_LE(m * testquad::tail(p.t / s), testquad::tail(p.t) * (1 + 1e-9)) << m << " " << r;
      EXPECT_GT(m * gaussian_tail(p.t * 0.999 / s), gaussian_tail(p.t * 0.999));
      EXPECT_NEAR(p.alpha, gaussian_tail(p.t), 1e-12 * p.alpha);
      EXPECT_LT(p.eps_prime, p.t);
      EXPECT_NEAR(p.eps_prime, 0.2 / (std::exp(1.0) * (p.t + 1 / p.t)), 1e-15);
    }
}

TEST(Calibrate, BufferWidthFormulaAndMonotonicity) {
  EXPECT_NEAR(separator_params_at(0.1, 3, 0.5, 1.0).eps_prime, 0.1 / (2 * std::exp(1.0)), 1e-15);
  EXPECT_NEAR(separator_params_at(0.1, 3, 0.5, 1.0).eps_prime, 0.0183939, 1e-7);
  for (double r : {0.4, 0.8, 1.2}) EXPECT_GE(calibrate(0.1, 10, r).t, calibrate(0.1, 3, r).t);
}

TEST(Calibrate, ErrorsAndCap) {
  EXPECT_THROW(calibrate(1.0, 3, 0.5), PreconditionError);
  EXPECT_THROW(calibrate(0.1, 2, 0.5), PreconditionError);
  EXPECT_THROW(calibrate(0.1, 3, 2.0), PreconditionError);
  EXPECT_THROW(calibrate(0.1, 1e6, 0.05), CalibrationError);
  SeparatorParams c = calibrate_capped(0.1, 1e6, 0.05, 2.0);
  EXPECT_TRUE(c.capped);
  EXPECT_EQ(c.t, 2.0);
  SeparatorParams e = calibrate_capped(0.1, 3, 1.5, 10.0);
  EXPECT_FALSE(e.capped);
  EXPECT_EQ(e.t, calibrate(0.1, 3, 1.5).t);
}

namespace {

std::vector<double> unit_cloud(std::size_t count, std::size_t dim, std::uint64_t seed) {
  Stream r(seed, StreamTag::check);
  std::vector<double> v(count * dim);
  for (std::size_t i = 0; i < count; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < dim; ++j) s += (v[i * dim + j] = r.normal()) * v[i * dim + j];
    for (std::size_t j = 0; j < dim; ++j) v[i * dim + j] /= std::sqrt(s);
  }
  return v;
}

}  // namespace

TEST(Separator, IntervalStructureAndReplay) {
  auto data = unit_cloud(40, 6, 1);
  VectorView v{data.data(), 40, 6};
  std::vector<double> mu(40, 1.0);
  SeparatorParams p = calibrate(0.5, 3, 1.5);
  for (std::uint64_t s = 0; s < 200; ++s) {
    Stream rng(s, StreamTag::separator);
    SeparatorSample x = sample_two_buffers(v, mu, p, 2.0 / 3.0, rng);
    std::vector<int> in(40, 0);
    for (Vertex u : x.x) in[u] |= 1;
    for (Vertex u : x.y) in[u] |= 2;
    for (Vertex u : x.z) in[u] |= 4;
    for (auto b : in) EXPECT_TRUE(b == 0 || b == 1 || b == 2 || b == 4);
    if (x.rejected) continue;
    Stream replay(x.stream_key);
    std::vector<double> g(6);
    for (double& c : g) c = replay.normal();
    for (std::size_t u = 0; u < 40; ++u) {
      double proj = 0;
      for (std::size_t j = 0; j < 6; ++j) proj += v.row(u)[j] * g[j];
      int want = proj >= p.t ? 1 : proj > p.t - p.eps_prime ? 2 : proj > p.t - 2 * p.eps_prime ? 4 : 0;
      EXPECT_EQ(in[u], want);
    }
  }
}

TEST(Separator, IdenticalVectorsNeverStraddle) {
  std::vector<double> data;
  auto base = unit_cloud(1, 4, 3);
  for (int i = 0; i < 5; ++i) data.insert(data.end(), base.begin(), base.end());
  VectorView v{data.data(), 5, 4};
  std::vector<double> mu(5, 0.2);
  SeparatorParams p = calibrate(0.3, 3, 0.5);
  for (std::uint64_t s = 0; s < 2000; ++s) {
    Stream rng(s, StreamTag::separator);
    SeparatorSample x = sample_measured(v, mu, p, 0.5, rng);
    EXPECT_FALSE(x.rejected);
    EXPECT_TRUE(x.x.empty() || x.x.size() == 5);
  }
}

TEST(Separator, SingletonIsNeverRejected) {
  auto data = unit_cloud(1, 3, 4);
  VectorView v{data.data(), 1, 3};
  std::vector<double> mu{1.0};
  SeparatorParams p = calibrate(0.2, 4, 0.5);
  int hits = 0;
  const int N = 20000;
  for (int s = 0; s < N; ++s) {
    Stream rng(static_cast<std::uint64_t>(s), StreamTag::separator);
    SeparatorSample x = sample_measured(v, mu, p, 0.5, rng);
    EXPECT_FALSE(x.rejected);
    hits += !x.x.empty();
  }
  double se = std::sqrt(p.alpha * (1 - p.alpha) / N);
  EXPECT_NEAR(hits / double(N), p.alpha, 4 * se);
}

TEST(Separator, MeasuredConditionOnEveryReturn) {
  auto data = unit_cloud(30, 5, 5);
  VectorView v{data.data(), 30, 5};
  std::vector<double> mu(30);
  for (std::size_t i = 0; i < 30; ++i) mu[i] = 0.1 + 0.05 * double(i % 7);
  double total = 0;
  for (double m : mu) total += m;
  const double delta = 0.25;
  SeparatorParams p = calibrate_capped(0.2, 2 / delta, 0.8, 1.0);
  int rejected = 0;
  for (std::uint64_t s = 0; s < 3000; ++s) {
    Stream rng(s, StreamTag::separator);
    SeparatorSample x = sample_two_buffers(v, mu, p, delta, rng);
    rejected += x.rejected;
    if (!x.x.empty()) EXPECT_LE(min_outside_ball_measure(v, mu, x.x, p.radius), delta * total);
  }
  EXPECT_GT(rejected, 0);
}

TEST(Separator, SpreadSetRejectionRateAtMostHalf) {
  const std::size_t d = 12;
  std::vector<double> data(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) data[i * d + i] = 1.0;
  VectorView v{data.data(), d, d};
  std::vector<double> mu(d, 1.0);
  const double delta = 0.25;
  SeparatorParams p = calibrate(0.2, 2 / delta, 1.2);
  ASSERT_LT(p.radius, std::sqrt(2.0));
  int with_u = 0, rej_u = 0;
  for (std::uint64_t s = 0; s < 200000; ++s) {
    Stream a(s, StreamTag::separator), b(s, StreamTag::separator);
    SeparatorSample raw = sample_one_buffer(v, p, a);
    SeparatorSample m = sample_measured(v, mu, p, delta, b);
    if (raw.x.empty() || raw.x.front() != 0) continue;
    ++with_u;
    rej_u += m.rejected;
  }
  ASSERT_GT(with_u, 50);
  EXPECT_LE(double(rej_u) / with_u, 0.5);
}

TEST(Separator, RejectsNonUnitInput) {
  std::vector<double> data{1.0, 0.0, 0.5, 0.5};
  VectorView v{data.data(), 2, 2};
  SeparatorParams p = calibrate(0.2, 3, 0.5);
  Stream rng(0);
  EXPECT_THROW(sample_one_buffer(v, p, rng), PreconditionError);
}
