#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "gaussian.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace bufpart {

class CalibrationError : public Error {
 public:
  using Error::Error;
};

struct SeparatorParams {
  double epsilon = 0.0;
  double radius = 0.0;
  double m = 0.0;
  double t = 0.0;
  double alpha = 0.0;
  double log_alpha = 0.0;
  double eps_prime = 0.0;
  double t_exact = std::numeric_limits<double>::quiet_NaN();
  bool capped = false;
};

// log Pr{g >= t/s} - log(Pr{g >= t}/m) with s = sqrt(1 - r^2/4); <= 0 once the joint-tail
// requirement holds.
inline double calibration_gap(double t, double m, double r) {
  double s = std::sqrt(1.0 - r * r / 4.0);
  return log_gaussian_tail(t / s) + std::log(m) - log_gaussian_tail(t);
}

inline SeparatorParams separator_params_at(double eps, double m, double r, double t) {
  if (!(t > 0.0)) throw CalibrationError("separator threshold must be positive");
  SeparatorParams p;
  p.epsilon = eps;
  p.m = m;
  p.radius = r;
  p.t = t;
  p.alpha = gaussian_tail(t);
  p.log_alpha = log_gaussian_tail(t);
  p.eps_prime = eps / (std::numbers::e * (t + 1.0 / t));
  if (!(p.eps_prime < t)) throw CalibrationError("derived buffer width eps' is not below t");
  return p;
}

inline SeparatorParams calibrate(double eps, double m, double r) {
  if (!(eps >= 0.0 && eps < 1.0)) throw PreconditionError("calibrate: epsilon must lie in [0,1)");
  if (!(m >= 3.0)) throw PreconditionError("calibrate: m must be at least 3");
  if (!(r > 0.0 && r < 2.0)) throw PreconditionError("calibrate: radius must lie in (0,2)");
  constexpr double kMaxT = 40.0;
  if (calibration_gap(kMaxT, m, r) > 0.0)
    throw CalibrationError("calibrate: no threshold below t=40 satisfies the joint-tail condition (m=" +
                           std::to_string(m) + ", r=" + std::to_string(r) + ")");
  double lo = 0.0, hi = kMaxT;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    if (calibration_gap(mid, m, r) <= 0.0) hi = mid;
    else lo = mid;
  }
  SeparatorParams p = separator_params_at(eps, m, r, hi);
  p.t_exact = hi;
  return p;
}

// Exact calibration when it lands at or below `cap`, otherwise the threshold is pinned at cap.
inline SeparatorParams calibrate_capped(double eps, double m, double r, double cap) {
  double t_exact = std::numeric_limits<double>::infinity();
  try {
    SeparatorParams p = calibrate(eps, m, r);
    if (p.t <= cap) return p;
    t_exact = p.t;
  } catch (const CalibrationError&) {
  }
  SeparatorParams p = separator_params_at(eps, m, r, cap);
  p.t_exact = t_exact;
  p.capped = true;
  return p;
}

// Row-major view over `count` vectors of dimension `dim`.
struct VectorView {
  const double* data = nullptr;
  std::size_t count = 0;
  std::size_t dim = 0;

  const double* row(std::size_t i) const { return data + i * dim; }

  double distance(std::size_t a, std::size_t b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double d = data[a * dim + i] - data[b * dim + i];
      s += d * d;
    }
    return std::sqrt(s);
  }
};

struct SeparatorSample {
  VertexSet x;
  VertexSet y;
  VertexSet z;
  bool rejected = false;
  std::uint64_t stream_key = 0;
  std::uint64_t stream_counter = 0;
};

inline void require_unit_vectors(const VectorView& v, double tol = 1e-9) {
  for (std::size_t i = 0; i < v.count; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < v.dim; ++j) s += v.row(i)[j] * v.row(i)[j];
    if (std::abs(std::sqrt(s) - 1.0) > tol)
      throw PreconditionError("separator input vector " + std::to_string(i) + " is not unit norm");
  }
}

namespace detail {

// g ~ N(0, I_dim) drawn coordinate by coordinate, then one projection per vector.
inline std::vector<double> project(const VectorView& v, Stream& rng) {
  std::vector<double> g(v.dim);
  for (double& x : g) x = rng.normal();
  std::vector<double> proj(v.count);
  for (std::size_t i = 0; i < v.count; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < v.dim; ++j) s += v.row(i)[j] * g[j];
    proj[i] = s;
  }
  return proj;
}

inline SeparatorSample threshold(const std::vector<double>& proj, const SeparatorParams& p, bool with_z) {
  SeparatorSample s;
  const double t = p.t, e = p.eps_prime;
  for (std::size_t i = 0; i < proj.size(); ++i) {
    double g = proj[i];
    auto u = static_cast<Vertex>(i);
    if (g >= t) s.x.push_back(u);
    else if (g > t - e) s.y.push_back(u);
    else if (with_z && g > t - 2.0 * e) s.z.push_back(u);
  }
  return s;
}

}  // namespace detail

// min over u in X of mu(X \ Ball(u, r)).
inline double min_outside_ball_measure(const VectorView& v, std::span<const double> measures, const VertexSet& x,
                                       double r) {
  double best = std::numeric_limits<double>::infinity();
  for (Vertex u : x) {
    double s = 0.0;
    for (Vertex w : x)
      if (v.distance(u, w) > r) s += measures[w];
    best = std::min(best, s);
    if (best == 0.0) break;
  }
  return x.empty() ? 0.0 : best;
}

inline SeparatorSample sample_one_buffer(const VectorView& v, const SeparatorParams& p, Stream& rng) {
  require_unit_vectors(v);
  SeparatorSample s;
  std::uint64_t c0 = rng.counter();
  s = detail::threshold(detail::project(v, rng), p, false);
  s.stream_key = rng.key();
  s.stream_counter = c0;
  return s;
}

namespace detail {

inline SeparatorSample sample_with_rejection(const VectorView& v, std::span<const double> measures,
                                             const SeparatorParams& p, double delta, Stream& rng, bool with_z) {
  std::uint64_t c0 = rng.counter();
  SeparatorSample s = threshold(project(v, rng), p, with_z);
  s.stream_key = rng.key();
  s.stream_counter = c0;
  if (!s.x.empty()) {
    double total = 0.0;
    for (double m : measures) total += m;
    if (!(min_outside_ball_measure(v, measures, s.x, p.radius) <= delta * total)) {
      s.x.clear();
      s.y.clear();
      s.z.clear();
      s.rejected = true;
    }
  }
  return s;
}

inline void check_measured_args(const VectorView& v, std::span<const double> measures, double delta) {
  if (measures.size() != v.count) throw PreconditionError("measure vector has wrong length");
  if (!(delta > 0.0 && delta <= 2.0 / 3.0)) throw PreconditionError("delta must lie in (0, 2/3]");
  for (double m : measures)
    if (!(m >= 0.0)) throw PreconditionError("measures must be nonnegative");
}

}  // namespace detail

// p must be calibrated with m = 2/delta.
inline SeparatorSample sample_measured(const VectorView& v, std::span<const double> measures, const SeparatorParams& p,
                                       double delta, Stream& rng) {
  require_unit_vectors(v);
  detail::check_measured_args(v, measures, delta);
  return detail::sample_with_rejection(v, measures, p, delta, rng, false);
}

inline SeparatorSample sample_measured(const VectorView& v, std::span<const double> measures, double eps, double delta,
                                       double r, Stream& rng) {
  return sample_measured(v, measures, calibrate(eps, 2.0 / delta, r), delta, rng);
}

inline SeparatorSample sample_two_buffers(const VectorView& v, std::span<const double> measures,
                                          const SeparatorParams& p, double delta, Stream& rng) {
  require_unit_vectors(v);
  detail::check_measured_args(v, measures, delta);
  return detail::sample_with_rejection(v, measures, p, delta, rng, true);
}

inline SeparatorSample sample_two_buffers(const VectorView& v, std::span<const double> measures, double eps,
                                          double delta, double r, Stream& rng) {
  return sample_two_buffers(v, measures, calibrate(eps, 2.0 / delta, r), delta, rng);
}

}  // namespace bufpart
