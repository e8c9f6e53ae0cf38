#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "graph.hpp"

namespace bufpart {

class DomainError : public Error {
 public:
  using Error::Error;
};

inline double log_normal_pdf(double t) { return -0.5 * t * t - 0.5 * std::log(2.0 * std::numbers::pi); }
inline double normal_pdf(double t) { return std::exp(log_normal_pdf(t)); }

// Pr{N(0,1) >= t}.
inline double gaussian_tail(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

// log of the tail, finite for all t.
inline double log_gaussian_tail(double t) {
  if (t < 30.0) {
    if (t < -5.0) return std::log1p(-gaussian_tail(-t));
    return std::log(gaussian_tail(t));
  }
  double t2 = t * t;
  double inv = 1.0 / t2;
  double series = 1.0 - inv * (1.0 - 3.0 * inv * (1.0 - 5.0 * inv * (1.0 - 7.0 * inv)));
  return -0.5 * t2 - std::log(t) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

// Sandwich endpoints, valid for t > 0.
inline double gaussian_tail_lower(double t) { return t / (t * t + 1.0) * normal_pdf(t); }
inline double gaussian_tail_upper(double t) { return normal_pdf(t) / t; }

inline double gaussian_tail_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("gaussian_tail_inv: p must lie in (0,1)");
  if (p > 0.5) {
    // Newton on the tail itself; derivative -pdf is bounded away from 0 here.
    double t = -gaussian_tail_inv(1.0 - p);
    for (int i = 0; i < 50; ++i) {
      double f = gaussian_tail(t) - p;
      double step = f / normal_pdf(t);
      t += step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    return t;
  }
  // Newton on log tail, started from the leading asymptotic term; log tail is concave.
  double lp = std::log(p);
  double t = p > 0.25 ? 0.0 : std::sqrt(-2.0 * lp) - 1.0;
  double lo = -1.0, hi = 40.0;
  while (log_gaussian_tail(hi) > lp) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double lt = log_gaussian_tail(t);
    double f = lt - lp;
    if (f > 0) lo = std::max(lo, t);
    else hi = std::min(hi, t);
    double deriv = -std::exp(log_normal_pdf(t) - lt);
    double next = t - f / deriv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) < 1e-15 * std::max(1.0, std::abs(t))) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

}  // namespace bufpart
