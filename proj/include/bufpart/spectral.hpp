#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dense_eigen.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace bufpart {

// L = D_w^{-1/2} (D_c - C) D_w^{-1/2} as a matrix-free operator.
class LaplacianOperator {
 public:
  explicit LaplacianOperator(const Graph& g) : g_(&g), inv_sqrt_w_(g.n()), diag_(g.n()) {
    for (std::size_t u = 0; u < g.n(); ++u) {
      inv_sqrt_w_[u] = 1.0 / std::sqrt(g.weight(static_cast<Vertex>(u)));
      diag_[u] = g.incident_cost(static_cast<Vertex>(u)) / g.weight(static_cast<Vertex>(u));
    }
  }

  std::size_t n() const { return g_->n(); }
  const Graph& graph() const { return *g_; }

  void apply(const double* x, double* y) const {
    const std::size_t n = g_->n();
    for (std::size_t u = 0; u < n; ++u) {
      double s = diag_[u] * x[u];
      double off = 0.0;
      for (const Arc& a : g_->neighbors(static_cast<Vertex>(u))) off += a.cost * inv_sqrt_w_[a.to] * x[a.to];
      y[u] = s - inv_sqrt_w_[u] * off;
    }
  }

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(x.size());
    apply(x.data(), y.data());
    return y;
  }

  // z^T L z as the edge sum.
  double quadratic_form(const std::vector<double>& z) const {
    double s = 0.0;
    for (const Edge& e : g_->edges()) {
      double d = z[e.u] * inv_sqrt_w_[e.u] - z[e.v] * inv_sqrt_w_[e.v];
      s += e.cost * d * d;
    }
    return s;
  }

  std::vector<double> dense() const {
    const std::size_t n = g_->n();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t u = 0; u < n; ++u) a[u * n + u] = diag_[u];
    for (const Edge& e : g_->edges()) {
      double x = -e.cost * inv_sqrt_w_[e.u] * inv_sqrt_w_[e.v];
      a[e.u * n + e.v] += x;
      a[e.v * n + e.u] += x;
    }
    return a;
  }

 private:
  const Graph* g_;
  std::vector<double> inv_sqrt_w_;
  std::vector<double> diag_;
};

inline LaplacianOperator normalized_laplacian(const Graph& g) { return LaplacianOperator(g); }

enum class SolverKind { automatic, dense, lanczos };

struct EigenOptions {
  double tol = 1e-10;
  SolverKind solver = SolverKind::automatic;
  std::size_t dense_limit = 2048;
  std::size_t max_matvecs = 0;  // 0 selects 50 n
  std::uint64_t seed = 0;
};

struct SpectralBasis {
  std::size_t k_prime = 0;
  std::size_t n = 0;
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
  std::vector<double> residuals;
  std::string solver;
  std::size_t matvecs = 0;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void orthogonalize(std::vector<double>& x, const std::vector<std::vector<double>>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) axpy(-dot(q, x), q, x);
}

inline double residual(const LaplacianOperator& op, const std::vector<double>& x, double lambda) {
  std::vector<double> y = op.apply(x);
  axpy(-lambda, x, y);
  return norm(y);
}

inline void fix_sign(std::vector<double>& x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs(x[i]) > std::abs(x[best])) best = i;
  if (x[best] < 0)
    for (double& v : x) v = -v;
}

struct Pair {
  double value;
  std::vector<double> vector;
  double residual;
};

class Lanczos {
 public:
  Lanczos(const LaplacianOperator& op, double tol, std::size_t max_matvecs, std::uint64_t seed)
      : op_(op), n_(op.n()), tol_(tol), cap_(max_matvecs), rng_(seed, StreamTag::lanczos) {}

  std::size_t matvecs() const { return matvecs_; }

  std::vector<Pair> smallest(std::size_t k) {
    std::vector<Pair> locked;
    while (locked.size() < k) {
      if (!step(locked, k - locked.size())) break;
    }
    // Guard against missed multiplicities: the complement must not hold a smaller eigenvalue.
    for (int guard = 0; guard < 64 && !locked.empty() && locked.size() < n_; ++guard) {
      std::vector<Pair> sorted = locked;
      sort_pairs(sorted);
      double top = sorted[std::min(k, sorted.size()) - 1].value;
      std::vector<Pair> trial = locked;
      std::size_t before = trial.size();
      if (!step(trial, 1) || trial.size() == before) break;
      if (trial[before].value < top - 10.0 * tol_) {
        locked = std::move(trial);
      } else {
        break;
      }
    }
    sort_pairs(locked);
    if (locked.size() > k) locked.resize(k);
    return locked;
  }

 private:
  static void sort_pairs(std::vector<Pair>& v) {
    std::stable_sort(v.begin(), v.end(), [](const Pair& a, const Pair& b) { return a.value < b.value; });
  }

  std::vector<std::vector<double>> vectors_of(const std::vector<Pair>& ps) const {
    std::vector<std::vector<double>> out;
    out.reserve(ps.size());
    for (const auto& p : ps) out.push_back(p.vector);
    return out;
  }

  std::vector<double> random_start(const std::vector<std::vector<double>>& locked) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::vector<double> v(n_);
      for (double& x : v) x = rng_.normal();
      orthogonalize(v, locked);
      double nv = norm(v);
      if (nv > 1e-8) {
        for (double& x : v) x /= nv;
        return v;
      }
    }
    return {};
  }

  void count(std::size_t c) {
    matvecs_ += c;
    if (matvecs_ > cap_)
      throw ConvergenceError("Lanczos: matvec cap exceeded, best residual " + std::to_string(best_residual_),
                             best_residual_);
  }

  // One restart cycle sequence: locks at least one new pair among the `wanted` smallest
  // of the complement of `locked`. Returns false when the complement is exhausted.
  bool step(std::vector<Pair>& locked, std::size_t wanted) {
    std::vector<std::vector<double>> lockv = vectors_of(locked);
    std::size_t avail = n_ - locked.size();
    if (avail == 0) return false;
    std::vector<double> start = random_start(lockv);
    if (start.empty()) return false;
    const std::size_t mmax = std::min(avail, std::max<std::size_t>(4 * wanted + 20, 60));
    for (;;) {
      std::vector<std::vector<double>> V;
      std::vector<double> alpha, beta;
      V.push_back(start);
      bool invariant = false;
      double last_beta = 0.0;
      for (std::size_t j = 0; j < mmax; ++j) {
        std::vector<double> w = op_.apply(V[j]);
        count(1);
        double a = dot(V[j], w);
        alpha.push_back(a);
        orthogonalize(w, lockv);
        orthogonalize(w, V);
        orthogonalize(w, lockv);
        double b = norm(w);
        if (b <= 1e-12 * std::max(1.0, std::abs(a))) {
          invariant = true;
          last_beta = 0.0;
          break;
        }
        last_beta = b;
        if (j + 1 == mmax || V.size() == avail) {
          if (V.size() == avail) invariant = true;
          break;
        }
        beta.push_back(b);
        for (double& x : w) x /= b;
        V.push_back(std::move(w));
      }
      const std::size_t m = V.size();
      beta.resize(m > 0 ? m - 1 : 0);
      DenseEigen te = tridiagonal_eigen(alpha, beta);
      std::size_t take = std::min(wanted, m);
      std::vector<Pair> ritz;
      for (std::size_t i = 0; i < take; ++i) {
        std::vector<double> y(n_, 0.0);
        for (std::size_t j = 0; j < m; ++j) axpy(te.vec(j, i), V[j], y);
        double ny = norm(y);
        for (double& x : y) x /= ny;
        double est = std::abs(last_beta * te.vec(m - 1, i));
        double r = (invariant || est <= tol_) ? residual(op_, y, te.values[i]) : est;
        if (invariant || est <= tol_) count(1);
        best_residual_ = std::min(best_residual_, r);
        ritz.push_back(Pair{te.values[i], std::move(y), r});
      }
      std::size_t added = 0;
      std::vector<double> next(n_, 0.0);
      for (auto& p : ritz) {
        if (p.residual <= tol_) {
          // refine against newly locked vectors to keep the locked set orthonormal
          orthogonalize(p.vector, lockv);
          double np = norm(p.vector);
          for (double& x : p.vector) x /= np;
          p.value = dot(p.vector, op_.apply(p.vector));
          p.residual = residual(op_, p.vector, p.value);
          count(2);
          if (p.residual <= tol_) {
            lockv.push_back(p.vector);
            locked.push_back(p);
            ++added;
            continue;
          }
        }
        axpy(1.0, p.vector, next);
      }
      if (added > 0) return true;
      if (invariant) {
        // exact subspace without a converged pair: only possible through rounding; restart fresh
        start = random_start(lockv);
        if (start.empty()) return false;
        continue;
      }
      orthogonalize(next, lockv);
      double nn = norm(next);
      if (nn < 1e-12) {
        start = random_start(lockv);
        if (start.empty()) return false;
      } else {
        for (double& x : next) x /= nn;
        start = std::move(next);
      }
    }
  }

  const LaplacianOperator& op_;
  std::size_t n_;
  double tol_;
  std::size_t cap_;
  Stream rng_;
  std::size_t matvecs_ = 0;
  double best_residual_ = 1e300;
};

}  // namespace detail

// The k_prime algebraically smallest eigenpairs of L.
inline SpectralBasis eigenbasis(const LaplacianOperator& op, std::size_t k_prime, const EigenOptions& opt = {}) {
  const std::size_t n = op.n();
  if (k_prime < 1 || k_prime > n) throw PreconditionError("eigenbasis: need 1 <= k' <= n");
  SpectralBasis b;
  b.k_prime = k_prime;
  b.n = n;
  bool use_dense = opt.solver == SolverKind::dense || (opt.solver == SolverKind::automatic && n <= opt.dense_limit);
  if (use_dense) {
    DenseEigen de = dense_symmetric_eigen(op.dense(), n);
    b.solver = "dense";
    for (std::size_t i = 0; i < k_prime; ++i) {
      std::vector<double> x(n);
      for (std::size_t r = 0; r < n; ++r) x[r] = de.vec(r, i);
      b.eigenvalues.push_back(de.values[i]);
      b.eigenvectors.push_back(std::move(x));
    }
  } else {
    std::size_t cap = opt.max_matvecs ? opt.max_matvecs : 50 * n;
    detail::Lanczos lz(op, opt.tol, cap, opt.seed);
    auto pairs = lz.smallest(k_prime);
    if (pairs.size() < k_prime) throw ConvergenceError("Lanczos: could not find enough eigenpairs", 0.0);
    b.solver = "lanczos";
    b.matvecs = lz.matvecs();
    for (auto& p : pairs) {
      b.eigenvalues.push_back(p.value);
      b.eigenvectors.push_back(std::move(p.vector));
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < k_prime; ++i) {
    detail::fix_sign(b.eigenvectors[i]);
    double r = detail::residual(op, b.eigenvectors[i], b.eigenvalues[i]);
    b.residuals.push_back(r);
    worst = std::max(worst, r);
  }
  if (worst > opt.tol) throw ConvergenceError("eigenbasis: residual above tolerance", worst);
  return b;
}

inline SpectralBasis eigenbasis(const Graph& g, std::size_t k_prime, const EigenOptions& opt = {}) {
  return eigenbasis(LaplacianOperator(g), k_prime, opt);
}

// Rows: u_bar (spectral coordinates), z_hat = u_bar / sqrt(w_u), psi = z_hat / |z_hat|.
struct Embedding {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<double> ubar;
  std::vector<double> zhat;
  std::vector<double> psi;
  std::vector<double> mu;
  std::vector<double> eigenvalues;

  const double* ubar_row(std::size_t u) const { return ubar.data() + u * dim; }
  const double* zhat_row(std::size_t u) const { return zhat.data() + u * dim; }
  const double* psi_row(std::size_t u) const { return psi.data() + u * dim; }

  double total_measure() const {
    double s = 0.0;
    for (double m : mu) s += m;
    return s;
  }

  double psi_distance(std::size_t u, std::size_t v) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double d = psi[u * dim + i] - psi[v * dim + i];
      s += d * d;
    }
    return std::sqrt(s);
  }
};

inline Embedding embed(const SpectralBasis& basis, const Graph& g) {
  if (basis.n != g.n()) throw PreconditionError("embed: basis and graph sizes differ");
  Embedding e;
  e.n = g.n();
  e.dim = basis.k_prime;
  e.ubar.resize(e.n * e.dim);
  e.zhat.resize(e.n * e.dim);
  e.psi.resize(e.n * e.dim);
  e.mu.resize(e.n);
  e.eigenvalues = basis.eigenvalues;
  for (std::size_t u = 0; u < e.n; ++u) {
    double s = 0.0;
    double isw = 1.0 / std::sqrt(g.weight(static_cast<Vertex>(u)));
    for (std::size_t i = 0; i < e.dim; ++i) {
      double x = basis.eigenvectors[i][u];
      e.ubar[u * e.dim + i] = x;
      e.zhat[u * e.dim + i] = x * isw;
      s += x * x;
    }
    if (!(s > 0.0))
      throw Error("embed: vertex " + std::to_string(u) + " has a zero embedding vector; recompute the basis with a different seed");
    e.mu[u] = s;
    double nrm = std::sqrt(s);
    for (std::size_t i = 0; i < e.dim; ++i) e.psi[u * e.dim + i] = e.ubar[u * e.dim + i] / nrm;
  }
  return e;
}

// Sum over edges of c_uv |z_u - z_v|^2.
inline double embedding_energy(const Embedding& e, const Graph& g) {
  double s = 0.0;
  for (const Edge& ed : g.edges()) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < e.dim; ++i) {
      double d = e.zhat[ed.u * e.dim + i] - e.zhat[ed.v * e.dim + i];
      d2 += d * d;
    }
    s += ed.cost * d2;
  }
  return s;
}

// mu of {v : |psi(u) - psi(v)| <= r}.
inline double ball_measure(const Embedding& e, std::size_t u, double r) {
  double s = 0.0;
  for (std::size_t v = 0; v < e.n; ++v)
    if (e.psi_distance(u, v) <= r) s += e.mu[v];
  return s;
}

}  // namespace bufpart
