#include "ctexp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include <Eigen/Dense>

namespace ctexp {

namespace {

void check_regular(const Graph& g) {
  if (g.n == 0) throw std::invalid_argument("empty graph");
  if (g.neighbors.size() != g.n * g.k)
    throw std::invalid_argument("neighbor table does not match n*k");
}

// y = A x, single-threaded so reruns are bit-identical
void matvec(const Graph& g, const std::vector<double>& x, std::vector<double>& y) {
  for (uint64_t v = 0; v < g.n; ++v) {
    double acc = 0.0;
    const uint32_t* row = g.row(v);
    for (uint32_t j = 0; j < g.k; ++j) acc += x[row[j]];
    y[v] = acc;
  }
}

void project_off_ones(std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= double(x.size());
  for (double& v : x) v -= mean;
}

double norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double explicit_residual(const Graph& g, const std::vector<double>& v,
                         double theta) {
  std::vector<double> av(v.size());
  matvec(g, v, av);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    double r = av[i] - theta * v[i];
    num += r * r;
    den += v[i] * v[i];
  }
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

}  // namespace

Graph graph_from_cayley(const CayleyGraph& g) {
  Graph out;
  out.n = g.n;
  out.k = g.k;
  out.neighbors = g.neighbors;
  return out;
}

bool is_connected(const Graph& g) {
  check_regular(g);
  std::vector<char> seen(g.n, 0);
  std::queue<uint32_t> q;
  q.push(0);
  seen[0] = 1;
  uint64_t reached = 1;
  while (!q.empty()) {
    uint32_t v = q.front();
    q.pop();
    for (uint32_t j = 0; j < g.k; ++j) {
      uint32_t w = g.row(v)[j];
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        q.push(w);
      }
    }
  }
  return reached == g.n;
}

bool is_bipartite(const Graph& g) {
  check_regular(g);
  std::vector<int8_t> color(g.n, -1);
  for (uint64_t start = 0; start < g.n; ++start) {
    if (color[start] != -1) continue;
    color[start] = 0;
    std::queue<uint32_t> q;
    q.push(uint32_t(start));
    while (!q.empty()) {
      uint32_t v = q.front();
      q.pop();
      for (uint32_t j = 0; j < g.k; ++j) {
        uint32_t w = g.row(v)[j];
        if (color[w] == -1) {
          color[w] = int8_t(1 - color[v]);
          q.push(w);
        } else if (color[w] == color[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<double> spectrum_dense(const Graph& g, uint64_t max_n) {
  check_regular(g);
  if (g.n > max_n) throw std::invalid_argument("graph too large for a dense solve");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(Eigen::Index(g.n), Eigen::Index(g.n));
  for (uint64_t v = 0; v < g.n; ++v)
    for (uint32_t j = 0; j < g.k; ++j)
      a(Eigen::Index(v), Eigen::Index(g.row(v)[j])) += 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + g.n);
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

IterativeReport lambda2_iterative(const Graph& g, double tol, uint32_t max_iter,
                                  uint64_t seed) {
  check_regular(g);
  if (!is_connected(g)) throw std::invalid_argument("graph must be connected");
  IterativeReport rep;
  rep.seed = seed;
  if (g.n < 2) throw std::invalid_argument("need at least two vertices");
  if (max_iter == 0) throw std::invalid_argument("need at least one iteration");

  // deterministic start vector off the all-ones direction
  std::vector<double> v(g.n);
  uint64_t state = seed * 2862933555777941757ULL + 3037000493ULL;
  for (uint64_t i = 0; i < g.n; ++i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    v[i] = double((state >> 11) & 0xFFFFF) / double(0xFFFFF) - 0.5;
  }
  project_off_ones(v);
  double nv = norm(v);
  if (nv == 0.0) {
    v[0] = 1.0;
    project_off_ones(v);
    nv = norm(v);
  }
  for (double& x : v) x /= nv;

  std::vector<std::vector<double>> basis{v};
  std::vector<double> alpha, beta;
  std::vector<double> w(g.n);
  uint32_t used = 0;
  bool breakdown = false;

  auto extremes = [&](Eigen::VectorXd& evals, Eigen::MatrixXd& evecs) {
    size_t m = alpha.size();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(Eigen::Index(m), Eigen::Index(m));
    for (size_t i = 0; i < m; ++i) {
      t(Eigen::Index(i), Eigen::Index(i)) = alpha[i];
      if (i + 1 < m) {
        t(Eigen::Index(i), Eigen::Index(i + 1)) = beta[i];
        t(Eigen::Index(i + 1), Eigen::Index(i)) = beta[i];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    evals = es.eigenvalues();  // ascending
    evecs = es.eigenvectors();
  };

  for (uint32_t it = 0; it < max_iter; ++it) {
    const std::vector<double>& q = basis.back();
    matvec(g, q, w);
    project_off_ones(w);
    double a = dot(w, q);
    alpha.push_back(a);
    // full reorthogonalization, twice for stability
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        double c = dot(w, b);
        for (uint64_t i = 0; i < g.n; ++i) w[i] -= c * b[i];
      }
    double nb = norm(w);
    used = it + 1;
    if (nb < 1e-12 || used == g.n - 1) {
      breakdown = true;
      break;
    }
    // cheap convergence probe on the tridiagonal every few steps
    if (used >= 2 && used % 5 == 0) {
      Eigen::VectorXd evals;
      Eigen::MatrixXd evecs;
      extremes(evals, evecs);
      Eigen::Index m = evals.size();
      double btop = nb * std::abs(evecs(m - 1, m - 1));
      double bbot = nb * std::abs(evecs(m - 1, 0));
      if (btop <= tol * 0.1 && bbot <= tol * 0.1) break;
    }
    beta.push_back(nb);
    std::vector<double> next(g.n);
    for (uint64_t i = 0; i < g.n; ++i) next[i] = w[i] / nb;
    basis.push_back(std::move(next));
  }

  rep.iterations = used;
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;
  extremes(evals, evecs);
  Eigen::Index m = evals.size();
  rep.lambda2 = evals(m - 1);
  rep.lambda_min = evals(0);

  auto ritz = [&](Eigen::Index col) {
    std::vector<double> y(g.n, 0.0);
    for (Eigen::Index j = 0; j < m; ++j) {
      double c = evecs(j, col);
      const auto& b = basis[size_t(j)];
      for (uint64_t i = 0; i < g.n; ++i) y[i] += c * b[i];
    }
    return y;
  };
  std::vector<double> ytop = ritz(m - 1);
  std::vector<double> ybot = ritz(0);
  rep.residual2 = explicit_residual(g, ytop, rep.lambda2);
  rep.residual_min = explicit_residual(g, ybot, rep.lambda_min);
  rep.converged = (rep.residual2 <= tol && rep.residual_min <= tol) || breakdown;
  return rep;
}

Rational vertex_expansion_exact(const Graph& g, uint64_t max_n) {
  check_regular(g);
  if (g.n > max_n || g.n > 30)
    throw std::invalid_argument("graph too large for the exhaustive scan");
  uint32_t n = uint32_t(g.n);
  std::vector<uint32_t> nbr_mask(n, 0);
  for (uint32_t v = 0; v < n; ++v)
    for (uint32_t j = 0; j < g.k; ++j) nbr_mask[v] |= 1u << g.row(v)[j];

  bool have = false;
  long long best_num = 0, best_den = 1;  // track min of N*|bd| / ((N-|A|)*|A|)
  uint32_t full = (1u << n) - 1;
  for (uint32_t a = 1; a < full; ++a) {
    uint32_t reach = 0;
    for (uint32_t rest = a; rest; rest &= rest - 1) {
      uint32_t v = uint32_t(__builtin_ctz(rest));
      reach |= nbr_mask[v];
    }
    uint32_t bd = reach & ~a;
    long long size_a = __builtin_popcount(a);
    long long size_bd = __builtin_popcount(bd);
    long long num = (long long)n * size_bd;
    long long den = (long long)(n - size_a) * size_a;
    if (!have || num * best_den < best_num * den) {
      best_num = num;
      best_den = den;
      have = true;
    }
  }
  return Rational(best_num, best_den);
}

SpectralReport expansion_report(const Graph& g, const SpectralOptions& opt) {
  check_regular(g);
  if (!is_connected(g)) throw std::invalid_argument("graph must be connected");
  SpectralReport rep;
  rep.N = g.n;
  rep.k = g.k;
  rep.bipartite = is_bipartite(g);
  rep.seed = opt.seed;

  if (g.n <= opt.dense_bound) {
    std::vector<double> ev = spectrum_dense(g, opt.dense_bound);
    rep.method = "dense";
    rep.lambda2 = ev.size() > 1 ? ev[1] : ev[0];
    rep.lambda_min = ev.back();
    rep.residual = 0.0;
    rep.iterations = 0;
  } else {
    IterativeReport it = lambda2_iterative(g, opt.tol, opt.max_iter, opt.seed);
    rep.method = "iterative";
    rep.lambda2 = it.lambda2;
    rep.lambda_min = it.lambda_min;
    rep.residual = std::max(it.residual2, it.residual_min);
    rep.iterations = it.iterations;
    rep.converged = it.converged;
  }
  rep.gap = double(rep.k) - rep.lambda2;
  rep.two_sided_gap =
      std::min(rep.gap, double(rep.k) - std::abs(rep.lambda_min));
  rep.edge_expansion_lower = rep.gap / 2.0;
  if (g.n <= opt.exact_bound) rep.c_exact = vertex_expansion_exact(g, opt.exact_bound);
  return rep;
}

}  // namespace ctexp
