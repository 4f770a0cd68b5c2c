#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ctexp/cayley.hpp"

namespace ctexp {

using Rational = boost::multiprecision::cpp_rational;

// Undirected k-regular graph as flat neighbor lists, vertex-major.
struct Graph {
  uint64_t n = 0;
  uint32_t k = 0;
  std::vector<uint32_t> neighbors;

  const uint32_t* row(uint64_t v) const { return neighbors.data() + v * k; }
};

Graph graph_from_cayley(const CayleyGraph& g);
bool is_connected(const Graph& g);
bool is_bipartite(const Graph& g);

// All adjacency eigenvalues, descending. Dense symmetric solve.
std::vector<double> spectrum_dense(const Graph& g, uint64_t max_n = 4096);

struct IterativeReport {
  double lambda2 = 0.0;
  double lambda_min = 0.0;
  double residual2 = 0.0;    // ||A v - lambda2 v|| / ||v|| for the Ritz vector
  double residual_min = 0.0;
  uint32_t iterations = 0;
  bool converged = false;
  uint64_t seed = 0;
};

// Lanczos on the adjacency operator restricted to the complement of the
// all-ones vector (exact deflation: regularity makes all-ones the top
// eigenvector). Reports the extreme eigenvalues of the deflated operator,
// i.e. lambda2 and lambda_min of the graph. Deterministic for fixed seed.
IterativeReport lambda2_iterative(const Graph& g, double tol = 1e-6,
                                  uint32_t max_iter = 300, uint64_t seed = 1);

// Exact vertex-expansion constant: min over nonempty proper A of
// |boundary(A)| / ((1 - |A|/N) |A|), boundary = vertices at distance 1.
// Zero iff disconnected. Exhaustive; requires n <= max_n.
Rational vertex_expansion_exact(const Graph& g, uint64_t max_n = 24);

struct SpectralOptions {
  double tol = 1e-6;
  uint32_t max_iter = 300;
  uint64_t seed = 1;
  uint64_t dense_bound = 4096;
  uint64_t exact_bound = 24;
};

struct SpectralReport {
  uint64_t N = 0;
  uint32_t k = 0;
  double lambda2 = 0.0;
  double lambda_min = 0.0;
  std::string method;  // "dense" | "iterative"
  double residual = 0.0;
  uint32_t iterations = 0;
  uint64_t seed = 0;
  bool converged = true;
  double gap = 0.0;
  double two_sided_gap = 0.0;
  double edge_expansion_lower = 0.0;  // (k - lambda2) / 2
  bool bipartite = false;
  std::optional<Rational> c_exact;  // tiny graphs only
};

// Connected regular graphs only. Picks dense vs iterative by N; attaches the
// exact expansion constant when the graph is small enough.
SpectralReport expansion_report(const Graph& g, const SpectralOptions& opt = {});

}  // namespace ctexp
