#include "lowlight/graphs.hpp"

#include <cmath>
#include <stdexcept>

namespace lowlight {

double bilateral_weight(double vi, double vj, double ci, double cj, double sigma_v,
                        double sigma_c) {
  if (!(sigma_v > 0.0) || !(sigma_c > 0.0))
    throw std::invalid_argument("bilateral_weight: bandwidths must be positive");
  const double dv = vi - vj;
  const double dc = ci - cj;
  return std::exp(-dv * dv / (sigma_v * sigma_v) - dc * dc / (sigma_c * sigma_c));
}

LineGraph build_line_graph(std::span<const double> values, double sigma_value,
                           const GraphParams& params) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw std::invalid_argument("build_line_graph: need at least two samples");
  if (params.neighborhood_radius < 1)
    throw std::invalid_argument("build_line_graph: neighborhood radius must be >= 1");

  LineGraph g;
  g.n = n;
  g.neighborhood_radius = params.neighborhood_radius;
  for (int i = 0; i < n; ++i) {
    const int jmax = std::min(n - 1, i + params.neighborhood_radius);
    for (int j = i + 1; j <= jmax; ++j) {
      const double w = bilateral_weight(values[i], values[j], static_cast<double>(i),
                                        static_cast<double>(j), sigma_value, params.sigma_c);
      if (w < params.prune_below) continue;
      g.edges.push_back({i, j, w});
    }
  }
  return g;
}

SparseSymMatrix laplacian(const LineGraph& g) {
  std::vector<double> degree(g.n, 0.0);
  std::vector<Triplet> t;
  t.reserve(2 * g.edges.size() + g.n);
  for (const auto& e : g.edges) {
    t.push_back({e.i, e.j, -e.weight});
    t.push_back({e.j, e.i, -e.weight});
    degree[e.i] += e.weight;
    degree[e.j] += e.weight;
  }
  for (int i = 0; i < g.n; ++i) t.push_back({i, i, degree[i]});
  return SparseSymMatrix::from_triplets(g.n, std::move(t));
}

std::vector<double> apply_gradient(std::span<const double> values) {
  if (values.size() < 2)
    throw std::invalid_argument("apply_gradient: need at least two samples");
  std::vector<double> g(values.size() - 1);
  for (size_t i = 0; i + 1 < values.size(); ++i) g[i] = values[i + 1] - values[i];
  return g;
}

SparseSymMatrix gng_laplacian(const SparseSymMatrix& gradient_laplacian, int n) {
  const int m = gradient_laplacian.n;
  if (m != n - 1)
    throw std::invalid_argument("gng_laplacian: gradient Laplacian must be (n-1) x (n-1)");

  // Gradient a couples samples a and a+1 with signs (-1, +1), so entry (a, b)
  // of Lbar scatters onto the four sample pairs (a or a+1, b or b+1).
  std::vector<Triplet> t;
  t.reserve(4 * gradient_laplacian.nnz());
  for (int a = 0; a < m; ++a) {
    for (int k = gradient_laplacian.row_offsets[a]; k < gradient_laplacian.row_offsets[a + 1];
         ++k) {
      const int b = gradient_laplacian.col_indices[k];
      const double v = gradient_laplacian.values[k];
      t.push_back({a, b, v});
      t.push_back({a, b + 1, -v});
      t.push_back({a + 1, b, -v});
      t.push_back({a + 1, b + 1, v});
    }
  }
  return SparseSymMatrix::from_triplets(n, std::move(t));
}

double glr_edge_sum(const LineGraph& g, std::span<const double> x) {
  if (static_cast<int>(x.size()) != g.n)
    throw std::invalid_argument("glr_edge_sum: dimension mismatch");
  double s = 0.0;
  for (const auto& e : g.edges) {
    const double d = x[e.i] - x[e.j];
    s += e.weight * d * d;
  }
  return s;
}

}  // namespace lowlight
