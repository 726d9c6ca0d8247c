#pragma once

#include <span>
#include <vector>

#include "lowlight/sparse.hpp"

namespace lowlight {

struct GraphParams {
  double sigma_r = 1.0;  // reflectance range bandwidth
  double sigma_l = 0.2;  // illumination-gradient range bandwidth
  double sigma_c = 1.0;  // coordinate bandwidth, in pixels
  int neighborhood_radius = 2;
  // Edges with weight below this are dropped. Default keeps everything, tiny
  // weights included, so quadratic forms stay exact.
  double prune_below = 0.0;
};

// Weighted undirected graph over one row or column of samples. Edges connect
// pairs at most neighborhood_radius apart; weights lie in (0, 1].
struct LineGraph {
  struct Edge {
    int i = 0, j = 0;  // i < j
    double weight = 0.0;
  };
  int n = 0;
  int neighborhood_radius = 0;
  std::vector<Edge> edges;
};

// exp(-(vi - vj)^2 / sigma_v^2 - (ci - cj)^2 / sigma_c^2)
double bilateral_weight(double vi, double vj, double ci, double cj, double sigma_v,
                        double sigma_c);

// Needs at least two samples. sigma_value feeds the range term; coordinates
// are the sample indices.
LineGraph build_line_graph(std::span<const double> values, double sigma_value,
                           const GraphParams& params);

// Combinatorial Laplacian diag(W 1) - W: PSD with zero row sums.
SparseSymMatrix laplacian(const LineGraph& g);

// Forward differences g_i = v_{i+1} - v_i; maps constants to zero.
std::vector<double> apply_gradient(std::span<const double> values);

// Lifts an (n-1)-node gradient-graph Laplacian back to the n-sample domain as
// F^T Lbar F with F the forward-difference operator. The result is a signed
// Laplacian, still PSD, whose nullspace contains constants and linear ramps.
SparseSymMatrix gng_laplacian(const SparseSymMatrix& gradient_laplacian, int n);

// Edge-wise quadratic form  sum_{(i,j)} w_ij (x_i - x_j)^2. Equals x^T L x for
// the Laplacian of g; kept as the independent route for checking it.
double glr_edge_sum(const LineGraph& g, std::span<const double> x);

}  // namespace lowlight
