#pragma once

// Shared fixtures for the test binaries. Randomness here uses std::mt19937_64
// with fixed seeds so failures replay exactly.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lowlight/graphs.hpp"
#include "lowlight/image.hpp"
#include "lowlight/retinex.hpp"
#include "lowlight/sparse.hpp"

namespace testutil {

inline std::mt19937_64 rng(uint64_t seed = 0xC0FFEE) { return std::mt19937_64(seed); }

inline std::vector<double> random_vector(std::mt19937_64& g, int n, double lo = 0.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(g);
  return v;
}

inline lowlight::PlanarImage random_image(std::mt19937_64& g, int h, int w, int c,
                                          double lo = 0.0, double hi = 1.0) {
  lowlight::PlanarImage img(h, w, c);
  std::uniform_real_distribution<double> d(lo, hi);
  for (double& v : img.data) v = d(g);
  return img;
}

// Random SPD matrix as weighted-Laplacian + positive diagonal: the same family
// the solver sees in production, but with freely chosen conditioning.
inline lowlight::SparseSymMatrix random_spd(std::mt19937_64& g, int n, double diag_lo,
                                            double diag_hi, int extra_edges = 0) {
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::uniform_real_distribution<double> d(diag_lo, diag_hi);
  std::uniform_int_distribution<int> node(0, n - 1);

  std::vector<lowlight::Triplet> t;
  std::vector<double> degree(n, 0.0);
  auto add_edge = [&](int i, int j) {
    const double wij = w(g);
    t.push_back({i, j, -wij});
    t.push_back({j, i, -wij});
    degree[i] += wij;
    degree[j] += wij;
  };
  for (int i = 0; i + 1 < n; ++i) add_edge(i, i + 1);
  for (int e = 0; e < extra_edges; ++e) {
    const int i = node(g), j = node(g);
    if (i != j) add_edge(std::min(i, j), std::max(i, j));
  }
  for (int i = 0; i < n; ++i) t.push_back({i, i, degree[i] + d(g)});
  return lowlight::SparseSymMatrix::from_triplets(n, std::move(t));
}

// Patch with reflectance drawn in [r_lo, r_hi] and illumination in [l_lo, l_hi];
// y = l * r plus optional noise, clamped to [0, 1].
inline lowlight::PatchSystem random_patch(std::mt19937_64& g, int n, double l_lo, double l_hi,
                                          double r_lo = 0.1, double r_hi = 1.0,
                                          double noise = 0.0) {
  lowlight::PatchSystem ps;
  ps.n = n;
  ps.l = random_vector(g, n * n, l_lo, l_hi);
  ps.r = random_vector(g, n * n, r_lo, r_hi);
  ps.y.resize(ps.l.size());
  std::normal_distribution<double> nd(0.0, noise > 0 ? noise : 1.0);
  for (size_t i = 0; i < ps.y.size(); ++i) {
    double v = ps.l[i] * ps.r[i];
    if (noise > 0) v += nd(g);
    ps.y[i] = std::clamp(v, 0.0, 1.0);
  }
  return ps;
}

inline double rel_inf_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 1e-300;
  for (size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / den;
}

inline double inf_norm(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double l2_norm(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

inline std::vector<double> residual(const lowlight::SparseSymMatrix& a,
                                    const std::vector<double>& x,
                                    const std::vector<double>& b) {
  auto ax = lowlight::matvec(a, x);
  for (size_t i = 0; i < ax.size(); ++i) ax[i] = b[i] - ax[i];
  return ax;
}

}  // namespace testutil
