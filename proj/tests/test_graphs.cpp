#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "lowlight/dense.hpp"
#include "lowlight/graphs.hpp"

using namespace lowlight;

namespace {

DenseMatrix to_dense(const SparseSymMatrix& s) { return DenseMatrix::from_sparse(s); }

double quad_form(const SparseSymMatrix& a, const std::vector<double>& x) {
  auto ax = matvec(a, x);
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * ax[i];
  return s;
}

}  // namespace

TEST_CASE("bilateral_weight analytic values") {
  CHECK(bilateral_weight(0.7, 0.7, 3, 3, 1.0, 1.0) == 1.0);
  CHECK(bilateral_weight(0.5, 0.5 + 0.2, 3, 3, 0.2, 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  // frozen closed-form evaluation: exp(-0.04 - 1)
  CHECK(bilateral_weight(0.5, 0.3, 0, 1, 1.0, 1.0) ==
        doctest::Approx(0.35345468195878016).epsilon(1e-12));
  CHECK_THROWS_AS(bilateral_weight(0, 0, 0, 0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bilateral_weight(0, 0, 0, 0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("build_line_graph structure and frozen weights") {
  GraphParams gp;
  gp.neighborhood_radius = 1;

  SUBCASE("constant values, radius 1") {
    const std::vector<double> v{0.4, 0.4, 0.4};
    auto g = build_line_graph(v, 1.0, gp);
    REQUIRE(g.edges.size() == 2);
    for (const auto& e : g.edges)
      CHECK(e.weight == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("step values 0,0,1") {
    const std::vector<double> v{0.0, 0.0, 1.0};
    auto g = build_line_graph(v, 1.0, gp);
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0].i == 0);
    CHECK(g.edges[0].j == 1);
    CHECK(g.edges[0].weight == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(g.edges[1].i == 1);
    CHECK(g.edges[1].j == 2);
    CHECK(g.edges[1].weight == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  }
  SUBCASE("radius 2 on 3 nodes gives 3 edges") {
    GraphParams gp2;
    gp2.neighborhood_radius = 2;
    const std::vector<double> v{0.0, 0.0, 1.0};
    auto g = build_line_graph(v, 1.0, gp2);
    REQUIRE(g.edges.size() == 3);
    bool found_02 = false;
    for (const auto& e : g.edges)
      if (e.i == 0 && e.j == 2) {
        found_02 = true;
        CHECK(e.weight == doctest::Approx(std::exp(-1.0 - 4.0)).epsilon(1e-12));
      }
    CHECK(found_02);
  }
  SUBCASE("too few samples rejected") {
    CHECK_THROWS_AS(build_line_graph(std::vector<double>{1.0}, 1.0, gp),
                    std::invalid_argument);
  }
  SUBCASE("pruning drops small weights when enabled") {
    GraphParams gp3;
    gp3.neighborhood_radius = 1;
    const std::vector<double> v{0.0, 1.0, 1.0};
    gp3.prune_below = 0.0;
    CHECK(build_line_graph(v, 0.1, gp3).edges.size() == 2);  // default keeps e^-101
    gp3.prune_below = 1e-12;
    auto g = build_line_graph(v, 0.1, gp3);
    REQUIRE(g.edges.size() == 1);  // the 0-1 edge underflows past the threshold
    CHECK(g.edges[0].i == 1);
  }
}

TEST_CASE("line-graph weights lie in (0,1] and Laplacians are PSD") {
  auto rng = testutil::rng(5);
  GraphParams gp;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 3 + static_cast<int>(rng() % 15);
    auto vals = testutil::random_vector(rng, n, 0.0, 1.0);
    auto g = build_line_graph(vals, 0.5, gp);
    for (const auto& e : g.edges) {
      CHECK(e.weight > 0.0);
      CHECK(e.weight <= 1.0);
      CHECK(e.j - e.i <= gp.neighborhood_radius);
      CHECK(e.i < e.j);
    }
    auto eigs = symmetric_eigenvalues(to_dense(laplacian(g)));
    CHECK(eigs.front() >= -1e-10);
  }
}

TEST_CASE("laplacian frozen stencils and zero row sums") {
  LineGraph g;
  g.n = 2;
  g.neighborhood_radius = 1;
  g.edges = {{0, 1, 0.7}};
  auto l = laplacian(g);
  auto d = to_dense(l);
  CHECK(d(0, 0) == doctest::Approx(0.7));
  CHECK(d(0, 1) == doctest::Approx(-0.7));
  CHECK(d(1, 0) == doctest::Approx(-0.7));
  CHECK(d(1, 1) == doctest::Approx(0.7));

  LineGraph path;
  path.n = 3;
  path.neighborhood_radius = 1;
  path.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  auto lp = to_dense(laplacian(path));
  const double expected[3][3] = {{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(lp(i, j) == expected[i][j]);

  // row sums zero for a random graph
  auto rng = testutil::rng(7);
  auto vals = testutil::random_vector(rng, 12, 0.0, 1.0);
  GraphParams gp;
  auto lap = laplacian(build_line_graph(vals, 0.3, gp));
  auto ones = std::vector<double>(12, 1.0);
  for (double v : matvec(lap, ones)) CHECK(std::abs(v) <= 1e-14);
}

TEST_CASE("apply_gradient first differences") {
  CHECK(apply_gradient(std::vector<double>{5, 5, 5}) == std::vector<double>({0, 0}));
  CHECK(apply_gradient(std::vector<double>{0, 1, 3}) == std::vector<double>({1, 2}));
  CHECK(apply_gradient(std::vector<double>{2, 2.5, 3, 3.5}) ==
        std::vector<double>({0.5, 0.5, 0.5}));
  CHECK_THROWS_AS(apply_gradient(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("gng_laplacian second-difference stencil for a single gradient edge") {
  const double wbar = 0.6;
  LineGraph g;
  g.n = 2;
  g.neighborhood_radius = 1;
  g.edges = {{0, 1, wbar}};
  auto lifted = to_dense(gng_laplacian(laplacian(g), 3));
  const double expected[3][3] = {{1, -2, 1}, {-2, 4, -2}, {1, -2, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(lifted(i, j) == doctest::Approx(wbar * expected[i][j]).epsilon(1e-13));
}

TEST_CASE("gng_laplacian dimension check") {
  LineGraph g;
  g.n = 2;
  g.neighborhood_radius = 1;
  g.edges = {{0, 1, 1.0}};
  auto lbar = laplacian(g);
  CHECK_THROWS_AS(gng_laplacian(lbar, 4), std::invalid_argument);
}

TEST_CASE("gng_laplacian is symmetric PSD with constants and ramps in the nullspace") {
  auto rng = testutil::rng(9);
  GraphParams gp;
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 3 + static_cast<int>(rng() % 12);
    auto l = testutil::random_vector(rng, n, 0.0, 1.0);
    auto lbar = laplacian(build_line_graph(apply_gradient(l), 0.2, gp));
    auto gng = gng_laplacian(lbar, n);

    CHECK(gng.is_symmetric(1e-14));
    auto eigs = symmetric_eigenvalues(to_dense(gng));
    CHECK(eigs.front() >= -1e-10);

    double linf = 0.0;
    for (double v : gng.values) linf = std::max(linf, std::abs(v));

    std::vector<double> ones(n, 1.0), ramp(n);
    for (int i = 0; i < n; ++i) ramp[i] = i + 1.0;
    for (double v : matvec(gng, ones)) CHECK(std::abs(v) <= 1e-12 * std::max(linf, 1.0));
    for (double v : matvec(gng, ramp))
      CHECK(std::abs(v) <= 1e-12 * std::max(linf, 1.0) * n);
  }
}

TEST_CASE("quadratic form via Laplacian equals the edge-wise sum") {
  auto rng = testutil::rng(21);
  GraphParams gp;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 3 + static_cast<int>(rng() % 10);
    auto vals = testutil::random_vector(rng, n, 0.0, 1.0);
    auto g = build_line_graph(vals, 0.7, gp);
    auto x = testutil::random_vector(rng, n, -2.0, 2.0);

    const double via_matrix = quad_form(laplacian(g), x);
    const double via_edges = glr_edge_sum(g, x);
    CHECK(via_matrix == doctest::Approx(via_edges).epsilon(1e-10));
  }
}

TEST_CASE("gng quadratic form equals the gradient-domain edge sum") {
  auto rng = testutil::rng(27);
  GraphParams gp;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 4 + static_cast<int>(rng() % 10);
    auto seed = testutil::random_vector(rng, n, 0.0, 1.0);
    auto graph = build_line_graph(apply_gradient(seed), 0.2, gp);
    auto gng = gng_laplacian(laplacian(graph), n);

    auto x = testutil::random_vector(rng, n, -1.0, 1.0);
    const double via_lifted = quad_form(gng, x);
    const double via_edges = glr_edge_sum(graph, apply_gradient(x));
    CHECK(via_lifted == doctest::Approx(via_edges).epsilon(1e-10).scale(1e-12));
  }
}

TEST_CASE("exactly affine signals have zero gng energy") {
  auto rng = testutil::rng(33);
  GraphParams gp;
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 3 + static_cast<int>(rng() % 20);
    auto seed = testutil::random_vector(rng, n, 0.0, 1.0);
    auto gng = gng_laplacian(laplacian(build_line_graph(apply_gradient(seed), 0.2, gp)), n);

    const double a = coef(rng), b = coef(rng);
    std::vector<double> affine(n);
    for (int i = 0; i < n; ++i) affine[i] = a + b * i;

    double scale = 0.0;
    for (double v : gng.values) scale = std::max(scale, std::abs(v));
    CHECK(std::abs(quad_form(gng, affine)) <=
          1e-12 * std::max(1.0, scale * n * (a * a + b * b + 1)));
  }
}
