// Serial vs parallel kernel timings. The serial column runs the reference
// implementations (or the library kernel pinned to one thread where the
// reference would change the algorithm); the parallel column runs the library
// kernels at full thread count. Median of repeated runs.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lowlight/graphs.hpp"
#include "lowlight/image.hpp"
#include "lowlight/metrics.hpp"
#include "lowlight/reference.hpp"
#include "lowlight/retinex.hpp"
#include "lowlight/rng.hpp"
#include "lowlight/sparse.hpp"

using namespace lowlight;

namespace {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

template <typename F>
double median_ms(F&& f, int reps) {
  std::vector<double> times;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    times.push_back(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

void print_row(const char* kernel, const char* size, double serial_ms, double parallel_ms) {
  std::printf("%-22s %-12s %12.2f %12.2f %9.2fx\n", kernel, size, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

PlanarImage random_image(int h, int w, int c, uint64_t seed) {
  PlanarImage img(h, w, c);
  SplitMix64 g(seed);
  for (double& v : img.data) v = g.next_unit();
  return img;
}

}  // namespace

int main() {
  const int hw = max_threads();
  std::printf("threads available: %d\n\n", hw);
  std::printf("%-22s %-12s %12s %12s %10s\n", "kernel", "size", "serial ms", "parallel ms",
              "speedup");

  {
    // sparse matvec on a long line-graph Laplacian; serial = one thread, the
    // dense reference would not fit at this size
    const int n = 400000;
    SplitMix64 g(7);
    std::vector<double> vals(n);
    for (double& v : vals) v = g.next_unit();
    GraphParams gp;
    const SparseSymMatrix a = laplacian(build_line_graph(vals, 1.0, gp));
    std::vector<double> x(n), y(n);
    for (double& v : x) v = g.next_unit();

    set_threads(1);
    const double s = median_ms([&] { matvec(a, x, y); }, 7);
    set_threads(hw);
    const double p = median_ms([&] { matvec(a, x, y); }, 7);
    print_row("matvec", "n=400000", s, p);
  }

  {
    const PlanarImage img = random_image(768, 768, 1, 11);
    const double sigma = 5.0;
    set_threads(1);
    const double s = median_ms([&] { gaussian_blur(img, sigma); }, 5);
    set_threads(hw);
    const double p = median_ms([&] { gaussian_blur(img, sigma); }, 5);
    print_row("gaussian_blur", "768x768", s, p);
  }

  {
    const PlanarImage img = random_image(1024, 1024, 3, 13);
    set_threads(hw);
    const double s = median_ms([&] { reference::add_noise_serial(img, 0.01, 42); }, 5);
    const double p = median_ms([&] { add_noise(img, 0.01, 42); }, 5);
    print_row("add_noise", "1024x1024x3", s, p);
  }

  {
    const PlanarImage a = random_image(400, 400, 1, 17);
    const PlanarImage b = random_image(400, 400, 1, 19);
    set_threads(hw);
    const double s = median_ms([&] { reference::loe_pairs(a, b); }, 5);
    const double p = median_ms([&] { loe(a, b); }, 5);
    print_row("loe", "400x400", s, p);
  }

  {
    // the patch loop is where the real time goes; serial reference runs the
    // identical per-patch math sequentially
    PlanarImage img = random_image(100, 100, 1, 23);
    for (double& v : img.data) v *= 0.3;  // low-light range
    RetinexParams params;
    EnhanceOptions opts;
    opts.track_conditioning = false;
    const double s = median_ms([&] { reference::enhance_image_serial(img, params, opts); }, 3);
    EnhanceOptions popts = opts;
    popts.threads = hw;
    const double p = median_ms([&] { enhance_image(img, params, popts); }, 3);
    print_row("enhance_image", "100x100", s, p);
  }

  return 0;
}
