#include "lowlight/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lowlight/dense.hpp"
#include "lowlight/rng.hpp"

namespace lowlight::reference {

std::vector<double> matvec_dense(const SparseSymMatrix& a, std::span<const double> x) {
  if (static_cast<int>(x.size()) != a.n)
    throw std::invalid_argument("matvec_dense: dimension mismatch");
  const DenseMatrix d = DenseMatrix::from_sparse(a);
  std::vector<double> y(a.n, 0.0);
  for (int i = 0; i < a.n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < a.n; ++j) sum += d(i, j) * x[j];
    y[i] = sum;
  }
  return y;
}

PlanarImage gaussian_blur_direct(const PlanarImage& img, double sigma) {
  if (img.channels != 1)
    throw std::invalid_argument("gaussian_blur_direct: expected a single-channel image");
  if (!(sigma > 0.0))
    throw std::invalid_argument("gaussian_blur_direct: sigma must be positive");
  const int h = img.height, w = img.width;
  if (h == 0 || w == 0) return img;

  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k1(radius + 1);
  double sum = 0.0;
  for (int d = 0; d <= radius; ++d) {
    k1[d] = std::exp(-static_cast<double>(d) * d / (2.0 * sigma * sigma));
    sum += d == 0 ? k1[d] : 2.0 * k1[d];
  }
  for (double& k : k1) k /= sum;

  PlanarImage out(h, w, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int sy = std::clamp(y + dy, 0, h - 1);
        for (int dx = -radius; dx <= radius; ++dx) {
          const int sx = std::clamp(x + dx, 0, w - 1);
          acc += k1[std::abs(dy)] * k1[std::abs(dx)] * img.at(0, sy, sx);
        }
      }
      out.at(0, y, x) = acc;
    }
  }
  return out;
}

LoeResult loe_pairs(const PlanarImage& original, const PlanarImage& enhanced,
                    int target_width) {
  if (original.height != enhanced.height || original.width != enhanced.width)
    throw std::invalid_argument("loe_pairs: image dimensions must match");
  const PlanarImage lo = downsample_columns(lightness(original), target_width);
  const PlanarImage le = downsample_columns(lightness(enhanced), target_width);
  const long long m = static_cast<long long>(lo.data.size());

  long long discordant = 0;
  for (long long u = 0; u < m; ++u)
    for (long long v = 0; v < m; ++v)
      if ((lo.data[u] >= lo.data[v]) != (le.data[u] >= le.data[v])) ++discordant;

  LoeResult res;
  res.sampled_height = lo.height;
  res.sampled_width = lo.width;
  res.discordant_pairs = discordant;
  res.total_pairs = m * m;
  res.value = static_cast<double>(discordant) / static_cast<double>(res.total_pairs);
  return res;
}

PlanarImage add_noise_serial(const PlanarImage& img, double sigma, uint64_t seed) {
  if (sigma < 0.0)
    throw std::invalid_argument("add_noise_serial: sigma must be non-negative");
  PlanarImage out = img;
  if (sigma == 0.0) return out;
  for (size_t k = 0; k < img.data.size(); ++k)
    out.data[k] =
        std::clamp(img.data[k] + sigma * gaussian_at(seed, static_cast<uint64_t>(k)), 0.0, 1.0);
  return out;
}

std::pair<PlanarImage, EnhanceReport> enhance_image_serial(const PlanarImage& img,
                                                           const RetinexParams& p,
                                                           const EnhanceOptions& opts) {
  validate(p);
  const int n = p.patch_size;
  if (img.height == 0 || img.width == 0)
    throw std::invalid_argument("enhance_image_serial: empty image");
  if (img.height % n != 0 || img.width % n != 0)
    throw std::invalid_argument("enhance_image_serial: dimensions not multiples of patch size");

  const PlanarImage v = rgb_to_hsv_v(img);
  auto init = initialize(v, p);
  const PlanarImage& l0 = init.first;
  const PlanarImage& r0 = init.second;

  EnhanceReport report;
  report.patches_y = img.height / n;
  report.patches_x = img.width / n;
  report.patch_size = n;
  const int total = report.patches_y * report.patches_x;
  report.patches.resize(total);

  PlanarImage x_out(img.height, img.width, 1);

  // reverse order on purpose: patch independence means the schedule must not
  // matter, and running backwards is the cheapest way to prove it
  for (int t = total - 1; t >= 0; --t) {
    const int py = t / report.patches_x;
    const int px = t % report.patches_x;
    report.patches[t] =
        detail::process_patch(v, l0, r0, x_out, py, px, report.patches_x, p, opts);
  }

  return {restore_color(img, v, x_out), std::move(report)};
}

}  // namespace lowlight::reference
