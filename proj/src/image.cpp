#include "lowlight/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lowlight/rng.hpp"

namespace lowlight {

PlanarImage::PlanarImage(int h, int w, int c, double fill) {
  if (h < 0 || w < 0) throw std::invalid_argument("PlanarImage: negative dimension");
  if (c != 1 && c != 3) throw std::invalid_argument("PlanarImage: channels must be 1 or 3");
  height = h;
  width = w;
  channels = c;
  data.assign(static_cast<size_t>(h) * w * c, fill);
}

void PlanarImage::clamp01() {
  for (double& v : data) v = std::clamp(v, 0.0, 1.0);
}

PlanarImage rgb_to_hsv_v(const PlanarImage& img) {
  if (img.channels == 1) return img;
  if (img.channels != 3)
    throw std::invalid_argument("rgb_to_hsv_v: expected 1 or 3 channels");
  PlanarImage v(img.height, img.width, 1);
  const size_t plane = img.plane_size();
  for (size_t i = 0; i < plane; ++i)
    v.data[i] = std::max({img.data[i], img.data[plane + i], img.data[2 * plane + i]});
  return v;
}

PlanarImage gaussian_blur(const PlanarImage& img, double sigma) {
  if (img.channels != 1)
    throw std::invalid_argument("gaussian_blur: expected a single-channel image");
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_blur: sigma must be positive");
  const int h = img.height, w = img.width;
  if (h == 0 || w == 0) return img;

  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(radius + 1);
  double sum = 0.0;
  for (int d = 0; d <= radius; ++d) {
    kernel[d] = std::exp(-static_cast<double>(d) * d / (2.0 * sigma * sigma));
    sum += d == 0 ? kernel[d] : 2.0 * kernel[d];
  }
  for (double& k : kernel) k /= sum;

  PlanarImage tmp(h, w, 1), out(h, w, 1);

  // horizontal pass, replicate padding
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = kernel[0] * img.at(0, y, x);
      for (int d = 1; d <= radius; ++d) {
        const int xl = std::max(0, x - d);
        const int xr = std::min(w - 1, x + d);
        acc += kernel[d] * (img.at(0, y, xl) + img.at(0, y, xr));
      }
      tmp.at(0, y, x) = acc;
    }
  }

  // vertical pass
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = kernel[0] * tmp.at(0, y, x);
      for (int d = 1; d <= radius; ++d) {
        const int yu = std::max(0, y - d);
        const int yd = std::min(h - 1, y + d);
        acc += kernel[d] * (tmp.at(0, yu, x) + tmp.at(0, yd, x));
      }
      out.at(0, y, x) = acc;
    }
  }
  return out;
}

PlanarImage add_noise(const PlanarImage& img, double sigma, uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("add_noise: sigma must be non-negative");
  PlanarImage out = img;
  if (sigma == 0.0) return out;
  const long long count = static_cast<long long>(img.data.size());
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < count; ++k) {
    out.data[k] = std::clamp(
        img.data[k] + sigma * gaussian_at(seed, static_cast<uint64_t>(k)), 0.0, 1.0);
  }
  return out;
}

}  // namespace lowlight
