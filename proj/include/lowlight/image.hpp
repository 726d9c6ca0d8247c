#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lowlight {

// Floating-point image with values in [0, 1]. Channel-planar storage: plane c
// starts at data[c * height * width], rows are contiguous.
struct PlanarImage {
  int height = 0, width = 0, channels = 1;
  std::vector<double> data;

  PlanarImage() = default;
  PlanarImage(int h, int w, int c, double fill = 0.0);

  double& at(int c, int y, int x) {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }

  size_t plane_size() const { return static_cast<size_t>(height) * width; }
  size_t sample_count() const { return plane_size() * channels; }
  bool same_shape(const PlanarImage& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
  void clamp01();
};

// HSV value channel: per-pixel max over RGB. Single-channel input is copied.
PlanarImage rgb_to_hsv_v(const PlanarImage& img);

// Separable Gaussian on a single-channel image: kernel radius ceil(3 sigma),
// each 1-D kernel normalized to sum 1, replicate-edge padding.
PlanarImage gaussian_blur(const PlanarImage& img, double sigma);

// Adds clamped iid Gaussian noise, sample index = flat position in data.
// sigma = 0 is the identity.
PlanarImage add_noise(const PlanarImage& img, double sigma, uint64_t seed);

}  // namespace lowlight
