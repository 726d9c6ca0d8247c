#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "lowlight/image.hpp"

namespace lowlight {

// Per-pixel lightness: max over channels.
PlanarImage lightness(const PlanarImage& img);

// Nearest-neighbor resample to target_width columns, aspect preserved.
// Images at or below the target pass through unchanged.
PlanarImage downsample_columns(const PlanarImage& img, int target_width);

struct LoeResult {
  double value = 0.0;  // in [0, 1]
  int sampled_height = 0, sampled_width = 0;
  long long discordant_pairs = 0;
  long long total_pairs = 0;  // m^2 for m sampled pixels
};

// Lightness-order error: the fraction of ordered pixel pairs whose lightness
// order flips between the two images, computed on the downsampled lightness
// maps. 0 means the order is fully preserved. Invariant under monotone
// lightness maps.
LoeResult loe(const PlanarImage& original, const PlanarImage& enhanced,
              int target_width = 50);

// Mean squared error over all samples and PSNR against peak 1.0. Identical
// images give PSNR = +inf.
std::pair<double, double> mse_psnr(const PlanarImage& a, const PlanarImage& b);

// Named metric registry. "loe" is implemented; "mdm" is a declared slot whose
// evaluation raises "metric unavailable". Unknown names are rejected.
std::vector<std::string_view> available_metrics();
double compute_metric(std::string_view name, const PlanarImage& original,
                      const PlanarImage& enhanced);

}  // namespace lowlight
