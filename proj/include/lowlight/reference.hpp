#pragma once

#include <span>
#include <utility>
#include <vector>

#include "lowlight/image.hpp"
#include "lowlight/metrics.hpp"
#include "lowlight/retinex.hpp"
#include "lowlight/sparse.hpp"

// Serial reference implementations. Deliberately naive: dense expansion, direct
// 2-D convolution, reversed loop order, no OpenMP. Tests hold the parallel
// kernels to these; the benchmark shows what the naive forms cost.
namespace lowlight::reference {

// Expands to dense and multiplies row by row.
std::vector<double> matvec_dense(const SparseSymMatrix& a, std::span<const double> x);

// Full 2-D kernel, no separability.
PlanarImage gaussian_blur_direct(const PlanarImage& img, double sigma);

// Plain double loop over ordered pixel pairs.
LoeResult loe_pairs(const PlanarImage& original, const PlanarImage& enhanced,
                    int target_width = 50);

// Sequential element loop against the indexed noise stream.
PlanarImage add_noise_serial(const PlanarImage& img, double sigma, uint64_t seed);

// Patch loop run serially and in reverse order; per-patch math is shared with
// the parallel path, so outputs must match it bit for bit.
std::pair<PlanarImage, EnhanceReport> enhance_image_serial(const PlanarImage& img,
                                                           const RetinexParams& p,
                                                           const EnhanceOptions& opts = {});

}  // namespace lowlight::reference
