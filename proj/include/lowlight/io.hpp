#pragma once

#include <string>

#include "lowlight/image.hpp"

namespace lowlight {

// Reads PNG (8- or 16-bit, gray or color, alpha stripped, palette expanded) or
// binary PPM/PGM. Format is detected from magic bytes, not the extension.
// Samples map to [0, 1] by v / maxval (255 and 65535 for 8- and 16-bit PNG).
PlanarImage load_image(const std::string& path);

// Writes 8-bit gray or RGB PNG; samples are clamped then rounded to v * 255.
void save_png(const PlanarImage& img, const std::string& path);

}  // namespace lowlight
