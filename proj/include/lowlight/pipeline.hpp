#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "lowlight/image.hpp"
#include "lowlight/retinex.hpp"

namespace lowlight {

enum class ResizePolicy { crop, error };

struct RunConfig {
  std::string input_path;
  std::string output_path;   // empty = don't write the image
  std::string report_path;   // empty = don't write a report
  RetinexParams params;
  double noise_sigma = 0.001;
  uint64_t seed = 0;
  bool precondition = true;
  int threads = 0;
  ResizePolicy resize_policy = ResizePolicy::crop;
};

struct RunReport {
  std::string input_path, output_path;
  uint64_t seed = 0;
  double noise_sigma = 0.0;
  bool preconditioned = true;
  int threads = 0;
  int width = 0, height = 0, channels = 0;
  RetinexParams params;
  EnhanceReport enhance;
  double loe_value = 0.0;
  // against the clean input, only when noise was injected
  std::optional<double> mse, psnr;
  double wall_ms_total = 0.0;
};

struct RunResult {
  PlanarImage output;
  RunReport report;
};

// Pipeline failures carry the stage they happened in; run() maps stages to
// exit codes 2 (input), 3 (processing), 4 (output).
struct StageError : std::runtime_error {
  enum class Stage { input, processing, output };
  Stage stage;
  StageError(Stage s, const std::string& msg) : std::runtime_error(msg), stage(s) {}
};

// Crops bottom/right so both dimensions are multiples of n.
PlanarImage crop_to_multiple(const PlanarImage& img, int n);

// load -> crop/reject -> noise -> enhance -> metrics -> write. Throws
// StageError; the output image and report files are only written when their
// paths are set.
RunResult run_pipeline(const RunConfig& cfg);

// Key=value report, one entry per line; see README for the schema. Keys
// ending in wall_ms are timings and excluded from determinism comparisons.
void write_report(std::ostream& os, const RunReport& report);

// CLI entry: runs the pipeline, prints a one-line summary to stdout, maps
// errors to stderr text and a process exit code.
int run(const RunConfig& cfg);

}  // namespace lowlight
