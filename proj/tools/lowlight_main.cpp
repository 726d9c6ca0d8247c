// Command-line front end: `enhance` runs the pipeline on one image, `bench`
// times it over a directory and emits a timing table.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lowlight/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

void add_shared_options(CLI::App* cmd, lowlight::RunConfig& cfg, std::string& resize) {
  cmd->add_option("--gamma", cfg.params.gamma, "Correction exponent in (0, 1)");
  cmd->add_option("--mu-r", cfg.params.mu_r, "Reflectance regularization strength");
  cmd->add_option("--mu-l", cfg.params.mu_l, "Illumination regularization strength");
  cmd->add_option("--sigma-r", cfg.params.sigma_r, "Reflectance range bandwidth");
  cmd->add_option("--sigma-l", cfg.params.sigma_l, "Illumination-gradient range bandwidth");
  cmd->add_option("--sigma-c", cfg.params.sigma_c, "Coordinate bandwidth in pixels");
  cmd->add_option("--patch-size", cfg.params.patch_size, "Patch side length (>= 3)");
  cmd->add_option("--outer-iters", cfg.params.outer_iters, "Max alternation passes per patch");
  cmd->add_option("--cg-tol", cfg.params.cg_tol, "Inner solver relative residual tolerance");
  cmd->add_option("--noise-sigma", cfg.noise_sigma, "Std dev of injected Gaussian noise");
  cmd->add_option("--seed", cfg.seed, "Noise stream seed");
  cmd->add_flag_callback(
      "--no-precondition", [&cfg] { cfg.precondition = false; },
      "Run the inner solver without diagonal preconditioning");
  cmd->add_option("--threads", cfg.threads, "Worker threads for the patch loop (0 = auto)");
  cmd->add_option("--resize-policy", resize, "crop | error, for non-multiple dimensions")
      ->check(CLI::IsMember({"crop", "error"}));
}

int run_bench(lowlight::RunConfig base, const std::string& input_dir,
              const std::string& report_path, const std::string& output_dir) {
  std::vector<fs::path> inputs;
  try {
    for (const auto& entry : fs::directory_iterator(input_dir)) {
      if (!entry.is_regular_file()) continue;
      std::string ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      if (ext == ".png" || ext == ".ppm" || ext == ".pgm") inputs.push_back(entry.path());
    }
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  if (inputs.empty()) {
    std::cerr << "input error: no PNG/PPM/PGM files in " << input_dir << "\n";
    return 2;
  }
  std::sort(inputs.begin(), inputs.end());

  std::string table = "# lowlight bench v1\n# image\tresolution\tseconds\tloe\tcg_iters\n";
  double total_seconds = 0.0;
  for (const auto& path : inputs) {
    lowlight::RunConfig cfg = base;
    cfg.input_path = path.string();
    if (!output_dir.empty())
      cfg.output_path = (fs::path(output_dir) / path.filename().replace_extension(".png")).string();
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const auto res = lowlight::run_pipeline(cfg);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      total_seconds += secs;
      long cg = 0;
      for (const auto& p : res.report.enhance.patches) cg += p.cg_iterations;
      char row[512];
      std::snprintf(row, sizeof row, "%s\t%dx%d\t%.3f\t%.4f\t%ld\n",
                    path.filename().string().c_str(), res.report.width, res.report.height,
                    secs, res.report.loe_value, cg);
      table += row;
    } catch (const lowlight::StageError& e) {
      std::cerr << "skipping " << path.string() << ": " << e.what() << "\n";
      table += path.filename().string() + "\t-\t-\t-\t-\n";
    }
  }
  char foot[128];
  std::snprintf(foot, sizeof foot, "# images=%zu total_seconds=%.3f\n", inputs.size(),
                total_seconds);
  table += foot;

  std::cout << table;
  if (!report_path.empty()) {
    std::ofstream os(report_path);
    if (!os) {
      std::cerr << "output error: cannot open " << report_path << "\n";
      return 4;
    }
    os << table;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Patch-based low-light image enhancement"};
  app.require_subcommand(1);

  lowlight::RunConfig cfg;
  std::string resize = "crop";

  auto* enhance = app.add_subcommand("enhance", "Enhance a single image");
  enhance->add_option("--input", cfg.input_path, "Input image (PNG, PPM, or PGM)")->required();
  enhance->add_option("--output", cfg.output_path, "Output PNG path")->required();
  enhance->add_option("--report", cfg.report_path, "Write a key=value run report here");
  add_shared_options(enhance, cfg, resize);

  std::string input_dir, bench_report, output_dir;
  lowlight::RunConfig bench_cfg;
  std::string bench_resize = "crop";
  auto* bench = app.add_subcommand("bench", "Time the pipeline over a directory of images");
  bench->add_option("--input-dir", input_dir, "Directory of PNG/PPM/PGM images")->required();
  bench->add_option("--report", bench_report, "Write the timing table here");
  bench->add_option("--output-dir", output_dir, "Also write enhanced PNGs here");
  add_shared_options(bench, bench_cfg, bench_resize);

  CLI11_PARSE(app, argc, argv);

  if (enhance->parsed()) {
    cfg.resize_policy =
        resize == "error" ? lowlight::ResizePolicy::error : lowlight::ResizePolicy::crop;
    return lowlight::run(cfg);
  }
  bench_cfg.resize_policy =
      bench_resize == "error" ? lowlight::ResizePolicy::error : lowlight::ResizePolicy::crop;
  return run_bench(bench_cfg, input_dir, bench_report, output_dir);
}
