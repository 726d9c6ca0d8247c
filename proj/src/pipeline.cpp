#include "lowlight/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>

#include "lowlight/io.hpp"
#include "lowlight/metrics.hpp"

namespace lowlight {

namespace {

using Stage = StageError::Stage;

// %.17g round-trips doubles exactly, so reports are bit-faithful
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename F>
auto stage(Stage s, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(s, e.what());
  }
}

}  // namespace

PlanarImage crop_to_multiple(const PlanarImage& img, int n) {
  if (n < 1) throw std::invalid_argument("crop_to_multiple: patch size must be positive");
  const int h = img.height - img.height % n;
  const int w = img.width - img.width % n;
  if (h == 0 || w == 0)
    throw std::runtime_error("image " + std::to_string(img.width) + "x" +
                             std::to_string(img.height) +
                             " is smaller than one patch of size " + std::to_string(n));
  if (h == img.height && w == img.width) return img;
  PlanarImage out(h, w, img.channels);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) out.at(c, y, x) = img.at(c, y, x);
  return out;
}

RunResult run_pipeline(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  validate(cfg.params);
  if (cfg.input_path.empty()) throw StageError(Stage::input, "no input path given");

  PlanarImage clean = stage(Stage::input, [&] { return load_image(cfg.input_path); });

  const int n = cfg.params.patch_size;
  if (clean.height % n != 0 || clean.width % n != 0) {
    if (cfg.resize_policy == ResizePolicy::error)
      throw StageError(Stage::input,
                       "image dimensions " + std::to_string(clean.width) + "x" +
                           std::to_string(clean.height) + " are not multiples of " +
                           std::to_string(n) + " and resize policy is 'error'");
    clean = stage(Stage::input, [&] { return crop_to_multiple(clean, n); });
  }

  const PlanarImage observed =
      stage(Stage::processing, [&] { return add_noise(clean, cfg.noise_sigma, cfg.seed); });

  EnhanceOptions opts;
  opts.precondition = cfg.precondition;
  opts.threads = cfg.threads;
  auto enhanced = stage(Stage::processing, [&] {
    return enhance_image(observed, cfg.params, opts);
  });

  RunReport rep;
  rep.input_path = cfg.input_path;
  rep.output_path = cfg.output_path;
  rep.seed = cfg.seed;
  rep.noise_sigma = cfg.noise_sigma;
  rep.preconditioned = cfg.precondition;
  rep.threads = cfg.threads;
  rep.width = clean.width;
  rep.height = clean.height;
  rep.channels = clean.channels;
  rep.params = cfg.params;
  rep.enhance = std::move(enhanced.second);

  stage(Stage::processing, [&] {
    rep.loe_value = loe(observed, enhanced.first).value;
    if (cfg.noise_sigma > 0.0) {
      const auto [mse, psnr] = mse_psnr(clean, enhanced.first);
      rep.mse = mse;
      rep.psnr = psnr;
    }
    return 0;
  });

  if (!cfg.output_path.empty())
    stage(Stage::output, [&] {
      save_png(enhanced.first, cfg.output_path);
      return 0;
    });

  rep.wall_ms_total =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (!cfg.report_path.empty())
    stage(Stage::output, [&] {
      std::ofstream os(cfg.report_path);
      if (!os) throw std::runtime_error(cfg.report_path + ": cannot open report file");
      write_report(os, rep);
      if (!os) throw std::runtime_error(cfg.report_path + ": write failed");
      return 0;
    });

  return {std::move(enhanced.first), std::move(rep)};
}

void write_report(std::ostream& os, const RunReport& r) {
  os << "# lowlight report v1\n";
  os << "run.input=" << r.input_path << "\n";
  os << "run.output=" << r.output_path << "\n";
  os << "run.seed=" << r.seed << "\n";
  os << "run.noise_sigma=" << fmt(r.noise_sigma) << "\n";
  os << "run.precondition=" << (r.preconditioned ? 1 : 0) << "\n";
  os << "run.threads=" << r.threads << "\n";
  os << "image.width=" << r.width << "\n";
  os << "image.height=" << r.height << "\n";
  os << "image.channels=" << r.channels << "\n";
  os << "params.patch_size=" << r.params.patch_size << "\n";
  os << "params.mu_r=" << fmt(r.params.mu_r) << "\n";
  os << "params.mu_l=" << fmt(r.params.mu_l) << "\n";
  os << "params.sigma_r=" << fmt(r.params.sigma_r) << "\n";
  os << "params.sigma_l=" << fmt(r.params.sigma_l) << "\n";
  os << "params.sigma_c=" << fmt(r.params.sigma_c) << "\n";
  os << "params.neighborhood_radius=" << r.params.neighborhood_radius << "\n";
  os << "params.gamma=" << fmt(r.params.gamma) << "\n";
  os << "params.outer_iters=" << r.params.outer_iters << "\n";
  os << "params.outer_tol=" << fmt(r.params.outer_tol) << "\n";
  os << "params.cg_tol=" << fmt(r.params.cg_tol) << "\n";

  long total_cg = 0;
  long total_outer = 0;
  bool all_converged = true;
  double patch_wall = 0.0;
  double kb_sum = 0.0, kb_max = 0.0, ka_sum = 0.0, ka_max = 0.0;
  long kb_count = 0, ka_count = 0;

  for (const auto& p : r.enhance.patches) {
    const std::string key = "patch." + std::to_string(p.index);
    os << key << ".pos=" << p.py << "," << p.px << "\n";
    os << key << ".outer_iters=" << p.outer_iters_run << "\n";
    os << key << ".cg_iters=" << p.cg_iterations << "\n";
    os << key << ".max_rel_residual=" << fmt(p.max_rel_residual) << "\n";
    os << key << ".converged=" << (p.all_converged ? 1 : 0) << "\n";
    if (p.kappa_r_before) os << key << ".kappa_r=" << fmt(*p.kappa_r_before) << "\n";
    if (p.kappa_r_after) os << key << ".kappa_r_pre=" << fmt(*p.kappa_r_after) << "\n";
    if (p.kappa_l_before) os << key << ".kappa_l=" << fmt(*p.kappa_l_before) << "\n";
    if (p.kappa_l_after) os << key << ".kappa_l_pre=" << fmt(*p.kappa_l_after) << "\n";
    os << key << ".wall_ms=" << fmt(p.wall_ms) << "\n";

    total_cg += p.cg_iterations;
    total_outer += p.outer_iters_run;
    all_converged = all_converged && p.all_converged;
    patch_wall += p.wall_ms;
    for (const auto& k : {p.kappa_r_before, p.kappa_l_before}) {
      if (k) {
        kb_sum += *k;
        kb_max = std::max(kb_max, *k);
        ++kb_count;
      }
    }
    for (const auto& k : {p.kappa_r_after, p.kappa_l_after}) {
      if (k) {
        ka_sum += *k;
        ka_max = std::max(ka_max, *k);
        ++ka_count;
      }
    }
  }

  os << "total.patches=" << r.enhance.patches.size() << "\n";
  os << "total.outer_iters=" << total_outer << "\n";
  os << "total.cg_iters=" << total_cg << "\n";
  os << "total.converged=" << (all_converged ? 1 : 0) << "\n";
  if (kb_count > 0) {
    os << "total.kappa_mean=" << fmt(kb_sum / kb_count) << "\n";
    os << "total.kappa_max=" << fmt(kb_max) << "\n";
  }
  if (ka_count > 0) {
    os << "total.kappa_pre_mean=" << fmt(ka_sum / ka_count) << "\n";
    os << "total.kappa_pre_max=" << fmt(ka_max) << "\n";
  }
  os << "total.patch_wall_ms=" << fmt(patch_wall) << "\n";
  os << "metric.loe=" << fmt(r.loe_value) << "\n";
  if (r.mse) os << "metric.mse=" << fmt(*r.mse) << "\n";
  if (r.psnr) os << "metric.psnr=" << fmt(*r.psnr) << "\n";
  os << "run.wall_ms=" << fmt(r.wall_ms_total) << "\n";
}

int run(const RunConfig& cfg) {
  try {
    const RunResult res = run_pipeline(cfg);
    char tail[128];
    std::snprintf(tail, sizeof tail, " in %.2fs, loe=%.4f",
                  res.report.wall_ms_total / 1000.0, res.report.loe_value);
    std::ostringstream line;
    line << "enhanced " << cfg.input_path;
    if (!cfg.output_path.empty()) line << " -> " << cfg.output_path;
    line << " (" << res.report.width << "x" << res.report.height << ", "
         << res.report.enhance.patches.size() << " patches)" << tail;
    if (res.report.psnr) {
      std::snprintf(tail, sizeof tail, ", psnr=%.2f", *res.report.psnr);
      line << tail;
    }
    std::cout << line.str() << "\n";
    return 0;
  } catch (const StageError& e) {
    switch (e.stage) {
      case Stage::input:
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
      case Stage::processing:
        std::cerr << "processing error: " << e.what() << "\n";
        return 3;
      case Stage::output:
        std::cerr << "output error: " << e.what() << "\n";
        return 4;
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lowlight
