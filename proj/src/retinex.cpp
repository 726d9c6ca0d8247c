#include "lowlight/retinex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lowlight {

namespace {

GraphParams graph_params(const RetinexParams& p) {
  return {p.sigma_r, p.sigma_l, p.sigma_c, p.neighborhood_radius};
}

void check_patch(const PatchSystem& ps) {
  const size_t n2 = static_cast<size_t>(ps.n) * ps.n;
  if (ps.n < 3) throw std::invalid_argument("patch size must be at least 3");
  if (ps.y.size() != n2 || ps.l.size() != n2 || ps.r.size() != n2)
    throw std::invalid_argument("patch vectors must have length n^2");
}

void check_positive(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!(x > 0.0)) throw std::invalid_argument(std::string(what) + " must be strictly positive");
}

// max |a - b| / max(|a|_inf, eps)
double relative_change(std::span<const double> before, std::span<const double> after) {
  double num = 0.0, den = 1e-12;
  for (size_t i = 0; i < before.size(); ++i) {
    num = std::max(num, std::abs(after[i] - before[i]));
    den = std::max(den, std::abs(before[i]));
  }
  return num / den;
}

std::vector<double> slice(std::span<const double> x, const std::vector<int>& idx) {
  std::vector<double> out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out[i] = x[idx[i]];
  return out;
}

// Scatters per-line Laplacian entries through an index map and adds the
// squared-factor diagonal. Shared by both assemblies; only the diagonal
// factor and the regularization weight differ.
std::pair<SparseSymMatrix, std::vector<double>> assemble_system(
    const PatchSystem& ps, std::span<const double> diag_factor, double mu,
    const std::vector<SparseSymMatrix>& row_ops,
    const std::vector<SparseSymMatrix>& col_ops) {
  const int n = ps.n;
  const size_t n2 = static_cast<size_t>(n) * n;
  if (static_cast<int>(row_ops.size()) != n || static_cast<int>(col_ops.size()) != n)
    throw std::invalid_argument("assemble: expected one operator per patch row and column");

  std::vector<Triplet> t;
  t.reserve(n2 + 2 * n * static_cast<size_t>(row_ops[0].nnz()));
  for (size_t i = 0; i < n2; ++i)
    t.push_back({static_cast<int>(i), static_cast<int>(i), diag_factor[i] * diag_factor[i]});

  for (int k = 0; k < n; ++k) {
    const auto rmap = row_indices(n, k);
    const auto cmap = col_indices(n, k);
    const SparseSymMatrix& rop = row_ops[k];
    const SparseSymMatrix& cop = col_ops[k];
    if (rop.n != n || cop.n != n)
      throw std::invalid_argument("assemble: operator dimension must equal patch size");
    for (int a = 0; a < n; ++a) {
      for (int e = rop.row_offsets[a]; e < rop.row_offsets[a + 1]; ++e)
        t.push_back({rmap[a], rmap[rop.col_indices[e]], mu * rop.values[e]});
      for (int e = cop.row_offsets[a]; e < cop.row_offsets[a + 1]; ++e)
        t.push_back({cmap[a], cmap[cop.col_indices[e]], mu * cop.values[e]});
    }
  }

  std::vector<double> b(n2);
  for (size_t i = 0; i < n2; ++i) b[i] = diag_factor[i] * ps.y[i];
  return {SparseSymMatrix::from_triplets(static_cast<int>(n2), std::move(t)), std::move(b)};
}

std::vector<SparseSymMatrix> laplacians_of(const std::vector<LineGraph>& graphs) {
  std::vector<SparseSymMatrix> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) out.push_back(laplacian(g));
  return out;
}

std::vector<SparseSymMatrix> gng_of(const std::vector<LineGraph>& gradient_graphs, int n) {
  std::vector<SparseSymMatrix> out;
  out.reserve(gradient_graphs.size());
  for (const auto& g : gradient_graphs) out.push_back(gng_laplacian(laplacian(g), n));
  return out;
}

}  // namespace

void validate(const RetinexParams& p) {
  if (!(p.mu_r >= 0.0) || !(p.mu_l >= 0.0))
    throw std::invalid_argument("regularization strengths must be non-negative");
  if (!(p.sigma_r > 0.0) || !(p.sigma_l > 0.0) || !(p.sigma_c > 0.0))
    throw std::invalid_argument("bandwidths must be positive");
  if (p.neighborhood_radius < 1)
    throw std::invalid_argument("neighborhood radius must be at least 1");
  if (!(p.gamma > 0.0) || !(p.gamma < 1.0))
    throw std::invalid_argument("gamma must lie in (0, 1)");
  if (p.patch_size < 3) throw std::invalid_argument("patch size must be at least 3");
  if (p.outer_iters < 1) throw std::invalid_argument("outer iteration count must be positive");
  if (!(p.outer_tol > 0.0) || !(p.cg_tol > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  if (!(p.l_floor > 0.0) || !(p.r_floor > 0.0))
    throw std::invalid_argument("floors must be positive");
}

std::vector<int> row_indices(int n, int k) {
  if (k < 0 || k >= n) throw std::invalid_argument("row_indices: row out of range");
  std::vector<int> idx(n);
  for (int a = 0; a < n; ++a) idx[a] = k * n + a;
  return idx;
}

std::vector<int> col_indices(int n, int k) {
  if (k < 0 || k >= n) throw std::invalid_argument("col_indices: column out of range");
  std::vector<int> idx(n);
  for (int a = 0; a < n; ++a) idx[a] = a * n + k;
  return idx;
}

PatchGraphs build_reflectance_graphs(const PatchSystem& ps, const RetinexParams& p) {
  check_patch(ps);
  PatchGraphs g;
  const auto gp = graph_params(p);
  for (int k = 0; k < ps.n; ++k) {
    g.rows.push_back(build_line_graph(slice(ps.r, row_indices(ps.n, k)), p.sigma_r, gp));
    g.cols.push_back(build_line_graph(slice(ps.r, col_indices(ps.n, k)), p.sigma_r, gp));
  }
  return g;
}

PatchGraphs build_gradient_graphs(const PatchSystem& ps, const RetinexParams& p) {
  check_patch(ps);
  PatchGraphs g;
  const auto gp = graph_params(p);
  for (int k = 0; k < ps.n; ++k) {
    g.rows.push_back(build_line_graph(
        apply_gradient(slice(ps.l, row_indices(ps.n, k))), p.sigma_l, gp));
    g.cols.push_back(build_line_graph(
        apply_gradient(slice(ps.l, col_indices(ps.n, k))), p.sigma_l, gp));
  }
  return g;
}

std::pair<SparseSymMatrix, std::vector<double>> assemble_reflectance_system(
    const PatchSystem& ps, const std::vector<SparseSymMatrix>& row_laplacians,
    const std::vector<SparseSymMatrix>& col_laplacians) {
  check_patch(ps);
  check_positive(ps.l, "illumination");
  return assemble_system(ps, ps.l, ps.mu_r, row_laplacians, col_laplacians);
}

std::pair<SparseSymMatrix, std::vector<double>> assemble_illumination_system(
    const PatchSystem& ps, const std::vector<SparseSymMatrix>& row_gng,
    const std::vector<SparseSymMatrix>& col_gng) {
  check_patch(ps);
  check_positive(ps.r, "reflectance");
  return assemble_system(ps, ps.r, ps.mu_l, row_gng, col_gng);
}

std::pair<SparseSymMatrix, std::vector<double>> reflectance_system(const PatchSystem& ps,
                                                                   const RetinexParams& p) {
  const auto g = build_reflectance_graphs(ps, p);
  return assemble_reflectance_system(ps, laplacians_of(g.rows), laplacians_of(g.cols));
}

std::pair<SparseSymMatrix, std::vector<double>> illumination_system(const PatchSystem& ps,
                                                                    const RetinexParams& p) {
  const auto g = build_gradient_graphs(ps, p);
  return assemble_illumination_system(ps, gng_of(g.rows, ps.n), gng_of(g.cols, ps.n));
}

double reflectance_objective(const PatchSystem& ps, const PatchGraphs& graphs,
                             std::span<const double> r) {
  check_patch(ps);
  double fid = 0.0;
  for (size_t i = 0; i < r.size(); ++i) {
    const double d = ps.y[i] - ps.l[i] * r[i];
    fid += d * d;
  }
  double reg = 0.0;
  for (int k = 0; k < ps.n; ++k) {
    reg += glr_edge_sum(graphs.rows[k], slice(r, row_indices(ps.n, k)));
    reg += glr_edge_sum(graphs.cols[k], slice(r, col_indices(ps.n, k)));
  }
  return fid + ps.mu_r * reg;
}

double illumination_objective(const PatchSystem& ps, const PatchGraphs& gradient_graphs,
                              std::span<const double> l) {
  check_patch(ps);
  double fid = 0.0;
  for (size_t i = 0; i < l.size(); ++i) {
    const double d = ps.y[i] - ps.r[i] * l[i];
    fid += d * d;
  }
  double reg = 0.0;
  for (int k = 0; k < ps.n; ++k) {
    reg += glr_edge_sum(gradient_graphs.rows[k],
                        apply_gradient(slice(l, row_indices(ps.n, k))));
    reg += glr_edge_sum(gradient_graphs.cols[k],
                        apply_gradient(slice(l, col_indices(ps.n, k))));
  }
  return fid + ps.mu_l * reg;
}

std::pair<PlanarImage, PlanarImage> initialize(const PlanarImage& value_channel,
                                               const RetinexParams& p) {
  validate(p);
  if (value_channel.channels != 1)
    throw std::invalid_argument("initialize: expected the single-channel value image");

  // Blur over the whole image, not per patch: the kernel radius exceeds the
  // patch, and a shared seed keeps neighboring patches consistent.
  PlanarImage l0 = gaussian_blur(value_channel, kInitBlurSigma);
  for (double& v : l0.data) v = std::max(v, p.l_floor);

  PlanarImage r0(value_channel.height, value_channel.width, 1);
  for (size_t i = 0; i < r0.data.size(); ++i)
    r0.data[i] = std::clamp(value_channel.data[i] / l0.data[i], p.r_floor, kReflectanceCap);
  return {std::move(l0), std::move(r0)};
}

std::vector<PatchSolveRecord> solve_patch(PatchSystem& ps, const RetinexParams& p,
                                          const SolveOptions& opts) {
  validate(p);
  check_patch(ps);
  check_positive(ps.l, "illumination");
  check_positive(ps.r, "reflectance");

  const int n2 = ps.n * ps.n;
  const int max_iter = default_max_iter(n2);
  std::vector<PatchSolveRecord> records;

  auto inner_solve = [&](const SparseSymMatrix& a, const std::vector<double>& b,
                         PatchSolveRecord::System which, int outer) {
    DiagPreconditioner pre;
    if (opts.precondition) pre = build_jacobi(a);
    auto [x, rep] = cg_solve(a, b, p.cg_tol, max_iter, opts.precondition ? &pre : nullptr);
    if (!rep.converged) {
      const char* name =
          which == PatchSolveRecord::System::reflectance ? "reflectance" : "illumination";
      throw std::runtime_error(std::string(name) + " solve did not converge within " +
                               std::to_string(max_iter) + " iterations (outer pass " +
                               std::to_string(outer) + ")");
    }
    if (opts.track_conditioning && outer == 0) {
      rep.kappa_before = estimate_condition_number(a, CondMethod::dense_eig);
      if (opts.precondition)
        rep.kappa_after =
            estimate_condition_number(apply_jacobi(a, pre), CondMethod::dense_eig);
    }
    records.push_back({which, outer, rep});
    return std::move(x);
  };

  for (int outer = 0; outer < p.outer_iters; ++outer) {
    auto [ar, br] = reflectance_system(ps, p);
    auto r_new = inner_solve(ar, br, PatchSolveRecord::System::reflectance, outer);
    for (double& v : r_new) v = std::clamp(v, p.r_floor, kReflectanceCap);
    const double dr = relative_change(ps.r, r_new);
    ps.r = std::move(r_new);

    auto [al, bl] = illumination_system(ps, p);
    auto l_new = inner_solve(al, bl, PatchSolveRecord::System::illumination, outer);
    for (double& v : l_new) v = std::clamp(v, p.l_floor, 1.0);
    const double dl = relative_change(ps.l, l_new);
    ps.l = std::move(l_new);

    if (std::max(dr, dl) <= p.outer_tol) break;
  }
  return records;
}

std::vector<double> gamma_correct(std::span<const double> l, std::span<const double> r,
                                  double gamma) {
  if (l.size() != r.size()) throw std::invalid_argument("gamma_correct: dimension mismatch");
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw std::invalid_argument("gamma_correct: gamma must lie in (0, 1)");
  std::vector<double> x(l.size());
  for (size_t i = 0; i < l.size(); ++i) {
    if (!(l[i] > 0.0))
      throw std::invalid_argument("gamma_correct: illumination must be strictly positive");
    x[i] = std::clamp(std::pow(l[i], gamma) * r[i], 0.0, 1.0);
  }
  return x;
}

std::vector<double> extract_patch(const PlanarImage& single, int py, int px, int n) {
  if (single.channels != 1)
    throw std::invalid_argument("extract_patch: expected a single-channel image");
  std::vector<double> out(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out[a * n + b] = single.at(0, py * n + a, px * n + b);
  return out;
}

void insert_patch(PlanarImage& single, int py, int px, int n, std::span<const double> vals) {
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) single.at(0, py * n + a, px * n + b) = vals[a * n + b];
}

PlanarImage restore_color(const PlanarImage& observed, const PlanarImage& v_in,
                          const PlanarImage& v_out) {
  if (!v_in.same_shape(v_out) || v_in.channels != 1)
    throw std::invalid_argument("restore_color: value channels must match and be planar");
  if (observed.height != v_in.height || observed.width != v_in.width)
    throw std::invalid_argument("restore_color: image dimensions must match");
  if (observed.channels == 1) {
    PlanarImage out = v_out;
    out.clamp01();
    return out;
  }

  constexpr double kChromaFloor = 1e-3;  // guards the ratio in near-black pixels
  PlanarImage out(observed.height, observed.width, 3);
  const size_t plane = observed.plane_size();
  for (size_t i = 0; i < plane; ++i) {
    const double ratio = v_out.data[i] / std::max(v_in.data[i], kChromaFloor);
    for (int c = 0; c < 3; ++c)
      out.data[c * plane + i] = std::clamp(observed.data[c * plane + i] * ratio, 0.0, 1.0);
  }
  return out;
}

namespace detail {

// One patch end to end; shared by the parallel and the serial reference paths
// so their outputs agree bitwise.
PatchReport process_patch(const PlanarImage& v, const PlanarImage& l0, const PlanarImage& r0,
                          PlanarImage& x_out, int py, int px, int patches_x,
                          const RetinexParams& p, const EnhanceOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = p.patch_size;

  PatchSystem ps;
  ps.n = n;
  ps.mu_r = p.mu_r;
  ps.mu_l = p.mu_l;
  ps.y = extract_patch(v, py, px, n);
  ps.l = extract_patch(l0, py, px, n);
  ps.r = extract_patch(r0, py, px, n);

  SolveOptions so;
  so.precondition = opts.precondition;
  so.track_conditioning = opts.track_conditioning;

  std::vector<PatchSolveRecord> records;
  try {
    records = solve_patch(ps, p, so);
  } catch (const std::exception& e) {
    throw std::runtime_error("patch (" + std::to_string(py) + ", " + std::to_string(px) +
                             "): " + e.what());
  }

  insert_patch(x_out, py, px, n, gamma_correct(ps.l, ps.r, p.gamma));

  PatchReport rep;
  rep.py = py;
  rep.px = px;
  rep.index = py * patches_x + px;
  for (const auto& rec : records) {
    rep.outer_iters_run = std::max(rep.outer_iters_run, rec.outer_iter + 1);
    rep.cg_iterations += rec.report.iterations;
    rep.max_rel_residual = std::max(rep.max_rel_residual, rec.report.final_relative_residual);
    rep.all_converged = rep.all_converged && rec.report.converged;
    if (rec.outer_iter == 0) {
      if (rec.system == PatchSolveRecord::System::reflectance) {
        rep.kappa_r_before = rec.report.kappa_before;
        rep.kappa_r_after = rec.report.kappa_after;
      } else {
        rep.kappa_l_before = rec.report.kappa_before;
        rep.kappa_l_after = rec.report.kappa_after;
      }
    }
  }
  rep.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace detail

std::pair<PlanarImage, EnhanceReport> enhance_image(const PlanarImage& img,
                                                    const RetinexParams& p,
                                                    const EnhanceOptions& opts) {
  validate(p);
  const int n = p.patch_size;
  if (img.height == 0 || img.width == 0)
    throw std::invalid_argument("enhance_image: empty image");
  if (img.height % n != 0 || img.width % n != 0)
    throw std::invalid_argument(
        "enhance_image: image dimensions " + std::to_string(img.width) + "x" +
        std::to_string(img.height) + " are not multiples of the patch size " +
        std::to_string(n) + "; crop or resize first");

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

#ifdef _OPENMP
  const int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#else
  const int threads = 1;
  (void)threads;
#endif

  std::exception_ptr err;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (int t = 0; t < total; ++t) {
    bool skip;
#ifdef _OPENMP
#pragma omp critical(lowlight_enhance_err)
#endif
    skip = static_cast<bool>(err);
    if (skip) continue;
    try {
      const int py = t / report.patches_x;
      const int px = t % report.patches_x;
      report.patches[t] = detail::process_patch(v, l0, r0, x_out, py, px, report.patches_x,
                                                p, opts);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(lowlight_enhance_err)
#endif
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  return {restore_color(img, v, x_out), std::move(report)};
}

}  // namespace lowlight
