#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lowlight/graphs.hpp"
#include "lowlight/image.hpp"
#include "lowlight/solver.hpp"

namespace lowlight {

struct RetinexParams {
  double mu_r = 1.0;    // reflectance regularization strength
  double mu_l = 0.1;    // illumination regularization strength
  double sigma_r = 1.0;
  double sigma_l = 0.2;
  double sigma_c = 1.0;
  int neighborhood_radius = 2;
  double gamma = 0.5;       // in (0, 1)
  int patch_size = 5;       // >= 3 so gradient graphs have at least two nodes
  int outer_iters = 10;
  double outer_tol = 1e-3;  // relative change, inf-norm
  double cg_tol = 1e-6;
  double l_floor = 1e-3;
  double r_floor = 1e-3;
};

// Reflectance is capped here during initialization and after each update;
// keeps r bounded where the observation outruns the illumination estimate.
inline constexpr double kReflectanceCap = 10.0;
inline constexpr double kInitBlurSigma = 5.0;

void validate(const RetinexParams& p);  // throws std::invalid_argument

// One n x n patch of the decomposition y = l . r, all vectors row-major of
// length n^2 with l, r strictly positive.
struct PatchSystem {
  int n = 5;
  std::vector<double> y;
  std::vector<double> l;
  std::vector<double> r;
  double mu_r = 1.0;
  double mu_l = 0.1;
};

// One graph per patch row and per patch column.
struct PatchGraphs {
  std::vector<LineGraph> rows;
  std::vector<LineGraph> cols;
};

// Flat indices of row k / column k of an n x n row-major patch. These define
// how the per-line operators embed into the patch domain.
std::vector<int> row_indices(int n, int k);
std::vector<int> col_indices(int n, int k);

// Graphs over the current reflectance values (range bandwidth sigma_r).
PatchGraphs build_reflectance_graphs(const PatchSystem& ps, const RetinexParams& p);
// Graphs over forward differences of the current illumination (bandwidth
// sigma_l); each graph has n - 1 nodes.
PatchGraphs build_gradient_graphs(const PatchSystem& ps, const RetinexParams& p);

// (diag(l)^2 + mu_r sum_k embedded Laplacians) r = diag(l) y. Off-diagonals
// are non-positive, so the matrix is strictly diagonally dominant.
std::pair<SparseSymMatrix, std::vector<double>> assemble_reflectance_system(
    const PatchSystem& ps, const std::vector<SparseSymMatrix>& row_laplacians,
    const std::vector<SparseSymMatrix>& col_laplacians);

// (diag(r)^2 + mu_l sum_k embedded lifted gradient Laplacians) l = diag(r) y.
// Positive definite but not diagonally dominant in general.
std::pair<SparseSymMatrix, std::vector<double>> assemble_illumination_system(
    const PatchSystem& ps, const std::vector<SparseSymMatrix>& row_gng,
    const std::vector<SparseSymMatrix>& col_gng);

// Convenience: rebuild graphs from the current ps state and assemble.
std::pair<SparseSymMatrix, std::vector<double>> reflectance_system(const PatchSystem& ps,
                                                                   const RetinexParams& p);
std::pair<SparseSymMatrix, std::vector<double>> illumination_system(const PatchSystem& ps,
                                                                    const RetinexParams& p);

// Data term plus edge-wise regularizers, evaluated on fixed graphs. These are
// the explicit objectives the linear systems minimize; kept edge-wise so they
// form an independent route against the assembled matrices.
double reflectance_objective(const PatchSystem& ps, const PatchGraphs& graphs,
                             std::span<const double> r);
double illumination_objective(const PatchSystem& ps, const PatchGraphs& gradient_graphs,
                              std::span<const double> l);

// Smoothed-value illumination seed and the reflectance ratio it implies:
// l0 = max(blur(v), l_floor) computed on the full image, r0 = clamp(v / l0).
std::pair<PlanarImage, PlanarImage> initialize(const PlanarImage& value_channel,
                                               const RetinexParams& p);

struct SolveOptions {
  bool precondition = true;
  bool track_conditioning = false;  // condition numbers on the first outer pass
};

struct PatchSolveRecord {
  enum class System { reflectance, illumination };
  System system = System::reflectance;
  int outer_iter = 0;
  SolveReport report;
};

// Alternates the two linear solves until the relative change of both factors
// drops below outer_tol or outer_iters is reached. Updates ps.l and ps.r in
// place; throws std::runtime_error if any inner solve fails to converge.
std::vector<PatchSolveRecord> solve_patch(PatchSystem& ps, const RetinexParams& p,
                                          const SolveOptions& opts = {});

// x = l^gamma . r, clamped to [0, 1]. gamma in (0, 1) brightens shadows.
std::vector<double> gamma_correct(std::span<const double> l, std::span<const double> r,
                                  double gamma);

std::vector<double> extract_patch(const PlanarImage& single, int py, int px, int n);
void insert_patch(PlanarImage& single, int py, int px, int n, std::span<const double> vals);

// Rescales RGB by the per-pixel value-channel ratio v_out / v_in; hue and
// saturation carry over from the observation. Single-channel input returns
// v_out directly.
PlanarImage restore_color(const PlanarImage& observed, const PlanarImage& v_in,
                          const PlanarImage& v_out);

struct EnhanceOptions {
  bool precondition = true;
  int threads = 0;  // 0 = library default
  bool track_conditioning = true;
};

struct PatchReport {
  int index = 0, py = 0, px = 0;
  int outer_iters_run = 0;
  long cg_iterations = 0;
  double max_rel_residual = 0.0;
  bool all_converged = true;
  std::optional<double> kappa_r_before, kappa_r_after;
  std::optional<double> kappa_l_before, kappa_l_after;
  double wall_ms = 0.0;
};

struct EnhanceReport {
  int patches_y = 0, patches_x = 0;
  int patch_size = 0;
  std::vector<PatchReport> patches;  // ordered by index = py * patches_x + px
};

// Full image path: value channel, initialization, one independent
// decomposition per patch (the patch loop is the parallel region), gamma
// recomposition, color restoration. Dimensions must be multiples of
// patch_size. Deterministic for any thread count.
std::pair<PlanarImage, EnhanceReport> enhance_image(const PlanarImage& img,
                                                    const RetinexParams& p,
                                                    const EnhanceOptions& opts = {});

namespace detail {

// One patch end to end: slice, alternate solves, gamma, write back. Both the
// parallel loop and the serial reference call this, which is what makes their
// outputs bitwise comparable.
PatchReport process_patch(const PlanarImage& v, const PlanarImage& l0, const PlanarImage& r0,
                          PlanarImage& x_out, int py, int px, int patches_x,
                          const RetinexParams& p, const EnhanceOptions& opts);

}  // namespace detail

}  // namespace lowlight
