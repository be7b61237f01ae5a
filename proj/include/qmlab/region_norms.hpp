#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qmlab/flat_quasimode.hpp"
#include "qmlab/geometry.hpp"
#include "qmlab/rational.hpp"

namespace qmlab {

// The coordinate plane {z = 0} (x = (y, z), y in R^k) placed in the ambient
// space by a rigid motion.
struct FlatSubmanifold {
  int n = 2;
  int k = 1;
  RigidMotion frame;
  void validate() const;  // 1 <= k <= n-1
};

// Sigma_beta: {|y|_inf <= extent, |z|_inf <= h^beta} in the submanifold's
// coordinates.
struct TubularNeighborhood {
  FlatSubmanifold submanifold;
  double beta = 0.5;
  double h = 0.0625;
  double extent = 0.5;  // half-width of the ambient box in the y-directions
  void validate() const;
  Vec half_widths() const;  // per-axis: y's get extent, z's get h^beta
};

// Midpoint-grid resolution: every axis step <= max_step, which itself must
// be <= h/4 (the field oscillates at wavelength ~h).
struct NormGrid {
  double max_step = 0.015625;
};

// L^p over the region of |T| / ||f||_2 (the L2-normalized field), by tensor
// midpoint quadrature with counts ceil(side/max_step) per axis; grid max for
// p = infinity.  Deterministic for fixed inputs.
double lp_norm(const SpectralCap& cap, const RigidMotion* motion, const TubularNeighborhood& region,
               const LebesgueIndex& p, const NormGrid& grid, const EvalOptions& options = {});

// Same measurement over an explicit axis-aligned ambient box (e.g. the unit
// box for the Plancherel sanity bound).
double lp_norm_box(const SpectralCap& cap, const RigidMotion* motion, const Box& box,
                   const LebesgueIndex& p, const NormGrid& grid, const EvalOptions& options = {});

// Raw-field variant for arbitrary integrands (no normalization); the
// resolution rule is checked against region.h.
double lp_norm_field(const std::function<std::complex<double>(const Vec&)>& field,
                     const TubularNeighborhood& region, const LebesgueIndex& p,
                     const NormGrid& grid);

struct LpNormDetail {
  double norm = 0.0;       // lp_norm over the region
  double slice_sup = 0.0;  // sup over |z| slices of the slice L^p(dy) norm
  double slab_factor = 0.0;  // (2 h^beta)^{(n-k)/p}; slab bound = slice_sup * slab_factor
  long long corner_nodes = 0;  // angular nodes at the farthest region corner
};

// lp_norm plus the slice decomposition behind the slab inequality
// ||T||_{L^p(region)} <= sup_slice ||T||_{L^p(dy)} * (2 h^beta)^{(n-k)/p}.
LpNormDetail lp_norm_detailed(const SpectralCap& cap, const RigidMotion* motion,
                              const TubularNeighborhood& region, const LebesgueIndex& p,
                              const NormGrid& grid, const EvalOptions& options = {});

struct SweepConfig {
  int n = 2;
  int k = 1;
  LebesgueIndex p = LebesgueIndex::infinity();
  double beta = 0.5;
  std::optional<double> alpha;  // empty: use predict_alpha's representative scale
  std::vector<double> h_list;
  double epsilon_cap = 1.0;
  double extent = 0.5;
  double step_factor = 0.25;  // grid max_step = step_factor * h
  EvalOptions options;
  bool timings = false;  // ms stays 0 unless set, keeping outputs re-run-identical
};

struct ExperimentRecord {
  int n = 0;
  int k = 0;
  LebesgueIndex p = LebesgueIndex::infinity();
  double beta = 0.0;
  double alpha = 0.0;
  double h = 0.0;
  std::string region_id;
  double norm = 0.0;
  long long nodes = 0;  // angular nodes at the farthest region corner
  double ms = 0.0;
};

// One lp_norm measurement per h over Sigma_beta, tube aligned with the first
// submanifold direction.  Needs at least 3 h values.
std::vector<ExperimentRecord> sweep(const SweepConfig& config);

struct FitResult {
  double slope = 0.0;      // d log(norm) / d log(h); norm ~ h^slope
  double intercept = 0.0;
  double max_residual = 0.0;
};

// Least squares of log(norm) against log(h).  The saturation exponent in the
// h^{-sigma} sense is -slope.
FitResult fit_exponent(const std::vector<ExperimentRecord>& records);

// CSV with the mandatory header n,k,p,beta,alpha,h,norm,nodes,ms; floats at
// 17 significant digits.
std::string records_to_csv(const std::vector<ExperimentRecord>& records);

nlohmann::json record_to_json(const ExperimentRecord& record);
nlohmann::json fit_to_json(const FitResult& fit);

// 17-significant-digit float formatting shared by all CSV/JSON writers.
std::string format_double(double v);

}  // namespace qmlab
