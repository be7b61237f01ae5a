#include "qmlab/region_norms.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "qmlab/errors.hpp"
#include "qmlab/quadrature.hpp"
#include "qmlab/scale_predictor.hpp"

namespace qmlab {
namespace {

struct MidpointGrid {
  std::vector<int> counts;
  Vec steps;
  Vec lo;          // first midpoint = lo + step/2
  double cell = 1.0;
  std::size_t total = 1;
};

// Exact tiling: counts = ceil(side/max_step), step = side/counts, so the
// cells cover the box with no overhang.
MidpointGrid make_grid(const Vec& half, double max_step) {
  MidpointGrid g;
  const std::size_t dims = half.size();
  g.counts.resize(dims);
  g.steps.resize(dims);
  g.lo.resize(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    const double side = 2.0 * half[d];
    const int c = static_cast<int>(std::ceil(side / max_step - 1e-12));
    g.counts[d] = std::max(1, c);
    g.steps[d] = side / g.counts[d];
    g.lo[d] = -half[d];
    g.cell *= g.steps[d];
    g.total *= static_cast<std::size_t>(g.counts[d]);
    if (g.total > (std::size_t{1} << 31))
      throw BudgetError("lp_norm: grid exceeds 2^31 points; coarsen max_step or shrink the region");
  }
  return g;
}

Vec grid_point(const MidpointGrid& g, std::size_t flat) {
  const std::size_t dims = g.counts.size();
  Vec x(dims);
  for (std::size_t d = dims; d-- > 0;) {
    const std::size_t c = static_cast<std::size_t>(g.counts[d]);
    x[d] = g.lo[d] + (static_cast<double>(flat % c) + 0.5) * g.steps[d];
    flat /= c;
  }
  return x;
}

void check_resolution(double h, const NormGrid& grid) {
  if (!(grid.max_step > 0.0)) throw DomainError("lp_norm: max_step must be positive");
  if (grid.max_step > h / 4.0 * (1.0 + 1e-12))
    throw ResolutionError("lp_norm: grid step exceeds h/4, too coarse for wavelength-h oscillation");
}

double reduce_lp(const std::vector<double>& mags, const LebesgueIndex& p, double cell) {
  if (p.is_infinite()) {
    double mx = 0.0;
    for (double m : mags) mx = std::max(mx, m);
    return mx;
  }
  const double pd = p.to_double();
  std::vector<double> pw(mags.size());
  for (std::size_t i = 0; i < mags.size(); ++i) pw[i] = std::pow(mags[i], pd);
  const double total = pairwise_sum(pw.data(), pw.size()) * cell;
  return std::pow(total, 1.0 / pd);
}

std::vector<double> normalized_magnitudes(const SpectralCap& cap, const RigidMotion* motion,
                                          const MidpointGrid& grid, const RigidMotion* frame,
                                          const EvalOptions& options) {
  std::vector<Vec> pts(grid.total);
  for (std::size_t i = 0; i < grid.total; ++i) {
    Vec c = grid_point(grid, i);
    pts[i] = (frame && !frame->is_identity()) ? frame->apply(c) : std::move(c);
  }
  const std::vector<std::complex<double>> vals = evaluate(cap, pts, motion, options);
  const double invnorm = 1.0 / std::sqrt(cap.l2_norm_sq());
  std::vector<double> mags(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) mags[i] = std::abs(vals[i]) * invnorm;
  return mags;
}

}  // namespace

void FlatSubmanifold::validate() const {
  if (n < 2) throw DomainError("FlatSubmanifold: n must be >= 2");
  if (k < 1 || k > n - 1) throw DomainError("FlatSubmanifold: k must lie in [1, n-1]");
  if (!frame.is_identity()) frame.validate(n);
}

void TubularNeighborhood::validate() const {
  submanifold.validate();
  if (!(h > 0.0) || !(h < 1.0)) throw DomainError("TubularNeighborhood: h must lie in (0,1)");
  if (!std::isfinite(beta)) throw DomainError("TubularNeighborhood: beta must be finite");
  if (!(extent > 0.0)) throw DomainError("TubularNeighborhood: empty region (extent <= 0)");
}

Vec TubularNeighborhood::half_widths() const {
  Vec half(submanifold.n);
  const double hw = std::pow(h, beta);
  for (int d = 0; d < submanifold.n; ++d) half[d] = d < submanifold.k ? extent : hw;
  return half;
}

double lp_norm(const SpectralCap& cap, const RigidMotion* motion, const TubularNeighborhood& region,
               const LebesgueIndex& p, const NormGrid& grid, const EvalOptions& options) {
  cap.validate();
  region.validate();
  if (region.submanifold.n != cap.n)
    throw DomainError("lp_norm: region dimension does not match the cap");
  if (region.h != cap.h) throw DomainError("lp_norm: region h must equal the cap h");
  check_resolution(cap.h, grid);
  const MidpointGrid g = make_grid(region.half_widths(), grid.max_step);
  const std::vector<double> mags =
      normalized_magnitudes(cap, motion, g, &region.submanifold.frame, options);
  return reduce_lp(mags, p, g.cell);
}

double lp_norm_box(const SpectralCap& cap, const RigidMotion* motion, const Box& box,
                   const LebesgueIndex& p, const NormGrid& grid, const EvalOptions& options) {
  cap.validate();
  if (box.dim() != cap.n || box.hi.size() != box.lo.size())
    throw DomainError("lp_norm_box: box dimension does not match the cap");
  check_resolution(cap.h, grid);
  Vec half(box.dim());
  RigidMotion shift;
  shift.translation.resize(box.dim());
  for (int d = 0; d < box.dim(); ++d) {
    if (!(box.hi[d] > box.lo[d])) throw DomainError("lp_norm_box: empty box");
    half[d] = 0.5 * (box.hi[d] - box.lo[d]);
    shift.translation[d] = 0.5 * (box.hi[d] + box.lo[d]);
  }
  const MidpointGrid g = make_grid(half, grid.max_step);
  const std::vector<double> mags = normalized_magnitudes(cap, motion, g, &shift, options);
  return reduce_lp(mags, p, g.cell);
}

double lp_norm_field(const std::function<std::complex<double>(const Vec&)>& field,
                     const TubularNeighborhood& region, const LebesgueIndex& p,
                     const NormGrid& grid) {
  region.validate();
  check_resolution(region.h, grid);
  const MidpointGrid g = make_grid(region.half_widths(), grid.max_step);
  std::vector<double> mags(g.total);
  for (std::size_t i = 0; i < g.total; ++i) {
    Vec c = grid_point(g, i);
    const Vec x = region.submanifold.frame.is_identity() ? c : region.submanifold.frame.apply(c);
    mags[i] = std::abs(field(x));
  }
  return reduce_lp(mags, p, g.cell);
}

LpNormDetail lp_norm_detailed(const SpectralCap& cap, const RigidMotion* motion,
                              const TubularNeighborhood& region, const LebesgueIndex& p,
                              const NormGrid& grid, const EvalOptions& options) {
  cap.validate();
  region.validate();
  if (region.submanifold.n != cap.n)
    throw DomainError("lp_norm: region dimension does not match the cap");
  if (region.h != cap.h) throw DomainError("lp_norm: region h must equal the cap h");
  check_resolution(cap.h, grid);
  const int n = region.submanifold.n;
  const int k = region.submanifold.k;
  const MidpointGrid g = make_grid(region.half_widths(), grid.max_step);
  const std::vector<double> mags =
      normalized_magnitudes(cap, motion, g, &region.submanifold.frame, options);

  LpNormDetail out;
  out.norm = reduce_lp(mags, p, g.cell);
  // Row-major with the z axes last, so a z-slice is a strided gather.
  std::size_t ny = 1, nz = 1;
  double cell_y = 1.0;
  for (int d = 0; d < n; ++d) {
    if (d < k) {
      ny *= static_cast<std::size_t>(g.counts[d]);
      cell_y *= g.steps[d];
    } else {
      nz *= static_cast<std::size_t>(g.counts[d]);
    }
  }
  std::vector<double> slice(ny);
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t y = 0; y < ny; ++y) slice[y] = mags[y * nz + z];
    out.slice_sup = std::max(out.slice_sup, reduce_lp(slice, p, cell_y));
  }
  out.slab_factor =
      std::pow(2.0 * std::pow(region.h, region.beta), (n - k) * p.reciprocal().to_double());
  Vec corner = region.half_widths();
  const Vec corner_ambient =
      region.submanifold.frame.is_identity() ? corner : region.submanifold.frame.apply(corner);
  out.corner_nodes = node_count(cap, corner_ambient, motion, options);
  return out;
}

std::vector<ExperimentRecord> sweep(const SweepConfig& config) {
  if (config.h_list.size() < 3)
    throw DomainError("sweep: h_list needs at least 3 values for a meaningful fit");
  if (config.n < 2 || config.n > 3) throw DomainError("sweep: n must be 2 or 3");
  if (config.k < 1 || config.k > config.n - 1) throw DomainError("sweep: k must lie in [1, n-1]");

  double alpha;
  if (config.alpha) {
    alpha = *config.alpha;
    if (!(alpha >= 0.0) || !(alpha <= 0.5)) throw DomainError("sweep: alpha must lie in [0, 1/2]");
  } else {
    ScaleQuery q;
    q.n = config.n;
    q.k = config.k;
    q.p = config.p;
    q.beta = config.beta;
    alpha = predict_alpha(q).representative_alpha.to_double();
  }

  std::ostringstream rid;
  rid << "Sigma_beta[k=" << config.k << ",beta=" << format_double(config.beta) << "]";

  std::vector<ExperimentRecord> records;
  records.reserve(config.h_list.size());
  for (double h : config.h_list) {
    SpectralCap cap;
    cap.n = config.n;
    cap.h = h;
    cap.alpha = alpha;
    cap.epsilon_cap = config.epsilon_cap;
    TubularNeighborhood region;
    region.submanifold.n = config.n;
    region.submanifold.k = config.k;
    region.beta = config.beta;
    region.h = h;
    region.extent = config.extent;
    NormGrid grid{config.step_factor * h};

    ExperimentRecord rec;
    rec.n = config.n;
    rec.k = config.k;
    rec.p = config.p;
    rec.beta = config.beta;
    rec.alpha = alpha;
    rec.h = h;
    rec.region_id = rid.str();
    const auto t0 = std::chrono::steady_clock::now();
    rec.norm = lp_norm(cap, nullptr, region, config.p, grid, config.options);
    if (config.timings) {
      const auto t1 = std::chrono::steady_clock::now();
      rec.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    const Vec corner = region.half_widths();
    rec.nodes = node_count(cap, corner, nullptr, config.options);
    records.push_back(std::move(rec));
  }
  return records;
}

FitResult fit_exponent(const std::vector<ExperimentRecord>& records) {
  std::vector<double> xs, ys;
  for (const ExperimentRecord& r : records) {
    if (!(r.h > 0.0)) throw DomainError("fit_exponent: h must be positive");
    if (!(r.norm > 0.0)) throw DomainError("fit_exponent: norms must be positive to fit in log space");
    xs.push_back(std::log(r.h));
    ys.push_back(std::log(r.norm));
  }
  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw DomainError("fit_exponent: need at least 3 distinct h values");

  const double m = static_cast<double>(xs.size());
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= m;
  ybar /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_exponent: degenerate h values");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  for (std::size_t i = 0; i < xs.size(); ++i)
    fit.max_residual = std::max(fit.max_residual, std::abs(ys[i] - (fit.intercept + fit.slope * xs[i])));
  return fit;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << "n,k,p,beta,alpha,h,norm,nodes,ms\n";
  for (const ExperimentRecord& r : records) {
    out << r.n << ',' << r.k << ',' << r.p.str() << ',' << format_double(r.beta) << ','
        << format_double(r.alpha) << ',' << format_double(r.h) << ',' << format_double(r.norm)
        << ',' << r.nodes << ',' << format_double(r.ms) << '\n';
  }
  return out.str();
}

nlohmann::json record_to_json(const ExperimentRecord& record) {
  nlohmann::json j;
  j["n"] = record.n;
  j["k"] = record.k;
  j["p"] = record.p.str();
  j["beta"] = record.beta;
  j["alpha"] = record.alpha;
  j["h"] = record.h;
  j["region_id"] = record.region_id;
  j["norm"] = record.norm;
  j["nodes"] = record.nodes;
  j["ms"] = record.ms;
  return j;
}

nlohmann::json fit_to_json(const FitResult& fit) {
  nlohmann::json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["max_residual"] = fit.max_residual;
  return j;
}

}  // namespace qmlab
