#pragma once

#include <complex>
#include <vector>

#include "qmlab/geometry.hpp"

namespace qmlab {

// Flat-model quasimode: the inverse semiclassical Fourier transform of the
// indicator of a spectral cap
//   {xi = (r, omega) : |r - 1| < h, angle(omega, omega0) < epsilon_cap h^alpha}
// with constant amplitude h^{-1/2 - alpha(n-1)/2} on it.  The resulting field
//   T(x) = (2 pi h)^{-n/2} integral e^{(i/h) <x, xi>} f(xi) dxi
// is large on an h^{1-2alpha} x (h^{1-alpha})^{n-1} tube along omega0.
struct SpectralCap {
  int n = 2;                 // ambient dimension, 2 or 3
  double h = 0.0625;         // semiclassical parameter, in (0,1)
  double alpha = 0.0;        // concentration scale, in [0, 1/2]
  Vec omega0;                // unit direction; empty = e1
  double epsilon_cap = 1.0;  // cap width constant

  void validate() const;
  Vec direction() const;       // omega0 with the e1 default filled in
  double amplitude() const;    // h^{-1/2 - alpha(n-1)/2}
  double cap_angle() const;    // epsilon_cap * h^alpha (geodesic half-width)
  // Exact squared L^2 norm of the Fourier-side profile (= the physical-side
  // squared L^2 norm by Plancherel); h-independent for n = 2 and pinched in
  // an h-independent band for n = 3.
  double l2_norm_sq() const;
};

struct EvalOptions {
  // Multiplies the automatic angular node counts; doubling it is the standard
  // convergence check.
  double node_factor = 1.0;
  // Per-point cap on angular quadrature nodes.  Points far from the origin
  // need proportionally more nodes; exceeding the budget raises BudgetError
  // instead of returning an under-resolved value.
  long long node_budget = 1 << 22;
  int threads = 1;
};

// Evaluates T at each point (optionally pre-composed with a rigid motion, so
// the field value at x is that of the unmoved field at M^{-1} x).  Composite
// Gauss-Legendre quadrature in polar/spherical frequency coordinates with at
// least 8 nodes per phase period; deterministic for fixed inputs, including
// across thread counts.
std::vector<std::complex<double>> evaluate(const SpectralCap& cap,
                                           const std::vector<Vec>& points,
                                           const RigidMotion* motion = nullptr,
                                           const EvalOptions& options = {});

// Same quadrature with the spectral multiplier (|xi|^2 - 1) inserted: the
// physical-side defect field (h^2 Laplacian + 1 applied to T, up to sign
// conventions), used to check the quasimode property numerically.
std::vector<std::complex<double>> evaluate_defect(const SpectralCap& cap,
                                                  const std::vector<Vec>& points,
                                                  const RigidMotion* motion = nullptr,
                                                  const EvalOptions& options = {});

// sup over the cap of ||xi|^2 - 1| = 2h + h^2, the exact Fourier-side bound
// for the relative L^2 defect.
double defect_bound(const SpectralCap& cap);

// Angular node count evaluate would use at this point (product over angular
// axes); the same arithmetic that drives the budget check, exposed for
// experiment bookkeeping.
long long node_count(const SpectralCap& cap, const Vec& point,
                     const RigidMotion* motion = nullptr, const EvalOptions& options = {});

// The box {|x . omega0| < eps h^{1-2alpha}, |x_perp| < eps h^{1-alpha}} in
// the cap's frame, composed with an optional rigid motion.
OrientedBox tube_region(const SpectralCap& cap, double eps,
                        const RigidMotion* motion = nullptr);

// Evaluates |T| on a midpoint lattice (samples_per_axis per axis) inside
// tube_region(cap, eps) and returns min |T| * h^{(n-1)(1-alpha)/2}.  The
// returned constant should be stable in h; eps must be <= 0.1 so the phase
// stays far from its first oscillation across the tube.
double verify_tube_bound(const SpectralCap& cap, double eps, int samples_per_axis,
                         const EvalOptions& options = {});

// Closed-form value of T at x = 0 (the phase is identically 1 there, so the
// integral is the cap volume with the radial weight r^{n-1}).
std::complex<double> origin_value_closed_form(const SpectralCap& cap);

}  // namespace qmlab
