#pragma once

#include <utility>
#include <vector>

#include "qmlab/exponents.hpp"
#include "qmlab/rational.hpp"

namespace qmlab {

// Concentration-scale heuristics: a frequency-h quasimode concentrated at
// scale alpha (an h^{1-2alpha} x (h^{1-alpha})^{n-1} tube) contributes the
// exponent E(alpha) to the L^p norm over the neighborhood Sigma_beta when the
// tube's long axis lies inside the submanifold.  Maximizing E over
// alpha in [0, 1/2] reproduces sigma(n,k,p,beta) and tells which scale is
// extremal; the kernel-decay numerology below tells which propagation time
// scale dominates.

// E(alpha) = (n-1)(1-alpha)/2
//            - [(1-2alpha) + (1-alpha)(k-1) + (n-k) max(1-alpha, beta)] / p.
// Requires alpha in [0,1/2] and beta pre-clamped to [1/2,1].
double tube_exponent(int n, int k, const LebesgueIndex& p, double beta, double alpha);
Rational tube_exponent_exact(int n, int k, const LebesgueIndex& p,
                             const Rational& beta, const Rational& alpha);

struct ScaleQuery {
  int n = 2;
  int k = 1;
  LebesgueIndex p{2};
  double beta = 0.75;
  // Step of the verification scan over alpha (the closed-form maximizer is
  // cross-checked against a brute-force grid scan at this resolution).
  Rational alpha_grid_step = Rational(1, 1024);
};

enum class CaseLabel {
  T0_point,             // unique maximizer alpha = 0 (point concentration)
  Thalf_tube,           // unique maximizer alpha = 1/2 (thinnest tube)
  T_one_minus_beta,     // unique maximizer at the kink alpha = 1 - beta
  all_scales_critical,  // a whole interval of maximizers (flat maximum)
};

const char* to_string(CaseLabel c);

struct Prediction {
  // Maximizing alpha values as closed intervals (E is concave piecewise
  // linear, so there is exactly one).
  std::vector<std::pair<Rational, Rational>> alpha_star;
  double exponent_at_max = 0.0;
  Rational exponent_exact;
  CaseLabel case_label = CaseLabel::T0_point;
  // A point contained in every maximizing interval; used when a single
  // concentration scale has to be picked (sweeps, reports).
  Rational representative_alpha;
  // Exponent e with |t-s| ~ h^e at the dominant contribution: e = 1-2 alpha*.
  double critical_time_scale = 1.0;
};

// Closed-form argmax of E over [0,1/2], cross-checked against a grid scan and
// against sigma(n,k,p,beta); any disagreement raises VerificationError.
Prediction predict_alpha(const ScaleQuery& query);

enum class ContributionRegime { smallest_scale, largest_scale, all_scales };
const char* to_string(ContributionRegime r);

// Classifies the time-scale integral by comparing gamma_p * p/2 with 1
// (tolerance 1e-12 for the critical case).
ContributionRegime contribution_regime(double gamma_p, const LebesgueIndex& p);

// Heuristic L^2 -> L^2 bound for the frequency-localized half-wave kernel
// restricted to Sigma_beta, at time separation tau:
//   1                                      for tau <= h^{2 beta - 1},
//   h^{(beta-1)(n-k)/2} (h+tau)^{-(n-k)/2} for tau >= h^{2 beta - 1}.
// The two regimes are deliberately kept as printed; they do not agree at the
// boundary (the model is a heuristic, not a single formula).
double kernel_l2_bound(int n, int k, double beta, double h, double tau);

// Exponent bookkeeping for the dispersive bounds h^{-kappa}(h+tau)^{-gamma}:
// the L^1 -> L^infty pair is the kernel sup bound, the L^2 -> L^2 pair the
// Sigma_beta bound above (zero in the small-tau regime).
struct DecayProfile {
  double kappa_inf = 0.0;
  double gamma_inf = 0.0;
  double kappa_2 = 0.0;
  double gamma_2 = 0.0;
  double tau = 0.0;
};

DecayProfile decay_profile(int n, int k, double beta, double h, double tau);

// Riesz-Thorin interpolation with theta = 2/p: the decay exponent of the
// L^{p'} -> L^p bound.
double interpolated_gamma(const DecayProfile& profile, const LebesgueIndex& p);

}  // namespace qmlab
