#include "qmlab/scale_predictor.hpp"

#include <cmath>
#include <string>

#include "qmlab/errors.hpp"

namespace qmlab {

namespace {

const Rational kHalf(1, 2);
const Rational kZero(0);

void check_query(int n, int k, const LebesgueIndex& p) {
  if (n < 2) throw DomainError("scale_predictor: n must be >= 2");
  if (k < 1 || k > n - 1) throw DomainError("scale_predictor: k must satisfy 1 <= k <= n-1");
  if (p < Rational(2)) throw DomainError("scale_predictor: p must be >= 2");
}

Rational clamp_beta_exact(double beta) {
  if (!(beta > 0)) throw DomainError("scale_predictor: beta must be > 0");
  if (beta <= 0.5) return kHalf;
  if (beta >= 1.0) return Rational(1);
  return Rational::from_double(beta);
}

}  // namespace

const char* to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::T0_point: return "T0_point";
    case CaseLabel::Thalf_tube: return "Thalf_tube";
    case CaseLabel::T_one_minus_beta: return "T_one_minus_beta";
    case CaseLabel::all_scales_critical: return "all_scales_critical";
  }
  return "?";
}

const char* to_string(ContributionRegime r) {
  switch (r) {
    case ContributionRegime::smallest_scale: return "smallest_scale";
    case ContributionRegime::largest_scale: return "largest_scale";
    case ContributionRegime::all_scales: return "all_scales";
  }
  return "?";
}

Rational tube_exponent_exact(int n, int k, const LebesgueIndex& p,
                             const Rational& beta, const Rational& alpha) {
  check_query(n, k, p);
  if (alpha < kZero || alpha > kHalf) {
    throw DomainError("tube_exponent: alpha must lie in [0, 1/2]");
  }
  if (beta < kHalf || beta > Rational(1)) {
    throw DomainError("tube_exponent: beta must be pre-clamped to [1/2, 1]");
  }
  Rational one_minus_a = Rational(1) - alpha;
  Rational amplitude = Rational(n - 1, 2) * one_minus_a;
  Rational volume = (Rational(1) - Rational(2) * alpha) + one_minus_a * Rational(k - 1) +
                    Rational(n - k) * max(one_minus_a, beta);
  return amplitude - volume * p.reciprocal();
}

double tube_exponent(int n, int k, const LebesgueIndex& p, double beta, double alpha) {
  if (!std::isfinite(alpha)) throw DomainError("tube_exponent: alpha must be finite");
  if (!(beta >= 0.5 && beta <= 1.0)) {
    throw DomainError("tube_exponent: beta must be pre-clamped to [1/2, 1]");
  }
  if (!(alpha >= 0.0 && alpha <= 0.5)) {
    throw DomainError("tube_exponent: alpha must lie in [0, 1/2]");
  }
  return tube_exponent_exact(n, k, p, Rational::from_double(beta),
                             Rational::from_double(alpha))
      .to_double();
}

Prediction predict_alpha(const ScaleQuery& query) {
  check_query(query.n, query.k, query.p);
  if (query.alpha_grid_step <= kZero || query.alpha_grid_step > kHalf) {
    throw DomainError("predict_alpha: alpha_grid_step must lie in (0, 1/2]");
  }
  const int n = query.n;
  const int k = query.k;
  const LebesgueIndex& p = query.p;
  Rational beta = clamp_beta_exact(query.beta);
  Rational ip = p.reciprocal();
  Rational kink = Rational(1) - beta;  // in [0, 1/2]

  // E is piecewise linear with slopes s_left (alpha < kink) and s_right
  // (alpha > kink); concavity s_left >= s_right holds since k <= n.
  Rational s_left = -Rational(n - 1, 2) + Rational(n + 1) * ip;
  Rational s_right = -Rational(n - 1, 2) + Rational(k + 1) * ip;

  Rational lo, hi;
  if (s_left < kZero) {
    lo = hi = kZero;
  } else if (s_left == kZero) {
    lo = kZero;
    hi = kink;
  } else if (s_right < kZero) {
    lo = hi = kink;
  } else if (s_right == kZero) {
    lo = kink;
    hi = kHalf;
  } else {
    lo = hi = kHalf;
  }

  auto E = [&](const Rational& a) {
    return tube_exponent_exact(n, k, p, beta, a);
  };
  Rational best = E(lo);

  // Cross-check 1: the maximum must equal sigma (same clamped beta), exactly.
  ExponentResult sig = sigma(n, k, p, beta);
  if (sig.exact != best) {
    throw VerificationError(
        "predict_alpha: internal consistency error, max E(alpha) = " + best.str() +
        " does not equal sigma = " + sig.exact.str());
  }

  // Cross-check 2: brute-force scan over the alpha grid.
  const Rational step = query.alpha_grid_step;
  std::vector<Rational> grid;
  for (Rational a = kZero; a < kHalf; a = a + step) grid.push_back(a);
  grid.push_back(kHalf);
  Rational grid_best = E(grid[0]);
  for (const Rational& a : grid) grid_best = max(grid_best, E(a));
  if (grid_best > best) {
    throw VerificationError("predict_alpha: grid scan exceeds the closed-form maximum");
  }
  Rational max_slope = max(abs(s_left), abs(s_right));
  if (best - grid_best > max_slope * step) {
    throw VerificationError("predict_alpha: grid scan falls short of the closed-form maximum");
  }
  const Rational tie_band(1, 1000000000);
  for (const Rational& a : grid) {
    bool is_max = (grid_best - E(a)) <= tie_band;
    bool inside = (a >= lo - step) && (a <= hi + step);
    if (is_max && !inside) {
      throw VerificationError("predict_alpha: grid maximizer at alpha = " + a.str() +
                              " lies outside the closed-form interval [" + lo.str() +
                              ", " + hi.str() + "]");
    }
  }

  // Cross-check 3: the closed-form argmax against the sharp-example case
  // table.  At breakpoint p values (and at the interpolation endpoint p = 2)
  // the flat segment legitimately widens the single point to an interval.
  Breakpoints bp = breakpoints(n);
  {
    bool boundary = (p == bp.p_stz) || (p == Rational(2)) ||
                    (k == n - 1 && p == bp.p_hyp);
    Rational expected;
    if (p > bp.p_stz) {
      expected = kZero;
    } else if (k == n - 1 && p < bp.p_hyp) {
      expected = kHalf;
    } else {
      expected = kink;
    }
    bool contains = (lo <= expected) && (expected <= hi);
    // Away from breakpoints the argmax must be exactly the table's point; at
    // a breakpoint the flat segment must still contain it.
    bool ok = boundary ? contains : (lo == hi && lo == expected);
    if (!ok) {
      throw VerificationError("predict_alpha: argmax [" + lo.str() + ", " + hi.str() +
                              "] disagrees with the case table point " + expected.str());
    }
  }

  Prediction out;
  out.alpha_star.emplace_back(lo, hi);
  out.exponent_exact = best;
  out.exponent_at_max = best.to_double();
  if (lo == hi) {
    if (lo == kZero) {
      out.case_label = CaseLabel::T0_point;
    } else if (k == n - 1 && p <= bp.p_hyp) {
      out.case_label = CaseLabel::Thalf_tube;
    } else if (lo == kink) {
      out.case_label = CaseLabel::T_one_minus_beta;
    } else {
      out.case_label = CaseLabel::Thalf_tube;
    }
    out.representative_alpha = lo;
  } else {
    out.case_label = CaseLabel::all_scales_critical;
    out.representative_alpha = kink;  // the kink sits inside every flat segment
  }
  out.critical_time_scale = (Rational(1) - Rational(2) * out.representative_alpha).to_double();
  return out;
}

ContributionRegime contribution_regime(double gamma_p, const LebesgueIndex& p) {
  if (!(gamma_p >= 0)) throw DomainError("contribution_regime: gamma_p must be >= 0");
  if (p < Rational(2)) throw DomainError("contribution_regime: p must be >= 2");
  if (p.is_infinite()) {
    return gamma_p == 0.0 ? ContributionRegime::largest_scale
                          : ContributionRegime::smallest_scale;
  }
  double value = gamma_p * p.to_double() / 2.0;
  if (std::abs(value - 1.0) <= 1e-12) return ContributionRegime::all_scales;
  return value > 1.0 ? ContributionRegime::smallest_scale
                     : ContributionRegime::largest_scale;
}

double kernel_l2_bound(int n, int k, double beta, double h, double tau) {
  if (n < 2 || k < 1 || k > n) throw DomainError("kernel_l2_bound: need n >= 2, 1 <= k <= n");
  if (!(h > 0.0 && h < 1.0)) throw DomainError("kernel_l2_bound: h must lie in (0, 1)");
  if (!(tau >= 0.0)) throw DomainError("kernel_l2_bound: tau must be >= 0");
  beta = std::min(1.0, std::max(0.5, beta));
  double threshold = std::pow(h, 2.0 * beta - 1.0);
  if (tau <= threshold) return 1.0;
  double m = 0.5 * static_cast<double>(n - k);
  return std::pow(h, (beta - 1.0) * m) * std::pow(h + tau, -m);
}

DecayProfile decay_profile(int n, int k, double beta, double h, double tau) {
  if (n < 2 || k < 1 || k > n) throw DomainError("decay_profile: need n >= 2, 1 <= k <= n");
  if (!(h > 0.0 && h < 1.0)) throw DomainError("decay_profile: h must lie in (0, 1)");
  if (!(tau >= 0.0)) throw DomainError("decay_profile: tau must be >= 0");
  beta = std::min(1.0, std::max(0.5, beta));
  DecayProfile d;
  d.kappa_inf = 0.5 * (n - 1);
  d.gamma_inf = 0.5 * (n - 1);
  d.tau = tau;
  if (tau > std::pow(h, 2.0 * beta - 1.0)) {
    d.kappa_2 = 0.5 * (1.0 - beta) * (n - k);
    d.gamma_2 = 0.5 * (n - k);
  }
  return d;
}

double interpolated_gamma(const DecayProfile& profile, const LebesgueIndex& p) {
  if (p < Rational(2)) throw DomainError("interpolated_gamma: p must be >= 2");
  double theta = 2.0 * p.reciprocal().to_double();
  return theta * profile.gamma_2 + (1.0 - theta) * profile.gamma_inf;
}

}  // namespace qmlab
