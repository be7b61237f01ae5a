#pragma once

#include <string>

#include "qmlab/rational.hpp"

namespace qmlab {

// Closed-form exponent calculus for L^p concentration bounds of frequency-h
// quasimodes: delta(n,k,p) governs ||u||_{L^p(S)} <= h^{-delta} ||u||_{L^2}
// for a k-dimensional set S inside an n-manifold (k=n: the whole manifold),
// and sigma(n,k,p,beta) the same for the shrinking h^beta-neighborhood.
// Everything is evaluated in exact rational arithmetic; `exponent` is the
// correctly rounded double of `exact`.

enum class Regime {
  high_p,
  middle_p,
  low_p,
  clamped_low_beta,
  clamped_high_beta,
};

enum class Justification {
  obs1_whole_manifold,
  obs3_submanifold_slab,
  interpolation,
  burq_zuily_endpoint,
};

const char* to_string(Regime r);
const char* to_string(Justification j);

struct ExponentResult {
  double exponent = 0.0;
  Rational exact;
  Regime regime = Regime::high_p;
  bool log_loss = false;
  Justification justification = Justification::obs1_whole_manifold;
};

struct Breakpoints {
  Rational p_stz;  // 2(n+1)/(n-1)
  Rational p_hyp;  // 2n/(n-1), always < p_stz
};

// n >= 2 or domain error.
Breakpoints breakpoints(int n);

// Growth exponent for a k-dimensional set, 0 <= k <= n, p >= 2.
//   k = n:   (n-1)/2 - n/p          for p >= p_stz,
//            (n-1)/4 - (n-1)/(2p)   for 2 <= p <= p_stz;
//   k = n-1: (n-1)/2 - (n-1)/p      for p >= p_hyp,
//            (n-1)/4 - (n-2)/(2p)   for 2 <= p <= p_hyp;
//   k <= n-2: (n-1)/2 - k/p         for all p.
// log_loss is set exactly when p = 2 and k = n-2.
ExponentResult delta(int n, int k, const LebesgueIndex& p);

// Exponent for the h^beta-neighborhood, 1 <= k <= n-1, p >= 2, beta > 0.
// beta is clamped to [1/2, 1] (the estimates freeze outside that range);
// clamping is reported through the regime flags.
//   p >= p_stz:               sigma = delta(n, n, p)
//   k = n-1, p_hyp <= p <= p_stz,
//   or k <= n-2, 2 <= p <= p_stz:
//                             sigma = beta(n-1)/2 - beta(n+1)/p + 1/p
//   k = n-1, 2 <= p <= p_hyp: sigma = delta(n, n-1, p) - beta/p
ExponentResult sigma(int n, int k, const LebesgueIndex& p, double beta);
ExponentResult sigma(int n, int k, const LebesgueIndex& p, const Rational& beta);

// Branch-wise evaluation, regardless of which side of the breakpoint p lies
// on.  Used to verify continuity at p_hyp/p_stz.
enum class DeltaBranch { high, low };
Rational delta_branch(int n, int k, DeltaBranch branch, const LebesgueIndex& p);

enum class SigmaBranch { high, middle, low };
Rational sigma_branch(int n, int k, SigmaBranch branch, const LebesgueIndex& p,
                      const Rational& beta);

// Linear interpolation of an exponent in the variable 1/p.
struct InterpolationPoint {
  Rational inv_p;
  Rational exponent;
};

// p must lie between the two endpoints (inclusive); exact arithmetic.
Rational interpolate(const InterpolationPoint& a, const InterpolationPoint& b,
                     const LebesgueIndex& p);

}  // namespace qmlab
