#include "qmlab/exponents.hpp"

#include "qmlab/errors.hpp"

namespace qmlab {

namespace {

void check_np(int n, const LebesgueIndex& p) {
  if (n < 2) throw DomainError("exponents: n must be >= 2, got " + std::to_string(n));
  if (p < Rational(2)) throw DomainError("exponents: p must be >= 2, got " + p.str());
}

Rational clamp_beta(const Rational& beta, Regime* flag) {
  if (beta < Rational(1, 2)) {
    if (flag) *flag = Regime::clamped_low_beta;
    return Rational(1, 2);
  }
  if (beta > Rational(1)) {
    if (flag) *flag = Regime::clamped_high_beta;
    return Rational(1);
  }
  return beta;
}

ExponentResult make_result(const Rational& exact, Regime regime, bool log_loss,
                           Justification just) {
  return ExponentResult{exact.to_double(), exact, regime, log_loss, just};
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::high_p: return "high_p";
    case Regime::middle_p: return "middle_p";
    case Regime::low_p: return "low_p";
    case Regime::clamped_low_beta: return "clamped_low_beta";
    case Regime::clamped_high_beta: return "clamped_high_beta";
  }
  return "?";
}

const char* to_string(Justification j) {
  switch (j) {
    case Justification::obs1_whole_manifold: return "obs1_whole_manifold";
    case Justification::obs3_submanifold_slab: return "obs3_submanifold_slab";
    case Justification::interpolation: return "interpolation";
    case Justification::burq_zuily_endpoint: return "burq_zuily_endpoint";
  }
  return "?";
}

Breakpoints breakpoints(int n) {
  if (n < 2) throw DomainError("breakpoints: n must be >= 2, got " + std::to_string(n));
  return Breakpoints{Rational(2 * (n + 1LL), n - 1LL), Rational(2LL * n, n - 1LL)};
}

Rational delta_branch(int n, int k, DeltaBranch branch, const LebesgueIndex& p) {
  check_np(n, p);
  if (k < 0 || k > n) throw DomainError("delta: k must satisfy 0 <= k <= n");
  Rational ip = p.reciprocal();
  if (k == n) {
    if (branch == DeltaBranch::high) return Rational(n - 1, 2) - Rational(n) * ip;
    return Rational(n - 1, 4) - Rational(n - 1, 2) * ip;
  }
  if (k == n - 1) {
    if (branch == DeltaBranch::high) return Rational(n - 1, 2) - Rational(n - 1) * ip;
    return Rational(n - 1, 4) - Rational(n - 2, 2) * ip;
  }
  if (branch != DeltaBranch::high) {
    throw DomainError("delta: k <= n-2 has a single branch");
  }
  return Rational(n - 1, 2) - Rational(k) * ip;
}

ExponentResult delta(int n, int k, const LebesgueIndex& p) {
  check_np(n, p);
  if (k < 0 || k > n) throw DomainError("delta: k must satisfy 0 <= k <= n");
  Breakpoints bp = breakpoints(n);
  bool log_loss = (k == n - 2) && p == Rational(2);
  if (k == n) {
    bool high = p >= bp.p_stz;
    Rational v = delta_branch(n, k, high ? DeltaBranch::high : DeltaBranch::low, p);
    return make_result(v, high ? Regime::high_p : Regime::low_p, log_loss,
                       Justification::obs1_whole_manifold);
  }
  if (k == n - 1) {
    bool high = p >= bp.p_hyp;
    Rational v = delta_branch(n, k, high ? DeltaBranch::high : DeltaBranch::low, p);
    return make_result(v, high ? Regime::high_p : Regime::low_p, log_loss,
                       Justification::obs3_submanifold_slab);
  }
  Rational v = delta_branch(n, k, DeltaBranch::high, p);
  return make_result(v, Regime::high_p, log_loss, Justification::obs3_submanifold_slab);
}

Rational sigma_branch(int n, int k, SigmaBranch branch, const LebesgueIndex& p,
                      const Rational& beta) {
  check_np(n, p);
  if (k < 1 || k > n - 1) throw DomainError("sigma: k must satisfy 1 <= k <= n-1");
  Rational ip = p.reciprocal();
  switch (branch) {
    case SigmaBranch::high:
      return delta_branch(n, n, DeltaBranch::high, p);
    case SigmaBranch::middle:
      return beta * Rational(n - 1, 2) - beta * Rational(n + 1) * ip + ip;
    case SigmaBranch::low:
      if (k != n - 1) throw DomainError("sigma: low branch exists only for k = n-1");
      return delta_branch(n, n - 1, DeltaBranch::low, p) - beta * ip;
  }
  throw DomainError("sigma: unknown branch");
}

ExponentResult sigma(int n, int k, const LebesgueIndex& p, const Rational& beta_in) {
  check_np(n, p);
  if (k < 1 || k > n - 1) {
    throw DomainError("sigma: k must satisfy 1 <= k <= n-1, got " + std::to_string(k));
  }
  if (beta_in <= Rational(0)) throw DomainError("sigma: beta must be > 0");
  Regime clamped = Regime::high_p;
  Regime* flag = &clamped;
  bool was_clamped = false;
  Rational beta = clamp_beta(beta_in, flag);
  was_clamped = (beta != beta_in);

  Breakpoints bp = breakpoints(n);
  bool log_loss = (k == n - 2) && p == Rational(2);

  Rational value;
  Regime regime;
  Justification just;
  if (p >= bp.p_stz) {
    value = sigma_branch(n, k, SigmaBranch::high, p, beta);
    regime = Regime::high_p;
    just = Justification::obs1_whole_manifold;
  } else if (k == n - 1) {
    if (p >= bp.p_hyp) {
      value = sigma_branch(n, k, SigmaBranch::middle, p, beta);
      regime = Regime::middle_p;
      just = Justification::interpolation;
    } else {
      value = sigma_branch(n, k, SigmaBranch::low, p, beta);
      regime = Regime::low_p;
      just = Justification::obs3_submanifold_slab;
    }
  } else {
    value = sigma_branch(n, k, SigmaBranch::middle, p, beta);
    if (p == Rational(2)) {
      regime = Regime::low_p;
      just = Justification::burq_zuily_endpoint;
    } else {
      regime = Regime::middle_p;
      just = Justification::interpolation;
    }
  }
  if (was_clamped) regime = clamped;
  return make_result(value, regime, log_loss, just);
}

ExponentResult sigma(int n, int k, const LebesgueIndex& p, double beta) {
  if (!(beta > 0)) throw DomainError("sigma: beta must be > 0");
  // Clamp in double space first so extreme inputs never reach from_double.
  if (beta < 0.5) return sigma(n, k, p, Rational(1, 4));   // any value < 1/2
  if (beta > 1.0) return sigma(n, k, p, Rational(2));      // any value > 1
  return sigma(n, k, p, Rational::from_double(beta));
}

Rational interpolate(const InterpolationPoint& a, const InterpolationPoint& b,
                     const LebesgueIndex& p) {
  if (a.inv_p == b.inv_p) throw DomainError("interpolate: endpoints share the same p");
  Rational t = p.reciprocal();
  Rational lo = min(a.inv_p, b.inv_p);
  Rational hi = max(a.inv_p, b.inv_p);
  if (t < lo || t > hi) {
    throw DomainError("interpolate: p outside the endpoint interval");
  }
  return a.exponent + (b.exponent - a.exponent) * (t - a.inv_p) / (b.inv_p - a.inv_p);
}

}  // namespace qmlab
