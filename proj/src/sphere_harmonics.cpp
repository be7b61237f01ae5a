#include "qmlab/sphere_harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "qmlab/errors.hpp"
#include "qmlab/quadrature.hpp"

namespace qmlab {
namespace {

constexpr double kPi = 3.14159265358979323846;
// exp(-690.776) ~ 1e-300: relative magnitude below which a term is dropped.
constexpr double kLogFloor = -690.776;

double real_norm_sq(const HarmonicTerm& t) {
  double s = 0.0;
  for (std::size_t m = 1; m < t.a.size(); ++m) s += t.a[m] * t.a[m];
  return s;
}

// <c, x> with the implicit i in slot 1.
std::complex<double> linear_form(const HarmonicTerm& t, const double* x) {
  double re = 0.0;
  for (std::size_t m = 1; m < t.a.size(); ++m) re += t.a[m] * x[m];
  return {re, x[0]};
}

// prefactor-free sum of <c,x>^j over terms, log-domain per term.
std::complex<double> term_sum(const HarmonicSum& u, const double* x) {
  const std::size_t nt = u.terms.size();
  double lmax = -std::numeric_limits<double>::infinity();
  thread_local std::vector<double> lmag, phase;
  lmag.assign(nt, 0.0);
  phase.assign(nt, 0.0);
  for (std::size_t t = 0; t < nt; ++t) {
    const std::complex<double> z = linear_form(u.terms[t], x);
    const double az = std::abs(z);
    if (az == 0.0) {
      lmag[t] = -std::numeric_limits<double>::infinity();
      continue;
    }
    lmag[t] = static_cast<double>(u.j) * std::log(az);
    phase[t] = static_cast<double>(u.j) * std::arg(z);
    lmax = std::max(lmax, lmag[t]);
  }
  if (!std::isfinite(lmax)) return {0.0, 0.0};
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t t = 0; t < nt; ++t) {
    const double rel = lmag[t] - lmax;
    if (rel < kLogFloor) continue;
    acc += std::polar(std::exp(rel), phase[t]);
  }
  // |<c,x>| <= 1 on the sphere (unit real vector, Cauchy-Schwarz), so
  // lmax <= 0 and this never overflows.
  return std::exp(lmax) * acc;
}

// |sum|^2 with a single-term fast path (no phase needed).
double term_sum_mag_sq(const HarmonicSum& u, const double* x) {
  if (u.terms.size() == 1) {
    const std::complex<double> z = linear_form(u.terms[0], x);
    const double az = std::abs(z);
    if (az == 0.0) return 0.0;
    const double l = 2.0 * static_cast<double>(u.j) * std::log(az);
    return l < 2.0 * kLogFloor ? 0.0 : std::exp(l);
  }
  return std::norm(term_sum(u, x));
}

struct AngleTable {
  std::vector<double> sn, cs, wt;
};

AngleTable angle_table(int count, double lo, double hi) {
  const GaussLegendre& gl = gauss_legendre(count);
  AngleTable t;
  t.sn.resize(count);
  t.cs.resize(count);
  t.wt.resize(count);
  for (int i = 0; i < count; ++i) {
    const double a = lo + 0.5 * (hi - lo) * (gl.nodes[i] + 1.0);
    t.sn[i] = std::sin(a);
    t.cs[i] = std::cos(a);
    t.wt[i] = 0.5 * (hi - lo) * gl.weights[i];
  }
  return t;
}

void check_resolution(int n, double h, const SphereGrid& grid) {
  if (static_cast<int>(grid.counts.size()) != n)
    throw DomainError("sphere quadrature: grid must give one count per angle");
  const SphereGrid need = auto_grid(n, h);
  for (int m = 0; m < n; ++m) {
    if (grid.counts[m] < need.counts[m]) {
      std::ostringstream msg;
      msg << "sphere quadrature: angle " << (m + 1) << " has " << grid.counts[m]
          << " nodes, resolution rule needs " << need.counts[m];
      throw ResolutionError(msg.str());
    }
  }
}

// Tensor quadrature of f(x) * surface element; f gets the Cartesian point.
template <typename F>
std::complex<double> integrate_sphere(int n, const SphereGrid& grid, int threads,
                                      const F& f) {
  const AngleTable t1 = angle_table(grid.counts[0], 0.0, 2.0 * kPi);
  const AngleTable t2 = angle_table(grid.counts[1], 0.0, kPi);
  AngleTable t3;
  if (n == 3) t3 = angle_table(grid.counts[2], 0.0, kPi);
  std::vector<std::complex<double>> rows(grid.counts[0]);
  parallel_for(rows.size(), threads, [&](std::size_t i1) {
    const double s1 = t1.sn[i1], c1 = t1.cs[i1];
    std::complex<double> acc(0.0, 0.0);
    if (n == 2) {
      double x[3];
      for (std::size_t i2 = 0; i2 < t2.sn.size(); ++i2) {
        const double s2 = t2.sn[i2], c2 = t2.cs[i2];
        x[0] = s2 * s1;
        x[1] = s2 * c1;
        x[2] = c2;
        acc += t2.wt[i2] * s2 * f(x);  // jacobian sin(phi_2)
      }
    } else {
      double x[4];
      for (std::size_t i3 = 0; i3 < t3.sn.size(); ++i3) {
        const double s3 = t3.sn[i3], c3 = t3.cs[i3];
        const double w3 = t3.wt[i3] * s3 * s3;  // sin^2(phi_3)
        for (std::size_t i2 = 0; i2 < t2.sn.size(); ++i2) {
          const double s2 = t2.sn[i2], c2 = t2.cs[i2];
          x[0] = s3 * s2 * s1;
          x[1] = s3 * s2 * c1;
          x[2] = s3 * c2;
          x[3] = c3;
          acc += w3 * t2.wt[i2] * s2 * f(x);
        }
      }
    }
    rows[i1] = t1.wt[i1] * acc;
  });
  return pairwise_sum(rows.data(), rows.size());
}

void check_quadrature_dim(const HarmonicSum& u) {
  if (u.n != 2 && u.n != 3)
    throw DomainError("sphere quadrature: only S^2 and S^3 are supported");
}

}  // namespace

SpherePoint sphere_point(const Vec& angles) {
  const int n = static_cast<int>(angles.size());
  if (n < 2) throw DomainError("sphere_point: need at least 2 angles");
  SpherePoint pt;
  pt.angles = angles;
  pt.x.assign(n + 1, 0.0);
  // x_{i} = cos(phi_{i-1}) * prod_{m=i}^{n} sin(phi_m), x_1 with cos -> sin
  double running = 1.0;  // prod of sin(phi_m) for m > current
  pt.x[n] = std::cos(angles[n - 1]);
  for (int i = n; i >= 2; --i) {
    running *= std::sin(angles[i - 1]);
    pt.x[i - 1] = running * std::cos(angles[i - 2]);
  }
  pt.x[0] = running * std::sin(angles[0]);
  return pt;
}

double sphere_jacobian(const SpherePoint& pt) {
  const int n = static_cast<int>(pt.angles.size());
  double jac = 1.0;
  for (int m = 2; m <= n; ++m) jac *= std::pow(std::sin(pt.angles[m - 1]), m - 1);
  return jac;
}

double HarmonicSum::prefactor() const { return scale * std::pow(h, prefactor_exponent); }

void HarmonicSum::validate() const {
  if (n < 2) throw DomainError("HarmonicSum: n must be >= 2");
  if (k < 1 || k > n) throw DomainError("HarmonicSum: stage k must lie in [1, n]");
  if (j < 1) throw DomainError("HarmonicSum: degree j must be >= 1");
  const double lam = static_cast<double>(j) * (static_cast<double>(j) + n - 1.0);
  if (std::abs(h * h * lam - 1.0) > 1e-12)
    throw DomainError("HarmonicSum: h is not (j(j+n-1))^{-1/2}");
  if (!(alpha >= 0.0) || !(alpha <= 0.5)) throw DomainError("HarmonicSum: alpha must lie in [0, 1/2]");
  if (!(epsilon > 0.0)) throw DomainError("HarmonicSum: epsilon must be positive");
  if (terms.empty()) throw DomainError("HarmonicSum: no terms");
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (static_cast<int>(terms[t].a.size()) != n + 1)
      throw DomainError("HarmonicSum: term coefficient length must be n+1");
    if (terms[t].a[0] != 0.0)
      throw DomainError("HarmonicSum: slot 0 is covered by the implicit i and must be 0");
    if (std::abs(real_norm_sq(terms[t]) - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg << "HarmonicSum: term " << t << " violates harmonicity (sum c^2 != 0)";
      throw VerificationError(msg.str());
    }
  }
}

HarmonicSum build_u1(int n, long long j, double epsilon) {
  if (n < 2) throw DomainError("build_u1: n must be >= 2");
  if (j < 1) throw DomainError("build_u1: j must be >= 1");
  if (!(epsilon > 0.0)) throw DomainError("build_u1: epsilon must be positive");
  HarmonicSum u;
  u.n = n;
  u.k = 1;
  u.j = j;
  u.h = 1.0 / std::sqrt(static_cast<double>(j) * (static_cast<double>(j) + n - 1.0));
  u.epsilon = epsilon;
  u.prefactor_exponent = -(n - 1) / 4.0;
  HarmonicTerm t;
  t.a.assign(n + 1, 0.0);
  t.a[1] = 1.0;
  u.terms.push_back(std::move(t));
  return u;
}

long long stage_count(double epsilon, double h, double alpha) {
  const double raw = epsilon * std::pow(h, alpha - 0.5);
  // ceil with a fuzz guard so exact integers do not round up
  return std::max<long long>(1, static_cast<long long>(std::ceil(raw - 1e-12)));
}

std::vector<double> rotation(long long s, int k, double h, int n) {
  if (k < 2 || k > n)
    throw DomainError("rotation: stage k must lie in [2, n] (k=1 would mix coordinate 2 with itself)");
  const double hs2 = h * static_cast<double>(s) * static_cast<double>(s);
  if (hs2 > 1.0) throw DomainError("rotation: h s^2 > 1, rotation parameter out of range");
  const int d = n + 1;
  std::vector<double> r(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) r[static_cast<std::size_t>(i) * d + i] = 1.0;
  const double c = std::sqrt(1.0 - hs2);
  const double q = std::sqrt(h) * static_cast<double>(s);
  // 0-based rows/cols 1 and k are 1-based coordinates 2 and k+1
  r[static_cast<std::size_t>(1) * d + 1] = c;
  r[static_cast<std::size_t>(1) * d + k] = -q;
  r[static_cast<std::size_t>(k) * d + 1] = q;
  r[static_cast<std::size_t>(k) * d + k] = c;
  return r;
}

HarmonicSum rotate_sum(const HarmonicSum& u, long long s, int k) {
  if (k < 2 || k > u.n) throw DomainError("rotate_sum: stage k must lie in [2, n]");
  const double hs2 = u.h * static_cast<double>(s) * static_cast<double>(s);
  if (hs2 > 1.0) throw DomainError("rotate_sum: h s^2 > 1, rotation parameter out of range");
  const double c = std::sqrt(1.0 - hs2);
  const double q = std::sqrt(u.h) * static_cast<double>(s);
  HarmonicSum out = u;
  for (HarmonicTerm& t : out.terms) {
    // coefficients transform by R^T: (a1, ak) -> (c a1 + q ak, -q a1 + c ak)
    const double a1 = t.a[1], ak = t.a[k];
    t.a[1] = c * a1 + q * ak;
    t.a[k] = -q * a1 + c * ak;
  }
  return out;
}

HarmonicSum extend(const HarmonicSum& u_prev, double alpha) {
  u_prev.validate();
  if (u_prev.k >= u_prev.n)
    throw DomainError("extend: stage is already n, nothing left to extend");
  if (!(alpha >= 0.0) || !(alpha <= 0.5)) throw DomainError("extend: alpha must lie in [0, 1/2]");
  if (u_prev.k > 1 && alpha != u_prev.alpha)
    throw DomainError("extend: alpha must match the earlier stages");
  const int k = u_prev.k + 1;
  const double h = u_prev.h;
  const long long S = stage_count(u_prev.epsilon, h, alpha);
  HarmonicSum out = u_prev;
  out.k = k;
  out.alpha = alpha;
  out.prefactor_exponent += (0.5 - alpha) / 2.0;
  out.epsilon_effective = static_cast<double>(S) * std::pow(h, 0.5 - alpha);
  out.terms.clear();
  out.terms.reserve(u_prev.terms.size() * static_cast<std::size_t>(S));
  for (long long s = 1; s <= S; ++s) {
    const double hs2 = h * static_cast<double>(s) * static_cast<double>(s);
    if (hs2 > 1.0) {
      std::ostringstream msg;
      msg << "extend: rotation s=" << s << " inadmissible (h s^2 = " << hs2 << " > 1)";
      throw DomainError(msg.str());
    }
    const double c = std::sqrt(1.0 - hs2);
    const double q = std::sqrt(h) * static_cast<double>(s);
    for (std::size_t ti = 0; ti < u_prev.terms.size(); ++ti) {
      HarmonicTerm t = u_prev.terms[ti];
      const double a1 = t.a[1], ak = t.a[k];
      t.a[1] = c * a1 + q * ak;
      t.a[k] = -q * a1 + c * ak;
      out.terms.push_back(std::move(t));
    }
  }
  // Re-verify the bounds the construction guarantees, in terms of the
  // realized per-stage count S.
  const double bound_a1 = (k - 1) * h * static_cast<double>(S) * static_cast<double>(S) + 1e-12;
  const double bound_am = std::sqrt(h) * static_cast<double>(S) + 1e-12;
  for (std::size_t ti = 0; ti < out.terms.size(); ++ti) {
    const HarmonicTerm& t = out.terms[ti];
    const long long s = 1 + static_cast<long long>(ti / u_prev.terms.size());
    std::ostringstream who;
    who << " (rotation s=" << s << ", term " << ti << ")";
    if (std::abs(real_norm_sq(t) - 1.0) > 1e-12)
      throw ConstructionError("extend: harmonicity lost" + who.str());
    if (std::abs(1.0 - t.a[1] * t.a[1]) > bound_a1)
      throw ConstructionError("extend: leading coefficient bound violated" + who.str());
    for (int m = 2; m <= out.n; ++m) {
      if (m <= k) {
        if (std::abs(t.a[m]) > bound_am)
          throw ConstructionError("extend: rotated coefficient bound violated" + who.str());
      } else if (t.a[m] != 0.0) {
        throw ConstructionError("extend: coefficient beyond the stage is nonzero" + who.str());
      }
    }
  }
  return out;
}

std::complex<double> evaluate(const HarmonicSum& u, const SpherePoint& pt) {
  if (static_cast<int>(pt.x.size()) != u.n + 1)
    throw DomainError("evaluate: point dimension does not match the sum");
  return u.prefactor() * term_sum(u, pt.x.data());
}

SphereGrid auto_grid(int n, double h) {
  if (!(h > 0.0) || !(h < 1.0)) throw DomainError("auto_grid: h must lie in (0,1)");
  SphereGrid g;
  g.counts.resize(n);
  g.counts[0] = static_cast<int>(std::ceil(8.0 * kPi / h - 1e-9));
  for (int m = 1; m < n; ++m) g.counts[m] = static_cast<int>(std::ceil(4.0 * kPi / h - 1e-9));
  return g;
}

double l2_norm(const HarmonicSum& u, const SphereGrid& grid, int threads) {
  u.validate();
  check_quadrature_dim(u);
  check_resolution(u.n, u.h, grid);
  const std::complex<double> total = integrate_sphere(
      u.n, grid, threads,
      [&](const double* x) { return std::complex<double>(term_sum_mag_sq(u, x), 0.0); });
  return std::abs(u.prefactor()) * std::sqrt(std::max(0.0, total.real()));
}

double weighted_l2_norm(const HarmonicSum& u, const SphereGrid& grid, int first_coord,
                        double exponent, int threads) {
  u.validate();
  check_quadrature_dim(u);
  check_resolution(u.n, u.h, grid);
  if (first_coord < 1 || first_coord > u.n + 1)
    throw DomainError("weighted_l2_norm: first_coord must be a 1-based coordinate of R^{n+1}");
  const double h = u.h;
  const std::complex<double> total =
      integrate_sphere(u.n, grid, threads, [&](const double* x) {
        double tail = 0.0;
        for (int m = first_coord - 1; m <= u.n; ++m) tail += x[m] * x[m];
        const double wgt = std::pow(1.0 + h * tail, exponent);
        return std::complex<double>(wgt * term_sum_mag_sq(u, x), 0.0);
      });
  return std::abs(u.prefactor()) * std::sqrt(std::max(0.0, total.real()));
}

double concentration_check(const HarmonicSum& u, double eps_region, int samples_per_axis) {
  u.validate();
  if (u.k != u.n) throw DomainError("concentration_check: sum must be at stage k = n");
  if (!(eps_region > 0.0)) throw DomainError("concentration_check: eps_region must be positive");
  if (samples_per_axis < 1) throw DomainError("concentration_check: samples_per_axis must be >= 1");
  const int n = u.n;
  const double half1 = eps_region * std::pow(u.h, 1.0 - 2.0 * u.alpha);
  const double halfm = eps_region * std::pow(u.h, 1.0 - u.alpha);
  double mn = std::numeric_limits<double>::infinity();
  std::vector<int> idx(n, 0);
  Vec angles(n);
  for (;;) {
    for (int d = 0; d < n; ++d) {
      const double t = samples_per_axis == 1
                           ? 0.0
                           : -1.0 + 2.0 * idx[d] / (samples_per_axis - 1.0);
      angles[d] = 0.5 * kPi + t * (d == 0 ? half1 : halfm);
    }
    mn = std::min(mn, std::abs(evaluate(u, sphere_point(angles))));
    int d = 0;
    while (d < n && ++idx[d] == samples_per_axis) idx[d++] = 0;
    if (d == n) break;
  }
  return mn * std::pow(u.h, (n - 1) * (1.0 - u.alpha) / 2.0);
}

double pair_correlation(const HarmonicSum& u, long long s, long long s_prime, int k,
                        const SphereGrid& grid, int threads) {
  u.validate();
  check_quadrature_dim(u);
  check_resolution(u.n, u.h, grid);
  const HarmonicSum ua = rotate_sum(u, s, k);
  const HarmonicSum ub = rotate_sum(u, s_prime, k);
  const std::complex<double> total =
      integrate_sphere(u.n, grid, threads, [&](const double* x) {
        return term_sum(ua, x) * std::conj(term_sum(ub, x));
      });
  return u.prefactor() * u.prefactor() * std::abs(total);
}

nlohmann::json harmonic_to_json(const HarmonicSum& u) {
  nlohmann::json js;
  js["n"] = u.n;
  js["k"] = u.k;
  js["j"] = u.j;
  js["alpha"] = u.alpha;
  js["epsilon"] = u.epsilon;
  js["epsilon_effective"] = u.epsilon_effective;
  js["prefactor_exponent"] = u.prefactor_exponent;
  js["scale"] = u.scale;
  nlohmann::json terms = nlohmann::json::array();
  for (const HarmonicTerm& t : u.terms) {
    nlohmann::json jt;
    jt["re"] = t.a;
    jt["im_x1"] = true;
    terms.push_back(jt);
  }
  js["terms"] = terms;
  return js;
}

HarmonicSum harmonic_from_json(const nlohmann::json& js) {
  HarmonicSum u;
  u.n = js.at("n").get<int>();
  u.k = js.at("k").get<int>();
  u.j = js.at("j").get<long long>();
  u.h = 1.0 / std::sqrt(static_cast<double>(u.j) * (static_cast<double>(u.j) + u.n - 1.0));
  u.alpha = js.at("alpha").get<double>();
  u.epsilon = js.at("epsilon").get<double>();
  if (js.contains("epsilon_effective")) u.epsilon_effective = js.at("epsilon_effective").get<double>();
  u.prefactor_exponent = js.at("prefactor_exponent").get<double>();
  if (js.contains("scale")) u.scale = js.at("scale").get<double>();
  for (const nlohmann::json& jt : js.at("terms")) {
    HarmonicTerm t;
    t.a = jt.at("re").get<std::vector<double>>();
    u.terms.push_back(std::move(t));
  }
  u.validate();
  return u;
}

}  // namespace qmlab
