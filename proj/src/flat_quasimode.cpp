#include "qmlab/flat_quasimode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <sstream>
#include <vector>

#include "qmlab/errors.hpp"
#include "qmlab/quadrature.hpp"

namespace qmlab {
namespace {

constexpr double kPi = 3.14159265358979323846;

// |s| below which the radial moment series is summed directly.  Above the
// cut the integration-by-parts recurrence is stable (each step divides by s),
// below it the series has no cancellation worse than e^{|s|} ~ 3e3.
constexpr double kSeriesCut = 8.0;
// 24 + 4*kSeriesCut: the first omitted term at the cut is ~1e-38 relative.
constexpr int kSeriesOrder = 56;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Coefficients of (1+ht)^{n-1} in t, convolved with r^2-1 = 2ht + h^2 t^2
// for the defect variant.
std::vector<double> radial_weight_poly(int n, double h, bool defect) {
  std::vector<double> w = (n == 2) ? std::vector<double>{1.0, h}
                                   : std::vector<double>{1.0, 2.0 * h, h * h};
  if (!defect) return w;
  const std::array<double, 3> mult{0.0, 2.0 * h, h * h};
  std::vector<double> out(w.size() + mult.size() - 1, 0.0);
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t b = 0; b < mult.size(); ++b) out[a + b] += w[a] * mult[b];
  return out;
}

// Radial factor of the cap integral.  Substituting r = 1+ht peels off the
// plane-wave phase e^{is/h} and leaves
//   R(s) = h * integral_{-1}^{1} e^{ist} sum_d w_d t^d dt,
// an entire function of s = <x, omega> evaluated exactly: as the even/odd
// moment series P(s^2) + i s Q(s^2) for small |s|, by the integration-by-
// parts recurrence for large |s|.  No radial quadrature error at all.
struct RadialFactor {
  double h = 0.0;
  std::vector<double> w;
  std::vector<double> even, odd;

  void build(int n, double h_in, bool defect) {
    h = h_in;
    w = radial_weight_poly(n, h, defect);
    even.assign(kSeriesOrder / 2 + 1, 0.0);
    odd.assign(kSeriesOrder / 2 + 1, 0.0);
    double inv_fact = 1.0;
    for (int m = 0; m <= kSeriesOrder; ++m) {
      if (m > 0) inv_fact /= m;
      double moment = 0.0;  // integral of t^{m+d} over [-1,1], odd powers vanish
      for (std::size_t d = 0; d < w.size(); ++d) {
        int q = m + static_cast<int>(d);
        if (q % 2 == 0) moment += w[d] * 2.0 / (q + 1);
      }
      double c = h * moment * inv_fact;
      double sgn = ((m / 2) % 2 == 0) ? 1.0 : -1.0;  // i^m = sgn * (1 or i)
      if (m % 2 == 0)
        even[m / 2] = sgn * c;
      else
        odd[m / 2] = sgn * c;
    }
  }

  std::complex<double> operator()(double s) const {
    if (std::abs(s) < kSeriesCut) {
      const double u = s * s;
      double pe = 0.0, po = 0.0;
      for (int j = static_cast<int>(even.size()) - 1; j >= 0; --j) pe = pe * u + even[j];
      for (int j = static_cast<int>(odd.size()) - 1; j >= 0; --j) po = po * u + odd[j];
      return {pe, s * po};
    }
    // J_d = int t^d e^{ist} dt = (e^{is} - (-1)^d e^{-is})/(is) - (d/(is)) J_{d-1}
    const double cs = std::cos(s), sn = std::sin(s);
    const std::complex<double> inv_is(0.0, -1.0 / s);
    std::complex<double> jd(2.0 * sn / s, 0.0);
    std::complex<double> acc = w[0] * jd;
    for (std::size_t d = 1; d < w.size(); ++d) {
      const std::complex<double> boundary = (d % 2 == 1)
                                                ? std::complex<double>(2.0 * cs, 0.0)
                                                : std::complex<double>(0.0, 2.0 * sn);
      jd = inv_is * (boundary - static_cast<double>(d) * jd);
      acc += w[d] * jd;
    }
    return h * acc;
  }
};

// Composite Gauss-Legendre 16 panels: 8 nodes per phase period, at least 32
// nodes, scaled by node_factor, rounded up to whole panels.
long long node_count_for(double variation, double node_factor) {
  if (!std::isfinite(variation)) throw BudgetError("evaluate: non-finite phase variation (point too large)");
  double base = std::max(32.0, std::ceil(8.0 * variation / (2.0 * kPi)));
  double scaled = std::ceil(base * node_factor);
  if (!(scaled < 9.0e15)) throw BudgetError("evaluate: angular node count overflows the budget arithmetic");
  long long nodes = static_cast<long long>(scaled);
  return ((nodes + 15) / 16) * 16;
}

struct AngularRule {
  std::vector<double> cs, sn, wt;
};

// jacobian_sin multiplies the weight by sin(theta) (spherical cap measure).
AngularRule build_rule(double a, double b, long long nodes, bool jacobian_sin) {
  const GaussLegendre& base = gauss_legendre(16);
  const long long panels = nodes / 16;
  AngularRule r;
  r.cs.reserve(nodes);
  r.sn.reserve(nodes);
  r.wt.reserve(nodes);
  const double len = (b - a) / static_cast<double>(panels);
  for (long long p = 0; p < panels; ++p) {
    const double lo = a + len * static_cast<double>(p);
    for (int i = 0; i < 16; ++i) {
      const double th = lo + 0.5 * len * (base.nodes[i] + 1.0);
      double wq = 0.5 * len * base.weights[i];
      if (jacobian_sin) wq *= std::sin(th);
      r.cs.push_back(std::cos(th));
      r.sn.push_back(std::sin(th));
      r.wt.push_back(wq);
    }
  }
  return r;
}

// Arc integral for n=2: omega(phi) = cos(phi) u0 + sin(phi) u1, s = <x,omega>.
std::complex<double> integrate_arc(double a0, double a1, double inv_h,
                                   const AngularRule& rule, const RadialFactor& radial) {
  const std::size_t nodes = rule.cs.size();
  std::vector<std::complex<double>> panel_sums(nodes / 16);
  for (std::size_t p = 0; p < panel_sums.size(); ++p) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 16 * p; i < 16 * (p + 1); ++i) {
      const double s = a0 * rule.cs[i] + a1 * rule.sn[i];
      const double phase = s * inv_h;
      const std::complex<double> plane(std::cos(phase), std::sin(phase));
      acc += rule.wt[i] * plane * radial(s);
    }
    panel_sums[p] = acc;
  }
  return pairwise_sum(panel_sums.data(), panel_sums.size());
}

// Spherical cap integral for n=3:
// omega = cos(theta) u0 + sin(theta)(cos(psi) u1 + sin(psi) u2).
std::complex<double> integrate_cap3(double a0, double a1, double a2, double inv_h,
                                    const AngularRule& theta, const AngularRule& psi,
                                    const RadialFactor& radial) {
  std::vector<std::complex<double>> theta_sums(theta.cs.size());
  for (std::size_t it = 0; it < theta.cs.size(); ++it) {
    const double base = a0 * theta.cs[it];
    const double c1 = a1 * theta.sn[it];
    const double c2 = a2 * theta.sn[it];
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t ip = 0; ip < psi.cs.size(); ++ip) {
      const double s = base + c1 * psi.cs[ip] + c2 * psi.sn[ip];
      const double phase = s * inv_h;
      const std::complex<double> plane(std::cos(phase), std::sin(phase));
      acc += psi.wt[ip] * plane * radial(s);
    }
    theta_sums[it] = theta.wt[it] * acc;
  }
  return pairwise_sum(theta_sums.data(), theta_sums.size());
}

struct PointPlan {
  std::array<double, 3> a{};  // coordinates in the cap frame
  long long nodes_a = 0;      // arc / polar nodes
  long long nodes_b = 0;      // azimuthal nodes (n=3)
};

std::vector<std::complex<double>> evaluate_impl(const SpectralCap& cap,
                                                const std::vector<Vec>& points,
                                                const RigidMotion* motion,
                                                const EvalOptions& opt, bool defect) {
  cap.validate();
  if (!(opt.node_factor > 0.0) || !(opt.node_factor <= 1024.0))
    throw DomainError("evaluate: node_factor must lie in (0, 1024]");
  if (opt.node_budget <= 0) throw DomainError("evaluate: node_budget must be positive");
  if (opt.threads < 1) throw DomainError("evaluate: threads must be >= 1");

  const int n = cap.n;
  Vec u0 = cap.direction();
  Vec shift(n, 0.0);
  if (motion) {
    motion->validate(n);
    u0 = motion->rotate(u0);
    if (!motion->translation.empty()) shift = motion->translation;
  }
  const std::vector<double> frame = frame_with_first_axis(u0);
  std::array<Vec, 3> axes;
  for (int j = 0; j < n; ++j) {
    axes[j].resize(n);
    for (int i = 0; i < n; ++i) axes[j][i] = frame[static_cast<std::size_t>(i) * n + j];
  }

  const double h = cap.h;
  const double inv_h = 1.0 / h;
  const double w = cap.cap_angle();
  RadialFactor radial;
  radial.build(n, h, defect);

  const std::size_t count = points.size();
  std::vector<PointPlan> plan(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (static_cast<int>(points[i].size()) != n)
      throw DomainError("evaluate: point dimension does not match the cap");
    Vec xe(n);
    for (int d = 0; d < n; ++d) xe[d] = points[i][d] - shift[d];
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) r2 += xe[d] * xe[d];
    const double kappa = std::sqrt(r2) * (1.0 + h) * inv_h;  // max |d phase / d angle|
    for (int j = 0; j < n; ++j) plan[i].a[j] = dot(xe, axes[j]);
    if (n == 2) {
      plan[i].nodes_a = node_count_for(2.0 * w * kappa, opt.node_factor);
      if (plan[i].nodes_a > opt.node_budget) {
        std::ostringstream msg;
        msg << "evaluate: point " << i << " needs " << plan[i].nodes_a
            << " angular nodes, budget is " << opt.node_budget;
        throw BudgetError(msg.str());
      }
    } else {
      plan[i].nodes_a = node_count_for(w * kappa, opt.node_factor);
      plan[i].nodes_b = node_count_for(2.0 * kPi * std::sin(w) * kappa, opt.node_factor);
      if (plan[i].nodes_a > opt.node_budget / plan[i].nodes_b) {
        std::ostringstream msg;
        msg << "evaluate: point " << i << " needs " << plan[i].nodes_a << " x "
            << plan[i].nodes_b << " angular nodes, budget is " << opt.node_budget;
        throw BudgetError(msg.str());
      }
    }
  }

  // Node tables are shared across points with the same count; built up front
  // so the parallel phase only reads them.
  std::map<long long, AngularRule> arc_rules, polar_rules, azimuth_rules;
  for (const PointPlan& p : plan) {
    if (n == 2) {
      arc_rules.emplace(p.nodes_a, AngularRule{});
    } else {
      polar_rules.emplace(p.nodes_a, AngularRule{});
      azimuth_rules.emplace(p.nodes_b, AngularRule{});
    }
  }
  for (auto& [nodes, rule] : arc_rules) rule = build_rule(-w, w, nodes, false);
  for (auto& [nodes, rule] : polar_rules) rule = build_rule(0.0, w, nodes, true);
  for (auto& [nodes, rule] : azimuth_rules) rule = build_rule(0.0, 2.0 * kPi, nodes, false);

  const double prefactor = std::pow(2.0 * kPi * h, -0.5 * n) * cap.amplitude();
  std::vector<std::complex<double>> out(count);
  parallel_for(count, opt.threads, [&](std::size_t i) {
    const PointPlan& p = plan[i];
    std::complex<double> v;
    if (n == 2) {
      v = integrate_arc(p.a[0], p.a[1], inv_h, arc_rules.at(p.nodes_a), radial);
    } else {
      v = integrate_cap3(p.a[0], p.a[1], p.a[2], inv_h, polar_rules.at(p.nodes_a),
                         azimuth_rules.at(p.nodes_b), radial);
    }
    out[i] = prefactor * v;
  });
  return out;
}

}  // namespace

void SpectralCap::validate() const {
  if (n != 2 && n != 3) throw DomainError("SpectralCap: n must be 2 or 3");
  if (!(h > 0.0) || !(h < 1.0)) throw DomainError("SpectralCap: h must lie in (0,1)");
  if (!(alpha >= 0.0) || !(alpha <= 0.5)) throw DomainError("SpectralCap: alpha must lie in [0, 1/2]");
  if (!(epsilon_cap > 0.0)) throw DomainError("SpectralCap: epsilon_cap must be positive");
  if (!(cap_angle() < 0.5 * kPi))
    throw DomainError("SpectralCap: cap angle epsilon_cap * h^alpha must stay below pi/2");
  if (!omega0.empty()) {
    if (static_cast<int>(omega0.size()) != n)
      throw DomainError("SpectralCap: omega0 dimension does not match n");
    double s = 0.0;
    for (double v : omega0) s += v * v;
    if (std::abs(s - 1.0) > 1e-12) throw DomainError("SpectralCap: omega0 must be a unit vector");
  }
}

Vec SpectralCap::direction() const {
  if (!omega0.empty()) return omega0;
  Vec e1(n, 0.0);
  e1[0] = 1.0;
  return e1;
}

double SpectralCap::amplitude() const {
  return std::pow(h, -0.5 - alpha * (n - 1) / 2.0);
}

double SpectralCap::cap_angle() const { return epsilon_cap * std::pow(h, alpha); }

double SpectralCap::l2_norm_sq() const {
  validate();
  if (n == 2) {
    // amplitude^2 * (radial integral 2h) * (arc length 2 eps h^alpha): the h
    // powers cancel exactly.
    return 4.0 * epsilon_cap;
  }
  // amplitude^2 * 2h(1+h^2/3) * cap area 2 pi (1-cos(cap_angle))
  return 4.0 * kPi * std::pow(h, -2.0 * alpha) * (1.0 + h * h / 3.0) *
         (1.0 - std::cos(cap_angle()));
}

std::vector<std::complex<double>> evaluate(const SpectralCap& cap, const std::vector<Vec>& points,
                                           const RigidMotion* motion, const EvalOptions& options) {
  return evaluate_impl(cap, points, motion, options, false);
}

std::vector<std::complex<double>> evaluate_defect(const SpectralCap& cap,
                                                  const std::vector<Vec>& points,
                                                  const RigidMotion* motion,
                                                  const EvalOptions& options) {
  return evaluate_impl(cap, points, motion, options, true);
}

double defect_bound(const SpectralCap& cap) {
  cap.validate();
  return 2.0 * cap.h + cap.h * cap.h;
}

long long node_count(const SpectralCap& cap, const Vec& point, const RigidMotion* motion,
                     const EvalOptions& options) {
  cap.validate();
  const int n = cap.n;
  if (static_cast<int>(point.size()) != n)
    throw DomainError("node_count: point dimension does not match the cap");
  Vec xe = point;
  if (motion) {
    motion->validate(n);
    if (!motion->translation.empty())
      for (int d = 0; d < n; ++d) xe[d] -= motion->translation[d];
  }
  double r2 = 0.0;
  for (int d = 0; d < n; ++d) r2 += xe[d] * xe[d];
  const double kappa = std::sqrt(r2) * (1.0 + cap.h) / cap.h;
  const double w = cap.cap_angle();
  if (n == 2) return node_count_for(2.0 * w * kappa, options.node_factor);
  return node_count_for(w * kappa, options.node_factor) *
         node_count_for(2.0 * kPi * std::sin(w) * kappa, options.node_factor);
}

OrientedBox tube_region(const SpectralCap& cap, double eps, const RigidMotion* motion) {
  cap.validate();
  if (!(eps > 0.0) || !(eps < 1.0)) throw DomainError("tube_region: eps must lie in (0,1)");
  const int n = cap.n;
  const double along = eps * std::pow(cap.h, 1.0 - 2.0 * cap.alpha);
  const double across = eps * std::pow(cap.h, 1.0 - cap.alpha);
  OrientedBox ob;
  ob.box.lo.assign(n, -across);
  ob.box.hi.assign(n, across);
  ob.box.lo[0] = -along;
  ob.box.hi[0] = along;
  std::vector<double> frame = frame_with_first_axis(cap.direction());
  if (motion) {
    motion->validate(n);
    if (!motion->rotation.empty()) {
      std::vector<double> composed(static_cast<std::size_t>(n) * n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int k = 0; k < n; ++k)
            s += motion->rotation[static_cast<std::size_t>(i) * n + k] *
                 frame[static_cast<std::size_t>(k) * n + j];
          composed[static_cast<std::size_t>(i) * n + j] = s;
        }
      frame = composed;
    }
    ob.frame.translation = motion->translation;
  }
  ob.frame.rotation = frame;
  return ob;
}

double verify_tube_bound(const SpectralCap& cap, double eps, int samples_per_axis,
                         const EvalOptions& options) {
  cap.validate();
  if (!(eps > 0.0) || eps > 0.1)
    throw DomainError("verify_tube_bound: eps must lie in (0, 0.1] so the phase stays small");
  if (samples_per_axis < 1) throw DomainError("verify_tube_bound: samples_per_axis must be >= 1");
  const OrientedBox ob = tube_region(cap, eps);
  const int n = cap.n;
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(std::pow(samples_per_axis, n)));
  std::vector<int> idx(n, 0);
  for (;;) {
    Vec c(n);
    for (int d = 0; d < n; ++d) {
      const double t = (idx[d] + 0.5) / samples_per_axis;
      c[d] = ob.box.lo[d] + t * (ob.box.hi[d] - ob.box.lo[d]);
    }
    pts.push_back(ob.frame.apply(c));
    int d = 0;
    while (d < n && ++idx[d] == samples_per_axis) idx[d++] = 0;
    if (d == n) break;
  }
  const std::vector<std::complex<double>> vals = evaluate(cap, pts, nullptr, options);
  double mn = std::abs(vals[0]);
  for (const std::complex<double>& v : vals) mn = std::min(mn, std::abs(v));
  return mn * std::pow(cap.h, (cap.n - 1) * (1.0 - cap.alpha) / 2.0);
}

std::complex<double> origin_value_closed_form(const SpectralCap& cap) {
  cap.validate();
  const double h = cap.h;
  if (cap.n == 2) {
    // (2 pi h)^{-1} * amplitude * (2h) * (2 eps h^alpha) = (2 eps / pi) h^{(alpha-1)/2}
    return {(2.0 * cap.epsilon_cap / kPi) * std::pow(h, 0.5 * (cap.alpha - 1.0)), 0.0};
  }
  const double radial = 2.0 * h * (1.0 + h * h / 3.0);
  const double area = 2.0 * kPi * (1.0 - std::cos(cap.cap_angle()));
  return {std::pow(2.0 * kPi * h, -1.5) * cap.amplitude() * radial * area, 0.0};
}

}  // namespace qmlab
