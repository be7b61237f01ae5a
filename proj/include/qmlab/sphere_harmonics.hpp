#pragma once

#include <complex>
#include <vector>

#include "json.hpp"
#include "qmlab/geometry.hpp"

namespace qmlab {

// One rotated highest-weight harmonic on S^n, as the linear form
//   <c, x> = i x_1 + sum_{m=2}^{n+1} a[m-1] x_m
// raised to the j-th power.  Only the real part is stored; the i in slot 1
// is implicit and never changes (the construction's rotations fix x_1), so
// a[0] is a placeholder that must stay 0.  Harmonicity sum c_m^2 = 0 is
// exactly "the real vector has unit norm".
struct HarmonicTerm {
  std::vector<double> a;  // length n+1, a[0] == 0
};

// Point on S^n in the angle chart phi_1 in [0,2pi), phi_2..phi_n in [0,pi]:
//   x_1 = sin(phi_n)...sin(phi_2) sin(phi_1)
//   x_i = sin(phi_n)...sin(phi_i) cos(phi_{i-1})   (2 <= i <= n+1)
// with surface element prod_{m=2}^{n} sin^{m-1}(phi_m) dphi.
struct SpherePoint {
  Vec angles;
  Vec x;  // cached Cartesian coordinates, length n+1
};

SpherePoint sphere_point(const Vec& angles);
double sphere_jacobian(const SpherePoint& pt);

// Sum of rotated highest-weight harmonics: prefactor * sum of terms, each an
// exact degree-j eigenfunction (eigenvalue j(j+n-1) of -Laplacian on S^n).
struct HarmonicSum {
  int n = 2;                       // sphere dimension
  int k = 1;                       // construction stage, 1..n
  long long j = 1;                 // polynomial degree
  double h = 1.0;                  // (j(j+n-1))^{-1/2}
  double alpha = 0.0;              // concentration scale, set by the first extend
  double epsilon = 0.1;            // rotation-count constant
  double prefactor_exponent = 0.0; // the sum is scaled by h^{this}
  double scale = 1.0;              // external scalar, for homogeneity checks
  double epsilon_effective = 0.0;  // realized per-stage S * h^{1/2-alpha} (0 until extended)
  std::vector<HarmonicTerm> terms;

  double prefactor() const;  // scale * h^{prefactor_exponent}
  // Dimensions, h consistency h^2 j(j+n-1) = 1, slot-0 zeros, and unit real
  // norm (harmonicity) per term to 1e-12.
  void validate() const;
};

// Stage 1: the single term (i, 1, 0, ..., 0) with prefactor h^{-(n-1)/4}.
HarmonicSum build_u1(int n, long long j, double epsilon = 0.1);

// Rotations per extension stage: ceil(epsilon * h^{alpha - 1/2}); never 0.
long long stage_count(double epsilon, double h, double alpha);

// The (n+1)x(n+1) row-major orthogonal matrix mixing coordinates 2 and k+1:
// entries sqrt(1-hs^2) on the diagonal pair, -+ sqrt(h) s off it, identity
// elsewhere.  Requires h s^2 <= 1 and 2 <= k <= n.
std::vector<double> rotation(long long s, int k, double h, int n);

// Stage k-1 -> k: each term rotated by R_{s,k} for s = 1..stage_count, the
// prefactor gains h^{(1/2-alpha)/2}.  Verifies the coefficient bounds the
// construction guarantees (|1-a[1]^2| <= (k-1) h S^2, |a[m]| <= sqrt(h) S,
// unit norm) and throws ConstructionError naming the offending (s, term).
HarmonicSum extend(const HarmonicSum& u_prev, double alpha);

// u composed with R_{s,k}: coefficients rotated by R^T, metadata unchanged.
HarmonicSum rotate_sum(const HarmonicSum& u, long long s, int k);

// prefactor * sum over terms of <c,x>^j, computed per term in log-magnitude
// and phase relative to the largest term; relative magnitudes below 1e-300
// contribute 0, and <c,x> = 0 is an exact 0 contribution.
std::complex<double> evaluate(const HarmonicSum& u, const SpherePoint& pt);

// Gauss-Legendre node counts per angle (phi_1 first).
struct SphereGrid {
  std::vector<int> counts;
};

// Minimal grid satisfying the resolution rule: 4 nodes per length h in each
// angle, so ceil(8 pi / h) for phi_1 and ceil(4 pi / h) for the others.
SphereGrid auto_grid(int n, double h);

// sqrt of the tensor Gauss-Legendre quadrature of |u|^2 over S^n (n in
// {2,3}).  Grids coarser than the resolution rule raise ResolutionError.
double l2_norm(const HarmonicSum& u, const SphereGrid& grid, int threads = 1);

// Same with the weight (1 + h * sum_{m >= first_coord} x_m^2)^exponent under
// the integral; first_coord is 1-based in R^{n+1}.
double weighted_l2_norm(const HarmonicSum& u, const SphereGrid& grid, int first_coord,
                        double exponent, int threads = 1);

// Samples |u| on an inclusive lattice over the concentration region
//   |phi_1 - pi/2| <= eps_region h^{1-2 alpha},
//   |phi_m - pi/2| <= eps_region h^{1-alpha}  (m >= 2)
// centered on the Cartesian point e_1 (all angles pi/2), and returns
// min |u| * h^{(n-1)(1-alpha)/2}.  Requires stage k = n.
double concentration_check(const HarmonicSum& u, double eps_region, int samples_per_axis = 21);

// |integral over S^n of (u o R_{s,k}) conj(u o R_{s',k})| by quadrature.
double pair_correlation(const HarmonicSum& u, long long s, long long s_prime, int k,
                        const SphereGrid& grid, int threads = 1);

nlohmann::json harmonic_to_json(const HarmonicSum& u);
HarmonicSum harmonic_from_json(const nlohmann::json& js);

}  // namespace qmlab
