#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qmlab/errors.hpp"
#include "qmlab/scale_predictor.hpp"

using namespace qmlab;

namespace {
ScaleQuery query(int n, int k, const LebesgueIndex& p, double beta) {
  ScaleQuery q;
  q.n = n;
  q.k = k;
  q.p = p;
  q.beta = beta;
  q.alpha_grid_step = Rational(1, 64);
  return q;
}
}  // namespace

TEST_CASE("tube exponent closed-form values") {
  // alpha = 0, max(1-alpha, beta) = 1: E = 1/2 - 2/p.
  CHECK(tube_exponent_exact(2, 1, LebesgueIndex(6), Rational(1, 2), Rational(0)) ==
        Rational(1, 6));
  CHECK(tube_exponent_exact(2, 1, LebesgueIndex(6), Rational(3, 4), Rational(0)) ==
        Rational(1, 6));
  // alpha = 1/2: E = 1/4 - beta/p.
  CHECK(tube_exponent_exact(2, 1, LebesgueIndex(2), Rational(3, 4), Rational(1, 2)) ==
        Rational(-1, 8));
  // At the kink alpha = 1 - beta.
  CHECK(tube_exponent_exact(2, 1, LebesgueIndex(5), Rational(3, 4), Rational(1, 4)) ==
        Rational(1, 8));
  CHECK(tube_exponent_exact(3, 1, LebesgueIndex(2), Rational(3, 4), Rational(1, 4)) ==
        Rational(-1, 4));
  // p = infinity drops the volume term entirely.
  CHECK(tube_exponent_exact(3, 2, LebesgueIndex::infinity(), Rational(1, 2), Rational(0)) ==
        Rational(1));

  // The double overload is the exact value, rounded once.
  CHECK(tube_exponent(2, 1, LebesgueIndex(6), 0.5, 0.0) ==
        tube_exponent_exact(2, 1, LebesgueIndex(6), Rational(1, 2), Rational(0)).to_double());
  CHECK(tube_exponent(3, 1, LebesgueIndex(2), 0.75, 0.25) == -0.25);
}

TEST_CASE("tube exponent domain errors") {
  CHECK_THROWS_AS(tube_exponent(1, 1, LebesgueIndex(2), 0.75, 0.0), DomainError);
  CHECK_THROWS_AS(tube_exponent(3, 0, LebesgueIndex(2), 0.75, 0.0), DomainError);
  CHECK_THROWS_AS(tube_exponent(3, 3, LebesgueIndex(2), 0.75, 0.0), DomainError);
  CHECK_THROWS_AS(tube_exponent(3, 1, LebesgueIndex(Rational(3, 2)), 0.75, 0.0), DomainError);
  CHECK_THROWS_AS(tube_exponent(2, 1, LebesgueIndex(2), 0.75, -0.1), DomainError);
  CHECK_THROWS_AS(tube_exponent(2, 1, LebesgueIndex(2), 0.75, 0.6), DomainError);
  CHECK_THROWS_AS(tube_exponent(2, 1, LebesgueIndex(2), 0.3, 0.0), DomainError);
  CHECK_THROWS_AS(tube_exponent(2, 1, LebesgueIndex(2), 1.2, 0.0), DomainError);
  CHECK_THROWS_AS(
      tube_exponent_exact(2, 1, LebesgueIndex(2), Rational(1, 4), Rational(0)), DomainError);
  CHECK_THROWS_AS(
      tube_exponent_exact(2, 1, LebesgueIndex(2), Rational(3, 4), Rational(3, 4)), DomainError);
}

TEST_CASE("predicted concentration scales, n = 2 hypersurface") {
  SUBCASE("p = 2: thinnest tube wins") {
    Prediction pr = predict_alpha(query(2, 1, LebesgueIndex(2), 0.75));
    REQUIRE(pr.alpha_star.size() == 1);
    CHECK(pr.alpha_star[0].first == Rational(1, 2));
    CHECK(pr.alpha_star[0].second == Rational(1, 2));
    CHECK(pr.case_label == CaseLabel::Thalf_tube);
    CHECK(pr.exponent_exact == Rational(-1, 8));
    CHECK(pr.representative_alpha == Rational(1, 2));
    CHECK(pr.critical_time_scale == 0.0);
  }
  SUBCASE("p = infinity: point concentration wins") {
    Prediction pr = predict_alpha(query(2, 1, LebesgueIndex::infinity(), 0.75));
    REQUIRE(pr.alpha_star.size() == 1);
    CHECK(pr.alpha_star[0].first == Rational(0));
    CHECK(pr.alpha_star[0].second == Rational(0));
    CHECK(pr.case_label == CaseLabel::T0_point);
    CHECK(pr.exponent_exact == Rational(1, 2));
    CHECK(pr.critical_time_scale == 1.0);
  }
  SUBCASE("p = p_hyp: flat maximum above the kink") {
    Prediction pr = predict_alpha(query(2, 1, LebesgueIndex(4), 0.75));
    REQUIRE(pr.alpha_star.size() == 1);
    CHECK(pr.alpha_star[0].first == Rational(1, 4));
    CHECK(pr.alpha_star[0].second == Rational(1, 2));
    CHECK(pr.case_label == CaseLabel::all_scales_critical);
    CHECK(pr.exponent_exact == Rational(1, 16));
    CHECK(pr.representative_alpha == Rational(1, 4));
    CHECK(pr.critical_time_scale == 0.5);
  }
  SUBCASE("p = p_stz: flat maximum below the kink") {
    Prediction pr = predict_alpha(query(2, 1, LebesgueIndex(6), 0.75));
    REQUIRE(pr.alpha_star.size() == 1);
    CHECK(pr.alpha_star[0].first == Rational(0));
    CHECK(pr.alpha_star[0].second == Rational(1, 4));
    CHECK(pr.case_label == CaseLabel::all_scales_critical);
    CHECK(pr.exponent_exact == Rational(1, 6));
    CHECK(pr.representative_alpha == Rational(1, 4));
  }
  SUBCASE("p strictly between the breakpoints: kink maximizer") {
    Prediction pr = predict_alpha(query(2, 1, LebesgueIndex(5), 0.75));
    REQUIRE(pr.alpha_star.size() == 1);
    CHECK(pr.alpha_star[0].first == Rational(1, 4));
    CHECK(pr.alpha_star[0].second == Rational(1, 4));
    CHECK(pr.case_label == CaseLabel::T_one_minus_beta);
    CHECK(pr.exponent_exact == Rational(1, 8));
    CHECK(pr.critical_time_scale == 0.5);
  }
  SUBCASE("beta = 1/2 pushes the kink to the right endpoint") {
    Prediction pr = predict_alpha(query(2, 1, LebesgueIndex(5), 0.5));
    REQUIRE(pr.alpha_star.size() == 1);
    CHECK(pr.alpha_star[0].first == Rational(1, 2));
    CHECK(pr.alpha_star[0].second == Rational(1, 2));
    CHECK(pr.case_label == CaseLabel::T_one_minus_beta);
    CHECK(pr.exponent_exact == Rational(3, 20));
  }
}

TEST_CASE("predicted concentration scales, curves in 3d") {
  Prediction pr = predict_alpha(query(3, 1, LebesgueIndex(2), 0.75));
  REQUIRE(pr.alpha_star.size() == 1);
  CHECK(pr.alpha_star[0].first == Rational(1, 4));
  CHECK(pr.alpha_star[0].second == Rational(1, 2));
  CHECK(pr.case_label == CaseLabel::all_scales_critical);
  CHECK(pr.exponent_exact == Rational(-1, 4));
  CHECK(pr.representative_alpha == Rational(1, 4));
  CHECK(pr.exponent_at_max == pr.exponent_exact.to_double());
}

TEST_CASE("predict_alpha validates its query") {
  CHECK_THROWS_AS(predict_alpha(query(3, 3, LebesgueIndex(2), 0.75)), DomainError);
  CHECK_THROWS_AS(predict_alpha(query(2, 1, LebesgueIndex(2), 0.0)), DomainError);
  ScaleQuery q = query(2, 1, LebesgueIndex(2), 0.75);
  q.alpha_grid_step = Rational(0);
  CHECK_THROWS_AS(predict_alpha(q), DomainError);
  q.alpha_grid_step = Rational(2, 3);
  CHECK_THROWS_AS(predict_alpha(q), DomainError);
}

TEST_CASE("time-scale contribution regimes") {
  CHECK(contribution_regime(0.5, LebesgueIndex(4)) == ContributionRegime::all_scales);
  CHECK(contribution_regime(0.5 + 1e-13, LebesgueIndex(4)) == ContributionRegime::all_scales);
  CHECK(contribution_regime(0.9, LebesgueIndex(4)) == ContributionRegime::smallest_scale);
  CHECK(contribution_regime(0.3, LebesgueIndex(4)) == ContributionRegime::largest_scale);
  CHECK(contribution_regime(1.0, LebesgueIndex(2)) == ContributionRegime::all_scales);
  CHECK(contribution_regime(0.0, LebesgueIndex::infinity()) ==
        ContributionRegime::largest_scale);
  CHECK(contribution_regime(0.5, LebesgueIndex::infinity()) ==
        ContributionRegime::smallest_scale);
  CHECK_THROWS_AS(contribution_regime(-0.1, LebesgueIndex(4)), DomainError);
  CHECK_THROWS_AS(contribution_regime(0.5, LebesgueIndex(1)), DomainError);
}

TEST_CASE("kernel bound over the shrinking neighborhood") {
  const double h = 0.0625;  // threshold h^{2 beta - 1} = 1/4 at beta = 3/4
  CHECK(kernel_l2_bound(2, 1, 0.75, h, 0.0) == 1.0);
  CHECK(kernel_l2_bound(2, 1, 0.75, h, 0.25) == 1.0);
  CHECK(kernel_l2_bound(2, 1, 0.75, h, 0.5) ==
        doctest::Approx(4.0 * std::sqrt(2.0) / 3.0).epsilon(1e-14));
  // k = n: no transverse directions, the bound degenerates to 1.
  CHECK(kernel_l2_bound(2, 2, 0.75, h, 0.5) == 1.0);
  // beta below 1/2 is clamped: threshold becomes h^0 = 1.
  CHECK(kernel_l2_bound(2, 1, 0.2, h, 0.9) == 1.0);
  CHECK(kernel_l2_bound(3, 1, 0.5, h, 2.0) ==
        doctest::Approx(std::pow(h, -0.5) * std::pow(h + 2.0, -1.0)).epsilon(1e-14));

  CHECK_THROWS_AS(kernel_l2_bound(1, 1, 0.75, h, 0.5), DomainError);
  CHECK_THROWS_AS(kernel_l2_bound(2, 0, 0.75, h, 0.5), DomainError);
  CHECK_THROWS_AS(kernel_l2_bound(2, 3, 0.75, h, 0.5), DomainError);
  CHECK_THROWS_AS(kernel_l2_bound(2, 1, 0.75, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(kernel_l2_bound(2, 1, 0.75, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(kernel_l2_bound(2, 1, 0.75, h, -1.0), DomainError);
}

TEST_CASE("dispersive decay bookkeeping") {
  const double h = 0.0625;
  DecayProfile small_tau = decay_profile(3, 2, 0.75, h, 0.2);
  CHECK(small_tau.kappa_inf == 1.0);
  CHECK(small_tau.gamma_inf == 1.0);
  CHECK(small_tau.kappa_2 == 0.0);
  CHECK(small_tau.gamma_2 == 0.0);
  CHECK(small_tau.tau == 0.2);

  DecayProfile large_tau = decay_profile(3, 2, 0.75, h, 0.3);
  CHECK(large_tau.kappa_2 == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(large_tau.gamma_2 == 0.5);

  // theta = 2/p between gamma_2 (p = 2) and gamma_inf (p = infinity).
  CHECK(interpolated_gamma(large_tau, LebesgueIndex(2)) == 0.5);
  CHECK(interpolated_gamma(large_tau, LebesgueIndex::infinity()) == 1.0);
  CHECK(interpolated_gamma(large_tau, LebesgueIndex(4)) == 0.75);
  CHECK_THROWS_AS(interpolated_gamma(large_tau, LebesgueIndex(1)), DomainError);
  CHECK_THROWS_AS(decay_profile(2, 1, 0.75, -0.5, 0.1), DomainError);
}
