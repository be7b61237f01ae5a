#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qmlab/errors.hpp"
#include "qmlab/region_norms.hpp"

using namespace qmlab;

namespace {

TubularNeighborhood region2(int k, double beta, double h, double extent = 0.5) {
  TubularNeighborhood r;
  r.submanifold.n = 2;
  r.submanifold.k = k;
  r.beta = beta;
  r.h = h;
  r.extent = extent;
  return r;
}

SpectralCap cap2(double h, double alpha) {
  SpectralCap c;
  c.n = 2;
  c.h = h;
  c.alpha = alpha;
  return c;
}

}  // namespace

TEST_CASE("region validation and half widths") {
  TubularNeighborhood r = region2(1, 0.5, 0.0625);
  CHECK_NOTHROW(r.validate());
  CHECK(r.half_widths() == Vec{0.5, 0.25});

  r.submanifold.k = 2;
  CHECK_THROWS_AS(r.validate(), DomainError);
  r.submanifold.k = 0;
  CHECK_THROWS_AS(r.validate(), DomainError);
  r = region2(1, 0.5, 1.5);
  CHECK_THROWS_AS(r.validate(), DomainError);
  r = region2(1, 0.5, 0.0625, -1.0);
  CHECK_THROWS_AS(r.validate(), DomainError);
}

TEST_CASE("raw field norms on exactly integrable fields") {
  const TubularNeighborhood r = region2(1, 0.5, 0.0625);
  const NormGrid grid{0.015625};
  // Region volume = (2 * 0.5) * (2 * h^0.5) = 0.5.
  auto one = [](const Vec&) { return std::complex<double>(1.0, 0.0); };
  CHECK(lp_norm_field(one, r, LebesgueIndex(2), grid) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(lp_norm_field(one, r, LebesgueIndex(4), grid) ==
        doctest::Approx(std::pow(0.5, 0.25)).epsilon(1e-12));
  CHECK(lp_norm_field(one, r, LebesgueIndex::infinity(), grid) ==
        doctest::Approx(1.0).epsilon(1e-14));

  // |x_0|^2 integrates to extent^3/3 * 2 h^beta * 2; midpoint quadrature is
  // second order, so only a loose tolerance is claimed.
  auto linear = [](const Vec& x) { return std::complex<double>(x[0], 0.0); };
  CHECK(lp_norm_field(linear, r, LebesgueIndex(2), grid) ==
        doctest::Approx(std::sqrt(1.0 / 24.0)).epsilon(1e-3));

  CHECK_THROWS_AS(lp_norm_field(one, r, LebesgueIndex(2), NormGrid{0.02}), ResolutionError);
  CHECK_THROWS_AS(lp_norm_field(one, r, LebesgueIndex(2), NormGrid{0.0}), DomainError);
  CHECK_THROWS_AS(lp_norm_field(one, r, LebesgueIndex(2), NormGrid{-0.1}), DomainError);
}

TEST_CASE("normalized field: Plancherel sanity on the unit box") {
  const SpectralCap cap = cap2(0.0625, 0.25);
  Box box;
  box.lo = {-0.5, -0.5};
  box.hi = {0.5, 0.5};
  const double l2 = lp_norm_box(cap, nullptr, box, LebesgueIndex(2), NormGrid{0.015625});
  // The normalized field has total mass 1; the unit box holds a nontrivial
  // fraction of it and quadrature cannot push the estimate much above 1.
  CHECK(l2 <= 1.0 + 1e-3);
  CHECK(l2 >= 0.2);
}

TEST_CASE("region and cap must share the frequency scale") {
  const SpectralCap cap = cap2(0.0625, 0.25);
  TubularNeighborhood r = region2(1, 0.75, 0.125);
  CHECK_THROWS_AS(lp_norm(cap, nullptr, r, LebesgueIndex(2), NormGrid{0.015625}), DomainError);
  r = region2(1, 0.75, 0.0625);
  CHECK_THROWS_AS(lp_norm(cap, nullptr, r, LebesgueIndex(2), NormGrid{0.03}), ResolutionError);

  SpectralCap cap3 = cap2(0.0625, 0.25);
  cap3.n = 3;
  CHECK_THROWS_AS(lp_norm(cap3, nullptr, r, LebesgueIndex(2), NormGrid{0.015625}), DomainError);
}

TEST_CASE("slab inequality from the slice decomposition") {
  const SpectralCap cap = cap2(0.0625, 0.25);
  const TubularNeighborhood r = region2(1, 0.75, 0.0625);
  const NormGrid grid{0.015625};

  LpNormDetail d4 = lp_norm_detailed(cap, nullptr, r, LebesgueIndex(4), grid);
  CHECK(d4.slab_factor ==
        doctest::Approx(std::pow(2.0 * std::pow(0.0625, 0.75), 0.25)).epsilon(1e-14));
  CHECK(d4.norm <= d4.slice_sup * d4.slab_factor * (1.0 + 1e-9));
  CHECK(d4.norm > 0.0);
  CHECK(d4.corner_nodes >= 32);
  CHECK(d4.norm == doctest::Approx(lp_norm(cap, nullptr, r, LebesgueIndex(4), grid))
                       .epsilon(1e-12));

  // p = infinity: the slab bound collapses to an identity.
  LpNormDetail dinf = lp_norm_detailed(cap, nullptr, r, LebesgueIndex::infinity(), grid);
  CHECK(dinf.slab_factor == 1.0);
  CHECK(dinf.norm == doctest::Approx(dinf.slice_sup).epsilon(1e-14));
}

TEST_CASE("norms shrink as the neighborhood tightens") {
  const SpectralCap cap = cap2(0.0625, 0.25);
  const NormGrid grid{0.015625};
  const LebesgueIndex p(4);
  const double loose = lp_norm(cap, nullptr, region2(1, 0.5, 0.0625), p, grid);
  const double mid = lp_norm(cap, nullptr, region2(1, 0.75, 0.0625), p, grid);
  const double tight = lp_norm(cap, nullptr, region2(1, 1.0, 0.0625), p, grid);
  CHECK(loose > mid);
  CHECK(mid > tight);
  CHECK(tight > 0.0);
}

TEST_CASE("concentration lower bound at the predicted scale") {
  // sigma(2,1,4,3/4) = 1/16: the L4 norm over Sigma_{3/4} at the critical
  // concentration scale alpha = 1/4 grows like h^{-1/16}.
  const double h = 1.0 / 64.0;
  const double norm =
      lp_norm(cap2(h, 0.25), nullptr, region2(1, 0.75, h), LebesgueIndex(4), NormGrid{h / 4});
  CHECK(norm >= 0.05 * std::pow(h, -1.0 / 16.0));
}

TEST_CASE("power-law fits") {
  auto make = [](double h, double norm) {
    ExperimentRecord r;
    r.h = h;
    r.norm = norm;
    return r;
  };
  std::vector<ExperimentRecord> clean = {make(0.125, 3.0 * std::pow(0.125, -0.5)),
                                         make(0.0625, 3.0 * std::pow(0.0625, -0.5)),
                                         make(0.03125, 3.0 * std::pow(0.03125, -0.5))};
  FitResult fit = fit_exponent(clean);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.max_residual <= 1e-12);

  std::vector<ExperimentRecord> flat = {make(0.125, 2.0), make(0.0625, 2.0), make(0.25, 2.0)};
  CHECK(fit_exponent(flat).slope == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_exponent({make(0.125, 1.0), make(0.0625, 1.0)}), DomainError);
  CHECK_THROWS_AS(fit_exponent({make(0.125, 1.0), make(0.125, 2.0), make(0.125, 3.0)}),
                  DomainError);
  CHECK_THROWS_AS(fit_exponent({make(0.125, 1.0), make(0.0625, 0.0), make(0.25, 1.0)}),
                  DomainError);
}

TEST_CASE("sweep produces one record per h") {
  SweepConfig cfg;
  cfg.n = 2;
  cfg.k = 1;
  cfg.p = LebesgueIndex::infinity();
  cfg.beta = 0.5;
  cfg.h_list = {0.0625, 0.03125, 0.015625};
  std::vector<ExperimentRecord> records = sweep(cfg);
  REQUIRE(records.size() == 3);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ExperimentRecord& r = records[i];
    CHECK(r.n == 2);
    CHECK(r.k == 1);
    CHECK(r.p == LebesgueIndex::infinity());
    CHECK(r.beta == 0.5);
    // predict_alpha(2, 1, inf, 1/2): point concentration.
    CHECK(r.alpha == 0.0);
    CHECK(r.h == cfg.h_list[i]);
    CHECK(r.norm > 0.0);
    CHECK(r.nodes >= 32);
    CHECK(r.ms == 0.0);  // timings off by default
    CHECK(r.region_id.find("k=1") != std::string::npos);
  }
  // sigma(2,1,inf,1/2) = 1/2: sup growth h^{-1/2}, loosely checked here.
  FitResult fit = fit_exponent(records);
  CHECK(std::abs(-fit.slope - 0.5) < 0.25);

  SweepConfig bad = cfg;
  bad.h_list = {0.0625, 0.03125};
  CHECK_THROWS_AS(sweep(bad), DomainError);
  bad = cfg;
  bad.alpha = 0.8;
  CHECK_THROWS_AS(sweep(bad), DomainError);
  bad = cfg;
  bad.k = 2;
  CHECK_THROWS_AS(sweep(bad), DomainError);
}

TEST_CASE("csv and json serialization") {
  ExperimentRecord r;
  r.n = 2;
  r.k = 1;
  r.p = LebesgueIndex::infinity();
  r.beta = 0.5;
  r.alpha = 0.1;
  r.h = 0.0625;
  r.region_id = "Sigma_beta[k=1,beta=0.5]";
  r.norm = 1.0 / 3.0;
  r.nodes = 48;
  r.ms = 0.0;

  const std::string csv = records_to_csv({r});
  CHECK(csv.rfind("n,k,p,beta,alpha,h,norm,nodes,ms\n", 0) == 0);
  CHECK(csv.find(",inf,") != std::string::npos);
  CHECK(csv.find(format_double(1.0 / 3.0)) != std::string::npos);

  nlohmann::json j = record_to_json(r);
  CHECK(j["p"] == "inf");
  CHECK(j["norm"].get<double>() == 1.0 / 3.0);
  CHECK(j["nodes"] == 48);
  CHECK(j["region_id"] == "Sigma_beta[k=1,beta=0.5]");

  FitResult fit;
  fit.slope = -0.5;
  fit.intercept = 1.25;
  fit.max_residual = 1e-14;
  nlohmann::json fj = fit_to_json(fit);
  CHECK(fj["slope"].get<double>() == -0.5);
  CHECK(fj["intercept"].get<double>() == 1.25);
  CHECK(fj["max_residual"].get<double>() == 1e-14);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-7, 1e300, 0.0, 4096.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}
