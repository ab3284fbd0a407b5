#include <cmath>
#include <vector>

#include "doctest.h"
#include "mmn/errors.hpp"
#include "mmn/exact_risk.hpp"
#include "mmn/expansion.hpp"
#include "mmn/minimax.hpp"
#include "mmn/model.hpp"

using namespace mmn;

namespace {

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

const double kAlphaHat = 1.0 + 1.0 / std::sqrt(6.0);

}  // namespace

TEST_CASE("leading terms by hand") {
  const PriorSpec p({0.5, 2.0});
  const ModelSpec m{2, 100};
  const auto th = ThetaPoint::from({0.25}, 2);
  const auto e = theorem1_expansion(p, m, th);
  CHECK(e.t1 == doctest::Approx(1.0 / 200.0));
  // second order: sum (5 - 12 a + 6 a^2)/(12 theta) + A - A^2/2 - k/2 + 1/12, over N^2
  const double coord = (5 - 6 + 1.5) / (12 * 0.25) + (5 - 24 + 24) / (12 * 0.75);
  const double A = 2.5;
  const double cst = A - A * A / 2 - 1.0 + 1.0 / 12;
  CHECK(e.t2 == doctest::Approx((coord + cst) / 1e4).epsilon(1e-14));
  CHECK(e.sum() == doctest::Approx(e.t1 + e.t2 + e.t3 + e.t4));
  CHECK(e.term(1) == e.t1);
  CHECK_THROWS_AS(e.term(5), DomainError);
}

TEST_CASE("alpha_hat kills the 1/theta coefficient at order two") {
  const auto& row = kCoordinateTable[0];
  REQUIRE(row.order == 2);
  const double v = row.poly[0] + row.poly[1] * kAlphaHat + row.poly[2] * kAlphaHat * kAlphaHat;
  CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("corollary-2 closed form equals the truncated general expansion at alpha_hat") {
  for (int k = 2; k <= 6; ++k)
    for (int N : {10, 1000, 100000}) {
      std::vector<double> th(k);
      double s = 0;
      for (int i = 0; i < k; ++i) s += (th[i] = 1.0 + 0.37 * i);
      for (double& v : th) v /= s;
      th[k - 1] = 1.0;
      for (int i = 0; i < k - 1; ++i) th[k - 1] -= th[i];
      const ThetaPoint t(th);
      const auto g = theorem1_expansion(PriorSpec::symmetric(kAlphaHat, k), {k, N}, t, ExpansionForm::Corollary1);
      const auto c = corollary2_expansion(k, N, t);
      for (int o = 1; o <= 4; ++o) CHECK(rel(g.term(o), c.term(o)) <= 1e-13);
    }
}

TEST_CASE("alpha_hat identities") {
  const auto r = alpha_hat_identities(1e-13);
  CHECK(r.passed());
  CHECK(r.checks.size() >= 4);
  // the constant matches the compare-priors target
  CHECK(minimax_second_order(2) == doctest::Approx(-(15 + 4 * std::sqrt(6.0)) / 12).epsilon(1e-15));
}

TEST_CASE("Jeffreys witness sits on the boundary and realizes the lower bound rate") {
  const int N = 2000;
  const double eps = 0.01;
  const auto w = jeffreys_witness(3, eps);
  CHECK(w[0] == eps);
  CHECK(w[1] == doctest::Approx((1 - eps) / 2));
  CHECK(jeffreys_lower_bound(3, N, eps) == doctest::Approx(1.0 / (24.0 * N * N * eps)));
  const double excess =
      risk_coordinatewise(PriorSpec::symmetric(0.5, 3), {3, N}, ThetaPoint(w)).exact_risk - 2.0 / (2.0 * N);
  CHECK(excess >= 0.8 * jeffreys_lower_bound(3, N, eps));
}

TEST_CASE("interior residual of the order-4 expansion falls like N^-5") {
  const PriorSpec p = PriorSpec::symmetric(1.3, 2);
  const auto t = ThetaPoint::from({0.5}, 2);
  std::vector<double> logN, logR;
  for (int N : {20, 40, 80, 160}) {
    const double exact = risk_coordinatewise(p, {2, N}, t).exact_risk;
    const double approx = theorem1_expansion(p, {2, N}, t).sum();
    logN.push_back(std::log(N));
    logR.push_back(std::log(std::abs(exact - approx)));
  }
  const double slope = (logR.back() - logR.front()) / (logN.back() - logN.front());
  CHECK(slope < -4.5);
  CHECK(slope > -5.5);
}

TEST_CASE("lower truncation orders leave residuals of the next order") {
  const PriorSpec p({0.7, 1.9, 1.1});
  const auto t = ThetaPoint::from({0.2, 0.5}, 3);
  for (int order = 1; order <= 3; ++order) {
    std::vector<double> scaled;
    for (int N : {100, 400, 1600}) {
      auto e = theorem1_expansion(p, {3, N}, t);
      e.truncation_order = order;
      const double r = risk_coordinatewise(p, {3, N}, t).exact_risk - e.sum();
      scaled.push_back(std::abs(r) * std::pow(N, order + 1));
    }
    // scaled residual converges to the next coefficient
    CHECK(rel(scaled[1], scaled[2]) < 0.1);
  }
}

TEST_CASE("separable pieces reassemble the expansion") {
  const PriorSpec p({0.7, 1.9, 1.1});
  const int N = 300;
  const auto t = ThetaPoint::from({0.2, 0.5}, 3);
  for (auto form : {ExpansionForm::Theorem1, ExpansionForm::Corollary1}) {
    const auto e = theorem1_expansion(p, {3, N}, t, form);
    double s = expansion_constant(p, N, 4, form);
    for (std::size_t i = 0; i < 3; ++i) s += expansion_coordinate(p, i, N, t[i], 4, form);
    CHECK(s == doctest::Approx(e.sum()).epsilon(1e-14));
  }
}

TEST_CASE("residual scale and form names") {
  CHECK(residual_scale(100, 0.1, 4, ExpansionForm::Corollary1) == doctest::Approx(1e4));
  CHECK(residual_scale(100, 0.1, 4, ExpansionForm::Theorem1) == doctest::Approx(1e10 * 1e-4));
  CHECK(residual_scale(100, 0.1, 2, ExpansionForm::Theorem1) == doctest::Approx(1e6));
  CHECK(parse_expansion_form(expansion_form_name(ExpansionForm::Corollary1)) == ExpansionForm::Corollary1);
  CHECK_THROWS_AS(parse_expansion_form("nope"), DomainError);
}

TEST_CASE("full order-4 residual stays bounded under N^5 eps^4 scaling") {
  const EpsilonSchedule s{1.0, 0.73, EpsilonSchedule::Mode::Theorem1};
  SearchSettings search;
  search.starts = 8;
  const auto prof = expansion_error_profile(PriorSpec::symmetric(kAlphaHat, 2), s, {256, 1024, 4096, 16384}, 4,
                                            ExpansionForm::Theorem1, search);
  double lo = 1e300, hi = 0;
  for (const auto& r : prof.rows) {
    lo = std::min(lo, r.scaled_residual);
    hi = std::max(hi, r.scaled_residual);
  }
  CHECK(hi / lo < 3.0);
  CHECK(hi < 1.0);
}

TEST_CASE("corollary-1 residual under N^2 scaling decreases") {
  SearchSettings search;
  search.starts = 8;
  const auto prior = PriorSpec::symmetric(kAlphaHat, 2);
  // Away from the N^(3/4) eps_N boundary the decay is clean.
  const EpsilonSchedule fast{1.0, 0.6, EpsilonSchedule::Mode::Corollary1};
  const auto a = expansion_error_profile(prior, fast, {256, 1024, 4096, 16384}, 4, ExpansionForm::Corollary1, search);
  for (std::size_t i = 1; i < a.rows.size(); ++i) CHECK(a.rows[i].scaled_residual < a.rows[i - 1].scaled_residual);
  // At r = 0.73 the dropped terms only decay like N^(3 - 4r) = N^0.08.
  const EpsilonSchedule slow{1.0, 0.73, EpsilonSchedule::Mode::Corollary1};
  const auto b = expansion_error_profile(prior, slow, {256, 1024, 4096}, 4, ExpansionForm::Corollary1, search);
  CHECK(b.rows.back().scaled_residual < b.rows.front().scaled_residual);
  CHECK(expansion_csv_header() == "N,eps,sup_abs_residual,scaled_residual,argmax_theta");
  CHECK(to_csv_row(b.rows[0]).rfind("256,", 0) == 0);
}
