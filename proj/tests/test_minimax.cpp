#include <cmath>
#include <vector>

#include "doctest.h"
#include "mmn/errors.hpp"
#include "mmn/exact_risk.hpp"
#include "mmn/minimax.hpp"

using namespace mmn;

TEST_CASE("prior labels") {
  CHECK(parse_labeled_prior("jeffreys").alpha == 0.5);
  CHECK(parse_labeled_prior("uniform").alpha == 1.0);
  CHECK(parse_labeled_prior("minimax").alpha == SymmetricPrior::minimax_alpha());
  const auto x = parse_labeled_prior("1.25");
  CHECK(x.alpha == 1.25);
  CHECK(x.label == "alpha=1.25");
  CHECK_THROWS_AS(parse_labeled_prior("-1"), DomainError);
  CHECK_THROWS_AS(parse_labeled_prior("bayes"), DomainError);
}

TEST_CASE("trend rule") {
  CHECK(decreasing_trend({1.0, 0.8, 0.6}));
  CHECK_FALSE(decreasing_trend({1.0, 0.5, 0.61}));
  CHECK(minimax_second_order(3) == doctest::Approx(-2.0 / 12 * (1 + (7 + 2 * std::sqrt(6.0)) * 3)));
}

TEST_CASE("compare_priors rows and their checks") {
  const EpsilonSchedule s{1.0, 0.73, EpsilonSchedule::Mode::Corollary1};
  const std::vector<LabeledPrior> pr{parse_labeled_prior("jeffreys"), parse_labeled_prior("minimax")};
  const auto rows = compare_priors(2, {256, 1024}, s, pr);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].prior_label == "jeffreys");
  CHECK(rows[1].N == 1024);
  for (const auto& r : rows) {
    CHECK(r.excess_over_t1 == doctest::Approx(r.sup_risk - 1.0 / (2.0 * r.N)));
    CHECK(r.scaled_excess == doctest::Approx(r.N * r.N * r.excess_over_t1));
    // sup is at least the risk at the reported argmax and at the centre
    const PriorSpec p = PriorSpec::symmetric(r.alpha, 2);
    CHECK(r.sup_risk >= risk_coordinatewise(p, {2, r.N}, ThetaPoint::from({0.5}, 2)).exact_risk);
  }
  CHECK(rows[2].scaled_excess < 0.0);  // alpha_hat beats the first-order term
  CHECK(rows[0].scaled_excess > 0.0);
  const auto checks = compare_priors_checks(rows);
  CHECK_FALSE(checks.empty());
}

TEST_CASE("sandwich bracket") {
  const EpsilonSchedule s{1.0, 0.73, EpsilonSchedule::Mode::Theorem3};
  const auto rows = theorem3_sandwich(2, {16, 32}, s);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.upper >= r.lower - 1e-12);
    CHECK(r.full_bayes <= r.upper + 1e-12);  // a Bayes risk never exceeds the sup risk
    CHECK(r.full_bayes >= r.lower - 1e-12);  // the truncated predictive is the Bayes rule
    CHECK(r.gap_scaled == doctest::Approx(r.N * r.N * (r.upper - r.lower)));
  }
  CHECK_THROWS_AS(theorem3_sandwich(2, {128}, s), DomainError);
  const EpsilonSchedule wrong{1.0, 0.73, EpsilonSchedule::Mode::Corollary1};
  CHECK_THROWS_AS(theorem3_sandwich(2, {16}, wrong), DomainError);
}

TEST_CASE("optimal alpha search") {
  const EpsilonSchedule s{1.0, 0.73, EpsilonSchedule::Mode::Corollary1};
  CHECK_THROWS_AS(optimal_alpha_search(2, 256, s, {0.8, 1.0, 1.2}), DomainError);
  const auto g = default_alpha_grid();
  CHECK(g.size() == 41);
  CHECK(g[1] == 0.55);
  const auto r = optimal_alpha_search(2, 512, s, g);
  CHECK(r.curve.size() == g.size());
  double best = 1e300;
  for (const auto& p : r.curve) best = std::min(best, p.sup_risk);
  for (const auto& p : r.curve)
    if (p.sup_risk == best) CHECK(p.alpha == r.alpha_star);
  CHECK(r.alpha_star > 1.0);
  CHECK(r.alpha_star < 2.0);
}
