#include <cmath>
#include <vector>

#include "doctest.h"
#include "mmn/compositions.hpp"
#include "mmn/errors.hpp"
#include "mmn/exact_risk.hpp"
#include "mmn/model.hpp"
#include "mmn/rng.hpp"

using namespace mmn;

namespace {

// Straight transcription of the risk definition: sum over x of the
// multinomial probability times KL(theta || q(.|x)).
double brute_force_risk(const std::vector<double>& a, int N, const std::vector<double>& theta) {
  const int k = static_cast<int>(a.size());
  double A = 0.0;
  for (double v : a) A += v;
  double risk = 0.0;
  std::vector<int> x(k, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == k - 1) {
      x[i] = left;
      double logp = std::lgamma(N + 1.0);
      for (int j = 0; j < k; ++j) logp += x[j] * std::log(theta[j]) - std::lgamma(x[j] + 1.0);
      double kl = 0.0;
      for (int j = 0; j < k; ++j) kl += theta[j] * std::log(theta[j] / ((x[j] + a[j]) / (N + A)));
      risk += std::exp(logp) * kl;
      return;
    }
    for (int v = 0; v <= left; ++v) {
      x[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, N);
  return risk;
}

}  // namespace

TEST_CASE("compositions") {
  CHECK(composition_count(4, 3) == 15);
  CHECK(composition_count(0, 5) == 1);
  CHECK(composition_count(100000, 40) == UINT64_MAX);
  int count = 0;
  std::vector<int> first;
  for_each_composition(4, 3, [&](std::span<const int> x) {
    if (count == 0) first.assign(x.begin(), x.end());
    CHECK(x[0] + x[1] + x[2] == 4);
    ++count;
  });
  CHECK(count == 15);
  CHECK(first == std::vector<int>{4, 0, 0});
}

TEST_CASE("ThetaPoint parsing") {
  const auto t = ThetaPoint::from({0.2, 0.3}, 3);
  CHECK(t.k() == 3);
  CHECK(t[2] == doctest::Approx(0.5));
  CHECK_THROWS_AS(ThetaPoint::from({0.2, 0.3, 0.6}, 3), DomainError);
  CHECK_THROWS_AS(ThetaPoint::from({0.0, 1.0}, 2), DomainError);
  CHECK_THROWS_AS(ThetaPoint::from({0.5}, 3), DomainError);
}

TEST_CASE("risk at N = 1, k = 2, uniform prior, theta = 1/2 is ln(9/8)/2") {
  const PriorSpec p = PriorSpec::symmetric(1.0, 2);
  const ModelSpec m{2, 1};
  const auto th = ThetaPoint::from({0.5, 0.5}, 2);
  const double expected = 0.5 * std::log(9.0 / 8.0);
  CHECK(risk_enumeration(p, m, th).exact_risk == doctest::Approx(expected).epsilon(1e-15));
  CHECK(risk_coordinatewise(p, m, th).exact_risk == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("risk at N = 0 is KL(theta || a/A)") {
  const PriorSpec p({1.0, 2.0, 1.0});
  const auto th = ThetaPoint::from({0.5, 0.25, 0.25}, 3);
  const double kl = 0.5 * std::log(0.5 / 0.25) + 0.25 * std::log(0.25 / 0.5) + 0.25 * std::log(1.0);
  CHECK(risk_coordinatewise(p, {3, 0}, th).exact_risk == doctest::Approx(kl).epsilon(1e-14));
  CHECK(risk_enumeration(p, {3, 0}, th).exact_risk == doctest::Approx(kl).epsilon(1e-14));
}

TEST_CASE("both risk methods match a brute-force oracle") {
  StreamRng rng(99, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 3);
    const int N = static_cast<int>(rng() % 9);
    std::vector<double> a(k), th(k);
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
      a[i] = 0.1 + 3.0 * rng.uniform();
      th[i] = 0.05 + rng.uniform();
      s += th[i];
    }
    for (double& v : th) v /= s;
    th[k - 1] = 1.0;
    for (int i = 0; i < k - 1; ++i) th[k - 1] -= th[i];
    const PriorSpec p(a);
    const ThetaPoint t(th);
    const double oracle = brute_force_risk(a, N, th);
    CHECK(risk_enumeration(p, {k, N}, t).exact_risk == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(risk_coordinatewise(p, {k, N}, t).exact_risk == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("enumeration refuses oversized problems") {
  const PriorSpec p = PriorSpec::symmetric(1.0, 8);
  const auto t = ThetaPoint(std::vector<double>(8, 0.125));
  CHECK_THROWS_AS(risk_enumeration(p, {8, 200}, t, 1000), SizeError);
}

TEST_CASE("coordinatewise risk stays accurate at large N") {
  const PriorSpec p = PriorSpec::symmetric(SymmetricPrior::minimax_alpha(), 2);
  const auto t = ThetaPoint::from({0.3, 0.7}, 2);
  const double r = risk_coordinatewise(p, {2, 20000}, t).exact_risk;
  // leading term (k-1)/(2N)
  CHECK(r == doctest::Approx(1.0 / 40000.0).epsilon(1e-3));
}

TEST_CASE("sup risk over the truncated simplex") {
  const PriorSpec p = PriorSpec::symmetric(0.5, 2);
  const ModelSpec m{2, 64};
  const TruncatedSimplex t{2, 0.05};
  SearchSettings s;
  s.threads = 1;
  const auto rep = sup_risk(p, m, t, 64, s);
  // No point on a fine brute grid beats the reported supremum.
  double best = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double th = 0.05 + 0.9 * i / 2000.0;
    best = std::max(best, risk_coordinatewise(p, m, ThetaPoint::from({th}, 2)).exact_risk);
  }
  CHECK(rep.sup_value >= best - 1e-15);
  CHECK(rep.sup_value == doctest::Approx(risk_coordinatewise(p, m, ThetaPoint(rep.argmax_theta)).exact_risk));
  CHECK(t.contains(rep.argmax_theta));
  CHECK_FALSE(rep.search_trace.empty());
}

TEST_CASE("truncated predictive table") {
  const SymmetricPrior a{1.0, 2};
  const TruncatedSimplex t{2, 0.1};
  const ModelSpec m{2, 6};
  const TruncatedPredictiveTable table(a, t, m);
  for (std::size_t c = 0; c < table.compositions().size(); ++c) {
    const double s = std::exp(table.log_predictive(c, 0)) + std::exp(table.log_predictive(c, 1));
    CHECK(s == doctest::Approx(1.0).epsilon(1e-11));
    Observation x{table.compositions()[c]};
    CHECK(std::exp(table.log_predictive(c, 0)) ==
          doctest::Approx(truncated_predictive_density(a, t, m, x, {0})).epsilon(1e-11));
  }
  CHECK(TruncatedPredictiveTable::max_N(2) == 64);
  CHECK(TruncatedPredictiveTable::max_N(3) == 24);
  CHECK_THROWS_AS(TruncatedPredictiveTable(a, t, ModelSpec{2, 65}), SizeError);
}

TEST_CASE("Bayes risk: quadrature against a Riemann-sum oracle and Monte Carlo") {
  const PriorSpec p = PriorSpec::symmetric(1.0, 2);
  const ModelSpec m{2, 5};
  const auto q = bayes_risk(FullWeight{p}, PredictiveKind::Full, m);
  // Uniform weight on [0,1]: midpoint sum of the exact risk.
  const int n = 20000;
  double oracle = 0.0;
  for (int i = 0; i < n; ++i) {
    const double th = (i + 0.5) / n;
    oracle += risk_coordinatewise(p, m, ThetaPoint::from({th}, 2)).exact_risk / n;
  }
  CHECK(q.value == doctest::Approx(oracle).epsilon(1e-6));

  // k = 2, N = 8, alpha = 1, eps = 0.05, full predictive: quadrature vs MC.
  const TruncatedWeight w{{1.0, 2}, {2, 0.05}};
  const auto quad = bayes_risk(w, PredictiveKind::Full, {2, 8});
  MonteCarloSettings mc;
  mc.draws = 1'000'000;
  mc.threads = 0;
  const auto sim = bayes_risk(w, PredictiveKind::Full, {2, 8}, {}, mc, IntegrationMode::MonteCarlo);
  CHECK(std::abs(quad.value - sim.value) <= 3.0 * sim.error_estimate);

  // Bayes rule property: the truncated prior's own predictive does no worse.
  const auto own = bayes_risk(w, PredictiveKind::Truncated, {2, 8});
  CHECK(own.value <= quad.value + 1e-12);
  CHECK_THROWS_AS(bayes_risk(FullWeight{p}, PredictiveKind::Truncated, m), DomainError);
}
