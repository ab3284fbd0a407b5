#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "mmn/exact_risk.hpp"
#include "mmn/expansion.hpp"
#include "mmn/model.hpp"
#include "mmn/moments.hpp"
#include "mmn/numeric.hpp"
#include "mmn/rng.hpp"
#include "mmn/simplex_integrals.hpp"

using namespace mmn;

namespace {

std::vector<double> random_simplex(StreamRng& rng, int k, double floor = 0.0) {
  std::vector<double> th(k);
  const std::vector<double> ones(k, 1.0);
  sample_dirichlet(rng, ones, th);
  for (double& v : th) v = floor + (1.0 - k * floor) * v;
  th[k - 1] = 1.0 - std::accumulate(th.begin(), th.end() - 1, 0.0);
  return th;
}

std::vector<double> random_alphas(StreamRng& rng, int k) {
  std::vector<double> a(k);
  for (double& v : a) v = std::exp(std::log(0.1) + std::log(100.0) * rng.uniform());
  return a;
}

}  // namespace

TEST_CASE("property: two-argument multivariate beta is the log-gamma combination") {
  StreamRng rng(1, 0);
  for (int i = 0; i < 200; ++i) {
    const double a = 50 * rng.uniform() + 1e-3, b = 50 * rng.uniform() + 1e-3;
    const std::vector<double> ab{a, b};
    const double lhs = numeric::log_multivariate_beta(ab);
    const double rhs = numeric::log_gamma(a) + numeric::log_gamma(b) - numeric::log_gamma(a + b);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("property: beta segments add up and are monotone in their endpoints") {
  StreamRng rng(2, 0);
  for (int i = 0; i < 100; ++i) {
    const double al = 0.2 + 5 * rng.uniform(), be = 0.2 + 5 * rng.uniform();
    std::vector<double> p{rng.uniform(), rng.uniform(), rng.uniform()};
    std::sort(p.begin(), p.end());
    if (i % 7 == 0) p[0] = 0.0;
    const double s = p[0], t = p[1], u = p[2];
    const double st = numeric::beta_segment(al, be, s, t), tu = numeric::beta_segment(al, be, t, u);
    const double su = numeric::beta_segment(al, be, s, u);
    CHECK(std::abs(st + tu - su) <= 1e-9 * su + 1e-12);
    CHECK(su >= st);
    CHECK(su >= tu);
  }
}

TEST_CASE("property: stable_sum is permutation invariant") {
  StreamRng rng(3, 0);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> v(100);
    for (double& x : v) x = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<int>(rng() % 30) - 15);
    const double a = numeric::stable_sum(v);
    std::shuffle(v.begin(), v.end(), rng);
    const double b = numeric::stable_sum(v);
    std::sort(v.begin(), v.end());
    CHECK(a == b);
    CHECK(std::abs(a - numeric::stable_sum(v)) <= 1e-12 * std::abs(a));
  }
}

TEST_CASE("property: predictive densities sum to one, s_i is orthogonal to theta, labels are equivariant") {
  StreamRng rng(4, 0);
  for (int i = 0; i < 100; ++i) {
    const int k = 2 + static_cast<int>(rng() % 4), N = static_cast<int>(rng() % 12);
    const auto a = random_alphas(rng, k);
    const PriorSpec p(a);
    const auto th = random_simplex(rng, k, 1e-3);
    Observation x{std::vector<int>(k, 0)};
    for (int n = 0; n < N; ++n) ++x.x[rng() % k];
    double total = 0.0, orth = 0.0;
    for (int y = 0; y < k; ++y) {
      total += predictive_density(p, {k, N}, x, {static_cast<std::size_t>(y)});
      orth += th[y] * si_term(p, {k, N}, th[y], y);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(orth) <= 1e-14 * std::max(1.0, std::abs(p.A())));

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pa(k);
    Observation px{std::vector<int>(k)};
    for (int j = 0; j < k; ++j) {
      pa[j] = a[perm[j]];
      px.x[j] = x.x[perm[j]];
    }
    for (int j = 0; j < k; ++j)
      CHECK(predictive_density(PriorSpec(pa), {k, N}, px, {static_cast<std::size_t>(j)}) ==
            predictive_density(p, {k, N}, x, {perm[j]}));
  }
  // Huge concentration pushes the predictive to uniform.
  const Observation x{{5, 0, 1}};
  CHECK(predictive_density(PriorSpec::symmetric(1e8, 3), {3, 6}, x, {0}) == doctest::Approx(1.0 / 3).epsilon(1e-7));
}

TEST_CASE("property: truncated predictive sums to one") {
  StreamRng rng(5, 0);
  for (int i = 0; i < 20; ++i) {
    const int k = 2 + static_cast<int>(rng() % 2), N = static_cast<int>(rng() % 8);
    const SymmetricPrior a{0.3 + 3 * rng.uniform(), k};
    const TruncatedSimplex t{k, 0.3 / k * rng.uniform() + 1e-3};
    Observation x{std::vector<int>(k, 0)};
    for (int n = 0; n < N; ++n) ++x.x[rng() % k];
    double total = 0.0;
    for (int y = 0; y < k; ++y) total += truncated_predictive_density(a, t, {k, N}, x, {static_cast<std::size_t>(y)});
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("property: the two risk forms agree to 1e-12 and are nonnegative") {
  StreamRng rng(6, 0);
  for (int k = 2; k <= 4; ++k)
    for (int N = 1; N <= 8; ++N)
      for (int i = 0; i < 10; ++i) {
        const PriorSpec p(random_alphas(rng, k));
        const ThetaPoint t(random_simplex(rng, k, 1e-4));
        const double e = risk_enumeration(p, {k, N}, t).exact_risk;
        const double c = risk_coordinatewise(p, {k, N}, t).exact_risk;
        CHECK(std::abs(e - c) <= 1e-12);
        CHECK(e >= -1e-14);
        CHECK(c >= -1e-14);
      }
}

TEST_CASE("property: sup risk is monotone under nested grids and dominates the Bayes risk") {
  const PriorSpec p = PriorSpec::symmetric(0.8, 2);
  const TruncatedSimplex t{2, 0.03};
  const ModelSpec m{2, 40};
  SearchSettings s;
  s.starts = 4;
  double prev = 0.0;
  for (int g : {16, 32, 64, 128, 256}) {
    s.grid_size = g;
    const double v = sup_risk(p, m, t, g, s).sup_value;
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
  const double bayes = bayes_risk(TruncatedWeight{{0.8, 2}, t}, PredictiveKind::Full, m).value;
  CHECK(bayes <= prev + 1e-12);
}

TEST_CASE("property: Bayes rule optimality of the truncated predictive") {
  StreamRng rng(7, 0);
  for (int i = 0; i < 6; ++i) {
    const int k = 2 + i % 2, N = 2 + static_cast<int>(rng() % 6);
    const SymmetricPrior a{0.5 + 2 * rng.uniform(), k};
    const TruncatedSimplex t{k, 0.02 + 0.2 / k * rng.uniform()};
    const TruncatedWeight w{a, t};
    const double full = bayes_risk(w, PredictiveKind::Full, {k, N}).value;
    const double own = bayes_risk(w, PredictiveKind::Truncated, {k, N}).value;
    CHECK(own <= full + 1e-10);
  }
}

TEST_CASE("property: moments") {
  StreamRng rng(8, 0);
  for (int i = 0; i < 200; ++i) {
    const int N = static_cast<int>(rng() % 31);
    const double th = rng.uniform();
    for (int m = 0; m <= 12; ++m) {
      const double r = moments::moment_poly(m).evaluate(N, th);
      const double s = moments::moment_pmf_sum(m, N, th);
      const double scale = std::max(1.0, moments::moment_pmf_sum(m % 2 ? m + 1 : m, N, th));
      CHECK(std::abs(r - s) <= 1e-10 * scale);
    }
  }
  for (int m = 1; m <= 12; m += 2)
    for (int N : {3, 10, 30}) {
      const double scale = std::max(1.0, moments::moment_poly(m + 1).evaluate(N, 0.5));
      CHECK(std::abs(moments::moment_poly(m).evaluate(N, 0.5)) <= 1e-12 * scale);
    }
}

TEST_CASE("property: expansion is permutation equivariant and the uniform prior leaves a -1/12 boundary term") {
  const PriorSpec p({0.7, 1.9, 1.1});
  const PriorSpec q({1.1, 0.7, 1.9});
  const auto tp = ThetaPoint::from({0.2, 0.5, 0.3}, 3);
  const auto tq = ThetaPoint::from({0.3, 0.2, 0.5}, 3);
  const auto a = theorem1_expansion(p, {3, 50}, tp), b = theorem1_expansion(q, {3, 50}, tq);
  for (int o = 1; o <= 4; ++o) CHECK(a.term(o) == doctest::Approx(b.term(o)).epsilon(1e-14));
  const auto& row = kCoordinateTable[0];
  CHECK((row.poly[0] + row.poly[1] + row.poly[2]) / row.denominator == doctest::Approx(-1.0 / 12));
}

TEST_CASE("property: second-order convergence at an interior point") {
  const PriorSpec p = PriorSpec::symmetric(1.0, 2);
  const auto t = ThetaPoint::from({0.3}, 2);
  const int N = 4096;
  const double scaled = (risk_coordinatewise(p, {2, N}, t).exact_risk - 0.5 / N) * N * N;
  const double t2 = theorem1_expansion(p, {2, N}, t).t2 * N * N;
  CHECK(scaled == doctest::Approx(t2).epsilon(0.05));
}

TEST_CASE("property: retained mass lies in (0, 1) and the k = 2 paths agree") {
  StreamRng rng(9, 0);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_alphas(rng, 2);
    const double eps = 0.49 * rng.uniform() + 1e-4;
    const double v = simplex::i_trunc(a, eps);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    const auto e = simplex::b_trunc(a, eps, {}, simplex::IntegralMethod::Exact1D);
    const auto q = simplex::b_trunc(a, eps, {}, simplex::IntegralMethod::RecursiveQuad);
    CHECK(std::abs(e.ratio() - q.ratio()) <= 1e-9 * e.ratio());
  }
}

TEST_CASE("property: k = 3 quadrature and Monte Carlo agree within three standard errors") {
  StreamRng rng(10, 0);
  MonteCarloSettings mc;
  mc.draws = 1'000'000;
  int outside = 0;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> a(3);
    for (double& v : a) v = 0.3 + 3 * rng.uniform();
    const double eps = 0.3 * rng.uniform() + 1e-3;
    mc.seed = 1000 + i;
    const auto q = simplex::b_trunc(a, eps, {}, simplex::IntegralMethod::RecursiveQuad);
    const auto m = simplex::b_trunc(a, eps, {}, simplex::IntegralMethod::MonteCarlo, mc);
    if (std::abs(q.ratio() - m.ratio()) > m.error_estimate) ++outside;
  }
  // 3 SE: a miss has probability 0.27%; allow one among 20.
  CHECK(outside <= 1);
}
