#include "mmn/exact_risk.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "mmn/compositions.hpp"
#include "mmn/errors.hpp"
#include "mmn/parallel.hpp"
#include "mmn/quadrature.hpp"
#include "mmn/simplex_integrals.hpp"

namespace mmn {

std::uint64_t composition_count(int n, int k) {
  if (n < 0 || k < 1) return 0;
  // C(n + k - 1, k - 1) built incrementally; every partial product is itself
  // a binomial coefficient, so the division is exact.
  unsigned __int128 c = 1;
  const auto limit = static_cast<unsigned __int128>(std::numeric_limits<std::uint64_t>::max());
  for (int i = 1; i < k; ++i) {
    c = c * static_cast<unsigned>(n + i) / static_cast<unsigned>(i);
    if (c > limit) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

ThetaPoint::ThetaPoint(std::vector<double> theta) : theta_(std::move(theta)) {
  if (theta_.size() < 2) throw DomainError("ThetaPoint: need at least two coordinates");
  for (double t : theta_)
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("ThetaPoint: coordinates must lie in (0, 1]");
  if (std::abs(numeric::stable_sum(theta_) - 1.0) > 1e-14) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "ThetaPoint: coordinates sum to " << numeric::stable_sum(theta_) << ", not 1";
    throw DomainError(msg.str());
  }
}

ThetaPoint ThetaPoint::from(std::vector<double> theta, int k) {
  if (k < 2) throw DomainError("ThetaPoint: k must be at least 2");
  if (theta.size() + 1 == static_cast<std::size_t>(k)) {
    const double last = 1.0 - numeric::stable_sum(theta);
    theta.push_back(last);
  } else if (theta.size() != static_cast<std::size_t>(k)) {
    throw DomainError("ThetaPoint: expected k or k - 1 coordinates");
  }
  return ThetaPoint(std::move(theta));
}

std::string risk_method_name(RiskMethod m) {
  return m == RiskMethod::Enumeration ? "ENUMERATION" : "COORDINATEWISE";
}

namespace {

void check_dims(const PriorSpec& prior, const ModelSpec& model, int k_theta) {
  model.validate();
  if (prior.k() != model.k || k_theta != model.k) throw DomainError("risk: prior, model and theta disagree on k");
}

}  // namespace

RiskReport risk_enumeration(const PriorSpec& prior, const ModelSpec& model, const ThetaPoint& theta,
                            std::uint64_t cap) {
  check_dims(prior, model, theta.k());
  const int k = model.k, N = model.N;
  const std::uint64_t count = composition_count(N, k);
  if (count > cap) {
    std::ostringstream msg;
    msg << "risk_enumeration: " << count << " compositions exceed the cap of " << cap
        << "; use risk_coordinatewise";
    throw SizeError(msg.str());
  }
  std::vector<double> log_theta(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) log_theta[i] = std::log(theta[i]);
  const double log_total = std::log(N + prior.A());

  std::vector<numeric::CompensatedSum> acc(static_cast<std::size_t>(k));
  for_each_composition(N, k, [&](std::span<const int> x) {
    double log_p = numeric::log_multinomial(x);
    for (int i = 0; i < k; ++i)
      if (x[i] > 0) log_p += x[i] * log_theta[i];
    const double p = std::exp(log_p);
    for (int y = 0; y < k; ++y)
      acc[y].add(p * theta[y] * (log_theta[y] + log_total - std::log(x[y] + prior.a(y))));
  });

  RiskReport rep;
  rep.method = RiskMethod::Enumeration;
  rep.theta.assign(theta.values().begin(), theta.values().end());
  for (auto& a : acc) rep.per_coordinate.push_back(a.value());
  rep.exact_risk = numeric::stable_sum(rep.per_coordinate);
  return rep;
}

double coordinate_risk(double a_i, double A, int N, double theta_i) {
  if (!(theta_i >= 0.0 && theta_i <= 1.0)) throw DomainError("coordinate_risk: theta_i outside [0, 1]");
  if (theta_i == 0.0) return 0.0;
  const double n_theta = N * theta_i;
  const double s = (a_i - A * theta_i) / (n_theta + A * theta_i);
  // Binomial mass beyond ~40 standard deviations is far below double precision.
  const double sd = std::sqrt(n_theta * (1.0 - theta_i));
  const int lo = std::max(0, static_cast<int>(std::floor(n_theta - 40.0 * sd - 40.0)));
  const int hi = std::min(N, static_cast<int>(std::ceil(n_theta + 40.0 * sd + 40.0)));
  numeric::CompensatedSum expect;
  const double denom = n_theta + a_i;
  for (int x = lo; x <= hi; ++x) {
    const double p = std::exp(numeric::log_binomial_pmf(N, x, theta_i));
    if (p == 0.0) continue;
    expect.add(p * std::log1p((x - n_theta) / denom));
  }
  return -theta_i * std::log1p(s) - theta_i * expect.value();
}

RiskReport risk_coordinatewise(const PriorSpec& prior, const ModelSpec& model, const ThetaPoint& theta) {
  check_dims(prior, model, theta.k());
  RiskReport rep;
  rep.method = RiskMethod::Coordinatewise;
  rep.theta.assign(theta.values().begin(), theta.values().end());
  for (int i = 0; i < model.k; ++i)
    rep.per_coordinate.push_back(coordinate_risk(prior.a(i), prior.A(), model.N, theta[i]));
  rep.exact_risk = numeric::stable_sum(rep.per_coordinate);
  return rep;
}

SupRiskReport sup_risk(const PriorSpec& prior, const ModelSpec& model, const TruncatedSimplex& trunc,
                       int grid_size, const SearchSettings& search) {
  model.validate();
  trunc.validate();
  if (prior.k() != model.k || trunc.k != model.k) throw DomainError("sup_risk: k mismatch");
  if (grid_size < 16) throw DomainError("sup_risk: grid_size must be at least 16");
  SeparableObjective obj;
  obj.k = static_cast<std::size_t>(model.k);
  obj.symmetric = prior.is_symmetric();
  const double A = prior.A();
  const int N = model.N;
  const std::vector<double> a(prior.a().begin(), prior.a().end());
  obj.term = [a, A, N](std::size_t i, double t) { return coordinate_risk(a[i], A, N, t); };
  SearchSettings s = search;
  s.grid_size = grid_size;
  SearchResult r = maximize_separable(obj, trunc.eps, s);
  SupRiskReport rep;
  rep.argmax_theta = std::move(r.argmax);
  rep.sup_value = r.value;
  rep.search_trace = std::move(r.trace);
  return rep;
}

// ---------------------------------------------------------------------------
// Truncated predictive

int TruncatedPredictiveTable::max_N(int k) {
  if (k == 2) return 64;
  if (k == 3) return 24;
  return -1;
}

TruncatedPredictiveTable::TruncatedPredictiveTable(const SymmetricPrior& alpha, const TruncatedSimplex& trunc,
                                                   const ModelSpec& model, const numeric::QuadratureSettings& quad)
    : k_(model.k), N_(model.N) {
  model.validate();
  alpha.validate();
  trunc.validate();
  if (alpha.k != k_ || trunc.k != k_) throw DomainError("TruncatedPredictiveTable: k mismatch");
  if (max_N(k_) < 0 || N_ > max_N(k_)) {
    std::ostringstream msg;
    msg << "TruncatedPredictiveTable: enumeration supports k = 2 with N <= 64 and k = 3 with N <= 24, got k="
        << k_ << " N=" << N_;
    throw SizeError(msg.str());
  }
  // ln I(c + alpha) for every composition c of N and of N + 1.
  std::map<std::vector<int>, double> log_i;
  std::vector<double> shifted(static_cast<std::size_t>(k_));
  auto fill = [&](std::span<const int> c) {
    for (int i = 0; i < k_; ++i) shifted[i] = c[i] + alpha.alpha;
    log_i.emplace(std::vector<int>(c.begin(), c.end()), simplex::log_i_trunc(shifted, trunc.eps, quad));
  };
  for_each_composition(N_, k_, fill);
  for_each_composition(N_ + 1, k_, fill);

  const double log_total = std::log(N_ + k_ * alpha.alpha);
  for_each_composition(N_, k_, [&](std::span<const int> x) {
    std::vector<int> c(x.begin(), x.end());
    compositions_.push_back(c);
    log_multinomial_.push_back(numeric::log_multinomial(x));
    const double base = log_i.at(c);
    for (int y = 0; y < k_; ++y) {
      ++c[y];
      log_q_.push_back(std::log(x[y] + alpha.alpha) - log_total + log_i.at(c) - base);
      --c[y];
    }
  });
}

double TruncatedPredictiveTable::risk(std::span<const double> theta) const {
  if (theta.size() != static_cast<std::size_t>(k_)) throw DomainError("TruncatedPredictiveTable: k mismatch");
  std::vector<double> log_theta(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) log_theta[i] = std::log(theta[i]);
  numeric::CompensatedSum acc;
  for (std::size_t c = 0; c < compositions_.size(); ++c) {
    const auto& x = compositions_[c];
    double log_p = log_multinomial_[c];
    for (int i = 0; i < k_; ++i)
      if (x[i] > 0) log_p += x[i] * log_theta[i];
    const double p = std::exp(log_p);
    for (int y = 0; y < k_; ++y) acc.add(p * theta[y] * (log_theta[y] - log_predictive(c, y)));
  }
  return acc.value();
}

// ---------------------------------------------------------------------------
// Bayes risk

namespace {

// Risk of the chosen predictive at theta (all coordinates).
using RiskFn = std::function<double(std::span<const double>)>;

RiskFn full_risk(const PriorSpec& prior, int N) {
  const std::vector<double> a(prior.a().begin(), prior.a().end());
  const double A = prior.A();
  return [a, A, N](std::span<const double> theta) {
    numeric::CompensatedSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s.add(coordinate_risk(a[i], A, N, theta[i]));
    return s.value();
  };
}

double beta_quantile(double a, double b, double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return boost::math::ibeta_inv(a, b, u);
}

double beta_cdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

// Integral over the (possibly truncated) Dirichlet weight, with every
// coordinate mapped through its conditional Beta quantile so the weight
// becomes Lebesgue measure on a box-like region in u-space.
BayesRiskResult quadrature_bayes(std::span<const double> a, double eps, const RiskFn& risk,
                                 const numeric::QuadratureSettings& quad) {
  const std::size_t k = a.size();
  if (k == 2) {
    const double lo = beta_cdf(a[0], a[1], eps);
    const double hi = beta_cdf(a[0], a[1], 1.0 - eps);
    auto f = [&](double u) {
      const double t = beta_quantile(a[0], a[1], u);
      const double th[2] = {t, 1.0 - t};
      return risk(th);
    };
    const auto q = numeric::integrate(f, lo, hi, quad);
    const double width = eps > 0.0 ? hi - lo : 1.0;
    return {q.value / width, q.error / width, IntegrationMode::Quadrature};
  }
  if (k != 3) throw DomainError("bayes_risk: quadrature mode supports k <= 3; use Monte Carlo");
  const double rest = a[1] + a[2];
  const double lo = beta_cdf(a[0], rest, eps);
  const double hi = beta_cdf(a[0], rest, 1.0 - 2.0 * eps);
  double inner_error = 0.0;
  auto inner_range = [&](double t1) {
    const double e = eps / (1.0 - t1);
    return std::pair{beta_cdf(a[1], a[2], e), beta_cdf(a[1], a[2], 1.0 - e)};
  };
  auto outer = [&](double u1) {
    const double t1 = beta_quantile(a[0], rest, u1);
    const auto [l2, h2] = inner_range(t1);
    if (!(h2 > l2)) return 0.0;
    auto inner = [&](double u2) {
      const double phi = beta_quantile(a[1], a[2], u2);
      const double th[3] = {t1, (1.0 - t1) * phi, (1.0 - t1) * (1.0 - phi)};
      return risk(th);
    };
    const auto q = numeric::integrate(inner, l2, h2, quad);
    inner_error = std::max(inner_error, q.error);
    return q.value;
  };
  const auto q = numeric::integrate(outer, lo, hi, quad);
  double mass = 1.0;
  if (eps > 0.0) {
    auto width = [&](double u1) {
      const auto [l2, h2] = inner_range(beta_quantile(a[0], rest, u1));
      return std::max(0.0, h2 - l2);
    };
    mass = numeric::integrate(width, lo, hi, quad).value;
  }
  const double err = q.error + inner_error * (hi - lo);
  return {q.value / mass, err / mass, IntegrationMode::Quadrature};
}

BayesRiskResult monte_carlo_bayes(std::span<const double> a, double eps, const RiskFn& risk,
                                  const MonteCarloSettings& mc) {
  const std::size_t k = a.size();
  const int streams = std::max(1, mc.streams);
  std::vector<double> sums(static_cast<std::size_t>(streams)), squares(sums.size());
  std::vector<std::uint64_t> proposed(sums.size());
  parallel_for(sums.size(), mc.threads, [&](std::size_t s) {
    StreamRng rng(mc.seed, s);
    const std::uint64_t target = mc.draws / streams + (s < mc.draws % streams ? 1 : 0);
    std::vector<double> theta(k);
    numeric::CompensatedSum sum, sq;
    std::uint64_t accepted = 0, tries = 0;
    while (accepted < target) {
      sample_dirichlet(rng, a, theta);
      ++tries;
      if (eps > 0.0 && *std::min_element(theta.begin(), theta.end()) < eps) {
        if (tries >= 10'000 && static_cast<double>(accepted) < mc.min_acceptance * static_cast<double>(tries))
          throw InfeasibleRegionError("bayes_risk: Monte Carlo acceptance rate too low",
                                      static_cast<double>(accepted) / static_cast<double>(tries));
        continue;
      }
      ++accepted;
      const double r = risk(theta);
      sum.add(r);
      sq.add(r * r);
    }
    sums[s] = sum.value();
    squares[s] = sq.value();
    proposed[s] = tries;
  });
  const double n = static_cast<double>(mc.draws);
  if (n < 2) throw DomainError("bayes_risk: Monte Carlo needs at least two draws");
  const double mean = numeric::stable_sum(sums) / n;
  const double var = std::max(0.0, (numeric::stable_sum(squares) / n - mean * mean) * n / (n - 1.0));
  const double se = std::sqrt(var / n);
  if (se > mc.max_std_error) throw StatisticalError("bayes_risk: Monte Carlo standard error above ceiling", se);
  return {mean, se, IntegrationMode::MonteCarlo};
}

}  // namespace

BayesRiskResult bayes_risk(const PriorWeight& weight, PredictiveKind predictive, const ModelSpec& model,
                           const numeric::QuadratureSettings& quad, const MonteCarloSettings& mc,
                           IntegrationMode mode) {
  model.validate();
  quad.validate();
  std::vector<double> a;
  double eps = 0.0;
  RiskFn risk;
  std::shared_ptr<TruncatedPredictiveTable> table;
  if (const auto* full = std::get_if<FullWeight>(&weight)) {
    if (full->prior.k() != model.k) throw DomainError("bayes_risk: k mismatch");
    if (predictive == PredictiveKind::Truncated)
      throw DomainError("bayes_risk: the truncated predictive needs a truncated weight");
    a.assign(full->prior.a().begin(), full->prior.a().end());
    risk = full_risk(full->prior, model.N);
  } else {
    const auto& tw = std::get<TruncatedWeight>(weight);
    tw.alpha.validate();
    tw.trunc.validate();
    if (tw.alpha.k != model.k || tw.trunc.k != model.k) throw DomainError("bayes_risk: k mismatch");
    a.assign(static_cast<std::size_t>(model.k), tw.alpha.alpha);
    eps = tw.trunc.eps;
    if (predictive == PredictiveKind::Full) {
      risk = full_risk(tw.alpha.expand(), model.N);
    } else {
      table = std::make_shared<TruncatedPredictiveTable>(tw.alpha, tw.trunc, model, quad);
      risk = [table](std::span<const double> th) { return table->risk(th); };
    }
  }
  if (mode == IntegrationMode::Quadrature) return quadrature_bayes(a, eps, risk, quad);
  return monte_carlo_bayes(a, eps, risk, mc);
}

}  // namespace mmn
