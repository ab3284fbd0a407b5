#include "mmn/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "mmn/errors.hpp"
#include "mmn/quadrature.hpp"

namespace mmn::numeric {

namespace {

constexpr double kLogSqrtTwoPi = 0.918938533204672741780329736406;
constexpr double kEulerGamma = 0.577215664901532860606512090082;

// Lanczos coefficients for g = 671/128 with 14 terms.
constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

double lanczos_log_gamma(double x) {
  double y = x;
  double tmp = x + 5.24218750000000000;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (double c : kLanczos) ser += c / ++y;
  return tmp + std::log(2.5066282746310005 * ser / x);
}

std::array<double, 32> make_zeta_table() {
  std::array<double, 32> z{};
  const std::array<double, 9> known = {1.6449340668482264365, 1.2020569031595942854,
                                       1.0823232337111381915, 1.0369277551433699263,
                                       1.0173430619844491397, 1.0083492773819228268,
                                       1.0040773561979443394, 1.0020083928260822144,
                                       1.0009945751278180853};
  for (std::size_t k = 2; k < z.size(); ++k) {
    if (k <= 10) {
      z[k] = known[k - 2];
      continue;
    }
    double s = 0.0;
    for (int n = 60; n >= 2; --n) s += std::pow(static_cast<double>(n), -static_cast<double>(k));
    z[k] = 1.0 + s;
  }
  return z;
}

// ln Gamma(1 + z) for |z| <= 0.25 by its Taylor series; keeps relative accuracy
// near the zeros of ln Gamma at 1 and 2.
double log_gamma_one_plus(double z) {
  static const std::array<double, 32> zeta = make_zeta_table();
  double term = -z;
  double s = 0.0;
  for (std::size_t k = 2; k < zeta.size(); ++k) {
    term *= -z;
    s += zeta[k] * term / static_cast<double>(k);
  }
  return -kEulerGamma * z + s;
}

// log(n!) - Stirling's approximation, for integer n >= 1.
double stirling_remainder(double n) {
  if (n <= 15.0) {
    return log_gamma(n + 1.0) - (n + 0.5) * std::log(n) + n - kLogSqrtTwoPi;
  }
  constexpr double s0 = 1.0 / 12.0, s1 = 1.0 / 360.0, s2 = 1.0 / 1260.0, s3 = 1.0 / 1680.0,
                   s4 = 1.0 / 1188.0;
  const double nn = n * n;
  if (n > 500) return (s0 - s1 / nn) / n;
  if (n > 80) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// Deviance term x log(x / np) + np - x, evaluated without cancellation.
double binomial_deviance(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << what << ": argument must be positive and finite, got " << v;
    throw DomainError(msg.str());
  }
}

}  // namespace

LogDomainValue LogDomainValue::from_value(double v) {
  if (v == 0.0) return {};
  return {std::log(std::abs(v)), v > 0 ? 1 : -1};
}

LogDomainValue LogDomainValue::from_log(double log_magnitude, int sign) {
  if (sign == 0 || log_magnitude == -std::numeric_limits<double>::infinity()) return {};
  return {log_magnitude, sign > 0 ? 1 : -1};
}

double LogDomainValue::value() const {
  return sign == 0 ? 0.0 : sign * std::exp(log_magnitude);
}

LogDomainValue operator*(const LogDomainValue& a, const LogDomainValue& b) {
  if (a.sign == 0 || b.sign == 0) return {};
  return {a.log_magnitude + b.log_magnitude, a.sign * b.sign};
}

LogDomainValue operator/(const LogDomainValue& a, const LogDomainValue& b) {
  if (b.sign == 0) throw DomainError("LogDomainValue: division by zero");
  if (a.sign == 0) return {};
  return {a.log_magnitude - b.log_magnitude, a.sign * b.sign};
}

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1)
    throw DomainError("QuadratureSettings: need abs_tol > 0, rel_tol > 0, max_subdivisions >= 1");
}

double log_gamma(double x) {
  check_positive(x, "log_gamma");
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  if (std::abs(x - 1.0) <= 0.25) return log_gamma_one_plus(x - 1.0);
  if (std::abs(x - 2.0) <= 0.25) return std::log1p(x - 2.0) + log_gamma_one_plus(x - 2.0);
  return lanczos_log_gamma(x);
}

double log_beta(double a, double b) {
  check_positive(a, "log_beta");
  check_positive(b, "log_beta");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double log_multivariate_beta(std::span<const double> a) {
  if (a.size() < 2) throw DomainError("log_multivariate_beta: need at least two parameters");
  double total = 0.0;
  std::vector<double> terms;
  terms.reserve(a.size());
  for (double ai : a) {
    check_positive(ai, "log_multivariate_beta");
    terms.push_back(log_gamma(ai));
    total += ai;
  }
  terms.push_back(-log_gamma(total));
  return stable_sum(terms);
}

double log_binomial(std::int64_t n, std::int64_t x) {
  if (n < 0 || x < 0 || x > n) {
    std::ostringstream msg;
    msg << "log_binomial: need 0 <= x <= n, got n=" << n << " x=" << x;
    throw DomainError(msg.str());
  }
  if (x == 0 || x == n) return 0.0;
  const auto dn = static_cast<double>(n);
  const auto dx = static_cast<double>(x);
  return log_gamma(dn + 1.0) - log_gamma(dx + 1.0) - log_gamma(dn - dx + 1.0);
}

double log_multinomial(std::span<const int> x) {
  double n = 0.0;
  double out = 0.0;
  for (int xi : x) {
    if (xi < 0) throw DomainError("log_multinomial: negative count");
    n += xi;
    out -= log_gamma(xi + 1.0);
  }
  return out + log_gamma(n + 1.0);
}

double log_binomial_pmf(int n, int x, double theta) {
  if (n < 0 || x < 0 || x > n) throw DomainError("log_binomial_pmf: need 0 <= x <= n");
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("log_binomial_pmf: theta outside [0, 1]");
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  if (theta == 0.0) return x == 0 ? 0.0 : ninf;
  if (theta == 1.0) return x == n ? 0.0 : ninf;
  const double q = 1.0 - theta;
  if (x == 0) return n * std::log1p(-theta);
  if (x == n) return n * std::log(theta);
  const double dn = n, dx = x;
  const double lc = stirling_remainder(dn) - stirling_remainder(dx) - stirling_remainder(dn - dx) -
                    binomial_deviance(dx, dn * theta) - binomial_deviance(dn - dx, dn * q);
  const double lf = std::log(2.0 * std::numbers::pi) + std::log(dx) + std::log1p(-dx / dn);
  return lc - 0.5 * lf;
}

std::vector<double> binomial_pmf_table(int n, double theta) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int x = 0; x <= n; ++x) out[x] = std::exp(log_binomial_pmf(n, x, theta));
  return out;
}

IncompleteBeta regularized_incomplete_beta(double a, double b, double x) {
  check_positive(a, "regularized_incomplete_beta");
  check_positive(b, "regularized_incomplete_beta");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("regularized_incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return {0.0, 1.0};
  if (x == 1.0) return {1.0, 0.0};
  return {boost::math::ibeta(a, b, x), boost::math::ibetac(a, b, x)};
}

double log_beta_segment(double alpha, double beta, double s, double t,
                        const QuadratureSettings& quad) {
  check_positive(alpha, "beta_segment");
  check_positive(beta, "beta_segment");
  if (!(0.0 <= s && s < t && t <= 1.0)) {
    std::ostringstream msg;
    msg << "beta_segment: need 0 <= s < t <= 1, got [" << s << ", " << t << "]";
    throw DomainError(msg.str());
  }
  const double log_full = log_beta(alpha, beta);
  const IncompleteBeta at_s = regularized_incomplete_beta(alpha, beta, s);
  const IncompleteBeta at_t = regularized_incomplete_beta(alpha, beta, t);

  // Mass outside [s, t]; when small, the inside mass is 1 - outside exactly enough.
  const double outside = at_s.lower + at_t.upper;
  if (outside <= 0.5) return log_full + std::log1p(-outside);
  if (1.0 - outside >= 0.01) return log_full + std::log(1.0 - outside);

  // Both ends in the same tail: difference the smaller tail probabilities.
  const bool lower_tail = at_t.lower <= 0.5;
  const double big = lower_tail ? at_t.lower : at_s.upper;
  const double diff = lower_tail ? at_t.lower - at_s.lower : at_s.upper - at_t.upper;
  if (diff > 1e-3 * big) return log_full + std::log(diff);

  // Narrow segment deep in a tail: integrate the density directly, scaled by
  // its largest value on the segment so nothing underflows.
  auto log_density = [alpha, beta](double th) {
    return (alpha - 1.0) * std::log(th) + (beta - 1.0) * std::log1p(-th);
  };
  double shift = std::max(log_density(s), log_density(t));
  if (alpha > 1.0 && beta > 1.0) {
    const double mode = (alpha - 1.0) / (alpha + beta - 2.0);
    if (s < mode && mode < t) shift = std::max(shift, log_density(mode));
  }
  const auto r = integrate([&](double th) { return std::exp(log_density(th) - shift); }, s, t, quad);
  return shift + std::log(r.value);
}

double beta_segment(double alpha, double beta, double s, double t, const QuadratureSettings& quad) {
  return std::exp(log_beta_segment(alpha, beta, s, t, quad));
}

void ExactAccumulator::add(double x) {
  std::size_t i = 0;
  for (double y : partials_) {
    if (std::abs(x) < std::abs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) partials_[i++] = lo;
    x = hi;
  }
  partials_.resize(i);
  partials_.push_back(x);
}

double ExactAccumulator::value() const {
  if (partials_.empty()) return 0.0;
  std::size_t j = partials_.size() - 1;
  double hi = partials_[j];
  double lo = 0.0;
  while (j > 0) {
    const double x = hi;
    const double y = partials_[--j];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  // Round half-even across the remaining partials.
  if (j > 0 && ((lo < 0.0 && partials_[j - 1] < 0.0) || (lo > 0.0 && partials_[j - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    const double yr = x - hi;
    if (y == yr) hi = x;
  }
  return hi;
}

double stable_sum(std::span<const double> terms) {
  ExactAccumulator acc;
  for (double t : terms) {
    if (!std::isfinite(t)) {
      double plain = 0.0;
      for (double u : terms) plain += u;
      return plain;
    }
    acc.add(t);
  }
  return acc.value();
}

}  // namespace mmn::numeric
