#pragma once

// Special functions and summation primitives shared by every module.
// Everything here is pure and reentrant.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace mmn::numeric {

/// A real number stored as sign * exp(log_magnitude). sign == 0 iff the
/// value is exactly zero (log_magnitude is then -inf).
struct LogDomainValue {
  double log_magnitude = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static LogDomainValue from_value(double v);
  static LogDomainValue from_log(double log_magnitude, int sign = 1);

  double value() const;

  friend LogDomainValue operator*(const LogDomainValue& a, const LogDomainValue& b);
  friend LogDomainValue operator/(const LogDomainValue& a, const LogDomainValue& b);
};

struct QuadratureSettings {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 60;

  /// Throws DomainError unless abs_tol > 0, rel_tol > 0 and max_subdivisions >= 1.
  void validate() const;
};

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln[Gamma(a_1)...Gamma(a_k) / Gamma(a_1 + ... + a_k)], k >= 2.
double log_multivariate_beta(std::span<const double> a);
double log_beta(double a, double b);

/// ln C(n, x) for 0 <= x <= n.
double log_binomial(std::int64_t n, std::int64_t x);

/// ln of the multinomial coefficient n! / (x_1! ... x_k!) with n = sum x_i.
double log_multinomial(std::span<const int> x);

/// ln P(X = x) for X ~ Bin(n, theta), theta in [0, 1]. Uses the saddle-point
/// decomposition (Stirling remainders plus deviance), which keeps full
/// relative accuracy even when n is in the thousands.
double log_binomial_pmf(int n, int x, double theta);

/// P(X = x) for x = 0..n.
std::vector<double> binomial_pmf_table(int n, double theta);

/// Regularized incomplete beta I_x(a, b) together with its complement, each
/// with full relative accuracy.
struct IncompleteBeta {
  double lower;  // I_x(a, b)
  double upper;  // 1 - I_x(a, b)
};
IncompleteBeta regularized_incomplete_beta(double a, double b, double x);

/// Integral of theta^(alpha-1) (1-theta)^(beta-1) over [s, t], 0 <= s < t <= 1.
double beta_segment(double alpha, double beta, double s, double t,
                    const QuadratureSettings& quad = {});

/// Same integral on the log scale; never underflows.
double log_beta_segment(double alpha, double beta, double s, double t,
                        const QuadratureSettings& quad = {});

/// Correctly rounded sum of the terms (Shewchuk partials). The result depends
/// only on the multiset of inputs, never on their order or on chunking.
double stable_sum(std::span<const double> terms);

/// Streaming form of stable_sum.
class ExactAccumulator {
public:
  void add(double x);
  double value() const;
  void reset() { partials_.clear(); }

private:
  std::vector<double> partials_;
};

/// Running Neumaier sum for hot loops where a compensated (not exactly
/// rounded) result suffices.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace mmn::numeric
