#pragma once

// Central moments mu_m(N, theta) = E[(X - N theta)^m] of X ~ Bin(N, theta),
// kept in the basis mu_m = sum_i f_{m,i}(theta) (N theta)^i with exact
// rational polynomial coefficients.

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mmn/model.hpp"

namespace mmn::moments {

using Rational = boost::multiprecision::cpp_rational;
/// Polynomial in theta, coefficients by ascending power.
using Poly = std::vector<Rational>;

/// The exact rational value of a finite double.
Rational exact_rational(double x);

Rational evaluate_poly(const Poly& p, const Rational& x);
double evaluate_poly(const Poly& p, double x);
std::string poly_to_string(const Poly& p, const std::string& var = "theta");

class MomentPoly {
public:
  MomentPoly(int order, std::vector<Poly> coeffs);

  int order() const { return order_; }
  /// coeffs()[i] is f_{m,i}; entries past the end are zero.
  const std::vector<Poly>& coeffs() const { return coeffs_; }
  /// f_{m,i}, or the zero polynomial when i is out of range.
  Poly f(int i) const;
  /// Largest i with a nonzero f_{m,i}; -1 for the zero moment.
  int degree() const;

  double evaluate(double N, double theta) const;
  /// mu_m / (N theta)^j, formed term by term so large N theta never overflows.
  double evaluate_scaled(double N, double theta, int j) const;
  Rational evaluate_exact(const Rational& N, const Rational& theta) const;

  /// Every coefficient is an integer.
  bool all_integer() const;
  /// Text form in the (N*theta)^i basis, e.g.
  /// "mu_2(N,theta) = (1 - theta)*(N*theta)".
  std::string to_string() const;

private:
  int order_;
  std::vector<Poly> coeffs_;
};

/// mu_0..mu_{m_max} from mu_{m+1} = theta(1-theta){N m mu_{m-1} + d mu_m / d theta}.
/// Requires m_max >= 2.
std::vector<MomentPoly> moment_recurrence(int m_max);

/// The moment of order m, cached after the first call.
const MomentPoly& moment_poly(int m);

/// Closed forms for m <= 5; for 6..8 the printed leading terms plus lower
/// polynomials taken from the recurrence. Orders above 8 use the recurrence.
double moment_closed_form(int m, double N, double theta);

/// The lower polynomial phi_{m,j} (m = 6, 7, 8) of the order-6..8 closed
/// forms, equal to f_{m,j}.
Poly phi(int m, int j);

/// Direct pmf summation of E[(X - N theta)^m].
double moment_pmf_sum(int m, int N, double theta);

/// E_theta[-w^(2l+1) / (1 + w)] with w = (x - N theta)/(N theta + a).
double lemma3_expectation(int l, double a, int N, double theta);

// ---------------------------------------------------------------------------
// Boundedness checks. For each N the supremum over theta in [eps_N, 1] is
// taken on 2048 points (half log-spaced from eps_N, half uniform). A series
// is "bounded" when its overall maximum is at most 1.05 times the maximum
// over the first half of the N list, or when its increments shrink.

inline constexpr int kBoundGridPoints = 2048;
inline constexpr double kBoundGrowthFactor = 1.05;
/// Failing that, a series still counts as bounded when its last increment is
/// at most this fraction of its first (convergence from below).
inline constexpr double kIncrementShrink = 0.6;

struct BoundSeries {
  std::string quantity;
  std::vector<double> sup_values;
  std::vector<double> argmax_theta;
  std::vector<double> running_max;
  double first_half_max = 0.0;
  bool bounded = true;
};

struct BoundReport {
  int l = 1;
  std::vector<int> N_list;
  std::vector<double> eps;
  std::vector<BoundSeries> series;
  bool bounded() const;
};

/// Series "odd": |mu_{2l-1}| / (N theta)^(l-1); series "even": |mu_{2l}| / (N theta)^l.
BoundReport moment_ratio_bound_check(int l, const EpsilonSchedule& schedule, const std::vector<int>& N_list);

/// Series "lemma3": (N theta)^l E[-w^(2l+1)/(1+w)].
BoundReport lemma3_bound_check(int l, double a, const EpsilonSchedule& schedule, const std::vector<int>& N_list);

/// The grid used by both checks.
std::vector<double> bound_grid(double eps);

}  // namespace mmn::moments
