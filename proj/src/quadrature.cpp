#include "mmn/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>
#include <vector>

#include "mmn/errors.hpp"

namespace mmn::numeric {

namespace {

// Kronrod abscissae (descending, last is the centre) and weights; the Gauss
// weights belong to the odd-indexed abscissae.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478996, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, error;
};

Segment gauss_kronrod21(const std::function<double(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    const double s = f1[j] + f2[j];
    resk += kWgk[j] * s;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));

  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * resabs, err);
  return {a, b, value, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSettings& settings) {
  return integrate(f, a, b, {}, settings);
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::vector<double> breakpoints, const QuadratureSettings& settings) {
  settings.validate();
  if (!(a < b)) {
    if (a == b) return {};
    throw DomainError("integrate: lower limit exceeds upper limit");
  }

  std::erase_if(breakpoints, [a, b](double p) { return !(p > a && p < b); });
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  std::vector<Segment> segments;
  double left_end = a;
  for (double p : breakpoints) {
    segments.push_back(gauss_kronrod21(f, left_end, p));
    left_end = p;
  }
  segments.push_back(gauss_kronrod21(f, left_end, b));
  auto totals = [&segments] {
    CompensatedSum v, e;
    for (const auto& s : segments) {
      v.add(s.value);
      e.add(s.error);
    }
    return std::pair{v.value(), e.value()};
  };

  auto [value, error] = totals();
  int splits = 0;
  while (error > std::max(settings.abs_tol, settings.rel_tol * std::abs(value))) {
    if (!std::isfinite(value) || splits >= settings.max_subdivisions) {
      std::ostringstream msg;
      msg << "integrate: no convergence on [" << a << ", " << b << "] after " << splits
          << " subdivisions (error estimate " << error << ")";
      throw IntegrationError(msg.str(), error);
    }
    auto worst = std::max_element(segments.begin(), segments.end(),
                                  [](const Segment& l, const Segment& r) { return l.error < r.error; });
    const double mid = 0.5 * (worst->a + worst->b);
    if (!(worst->a < mid && mid < worst->b)) {
      // Interval can no longer be split in floating point.
      throw IntegrationError("integrate: interval exhausted before tolerance was met", error);
    }
    const Segment left = gauss_kronrod21(f, worst->a, mid);
    const Segment right = gauss_kronrod21(f, mid, worst->b);
    *worst = left;
    segments.push_back(right);
    ++splits;
    std::tie(value, error) = totals();
  }
  return {value, error, splits};
}

}  // namespace mmn::numeric
