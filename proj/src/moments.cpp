#include "mmn/moments.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "mmn/errors.hpp"
#include "mmn/numeric.hpp"

namespace mmn::moments {

namespace {

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  trim(out);
  return out;
}

Poly scale(const Poly& a, const Rational& c) {
  Poly out(a);
  for (auto& v : out) v *= c;
  trim(out);
  return out;
}

Poly derivative(const Poly& a) {
  Poly out;
  for (std::size_t i = 1; i < a.size(); ++i) out.push_back(a[i] * static_cast<int>(i));
  trim(out);
  return out;
}

// p(theta) * (1 - theta)
Poly times_one_minus(const Poly& a) {
  Poly out(a.size() + 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] += a[i];
    out[i + 1] -= a[i];
  }
  trim(out);
  return out;
}

// p(theta) * theta
Poly times_theta(const Poly& a) {
  if (a.empty()) return {};
  Poly out(a.size() + 1);
  std::copy(a.begin(), a.end(), out.begin() + 1);
  return out;
}

}  // namespace

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("exact_rational: value must be finite");
  if (x == 0.0) return 0;
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rational r(scaled);
  exp -= 53;
  boost::multiprecision::cpp_int two_pow = 1;
  two_pow <<= std::abs(exp);
  if (exp >= 0) return r * two_pow;
  return r / two_pow;
}

Rational evaluate_poly(const Poly& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double evaluate_poly(const Poly& p, double x) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + static_cast<double>(*it);
  return acc;
}

std::string poly_to_string(const Poly& p, const std::string& var) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    Rational c = p[i];
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (c < 0) c = -c;
    const bool unit = c == 1;
    if (!unit || i == 0) os << c;
    if (i > 0) {
      if (!unit) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  return os.str();
}

MomentPoly::MomentPoly(int order, std::vector<Poly> coeffs) : order_(order), coeffs_(std::move(coeffs)) {
  if (order < 0) throw DomainError("MomentPoly: order must be nonnegative");
  for (auto& c : coeffs_) trim(c);
  while (!coeffs_.empty() && coeffs_.back().empty()) coeffs_.pop_back();
}

Poly MomentPoly::f(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return {};
  return coeffs_[static_cast<std::size_t>(i)];
}

int MomentPoly::degree() const {
  return static_cast<int>(coeffs_.size()) - 1;
}

double MomentPoly::evaluate(double N, double theta) const {
  return evaluate_scaled(N, theta, 0);
}

double MomentPoly::evaluate_scaled(double N, double theta, int j) const {
  // The expanded coefficients alternate in sign and grow quickly with the
  // order, so floating-point evaluation cancels; round once at the end.
  const Rational t = exact_rational(theta);
  const Rational nt = exact_rational(N) * t;
  if (nt == 0) return j == 0 ? static_cast<double>(evaluate_exact(exact_rational(N), t)) : 0.0;
  Rational acc = 0, power = 1;
  for (int i = 0; i < j; ++i) power /= nt;
  for (const auto& c : coeffs_) {
    if (!c.empty()) acc += evaluate_poly(c, t) * power;
    power *= nt;
  }
  return static_cast<double>(acc);
}

Rational MomentPoly::evaluate_exact(const Rational& N, const Rational& theta) const {
  const Rational nt = N * theta;
  Rational acc = 0, power = 1;
  for (const auto& c : coeffs_) {
    acc += evaluate_poly(c, theta) * power;
    power *= nt;
  }
  return acc;
}

bool MomentPoly::all_integer() const {
  for (const auto& c : coeffs_)
    for (const auto& v : c)
      if (boost::multiprecision::denominator(v) != 1) return false;
  return true;
}

std::string MomentPoly::to_string() const {
  std::ostringstream os;
  os << "mu_" << order_ << "(N,theta) = ";
  bool any = false;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].empty()) continue;
    if (any) os << " + ";
    const std::string c = poly_to_string(coeffs_[i]);
    os << (i == 0 && c.find_first_of(" *") == std::string::npos ? c : "(" + c + ")");
    if (i == 1) os << "*(N*theta)";
    if (i > 1) os << "*(N*theta)^" << i;
    any = true;
  }
  if (!any) os << "0";
  return os.str();
}

std::vector<MomentPoly> moment_recurrence(int m_max) {
  if (m_max < 2) throw DomainError("moment_recurrence: m_max must be at least 2");
  std::vector<std::vector<Poly>> f;
  f.push_back({Poly{1}});  // mu_0 = 1
  f.push_back({});         // mu_1 = 0
  for (int m = 1; m < m_max; ++m) {
    const auto& cur = f[static_cast<std::size_t>(m)];
    const auto& prev = f[static_cast<std::size_t>(m - 1)];
    const std::size_t width = std::max(cur.size(), prev.size() + 1);
    std::vector<Poly> next(width);
    for (std::size_t i = 0; i < width; ++i) {
      Poly term;
      if (i < cur.size()) {
        // theta (1 - theta) f' + i (1 - theta) f
        term = add(times_theta(times_one_minus(derivative(cur[i]))),
                   scale(times_one_minus(cur[i]), Rational(static_cast<int>(i))));
      }
      if (i >= 1 && i - 1 < prev.size()) term = add(term, scale(times_one_minus(prev[i - 1]), Rational(m)));
      next[i] = std::move(term);
    }
    f.push_back(std::move(next));
  }
  std::vector<MomentPoly> out;
  for (int m = 0; m <= m_max; ++m) out.emplace_back(m, f[static_cast<std::size_t>(m)]);
  return out;
}

const MomentPoly& moment_poly(int m) {
  if (m < 0) throw DomainError("moment_poly: order must be nonnegative");
  static std::mutex mutex;
  static std::vector<MomentPoly> cache;
  std::lock_guard lock(mutex);
  if (static_cast<int>(cache.size()) <= m) cache = moment_recurrence(std::max(m, 16));
  return cache[static_cast<std::size_t>(m)];
}

Poly phi(int m, int j) {
  const bool listed = (m == 6 && j == 1) || (m == 7 && (j == 1 || j == 2)) || (m == 8 && j >= 1 && j <= 3);
  if (!listed) throw DomainError("phi: defined for (6,1), (7,1), (7,2), (8,1), (8,2), (8,3)");
  return moment_poly(m).f(j);
}

namespace {

// phi is expanded in powers of theta with alternating coefficients; evaluate
// it exactly so the closed form is limited by its leading terms only.
double phi_value(int m, int j, double theta) {
  return static_cast<double>(evaluate_poly(phi(m, j), exact_rational(theta)));
}

}  // namespace

double moment_closed_form(int m, double N, double theta) {
  if (m < 0) throw DomainError("moment_closed_form: order must be nonnegative");
  const double nt = N * theta;
  const double q = 1.0 - theta;
  const double v = nt * q;
  switch (m) {
    case 0: return 1.0;
    case 1: return 0.0;
    case 2: return v;
    case 3: return v * (1.0 - 2.0 * theta);
    case 4: return 3.0 * v * v + v * (1.0 - 6.0 * theta + 6.0 * theta * theta);
    case 5:
      return 10.0 * v * v * (1.0 - 2.0 * theta) +
             v * (1.0 - 2.0 * theta) * (1.0 - 12.0 * theta + 12.0 * theta * theta);
    case 6:
      return 15.0 * v * v * v + 5.0 * v * v * (5.0 - 26.0 * theta + 26.0 * theta * theta) +
             nt * phi_value(6, 1, theta);
    case 7:
      return 105.0 * v * v * v * (1.0 - 2.0 * theta) + nt * nt * phi_value(7, 2, theta) +
             nt * phi_value(7, 1, theta);
    case 8:
      return 105.0 * v * v * v * v + nt * nt * nt * phi_value(8, 3, theta) +
             nt * nt * phi_value(8, 2, theta) + nt * phi_value(8, 1, theta);
    default: break;
  }
  return moment_poly(m).evaluate(N, theta);
}

double moment_pmf_sum(int m, int N, double theta) {
  if (m < 0 || N < 0) throw DomainError("moment_pmf_sum: need m >= 0 and N >= 0");
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("moment_pmf_sum: theta outside [0, 1]");
  const double mean = N * theta;
  numeric::CompensatedSum s;
  for (int x = 0; x <= N; ++x) {
    const double p = std::exp(numeric::log_binomial_pmf(N, x, theta));
    if (p != 0.0) s.add(p * std::pow(x - mean, m));
  }
  return s.value();
}

double lemma3_expectation(int l, double a, int N, double theta) {
  if (l < 0) throw DomainError("lemma3_expectation: l must be nonnegative");
  if (!(a > 0.0)) throw DomainError("lemma3_expectation: a must be positive");
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("lemma3_expectation: theta outside [0, 1]");
  const double nt = N * theta;
  const double denom = nt + a;
  const double sd = std::sqrt(nt * (1.0 - theta));
  const int lo = std::max(0, static_cast<int>(std::floor(nt - 40.0 * sd - 40.0)));
  const int hi = std::min(N, static_cast<int>(std::ceil(nt + 40.0 * sd + 40.0)));
  numeric::CompensatedSum s;
  for (int x = lo; x <= hi; ++x) {
    const double p = std::exp(numeric::log_binomial_pmf(N, x, theta));
    if (p == 0.0) continue;
    const double w = (x - nt) / denom;
    // 1 + w = (x + a)/(N theta + a) > 0.
    s.add(-p * std::pow(w, 2 * l + 1) * denom / (x + a));
  }
  return s.value();
}

std::vector<double> bound_grid(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("bound_grid: need 0 < eps < 1");
  const int half = kBoundGridPoints / 2;
  std::vector<double> g;
  g.reserve(kBoundGridPoints);
  const double le = std::log(eps);
  for (int i = 0; i < half; ++i) g.push_back(std::exp(le * (1.0 - static_cast<double>(i) / (half - 1))));
  for (int i = 0; i < half; ++i) g.push_back(eps + (1.0 - eps) * i / (half - 1));
  g.front() = eps;
  g.back() = 1.0;
  return g;
}

bool BoundReport::bounded() const {
  return std::all_of(series.begin(), series.end(), [](const BoundSeries& s) { return s.bounded; });
}

namespace {

template <typename F>
BoundSeries sweep(const std::string& name, const std::vector<int>& N_list, const std::vector<double>& eps, F&& value) {
  BoundSeries s;
  s.quantity = name;
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < N_list.size(); ++n) {
    double best = -std::numeric_limits<double>::infinity(), where = eps[n];
    for (double t : bound_grid(eps[n])) {
      const double v = value(N_list[n], t);
      if (v > best) {
        best = v;
        where = t;
      }
    }
    s.sup_values.push_back(best);
    s.argmax_theta.push_back(where);
    running = std::max(running, best);
    s.running_max.push_back(running);
  }
  const std::size_t half = (N_list.size() + 1) / 2;
  s.first_half_max = *std::max_element(s.sup_values.begin(), s.sup_values.begin() + static_cast<std::ptrdiff_t>(half));
  const double overall = s.running_max.back();
  s.bounded = overall <= kBoundGrowthFactor * s.first_half_max || overall <= 0.0 ||
              overall - s.first_half_max <= 1e-12 * std::abs(s.first_half_max);
  // A sup that still rises can be converging: with N growing geometrically,
  // shrinking increments mean a finite limit, level or growing ones do not.
  if (!s.bounded && s.sup_values.size() >= 3) {
    const double first = s.sup_values[1] - s.sup_values[0];
    const double last = s.sup_values.back() - s.sup_values[s.sup_values.size() - 2];
    s.bounded = first > 0.0 && last <= kIncrementShrink * first;
  }
  return s;
}

void check_inputs(const EpsilonSchedule& schedule, const std::vector<int>& N_list) {
  if (N_list.empty()) throw DomainError("bound check: N list is empty");
  if (!std::is_sorted(N_list.begin(), N_list.end())) throw DomainError("bound check: N list must be increasing");
  if (N_list.front() < 1) throw DomainError("bound check: N must be positive");
  if (!(schedule.c > 0.0) || !(schedule.r > 0.0 && schedule.r < 1.0))
    throw DomainError("bound check: schedule needs c > 0 and 0 < r < 1 so that N eps_N grows");
  for (int N : N_list)
    if (!(schedule.eps(N) < 1.0)) throw DomainError("bound check: eps_N must be below 1");
}

}  // namespace

BoundReport moment_ratio_bound_check(int l, const EpsilonSchedule& schedule, const std::vector<int>& N_list) {
  if (l < 1) throw DomainError("moment_ratio_bound_check: l must be positive");
  check_inputs(schedule, N_list);
  BoundReport rep;
  rep.l = l;
  rep.N_list = N_list;
  for (int N : N_list) rep.eps.push_back(schedule.eps(N));
  const MomentPoly& odd = moment_poly(2 * l - 1);
  const MomentPoly& even = moment_poly(2 * l);
  rep.series.push_back(sweep("odd", N_list, rep.eps, [&](int N, double t) {
    return std::abs(odd.evaluate_scaled(N, t, l - 1));
  }));
  rep.series.push_back(sweep("even", N_list, rep.eps, [&](int N, double t) {
    return std::abs(even.evaluate_scaled(N, t, l));
  }));
  return rep;
}

BoundReport lemma3_bound_check(int l, double a, const EpsilonSchedule& schedule, const std::vector<int>& N_list) {
  if (l < 0) throw DomainError("lemma3_bound_check: l must be nonnegative");
  if (!(a > 0.0)) throw DomainError("lemma3_bound_check: a must be positive");
  check_inputs(schedule, N_list);
  BoundReport rep;
  rep.l = l;
  rep.N_list = N_list;
  for (int N : N_list) rep.eps.push_back(schedule.eps(N));
  rep.series.push_back(sweep("lemma3", N_list, rep.eps, [&](int N, double t) {
    return std::pow(N * t, l) * lemma3_expectation(l, a, N, t);
  }));
  return rep;
}

}  // namespace mmn::moments
