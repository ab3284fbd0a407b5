#include "mmn/expansion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "mmn/errors.hpp"
#include "mmn/numeric.hpp"
#include "mmn/parallel.hpp"

namespace mmn {

const CoordinateCoefficient kCoordinateTable[6] = {
    {2, 1, {5, -12, 6, 0, 0}, 12, true},
    {3, 2, {9, -24, 18, -4, 0}, 12, true},
    {3, 1, {-5, 12, -6, 0, 0}, 4, false},
    {4, 3, {251, -720, 660, -240, 30}, 120, true},
    {4, 2, {-9, 24, -18, 4, 0}, 2, false},
    {4, 1, {35, -84, 42, 0, 0}, 12, false},
};

const ConstantCoefficient kConstantTable[3] = {
    {2, {0, 1, -0.5, 0, 0}, -0.5, 1.0 / 12.0, true},
    {3, {0, -1, 0, 1.0 / 3.0, 0}, 0.5, 0.0, false},
    {4, {0, 1, 0, 0, -0.25}, -0.5, -1.0 / 120.0, false},
};

namespace {

// Compensated Horner: as accurate as evaluating in twice the working
// precision. The order-2 coefficient has a root at alpha_hat and is divided
// by theta_i, so plain rounding residue would be amplified near the boundary.
double horner(const double (&p)[5], double x) {
  double s = p[4], c = 0.0;
  for (int i = 3; i >= 0; --i) {
    const double prod = s * x;
    const double prod_err = std::fma(s, x, -prod);
    const double sum = prod + p[i];
    const double bp = sum - prod;
    const double sum_err = (prod - (sum - bp)) + (p[i] - bp);
    c = c * x + (prod_err + sum_err);
    s = sum;
  }
  return s + c;
}

bool kept(bool in_corollary1, ExpansionForm form) {
  return form == ExpansionForm::Theorem1 || in_corollary1;
}

void check_order(int order) {
  if (order < 1 || order > 4) throw DomainError("expansion: truncation order must be in 1..4");
}

}  // namespace

std::string expansion_form_name(ExpansionForm f) {
  return f == ExpansionForm::Theorem1 ? "THEOREM1" : "COROLLARY1";
}

ExpansionForm parse_expansion_form(const std::string& s) {
  std::string u = s;
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
  if (u == "THEOREM1") return ExpansionForm::Theorem1;
  if (u == "COROLLARY1") return ExpansionForm::Corollary1;
  throw DomainError("unknown expansion form '" + s + "'");
}

double ExpansionTerms::term(int order) const {
  switch (order) {
    case 1: return t1;
    case 2: return t2;
    case 3: return t3;
    case 4: return t4;
    default: break;
  }
  throw DomainError("ExpansionTerms: order must be in 1..4");
}

double ExpansionTerms::sum() const {
  double s = 0.0;
  for (int m = 1; m <= truncation_order; ++m) s += term(m);
  return s;
}

double expansion_coordinate(const PriorSpec& prior, std::size_t i, int N, double theta_i, int order,
                            ExpansionForm form) {
  check_order(order);
  const double a = prior.a(i);
  numeric::CompensatedSum s;
  for (const auto& row : kCoordinateTable) {
    if (row.order > order || !kept(row.in_corollary1, form)) continue;
    s.add(horner(row.poly, a) / (row.denominator * std::pow(theta_i, row.theta_power)) /
          std::pow(static_cast<double>(N), row.order));
  }
  return s.value();
}

double expansion_constant(const PriorSpec& prior, int N, int order, ExpansionForm form) {
  check_order(order);
  const double k = prior.k();
  numeric::CompensatedSum s;
  s.add((k - 1.0) / (2.0 * N));
  for (const auto& row : kConstantTable) {
    if (row.order > order || !kept(row.in_corollary1, form)) continue;
    s.add((horner(row.poly, prior.A()) + row.k_coef * k + row.constant) / std::pow(static_cast<double>(N), row.order));
  }
  return s.value();
}

ExpansionTerms theorem1_expansion(const PriorSpec& prior, const ModelSpec& model, const ThetaPoint& theta,
                                  ExpansionForm form) {
  model.validate();
  if (model.N < 1) throw DomainError("theorem1_expansion: N must be positive");
  if (prior.k() != model.k || theta.k() != model.k) throw DomainError("theorem1_expansion: k mismatch");
  const double N = model.N;
  const double k = model.k;
  ExpansionTerms out;
  out.t1 = (k - 1.0) / (2.0 * N);
  std::vector<double> parts[5];
  for (const auto& row : kCoordinateTable) {
    if (!kept(row.in_corollary1, form)) continue;
    for (int i = 0; i < model.k; ++i)
      parts[row.order].push_back(horner(row.poly, prior.a(i)) / (row.denominator * std::pow(theta[i], row.theta_power)));
  }
  for (const auto& row : kConstantTable) {
    if (!kept(row.in_corollary1, form)) continue;
    parts[row.order].push_back(horner(row.poly, prior.A()) + row.k_coef * k + row.constant);
  }
  out.t2 = numeric::stable_sum(parts[2]) / (N * N);
  out.t3 = numeric::stable_sum(parts[3]) / (N * N * N);
  out.t4 = numeric::stable_sum(parts[4]) / (N * N * N * N);
  return out;
}

ExpansionTerms corollary2_expansion(int k, int N, const ThetaPoint& theta) {
  if (k < 2 || N < 1) throw DomainError("corollary2_expansion: need k >= 2 and N >= 1");
  if (theta.k() != k) throw DomainError("corollary2_expansion: k mismatch");
  const double r6 = std::sqrt(6.0);
  const double n = N;
  std::vector<double> inv2, inv3;
  for (int i = 0; i < k; ++i) {
    inv2.push_back(1.0 / (theta[i] * theta[i]));
    inv3.push_back(1.0 / (theta[i] * theta[i] * theta[i]));
  }
  ExpansionTerms out;
  out.t1 = (k - 1.0) / (2.0 * n);
  out.t2 = -((k - 1.0) / 12.0) * (1.0 + (7.0 + 2.0 * r6) * k) / (n * n);
  out.t3 = -numeric::stable_sum(inv2) / (18.0 * r6) / (n * n * n);
  out.t4 = -(1.0 / (6.0 * r6) - 11.0 / 720.0) * numeric::stable_sum(inv3) / (n * n * n * n);
  return out;
}

double jeffreys_lower_bound(int k, int N, double eps) {
  if (k < 2 || N < 1) throw DomainError("jeffreys_lower_bound: need k >= 2 and N >= 1");
  if (!(eps > 0.0 && eps * k < 1.0)) throw DomainError("jeffreys_lower_bound: need 0 < eps < 1/k");
  return 1.0 / (24.0 * static_cast<double>(N) * N * eps);
}

std::vector<double> jeffreys_witness(int k, double eps) {
  if (k < 2 || !(eps > 0.0 && eps * k < 1.0)) throw DomainError("jeffreys_witness: need k >= 2 and 0 < eps < 1/k");
  std::vector<double> th(static_cast<std::size_t>(k), (1.0 - eps) / (k - 1));
  th[0] = eps;
  return th;
}

bool IdentityReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

IdentityReport alpha_hat_identities(double tolerance) {
  const double r6 = std::sqrt(6.0);
  const double a = SymmetricPrior::minimax_alpha();
  IdentityReport rep;
  rep.tolerance = tolerance;
  auto add = [&](std::string name, int k, double lhs, double rhs, double scale) {
    const double err = std::abs(lhs - rhs) / scale;
    rep.checks.push_back({std::move(name), k, lhs, rhs, err, err <= tolerance});
  };
  // The quadratic vanishes, so its error is measured against the size of its terms.
  const double quad = (6.0 * a - 12.0) * a + 5.0;
  add("6a^2-12a+5=0", 0, quad, 0.0, 6.0 * a * a);
  const double cubic = ((-4.0 * a + 18.0) * a - 24.0) * a + 9.0;
  add("-4a^3+18a^2-24a+9=-sqrt6/9", 0, cubic, -r6 / 9.0, r6 / 9.0);
  const double quartic = (((30.0 * a - 240.0) * a + 660.0) * a - 720.0) * a + 251.0;
  add("30a^4-240a^3+660a^2-720a+251=-(20sqrt6-11)/6", 0, quartic, -(20.0 * r6 - 11.0) / 6.0,
      (20.0 * r6 - 11.0) / 6.0);
  for (int k = 2; k <= 8; ++k) {
    const double A = k * a;
    const double lhs = -A * A / 2.0 + A - k / 2.0 + 1.0 / 12.0;
    const double rhs = -(k - 1.0) * (1.0 + (7.0 + 2.0 * r6) * k) / 12.0;
    add("-A^2/2+A-k/2+1/12=-(k-1)(1+(7+2sqrt6)k)/12", k, lhs, rhs, std::abs(rhs));
  }
  return rep;
}

double residual_scale(int N, double eps, int truncation_order, ExpansionForm form) {
  check_order(truncation_order);
  const double n = N;
  if (form == ExpansionForm::Corollary1) return n * n;
  if (truncation_order == 4) return std::pow(n, 5) * std::pow(eps, 4);
  return std::pow(n, truncation_order + 1);
}

ExpansionErrorProfile expansion_error_profile(const PriorSpec& prior, const EpsilonSchedule& schedule,
                                              const std::vector<int>& N_list, int truncation_order,
                                              ExpansionForm form, const SearchSettings& search) {
  check_order(truncation_order);
  if (N_list.empty()) throw DomainError("expansion_error_profile: N list is empty");
  if (!std::is_sorted(N_list.begin(), N_list.end()) ||
      std::adjacent_find(N_list.begin(), N_list.end()) != N_list.end())
    throw DomainError("expansion_error_profile: N list must be increasing");
  const int k = prior.k();
  std::vector<TruncatedSimplex> regions;
  for (int N : N_list) regions.push_back(schedule.at(k, N));

  ExpansionErrorProfile prof;
  prof.truncation_order = truncation_order;
  prof.form = form;
  prof.rows.resize(N_list.size());
  SearchSettings inner = search;
  inner.threads = 1;
  parallel_for(N_list.size(), search.threads, [&](std::size_t n) {
    const int N = N_list[n];
    const double eps = regions[n].eps;
    const std::vector<double> a(prior.a().begin(), prior.a().end());
    const double A = prior.A();
    const double constant = expansion_constant(prior, N, truncation_order, form);
    auto diff_term = [&, N](std::size_t i, double t) {
      return coordinate_risk(a[i], A, N, t) - expansion_coordinate(prior, i, N, t, truncation_order, form);
    };
    SeparableObjective up{static_cast<std::size_t>(k), diff_term, -constant, prior.is_symmetric()};
    SeparableObjective down{static_cast<std::size_t>(k),
                            [&](std::size_t i, double t) { return -diff_term(i, t); }, constant,
                            prior.is_symmetric()};
    const SearchResult hi = maximize_separable(up, eps, inner);
    const SearchResult lo = maximize_separable(down, eps, inner);
    const bool use_hi = hi.value >= lo.value;
    ExpansionErrorRow row;
    row.N = N;
    row.eps = eps;
    row.sup_abs_residual = std::abs(use_hi ? hi.value : lo.value);
    row.argmax_theta = use_hi ? hi.argmax : lo.argmax;
    row.scaled_residual = row.sup_abs_residual * residual_scale(N, eps, truncation_order, form);
    prof.rows[n] = std::move(row);
  });
  return prof;
}

std::string expansion_csv_header() { return "N,eps,sup_abs_residual,scaled_residual,argmax_theta"; }

std::string to_csv_row(const ExpansionErrorRow& row) {
  std::ostringstream os;
  os.precision(17);
  os << row.N << ',' << row.eps << ',' << row.sup_abs_residual << ',' << row.scaled_residual << ',';
  for (std::size_t i = 0; i < row.argmax_theta.size(); ++i) os << (i ? ";" : "") << row.argmax_theta[i];
  return os.str();
}

}  // namespace mmn
