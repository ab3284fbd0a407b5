#include "mmn/minimax.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "mmn/errors.hpp"
#include "mmn/parallel.hpp"

namespace mmn {

LabeledPrior parse_labeled_prior(const std::string& s) {
  std::string u = s;
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::tolower(c); });
  if (u == "jeffreys") return {"jeffreys", SymmetricPrior::kJeffreys};
  if (u == "uniform") return {"uniform", SymmetricPrior::kUniform};
  if (u == "minimax" || u == "alpha_hat") return {"minimax", SymmetricPrior::minimax_alpha()};
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !(v > 0.0) || !std::isfinite(v))
    throw DomainError("unknown prior '" + s + "': use jeffreys, uniform, minimax or a positive number");
  std::ostringstream label;
  label << "alpha=" << s;
  return {label.str(), v};
}

double minimax_second_order(int k) {
  return -(k - 1.0) / 12.0 * (1.0 + (7.0 + 2.0 * std::sqrt(6.0)) * k);
}

bool decreasing_trend(const std::vector<double>& series) {
  if (series.size() < 2) return false;
  return series.back() <= kTrendFactor * series.front();
}

namespace {

void check_N_list(const std::vector<int>& N_list) {
  if (N_list.empty()) throw DomainError("N list is empty");
  for (int N : N_list)
    if (N < 1) throw DomainError("N values must be positive");
}

}  // namespace

std::vector<PriorComparisonRow> compare_priors(int k, const std::vector<int>& N_list, const EpsilonSchedule& schedule,
                                               const std::vector<LabeledPrior>& priors, const SearchSettings& search) {
  if (priors.empty()) throw DomainError("compare_priors: prior list is empty");
  check_N_list(N_list);
  if (k < 2) throw DomainError("compare_priors: k must be at least 2");
  std::vector<TruncatedSimplex> regions;
  for (int N : N_list) regions.push_back(schedule.at(k, N));
  for (const auto& p : priors) SymmetricPrior{p.alpha, k}.validate();

  const std::size_t cells = priors.size() * N_list.size();
  std::vector<PriorComparisonRow> rows(cells);
  SearchSettings inner = search;
  inner.threads = 1;
  parallel_for(cells, search.threads, [&](std::size_t c) {
    const auto& prior = priors[c / N_list.size()];
    const std::size_t n = c % N_list.size();
    const int N = N_list[n];
    const SupRiskReport sup =
        sup_risk(PriorSpec::symmetric(prior.alpha, k), {k, N}, regions[n], search.grid_size, inner);
    PriorComparisonRow row;
    row.prior_label = prior.label;
    row.alpha = prior.alpha;
    row.k = k;
    row.N = N;
    row.eps = regions[n].eps;
    row.sup_risk = sup.sup_value;
    row.excess_over_t1 = sup.sup_value - (k - 1.0) / (2.0 * N);
    row.scaled_excess = static_cast<double>(N) * N * row.excess_over_t1;
    row.argmax_theta = sup.argmax_theta;
    rows[c] = std::move(row);
  });
  return rows;
}

std::vector<CheckResult> compare_priors_checks(const std::vector<PriorComparisonRow>& rows) {
  std::vector<CheckResult> out;
  std::vector<std::string> labels;
  for (const auto& r : rows)
    if (std::find(labels.begin(), labels.end(), r.prior_label) == labels.end()) labels.push_back(r.prior_label);
  for (const auto& label : labels) {
    std::vector<const PriorComparisonRow*> mine;
    for (const auto& r : rows)
      if (r.prior_label == label) mine.push_back(&r);
    std::sort(mine.begin(), mine.end(), [](auto* a, auto* b) { return a->N < b->N; });
    const auto& last = *mine.back();
    if (last.alpha == SymmetricPrior::kJeffreys) {
      const double witness = static_cast<double>(last.N) * last.N * last.eps * last.excess_over_t1;
      out.push_back({label + ": N^2 eps excess >= 0.8/24 at largest N", witness >= 0.8 / 24.0, witness, 0.8 / 24.0,
                     "N=" + std::to_string(last.N)});
      bool growing = mine.size() >= 2;
      for (std::size_t i = 1; i < mine.size(); ++i) growing = growing && mine[i]->scaled_excess > mine[i - 1]->scaled_excess;
      out.push_back({label + ": N^2 excess increasing", growing, last.scaled_excess, mine.front()->scaled_excess,
                     "first and last scaled excess"});
    } else if (std::abs(last.alpha - SymmetricPrior::minimax_alpha()) < 1e-15) {
      const double target = minimax_second_order(last.k);
      const bool negative =
          std::all_of(mine.begin(), mine.end(), [](auto* r) { return r->scaled_excess < 0.0; });
      out.push_back({label + ": scaled excess negative", negative, last.scaled_excess, 0.0, "all N"});
      const double rel = std::abs(last.scaled_excess - target) / std::abs(target);
      out.push_back({label + ": scaled excess within 10% of limit at largest N", rel <= 0.1, last.scaled_excess,
                     target, "relative deviation " + std::to_string(rel)});
    }
  }
  return out;
}

std::vector<SandwichRow> theorem3_sandwich(int k, const std::vector<int>& N_list, const EpsilonSchedule& schedule,
                                           const numeric::QuadratureSettings& quad, const SearchSettings& search) {
  check_N_list(N_list);
  if (schedule.mode != EpsilonSchedule::Mode::Theorem3)
    throw DomainError("theorem3_sandwich: schedule mode must be THEOREM3");
  schedule.validate();
  if (TruncatedPredictiveTable::max_N(k) < 0) throw DomainError("theorem3_sandwich: k must be 2 or 3");
  for (int N : N_list)
    if (N > TruncatedPredictiveTable::max_N(k))
      throw DomainError("theorem3_sandwich: N=" + std::to_string(N) + " exceeds the enumeration cap " +
                        std::to_string(TruncatedPredictiveTable::max_N(k)));
  std::vector<TruncatedSimplex> regions;
  for (int N : N_list) regions.push_back(schedule.at(k, N));

  const SymmetricPrior hat = SymmetricPrior::minimax(k);
  std::vector<SandwichRow> rows(N_list.size());
  SearchSettings inner = search;
  inner.threads = 1;
  parallel_for(N_list.size(), search.threads, [&](std::size_t n) {
    const int N = N_list[n];
    const ModelSpec model{k, N};
    const PriorWeight weight = TruncatedWeight{hat, regions[n]};
    SandwichRow row;
    row.k = k;
    row.N = N;
    row.eps = regions[n].eps;
    row.upper = sup_risk(hat.expand(), model, regions[n], search.grid_size, inner).sup_value;
    row.lower = bayes_risk(weight, PredictiveKind::Truncated, model, quad).value;
    row.full_bayes = bayes_risk(weight, PredictiveKind::Full, model, quad).value;
    const double n2 = static_cast<double>(N) * N;
    row.gap_scaled = n2 * (row.upper - row.lower);
    row.corollary3_scaled = n2 * (row.full_bayes - row.upper);
    row.asymptotic = (k - 1.0) / (2.0 * N) + minimax_second_order(k) / n2;
    rows[n] = row;
  });
  return rows;
}

std::vector<CheckResult> sandwich_checks(const std::vector<SandwichRow>& rows) {
  std::vector<CheckResult> out;
  double worst = std::numeric_limits<double>::infinity();
  int worst_N = 0;
  for (const auto& r : rows) {
    if (r.upper - r.lower < worst) {
      worst = r.upper - r.lower;
      worst_N = r.N;
    }
  }
  out.push_back({"upper >= lower at every N", worst >= -1e-12, worst, -1e-12, "N=" + std::to_string(worst_N)});
  std::vector<double> gaps, cor3;
  for (const auto& r : rows) {
    gaps.push_back(r.gap_scaled);
    cor3.push_back(std::abs(r.corollary3_scaled));
  }
  out.push_back({"N^2 (upper - lower) falls by 40% across the sweep", decreasing_trend(gaps),
                 gaps.empty() ? 0.0 : gaps.back(), gaps.empty() ? 0.0 : kTrendFactor * gaps.front(),
                 "last vs 0.6 * first"});
  out.push_back({"N^2 |full-predictive Bayes risk - upper| falls by 40% across the sweep", decreasing_trend(cor3),
                 cor3.empty() ? 0.0 : cor3.back(), cor3.empty() ? 0.0 : kTrendFactor * cor3.front(),
                 "last vs 0.6 * first"});
  return out;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 40; ++i) g.push_back((10 + i) / 20.0);
  return g;
}

OptimalAlphaResult optimal_alpha_search(int k, int N, const EpsilonSchedule& schedule,
                                        const std::vector<double>& alpha_grid, const SearchSettings& search) {
  if (alpha_grid.empty()) throw DomainError("optimal_alpha_search: alpha grid is empty");
  const auto [lo, hi] = std::minmax_element(alpha_grid.begin(), alpha_grid.end());
  if (*lo > 0.5 || *hi < 2.5) throw DomainError("optimal_alpha_search: alpha grid must cover [0.5, 2.5]");
  for (double a : alpha_grid)
    if (!(a > 0.0)) throw DomainError("optimal_alpha_search: alpha values must be positive");
  const TruncatedSimplex region = schedule.at(k, N);
  OptimalAlphaResult out;
  out.eps = region.eps;
  out.curve.resize(alpha_grid.size());
  SearchSettings inner = search;
  inner.threads = 1;
  parallel_for(alpha_grid.size(), search.threads, [&](std::size_t i) {
    const double a = alpha_grid[i];
    out.curve[i] = {a, sup_risk(PriorSpec::symmetric(a, k), {k, N}, region, search.grid_size, inner).sup_value};
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.curve.size(); ++i) {
    const auto& c = out.curve[i];
    const auto& b = out.curve[best];
    if (c.sup_risk < b.sup_risk || (c.sup_risk == b.sup_risk && c.alpha < b.alpha)) best = i;
  }
  out.alpha_star = out.curve[best].alpha;
  return out;
}

CheckResult optimal_alpha_check(const OptimalAlphaResult& r, double tolerance) {
  const double dev = std::abs(r.alpha_star - SymmetricPrior::minimax_alpha());
  return {"alpha_star within " + std::to_string(tolerance) + " of alpha_hat (soft)", dev <= tolerance, r.alpha_star,
          SymmetricPrior::minimax_alpha(), "deviation " + std::to_string(dev)};
}

}  // namespace mmn
