#include "mmn/separable_search.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "mmn/errors.hpp"
#include "mmn/numeric.hpp"
#include "mmn/parallel.hpp"
#include "mmn/rng.hpp"

namespace mmn {

double SeparableObjective::operator()(std::span<const double> theta) const {
  numeric::CompensatedSum s;
  s.add(constant);
  for (std::size_t i = 0; i < theta.size(); ++i) s.add(term(i, theta[i]));
  return s.value();
}

namespace {

constexpr double kTie = 1e-13;
constexpr int kBrentBits = 40;

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> theta;
};

// Strictly better, or tied with a lexicographically smaller point.
bool improves(const Candidate& c, const Candidate& best) {
  if (best.theta.empty()) return true;
  if (c.value > best.value + kTie) return true;
  if (c.value < best.value - kTie) return false;
  return std::lexicographical_compare(c.theta.begin(), c.theta.end(), best.theta.begin(), best.theta.end());
}

std::string describe(const std::string& head, std::span<const double> theta) {
  std::ostringstream os;
  os.precision(10);
  os << head << " theta=";
  for (std::size_t i = 0; i < theta.size(); ++i) os << (i ? ";" : "") << theta[i];
  return os.str();
}

// All index subsets of size j, or only the leading one when the objective
// is symmetric or k is large.
std::vector<std::vector<bool>> placements(std::size_t k, std::size_t j, bool symmetric) {
  std::vector<std::vector<bool>> out;
  std::vector<bool> mask(k, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(j), true);
  if (symmetric || k > 10) {
    out.push_back(mask);
    return out;
  }
  // prev_permutation from the leading mask enumerates every subset once.
  do out.push_back(mask);
  while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

std::vector<double> two_value_point(const std::vector<bool>& mask, std::size_t j, double u) {
  const std::size_t k = mask.size();
  const double v = (1.0 - static_cast<double>(j) * u) / static_cast<double>(k - j);
  std::vector<double> th(k);
  for (std::size_t i = 0; i < k; ++i) th[i] = mask[i] ? u : v;
  return th;
}

// Maximize g on [lo, hi]: scan `points` values then polish the best
// bracket with Brent. Returns (argmax, value).
template <typename G>
std::pair<double, double> scan_and_polish(G&& g, double lo, double hi, int points) {
  if (!(hi > lo)) return {lo, g(lo)};
  std::vector<double> xs(static_cast<std::size_t>(points)), vs(xs.size());
  for (int i = 0; i < points; ++i) {
    xs[i] = lo + (hi - lo) * i / (points - 1);
    if (i == points - 1) xs[i] = hi;
    vs[i] = g(xs[i]);
  }
  const auto best = static_cast<std::size_t>(std::max_element(vs.begin(), vs.end()) - vs.begin());
  double bx = xs[best], bv = vs[best];
  const double a = xs[best == 0 ? 0 : best - 1];
  const double b = xs[std::min(best + 1, xs.size() - 1)];
  std::uintmax_t iters = 200;
  const auto [px, nv] =
      boost::math::tools::brent_find_minima([&](double x) { return -g(x); }, a, b, kBrentBits, iters);
  if (-nv > bv) {
    bx = px;
    bv = -nv;
  }
  return {bx, bv};
}

}  // namespace

SearchResult maximize_separable(const SeparableObjective& obj, double eps, const SearchSettings& settings) {
  const std::size_t k = obj.k;
  if (k < 2) throw DomainError("maximize_separable: k must be at least 2");
  if (!(eps > 0.0 && eps * static_cast<double>(k) < 1.0))
    throw DomainError("maximize_separable: need 0 < eps < 1/k");
  if (settings.grid_size < 16) throw DomainError("maximize_separable: grid_size must be at least 16");
  if (!obj.term) throw DomainError("maximize_separable: objective has no term function");

  SearchResult result;
  Candidate best;
  auto offer = [&](const std::string& head, std::vector<double> theta) {
    Candidate c{obj(theta), std::move(theta)};
    result.trace.push_back({describe(head, c.theta), c.value});
    if (improves(c, best)) best = std::move(c);
  };

  // (a) j coordinates at the floor, the rest equal.
  for (std::size_t j = 0; j < k; ++j) {
    for (const auto& mask : placements(k, j, obj.symmetric))
      offer("pinned j=" + std::to_string(j), two_value_point(mask, j, eps));
  }

  // (b) two-value family: u on j coordinates, the rest sharing 1 - j u.
  for (std::size_t j = 1; j < k; ++j) {
    const double hi = (1.0 - static_cast<double>(k - j) * eps) / static_cast<double>(j);
    for (const auto& mask : placements(k, j, obj.symmetric)) {
      auto g = [&](double u) { return obj(two_value_point(mask, j, std::clamp(u, eps, hi))); };
      const auto [u, v] = scan_and_polish(g, eps, hi, settings.grid_size);
      (void)v;
      offer("two-value j=" + std::to_string(j), two_value_point(mask, j, std::clamp(u, eps, hi)));
    }
  }

  // (c) pairwise coordinate ascent from seeded random starts.
  const auto starts = static_cast<std::size_t>(std::max(0, settings.starts));
  std::vector<std::vector<double>> finals(starts);
  parallel_for(starts, settings.threads, [&](std::size_t s) {
    StreamRng rng(settings.seed, s);
    std::vector<double> theta(k);
    const std::vector<double> ones(k, 1.0);
    sample_dirichlet(rng, ones, theta);
    for (double& t : theta) t = eps + (1.0 - static_cast<double>(k) * eps) * t;
    double current = obj(theta);
    for (int sweep = 0; sweep < settings.max_sweeps; ++sweep) {
      const double before = current;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          const double total = theta[i] + theta[j];
          const double lo = eps, hi = total - eps;
          if (!(hi > lo)) continue;
          auto g = [&](double t) {
            t = std::clamp(t, lo, hi);
            return obj.term(i, t) + obj.term(j, total - t);
          };
          const double base = g(theta[i]);
          const auto [t, v] = scan_and_polish(g, lo, hi, 17);
          if (v > base) {
            theta[i] = std::clamp(t, lo, hi);
            theta[j] = total - theta[i];
          }
        }
      }
      current = obj(theta);
      if (current - before <= 1e-15 * std::max(1.0, std::abs(current))) break;
    }
    finals[s] = std::move(theta);
  });
  for (std::size_t s = 0; s < starts; ++s) offer("ascent start=" + std::to_string(s), std::move(finals[s]));

  result.argmax = best.theta;
  result.value = obj(result.argmax);
  return result;
}

}  // namespace mmn
