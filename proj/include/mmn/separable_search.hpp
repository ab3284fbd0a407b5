#pragma once

// Maximization of separable objectives f(theta) = c + sum_i term_i(theta_i)
// over the truncated simplex. The objective need not be concave; the search
// combines structured candidates with multi-start local ascent and records
// everything it tried.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mmn {

struct SeparableObjective {
  std::size_t k = 2;
  /// term(i, t): contribution of coordinate i at value t.
  std::function<double(std::size_t, double)> term;
  double constant = 0.0;
  /// All coordinates share the same term function; lets the search skip
  /// configurations that are relabelings of each other.
  bool symmetric = false;

  double operator()(std::span<const double> theta) const;
};

struct SearchSettings {
  int grid_size = 64;
  int starts = 32;
  std::uint64_t seed = 0x5EED;
  int threads = 0;
  int max_sweeps = 40;
};

struct SearchTraceEntry {
  std::string descriptor;
  double value;
};

struct SearchResult {
  double value = 0.0;
  std::vector<double> argmax;
  std::vector<SearchTraceEntry> trace;
};

/// Maximizes obj over { theta : sum theta = 1, theta_i >= eps }:
///  (a) every "j coordinates at eps, the rest equal" configuration;
///  (b) for each j, the two-value family (u on j coordinates, the rest
///      sharing 1 - j u) tabulated on grid_size points and refined by Brent;
///  (c) pairwise coordinate ascent from `starts` seeded random points.
/// Ties within 1e-13 go to the lexicographically smaller theta. Requires
/// grid_size >= 16 and 0 < eps < 1/k.
SearchResult maximize_separable(const SeparableObjective& obj, double eps,
                                const SearchSettings& settings);

}  // namespace mmn
