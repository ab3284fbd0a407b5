#pragma once

// Kullback-Leibler prediction risk of Dirichlet-based predictive densities:
// brute-force enumeration, the per-coordinate binomial decomposition, the
// supremum over the truncated simplex and Bayes risks.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mmn/model.hpp"
#include "mmn/numeric.hpp"
#include "mmn/rng.hpp"
#include "mmn/separable_search.hpp"

namespace mmn {

/// A point in the open simplex, all k coordinates stored.
class ThetaPoint {
public:
  /// Accepts k coordinates summing to one within 1e-14, or k - 1 coordinates
  /// (the last is then 1 - sum). Throws DomainError otherwise.
  static ThetaPoint from(std::vector<double> theta, int k);
  explicit ThetaPoint(std::vector<double> theta);

  std::span<const double> values() const { return theta_; }
  double operator[](std::size_t i) const { return theta_[i]; }
  int k() const { return static_cast<int>(theta_.size()); }

private:
  std::vector<double> theta_;
};

enum class RiskMethod { Enumeration, Coordinatewise };
std::string risk_method_name(RiskMethod m);

struct RiskReport {
  double exact_risk = 0.0;  // nats
  std::vector<double> per_coordinate;
  std::vector<double> theta;
  RiskMethod method = RiskMethod::Coordinatewise;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

/// Sum over all x (compositions of N) and one-hot y of p(x, y | theta) ln[p(y|theta) / p_a(y|x)].
/// per_coordinate[i] collects the y = e_i terms. Throws SizeError when the
/// number of compositions exceeds `cap`.
RiskReport risk_enumeration(const PriorSpec& prior, const ModelSpec& model, const ThetaPoint& theta,
                            std::uint64_t cap = kDefaultEnumerationCap);

/// Per-coordinate form: term_i = -theta_i ln(1 + s_i) - theta_i E[ln(1 + w_i)]
/// with x_i ~ Bin(N, theta_i). O(N k).
RiskReport risk_coordinatewise(const PriorSpec& prior, const ModelSpec& model, const ThetaPoint& theta);

/// One term of the per-coordinate form; theta_i in (0, 1].
double coordinate_risk(double a_i, double A, int N, double theta_i);

struct SupRiskReport {
  double sup_value = 0.0;
  std::vector<double> argmax_theta;
  std::vector<SearchTraceEntry> search_trace;
};

/// Supremum of the risk over the truncated simplex (see maximize_separable).
SupRiskReport sup_risk(const PriorSpec& prior, const ModelSpec& model, const TruncatedSimplex& trunc,
                       int grid_size = 64, const SearchSettings& search = {});

// ---------------------------------------------------------------------------
// Bayes risk

/// Dirichlet weight over the whole simplex.
struct FullWeight {
  PriorSpec prior;
};
/// Symmetric Dirichlet renormalized over the truncated simplex.
struct TruncatedWeight {
  SymmetricPrior alpha;
  TruncatedSimplex trunc;
};
using PriorWeight = std::variant<FullWeight, TruncatedWeight>;

/// FULL: the untruncated Dirichlet predictive (x_i + a_i)/(N + A).
/// TRUNCATED: the predictive of the truncated weight (needs a TruncatedWeight).
enum class PredictiveKind { Full, Truncated };
enum class IntegrationMode { Quadrature, MonteCarlo };

struct BayesRiskResult {
  double value = 0.0;
  double error_estimate = 0.0;  // quadrature estimate or one MC standard error
  IntegrationMode mode = IntegrationMode::Quadrature;
};

/// Integral of weight(theta) R(theta, q) d theta. Quadrature handles k <= 3
/// by mapping each coordinate through its conditional Beta quantile function;
/// Monte Carlo handles any k. TRUNCATED predictives are enumerated over x and
/// are capped at N <= 64 (k = 2) and N <= 24 (k = 3).
BayesRiskResult bayes_risk(const PriorWeight& weight, PredictiveKind predictive, const ModelSpec& model,
                           const numeric::QuadratureSettings& quad = {}, const MonteCarloSettings& mc = {},
                           IntegrationMode mode = IntegrationMode::Quadrature);

/// log q(y | x) of the truncated-prior predictive for every composition x of
/// N and every y, with the retained-mass ratios cached per composition.
class TruncatedPredictiveTable {
public:
  TruncatedPredictiveTable(const SymmetricPrior& alpha, const TruncatedSimplex& trunc, const ModelSpec& model,
                           const numeric::QuadratureSettings& quad = {});

  /// Risk R(theta, q) of this predictive at theta (all k coordinates).
  double risk(std::span<const double> theta) const;
  /// ln q(y | x) for the composition with the given index.
  double log_predictive(std::size_t composition, std::size_t y) const {
    return log_q_[composition * static_cast<std::size_t>(k_) + y];
  }
  const std::vector<std::vector<int>>& compositions() const { return compositions_; }

  static int max_N(int k);

private:
  int k_;
  int N_;
  std::vector<std::vector<int>> compositions_;
  std::vector<double> log_multinomial_;
  std::vector<double> log_q_;
};

}  // namespace mmn
