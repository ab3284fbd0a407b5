#pragma once

// Multinomial model, Dirichlet priors (full and truncated to the floor-eps
// simplex) and the closed-form Bayesian predictive densities.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mmn/numeric.hpp"

namespace mmn {

/// k categories, N observed trials. N = 0 is allowed (prior predictive).
struct ModelSpec {
  int k = 2;
  int N = 1;

  void validate() const;
};

/// Dirichlet parameters a_1..a_k with their sum A cached at construction.
class PriorSpec {
public:
  explicit PriorSpec(std::vector<double> a);
  static PriorSpec symmetric(double alpha, int k);

  std::span<const double> a() const { return a_; }
  double a(std::size_t i) const { return a_[i]; }
  double A() const { return A_; }
  int k() const { return static_cast<int>(a_.size()); }
  bool is_symmetric() const;

  friend bool operator==(const PriorSpec&, const PriorSpec&) = default;

private:
  std::vector<double> a_;
  double A_;
};

/// Symmetric Dirichlet with common concentration alpha.
struct SymmetricPrior {
  double alpha = 1.0;
  int k = 2;

  static constexpr double kJeffreys = 0.5;
  static constexpr double kUniform = 1.0;
  /// 1 + 1/sqrt(6); the concentration whose predictive is asymptotically minimax.
  static double minimax_alpha() { return 1.0 + 1.0 / std::sqrt(6.0); }

  static SymmetricPrior jeffreys(int k) { return {kJeffreys, k}; }
  static SymmetricPrior uniform(int k) { return {kUniform, k}; }
  static SymmetricPrior minimax(int k) { return {minimax_alpha(), k}; }

  void validate() const;
  PriorSpec expand() const { return PriorSpec::symmetric(alpha, k); }
};

/// The simplex with every coordinate bounded below by eps, 0 < eps < 1/k.
struct TruncatedSimplex {
  int k = 2;
  double eps = 0.01;

  void validate() const;
  /// theta holds all k coordinates.
  bool contains(std::span<const double> theta, double tol = 1e-14) const;
};

/// eps_N = c * N^(-r). The mode records which asymptotic regime the decay
/// rate is meant to satisfy.
struct EpsilonSchedule {
  enum class Mode { Theorem1, Corollary1, Theorem3 };

  double c = 1.0;
  double r = 0.73;
  Mode mode = Mode::Theorem3;

  /// Checks the rate against the mode: Theorem1 needs 0 < r < 1, Corollary1
  /// needs 0 < r < 3/4, Theorem3 needs 1/alpha_hat < r < 3/4.
  void validate() const;
  double eps(int N) const { return c * std::pow(static_cast<double>(N), -r); }
  /// Truncated simplex for sample size N; throws DomainError unless 0 < eps_N < 1/k.
  TruncatedSimplex at(int k, int N) const;

  static std::string mode_name(Mode m);
  static Mode parse_mode(const std::string& s);
};

/// Observed counts x_1..x_k summing to N.
struct Observation {
  std::vector<int> x;

  void validate(const ModelSpec& model) const;
};

/// Index (0-based) of the category with y_i = 1.
struct OutcomeLabel {
  std::size_t category = 0;
};

/// (x_i + a_i) / (N + A).
double predictive_density(const PriorSpec& prior, const ModelSpec& model, const Observation& x,
                          OutcomeLabel y);

/// Predictive density under the symmetric prior renormalized over the
/// truncated simplex: (x_i + alpha)/(N + k alpha) * I(x + y + alpha) / I(x + alpha),
/// where I is the retained Dirichlet mass.
double truncated_predictive_density(const SymmetricPrior& alpha, const TruncatedSimplex& trunc,
                                    const ModelSpec& model, const Observation& x, OutcomeLabel y,
                                    const numeric::QuadratureSettings& quad = {});

/// s_i = (a_i - A theta_i) / (N theta_i + A theta_i).
double si_term(const PriorSpec& prior, const ModelSpec& model, double theta_i, std::size_t i);

}  // namespace mmn
