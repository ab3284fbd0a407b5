#pragma once

// Dirichlet integrals over the truncated simplex
//   D_eps = { theta : theta_i >= eps for all i },
// the retained-mass ratio I = B_eps / B, numerical checks of the supporting
// inequalities used for the Bayes-risk gap, and the gap itself.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmn/model.hpp"
#include "mmn/numeric.hpp"
#include "mmn/rng.hpp"

namespace mmn::simplex {

enum class IntegralMethod { Auto, Exact1D, RecursiveQuad, MonteCarlo };

std::string method_name(IntegralMethod m);

struct TruncatedDirichletIntegral {
  std::vector<double> alphas;
  double eps = 0.0;
  double value_log = 0.0;       // ln B_eps(alphas)
  double log_full_beta = 0.0;   // ln B(alphas)
  IntegralMethod method = IntegralMethod::Auto;
  double error_estimate = 0.0;  // absolute error on I; three standard errors for Monte Carlo

  double log_ratio() const { return value_log - log_full_beta; }
  double ratio() const;
};

/// B_eps(alphas). Auto picks the incomplete-beta form for k = 2, nested
/// quadrature for k = 3 and rejection Monte Carlo for k >= 4.
TruncatedDirichletIntegral b_trunc(std::span<const double> alphas, double eps,
                                   const numeric::QuadratureSettings& quad = {},
                                   IntegralMethod method = IntegralMethod::Auto,
                                   const MonteCarloSettings& mc = {});

/// Retained mass I_eps(alphas) = B_eps / B, in (0, 1].
double i_trunc(std::span<const double> alphas, double eps,
               const numeric::QuadratureSettings& quad = {});
double log_i_trunc(std::span<const double> alphas, double eps,
                   const numeric::QuadratureSettings& quad = {});

/// Probability mass of Dirichlet(alphas) inside and outside D_eps, computed
/// by conditioning on theta_1 (Beta marginal) and recursing on the rescaled
/// remainder. Both halves are kept so small tails retain relative accuracy.
struct MassSplit {
  double inside = 1.0;
  double outside = 0.0;
  double error = 0.0;
};
MassSplit dirichlet_mass(std::span<const double> alphas, double eps,
                         const numeric::QuadratureSettings& quad = {});

// ---------------------------------------------------------------------------
// Inequality checks. Each single check returns lhs, rhs and the allowed
// slack; `violation` is lhs - rhs - slack for inequalities and
// |relative difference| - tolerance for identities, so a check holds iff
// violation <= 0.

struct LemmaTrial {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double violation = 0.0;
  bool holds() const { return violation <= 0.0; }
};

/// Named coordinates of the worst trial.
using Witness = std::vector<std::pair<std::string, double>>;

struct LemmaReport {
  std::string lemma;
  int trials = 0;
  double max_violation = -std::numeric_limits<double>::infinity();
  Witness witness;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> tolerances;
  int failures = 0;
  /// Per-part summaries for suites that check more than one statement.
  std::vector<std::pair<std::string, double>> parts;
  bool passed() const { return failures == 0; }
};

/// Slack multiplier applied to integrator error estimates.
inline constexpr double kSlackFactor = 10.0;
/// Relative tolerance for exact identities.
inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Alternating-series bounds on ln(1+x): one trial per grid point, worst kept.
LemmaReport lemma1_check(int m, std::span<const double> x_grid);
LemmaTrial lemma1_trial(int m, double x);

/// I(a_1 + 1, a_2..a_k) - I(a) <= Gamma(sum a) / (Gamma(a_1 + 1) Gamma(sum_{i>=2} a_i))
///                                  * eps^a_1 (1 - eps)^(sum_{i>=2} a_i).
LemmaTrial lemma4_check(std::span<const double> alphas, double eps,
                        const numeric::QuadratureSettings& quad = {});

/// The truncated Beta mean is monotone in the window: for s <= u, t <= v,
/// B_[s,t](a+1,b)/B_[s,t](a,b) <= B_[u,v](a+1,b)/B_[u,v](a,b).
LemmaTrial lemma5_check(double alpha, double beta, double s, double t, double u, double v,
                        const numeric::QuadratureSettings& quad = {});

/// B_eps(a_1 + 1, ...)/B_eps(a) <= B_[eps,1](a_1 + 1, rest)/B_[eps,1](a_1, rest).
LemmaTrial lemma6_check(std::span<const double> alphas, double eps,
                        const numeric::QuadratureSettings& quad = {});

/// Collapsing the Dirichlet-multinomial to its first coordinate: both sides
/// in log space, violation measured as relative difference - 1e-10.
LemmaTrial lemma7_check(std::span<const double> alphas, int N, int x1);

/// Truncated Beta mean identity and its linear upper bound. Returns
/// {identity trial, bound trial}.
std::pair<LemmaTrial, LemmaTrial> lemma8_check(double alpha, double beta, double eps,
                                               const numeric::QuadratureSettings& quad = {});

/// Seeded randomized suites (500 draws each by default).
LemmaReport lemma1_suite(int trials, std::uint64_t seed);
LemmaReport lemma4_suite(int trials, std::uint64_t seed, const numeric::QuadratureSettings& quad = {});
LemmaReport lemma5_suite(int trials, std::uint64_t seed, const numeric::QuadratureSettings& quad = {});
LemmaReport lemma6_suite(int trials, std::uint64_t seed, const numeric::QuadratureSettings& quad = {});
/// Sweeps k in {2,3,4}, N in [0, max_N], every x_1, random alphas.
LemmaReport lemma7_suite(int trials, std::uint64_t seed, int max_N = 20);
LemmaReport lemma8_suite(int trials, std::uint64_t seed, const numeric::QuadratureSettings& quad = {});

/// Dispatch by lemma number (1, 4, 5, 6, 7, 8).
LemmaReport run_lemma_suite(int lemma, int trials, std::uint64_t seed,
                            const numeric::QuadratureSettings& quad = {});

/// Bayes risk (under the truncated symmetric prior) of the untruncated
/// predictive minus that of the truncated predictive. Nonnegative because the
/// truncated predictive is the Bayes rule for that prior.
double theorem2_gap(const SymmetricPrior& alpha, const TruncatedSimplex& trunc,
                    const ModelSpec& model, const numeric::QuadratureSettings& quad = {},
                    const MonteCarloSettings& mc = {});

}  // namespace mmn::simplex
