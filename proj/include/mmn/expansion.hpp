#pragma once

// Four-order asymptotic expansion of the prediction risk of a Dirichlet
// predictive, its specializations, and residual profiles against the exact risk.

#include <string>
#include <vector>

#include "mmn/exact_risk.hpp"
#include "mmn/model.hpp"
#include "mmn/separable_search.hpp"

namespace mmn {

/// Theorem1 keeps every term of the N^-3 and N^-4 coefficients. Corollary1
/// keeps only the theta^-2 part at N^-3 and the theta^-3 part at N^-4, which
/// are the pieces that stay o(N^-2) relevant when N^(3/4) eps_N -> inf.
enum class ExpansionForm { Theorem1, Corollary1 };
std::string expansion_form_name(ExpansionForm f);
ExpansionForm parse_expansion_form(const std::string& s);

struct ExpansionTerms {
  double t1 = 0.0;  // (k-1)/(2N)
  double t2 = 0.0;
  double t3 = 0.0;
  double t4 = 0.0;
  int truncation_order = 4;

  double term(int order) const;
  /// t1 + ... + t_{truncation_order}.
  double sum() const;
};

/// One row of the coefficient table: c * poly(a_i) / (denominator * theta_i^theta_power)
/// summed over i and divided by N^order.
struct CoordinateCoefficient {
  int order;
  int theta_power;
  double poly[5];  // ascending powers of a_i
  double denominator;
  bool in_corollary1;
};
/// The a-free part of each order: poly(A) + k_coef * k + constant, over N^order.
struct ConstantCoefficient {
  int order;
  double poly[5];  // ascending powers of A
  double k_coef;
  double constant;
  bool in_corollary1;
};

extern const CoordinateCoefficient kCoordinateTable[6];
extern const ConstantCoefficient kConstantTable[3];

ExpansionTerms theorem1_expansion(const PriorSpec& prior, const ModelSpec& model, const ThetaPoint& theta,
                                  ExpansionForm form = ExpansionForm::Theorem1);

/// The expansion for the symmetric prior with alpha = 1 + 1/sqrt(6).
ExpansionTerms corollary2_expansion(int k, int N, const ThetaPoint& theta);

/// Separable pieces of the expansion: coordinate i's share (orders 2..order)
/// and the a-free part (including t1).
double expansion_coordinate(const PriorSpec& prior, std::size_t i, int N, double theta_i, int order,
                            ExpansionForm form);
double expansion_constant(const PriorSpec& prior, int N, int order, ExpansionForm form);

/// (1/24) / (N^2 eps).
double jeffreys_lower_bound(int k, int N, double eps);
/// (eps, (1-eps)/(k-1), ..., (1-eps)/(k-1)).
std::vector<double> jeffreys_witness(int k, double eps);

struct IdentityCheck {
  std::string name;
  int k = 0;  // 0 when the identity does not involve k
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_error = 0.0;
  bool passed = false;
};
struct IdentityReport {
  double tolerance = 1e-13;
  std::vector<IdentityCheck> checks;
  bool passed() const;
};

/// The algebraic facts about alpha_hat behind its risk expansion, the last one
/// for k = 2..8.
IdentityReport alpha_hat_identities(double tolerance = 1e-13);

struct ExpansionErrorRow {
  int N = 0;
  double eps = 0.0;
  double sup_abs_residual = 0.0;
  double scaled_residual = 0.0;
  std::vector<double> argmax_theta;
};

struct ExpansionErrorProfile {
  int truncation_order = 4;
  ExpansionForm form = ExpansionForm::Theorem1;
  std::vector<ExpansionErrorRow> rows;
};

/// Residual scale: N^2 in Corollary1 form; N^5 eps^4 for the full order-4
/// expansion; N^(m+1) for a full expansion truncated at order m < 4.
double residual_scale(int N, double eps, int truncation_order, ExpansionForm form);

/// For each N, sup over the truncated simplex of |exact risk - truncated
/// expansion|, found by running the separable search on both signs of the
/// difference.
ExpansionErrorProfile expansion_error_profile(const PriorSpec& prior, const EpsilonSchedule& schedule,
                                              const std::vector<int>& N_list, int truncation_order,
                                              ExpansionForm form = ExpansionForm::Theorem1,
                                              const SearchSettings& search = {});

std::string expansion_csv_header();
std::string to_csv_row(const ExpansionErrorRow& row);

}  // namespace mmn
