#include "mmn/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mmn/errors.hpp"
#include "mmn/simplex_integrals.hpp"

namespace mmn {

void ModelSpec::validate() const {
  if (k < 2) throw DomainError("ModelSpec: k must be at least 2");
  if (N < 0) throw DomainError("ModelSpec: N must be nonnegative");
}

PriorSpec::PriorSpec(std::vector<double> a) : a_(std::move(a)), A_(0.0) {
  if (a_.size() < 2) throw DomainError("PriorSpec: need at least two Dirichlet parameters");
  for (double ai : a_) {
    if (!(ai > 0.0) || !std::isfinite(ai))
      throw DomainError("PriorSpec: Dirichlet parameters must be positive and finite");
  }
  A_ = numeric::stable_sum(a_);
}

PriorSpec PriorSpec::symmetric(double alpha, int k) {
  if (k < 2) throw DomainError("PriorSpec: k must be at least 2");
  return PriorSpec(std::vector<double>(static_cast<std::size_t>(k), alpha));
}

bool PriorSpec::is_symmetric() const {
  return std::all_of(a_.begin(), a_.end(), [this](double v) { return v == a_.front(); });
}

void SymmetricPrior::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("SymmetricPrior: alpha must be positive");
  if (k < 2) throw DomainError("SymmetricPrior: k must be at least 2");
}

void TruncatedSimplex::validate() const {
  if (k < 2) throw DomainError("TruncatedSimplex: k must be at least 2");
  if (!(eps > 0.0 && eps * k < 1.0)) {
    std::ostringstream msg;
    msg << "TruncatedSimplex: need 0 < eps < 1/k, got eps=" << eps << " k=" << k;
    throw DomainError(msg.str());
  }
}

bool TruncatedSimplex::contains(std::span<const double> theta, double tol) const {
  if (theta.size() != static_cast<std::size_t>(k)) return false;
  if (std::abs(numeric::stable_sum(theta) - 1.0) > tol) return false;
  return std::all_of(theta.begin(), theta.end(), [&](double t) { return t >= eps - tol; });
}

void EpsilonSchedule::validate() const {
  if (!(c > 0.0)) throw DomainError("EpsilonSchedule: c must be positive");
  const double lower = mode == Mode::Theorem3 ? 1.0 / SymmetricPrior::minimax_alpha() : 0.0;
  const double upper = mode == Mode::Theorem1 ? 1.0 : 0.75;
  if (!(r > lower && r < upper)) {
    std::ostringstream msg;
    msg << "EpsilonSchedule: mode " << mode_name(mode) << " needs " << lower << " < r < " << upper
        << ", got r=" << r;
    throw DomainError(msg.str());
  }
}

TruncatedSimplex EpsilonSchedule::at(int k, int N) const {
  if (N < 1) throw DomainError("EpsilonSchedule: N must be positive");
  TruncatedSimplex t{k, eps(N)};
  t.validate();
  return t;
}

std::string EpsilonSchedule::mode_name(Mode m) {
  switch (m) {
    case Mode::Theorem1: return "THEOREM1";
    case Mode::Corollary1: return "COROLLARY1";
    case Mode::Theorem3: return "THEOREM3";
  }
  return "?";
}

EpsilonSchedule::Mode EpsilonSchedule::parse_mode(const std::string& s) {
  std::string u = s;
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (u == "THEOREM1") return Mode::Theorem1;
  if (u == "COROLLARY1") return Mode::Corollary1;
  if (u == "THEOREM3") return Mode::Theorem3;
  throw DomainError("EpsilonSchedule: unknown mode '" + s + "'");
}

void Observation::validate(const ModelSpec& model) const {
  if (x.size() != static_cast<std::size_t>(model.k))
    throw DomainError("Observation: expected k counts");
  if (std::any_of(x.begin(), x.end(), [](int v) { return v < 0; }))
    throw DomainError("Observation: counts must be nonnegative");
  if (std::accumulate(x.begin(), x.end(), 0) != model.N)
    throw DomainError("Observation: counts must sum to N");
}

namespace {

void check_label(const ModelSpec& model, OutcomeLabel y) {
  if (y.category >= static_cast<std::size_t>(model.k))
    throw DomainError("OutcomeLabel: category out of range");
}

}  // namespace

double predictive_density(const PriorSpec& prior, const ModelSpec& model, const Observation& x,
                          OutcomeLabel y) {
  model.validate();
  x.validate(model);
  check_label(model, y);
  if (prior.k() != model.k) throw DomainError("predictive_density: prior and model disagree on k");
  return (x.x[y.category] + prior.a(y.category)) / (model.N + prior.A());
}

double truncated_predictive_density(const SymmetricPrior& alpha, const TruncatedSimplex& trunc,
                                    const ModelSpec& model, const Observation& x, OutcomeLabel y,
                                    const numeric::QuadratureSettings& quad) {
  model.validate();
  alpha.validate();
  trunc.validate();
  x.validate(model);
  check_label(model, y);
  if (alpha.k != model.k || trunc.k != model.k)
    throw DomainError("truncated_predictive_density: k mismatch");

  std::vector<double> base(x.x.size());
  for (std::size_t i = 0; i < base.size(); ++i) base[i] = x.x[i] + alpha.alpha;
  std::vector<double> bumped = base;
  bumped[y.category] += 1.0;

  const double log_ratio = simplex::log_i_trunc(bumped, trunc.eps, quad) -
                           simplex::log_i_trunc(base, trunc.eps, quad);
  const double full = (x.x[y.category] + alpha.alpha) / (model.N + model.k * alpha.alpha);
  return full * std::exp(log_ratio);
}

double si_term(const PriorSpec& prior, const ModelSpec& model, double theta_i, std::size_t i) {
  if (!(theta_i > 0.0)) throw DomainError("si_term: theta_i must be positive");
  if (i >= static_cast<std::size_t>(prior.k())) throw DomainError("si_term: index out of range");
  return (prior.a(i) - prior.A() * theta_i) / (model.N * theta_i + prior.A() * theta_i);
}

}  // namespace mmn
