#include "mmn/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mmn/compositions.hpp"
#include "mmn/errors.hpp"
#include "mmn/exact_risk.hpp"
#include "mmn/expansion.hpp"
#include "mmn/minimax.hpp"
#include "mmn/moments.hpp"
#include "mmn/serialization.hpp"
#include "mmn/simplex_integrals.hpp"

namespace mmn::cli {

namespace {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Artifact: one table plus metadata, rendered as CSV or JSON.

struct Artifact {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::pair<std::string, Json>> extras;
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;
  std::vector<CheckResult> checks;
  bool checks_enforced = true;

  bool failed() const {
    if (!checks_enforced) return false;
    for (const auto& c : checks)
      if (!c.passed) return true;
    return false;
  }
};

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) return csv_quote(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
    return csv_quote(s);
  }
  if (v.is_null()) return "";
  return csv_quote(v.dump());
}

// nlohmann writes non-finite doubles as null; keep them visible as strings.
Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

Json sanitize(const Json& v) {
  if (v.is_number_float()) return json_number(v.get<double>());
  if (v.is_array() || v.is_object()) {
    Json out = v;
    for (auto& e : out) e = sanitize(e);
    return out;
  }
  return v;
}

void render_csv(const Artifact& a, std::uint64_t seed, bool bits, std::ostream& os) {
  os << "# tool: " << kToolName << ' ' << kVersion << "\r\n";
  os << "# command: " << a.command << "\r\n";
  os << "# seed: " << seed << "\r\n";
  os << "# units: " << (bits ? "bits" : "nats") << "\r\n";
  for (const auto& [k, v] : a.params) os << "# param " << k << '=' << v << "\r\n";
  for (const auto& [k, v] : a.extras) os << "# " << k << ": " << csv_cell(v) << "\r\n";
  for (const auto& c : a.checks)
    os << "# check " << (c.passed ? "PASS" : "FAIL") << ": " << c.name << " value=" << format_number(c.value)
       << " threshold=" << format_number(c.threshold) << " (" << c.detail << ")\r\n";
  for (std::size_t i = 0; i < a.header.size(); ++i) os << (i ? "," : "") << a.header[i];
  os << "\r\n";
  for (const auto& row : a.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\r\n";
  }
}

void render_json(const Artifact& a, std::uint64_t seed, bool bits, std::ostream& os) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["command"] = a.command;
  j["seed"] = seed;
  j["units"] = bits ? "bits" : "nats";
  Json params = Json::object();
  for (const auto& [k, v] : a.params) params[k] = v;
  j["params"] = params;
  for (const auto& [k, v] : a.extras) j[k] = sanitize(v);
  Json rows = Json::array();
  for (const auto& row : a.rows) {
    Json r = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[a.header[i]] = sanitize(row[i]);
    rows.push_back(r);
  }
  j["rows"] = rows;
  Json checks = Json::array();
  for (const auto& c : a.checks)
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", json_number(c.value)},
                      {"threshold", json_number(c.threshold)},
                      {"detail", c.detail}});
  j["checks"] = checks;
  os << j.dump(2) << '\n';
}

Json vec_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

// ---------------------------------------------------------------------------
// Option handling

struct Common {
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = simplex::kDefaultSeed;
  int threads = 0;
  bool threads_given = false;
  bool bits = false;
};

std::string join_results(const CLI::Option* opt) {
  const auto& res = opt->results();
  std::string s;
  for (std::size_t i = 0; i < res.size(); ++i) s += (i ? "," : "") + res[i];
  return s;
}

// Every option of the subcommand, given or defaulted, in declaration order.
std::vector<std::pair<std::string, std::string>> echo_params(const CLI::App* sub) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help") continue;
    std::string value;
    if (opt->get_expected_max() == 0)
      value = opt->count() > 0 ? "true" : "false";
    else if (opt->count() > 0)
      value = join_results(opt);
    else
      value = opt->get_default_str();
    // Containers default to "[a,b]" or "{}"; echo them in the form --opt accepts.
    if (value == "{}") value.clear();
    if (value.size() >= 2 && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
    out.emplace_back(name, value);
  }
  return out;
}

int resolve_thread_option(const Common& c) {
  if (c.threads_given) {
    if (c.threads < 0) throw DomainError("--threads must be nonnegative");
    return c.threads;
  }
  if (const char* env = std::getenv(kThreadsEnv); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0) throw DomainError(std::string(kThreadsEnv) + " must be a nonnegative integer");
    return static_cast<int>(v);
  }
  return 0;
}

struct PriorArgs {
  double alpha = SymmetricPrior::minimax_alpha();
  std::vector<double> a;
};

PriorSpec make_prior(const PriorArgs& p, int k, const CLI::Option* a_opt) {
  if (a_opt->count() > 0) {
    if (static_cast<int>(p.a.size()) != k) throw DomainError("--a needs exactly k values");
    return PriorSpec(p.a);
  }
  SymmetricPrior{p.alpha, k}.validate();
  return PriorSpec::symmetric(p.alpha, k);
}

EpsilonSchedule make_schedule(double c, double r, const std::string& mode) {
  EpsilonSchedule s{c, r, EpsilonSchedule::parse_mode(mode)};
  s.validate();
  return s;
}

SearchSettings make_search(int grid, int starts, std::uint64_t seed, int threads) {
  SearchSettings s;
  s.grid_size = grid;
  s.starts = starts;
  s.seed = seed;
  s.threads = threads;
  return s;
}

std::string prior_label(const PriorSpec& p) {
  if (!p.is_symmetric()) return "custom";
  const double a = p.a(0);
  if (a == SymmetricPrior::kJeffreys) return "jeffreys";
  if (a == SymmetricPrior::kUniform) return "uniform";
  if (a == SymmetricPrior::minimax_alpha()) return "minimax";
  return "alpha=" + format_number(a);
}

const std::string kUnits = "Risks are Kullback-Leibler divergences in nats (--bits rescales by 1/ln 2).";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{std::string(kToolName) +
               ": exact and asymptotic KL prediction risk of Dirichlet-multinomial predictive densities. " + kUnits};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  Common common;
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", common.out, "Write the artifact to this file instead of standard output");
  app.add_option("--seed", common.seed, "Seed for every randomized search and Monte Carlo stream");
  auto* threads_opt = app.add_option("--threads", common.threads,
                                     std::string("Worker threads (0 = logical cores; env ") + kThreadsEnv + ")");
  app.add_flag("--bits", common.bits, "Report risks in bits instead of nats");

  std::function<Artifact(int)> action;  // argument: resolved thread count
  const double ln2 = std::numbers::ln2;
  auto unit = [&] { return common.bits ? 1.0 / ln2 : 1.0; };

  // risk -------------------------------------------------------------------
  auto* risk = app.add_subcommand(
      "risk",
      "Exact KL prediction risk of the Dirichlet predictive (x_i + a_i)/(N + A) at one parameter point, by full "
      "enumeration over outcomes and by the per-coordinate binomial decomposition. " + kUnits);
  struct {
    int k = 2, N = 1;
    PriorArgs prior;
    std::vector<double> theta;
    std::string method = "auto";
  } risk_args;
  risk->add_option("--k", risk_args.k, "Number of categories")->required();
  risk->add_option("--N", risk_args.N, "Sample size")->required();
  risk->add_option("--alpha", risk_args.prior.alpha, "Symmetric Dirichlet concentration")
      ->default_str(format_number(risk_args.prior.alpha));
  auto* risk_a = risk->add_option("--a", risk_args.prior.a, "Dirichlet parameters a_1..a_k")->delimiter(',');
  risk->add_option("--theta", risk_args.theta, "Parameter point (k values, or k-1 with the last inferred)")
      ->delimiter(',')
      ->required();
  risk->add_option("--method", risk_args.method, "auto | coordinatewise | enumeration | both")
      ->check(CLI::IsMember({"auto", "coordinatewise", "enumeration", "both"}));
  risk->callback([&] {
    action = [&](int) {
      const ModelSpec model{risk_args.k, risk_args.N};
      model.validate();
      const PriorSpec prior = make_prior(risk_args.prior, model.k, risk_a);
      const ThetaPoint theta = ThetaPoint::from(risk_args.theta, model.k);
      std::string method = risk_args.method;
      if (method == "auto") method = composition_count(model.N, model.k) <= kDefaultEnumerationCap ? "both" : "coordinatewise";
      Artifact a;
      a.header = {"method", "k", "N", "prior", "risk", "per_coordinate", "theta"};
      std::vector<RiskReport> reports;
      if (method != "enumeration") reports.push_back(risk_coordinatewise(prior, model, theta));
      if (method != "coordinatewise") reports.push_back(risk_enumeration(prior, model, theta));
      for (const auto& r : reports) {
        std::vector<double> per = r.per_coordinate;
        for (double& v : per) v *= unit();
        a.rows.push_back({risk_method_name(r.method), model.k, model.N, prior_label(prior),
                          json_number(r.exact_risk * unit()), vec_json(per), vec_json(r.theta)});
      }
      if (reports.size() == 2) {
        const double diff = std::abs(reports[0].exact_risk - reports[1].exact_risk);
        a.checks.push_back({"enumeration agrees with coordinatewise", diff <= 1e-12, diff, 1e-12, "absolute, nats"});
      }
      return a;
    };
  });

  // sup-risk ---------------------------------------------------------------
  auto* sup = app.add_subcommand(
      "sup-risk",
      "Supremum of the KL prediction risk over the truncated simplex {theta_i >= eps}, with the maximizing "
      "parameter and the search trace. " + kUnits);
  struct {
    int k = 2, N = 1024;
    PriorArgs prior;
    double eps = 0.0, c = 1.0, r = 0.73;
    int grid = 64, starts = 32;
    bool trace = false;
  } sup_args;
  sup->add_option("--k", sup_args.k, "Number of categories");
  sup->add_option("--N", sup_args.N, "Sample size");
  sup->add_option("--alpha", sup_args.prior.alpha, "Symmetric Dirichlet concentration")
      ->default_str(format_number(sup_args.prior.alpha));
  auto* sup_a = sup->add_option("--a", sup_args.prior.a, "Dirichlet parameters a_1..a_k")->delimiter(',');
  auto* sup_eps = sup->add_option("--eps", sup_args.eps, "Coordinate floor (overrides --c/--r)");
  sup->add_option("--c", sup_args.c, "Floor scale: eps = c N^-r");
  sup->add_option("--r", sup_args.r, "Floor decay exponent");
  sup->add_option("--grid-size", sup_args.grid, "Tabulation points per one-dimensional family (>= 16)");
  sup->add_option("--starts", sup_args.starts, "Random starts for coordinate ascent");
  sup->add_flag("--trace", sup_args.trace, "Emit every evaluated configuration instead of the summary row");
  sup->callback([&] {
    action = [&](int threads) {
      const ModelSpec model{sup_args.k, sup_args.N};
      model.validate();
      const PriorSpec prior = make_prior(sup_args.prior, model.k, sup_a);
      const double eps = sup_eps->count() > 0 ? sup_args.eps : sup_args.c * std::pow(model.N, -sup_args.r);
      const TruncatedSimplex region{model.k, eps};
      region.validate();
      const auto rep = sup_risk(prior, model, region, sup_args.grid,
                                make_search(sup_args.grid, sup_args.starts, common.seed, threads));
      const double excess = rep.sup_value - (model.k - 1.0) / (2.0 * model.N);
      Artifact a;
      if (sup_args.trace) {
        a.extras.emplace_back("sup_risk", json_number(rep.sup_value * unit()));
        a.header = {"descriptor", "value"};
        for (const auto& t : rep.search_trace) a.rows.push_back({t.descriptor, json_number(t.value * unit())});
      } else {
        a.header = {"prior", "k", "N", "eps", "sup_risk", "excess_over_t1", "scaled_excess", "argmax_theta"};
        a.rows.push_back({prior_label(prior), model.k, model.N, json_number(eps), json_number(rep.sup_value * unit()),
                          json_number(excess * unit()),
                          json_number(static_cast<double>(model.N) * model.N * excess * unit()),
                          vec_json(rep.argmax_theta)});
      }
      return a;
    };
  });

  // compare-priors ---------------------------------------------------------
  auto* cmp = app.add_subcommand(
      "compare-priors",
      "Sup risk over the shrinking truncated simplex for several symmetric Dirichlet priors. Reproduces the "
      "negative N^-2 excess of alpha = 1 + 1/sqrt(6), -(k-1){1+(7+2 sqrt 6)k}/12, and the divergent "
      "(1/24)/(N^2 eps) excess of the Jeffreys prior. " + kUnits);
  struct {
    int k = 2;
    std::vector<int> N{256, 1024, 4096};
    double c = 1.0, r = 0.73;
    std::string mode = "corollary1";
    std::vector<std::string> priors{"jeffreys", "uniform", "minimax"};
    int grid = 64, starts = 32;
  } cmp_args;
  cmp->add_option("--k", cmp_args.k, "Number of categories");
  cmp->add_option("--N", cmp_args.N, "Sample sizes")->delimiter(',');
  cmp->add_option("--c", cmp_args.c, "Floor scale: eps = c N^-r");
  cmp->add_option("--r", cmp_args.r, "Floor decay exponent");
  cmp->add_option("--mode", cmp_args.mode, "Schedule regime: theorem1 | corollary1 | theorem3");
  cmp->add_option("--priors", cmp_args.priors, "jeffreys, uniform, minimax or numeric alphas")->delimiter(',');
  cmp->add_option("--grid-size", cmp_args.grid, "Tabulation points per one-dimensional family (>= 16)");
  cmp->add_option("--starts", cmp_args.starts, "Random starts for coordinate ascent");
  cmp->callback([&] {
    action = [&](int threads) {
      std::vector<LabeledPrior> priors;
      for (const auto& p : cmp_args.priors) priors.push_back(parse_labeled_prior(p));
      const auto schedule = make_schedule(cmp_args.c, cmp_args.r, cmp_args.mode);
      const auto rows = compare_priors(cmp_args.k, cmp_args.N, schedule, priors,
                                       make_search(cmp_args.grid, cmp_args.starts, common.seed, threads));
      Artifact a;
      a.header = {"prior_label", "alpha", "k", "N", "eps", "sup_risk", "excess_over_t1", "scaled_excess"};
      for (const auto& r : rows)
        a.rows.push_back({r.prior_label, json_number(r.alpha), r.k, r.N, json_number(r.eps),
                          json_number(r.sup_risk * unit()), json_number(r.excess_over_t1 * unit()),
                          json_number(r.scaled_excess * unit())});
      a.checks = compare_priors_checks(rows);
      return a;
    };
  });

  // sandwich ---------------------------------------------------------------
  auto* sand = app.add_subcommand(
      "sandwich",
      "Bracket around the minimax risk: lower = Bayes risk of the truncated alpha = 1 + 1/sqrt(6) prior under its "
      "own predictive, upper = sup risk of the untruncated predictive. Reproduces the o(N^-2) collapse claim as "
      "the trend of N^2 (upper - lower). " + kUnits);
  struct {
    int k = 2;
    std::vector<int> N{16, 32, 64};
    double c = 1.0, r = 0.73;
    int grid = 64, starts = 32;
  } sand_args;
  sand->add_option("--k", sand_args.k, "Number of categories (2 or 3)");
  sand->add_option("--N", sand_args.N, "Sample sizes (k=2: N <= 64, k=3: N <= 24)")->delimiter(',');
  sand->add_option("--c", sand_args.c, "Floor scale: eps = c N^-r");
  sand->add_option("--r", sand_args.r, "Floor decay exponent, in (1/alpha_hat, 3/4)");
  sand->add_option("--grid-size", sand_args.grid, "Tabulation points per one-dimensional family (>= 16)");
  sand->add_option("--starts", sand_args.starts, "Random starts for coordinate ascent");
  sand->callback([&] {
    action = [&](int threads) {
      const auto schedule = make_schedule(sand_args.c, sand_args.r, "theorem3");
      const auto rows = theorem3_sandwich(sand_args.k, sand_args.N, schedule, {},
                                          make_search(sand_args.grid, sand_args.starts, common.seed, threads));
      Artifact a;
      a.header = {"k", "N", "eps", "upper", "lower", "gap_scaled"};
      Json detail = Json::array();
      for (const auto& r : rows) {
        a.rows.push_back({r.k, r.N, json_number(r.eps), json_number(r.upper * unit()), json_number(r.lower * unit()),
                          json_number(r.gap_scaled * unit())});
        detail.push_back({{"N", r.N},
                          {"full_predictive_bayes_risk", json_number(r.full_bayes * unit())},
                          {"full_minus_upper_scaled", json_number(r.corollary3_scaled * unit())},
                          {"asymptotic_value", json_number(r.asymptotic * unit())}});
      }
      if (common.format == "json") a.extras.emplace_back("cross_check", detail);
      a.checks = sandwich_checks(rows);
      return a;
    };
  });

  // expansion-error --------------------------------------------------------
  auto* exp = app.add_subcommand(
      "expansion-error",
      "Sup over the truncated simplex of |exact risk - asymptotic expansion| truncated at a given order, with the "
      "residual scaled by N^5 eps^4 (full order 4), N^(m+1) (full order m), or N^2 (corollary1 form). " + kUnits);
  struct {
    int k = 2;
    PriorArgs prior;
    std::vector<int> N{256, 1024, 4096};
    double c = 1.0, r = 0.73;
    std::string mode = "corollary1";
    int order = 4;
    std::string form = "theorem1";
    int grid = 64, starts = 32;
  } exp_args;
  exp->add_option("--k", exp_args.k, "Number of categories");
  exp->add_option("--alpha", exp_args.prior.alpha, "Symmetric Dirichlet concentration")
      ->default_str(format_number(exp_args.prior.alpha));
  auto* exp_a = exp->add_option("--a", exp_args.prior.a, "Dirichlet parameters a_1..a_k")->delimiter(',');
  exp->add_option("--N", exp_args.N, "Increasing sample sizes")->delimiter(',');
  exp->add_option("--c", exp_args.c, "Floor scale: eps = c N^-r");
  exp->add_option("--r", exp_args.r, "Floor decay exponent");
  exp->add_option("--mode", exp_args.mode, "Schedule regime: theorem1 | corollary1 | theorem3");
  exp->add_option("--order", exp_args.order, "Truncation order 1..4")->check(CLI::Range(1, 4));
  exp->add_option("--form", exp_args.form, "theorem1 (all terms) | corollary1 (leading boundary terms)")
      ->check(CLI::IsMember({"theorem1", "corollary1"}));
  exp->add_option("--grid-size", exp_args.grid, "Tabulation points per one-dimensional family (>= 16)");
  exp->add_option("--starts", exp_args.starts, "Random starts for coordinate ascent");
  exp->callback([&] {
    action = [&](int threads) {
      const PriorSpec prior = make_prior(exp_args.prior, exp_args.k, exp_a);
      const auto schedule = make_schedule(exp_args.c, exp_args.r, exp_args.mode);
      const auto prof =
          expansion_error_profile(prior, schedule, exp_args.N, exp_args.order, parse_expansion_form(exp_args.form),
                                  make_search(exp_args.grid, exp_args.starts, common.seed, threads));
      Artifact a;
      a.header = {"N", "eps", "sup_abs_residual", "scaled_residual", "argmax_theta"};
      for (const auto& r : prof.rows)
        a.rows.push_back({r.N, json_number(r.eps), json_number(r.sup_abs_residual * unit()),
                          json_number(r.scaled_residual * unit()), vec_json(r.argmax_theta)});
      return a;
    };
  });

  // verify-lemmas ----------------------------------------------------------
  auto* lem = app.add_subcommand(
      "verify-lemmas",
      "Seeded randomized checks of the supporting inequalities: log(1+x) alternating bounds (1), the retained-mass "
      "increment bound (4), monotone truncated Beta means (5, 6), the Dirichlet-multinomial marginal identity (7) "
      "and the truncated Beta mean identity and bound (8). Violations are lhs - rhs - slack; <= 0 passes.");
  struct {
    std::vector<int> lemmas{1, 4, 5, 6, 7, 8};
    int trials = 500;
  } lem_args;
  lem->add_option("--lemma", lem_args.lemmas, "Lemma numbers among 1,4,5,6,7,8")->delimiter(',');
  lem->add_option("--trials", lem_args.trials, "Random draws per lemma")->check(CLI::PositiveNumber);
  lem->callback([&] {
    action = [&](int) {
      Artifact a;
      a.header = {"lemma", "trials", "failures", "max_violation", "passed", "seed", "witness", "tolerances"};
      Json reports = Json::array();
      for (int l : lem_args.lemmas) {
        const auto rep = simplex::run_lemma_suite(l, lem_args.trials, common.seed);
        std::string witness, tol;
        for (const auto& [k, v] : rep.witness) witness += (witness.empty() ? "" : ";") + k + "=" + format_number(v);
        for (const auto& [k, v] : rep.tolerances) tol += (tol.empty() ? "" : ";") + k + "=" + format_number(v);
        a.rows.push_back({rep.lemma, rep.trials, rep.failures, json_number(rep.max_violation), rep.passed(),
                          rep.seed, witness, tol});
        for (const auto& [k, v] : rep.parts) a.extras.emplace_back("lemma " + rep.lemma + " " + k, json_number(v));
        a.checks.push_back({"lemma " + rep.lemma + " holds on every draw", rep.passed(), rep.max_violation, 0.0,
                            "failures=" + std::to_string(rep.failures) + " witness: " + witness});
      }
      return a;
    };
  });

  // moments ----------------------------------------------------------------
  auto* mom = app.add_subcommand(
      "moments",
      "Binomial central moments mu_m(N, theta) = sum_i f_{m,i}(theta) (N theta)^i built exactly from the "
      "Romanovsky recurrence (integer coefficients checked), optional evaluation against pmf summation, and with "
      "--bounds the boundedness sweeps of |mu_{2l-1}|/(N theta)^(l-1), |mu_{2l}|/(N theta)^l and "
      "(N theta)^l E[-w^(2l+1)/(1+w)] over theta in [eps_N, 1].");
  struct {
    int m_max = 8;
    double N = 0.0, theta = 0.0;
    bool bounds = false;
    int l = 1;
    double a = 1.0, c = 1.0, r = 0.5;
    std::vector<int> N_list{64, 256, 1024, 4096};
  } mom_args;
  mom->add_option("--m-max", mom_args.m_max, "Highest order")->check(CLI::Range(2, 40));
  auto* mom_N = mom->add_option("--N", mom_args.N, "Evaluate at this N (with --theta)");
  auto* mom_theta = mom->add_option("--theta", mom_args.theta, "Evaluate at this theta (with --N)");
  mom->add_flag("--bounds", mom_args.bounds, "Run the boundedness sweeps instead");
  mom->add_option("--l", mom_args.l, "Index l of the bound sweeps")->check(CLI::NonNegativeNumber);
  mom->add_option("--a", mom_args.a, "Offset a in w = (x - N theta)/(N theta + a)");
  mom->add_option("--c", mom_args.c, "Floor scale: eps = c N^-r");
  mom->add_option("--r", mom_args.r, "Floor decay exponent, in (0, 1)");
  mom->add_option("--N-list", mom_args.N_list, "Increasing sample sizes for the sweeps")->delimiter(',');
  mom->callback([&] {
    action = [&](int) {
      Artifact a;
      if (mom_args.bounds) {
        const EpsilonSchedule schedule{mom_args.c, mom_args.r, EpsilonSchedule::Mode::Theorem1};
        schedule.validate();
        std::vector<moments::BoundReport> reports;
        if (mom_args.l >= 1) reports.push_back(moments::moment_ratio_bound_check(mom_args.l, schedule, mom_args.N_list));
        reports.push_back(moments::lemma3_bound_check(mom_args.l, mom_args.a, schedule, mom_args.N_list));
        a.header = {"quantity", "l", "N", "eps", "sup_value", "argmax_theta", "running_max"};
        for (const auto& rep : reports) {
          for (const auto& s : rep.series) {
            for (std::size_t n = 0; n < rep.N_list.size(); ++n)
              a.rows.push_back({s.quantity, rep.l, rep.N_list[n], json_number(rep.eps[n]), json_number(s.sup_values[n]),
                                json_number(s.argmax_theta[n]), json_number(s.running_max[n])});
            a.checks.push_back({s.quantity + " bounded across N", s.bounded, s.running_max.back(),
                                moments::kBoundGrowthFactor * s.first_half_max, "overall max vs 1.05 * first-half max"});
          }
        }
        return a;
      }
      const bool evaluate = mom_N->count() > 0 || mom_theta->count() > 0;
      if (evaluate && (mom_N->count() == 0 || mom_theta->count() == 0))
        throw DomainError("moments: --N and --theta go together");
      if (evaluate && (!(mom_args.theta >= 0.0 && mom_args.theta <= 1.0) || mom_args.N < 0 ||
                       mom_args.N != std::floor(mom_args.N)))
        throw DomainError("moments: need a nonnegative integer N and theta in [0, 1]");
      const auto polys = moments::moment_recurrence(mom_args.m_max);
      a.header = {"m", "all_integer", "value", "pmf_sum", "polynomial"};
      bool integral = true;
      double worst = 0.0;
      for (const auto& p : polys) {
        integral = integral && p.all_integer();
        Json value = nullptr, pmf = nullptr;
        if (evaluate) {
          const double v = p.evaluate(mom_args.N, mom_args.theta);
          const double s = moments::moment_pmf_sum(p.order(), static_cast<int>(mom_args.N), mom_args.theta);
          const double scale = std::max(1.0, moments::moment_pmf_sum(p.order() % 2 ? p.order() + 1 : p.order(),
                                                                     static_cast<int>(mom_args.N), mom_args.theta));
          worst = std::max(worst, std::abs(v - s) / scale);
          value = json_number(v);
          pmf = json_number(s);
        }
        a.rows.push_back({p.order(), p.all_integer(), value, pmf, p.to_string()});
      }
      a.checks.push_back({"all coefficients are integers", integral, integral ? 1.0 : 0.0, 1.0, "exact check"});
      if (evaluate)
        a.checks.push_back({"recurrence matches pmf summation", worst <= 1e-10, worst, 1e-10,
                            "relative to the next even absolute moment"});
      return a;
    };
  });

  // optimal-alpha ----------------------------------------------------------
  auto* opt = app.add_subcommand(
      "optimal-alpha",
      "Finite-N grid minimizer of the sup risk over symmetric Dirichlet priors, with the full curve, for comparison "
      "with the asymptotically minimax alpha = 1 + 1/sqrt(6). " + kUnits);
  struct {
    int k = 2, N = 2048;
    double c = 1.0, r = 0.73;
    std::string mode = "corollary1";
    std::vector<double> grid = default_alpha_grid();
    bool strict = false;
    int grid_size = 64, starts = 32;
  } opt_args;
  opt->add_option("--k", opt_args.k, "Number of categories");
  opt->add_option("--N", opt_args.N, "Sample size");
  opt->add_option("--c", opt_args.c, "Floor scale: eps = c N^-r");
  opt->add_option("--r", opt_args.r, "Floor decay exponent");
  opt->add_option("--mode", opt_args.mode, "Schedule regime: theorem1 | corollary1 | theorem3");
  opt->add_option("--alpha-grid", opt_args.grid, "Alpha values (must cover [0.5, 2.5])")->delimiter(',');
  opt->add_flag("--strict", opt_args.strict, "Exit 1 when alpha_star is farther than 0.2 from alpha_hat");
  opt->add_option("--grid-size", opt_args.grid_size, "Tabulation points per one-dimensional family (>= 16)");
  opt->add_option("--starts", opt_args.starts, "Random starts for coordinate ascent");
  opt->callback([&] {
    action = [&](int threads) {
      const auto schedule = make_schedule(opt_args.c, opt_args.r, opt_args.mode);
      const auto res = optimal_alpha_search(opt_args.k, opt_args.N, schedule, opt_args.grid,
                                            make_search(opt_args.grid_size, opt_args.starts, common.seed, threads));
      Artifact a;
      a.extras.emplace_back("alpha_star", json_number(res.alpha_star));
      a.extras.emplace_back("eps", json_number(res.eps));
      a.header = {"alpha", "sup_risk"};
      for (const auto& p : res.curve) a.rows.push_back({json_number(p.alpha), json_number(p.sup_risk * unit())});
      a.checks.push_back(optimal_alpha_check(res));
      a.checks_enforced = opt_args.strict;
      return a;
    };
  });

  // ------------------------------------------------------------------------
  auto error_json = [&](const std::string& kind, const std::string& message, Json extra = Json::object()) {
    Json j{{"error", kind}, {"message", message}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    err << j.dump() << '\n';
  };

  std::vector<std::string> argv_store{kToolName};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_json("invalid_arguments", e.what());
    return kInvalidArguments;
  } catch (const DomainError& e) {
    error_json("invalid_arguments", e.what());
    return kInvalidArguments;
  }
  common.threads_given = threads_opt->count() > 0;

  try {
    const int threads = resolve_thread_option(common);
    CLI::App* sub = app.get_subcommands().front();
    Artifact artifact = action(threads);
    artifact.command = sub->get_name();
    artifact.params = echo_params(sub);
    artifact.params.insert(artifact.params.begin(), {"format", common.format});

    std::ostringstream buffer;
    if (common.format == "json")
      render_json(artifact, common.seed, common.bits, buffer);
    else
      render_csv(artifact, common.seed, common.bits, buffer);
    if (common.out.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(common.out, std::ios::binary);
      if (!file) throw DomainError("cannot open output file '" + common.out + "'");
      file << buffer.str();
    }
    if (artifact.failed()) {
      Json failed = Json::array();
      for (const auto& c : artifact.checks)
        if (!c.passed) failed.push_back({{"name", c.name}, {"value", json_number(c.value)},
                                         {"threshold", json_number(c.threshold)}, {"detail", c.detail}});
      error_json("check_failed", "one or more checks failed", {{"failed", failed}});
      return kCheckFailed;
    }
    return kOk;
  } catch (const DomainError& e) {
    error_json("invalid_arguments", e.what());
    return kInvalidArguments;
  } catch (const SizeError& e) {
    error_json("invalid_arguments", e.what());
    return kInvalidArguments;
  } catch (const IntegrationError& e) {
    error_json("integration_error", e.what(), {{"achieved_error", json_number(e.achieved_error())}});
    return kCheckFailed;
  } catch (const InfeasibleRegionError& e) {
    error_json("infeasible_region", e.what(), {{"acceptance_rate", json_number(e.acceptance_rate())}});
    return kCheckFailed;
  } catch (const StatisticalError& e) {
    error_json("statistical_error", e.what(), {{"std_error", json_number(e.std_error())}});
    return kCheckFailed;
  } catch (const std::exception& e) {
    error_json("internal_error", e.what());
    return kCheckFailed;
  }
}

}  // namespace mmn::cli
