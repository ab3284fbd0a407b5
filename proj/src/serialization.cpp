#include "mmn/serialization.hpp"

#include "mmn/errors.hpp"

namespace mmn {

void to_json(nlohmann::json& j, const ModelSpec& m) { j = {{"k", m.k}, {"N", m.N}}; }

void from_json(const nlohmann::json& j, ModelSpec& m) {
  m.k = j.at("k").get<int>();
  m.N = j.at("N").get<int>();
  m.validate();
}

void to_json(nlohmann::json& j, const PriorSpec& p) {
  j = {{"a", std::vector<double>(p.a().begin(), p.a().end())}};
}

PriorSpec prior_from_json(const nlohmann::json& j) {
  if (j.contains("a")) return PriorSpec(j.at("a").get<std::vector<double>>());
  if (j.contains("alpha") && j.contains("k")) return PriorSpec::symmetric(j.at("alpha").get<double>(), j.at("k").get<int>());
  throw DomainError("prior JSON needs either \"a\" or both \"alpha\" and \"k\"");
}

void to_json(nlohmann::json& j, const SymmetricPrior& p) { j = {{"alpha", p.alpha}, {"k", p.k}}; }

void from_json(const nlohmann::json& j, SymmetricPrior& p) {
  p.alpha = j.at("alpha").get<double>();
  p.k = j.at("k").get<int>();
  p.validate();
}

void to_json(nlohmann::json& j, const TruncatedSimplex& t) { j = {{"k", t.k}, {"eps", t.eps}}; }

void from_json(const nlohmann::json& j, TruncatedSimplex& t) {
  t.k = j.at("k").get<int>();
  t.eps = j.at("eps").get<double>();
  t.validate();
}

void to_json(nlohmann::json& j, const EpsilonSchedule& s) {
  j = {{"c", s.c}, {"r", s.r}, {"mode", EpsilonSchedule::mode_name(s.mode)}};
}

void from_json(const nlohmann::json& j, EpsilonSchedule& s) {
  s.c = j.at("c").get<double>();
  s.r = j.at("r").get<double>();
  s.mode = EpsilonSchedule::parse_mode(j.at("mode").get<std::string>());
  s.validate();
}

namespace simplex {

void to_json(nlohmann::json& j, const LemmaReport& r) {
  nlohmann::json witness = nlohmann::json::object();
  for (const auto& [name, value] : r.witness) witness[name] = value;
  nlohmann::json tol = nlohmann::json::object();
  for (const auto& [name, value] : r.tolerances) tol[name] = value;
  j = {{"lemma", r.lemma},     {"trials", r.trials},     {"max_violation", r.max_violation},
       {"witness", witness},   {"seed", r.seed},         {"tolerances", tol},
       {"failures", r.failures}, {"passed", r.passed()}};
  if (!r.parts.empty()) {
    nlohmann::json parts = nlohmann::json::object();
    for (const auto& [name, value] : r.parts) parts[name] = value;
    j["parts"] = parts;
  }
}

}  // namespace simplex

}  // namespace mmn
