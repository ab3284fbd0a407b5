#pragma once

#include "json.hpp"

#include "mmn/model.hpp"
#include "mmn/simplex_integrals.hpp"

namespace mmn {

void to_json(nlohmann::json& j, const ModelSpec& m);
void from_json(const nlohmann::json& j, ModelSpec& m);

void to_json(nlohmann::json& j, const PriorSpec& p);
PriorSpec prior_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const SymmetricPrior& p);
void from_json(const nlohmann::json& j, SymmetricPrior& p);

void to_json(nlohmann::json& j, const TruncatedSimplex& t);
void from_json(const nlohmann::json& j, TruncatedSimplex& t);

void to_json(nlohmann::json& j, const EpsilonSchedule& s);
void from_json(const nlohmann::json& j, EpsilonSchedule& s);

namespace simplex {
/// {lemma, trials, max_violation, witness, seed, tolerances, failures, passed}
void to_json(nlohmann::json& j, const LemmaReport& r);
}  // namespace simplex

}  // namespace mmn
