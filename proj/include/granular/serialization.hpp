#pragma once

// JSON forms of the library types (nlohmann::json ADL hooks).

#include <json.hpp>

#include "granular/anfis.hpp"
#include "granular/clustering.hpp"
#include "granular/information_table.hpp"
#include "granular/rough_set.hpp"
#include "granular/som.hpp"
#include "granular/sonfis.hpp"

namespace granular {

using Json = nlohmann::json;

void to_json(Json& j, const AttributeSpec& spec);
void from_json(const Json& j, AttributeSpec& spec);
void to_json(Json& j, const Schema& schema);
void from_json(const Json& j, Schema& schema);
void to_json(Json& j, const Normalization& normalization);
void from_json(const Json& j, Normalization& normalization);

Json table_to_json(const InformationTable& table);
InformationTable table_from_json(const Json& j);

void to_json(Json& j, const SomModel& model);
void from_json(const Json& j, SomModel& model);
void to_json(Json& j, const ScalarDiscretizer& d);
void from_json(const Json& j, ScalarDiscretizer& d);
void to_json(Json& j, const TableDiscretizer& d);
void from_json(const Json& j, TableDiscretizer& d);

void to_json(Json& j, const Reduct& reduct);
void to_json(Json& j, const DecisionRule& rule);
void from_json(const Json& j, DecisionRule& rule);
void to_json(Json& j, const RuleSet& rules);
void from_json(const Json& j, RuleSet& rules);

void to_json(Json& j, const SubtractiveConfig& config);
void from_json(const Json& j, SubtractiveConfig& config);
void to_json(Json& j, const ClusterSet& clusters);
void from_json(const Json& j, ClusterSet& clusters);

void to_json(Json& j, const TskModel& model);
void from_json(const Json& j, TskModel& model);

void to_json(Json& j, const SonfisConfig& config);
void from_json(const Json& j, SonfisConfig& config);
void to_json(Json& j, const IterationRecord& record);
void from_json(const Json& j, IterationRecord& record);
void to_json(Json& j, const SonfisResult& result);
void from_json(const Json& j, SonfisResult& result);

}  // namespace granular
