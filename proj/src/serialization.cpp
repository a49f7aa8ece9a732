#include "granular/serialization.hpp"

#include "granular/error.hpp"

namespace granular {

namespace {

template <typename T>
T get_field(const Json& j, const char* key) {
    if (!j.contains(key)) fail(ErrorCode::parse_error, std::string("JSON document lacks field '") + key + "'");
    return j.at(key).get<T>();
}

}  // namespace

void to_json(Json& j, const AttributeSpec& spec) {
    j = Json{{"name", spec.name}, {"kind", to_string(spec.kind)}};
    if (spec.kind == AttributeKind::categorical) {
        Json codes = Json::array();
        for (const auto& [label, code] : spec.codes) codes.push_back(Json{{"label", label}, {"code", code}});
        j["codes"] = std::move(codes);
    }
}

void from_json(const Json& j, AttributeSpec& spec) {
    spec.name = get_field<std::string>(j, "name");
    const auto kind = get_field<std::string>(j, "kind");
    if (kind == "numeric") {
        spec.kind = AttributeKind::numeric;
    } else if (kind == "categorical") {
        spec.kind = AttributeKind::categorical;
    } else {
        fail(ErrorCode::parse_error, "unknown attribute kind '" + kind + "'");
    }
    spec.codes.clear();
    if (j.contains("codes"))
        for (const auto& c : j.at("codes")) spec.codes.emplace_back(get_field<std::string>(c, "label"), get_field<int>(c, "code"));
    spec.validate();
}

void to_json(Json& j, const Schema& schema) {
    j = Json{{"attributes", schema.attributes}, {"decision", schema.decision}};
}

void from_json(const Json& j, Schema& schema) {
    schema.attributes = get_field<std::vector<AttributeSpec>>(j, "attributes");
    schema.decision = get_field<AttributeSpec>(j, "decision");
}

void to_json(Json& j, const Normalization& normalization) {
    j = Json::array();
    for (const auto& [lo, hi] : normalization.ranges) j.push_back(Json::array({lo, hi}));
}

void from_json(const Json& j, Normalization& normalization) {
    normalization.ranges.clear();
    for (const auto& r : j) {
        if (!r.is_array() || r.size() != 2) fail(ErrorCode::parse_error, "normalization entries are [min, max] pairs");
        normalization.ranges.emplace_back(r[0].get<double>(), r[1].get<double>());
        if (normalization.ranges.back().second < normalization.ranges.back().first)
            fail(ErrorCode::parse_error, "normalization max is below min");
    }
}

Json table_to_json(const InformationTable& table) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < table.n_objects(); ++r) {
        Json row(table.conditions()[r]);
        row.push_back(table.decision_value(r));
        rows.push_back(std::move(row));
    }
    return Json{{"attributes", table.attributes()}, {"decision", table.decision()}, {"ids", table.ids()},
                {"rows", std::move(rows)}};
}

InformationTable table_from_json(const Json& j) {
    Schema schema = j.get<Schema>();
    std::vector<Vector> conditions;
    Vector decisions;
    for (const auto& row : get_field<std::vector<Vector>>(j, "rows")) {
        if (row.size() != schema.attributes.size() + 1)
            fail(ErrorCode::missing_cell, "JSON row has " + std::to_string(row.size()) + " cells, expected " +
                                              std::to_string(schema.attributes.size() + 1));
        conditions.emplace_back(row.begin(), row.end() - 1);
        decisions.push_back(row.back());
    }
    std::vector<std::size_t> ids;
    if (j.contains("ids")) ids = j.at("ids").get<std::vector<std::size_t>>();
    return InformationTable(std::move(schema), std::move(conditions), std::move(decisions), std::move(ids));
}

void to_json(Json& j, const SomModel& model) {
    j = Json{{"input_dim", model.input_dim}, {"weights", model.weights}, {"normalization", model.normalization}};
}

void from_json(const Json& j, SomModel& model) {
    model.input_dim = get_field<std::size_t>(j, "input_dim");
    model.weights = get_field<std::vector<Vector>>(j, "weights");
    model.normalization = get_field<Normalization>(j, "normalization");
    if (model.normalization.size() != model.input_dim)
        fail(ErrorCode::dimension_mismatch, "SOM normalization does not match input_dim");
    for (const auto& w : model.weights)
        if (w.size() != model.input_dim) fail(ErrorCode::dimension_mismatch, "SOM weight has wrong length");
}

void to_json(Json& j, const ScalarDiscretizer& d) {
    j = Json{{"som", d.model}, {"order", d.order}};
}

void from_json(const Json& j, ScalarDiscretizer& d) {
    d.model = get_field<SomModel>(j, "som");
    d.order = get_field<std::vector<std::size_t>>(j, "order");
    if (d.order.size() != d.model.n_neurons()) fail(ErrorCode::parse_error, "discretizer order does not match SOM size");
}

void to_json(Json& j, const TableDiscretizer& d) {
    j = Json{{"n_categories", d.n_categories}, {"attribute_names", d.attribute_names}, {"attributes", d.attributes}};
    j["decision"] = d.decision ? Json(*d.decision) : Json(nullptr);
}

void from_json(const Json& j, TableDiscretizer& d) {
    d.n_categories = get_field<std::size_t>(j, "n_categories");
    d.attribute_names = get_field<std::vector<std::string>>(j, "attribute_names");
    d.attributes = get_field<std::vector<ScalarDiscretizer>>(j, "attributes");
    d.decision.reset();
    if (j.contains("decision") && !j.at("decision").is_null()) d.decision = j.at("decision").get<ScalarDiscretizer>();
}

void to_json(Json& j, const Reduct& reduct) { j = Json{{"attributes", reduct.attributes}}; }

void to_json(Json& j, const DecisionRule& rule) {
    Json descriptors = Json::array();
    for (const auto& d : rule.descriptors) descriptors.push_back(Json{{"attribute", d.attribute}, {"value", d.value}});
    j = Json{{"descriptors", std::move(descriptors)},
             {"decision", rule.decision},
             {"support", rule.support},
             {"accuracy", rule.accuracy}};
}

void from_json(const Json& j, DecisionRule& rule) {
    rule.descriptors.clear();
    for (const auto& d : get_field<Json>(j, "descriptors"))
        rule.descriptors.push_back({get_field<std::size_t>(d, "attribute"), get_field<int>(d, "value")});
    rule.decision = get_field<int>(j, "decision");
    rule.support = get_field<std::size_t>(j, "support");
    rule.accuracy = get_field<double>(j, "accuracy");
}

void to_json(Json& j, const RuleSet& rules) {
    j = Json{{"attribute_names", rules.attribute_names},
             {"decision_name", rules.decision_name},
             {"default_decision", rules.default_decision},
             {"rules", rules.rules}};
}

void from_json(const Json& j, RuleSet& rules) {
    rules.attribute_names = get_field<std::vector<std::string>>(j, "attribute_names");
    rules.decision_name = get_field<std::string>(j, "decision_name");
    rules.default_decision = get_field<int>(j, "default_decision");
    rules.rules = get_field<std::vector<DecisionRule>>(j, "rules");
}

void to_json(Json& j, const SubtractiveConfig& config) {
    j = Json{{"radius", config.radius},
             {"squash", config.squash},
             {"accept_ratio", config.accept_ratio},
             {"reject_ratio", config.reject_ratio}};
}

void from_json(const Json& j, SubtractiveConfig& config) {
    config.radius = get_field<double>(j, "radius");
    config.squash = get_field<double>(j, "squash");
    config.accept_ratio = get_field<double>(j, "accept_ratio");
    config.reject_ratio = get_field<double>(j, "reject_ratio");
    config.validate();
}

void to_json(Json& j, const ClusterSet& clusters) {
    j = Json{{"centers", clusters.centers},
             {"potentials", clusters.potentials},
             {"indices", clusters.indices},
             {"config", clusters.config}};
}

void from_json(const Json& j, ClusterSet& clusters) {
    clusters.centers = get_field<std::vector<Vector>>(j, "centers");
    clusters.potentials = get_field<Vector>(j, "potentials");
    clusters.indices = j.value("indices", std::vector<std::size_t>{});
    clusters.config = get_field<SubtractiveConfig>(j, "config");
}

void to_json(Json& j, const TskModel& model) {
    Json rules = Json::array();
    for (const auto& r : model.rules) {
        Json premises = Json::array();
        for (const auto& mf : r.premises) premises.push_back(Json{{"c", mf.center}, {"sigma", mf.sigma}});
        rules.push_back(Json{{"premises", std::move(premises)}, {"consequent", r.consequent}});
    }
    j = Json{{"input_dim", model.input_dim}, {"normalization", model.normalization}, {"rules", std::move(rules)}};
}

void from_json(const Json& j, TskModel& model) {
    model.input_dim = get_field<std::size_t>(j, "input_dim");
    model.normalization = get_field<Normalization>(j, "normalization");
    model.rules.clear();
    for (const auto& r : get_field<Json>(j, "rules")) {
        TskRule rule;
        for (const auto& mf : get_field<Json>(r, "premises"))
            rule.premises.push_back({get_field<double>(mf, "c"), get_field<double>(mf, "sigma")});
        rule.consequent = get_field<Vector>(r, "consequent");
        model.rules.push_back(std::move(rule));
    }
    model.validate();
}

void to_json(Json& j, const SonfisConfig& config) {
    j = Json{{"granule_min", config.granule_min},
             {"granule_max", config.granule_max},
             {"max_rules", config.max_rules},
             {"iterations_per_rule_count", config.iterations_per_rule_count},
             {"nfis_epochs", config.nfis_epochs},
             {"learning_rate", config.learning_rate},
             {"som_epochs", config.som_epochs},
             {"clustering", config.clustering},
             {"seed", config.seed}};
}

void from_json(const Json& j, SonfisConfig& config) {
    config.granule_min = get_field<std::size_t>(j, "granule_min");
    config.granule_max = get_field<std::size_t>(j, "granule_max");
    config.max_rules = get_field<std::size_t>(j, "max_rules");
    config.iterations_per_rule_count = get_field<std::size_t>(j, "iterations_per_rule_count");
    config.nfis_epochs = get_field<std::size_t>(j, "nfis_epochs");
    config.learning_rate = get_field<double>(j, "learning_rate");
    config.som_epochs = get_field<std::size_t>(j, "som_epochs");
    config.clustering = get_field<SubtractiveConfig>(j, "clustering");
    config.seed = get_field<std::uint64_t>(j, "seed");
}

void to_json(Json& j, const IterationRecord& record) {
    j = Json{{"step", record.step},
             {"n_neurons", record.n_neurons},
             {"n_rules_requested", record.n_rules_requested},
             {"n_rules", record.n_rules},
             {"mse", record.mse}};
}

void from_json(const Json& j, IterationRecord& record) {
    record.step = get_field<std::size_t>(j, "step");
    record.n_neurons = get_field<std::size_t>(j, "n_neurons");
    record.n_rules_requested = j.value("n_rules_requested", std::size_t{0});
    record.n_rules = get_field<std::size_t>(j, "n_rules");
    record.mse = get_field<double>(j, "mse");
}

void to_json(Json& j, const SonfisResult& result) {
    j = Json{{"config", result.config},
             {"trace", result.trace},
             {"input_names", result.input_names},
             {"input_means", result.input_means},
             {"best",
              Json{{"step", result.best.step},
                   {"n_neurons", result.best.n_neurons},
                   {"n_rules", result.best.n_rules},
                   {"mse", result.best.mse},
                   {"som", result.best.som},
                   {"tsk", result.best.tsk}}}};
}

void from_json(const Json& j, SonfisResult& result) {
    result.config = get_field<SonfisConfig>(j, "config");
    result.trace = get_field<std::vector<IterationRecord>>(j, "trace");
    result.input_names = j.value("input_names", std::vector<std::string>{});
    result.input_means = j.value("input_means", Vector{});
    const auto& b = get_field<Json>(j, "best");
    result.best.step = get_field<std::size_t>(b, "step");
    result.best.n_neurons = get_field<std::size_t>(b, "n_neurons");
    result.best.n_rules = get_field<std::size_t>(b, "n_rules");
    result.best.mse = get_field<double>(b, "mse");
    result.best.som = get_field<SomModel>(b, "som");
    result.best.tsk = get_field<TskModel>(b, "tsk");
}

}  // namespace granular
