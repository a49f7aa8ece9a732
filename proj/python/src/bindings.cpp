#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "granular/clustering.hpp"
#include "granular/error.hpp"
#include "granular/information_table.hpp"
#include "granular/random.hpp"
#include "granular/rough_set.hpp"
#include "granular/serialization.hpp"
#include "granular/som.hpp"
#include "granular/sonfis.hpp"

namespace py = pybind11;
using namespace granular;

namespace {

InformationTable table_from_csv(const std::string& text, const std::optional<std::string>& schema_json) {
    std::istringstream in(text);
    const auto raw = read_csv(in);
    const Schema schema = schema_json ? Json::parse(*schema_json).get<Schema>() : infer_schema(raw);
    return encode_categorical(raw, schema);
}

InformationTable table_from_rows(const std::vector<std::string>& names, const std::vector<Vector>& rows,
                                 const Vector& decisions, const std::string& decision_name) {
    Schema s;
    for (const auto& n : names) s.attributes.push_back(AttributeSpec::numeric(n));
    s.decision = AttributeSpec::numeric(decision_name);
    return InformationTable(std::move(s), rows, decisions);
}

std::string table_to_csv(const InformationTable& t) {
    std::ostringstream out;
    write_csv(t, out);
    return out.str();
}

std::vector<std::size_t> resolve(const InformationTable& t, const std::vector<std::string>& names) {
    std::vector<std::size_t> out;
    for (const auto& n : names) {
        const auto i = t.attribute_index(n);
        if (!i) fail(ErrorCode::unknown_attribute, "no attribute named '" + n + "'");
        out.push_back(*i);
    }
    return out;
}

py::dict evaluation_dict(const Evaluation& ev) {
    py::list predictions;
    for (const auto& c : ev.predictions)
        predictions.append(py::dict(py::arg("decision") = c.decision, py::arg("fired_rules") = c.fired_rules,
                                    py::arg("default") = c.default_fired));
    return py::dict(py::arg("accuracy") = ev.accuracy, py::arg("classes") = ev.classes,
                    py::arg("confusion") = ev.confusion, py::arg("predictions") = predictions);
}

}  // namespace

PYBIND11_MODULE(_granular, m) {
    m.doc() = "Rough-set reducts and rules, SOM discretization and SONFIS-R neuro-fuzzy search";

    static py::exception<Error> granular_error(m, "GranularError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(granular_error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
        } catch (const Json::exception& e) {
            py::set_error(granular_error, (std::string("ParseError: ") + e.what()).c_str());
        }
    });

    py::class_<InformationTable>(m, "Table")
        .def_static("from_csv", &table_from_csv, py::arg("text"), py::arg("schema_json") = std::nullopt,
                    "Parse CSV text; the last column is the decision.")
        .def_static("from_rows", &table_from_rows, py::arg("attribute_names"), py::arg("rows"), py::arg("decisions"),
                    py::arg("decision_name") = "decision")
        .def_property_readonly("n_objects", &InformationTable::n_objects)
        .def_property_readonly("n_attributes", &InformationTable::n_attributes)
        .def_property_readonly("attribute_names", &InformationTable::attribute_names)
        .def_property_readonly("decision_name", [](const InformationTable& t) { return t.decision().name; })
        .def_property_readonly("rows", &InformationTable::conditions)
        .def_property_readonly("decisions", &InformationTable::decisions)
        .def_property_readonly("ids", &InformationTable::ids)
        .def("column", &InformationTable::column)
        .def("select", [](const InformationTable& t, const std::vector<std::size_t>& o) { return t.select(o); })
        .def("to_csv", &table_to_csv)
        .def("schema_json", [](const InformationTable& t) { return Json(t.schema()).dump(); })
        .def("split", [](const InformationTable& t, std::size_t n_train, std::uint64_t seed) {
            return split_train_test(t, {n_train, seed});
        }, py::arg("n_train") = 21, py::arg("seed") = 42)
        .def("__len__", &InformationTable::n_objects);

    m.def("generate_synthetic", &generate_synthetic, py::arg("n_rows") = 30, py::arg("seed") = 42);
    m.def("synthetic_sensitive_attributes", &synthetic_sensitive_attributes);
    m.def("derive_seed", [](std::uint64_t master, const std::string& stream, std::uint64_t index) {
        return derive_seed(master, stream, index);
    }, py::arg("master"), py::arg("stream"), py::arg("index") = 0);

    py::class_<TableDiscretizer>(m, "Discretizer")
        .def_readonly("n_categories", &TableDiscretizer::n_categories)
        .def("apply", &TableDiscretizer::apply)
        .def("to_json", [](const TableDiscretizer& d) { return Json(d).dump(); })
        .def_static("from_json", [](const std::string& s) { return Json::parse(s).get<TableDiscretizer>(); });
    m.def("fit_discretizer", &fit_table_discretizer, py::arg("table"), py::arg("n_categories") = 3,
          py::arg("seed") = 0);
    m.def("discretize_attribute", [](const Vector& column, std::size_t n, std::uint64_t seed) {
        return discretize_attribute(column, n, seed);
    }, py::arg("column"), py::arg("n_categories") = 3, py::arg("seed") = 0);

    m.def("indiscernibility", [](const InformationTable& t, const std::vector<std::string>& attrs) {
        return indiscernibility(t, resolve(t, attrs)).blocks;
    });
    m.def("lower_approximation", [](const InformationTable& t, const std::vector<std::string>& attrs,
                                    const std::vector<std::size_t>& target) {
        return lower_approx(t, resolve(t, attrs), target);
    });
    m.def("upper_approximation", [](const InformationTable& t, const std::vector<std::string>& attrs,
                                    const std::vector<std::size_t>& target) {
        return upper_approx(t, resolve(t, attrs), target);
    });
    m.def("discernibility_function", [](const InformationTable& t) {
        const auto names = t.attribute_names();
        return discernibility_function(discernibility_matrix(t)).to_string(names);
    });
    m.def("johnson_reduct", [](const InformationTable& t) {
        const auto names = t.attribute_names();
        std::vector<std::string> out;
        for (auto a : johnson_reduct(discernibility_matrix(t)).attributes) out.push_back(names[a]);
        return out;
    }, "Attribute names of the greedy reduct.");
    m.def("all_reducts", [](const InformationTable& t) {
        const auto names = t.attribute_names();
        std::vector<std::vector<std::string>> out;
        for (const auto& r : all_reducts(discernibility_matrix(t))) {
            out.emplace_back();
            for (auto a : r.attributes) out.back().push_back(names[a]);
        }
        return out;
    });

    py::class_<RuleSet>(m, "RuleSet")
        .def_property_readonly("default_decision", [](const RuleSet& r) { return r.default_decision; })
        .def("__len__", [](const RuleSet& r) { return r.rules.size(); })
        .def("text", &format_rules)
        .def("to_json", [](const RuleSet& r) { return Json(r).dump(); })
        .def_static("from_json", [](const std::string& s) { return Json::parse(s).get<RuleSet>(); })
        .def_static("parse", [](const std::string& text, const std::vector<std::string>& names,
                                const std::string& decision) { return parse_rules(text, names, decision); })
        .def("classify", [](const RuleSet& r, const Vector& row) {
            const auto c = classify(r, row);
            return py::dict(py::arg("decision") = c.decision, py::arg("fired_rules") = c.fired_rules,
                            py::arg("default") = c.default_fired);
        });
    m.def("induce_rules", [](const InformationTable& t, const std::vector<std::string>& reduct) {
        Reduct r;
        r.attributes = resolve(t, reduct);
        std::sort(r.attributes.begin(), r.attributes.end());
        return induce_rules(t, r);
    });
    m.def("evaluate", [](const RuleSet& r, const InformationTable& t) { return evaluation_dict(evaluate(r, t)); });

    m.def("subtractive_cluster", [](const std::vector<Vector>& data, double radius, std::optional<std::size_t> max_clusters) {
        SubtractiveConfig c;
        c.radius = radius;
        const auto s = subtractive_cluster(data, c, max_clusters.value_or(data.size()));
        return py::dict(py::arg("centers") = s.centers, py::arg("indices") = s.indices,
                        py::arg("potentials") = s.potentials);
    }, py::arg("data"), py::arg("radius") = 0.5, py::arg("max_clusters") = std::nullopt);

    m.def("mse", [](const Vector& p, const Vector& t) { return mse(p, t); });

    py::class_<SonfisResult>(m, "SonfisResult")
        .def_property_readonly("trace", [](const SonfisResult& r) {
            py::list out;
            for (const auto& t : r.trace)
                out.append(py::dict(py::arg("step") = t.step, py::arg("n_neurons") = t.n_neurons,
                                    py::arg("n_rules_requested") = t.n_rules_requested,
                                    py::arg("n_rules") = t.n_rules, py::arg("mse") = t.mse));
            return out;
        })
        .def_property_readonly("best", [](const SonfisResult& r) {
            return py::dict(py::arg("step") = r.best.step, py::arg("n_neurons") = r.best.n_neurons,
                            py::arg("n_rules") = r.best.n_rules, py::arg("mse") = r.best.mse);
        })
        .def_readonly("input_names", &SonfisResult::input_names)
        .def_readonly("input_means", &SonfisResult::input_means)
        .def("predict", [](const SonfisResult& r, const Vector& x) { return forward(r.best.tsk, x); })
        .def("tsk_rules", [](const SonfisResult& r) { return format_tsk_rules(r.best.tsk); })
        .def("surface", [](const SonfisResult& r, const std::string& a, const std::string& b, std::size_t grid) {
            const auto find = [&](const std::string& n) {
                const auto it = std::find(r.input_names.begin(), r.input_names.end(), n);
                if (it == r.input_names.end()) fail(ErrorCode::unknown_attribute, "no input named '" + n + "'");
                return static_cast<std::size_t>(it - r.input_names.begin());
            };
            std::vector<std::tuple<double, double, double>> out;
            for (const auto& p : response_surface(r.best.tsk, find(a), find(b), grid, r.input_means))
                out.emplace_back(p.x_i, p.x_j, p.z);
            return out;
        }, py::arg("attr_i"), py::arg("attr_j"), py::arg("grid_n") = 25)
        .def("to_json", [](const SonfisResult& r) { return Json(r).dump(); })
        .def_static("from_json", [](const std::string& s) { return Json::parse(s).get<SonfisResult>(); });

    m.def("run_sonfis_r", [](const InformationTable& train, const InformationTable& test, std::size_t granule_min,
                             std::size_t granule_max, std::size_t max_rules, std::size_t iterations,
                             std::size_t epochs, double learning_rate, std::size_t som_epochs, double radius,
                             std::uint64_t seed, std::size_t threads) {
        SonfisConfig c;
        c.granule_min = granule_min;
        c.granule_max = granule_max;
        c.max_rules = max_rules;
        c.iterations_per_rule_count = iterations;
        c.nfis_epochs = epochs;
        c.learning_rate = learning_rate;
        c.som_epochs = som_epochs;
        c.clustering.radius = radius;
        c.seed = seed;
        c.threads = threads;
        py::gil_scoped_release release;
        return run_sonfis_r(train, test, c);
    }, py::arg("train"), py::arg("test"), py::arg("granule_min") = 5, py::arg("granule_max") = 20,
       py::arg("max_rules") = 4, py::arg("iterations") = 15, py::arg("epochs") = 20, py::arg("learning_rate") = 0.01,
       py::arg("som_epochs") = 100, py::arg("radius") = 0.5, py::arg("seed") = 42, py::arg("threads") = 0);
}
