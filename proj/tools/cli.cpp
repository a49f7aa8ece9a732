#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "granular/error.hpp"
#include "granular/random.hpp"
#include "granular/rough_set.hpp"
#include "granular/serialization.hpp"
#include "granular/som.hpp"
#include "granular/sonfis.hpp"

namespace granular::cli {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorCode::io_error, "SHA-256 computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io_error, "cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::io_error, "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) fail(ErrorCode::io_error, "short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        fail(ErrorCode::io_error, "cannot move output into '" + path.string() + "': " + ec.message());
    }
}

Json parse_json(const std::string& text, const std::string& path) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        fail(ErrorCode::parse_error, path + ": " + e.what());
    }
}

template <typename T>
T json_as(const Json& j, const std::string& path) {
    try {
        return j.get<T>();
    } catch (const Json::exception& e) {
        fail(ErrorCode::parse_error, path + ": " + e.what());
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        fail(ErrorCode::invalid_argument, source + " is not an unsigned integer: '" + text + "'");
    return v;
}

std::uint64_t resolve_seed(const std::string& flag) {
    if (!flag.empty()) return parse_seed(flag, "--seed");
    if (const char* env = std::getenv("GRANULAR_SEED"); env && *env) return parse_seed(env, "GRANULAR_SEED");
    return kDefaultSeed;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

// Collects the resolved invocation and the artifacts of one command, then
// writes them as manifest.json next to the outputs.
class Run {
public:
    Run(std::string command, std::string out_dir) : command_(std::move(command)), out_dir_(std::move(out_dir)) {}

    void flag(const std::string& name, const std::string& value) { flags_.emplace_back(name, value); }
    void flag(const std::string& name, std::size_t value) { flag(name, std::to_string(value)); }
    void seed(std::uint64_t s) {
        seed_ = s;
        flag("--seed", std::to_string(s));
    }

    void input(const std::string& path, const std::string& bytes) { inputs_.emplace_back(path, sha256_hex(bytes)); }

    void emit(const std::string& name, const std::string& content) {
        const fs::path path = fs::path(out_dir_) / name;
        write_atomic(path, content);
        outputs_.emplace_back(path.generic_string(), sha256_hex(content));
    }

    void finish() {
        Json argv = Json::array({command_});
        Json config = Json::object();
        for (const auto& [k, v] : flags_) {
            argv.push_back(k);
            argv.push_back(v);
            config[k.substr(2)] = v;
        }
        argv.push_back("--out");
        argv.push_back(out_dir_);
        Json inputs = Json::array();
        for (const auto& [p, d] : inputs_) inputs.push_back(Json{{"path", p}, {"sha256", d}});
        Json outputs = Json::array();
        for (const auto& [p, d] : outputs_) outputs.push_back(Json{{"path", p}, {"sha256", d}});
        Json manifest{{"command", command_}, {"argv", argv},     {"config", config},
                      {"inputs", inputs},    {"outputs", outputs}};
        manifest["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
        write_atomic(fs::path(out_dir_) / "manifest.json", manifest.dump(2) + "\n");
    }

private:
    std::string command_;
    std::string out_dir_;
    std::vector<std::pair<std::string, std::string>> flags_;
    std::optional<std::uint64_t> seed_;
    std::vector<std::pair<std::string, std::string>> inputs_;
    std::vector<std::pair<std::string, std::string>> outputs_;
};

// Without --schema, a `name.schema.json` next to `name.csv` is used when
// present, so tables written by this tool keep their category codes.
std::string sidecar_schema(const std::string& csv_path) {
    fs::path p(csv_path);
    if (p.extension() != ".csv") return {};
    p.replace_extension(".schema.json");
    return fs::exists(p) ? p.string() : std::string{};
}

InformationTable load_table_file(Run& run, const std::string& path, std::string schema_path) {
    const std::string text = read_file(path);
    run.input(path, text);
    if (schema_path.empty()) schema_path = sidecar_schema(path);
    std::optional<Schema> schema;
    if (!schema_path.empty()) {
        const std::string s = read_file(schema_path);
        run.input(schema_path, s);
        schema = json_as<Schema>(parse_json(s, schema_path), schema_path);
    }
    try {
        std::istringstream in(text);
        const RawTable raw = read_csv(in);
        return encode_categorical(raw, schema ? *schema : infer_schema(raw));
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

void emit_table(Run& run, const std::string& stem, const InformationTable& table) {
    std::ostringstream csv;
    write_csv(table, csv);
    run.emit(stem + ".csv", csv.str());
    run.emit(stem + ".schema.json", Json(table.schema()).dump(2) + "\n");
}

// ---- options ----------------------------------------------------------------

struct TableInput {
    std::string path;
    std::string schema;
};

struct SonfisOptions {
    std::string neuron_range = "5:20";
    std::size_t max_rules = 4;
    std::size_t iterations = 15;
    std::size_t epochs = 20;
    double learning_rate = 0.01;
    std::size_t som_epochs = 100;
    double radius = 0.5;
    std::size_t threads = 0;
};

void add_sonfis_options(CLI::App* app, SonfisOptions& o) {
    app->add_option("--neuron-range", o.neuron_range, "SOM size range MIN:MAX")->capture_default_str();
    app->add_option("--max-rules", o.max_rules, "largest rule count searched")->capture_default_str();
    app->add_option("--iterations", o.iterations, "close-open iterations per rule count")->capture_default_str();
    app->add_option("--epochs", o.epochs, "hybrid-learning epochs per model")->capture_default_str();
    app->add_option("--learning-rate", o.learning_rate, "premise learning rate")->capture_default_str();
    app->add_option("--som-epochs", o.som_epochs, "SOM training epochs")->capture_default_str();
    app->add_option("--radius", o.radius, "subtractive clustering radius")->capture_default_str();
    app->add_option("--threads", o.threads, "worker threads, 0 = all cores")->capture_default_str();
}

SonfisConfig resolve_sonfis(Run& run, const SonfisOptions& o, std::uint64_t seed) {
    SonfisConfig c;
    const auto colon = o.neuron_range.find(':');
    if (colon == std::string::npos) fail(ErrorCode::invalid_argument, "--neuron-range expects MIN:MAX");
    c.granule_min = parse_seed(o.neuron_range.substr(0, colon), "--neuron-range minimum");
    c.granule_max = parse_seed(o.neuron_range.substr(colon + 1), "--neuron-range maximum");
    c.max_rules = o.max_rules;
    c.iterations_per_rule_count = o.iterations;
    c.nfis_epochs = o.epochs;
    c.learning_rate = o.learning_rate;
    c.som_epochs = o.som_epochs;
    c.clustering.radius = o.radius;
    c.threads = o.threads;
    c.seed = seed;
    c.validate();
    c.clustering.validate();
    run.flag("--neuron-range", std::to_string(c.granule_min) + ":" + std::to_string(c.granule_max));
    run.flag("--max-rules", c.max_rules);
    run.flag("--iterations", c.iterations_per_rule_count);
    run.flag("--epochs", c.nfis_epochs);
    run.flag("--learning-rate", format_number(c.learning_rate));
    run.flag("--som-epochs", c.som_epochs);
    run.flag("--radius", format_number(c.clustering.radius));
    run.flag("--threads", c.threads);
    return c;
}

// ---- artifact writers -------------------------------------------------------

std::string rule_stats_csv(const RuleSet& rules) {
    std::ostringstream s;
    s << "rule,decision,support,accuracy,length\n";
    for (std::size_t k = 0; k < rules.rules.size(); ++k) {
        const auto& r = rules.rules[k];
        s << k << ',' << r.decision << ',' << r.support << ',' << format_number(r.accuracy) << ','
          << r.descriptors.size() << '\n';
    }
    return s.str();
}

void emit_reduct(Run& run, const InformationTable& table, const std::string& format, std::ostream& out,
                 RuleSet* rules_out = nullptr, Reduct* reduct_out = nullptr) {
    const auto matrix = discernibility_matrix(table);
    const auto reduct = johnson_reduct(matrix);
    if (reduct.attributes.empty())
        fail(ErrorCode::empty_reduct, "every object pair with different decisions is indiscernible; no reduct");
    const auto names = table.attribute_names();
    const auto function = discernibility_function(matrix);

    std::vector<std::string> reduct_names;
    for (auto a : reduct.attributes) reduct_names.push_back(names[a]);
    Json rj{{"attributes", reduct_names},
            {"indices", reduct.attributes},
            {"n_objects", table.n_objects()},
            {"n_clauses", function.clauses.size()},
            {"discernibility_function", function.to_string(names)}};
    run.emit("reduct.json", rj.dump(2) + "\n");

    const auto rules = induce_rules(table, reduct);
    if (format == "json")
        run.emit("rules.json", Json(rules).dump(2) + "\n");
    else
        run.emit("rules.txt", format_rules(rules));
    run.emit("rule_stats.csv", rule_stats_csv(rules));
    out << "reduct (" << reduct_names.size() << " of " << names.size() << "): " << join(reduct_names, ", ") << "\n";
    out << "rules: " << rules.rules.size() << "\n";
    if (rules_out) *rules_out = rules;
    if (reduct_out) *reduct_out = reduct;
}

void emit_classification(Run& run, const RuleSet& rules, const InformationTable& test, std::ostream& out) {
    const auto ev = evaluate(rules, test);
    std::ostringstream p;
    p << "object,actual,predicted,default,fired_rules\n";
    std::size_t n_default = 0;
    for (std::size_t o = 0; o < test.n_objects(); ++o) {
        const auto& c = ev.predictions[o];
        std::vector<std::string> fired;
        for (auto k : c.fired_rules) fired.push_back(std::to_string(k));
        p << o << ',' << format_number(test.decision_value(o)) << ',' << c.decision << ','
          << (c.default_fired ? 1 : 0) << ',' << join(fired, ";") << '\n';
        n_default += c.default_fired ? 1 : 0;
    }
    run.emit("predictions.csv", p.str());
    Json report{{"accuracy", ev.accuracy},   {"classes", ev.classes},       {"confusion", ev.confusion},
                {"n_objects", test.n_objects()}, {"n_default", n_default}};
    run.emit("report.json", report.dump(2) + "\n");
    out << "accuracy: " << format_number(ev.accuracy) << " (" << n_default << " of " << test.n_objects()
        << " by default rule)\n";
}

std::string trace_csv(const SonfisResult& r) {
    std::ostringstream s;
    s << "step,n_neurons,n_rules,mse\n";
    for (const auto& t : r.trace) s << t.step << ',' << t.n_neurons << ',' << t.n_rules << ',' << format_number(t.mse) << '\n';
    return s.str();
}

std::string membership_csv(const SonfisResult& r) {
    const auto& m = r.best.tsk;
    std::ostringstream s;
    s << "rule,input,attribute,center,sigma,center_raw,sigma_raw\n";
    for (std::size_t k = 0; k < m.rules.size(); ++k)
        for (std::size_t i = 0; i < m.input_dim; ++i) {
            const auto& mf = m.rules[k].premises[i];
            const auto [lo, hi] = m.normalization.ranges[i];
            const std::string name = i < r.input_names.size() ? r.input_names[i] : "in" + std::to_string(i + 1);
            s << k + 1 << ',' << i + 1 << ',' << csv_quote(name) << ',' << format_number(mf.center) << ','
              << format_number(mf.sigma) << ',' << format_number(lo + mf.center * (hi - lo)) << ','
              << format_number(mf.sigma * (hi - lo)) << '\n';
        }
    return s.str();
}

void emit_sonfis(Run& run, const SonfisResult& r, std::ostream& out) {
    run.emit("result.json", Json(r).dump(2) + "\n");
    run.emit("trace.csv", trace_csv(r));
    run.emit("membership.csv", membership_csv(r));
    run.emit("tsk_rules.txt", format_tsk_rules(r.best.tsk));
    out << "trace: " << r.trace.size() << " steps; best step " << r.best.step << ": " << r.best.n_neurons
        << " neurons, " << r.best.n_rules << " rules, test MSE " << format_number(r.best.mse) << "\n";
}

std::pair<std::size_t, std::size_t> surface_indices(const std::vector<std::string>& names, const std::string& spec) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos) fail(ErrorCode::invalid_argument, "--attrs expects NAME,NAME");
    const std::string a = spec.substr(0, comma);
    const std::string b = spec.substr(comma + 1);
    const auto find = [&](const std::string& n) {
        const auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end()) fail(ErrorCode::unknown_attribute, "model has no input named '" + n + "'");
        return static_cast<std::size_t>(it - names.begin());
    };
    const auto i = find(a);
    const auto j = find(b);
    if (i == j) fail(ErrorCode::invalid_argument, "surface needs two distinct attributes, got '" + a + "' twice");
    return {i, j};
}

void emit_surface(Run& run, const SonfisResult& r, std::size_t i, std::size_t j, std::size_t grid) {
    const auto points = response_surface(r.best.tsk, i, j, grid, r.input_means);
    std::ostringstream s;
    s << csv_quote(r.input_names[i]) << ',' << csv_quote(r.input_names[j]) << ",z\n";
    for (const auto& p : points) s << format_number(p.x_i) << ',' << format_number(p.x_j) << ',' << format_number(p.z) << '\n';
    run.emit("surface.csv", s.str());
}

std::pair<InformationTable, InformationTable> split_table(const InformationTable& t, std::size_t n_train,
                                                          std::uint64_t seed) {
    return split_train_test(t, SplitSpec{n_train, seed});
}

// ---- replay -----------------------------------------------------------------

int replay(const std::string& path, bool check, std::ostream& out, std::ostream& err) {
    const Json m = parse_json(read_file(path), path);
    const auto argv = json_as<std::vector<std::string>>(m.at("argv"), path);
    if (argv.empty() || argv.front() == "replay") fail(ErrorCode::invalid_argument, path + ": manifest has no command");
    const int code = run(argv, out, err);
    if (code != 0 || !check) return code;
    for (const auto& o : m.at("outputs")) {
        const auto p = o.at("path").get<std::string>();
        if (sha256_hex(read_file(p)) != o.at("sha256").get<std::string>())
            fail(ErrorCode::replay_mismatch, "'" + p + "' differs from the digest recorded in " + path);
    }
    out << "replay: " << m.at("outputs").size() << " artifacts match\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rough-set reducts, decision rules and SOM + neuro-fuzzy (SONFIS-R) models for tabular data",
                 "granular"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "show help for every command");

    std::string out_dir = "out";
    std::string seed_flag;
    const auto common = [&](CLI::App* sub, bool seeded) {
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        if (seeded)
            sub->add_option("--seed", seed_flag, "master seed (default 42, or $GRANULAR_SEED)");
    };
    TableInput input;
    const auto table_options = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--input", input.path, "CSV table, decision in the last column");
        if (required) o->required();
        sub->add_option("--schema", input.schema, "schema JSON (default: inferred from the CSV)");
    };

    std::size_t rows = 30;
    auto* gen = app.add_subcommand("generate", "write the synthetic mining table");
    gen->add_option("--rows", rows, "number of objects")->capture_default_str();
    common(gen, true);

    std::size_t train_size = 21;
    auto* split = app.add_subcommand("split", "seeded train/test partition");
    table_options(split, true);
    split->add_option("--train-size", train_size, "training objects")->capture_default_str();
    common(split, true);

    std::size_t categories = 3;
    std::string model_path;
    auto* disc = app.add_subcommand("discretize", "SOM discretization of every attribute");
    table_options(disc, true);
    disc->add_option("--categories", categories, "categories per attribute")->capture_default_str();
    disc->add_option("--model", model_path, "apply a frozen discretizer.json instead of fitting");
    common(disc, true);

    std::string format = "text";
    auto* red = app.add_subcommand("reduct", "Johnson reduct and decision rules of a categorical table");
    table_options(red, true);
    red->add_option("--format", format, "rule output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    common(red, false);

    std::string rules_path;
    auto* cls = app.add_subcommand("classify", "apply decision rules to a categorical table");
    cls->add_option("--rules", rules_path, "rules.txt or rules.json")->required();
    table_options(cls, true);
    common(cls, false);

    std::string train_path, test_path;
    std::size_t split_n = 0;
    SonfisOptions sonfis_opts;
    auto* son = app.add_subcommand("sonfis", "SONFIS-R random granulation search");
    son->add_option("--train", train_path, "training CSV");
    son->add_option("--test", test_path, "test CSV");
    table_options(son, false);
    son->add_option("--split", split_n, "split --input with this many training objects");
    add_sonfis_options(son, sonfis_opts);
    common(son, true);

    std::string result_path, attrs;
    std::size_t grid = 25;
    auto* surf = app.add_subcommand("surface", "response surface of a fitted model over two inputs");
    surf->add_option("--model", result_path, "result.json from sonfis")->required();
    surf->add_option("--attrs", attrs, "two input names, NAME,NAME")->required();
    surf->add_option("--grid", grid, "grid points per axis")->capture_default_str();
    common(surf, false);

    std::string surface_attrs;
    auto* pipe = app.add_subcommand("pipeline", "split, discretize, reduct, classify, SONFIS-R and surface");
    table_options(pipe, true);
    pipe->add_option("--split", train_size, "training objects")->capture_default_str();
    pipe->add_option("--categories", categories, "categories per attribute")->capture_default_str();
    pipe->add_option("--format", format, "rule output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    pipe->add_option("--surface-attrs", surface_attrs, "surface inputs (default: first two reduct attributes)");
    pipe->add_option("--grid", grid, "surface grid points per axis")->capture_default_str();
    add_sonfis_options(pipe, sonfis_opts);
    common(pipe, true);

    std::string manifest_path;
    bool check = false;
    auto* rep = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    rep->add_option("--manifest", manifest_path, "manifest.json")->required();
    rep->add_flag("--check", check, "fail unless every artifact matches its recorded digest");

    std::vector<const char*> argv{"granular"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: Usage: " << e.what() << "\n  run 'granular --help' for the command list\n";
        return 2;
    }

    try {
        if (*gen) {
            Run r("generate", out_dir);
            r.flag("--rows", rows);
            const auto seed = resolve_seed(seed_flag);
            r.seed(seed);
            emit_table(r, "synthetic", generate_synthetic(rows, seed));
            r.finish();
            out << "wrote " << rows << " objects\n";
        } else if (*split) {
            Run r("split", out_dir);
            r.flag("--input", input.path);
            if (!input.schema.empty()) r.flag("--schema", input.schema);
            r.flag("--train-size", train_size);
            const auto seed = resolve_seed(seed_flag);
            r.seed(seed);
            const auto t = load_table_file(r, input.path, input.schema);
            const auto [train, test] = split_table(t, train_size, seed);
            emit_table(r, "train", train);
            emit_table(r, "test", test);
            r.finish();
            out << "train " << train.n_objects() << ", test " << test.n_objects() << "\n";
        } else if (*disc) {
            Run r("discretize", out_dir);
            r.flag("--input", input.path);
            if (!input.schema.empty()) r.flag("--schema", input.schema);
            r.flag("--categories", categories);
            if (!model_path.empty()) r.flag("--model", model_path);
            const auto seed = resolve_seed(seed_flag);
            r.seed(seed);
            const auto t = load_table_file(r, input.path, input.schema);
            TableDiscretizer d;
            if (model_path.empty()) {
                if (categories < 1) fail(ErrorCode::invalid_argument, "--categories must be >= 1");
                d = fit_table_discretizer(t, categories, derive_seed(seed, "som"));
                r.emit("discretizer.json", Json(d).dump(2) + "\n");
            } else {
                const auto text = read_file(model_path);
                r.input(model_path, text);
                d = json_as<TableDiscretizer>(parse_json(text, model_path), model_path);
            }
            emit_table(r, "categorized", d.apply(t));
            r.finish();
            out << "discretized " << t.n_objects() << " objects into " << d.n_categories << " categories\n";
        } else if (*red) {
            Run r("reduct", out_dir);
            r.flag("--input", input.path);
            if (!input.schema.empty()) r.flag("--schema", input.schema);
            r.flag("--format", format);
            emit_reduct(r, load_table_file(r, input.path, input.schema), format, out);
            r.finish();
        } else if (*cls) {
            Run r("classify", out_dir);
            r.flag("--rules", rules_path);
            r.flag("--input", input.path);
            if (!input.schema.empty()) r.flag("--schema", input.schema);
            const auto test = load_table_file(r, input.path, input.schema);
            const auto text = read_file(rules_path);
            r.input(rules_path, text);
            const RuleSet rules =
                fs::path(rules_path).extension() == ".json"
                    ? json_as<RuleSet>(parse_json(text, rules_path), rules_path)
                    : parse_rules(text, test.attribute_names(), test.decision().name);
            emit_classification(r, rules, test, out);
            r.finish();
        } else if (*son) {
            Run r("sonfis", out_dir);
            const bool paired = !train_path.empty() || !test_path.empty();
            if (paired == !input.path.empty())
                fail(ErrorCode::invalid_argument, "give either --train and --test, or --input with --split");
            std::optional<std::pair<InformationTable, InformationTable>> data;
            const auto seed = resolve_seed(seed_flag);
            if (paired) {
                if (train_path.empty() || test_path.empty())
                    fail(ErrorCode::invalid_argument, "--train and --test go together");
                r.flag("--train", train_path);
                r.flag("--test", test_path);
                if (!input.schema.empty()) r.flag("--schema", input.schema);
                data.emplace(load_table_file(r, train_path, input.schema), load_table_file(r, test_path, input.schema));
            } else {
                if (split_n == 0) split_n = 21;
                r.flag("--input", input.path);
                if (!input.schema.empty()) r.flag("--schema", input.schema);
                r.flag("--split", split_n);
                data = split_table(load_table_file(r, input.path, input.schema), split_n, seed);
            }
            const auto config = resolve_sonfis(r, sonfis_opts, seed);
            r.seed(seed);
            emit_sonfis(r, run_sonfis_r(data->first, data->second, config), out);
            r.finish();
        } else if (*surf) {
            Run r("surface", out_dir);
            r.flag("--model", result_path);
            r.flag("--attrs", attrs);
            r.flag("--grid", grid);
            const auto text = read_file(result_path);
            r.input(result_path, text);
            const auto result = json_as<SonfisResult>(parse_json(text, result_path), result_path);
            const auto [i, j] = surface_indices(result.input_names, attrs);
            emit_surface(r, result, i, j, grid);
            r.finish();
            out << "surface: " << grid * grid << " points\n";
        } else if (*pipe) {
            Run r("pipeline", out_dir);
            r.flag("--input", input.path);
            if (!input.schema.empty()) r.flag("--schema", input.schema);
            r.flag("--split", train_size);
            r.flag("--categories", categories);
            r.flag("--format", format);
            if (!surface_attrs.empty()) r.flag("--surface-attrs", surface_attrs);
            r.flag("--grid", grid);
            const auto seed = resolve_seed(seed_flag);
            const auto config = resolve_sonfis(r, sonfis_opts, seed);
            r.seed(seed);

            const auto t = load_table_file(r, input.path, input.schema);
            const auto [train, test] = split_table(t, train_size, seed);
            emit_table(r, "train", train);
            emit_table(r, "test", test);
            if (categories < 1) fail(ErrorCode::invalid_argument, "--categories must be >= 1");
            const auto d = fit_table_discretizer(train, categories, derive_seed(seed, "som"));
            r.emit("discretizer.json", Json(d).dump(2) + "\n");
            const auto cat_train = d.apply(train);
            const auto cat_test = d.apply(test);
            emit_table(r, "categorized_train", cat_train);
            emit_table(r, "categorized_test", cat_test);
            RuleSet rules;
            Reduct reduct;
            emit_reduct(r, cat_train, format, out, &rules, &reduct);
            emit_classification(r, rules, cat_test, out);

            const auto result = run_sonfis_r(train, test, config);
            emit_sonfis(r, result, out);
            std::pair<std::size_t, std::size_t> axes{0, 1};
            if (!surface_attrs.empty())
                axes = surface_indices(result.input_names, surface_attrs);
            else if (reduct.attributes.size() >= 2)
                axes = {reduct.attributes[0], reduct.attributes[1]};
            if (result.input_names.size() < 2) fail(ErrorCode::invalid_argument, "surface needs two inputs");
            emit_surface(r, result, axes.first, axes.second, grid);
            r.finish();
        } else if (*rep) {
            return replay(manifest_path, check, out, err);
        }
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return 1;
    } catch (const Json::exception& e) {
        err << "error: ParseError: " << e.what() << "\n";
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "error: IoError: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: Internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace granular::cli
