#include "granular/information_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "granular/error.hpp"
#include "granular/random.hpp"

namespace granular {

const char* to_string(AttributeKind kind) noexcept {
    return kind == AttributeKind::numeric ? "numeric" : "categorical";
}

AttributeSpec AttributeSpec::numeric(std::string name) {
    return AttributeSpec{std::move(name), AttributeKind::numeric, {}};
}

AttributeSpec AttributeSpec::categorical(std::string name, std::vector<std::pair<std::string, int>> codes) {
    AttributeSpec spec{std::move(name), AttributeKind::categorical, std::move(codes)};
    spec.validate();
    return spec;
}

std::optional<int> AttributeSpec::code_of(std::string_view label) const {
    for (const auto& [l, c] : codes)
        if (l == label) return c;
    return std::nullopt;
}

const std::string* AttributeSpec::label_of(int code) const {
    for (const auto& [l, c] : codes)
        if (c == code) return &l;
    return nullptr;
}

bool AttributeSpec::has_code(double value) const {
    return std::any_of(codes.begin(), codes.end(), [&](const auto& p) { return p.second == value; });
}

void AttributeSpec::validate() const {
    if (name.empty()) fail(ErrorCode::invalid_argument, "attribute name is empty");
    if (kind == AttributeKind::numeric) {
        if (!codes.empty()) fail(ErrorCode::invalid_argument, "numeric attribute '" + name + "' has a code map");
        return;
    }
    if (codes.empty()) fail(ErrorCode::invalid_argument, "categorical attribute '" + name + "' has no codes");
    std::set<int> seen_codes;
    std::set<std::string> seen_labels;
    for (const auto& [label, code] : codes) {
        if (code <= 0) fail(ErrorCode::invalid_argument, "code for '" + label + "' in '" + name + "' is not positive");
        if (!seen_codes.insert(code).second)
            fail(ErrorCode::invalid_argument, "duplicate code " + std::to_string(code) + " in '" + name + "'");
        if (!seen_labels.insert(label).second)
            fail(ErrorCode::invalid_argument, "duplicate label '" + label + "' in '" + name + "'");
    }
}

namespace {

void check_cell(const AttributeSpec& spec, double v, std::size_t object) {
    if (!std::isfinite(v))
        fail(ErrorCode::invalid_argument, "non-finite value in '" + spec.name + "', row " + std::to_string(object));
    if (spec.kind == AttributeKind::categorical && !spec.has_code(v))
        fail(ErrorCode::unknown_category,
             "code " + std::to_string(v) + " not in code map of '" + spec.name + "', row " + std::to_string(object));
}

}  // namespace

InformationTable::InformationTable(Schema schema, std::vector<Vector> conditions, Vector decisions,
                                   std::vector<std::size_t> ids)
    : schema_(std::move(schema)), conditions_(std::move(conditions)), decisions_(std::move(decisions)),
      ids_(std::move(ids)) {
    if (schema_.attributes.empty()) fail(ErrorCode::invalid_argument, "table needs at least one condition attribute");
    for (const auto& a : schema_.attributes) a.validate();
    schema_.decision.validate();
    if (conditions_.size() != decisions_.size())
        fail(ErrorCode::length_mismatch, "condition and decision row counts differ");
    if (decisions_.empty()) fail(ErrorCode::insufficient_data, "table has no rows");
    if (ids_.empty()) {
        ids_.resize(decisions_.size());
        std::iota(ids_.begin(), ids_.end(), std::size_t{0});
    }
    if (ids_.size() != decisions_.size()) fail(ErrorCode::length_mismatch, "id count differs from row count");
    for (std::size_t r = 0; r < conditions_.size(); ++r) {
        if (conditions_[r].size() != schema_.attributes.size())
            fail(ErrorCode::missing_cell, "row " + std::to_string(r) + " has " + std::to_string(conditions_[r].size()) +
                                              " condition values, expected " +
                                              std::to_string(schema_.attributes.size()));
        for (std::size_t a = 0; a < conditions_[r].size(); ++a) check_cell(schema_.attributes[a], conditions_[r][a], r);
        check_cell(schema_.decision, decisions_[r], r);
    }
}

Vector InformationTable::column(std::size_t attribute) const {
    if (attribute >= n_attributes()) fail(ErrorCode::unknown_attribute, "attribute index out of range");
    Vector out(n_objects());
    for (std::size_t r = 0; r < n_objects(); ++r) out[r] = conditions_[r][attribute];
    return out;
}

std::optional<std::size_t> InformationTable::attribute_index(std::string_view name) const {
    for (std::size_t a = 0; a < n_attributes(); ++a)
        if (schema_.attributes[a].name == name) return a;
    return std::nullopt;
}

std::vector<std::string> InformationTable::attribute_names() const {
    std::vector<std::string> names;
    names.reserve(n_attributes());
    for (const auto& a : schema_.attributes) names.push_back(a.name);
    return names;
}

InformationTable InformationTable::select(std::span<const std::size_t> objects) const {
    std::vector<Vector> conditions;
    Vector decisions;
    std::vector<std::size_t> ids;
    for (auto o : objects) {
        if (o >= n_objects()) fail(ErrorCode::index_out_of_range, "object index out of range");
        conditions.push_back(conditions_[o]);
        decisions.push_back(decisions_[o]);
        ids.push_back(ids_[o]);
    }
    return InformationTable(schema_, std::move(conditions), std::move(decisions), std::move(ids));
}

// ---- CSV ----------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"' && cell.empty()) {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    if (quoted) fail(ErrorCode::parse_error, "unterminated quote on line " + std::to_string(line_no));
    cells.push_back(std::move(cell));
    return cells;
}

std::optional<double> parse_number(std::string_view s) {
    double v = 0.0;
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

RawTable read_csv(std::istream& in) {
    RawTable raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (line.empty()) continue;
        auto cells = split_csv_line(line, line_no);
        if (raw.header.empty()) {
            raw.header = std::move(cells);
        } else {
            raw.rows.push_back(std::move(cells));
            raw.lines.push_back(line_no);
        }
    }
    if (raw.header.empty()) fail(ErrorCode::parse_error, "CSV input has no header");
    return raw;
}

InformationTable encode_categorical(const RawTable& raw, const Schema& schema) {
    const std::size_t n_cols = schema.attributes.size() + 1;
    std::vector<std::string> expected;
    for (const auto& a : schema.attributes) expected.push_back(a.name);
    expected.push_back(schema.decision.name);
    if (raw.header != expected) {
        std::string got;
        for (const auto& h : raw.header) got += (got.empty() ? "" : ",") + h;
        std::string want;
        for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
        fail(ErrorCode::schema_mismatch, "header '" + got + "' does not match schema '" + want + "'");
    }

    std::vector<Vector> conditions;
    Vector decisions;
    conditions.reserve(raw.rows.size());
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const auto& cells = raw.rows[r];
        const std::string where = "row " + std::to_string(r) +
                                  (r < raw.lines.size() ? " (line " + std::to_string(raw.lines[r]) + ")" : "");
        if (cells.size() > n_cols)
            fail(ErrorCode::schema_mismatch, where + " has " + std::to_string(cells.size()) + " cells, expected " +
                                                 std::to_string(n_cols));
        Vector values(n_cols);
        for (std::size_t c = 0; c < n_cols; ++c) {
            const AttributeSpec& spec = c < schema.attributes.size() ? schema.attributes[c] : schema.decision;
            if (c >= cells.size() || cells[c].empty())
                fail(ErrorCode::missing_cell, where + ": empty cell in column '" + spec.name + "'");
            if (spec.kind == AttributeKind::categorical) {
                auto code = spec.code_of(cells[c]);
                if (!code)
                    fail(ErrorCode::unknown_category,
                         where + ": '" + cells[c] + "' is not a category of '" + spec.name + "'");
                values[c] = *code;
            } else {
                auto v = parse_number(cells[c]);
                if (!v)
                    fail(ErrorCode::parse_error,
                         where + ": '" + cells[c] + "' is not a number in column '" + spec.name + "'");
                values[c] = *v;
            }
        }
        decisions.push_back(values.back());
        values.pop_back();
        conditions.push_back(std::move(values));
    }
    if (decisions.size() < 2)
        fail(ErrorCode::insufficient_data, "a table needs at least 2 rows, got " + std::to_string(decisions.size()));
    return InformationTable(schema, std::move(conditions), std::move(decisions));
}

InformationTable encode_categorical(const InformationTable& table) {
    return InformationTable(table.schema(), table.conditions(), table.decisions(), table.ids());
}

InformationTable load_table(std::istream& in, const Schema& schema) {
    return encode_categorical(read_csv(in), schema);
}

Schema infer_schema(const RawTable& raw) {
    if (raw.header.size() < 2) fail(ErrorCode::schema_mismatch, "need at least one condition column and a decision");
    std::vector<AttributeSpec> specs;
    for (std::size_t c = 0; c < raw.header.size(); ++c) {
        bool numeric = true;
        std::vector<std::pair<std::string, int>> codes;
        for (std::size_t r = 0; r < raw.rows.size(); ++r) {
            if (c >= raw.rows[r].size() || raw.rows[r][c].empty())
                fail(ErrorCode::missing_cell,
                     "row " + std::to_string(r) +
                         (r < raw.lines.size() ? " (line " + std::to_string(raw.lines[r]) + ")" : "") +
                         ": empty cell in column '" + raw.header[c] + "'");
            const auto& cell = raw.rows[r][c];
            if (numeric && !parse_number(cell)) numeric = false;
            if (std::none_of(codes.begin(), codes.end(), [&](const auto& p) { return p.first == cell; }))
                codes.emplace_back(cell, static_cast<int>(codes.size()) + 1);
        }
        specs.push_back(numeric ? AttributeSpec::numeric(raw.header[c])
                                : AttributeSpec::categorical(raw.header[c], std::move(codes)));
    }
    Schema schema;
    schema.decision = std::move(specs.back());
    specs.pop_back();
    schema.attributes = std::move(specs);
    return schema;
}

void write_csv(const InformationTable& table, std::ostream& out, bool labels) {
    const auto cell = [&](const AttributeSpec& spec, double v) {
        if (labels && spec.kind == AttributeKind::categorical) {
            if (const auto* l = spec.label_of(static_cast<int>(v))) return csv_quote(*l);
        }
        return format_number(v);
    };
    for (std::size_t a = 0; a < table.n_attributes(); ++a) out << csv_quote(table.attributes()[a].name) << ',';
    out << csv_quote(table.decision().name) << '\n';
    for (std::size_t r = 0; r < table.n_objects(); ++r) {
        for (std::size_t a = 0; a < table.n_attributes(); ++a) out << cell(table.attributes()[a], table.value(r, a)) << ',';
        out << cell(table.decision(), table.decision_value(r)) << '\n';
    }
}

std::pair<InformationTable, InformationTable> split_train_test(const InformationTable& table,
                                                               const SplitSpec& spec) {
    const std::size_t n = table.n_objects();
    if (spec.n_train < 1 || spec.n_train >= n)
        fail(ErrorCode::bad_split,
             "n_train must lie in [1, " + std::to_string(n - 1) + "], got " + std::to_string(spec.n_train));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = make_rng(spec.seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(spec.n_train));
    std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(spec.n_train), order.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {table.select(train), table.select(test)};
}

}  // namespace granular
