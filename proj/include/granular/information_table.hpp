#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "granular/normalization.hpp"

namespace granular {

enum class AttributeKind { numeric, categorical };

const char* to_string(AttributeKind kind) noexcept;

/// One column of an information system. Categorical attributes carry the
/// label -> code map used to ascribe integer codes to qualitative values.
struct AttributeSpec {
    std::string name;
    AttributeKind kind = AttributeKind::numeric;
    std::vector<std::pair<std::string, int>> codes;

    static AttributeSpec numeric(std::string name);
    static AttributeSpec categorical(std::string name, std::vector<std::pair<std::string, int>> codes);

    std::optional<int> code_of(std::string_view label) const;
    const std::string* label_of(int code) const;
    bool has_code(double value) const;

    /// Throws invalid_argument when codes are not distinct positive integers
    /// or a numeric attribute carries a code map.
    void validate() const;

    bool operator==(const AttributeSpec&) const = default;
};

/// Column layout of a table: condition attributes followed by the decision.
struct Schema {
    std::vector<AttributeSpec> attributes;
    AttributeSpec decision;

    bool operator==(const Schema&) const = default;
};

/// S = <U, A> with a flagged decision attribute. Cells are stored as doubles;
/// categorical cells hold their integer code. Immutable after construction.
class InformationTable {
public:
    InformationTable(Schema schema, std::vector<Vector> conditions, Vector decisions,
                     std::vector<std::size_t> ids = {});

    const Schema& schema() const noexcept { return schema_; }
    const std::vector<AttributeSpec>& attributes() const noexcept { return schema_.attributes; }
    const AttributeSpec& decision() const noexcept { return schema_.decision; }

    std::size_t n_objects() const noexcept { return decisions_.size(); }
    std::size_t n_attributes() const noexcept { return schema_.attributes.size(); }

    double value(std::size_t object, std::size_t attribute) const { return conditions_[object][attribute]; }
    double decision_value(std::size_t object) const { return decisions_[object]; }
    std::span<const double> row(std::size_t object) const { return conditions_[object]; }
    std::size_t id(std::size_t object) const { return ids_[object]; }

    const std::vector<Vector>& conditions() const noexcept { return conditions_; }
    const Vector& decisions() const noexcept { return decisions_; }
    const std::vector<std::size_t>& ids() const noexcept { return ids_; }

    Vector column(std::size_t attribute) const;
    std::optional<std::size_t> attribute_index(std::string_view name) const;
    std::vector<std::string> attribute_names() const;

    /// Rows at the given positions, ids preserved.
    InformationTable select(std::span<const std::size_t> objects) const;

    bool operator==(const InformationTable&) const = default;

private:
    Schema schema_;
    std::vector<Vector> conditions_;
    Vector decisions_;
    std::vector<std::size_t> ids_;
};

/// Cells of a CSV file before typing. line numbers are 1-based file lines.
struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;
};

RawTable read_csv(std::istream& in);

/// Types the raw cells under the schema: numeric cells are parsed, categorical
/// labels are replaced by their codes. Row order is preserved and ids are the
/// 0-based data-row indices.
InformationTable encode_categorical(const RawTable& raw, const Schema& schema);

/// Re-validates an already encoded table; returns it unchanged.
InformationTable encode_categorical(const InformationTable& table);

InformationTable load_table(std::istream& in, const Schema& schema);

/// Schema guess for files without an explicit one: a column is numeric when
/// every cell parses as a number, otherwise categorical with codes 1..k in
/// order of first appearance. The last column is the decision.
Schema infer_schema(const RawTable& raw);

/// Writes header + rows. Categorical cells are written as labels when
/// `labels` is set, otherwise as codes.
void write_csv(const InformationTable& table, std::ostream& out, bool labels = true);

/// Shortest round-trip decimal form.
std::string format_number(double v);
/// Quotes a CSV cell when it holds a comma or a quote.
std::string csv_quote(const std::string& cell);

struct SplitSpec {
    std::size_t n_train = 21;
    std::uint64_t seed = 42;
};

/// Seeded partition into (train, test); both parts keep source order.
std::pair<InformationTable, InformationTable> split_train_test(const InformationTable& table,
                                                               const SplitSpec& spec);

/// Synthetic stand-in for a longwall-mining dilution survey: 13 condition
/// attributes and a 3-level dilution decision driven by five of them
/// (see synthetic_sensitive_attributes()).
InformationTable generate_synthetic(std::size_t n_rows, std::uint64_t seed);

Schema synthetic_schema();
std::vector<std::string> synthetic_sensitive_attributes();

/// Noise-free ground-truth dilution category (1..3) for a condition row laid
/// out as synthetic_schema().
int synthetic_ground_truth(std::span<const double> row);

}  // namespace granular
