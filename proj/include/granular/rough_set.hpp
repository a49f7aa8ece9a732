#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "granular/information_table.hpp"

namespace granular {

/// Sorted ascending, duplicate free.
using ObjectSet = std::vector<std::size_t>;
using AttributeSet = std::vector<std::size_t>;

/// Equivalence classes of an indiscernibility relation, ordered by their
/// smallest member.
struct Partition {
    std::vector<ObjectSet> blocks;

    bool operator==(const Partition&) const = default;
};

/// Condition-attribute indices B, objects identified by table position.
Partition indiscernibility(const InformationTable& table, std::span<const std::size_t> attributes);

ObjectSet lower_approx(const InformationTable& table, std::span<const std::size_t> attributes,
                       std::span<const std::size_t> target);
ObjectSet upper_approx(const InformationTable& table, std::span<const std::size_t> attributes,
                       std::span<const std::size_t> target);

struct DiscernibilityEntry {
    std::size_t i = 0;  // i < j
    std::size_t j = 0;
    AttributeSet attributes;

    bool operator==(const DiscernibilityEntry&) const = default;
};

/// Decision-relative discernibility matrix: only object pairs with different
/// decisions get an entry (which may be empty for inconsistent pairs).
struct DiscernibilityMatrix {
    std::size_t n_objects = 0;
    std::size_t n_attributes = 0;
    std::vector<DiscernibilityEntry> entries;

    const AttributeSet* find(std::size_t i, std::size_t j) const;
    /// Nonempty entries only, in entry order.
    std::vector<AttributeSet> clauses() const;
};

DiscernibilityMatrix discernibility_matrix(const InformationTable& table);

/// Monotone CNF over attribute variables. No clauses means constant true.
struct CnfFormula {
    std::size_t n_variables = 0;
    std::vector<AttributeSet> clauses;

    bool evaluate(std::span<const bool> assignment) const;
    std::string to_string(std::span<const std::string> names) const;

    bool operator==(const CnfFormula&) const = default;
};

/// Conjunction of the disjunctions of every nonempty entry, with duplicate
/// and absorbed (superset) clauses removed. Clauses sorted by (size, members).
CnfFormula discernibility_function(const DiscernibilityMatrix& matrix);

struct Reduct {
    AttributeSet attributes;

    bool operator==(const Reduct&) const = default;
    auto operator<=>(const Reduct&) const = default;
};

/// Johnson's greedy heuristic: take the attribute present in most uncovered
/// clauses (lowest index on ties) until every clause is hit, then drop
/// attributes in reverse pick order while coverage holds.
Reduct johnson_reduct(const DiscernibilityMatrix& matrix);

/// Every minimal hitting set of the nonempty clauses, by exhaustive
/// enumeration in ascending cardinality. Limited to 20 attributes.
std::vector<Reduct> all_reducts(const DiscernibilityMatrix& matrix);

inline constexpr std::size_t kMaxEnumeratedAttributes = 20;

struct Descriptor {
    std::size_t attribute = 0;
    int value = 0;

    bool operator==(const Descriptor&) const = default;
    auto operator<=>(const Descriptor&) const = default;
};

struct DecisionRule {
    std::vector<Descriptor> descriptors;
    int decision = 0;
    std::size_t support = 0;  // training objects matching every descriptor
    double accuracy = 0.0;    // share of those objects carrying `decision`

    bool matches(std::span<const double> row) const;

    bool operator==(const DecisionRule&) const = default;
};

/// Rules plus the context needed to apply and print them.
struct RuleSet {
    std::vector<std::string> attribute_names;
    std::string decision_name;
    std::vector<DecisionRule> rules;
    int default_decision = 0;  // training majority, used when nothing fires

    bool operator==(const RuleSet&) const = default;
};

/// One rule per reduct-value combination seen in the table. Rules are sorted
/// by support (descending) then descriptors.
RuleSet induce_rules(const InformationTable& table, const Reduct& reduct);

struct Classification {
    int decision = 0;
    std::vector<std::size_t> fired_rules;
    bool default_fired = false;

    bool operator==(const Classification&) const = default;
};

/// Support-weighted vote over the matching rules; ties go to the lowest code.
Classification classify(const RuleSet& rules, std::span<const double> row);

struct Evaluation {
    std::vector<int> classes;                      // sorted decision codes
    std::vector<std::vector<std::size_t>> confusion;  // [actual][predicted]
    std::vector<Classification> predictions;
    double accuracy = 0.0;
};

Evaluation evaluate(const RuleSet& rules, const InformationTable& test);

/// `name(code) AND ... => decision(code)`, one rule per line.
std::string format_rule(const RuleSet& rules, const DecisionRule& rule);
std::string format_rules(const RuleSet& rules);

/// Parses the textual rule form back against known attribute names. The
/// text carries no statistics: support and accuracy are set to 1 and the
/// default decision is the most frequent rule decision.
RuleSet parse_rules(std::string_view text, std::span<const std::string> attribute_names,
                    std::string_view decision_name);

}  // namespace granular
