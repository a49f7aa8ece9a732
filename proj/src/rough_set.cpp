#include "granular/rough_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <regex>
#include <sstream>

#include "granular/error.hpp"

namespace granular {

namespace {

int category_code(double v, const std::string& attribute, std::size_t object) {
    if (!std::isfinite(v) || std::floor(v) != v || std::abs(v) > 1e9)
        fail(ErrorCode::non_categorical_value, "attribute '" + attribute + "' holds non-categorical value " +
                                                   std::to_string(v) + " at object " + std::to_string(object));
    return static_cast<int>(v);
}

std::vector<int> signature(const InformationTable& table, std::size_t object, std::span<const std::size_t> attributes) {
    std::vector<int> key;
    key.reserve(attributes.size());
    for (auto a : attributes) key.push_back(category_code(table.value(object, a), table.attributes()[a].name, object));
    return key;
}

void check_attributes(const InformationTable& table, std::span<const std::size_t> attributes) {
    for (auto a : attributes)
        if (a >= table.n_attributes())
            fail(ErrorCode::unknown_attribute, "attribute index " + std::to_string(a) + " out of range");
}

std::vector<bool> membership(std::size_t n, std::span<const std::size_t> objects) {
    std::vector<bool> in(n, false);
    for (auto o : objects) {
        if (o >= n) fail(ErrorCode::index_out_of_range, "object " + std::to_string(o) + " is not in the universe");
        in[o] = true;
    }
    return in;
}

using Mask = std::uint32_t;

Mask to_mask(const AttributeSet& s) {
    Mask m = 0;
    for (auto a : s) m |= Mask{1} << a;
    return m;
}

AttributeSet from_mask(Mask m) {
    AttributeSet s;
    for (std::size_t a = 0; m != 0; ++a, m >>= 1)
        if (m & 1u) s.push_back(a);
    return s;
}

bool hits(const AttributeSet& chosen, const AttributeSet& clause) {
    return std::any_of(clause.begin(), clause.end(),
                       [&](std::size_t a) { return std::binary_search(chosen.begin(), chosen.end(), a); });
}

bool covers_all(const AttributeSet& chosen, const std::vector<AttributeSet>& clauses) {
    return std::all_of(clauses.begin(), clauses.end(), [&](const auto& c) { return hits(chosen, c); });
}

}  // namespace

Partition indiscernibility(const InformationTable& table, std::span<const std::size_t> attributes) {
    check_attributes(table, attributes);
    std::map<std::vector<int>, std::size_t> block_of;
    Partition p;
    for (std::size_t o = 0; o < table.n_objects(); ++o) {
        auto [it, inserted] = block_of.try_emplace(signature(table, o, attributes), p.blocks.size());
        if (inserted) p.blocks.emplace_back();
        p.blocks[it->second].push_back(o);
    }
    return p;
}

ObjectSet lower_approx(const InformationTable& table, std::span<const std::size_t> attributes,
                       std::span<const std::size_t> target) {
    const auto in = membership(table.n_objects(), target);
    ObjectSet out;
    for (const auto& block : indiscernibility(table, attributes).blocks)
        if (std::all_of(block.begin(), block.end(), [&](std::size_t o) { return in[o]; }))
            out.insert(out.end(), block.begin(), block.end());
    std::sort(out.begin(), out.end());
    return out;
}

ObjectSet upper_approx(const InformationTable& table, std::span<const std::size_t> attributes,
                       std::span<const std::size_t> target) {
    const auto in = membership(table.n_objects(), target);
    ObjectSet out;
    for (const auto& block : indiscernibility(table, attributes).blocks)
        if (std::any_of(block.begin(), block.end(), [&](std::size_t o) { return in[o]; }))
            out.insert(out.end(), block.begin(), block.end());
    std::sort(out.begin(), out.end());
    return out;
}

// ---- discernibility -------------------------------------------------------

const AttributeSet* DiscernibilityMatrix::find(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    for (const auto& e : entries)
        if (e.i == i && e.j == j) return &e.attributes;
    return nullptr;
}

std::vector<AttributeSet> DiscernibilityMatrix::clauses() const {
    std::vector<AttributeSet> out;
    for (const auto& e : entries)
        if (!e.attributes.empty()) out.push_back(e.attributes);
    return out;
}

DiscernibilityMatrix discernibility_matrix(const InformationTable& table) {
    DiscernibilityMatrix m;
    m.n_objects = table.n_objects();
    m.n_attributes = table.n_attributes();
    std::vector<std::vector<int>> codes(table.n_objects());
    std::vector<int> decisions(table.n_objects());
    for (std::size_t o = 0; o < table.n_objects(); ++o) {
        for (std::size_t a = 0; a < table.n_attributes(); ++a)
            codes[o].push_back(category_code(table.value(o, a), table.attributes()[a].name, o));
        decisions[o] = category_code(table.decision_value(o), table.decision().name, o);
    }
    for (std::size_t i = 0; i < table.n_objects(); ++i)
        for (std::size_t j = i + 1; j < table.n_objects(); ++j) {
            if (decisions[i] == decisions[j]) continue;
            DiscernibilityEntry e{i, j, {}};
            for (std::size_t a = 0; a < table.n_attributes(); ++a)
                if (codes[i][a] != codes[j][a]) e.attributes.push_back(a);
            m.entries.push_back(std::move(e));
        }
    return m;
}

bool CnfFormula::evaluate(std::span<const bool> assignment) const {
    if (assignment.size() < n_variables) fail(ErrorCode::dimension_mismatch, "assignment shorter than variable count");
    return std::all_of(clauses.begin(), clauses.end(), [&](const AttributeSet& c) {
        return std::any_of(c.begin(), c.end(), [&](std::size_t a) { return assignment[a]; });
    });
}

std::string CnfFormula::to_string(std::span<const std::string> names) const {
    if (clauses.empty()) return "TRUE";
    std::string out;
    for (std::size_t c = 0; c < clauses.size(); ++c) {
        if (c) out += " AND ";
        out += '(';
        for (std::size_t k = 0; k < clauses[c].size(); ++k) {
            if (k) out += " OR ";
            const auto a = clauses[c][k];
            out += a < names.size() ? names[a] : "a" + std::to_string(a);
        }
        out += ')';
    }
    return out;
}

CnfFormula discernibility_function(const DiscernibilityMatrix& matrix) {
    auto clauses = matrix.clauses();
    std::sort(clauses.begin(), clauses.end(), [](const AttributeSet& a, const AttributeSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());

    CnfFormula f;
    f.n_variables = matrix.n_attributes;
    for (auto& c : clauses) {
        const bool absorbed = std::any_of(f.clauses.begin(), f.clauses.end(), [&](const AttributeSet& kept) {
            return std::includes(c.begin(), c.end(), kept.begin(), kept.end());
        });
        if (!absorbed) f.clauses.push_back(std::move(c));
    }
    return f;
}

Reduct johnson_reduct(const DiscernibilityMatrix& matrix) {
    const auto clauses = matrix.clauses();
    std::vector<bool> covered(clauses.size(), false);
    std::size_t remaining = clauses.size();
    std::vector<std::size_t> picks;

    while (remaining > 0) {
        std::vector<std::size_t> count(matrix.n_attributes, 0);
        for (std::size_t c = 0; c < clauses.size(); ++c)
            if (!covered[c])
                for (auto a : clauses[c]) ++count[a];
        const auto best =
            static_cast<std::size_t>(std::max_element(count.begin(), count.end()) - count.begin());  // first max
        picks.push_back(best);
        for (std::size_t c = 0; c < clauses.size(); ++c)
            if (!covered[c] && std::binary_search(clauses[c].begin(), clauses[c].end(), best)) {
                covered[c] = true;
                --remaining;
            }
    }

    AttributeSet chosen = picks;
    std::sort(chosen.begin(), chosen.end());
    for (auto it = picks.rbegin(); it != picks.rend(); ++it) {
        AttributeSet without;
        std::remove_copy(chosen.begin(), chosen.end(), std::back_inserter(without), *it);
        if (covers_all(without, clauses)) chosen = std::move(without);
    }
    return Reduct{std::move(chosen)};
}

std::vector<Reduct> all_reducts(const DiscernibilityMatrix& matrix) {
    const std::size_t n = matrix.n_attributes;
    if (n > kMaxEnumeratedAttributes)
        fail(ErrorCode::too_many_attributes, "exhaustive reduct search is limited to " +
                                                 std::to_string(kMaxEnumeratedAttributes) + " attributes, got " +
                                                 std::to_string(n));
    std::vector<Mask> clause_masks;
    for (const auto& c : matrix.clauses()) clause_masks.push_back(to_mask(c));
    std::sort(clause_masks.begin(), clause_masks.end());
    clause_masks.erase(std::unique(clause_masks.begin(), clause_masks.end()), clause_masks.end());

    const Mask limit = Mask{1} << n;
    std::vector<std::vector<Mask>> by_size(n + 1);
    for (Mask m = 0; m < limit; ++m) by_size[static_cast<std::size_t>(__builtin_popcount(m))].push_back(m);

    std::vector<Mask> found;
    for (const auto& level : by_size)
        for (Mask m : level) {
            const bool hitting =
                std::all_of(clause_masks.begin(), clause_masks.end(), [&](Mask c) { return (c & m) != 0; });
            if (!hitting) continue;
            const bool has_smaller = std::any_of(found.begin(), found.end(), [&](Mask r) { return (r & m) == r; });
            if (!has_smaller) found.push_back(m);
        }

    std::vector<Reduct> out;
    for (Mask m : found) out.push_back(Reduct{from_mask(m)});
    std::sort(out.begin(), out.end(), [](const Reduct& a, const Reduct& b) {
        return a.attributes.size() != b.attributes.size() ? a.attributes.size() < b.attributes.size()
                                                          : a.attributes < b.attributes;
    });
    return out;
}

// ---- rules --------------------------------------------------------------

bool DecisionRule::matches(std::span<const double> row) const {
    for (const auto& d : descriptors) {
        if (d.attribute >= row.size())
            fail(ErrorCode::missing_attribute_value,
                 "object has no value for attribute index " + std::to_string(d.attribute));
        if (row[d.attribute] != d.value) return false;
    }
    return true;
}

namespace {

int lowest_majority(const std::map<int, std::size_t>& counts) {
    int best = 0;
    std::size_t best_n = 0;
    for (const auto& [code, n] : counts)  // ascending codes: strict > keeps the lowest on ties
        if (n > best_n) {
            best = code;
            best_n = n;
        }
    return best;
}

}  // namespace

RuleSet induce_rules(const InformationTable& table, const Reduct& reduct) {
    if (reduct.attributes.empty()) fail(ErrorCode::empty_reduct, "cannot induce rules from an empty reduct");
    check_attributes(table, reduct.attributes);

    std::map<std::vector<int>, std::map<int, std::size_t>> groups;
    std::map<int, std::size_t> overall;
    for (std::size_t o = 0; o < table.n_objects(); ++o) {
        const int d = category_code(table.decision_value(o), table.decision().name, o);
        ++groups[signature(table, o, reduct.attributes)][d];
        ++overall[d];
    }

    RuleSet rs;
    rs.attribute_names = table.attribute_names();
    rs.decision_name = table.decision().name;
    rs.default_decision = lowest_majority(overall);
    for (const auto& [key, counts] : groups) {
        DecisionRule rule;
        for (std::size_t k = 0; k < key.size(); ++k) rule.descriptors.push_back({reduct.attributes[k], key[k]});
        rule.decision = lowest_majority(counts);
        for (const auto& [code, n] : counts) rule.support += n;
        rule.accuracy = static_cast<double>(counts.at(rule.decision)) / static_cast<double>(rule.support);
        rs.rules.push_back(std::move(rule));
    }
    std::stable_sort(rs.rules.begin(), rs.rules.end(), [](const DecisionRule& a, const DecisionRule& b) {
        if (a.support != b.support) return a.support > b.support;
        return a.descriptors < b.descriptors;
    });
    return rs;
}

Classification classify(const RuleSet& rules, std::span<const double> row) {
    Classification c;
    std::map<int, std::size_t> votes;
    for (std::size_t r = 0; r < rules.rules.size(); ++r)
        if (rules.rules[r].matches(row)) {
            c.fired_rules.push_back(r);
            votes[rules.rules[r].decision] += rules.rules[r].support;
        }
    if (votes.empty()) {
        c.decision = rules.default_decision;
        c.default_fired = true;
    } else {
        c.decision = lowest_majority(votes);
    }
    return c;
}

Evaluation evaluate(const RuleSet& rules, const InformationTable& test) {
    if (test.attribute_names() != rules.attribute_names)
        fail(ErrorCode::schema_mismatch, "test table attributes differ from the rule set's attributes");
    Evaluation ev;
    std::vector<int> actual;
    for (std::size_t o = 0; o < test.n_objects(); ++o) {
        actual.push_back(category_code(test.decision_value(o), test.decision().name, o));
        ev.predictions.push_back(classify(rules, test.row(o)));
    }
    ev.classes = actual;
    for (const auto& p : ev.predictions) ev.classes.push_back(p.decision);
    std::sort(ev.classes.begin(), ev.classes.end());
    ev.classes.erase(std::unique(ev.classes.begin(), ev.classes.end()), ev.classes.end());

    const auto index = [&](int code) {
        return static_cast<std::size_t>(std::lower_bound(ev.classes.begin(), ev.classes.end(), code) -
                                        ev.classes.begin());
    };
    ev.confusion.assign(ev.classes.size(), std::vector<std::size_t>(ev.classes.size(), 0));
    std::size_t correct = 0;
    for (std::size_t o = 0; o < actual.size(); ++o) {
        ++ev.confusion[index(actual[o])][index(ev.predictions[o].decision)];
        if (actual[o] == ev.predictions[o].decision) ++correct;
    }
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(actual.size());
    return ev;
}

std::string format_rule(const RuleSet& rules, const DecisionRule& rule) {
    std::string out;
    for (std::size_t k = 0; k < rule.descriptors.size(); ++k) {
        const auto& d = rule.descriptors[k];
        if (k) out += " AND ";
        out += (d.attribute < rules.attribute_names.size() ? rules.attribute_names[d.attribute]
                                                           : "a" + std::to_string(d.attribute)) +
               "(" + std::to_string(d.value) + ")";
    }
    out += " => " + rules.decision_name + "(" + std::to_string(rule.decision) + ")";
    return out;
}

std::string format_rules(const RuleSet& rules) {
    std::string out;
    for (const auto& r : rules.rules) out += format_rule(rules, r) + "\n";
    return out;
}

RuleSet parse_rules(std::string_view text, std::span<const std::string> attribute_names,
                    std::string_view decision_name) {
    static const std::regex descriptor_re(R"(^\s*(.+?)\s*\((-?\d+)\)\s*$)");
    RuleSet rs;
    rs.attribute_names.assign(attribute_names.begin(), attribute_names.end());
    rs.decision_name = decision_name;

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::map<int, std::size_t> decision_counts;
    const auto parse_descriptor = [&](const std::string& s, std::string& name, int& code) {
        std::smatch m;
        if (!std::regex_match(s, m, descriptor_re))
            fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": malformed descriptor '" + s + "'");
        name = m[1];
        code = std::stoi(m[2]);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto arrow = line.find("=>");
        if (arrow == std::string::npos)
            fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": missing '=>'");
        DecisionRule rule;
        std::string lhs = line.substr(0, arrow);
        std::size_t pos = 0;
        while (true) {
            const auto next = lhs.find(" AND ", pos);
            const std::string part = lhs.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
            std::string name;
            int code = 0;
            parse_descriptor(part, name, code);
            const auto it = std::find(attribute_names.begin(), attribute_names.end(), name);
            if (it == attribute_names.end())
                fail(ErrorCode::unknown_attribute, "line " + std::to_string(line_no) + ": unknown attribute '" + name + "'");
            rule.descriptors.push_back({static_cast<std::size_t>(it - attribute_names.begin()), code});
            if (next == std::string::npos) break;
            pos = next + 5;
        }
        std::string name;
        parse_descriptor(line.substr(arrow + 2), name, rule.decision);
        if (name != decision_name)
            fail(ErrorCode::unknown_attribute,
                 "line " + std::to_string(line_no) + ": decision '" + name + "' is not '" + std::string(decision_name) + "'");
        rule.support = 1;
        rule.accuracy = 1.0;
        ++decision_counts[rule.decision];
        rs.rules.push_back(std::move(rule));
    }
    rs.default_decision = lowest_majority(decision_counts);
    return rs;
}

}  // namespace granular
