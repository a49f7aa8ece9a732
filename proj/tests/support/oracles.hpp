#pragma once

// Brute-force reference computations used by the tests. Nothing here calls
// into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "granular/information_table.hpp"

namespace granular::oracle {

using Mask = std::uint32_t;

/// Random categorical table: `n_objects` x `n_attributes`, values in 1..n_values,
/// decisions in 1..n_decisions.
inline InformationTable random_table(std::mt19937_64& rng, std::size_t n_objects, std::size_t n_attributes,
                                     int n_values, int n_decisions) {
    Schema schema;
    std::vector<std::pair<std::string, int>> codes;
    for (int v = 1; v <= std::max(n_values, n_decisions); ++v) codes.emplace_back(std::to_string(v), v);
    for (std::size_t a = 0; a < n_attributes; ++a)
        schema.attributes.push_back(AttributeSpec::categorical("a" + std::to_string(a), codes));
    schema.decision = AttributeSpec::categorical("d", codes);
    std::uniform_int_distribution<int> value(1, n_values);
    std::uniform_int_distribution<int> decision(1, n_decisions);
    std::vector<Vector> rows;
    Vector decisions;
    for (std::size_t o = 0; o < n_objects; ++o) {
        Vector row;
        for (std::size_t a = 0; a < n_attributes; ++a) row.push_back(value(rng));
        rows.push_back(std::move(row));
        decisions.push_back(decision(rng));
    }
    return InformationTable(schema, rows, decisions);
}

inline bool same_on(const InformationTable& t, std::size_t x, std::size_t y, const std::vector<std::size_t>& attrs) {
    for (auto a : attrs)
        if (t.value(x, a) != t.value(y, a)) return false;
    return true;
}

/// [x]_B by a direct scan over U.
inline std::vector<std::size_t> equivalence_class(const InformationTable& t, std::size_t x,
                                                  const std::vector<std::size_t>& attrs) {
    std::vector<std::size_t> cls;
    for (std::size_t y = 0; y < t.n_objects(); ++y)
        if (same_on(t, x, y, attrs)) cls.push_back(y);
    return cls;
}

inline std::set<std::vector<std::size_t>> brute_partition(const InformationTable& t,
                                                          const std::vector<std::size_t>& attrs) {
    std::set<std::vector<std::size_t>> blocks;
    for (std::size_t x = 0; x < t.n_objects(); ++x) blocks.insert(equivalence_class(t, x, attrs));
    return blocks;
}

inline std::vector<std::size_t> brute_lower(const InformationTable& t, const std::vector<std::size_t>& attrs,
                                            const std::vector<std::size_t>& target) {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < t.n_objects(); ++x) {
        const auto cls = equivalence_class(t, x, attrs);
        if (std::all_of(cls.begin(), cls.end(),
                        [&](std::size_t y) { return std::find(target.begin(), target.end(), y) != target.end(); }))
            out.push_back(x);
    }
    return out;
}

inline std::vector<std::size_t> brute_upper(const InformationTable& t, const std::vector<std::size_t>& attrs,
                                            const std::vector<std::size_t>& target) {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < t.n_objects(); ++x) {
        const auto cls = equivalence_class(t, x, attrs);
        if (std::any_of(cls.begin(), cls.end(),
                        [&](std::size_t y) { return std::find(target.begin(), target.end(), y) != target.end(); }))
            out.push_back(x);
    }
    return out;
}

/// Masks of the decision-relative discernibility entries (pairs with
/// different decisions), empty ones included.
inline std::vector<Mask> brute_clauses(const InformationTable& t) {
    std::vector<Mask> out;
    for (std::size_t i = 0; i < t.n_objects(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            if (t.decision_value(i) == t.decision_value(j)) continue;
            Mask m = 0;
            for (std::size_t a = 0; a < t.n_attributes(); ++a)
                if (t.value(i, a) != t.value(j, a)) m |= Mask{1} << a;
            out.push_back(m);
        }
    return out;
}

/// f_s(assignment) evaluated on the raw (unabsorbed) clause list.
inline bool eval_cnf(const std::vector<Mask>& clauses, Mask assignment) {
    for (Mask c : clauses)
        if (c != 0 && (c & assignment) == 0) return false;
    return true;
}

/// Minimal satisfying monomials of a monotone CNF, by full truth table.
inline std::set<Mask> prime_implicants(const std::vector<Mask>& clauses, std::size_t n_vars) {
    std::set<Mask> out;
    const Mask limit = Mask{1} << n_vars;
    for (Mask m = 0; m < limit; ++m) {
        if (!eval_cnf(clauses, m)) continue;
        bool minimal = true;
        for (std::size_t v = 0; v < n_vars && minimal; ++v)
            if ((m >> v) & 1u) minimal = !eval_cnf(clauses, m & ~(Mask{1} << v));
        if (minimal) out.insert(m);
    }
    return out;
}

inline Mask to_mask(const std::vector<std::size_t>& attrs) {
    Mask m = 0;
    for (auto a : attrs) m |= Mask{1} << a;
    return m;
}

/// True when `m` hits every clause and no proper subset of `m` does.
inline bool is_minimal_hitting_set(const std::vector<Mask>& clauses, Mask m) {
    if (!eval_cnf(clauses, m)) return false;
    for (Mask sub = (m - 1) & m;; sub = (sub - 1) & m) {
        if (sub != m && eval_cnf(clauses, sub)) return false;
        if (sub == 0) break;
    }
    return true;
}

/// Chiu's initial potential of every point.
inline std::vector<double> potentials(const std::vector<Vector>& data, double radius) {
    std::vector<double> p(data.size(), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i)
        for (std::size_t j = 0; j < data.size(); ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < data[i].size(); ++k) d2 += std::pow(data[i][k] - data[j][k], 2);
            p[i] += std::exp(-4.0 * d2 / (radius * radius));
        }
    return p;
}

/// Two-pass MSE: squared residuals first, then a compensated sum.
inline double mse(const std::vector<double>& predictions, const std::vector<double>& targets) {
    std::vector<double> sq;
    for (std::size_t i = 0; i < predictions.size(); ++i) sq.push_back(std::pow(targets[i] - predictions[i], 2));
    long double sum = 0.0L;
    long double c = 0.0L;
    for (double v : sq) {
        const long double y = v - c;
        const long double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return static_cast<double>(sum / static_cast<long double>(sq.size()));
}

}  // namespace granular::oracle
