#include <doctest.h>

#include <set>
#include <sstream>

#include "granular/error.hpp"
#include "granular/information_table.hpp"
#include "granular/serialization.hpp"

using namespace granular;

namespace {

Schema mining_schema() {
    Schema s;
    s.attributes = {AttributeSpec::numeric("thickness"),
                    AttributeSpec::categorical("contract_type", {{"Contract work", 1}, {"Service(state)", 2}})};
    s.decision = AttributeSpec::numeric("dilution");
    return s;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("load_table: minimal numeric file") {
    Schema s;
    s.attributes = {AttributeSpec::numeric("thickness")};
    s.decision = AttributeSpec::numeric("dilution");
    std::istringstream in("thickness,dilution\n1.5,20\n2.25,31.5\n");
    const auto t = load_table(in, s);
    CHECK(t.n_objects() == 2);
    CHECK(t.n_attributes() == 1);
    CHECK(t.value(1, 0) == 2.25);
    CHECK(t.decision_value(0) == 20.0);
    CHECK(t.ids() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("load_table: categorical labels are stored as their codes") {
    std::istringstream in("thickness,contract_type,dilution\n1.0,Contract work,22\n1.2,Service(state),25\n");
    const auto t = load_table(in, mining_schema());
    CHECK(t.value(0, 1) == 1.0);
    CHECK(t.value(1, 1) == 2.0);
}

TEST_CASE("load_table: error paths") {
    SUBCASE("empty cell names the row and column") {
        std::istringstream in("thickness,contract_type,dilution\n1.0,Contract work,22\n,Pic,25\n");
        try {
            load_table(in, mining_schema());
            FAIL("no error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::missing_cell);
            CHECK(std::string(e.what()).find("row 1") != std::string::npos);
            CHECK(std::string(e.what()).find("thickness") != std::string::npos);
        }
    }
    SUBCASE("short row is a missing cell") {
        std::istringstream in("thickness,contract_type,dilution\n1.0,Contract work\n1.0,Contract work,3\n");
        CHECK(code_of([&] { load_table(in, mining_schema()); }) == ErrorCode::missing_cell);
    }
    SUBCASE("unknown category") {
        std::istringstream in("thickness,contract_type,dilution\n1.0,contract work,22\n1.0,Contract work,3\n");
        CHECK(code_of([&] { load_table(in, mining_schema()); }) == ErrorCode::unknown_category);
    }
    SUBCASE("header mismatch") {
        std::istringstream in("thick,contract_type,dilution\n1.0,Contract work,22\n");
        CHECK(code_of([&] { load_table(in, mining_schema()); }) == ErrorCode::schema_mismatch);
    }
    SUBCASE("single row") {
        std::istringstream in("thickness,contract_type,dilution\n1.0,Contract work,22\n");
        CHECK(code_of([&] { load_table(in, mining_schema()); }) == ErrorCode::insufficient_data);
    }
    SUBCASE("non-number in numeric column") {
        std::istringstream in("thickness,contract_type,dilution\nthick,Contract work,22\n1,Contract work,2\n");
        CHECK(code_of([&] { load_table(in, mining_schema()); }) == ErrorCode::parse_error);
    }
}

TEST_CASE("AttributeSpec invariants") {
    CHECK(code_of([] { AttributeSpec::categorical("x", {{"a", 1}, {"b", 1}}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { AttributeSpec::categorical("x", {{"a", 0}}); }) == ErrorCode::invalid_argument);
    AttributeSpec bad{"x", AttributeKind::numeric, {{"a", 1}}};
    CHECK(code_of([&] { bad.validate(); }) == ErrorCode::invalid_argument);
}

TEST_CASE("encode_categorical: Table 1 codes") {
    const auto spec = synthetic_schema();
    const auto find = [&](const std::string& name) {
        for (const auto& a : spec.attributes)
            if (a.name == name) return a;
        FAIL("missing attribute");
        return spec.decision;
    };
    CHECK(find("drilling_instrument").code_of("Pic") == 1);
    CHECK(find("drilling_instrument").code_of("Drilling &blasting") == 2);
    CHECK(find("type_of_extraction").code_of("Forward") == 1);
    CHECK(find("type_of_extraction").code_of("Backward") == 2);
    CHECK(find("contract_type").code_of("Contract work") == 1);
    CHECK(find("type_of_floor_rock").code_of("Sandy rock") == 2);

    Schema s;
    s.attributes = {AttributeSpec::categorical("drilling_instrument", {{"Pic", 1}, {"Drilling &blasting", 2}}),
                    AttributeSpec::categorical("direct_of_extraction", {{"Forward", 1}, {"Backward", 2}})};
    s.decision = AttributeSpec::numeric("dilution");
    RawTable raw{{"drilling_instrument", "direct_of_extraction", "dilution"},
                 {{"Pic", "Backward", "20"}, {"Drilling &blasting", "Forward", "21"}},
                 {2, 3}};
    const auto t = encode_categorical(raw, s);
    CHECK(t.value(0, 0) == 1.0);
    CHECK(t.value(0, 1) == 2.0);
    CHECK(t.value(1, 0) == 2.0);

    SUBCASE("idempotent on an encoded table") { CHECK(encode_categorical(t) == t); }
}

TEST_CASE("encoding is a bijection over observed labels") {
    const auto t = generate_synthetic(40, 3);
    for (std::size_t a = 0; a < t.n_attributes(); ++a) {
        const auto& spec = t.attributes()[a];
        if (spec.kind != AttributeKind::categorical) continue;
        std::set<int> codes;
        std::set<std::string> labels;
        for (std::size_t o = 0; o < t.n_objects(); ++o) {
            const int c = static_cast<int>(t.value(o, a));
            codes.insert(c);
            labels.insert(*spec.label_of(c));
        }
        CHECK(codes.size() == labels.size());
        for (const auto& l : labels) CHECK(codes.count(*spec.code_of(l)) == 1);
    }
}

TEST_CASE("CSV and JSON round trips") {
    const auto t = generate_synthetic(30, 11);
    std::ostringstream out;
    write_csv(t, out);
    std::istringstream in(out.str());
    CHECK(load_table(in, t.schema()) == t);

    std::ostringstream codes_out;
    write_csv(t, codes_out, false);
    std::istringstream codes_in(codes_out.str());
    const auto inferred = load_table(codes_in, infer_schema([&] {
                                         std::istringstream again(codes_out.str());
                                         return read_csv(again);
                                     }()));
    CHECK(inferred.conditions() == t.conditions());

    const auto j = table_to_json(t);
    CHECK(table_from_json(Json::parse(j.dump())) == t);
}

TEST_CASE("infer_schema codes labels by first appearance") {
    std::istringstream in("x,kind,d\n1,b,1\n2,a,2\n3,b,1\n");
    const auto raw = read_csv(in);
    const auto s = infer_schema(raw);
    CHECK(s.attributes[0].kind == AttributeKind::numeric);
    CHECK(s.attributes[1].kind == AttributeKind::categorical);
    CHECK(s.attributes[1].code_of("b") == 1);
    CHECK(s.attributes[1].code_of("a") == 2);
    CHECK(s.decision.name == "d");
}

TEST_CASE("quoted categorical cells") {
    Schema s;
    s.attributes = {AttributeSpec::categorical("site", {{"North, deep", 1}, {"South", 2}})};
    s.decision = AttributeSpec::numeric("d");
    std::istringstream in("site,d\n\"North, deep\",1\nSouth,2\n");
    const auto t = load_table(in, s);
    CHECK(t.value(0, 0) == 1.0);
    std::ostringstream out;
    write_csv(t, out);
    CHECK(out.str() == "site,d\n\"North, deep\",1\nSouth,2\n");
}

TEST_CASE("split_train_test") {
    const auto t = generate_synthetic(30, 7);

    SUBCASE("21 / 9 partition") {
        const auto [train, test] = split_train_test(t, {21, 5});
        CHECK(train.n_objects() == 21);
        CHECK(test.n_objects() == 9);
        CHECK(train.schema() == t.schema());
        CHECK(test.schema() == t.schema());
    }
    SUBCASE("partition property over seeds") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const std::size_t n_train = 1 + seed % 29;
            const auto [train, test] = split_train_test(t, {n_train, seed});
            CHECK(train.n_objects() == n_train);
            std::set<std::size_t> ids(train.ids().begin(), train.ids().end());
            for (auto id : test.ids()) CHECK(ids.insert(id).second);
            CHECK(ids.size() == 30);
            for (std::size_t o = 0; o < train.n_objects(); ++o) CHECK(train.conditions()[o] == t.conditions()[train.id(o)]);
        }
    }
    SUBCASE("boundary: one test row") {
        const auto [train, test] = split_train_test(t, {29, 1});
        CHECK(test.n_objects() == 1);
    }
    SUBCASE("deterministic") {
        CHECK(split_train_test(t, {21, 9}).first == split_train_test(t, {21, 9}).first);
        CHECK(split_train_test(t, {21, 9}).first != split_train_test(t, {21, 10}).first);
    }
    SUBCASE("bad split") {
        CHECK(code_of([&] { split_train_test(t, {30, 1}); }) == ErrorCode::bad_split);
        CHECK(code_of([&] { split_train_test(t, {0, 1}); }) == ErrorCode::bad_split);
    }
}

TEST_CASE("generate_synthetic") {
    SUBCASE("shape and determinism") {
        const auto a = generate_synthetic(30, 7);
        CHECK(a.n_objects() == 30);
        CHECK(a.n_attributes() == 13);
        std::ostringstream x, y;
        write_csv(a, x);
        write_csv(generate_synthetic(30, 7), y);
        CHECK(x.str() == y.str());
        CHECK(generate_synthetic(30, 8) != a);
    }
    SUBCASE("minimal table") { CHECK(generate_synthetic(2, 1).n_objects() == 2); }
    SUBCASE("rejects fewer than 2 rows") { CHECK(code_of([] { generate_synthetic(1, 1); }) == ErrorCode::insufficient_data); }
    SUBCASE("ground truth is monotone in the layer thickness and the stope length") {
        const auto t = generate_synthetic(50, 13);
        const auto thick = *t.attribute_index("thickness_of_layer");
        const auto stope = *t.attribute_index("length_of_stope");
        for (std::size_t o = 0; o < t.n_objects(); ++o) {
            Vector row(t.row(o).begin(), t.row(o).end());
            for (auto attr : {thick, stope}) {
                Vector lo = row, hi = row;
                lo[attr] = attr == thick ? 0.9 : 70.0;
                hi[attr] = attr == thick ? 2.4 : 190.0;
                CHECK(synthetic_ground_truth(hi) >= synthetic_ground_truth(lo));
            }
        }
    }
    SUBCASE("decision only depends on the sensitive attributes") {
        const auto t = generate_synthetic(20, 2);
        const auto sensitive = synthetic_sensitive_attributes();
        for (std::size_t o = 0; o < t.n_objects(); ++o) {
            Vector row(t.row(o).begin(), t.row(o).end());
            const int truth = synthetic_ground_truth(row);
            for (std::size_t a = 0; a < row.size(); ++a) {
                if (std::find(sensitive.begin(), sensitive.end(), t.attributes()[a].name) != sensitive.end()) continue;
                Vector other = row;
                other[a] = t.value((o + 1) % t.n_objects(), a);
                CHECK(synthetic_ground_truth(other) == truth);
            }
        }
    }
}
