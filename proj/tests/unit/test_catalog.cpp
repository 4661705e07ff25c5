#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "mrbench/catalog.hpp"
#include "mrbench/error.hpp"
#include "mrbench/relations.hpp"
#include "mrbench/score_sheet.hpp"

using namespace mrbench;

namespace {

RubricScoreSheet updated_sheet(std::array<int, 7> levels) {
    RubricScoreSheet s;
    s.mr_id = "SIN-MR1";
    s.evaluator_id = "tester";
    s.scheme = Scheme::Updated;
    for (std::size_t i = 0; i < 7; ++i) s.scores[std::string(kUpdatedCriteria[i])] = levels[i];
    return s;
}

bool has_violation(const SheetValidation& v, ViolationKind kind) {
    return std::any_of(v.violations.begin(), v.violations.end(), [&](const Violation& x) { return x.kind == kind; });
}

}  // namespace

TEST(Catalog, BundledCatalogShape) {
    const auto c = load_catalog(default_catalog_path());
    EXPECT_EQ(c.suts.size(), 9u);
    EXPECT_EQ(c.mrs.size(), 72u);
    std::map<SutCategory, int> per_category;
    int executable = 0;
    for (const auto& m : c.mrs) {
        ++per_category[c.find_sut(m.sut_id)->category];
        executable += m.executable();
    }
    EXPECT_EQ(per_category[SutCategory::BasicComputational], 24);
    EXPECT_EQ(per_category[SutCategory::ComplexNoAi], 24);
    EXPECT_EQ(per_category[SutCategory::ComplexWithAi], 24);
    EXPECT_EQ(executable, 40);
    for (const auto& s : c.suts) EXPECT_EQ(c.mrs_for(s.id).size(), 8u) << s.id;
}

TEST(Catalog, EveryExecutableMrHasABinding) {
    const auto c = load_catalog(default_catalog_path());
    for (const auto& m : c.mrs) {
        EXPECT_EQ(m.executable(), m.binding.has_value()) << m.mr_id;
        EXPECT_EQ(m.executable(), c.find_sut(m.sut_id)->executable) << m.mr_id;
        if (m.binding) EXPECT_NE(RelationRegistry::instance().find(*m.binding), nullptr) << *m.binding;
    }
}

TEST(Catalog, EmptyText) {
    const auto c = parse_catalog("  \n");
    EXPECT_TRUE(c.suts.empty());
    EXPECT_TRUE(c.mrs.empty());
}

TEST(Catalog, DanglingSutReference) {
    const std::string text = R"({"suts": [], "mrs": [{"mr_id": "X-1", "sut_id": "FOO", "title": "t", "narrative": "n",
        "relation_class": {"kind": "QUALITATIVE"}}]})";
    EXPECT_THROW(parse_catalog(text), ReferenceError);
}

TEST(Catalog, MalformedInputsNameTheField) {
    try {
        parse_catalog(R"({"suts": [{"id": "A", "name": "a", "description": "", "inputs": "", "outputs": "",
            "category": "Weird", "executable": false}]})");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(e.context().find("category"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_catalog("{\"suts\": [1,"), ParseError);
}

TEST(Catalog, BindingRules) {
    EXPECT_TRUE(is_valid_binding_key("sin.additive_angle"));
    EXPECT_FALSE(is_valid_binding_key("Sin.Additive"));
    EXPECT_FALSE(is_valid_binding_key("nodot"));
    const auto with = [](const std::string& cls, const std::string& extra) {
        return R"({"suts": [{"id": "S", "name": "s", "description": "", "inputs": "", "outputs": "",
            "category": "BasicComputational", "executable": true}], "mrs": [{"mr_id": "S-1", "sut_id": "S",
            "title": "t", "narrative": "n", "relation_class": )" + cls + extra + "}]}";
    };
    EXPECT_THROW(parse_catalog(with(R"({"kind": "EXACT"})", "")), ParseError);
    EXPECT_THROW(parse_catalog(with(R"({"kind": "QUALITATIVE"})", R"(, "binding": "s.x")")), ParseError);
    EXPECT_THROW(parse_catalog(with(R"({"kind": "APPROX", "tolerance": 0})", R"(, "binding": "s.x")")), ParseError);
    EXPECT_THROW(parse_catalog(with(R"({"kind": "EXACT"})", R"(, "binding": "s.x", "params": {"k": {"min": 2, "max": 1}})")),
                 ParseError);
    EXPECT_NO_THROW(parse_catalog(with(R"({"kind": "APPROX", "tolerance": 0.5})", R"(, "binding": "s.x")")));
}

TEST(Catalog, RoundTripsThroughJson) {
    const auto c = load_catalog(default_catalog_path());
    const auto again = parse_catalog(catalog_to_json(c).dump());
    EXPECT_EQ(again.suts, c.suts);
    EXPECT_EQ(again.mrs, c.mrs);
}

TEST(ScoreSheet, CompletenessGate) {
    const auto v = validate_score_sheet(updated_sheet({0, 3, 3, 3, 3, 3, 3}));
    EXPECT_TRUE(has_violation(v, ViolationKind::GateCompleteness));
}

TEST(ScoreSheet, CorrectnessGate) {
    const auto v = validate_score_sheet(updated_sheet({1, 0, 3, 3, 3, 3, 3}));
    EXPECT_TRUE(has_violation(v, ViolationKind::GateCorrectness));
    EXPECT_TRUE(validate_score_sheet(updated_sheet({1, 0, 0, 0, 0, 0, 0})).ok());
}

TEST(ScoreSheet, AllMaximaIsValid) {
    const auto s = updated_sheet({1, 3, 3, 3, 3, 3, 3});
    EXPECT_TRUE(validate_score_sheet(s).ok());
    EXPECT_EQ(s.raw_total(), 19);
    EXPECT_EQ(scheme_max_total(Scheme::Updated), 19);
    EXPECT_EQ(scheme_max_total(Scheme::Legacy), 35);
}

TEST(ScoreSheet, LegacyRange) {
    RubricScoreSheet s;
    s.mr_id = "X";
    s.scheme = Scheme::Legacy;
    for (auto c : kLegacyCriteria) s.scores[std::string(c)] = 3;
    s.scores["correctness"] = 6;
    EXPECT_TRUE(has_violation(validate_score_sheet(s), ViolationKind::OutOfRange));
}

TEST(ScoreSheet, MissingAndUnknownCriteria) {
    auto s = updated_sheet({1, 3, 3, 3, 3, 3, 3});
    s.scores.erase("novelty");
    s.scores["relevance_to_safety"] = 2;
    const auto v = validate_score_sheet(s);
    EXPECT_TRUE(has_violation(v, ViolationKind::MissingCriterion));
    EXPECT_TRUE(has_violation(v, ViolationKind::UnknownCriterion));
}

TEST(ScoreSheet, ApplyGatesZeroesDependents) {
    const auto g = apply_gates(updated_sheet({0, 3, 3, 3, 3, 3, 3}));
    EXPECT_TRUE(validate_score_sheet(g).ok());
    EXPECT_EQ(g.raw_total(), 0);
    const auto h = apply_gates(updated_sheet({1, 0, 2, 2, 2, 2, 2}));
    EXPECT_EQ(h.raw_total(), 1);
}

TEST(ScoreSheet, JsonRoundTrip) {
    auto s = updated_sheet({1, 2, 3, 1, 2, 3, 0});
    s.flags = {"gate-corrected"};
    s.created_at = "2024-01-15T00:00:00Z";
    s.evaluator_kind = EvaluatorKind::Llm;
    const auto path = std::filesystem::temp_directory_path() / "mrbench-sheet-roundtrip.json";
    save_score_sheet(s, path);
    EXPECT_EQ(load_score_sheet(path), s);
    std::filesystem::remove(path);
}

TEST(ScoreSheet, FractionalLevelIsAParseError) {
    nlohmann::json j = updated_sheet({1, 3, 3, 3, 3, 3, 3});
    j["scores"]["clarity"] = 2.5;
    EXPECT_THROW(j.get<RubricScoreSheet>(), ParseError);
}
