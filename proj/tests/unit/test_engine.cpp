#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "mrbench/catalog.hpp"
#include "mrbench/engine.hpp"
#include "mrbench/error.hpp"
#include "mrbench/suts.hpp"

using namespace mrbench;

namespace {

const Catalog& catalog() {
    static const Catalog c = load_catalog(default_catalog_path());
    return c;
}

CampaignConfig config(const std::string& sut, std::uint64_t trials, std::vector<std::string> mrs = {},
                      const std::string& variant = suts::kReferenceVariant) {
    CampaignConfig c;
    c.sut_id = sut;
    c.variant_id = variant;
    c.trials = trials;
    c.mr_ids = std::move(mrs);
    return c;
}

bool connected(const WeightedGraph& g) {
    std::set<std::string> seen{g.vertices.front()};
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& e : g.edges)
            if (seen.count(e.u) != seen.count(e.v)) grew = seen.insert(e.u).second || seen.insert(e.v).second || grew;
    }
    return seen.size() == g.vertices.size();
}

}  // namespace

TEST(Generators, SinDomain) {
    for (std::uint64_t i = 0; i < 500; ++i) {
        const double x = std::get<Angle>(generate_source("SIN", 1, i)).x;
        EXPECT_GE(x, -10 * std::numbers::pi);
        EXPECT_LE(x, 10 * std::numbers::pi);
    }
}

TEST(Generators, GraphDomain) {
    for (std::uint64_t i = 0; i < 500; ++i) {
        const auto g = std::get<WeightedGraph>(generate_source("SHORTEST-PATH", 2, i));
        EXPECT_GE(g.vertices.size(), 4u);
        EXPECT_LE(g.vertices.size(), 10u);
        EXPECT_TRUE(connected(g));
        for (const auto& e : g.edges) {
            EXPECT_GE(e.weight, 0.1);
            EXPECT_LE(e.weight, 10.0);
        }
    }
}

TEST(Generators, AllGeneratedInputsAreValid) {
    for (const auto& sut : suts::executable_sut_ids())
        for (std::uint64_t i = 0; i < 200; ++i) EXPECT_EQ(check_input(generate_source(sut, 5, i)), "") << sut;
}

TEST(Generators, Deterministic) {
    for (const auto& sut : suts::executable_sut_ids()) {
        EXPECT_EQ(generate_source(sut, 42, 7), generate_source(sut, 42, 7)) << sut;
        EXPECT_NE(generate_source(sut, 42, 7), generate_source(sut, 43, 7)) << sut;
    }
    EXPECT_THROW(generate_source("WFS", 0, 0), PreconditionError);
}

TEST(Campaign, SinReferenceIsClean) {
    const auto reports = run_campaign(catalog(), config("SIN", 1000));
    ASSERT_EQ(reports.size(), 8u);
    for (const auto& r : reports) {
        EXPECT_EQ(r.violations, 0u) << r.mr_id;
        EXPECT_EQ(r.trials, 1000u);
        EXPECT_FALSE(r.error);
    }
}

TEST(Campaign, OffsetMutantBreaksNegativeAngleEverywhere) {
    const auto reports = run_campaign(catalog(), config("SIN", 100, {"SIN-MR5"}, "mutant-offset"));
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].violations, 100u);
    EXPECT_EQ(reports[0].witnesses.size(), 10u);
}

TEST(Campaign, RegressionPermutationIsClean) {
    const auto reports = run_campaign(catalog(), config("REGRESSION", 200, {"REGRESSION-MR6"}));
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].violations, 0u);
}

TEST(Campaign, Preconditions) {
    EXPECT_THROW(run_campaign(catalog(), config("SIN", 0)), PreconditionError);
    EXPECT_THROW(run_campaign(catalog(), config("WFS", 10)), PreconditionError);
    EXPECT_THROW(run_campaign(catalog(), config("NOPE", 10)), Error);
    EXPECT_THROW(run_campaign(catalog(), config("SIN", 10, {}, "mutant-nope")), ReferenceError);
}

TEST(Campaign, UnknownMrIsReportedNotThrown) {
    const auto reports = run_campaign(catalog(), config("SIN", 10, {"SIN-MR1", "SIN-MR99"}));
    ASSERT_EQ(reports.size(), 2u);
    EXPECT_FALSE(reports[0].error);
    ASSERT_TRUE(reports[1].error);
}

TEST(Campaign, ToleranceOverrideIsRecorded) {
    auto c = config("SIN", 50, {"SIN-MR5"}, "mutant-offset");
    c.tolerance_override = 0.05;
    const auto r = run_campaign(catalog(), c).at(0);
    EXPECT_TRUE(r.tolerance_overridden);
    EXPECT_EQ(r.tolerance_used, 0.05);
    EXPECT_EQ(r.violations, 0u);
}

TEST(Campaign, ThreadCountDoesNotChangeResults) {
    auto a = config("SHORTEST-PATH", 200, {}, "mutant-min-hop");
    a.threads = 1;
    auto b = a;
    b.threads = 4;
    EXPECT_EQ(campaign_to_json(a, run_campaign(catalog(), a)).dump(),
              campaign_to_json(a, run_campaign(catalog(), b)).dump());
}

TEST(Campaign, WitnessesReplay) {
    const auto reports = run_campaign(catalog(), config("SIN", 100, {}, "mutant-offset"));
    for (const auto& r : reports) {
        const auto* m = catalog().find_mr(r.mr_id);
        for (const auto& w : r.witnesses) {
            EXPECT_FALSE(replay_witness(*m, "mutant-offset", w).pass) << r.mr_id;
            EXPECT_TRUE(replay_witness(*m, suts::kReferenceVariant, w).pass) << r.mr_id;
            EXPECT_EQ(w.trial_seed, trial_seed(0, r.mr_id, w.trial_index));
        }
    }
}

TEST(Campaign, ReportJsonRoundTrips) {
    const auto reports = run_campaign(catalog(), config("SUM", 30, {}, "mutant-double-last"));
    for (const auto& r : reports) {
        const nlohmann::json j = r;
        EXPECT_EQ(nlohmann::json(j.get<MtRunReport>()).dump(), j.dump());
    }
    const auto csv = reports_to_csv(reports);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "mr_id,sut_variant,trials,violations,seed,tolerance_used,error");
}

TEST(KillMatrix, SinOffsetAndControlRow) {
    const auto km = mutation_matrix(catalog(), "SIN", 100);
    ASSERT_EQ(km.variants.front(), suts::kReferenceVariant);
    EXPECT_EQ(km.kills(0), 0u);
    const auto offset = std::find(km.variants.begin(), km.variants.end(), "mutant-offset") - km.variants.begin();
    EXPECT_GE(km.kills(static_cast<std::size_t>(offset)), 6u);
    EXPECT_NE(render_kill_matrix(km).find("mutant-offset"), std::string::npos);
}

TEST(KillMatrix, DropFirstSurvivesZeroAtTail) {
    const auto km = mutation_matrix(catalog(), "SUM", 100);
    const auto v = static_cast<std::size_t>(std::find(km.variants.begin(), km.variants.end(), "mutant-drop-first") -
                                            km.variants.begin());
    const auto m = static_cast<std::size_t>(std::find(km.mr_ids.begin(), km.mr_ids.end(), "SUM-MR7") -
                                            km.mr_ids.begin());
    EXPECT_FALSE(km.killed(v, m));
    EXPECT_GE(km.kills(v), 1u);
}
