#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "mrbench/catalog.hpp"
#include "mrbench/engine.hpp"
#include "mrbench/error.hpp"
#include "mrbench/relations.hpp"
#include "mrbench/suts.hpp"

using namespace mrbench;

namespace {

const Catalog& catalog() {
    static const Catalog c = load_catalog(default_catalog_path());
    return c;
}

const MetamorphicRelation& mr(const std::string& id) {
    const auto* m = catalog().find_mr(id);
    if (!m) throw std::runtime_error("no MR " + id);
    return *m;
}

struct Trial {
    FollowUp followup;
    SutOutput source_output;
    SutOutput followup_output;
    CheckResult verdict;
};

Trial run_trial(const std::string& mr_id, const TestInput& source, const ParamValues& params,
                const std::string& variant = suts::kReferenceVariant) {
    const auto& m = mr(mr_id);
    const auto resolved = resolve_binding(m);
    const auto f = suts::get_variant(m.sut_id, variant);
    Trial t{apply_transform(resolved.transform, source, params), f(source), {}, {}};
    t.followup_output = f(t.followup.input);
    std::vector<SutOutput> companions;
    for (const auto& c : t.followup.companions) companions.push_back(f(c));
    const TrialContext ctx{source, t.followup, t.source_output, t.followup_output, companions, params,
                           resolved.tolerance};
    t.verdict = check_predicate(resolved.predicate, ctx);
    return t;
}

WeightedGraph triangle() {
    return WeightedGraph{{"A", "B", "C"}, {{"A", "B", 1.0}, {"B", "C", 1.0}, {"A", "C", 3.0}}, false, "A", "C"};
}

}  // namespace

TEST(Registry, HoldsExactlyTheFortyCatalogBindings) {
    std::set<std::string> used;
    for (const auto& m : catalog().mrs)
        if (m.binding) used.insert(*m.binding);
    const auto keys = RelationRegistry::instance().keys();
    EXPECT_EQ(used.size(), 40u);
    for (const auto& k : used) EXPECT_NE(std::find(keys.begin(), keys.end(), k), keys.end()) << k;
}

TEST(Registry, DuplicateKeyIsRejected) {
    RelationRegistry r;
    relations::register_sin(r);
    EXPECT_THROW(relations::register_sin(r), Error);
}

TEST(Resolve, QualitativeIsAPreconditionError) {
    EXPECT_THROW(resolve_binding(*catalog().mrs_for("WFS").front()), PreconditionError);
}

TEST(Resolve, CatalogRangesNarrowTheBounds) {
    const auto r = resolve_binding(mr("SUM-MR1"));
    EXPECT_EQ(r.transform.ranges.at("k"), (ParamRange{-10, 10}));
    EXPECT_EQ(r.tolerance, kExactTolerance);
    EXPECT_EQ(resolve_binding(mr("FFT-MR8")).tolerance, 0.05);
}

TEST(Resolve, BadBindingsAreReferenceErrors) {
    auto m = mr("SUM-MR1");
    m.binding = "sum.no_such_relation";
    EXPECT_THROW(resolve_binding(m), ReferenceError);
    m = mr("SUM-MR1");
    m.params["bogus"] = {0, 1};
    EXPECT_THROW(resolve_binding(m), ReferenceError);
    m = mr("SUM-MR1");
    m.params["k"] = {-1e9, 1e9};
    EXPECT_THROW(resolve_binding(m), ReferenceError);
    m = mr("SUM-MR1");
    m.sut_id = "SIN";
    EXPECT_THROW(resolve_binding(m), ReferenceError);
}

TEST(Transform, ParameterOutsideRangeIsRejected) {
    const auto r = resolve_binding(mr("SUM-MR1"));
    EXPECT_THROW(apply_transform(r.transform, NumberList{{1, 2}}, {{"k", 11.0}}), PreconditionError);
}

TEST(SinRelations, AdditiveAngle) {
    const auto t = run_trial("SIN-MR1", Angle{0.7}, {});
    EXPECT_NEAR(std::get<Angle>(t.followup.input).x, 0.7 + std::numbers::pi, 1e-15);
    EXPECT_TRUE(t.verdict.pass) << t.verdict.detail;
    const double residual = std::get<Scalar>(t.followup_output).value + std::get<Scalar>(t.source_output).value;
    EXPECT_LE(std::abs(residual), kExactTolerance);
}

TEST(SinRelations, NegativeAngleAgainstOffsetMutant) {
    const auto t = run_trial("SIN-MR5", Angle{0.7}, {}, "mutant-offset");
    EXPECT_FALSE(t.verdict.pass);
    const double residual = std::get<Scalar>(t.followup_output).value + std::get<Scalar>(t.source_output).value;
    EXPECT_NEAR(residual, 0.02, 1e-12);
}

TEST(SumRelations, AdditiveConstant) {
    const auto t = run_trial("SUM-MR1", NumberList{{1, 2, 3}}, {{"k", 2.0}});
    EXPECT_EQ(std::get<NumberList>(t.followup.input).values, (std::vector<double>{3, 4, 5}));
    EXPECT_TRUE(t.verdict.pass);
}

TEST(SumRelations, ReverseOrder) {
    const auto t = run_trial("SUM-MR5", NumberList{{1, 2, 3}}, {});
    EXPECT_EQ(std::get<NumberList>(t.followup.input).values, (std::vector<double>{3, 2, 1}));
    EXPECT_TRUE(t.verdict.pass);
}

TEST(SumRelations, ZeroAtTailDoesNotKillDropFirst) {
    const auto t = run_trial("SUM-MR7", NumberList{{4, 5, 6}}, {}, "mutant-drop-first");
    EXPECT_EQ(std::get<NumberList>(t.followup.input).values.back(), 0.0);
    EXPECT_TRUE(t.verdict.pass);
}

TEST(PathRelations, IncreaseOffPathEdge) {
    const auto t = run_trial("SHORTEST-PATH-MR1", triangle(), {{"edge", 2.0}, {"delta", 2.0}});
    auto want = triangle();
    want.edges[2].weight = 5.0;
    EXPECT_EQ(std::get<WeightedGraph>(t.followup.input), want);
    EXPECT_TRUE(t.verdict.pass) << t.verdict.detail;
}

TEST(PathRelations, ReverseSwapsTheQuery) {
    const auto t = run_trial("SHORTEST-PATH-MR6", triangle(), {});
    const auto& g = std::get<WeightedGraph>(t.followup.input);
    EXPECT_EQ(g.source, "C");
    EXPECT_EQ(g.target, "A");
    EXPECT_TRUE(t.verdict.pass);
}

TEST(RegressionRelations, PermutationThreeOneTwo) {
    const DataMatrix d{{{{0.0}, 1.0}, {{1.0}, 3.2}, {{2.0}, 4.9}}};
    const auto t = run_trial("REGRESSION-MR6", d, {{"order.0", 2}, {"order.1", 0}, {"order.2", 1}});
    const auto& rows = std::get<DataMatrix>(t.followup.input).rows;
    EXPECT_EQ(rows[0], d.rows[2]);
    EXPECT_EQ(rows[1], d.rows[0]);
    EXPECT_EQ(rows[2], d.rows[1]);
    EXPECT_TRUE(t.verdict.pass) << t.verdict.detail;
}

TEST(RegressionRelations, PermutationMustBeAPermutation) {
    const DataMatrix d{{{{0.0}, 1.0}, {{1.0}, 3.2}, {{2.0}, 4.9}}};
    EXPECT_THROW(run_trial("REGRESSION-MR6", d, {{"order.0", 0}, {"order.1", 0}, {"order.2", 1}}), PreconditionError);
}

TEST(FftRelations, AmplitudeScaling) {
    const TimeSeries ts{{1, 3, -2, 0.5, 4, 0, 1, 2}, 0.1};
    const auto t = run_trial("FFT-MR2", ts, {{"c", 2.0}});
    const auto& s = std::get<Spectrum>(t.source_output).bins;
    const auto& f = std::get<Spectrum>(t.followup_output).bins;
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_LE(std::abs(f[k] - 2.0 * s[k]), 1e-9);
    EXPECT_TRUE(t.verdict.pass);
}

TEST(FftRelations, DataShiftingMovesOnlyDc) {
    const TimeSeries ts{{1, 3, -2, 0.5, 4, 0, 1, 2}, 1.0};
    const auto t = run_trial("FFT-MR3", ts, {{"d", 1.0}});
    const auto& s = std::get<Spectrum>(t.source_output).bins;
    const auto& f = std::get<Spectrum>(t.followup_output).bins;
    EXPECT_NEAR((f[0] - s[0]).real(), 8.0, 1e-12);
    for (std::size_t k = 1; k < 8; ++k) EXPECT_LE(std::abs(f[k] - s[k]), 1e-9);
    EXPECT_TRUE(t.verdict.pass);
}

TEST(FftRelations, CorruptedBinsAreCaught) {
    const TimeSeries ts{{1, 3, -2, 0.5, 4, 0, 1, 2}, 1.0};
    const auto t = run_trial("FFT-MR2", ts, {{"c", 2.0}}, "mutant-skip-bitreverse");
    EXPECT_TRUE(t.verdict.pass);
    const auto u = run_trial("FFT-MR5", ts, {}, "mutant-skip-bitreverse");
    EXPECT_FALSE(u.verdict.pass);
}

// Every binding must keep the input variant and produce a valid follow-up on
// generated sources, with whatever parameters its own sampler draws.
TEST(Transforms, SampledFollowUpsAreValidInputs) {
    for (const auto& m : catalog().mrs) {
        if (!m.executable()) continue;
        const auto r = resolve_binding(m);
        const auto f = suts::get_variant(m.sut_id, suts::kReferenceVariant);
        for (std::uint64_t i = 0; i < 50; ++i) {
            const auto src = generate_source(m.sut_id, 3, i);
            Rng rng(trial_seed(3, m.mr_id, i));
            const auto params = r.transform.sample(src, f(src), rng, r.transform.ranges);
            const auto fu = apply_transform(r.transform, src, params);
            EXPECT_EQ(fu.input.index(), src.index()) << m.mr_id;
            EXPECT_EQ(check_input(fu.input), "") << m.mr_id;
        }
    }
}
