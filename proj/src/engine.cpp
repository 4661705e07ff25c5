#include "mrbench/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "mrbench/error.hpp"
#include "mrbench/rng.hpp"
#include "mrbench/suts.hpp"

namespace mrbench {
namespace {

using std::numbers::pi;

Angle gen_angle(Rng& rng) { return {rng.uniform(-10.0 * pi, 10.0 * pi)}; }

NumberList gen_list(Rng& rng) {
    NumberList out;
    const auto n = rng.integer(1, 50);
    for (std::int64_t i = 0; i < n; ++i) out.values.push_back(rng.uniform(-100.0, 100.0));
    return out;
}

WeightedGraph gen_graph(Rng& rng) {
    WeightedGraph g;
    const auto n = static_cast<std::size_t>(rng.integer(4, 10));
    for (std::size_t i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
    auto linked = [&](std::size_t a, std::size_t b) {
        return std::any_of(g.edges.begin(), g.edges.end(), [&](const Edge& e) {
            return (e.u == g.vertices[a] && e.v == g.vertices[b]) || (e.u == g.vertices[b] && e.v == g.vertices[a]);
        });
    };
    for (std::size_t i = 1; i < n; ++i) g.edges.push_back({g.vertices[rng.index(i)], g.vertices[i], rng.uniform(0.1, 10.0)});
    const auto extra = rng.integer(0, static_cast<std::int64_t>(n));
    for (std::int64_t i = 0; i < extra; ++i) {
        const auto a = rng.index(n), b = rng.index(n);
        if (a == b || linked(a, b)) continue;
        g.edges.push_back({g.vertices[a], g.vertices[b], rng.uniform(0.1, 10.0)});
    }
    const auto s = rng.index(n);
    auto t = rng.index(n - 1);
    if (t >= s) ++t;
    g.source = g.vertices[s];
    g.target = g.vertices[t];
    return g;
}

DataMatrix gen_data(Rng& rng) {
    const auto p = static_cast<std::size_t>(rng.integer(1, 5));
    const auto n = rng.integer(std::max<std::int64_t>(5, static_cast<std::int64_t>(p) + 3), 50);
    std::vector<double> beta(p);
    for (auto& b : beta) b = rng.uniform(-5.0, 5.0);
    const double intercept = rng.uniform(-5.0, 5.0);
    beta[rng.index(p)] = 0.0;
    DataMatrix out;
    for (std::int64_t i = 0; i < n; ++i) {
        DataRow row;
        row.response = intercept;
        for (std::size_t j = 0; j < p; ++j) {
            row.predictors.push_back(rng.uniform(-10.0, 10.0));
            row.response += beta[j] * row.predictors[j];
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

TimeSeries gen_series(Rng& rng) {
    static constexpr double kIntervals[] = {0.001, 0.01, 0.1, 1.0};
    const std::size_t n = std::size_t{16} << rng.integer(0, 4);
    TimeSeries out{std::vector<double>(n, 0.0), kIntervals[rng.index(4)]};
    const auto wanted = rng.integer(1, 3);
    std::vector<std::int64_t> bins;
    const auto hi = static_cast<std::int64_t>(n / 2 - 2);
    for (int attempt = 0; attempt < 64 && static_cast<std::int64_t>(bins.size()) < wanted; ++attempt) {
        const auto k = rng.integer(2, hi);
        if (std::all_of(bins.begin(), bins.end(), [&](std::int64_t b) { return std::abs(b - k) >= 4; }))
            bins.push_back(k);
    }
    for (auto k : bins) {
        const double a = rng.uniform(0.5, 5.0);
        const double phase = rng.uniform(0.0, 2.0 * pi);
        for (std::size_t i = 0; i < n; ++i)
            out.samples[i] += a * std::cos(2.0 * pi * static_cast<double>(k) * static_cast<double>(i) /
                                               static_cast<double>(n) + phase);
    }
    if (rng.coin(0.5)) {
        const double dc = rng.uniform(-5.0, 5.0);
        for (auto& v : out.samples) v += dc;
    }
    return out;
}

struct TrialOutcome {
    bool violated = false;
    Witness witness;
};

SutOutput run_sut(const suts::SutFunction& f, const TestInput& in) { return f(in); }

std::string describe(const std::exception& e) { return std::string("trial raised: ") + e.what(); }

TrialOutcome run_trial(const ResolvedRelation& rel, const suts::SutFunction& sut, const std::string& sut_id,
                       const std::string& mr_id, std::uint64_t seed, std::uint64_t index, double tolerance) {
    TrialOutcome out;
    Witness& w = out.witness;
    w.trial_index = index;
    w.trial_seed = trial_seed(seed, mr_id, index);
    w.source_input = generate_source(sut_id, seed, index);
    w.followup_input = w.source_input;
    try {
        w.source_output = run_sut(sut, w.source_input);
        Rng rng(w.trial_seed);
        w.params = rel.transform.sample(w.source_input, w.source_output, rng, rel.transform.ranges);
        FollowUp follow = apply_transform(rel.transform, w.source_input, w.params);
        w.followup_input = follow.input;
        w.companion_inputs = follow.companions;
        w.followup_output = run_sut(sut, follow.input);
        for (const auto& c : follow.companions) w.companion_outputs.push_back(run_sut(sut, c));
        const TrialContext ctx{w.source_input, follow,   w.source_output, w.followup_output,
                               w.companion_outputs, w.params, tolerance};
        const CheckResult verdict = check_predicate(rel.predicate, ctx);
        out.violated = !verdict.pass;
        w.detail = verdict.detail;
    } catch (const std::exception& e) {
        out.violated = true;
        w.detail = describe(e);
    }
    return out;
}

MtRunReport run_one(const Catalog& catalog, const CampaignConfig& cfg, const std::string& mr_id,
                    const suts::SutFunction& sut, unsigned threads) {
    MtRunReport report;
    report.mr_id = mr_id;
    report.sut_variant = cfg.variant_id;
    report.seed = cfg.seed;
    const MetamorphicRelation* mr = catalog.find_mr(mr_id);
    if (!mr) {
        report.error = "unknown MR '" + mr_id + "'";
        return report;
    }
    report.tolerance_used = cfg.tolerance_override.value_or(mr->effective_tolerance());
    report.tolerance_overridden = cfg.tolerance_override.has_value();
    if (mr->sut_id != cfg.sut_id) {
        report.error = mr_id + " belongs to " + mr->sut_id + ", not " + cfg.sut_id;
        return report;
    }
    ResolvedRelation rel;
    try {
        rel = resolve_binding(*mr);
    } catch (const std::exception& e) {
        report.error = e.what();
        return report;
    }

    std::vector<TrialOutcome> outcomes(cfg.trials);
    const auto work = [&](std::size_t worker, std::size_t workers) {
        for (std::uint64_t i = worker; i < cfg.trials; i += workers)
            outcomes[i] = run_trial(rel, sut, cfg.sut_id, mr_id, cfg.seed, i, report.tolerance_used);
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(threads, cfg.trials));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
    }

    report.trials = cfg.trials;
    for (auto& o : outcomes) {
        if (!o.violated) continue;
        ++report.violations;
        if (report.witnesses.size() < cfg.witness_cap) report.witnesses.push_back(std::move(o.witness));
    }
    return report;
}

}  // namespace

TestInput generate_source(const std::string& sut_id, std::uint64_t seed, std::uint64_t index) {
    Rng rng(derive_seed(seed, hash_name(sut_id), index));
    if (sut_id == "SIN") return gen_angle(rng);
    if (sut_id == "SUM") return gen_list(rng);
    if (sut_id == "SHORTEST-PATH") return gen_graph(rng);
    if (sut_id == "REGRESSION") return gen_data(rng);
    if (sut_id == "FFT") return gen_series(rng);
    throw PreconditionError("no source generator for '" + sut_id + "': it has no executable implementation");
}

std::uint64_t trial_seed(std::uint64_t seed, const std::string& mr_id, std::uint64_t index) {
    return derive_seed(seed, hash_name(mr_id), index);
}

std::vector<MtRunReport> run_campaign(const Catalog& catalog, const CampaignConfig& cfg) {
    if (cfg.trials < 1) throw PreconditionError("trials must be at least 1");
    const SutDescriptor* sut = catalog.find_sut(cfg.sut_id);
    if (!sut) throw ReferenceError("unknown SUT '" + cfg.sut_id + "'");
    if (!suts::is_executable(cfg.sut_id))
        throw PreconditionError(cfg.sut_id + " is not executable: its MRs are QUALITATIVE and cannot be run");
    const auto function = suts::get_variant(cfg.sut_id, cfg.variant_id);

    std::vector<std::string> ids = cfg.mr_ids;
    if (ids.empty())
        for (const auto* mr : catalog.mrs_for(cfg.sut_id)) ids.push_back(mr->mr_id);

    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<MtRunReport> reports;
    for (const auto& id : ids) reports.push_back(run_one(catalog, cfg, id, function, threads));
    return reports;
}

CheckResult replay_witness(const MetamorphicRelation& mr, const std::string& variant_id, const Witness& witness,
                           std::optional<double> tolerance) {
    const ResolvedRelation rel = resolve_binding(mr);
    const auto sut = suts::get_variant(mr.sut_id, variant_id);
    try {
        Witness w;
        w.source_output = sut(witness.source_input);
        FollowUp follow = apply_transform(rel.transform, witness.source_input, witness.params);
        w.followup_output = sut(follow.input);
        for (const auto& c : follow.companions) w.companion_outputs.push_back(sut(c));
        const TrialContext ctx{witness.source_input, follow,          w.source_output,
                               w.followup_output,   w.companion_outputs, witness.params,
                               tolerance.value_or(rel.tolerance)};
        return check_predicate(rel.predicate, ctx);
    } catch (const std::exception& e) {
        return CheckResult::fail(describe(e));
    }
}

std::size_t KillMatrix::kills(std::size_t variant) const {
    std::size_t n = 0;
    for (std::size_t m = 0; m < mr_ids.size(); ++m) n += killed(variant, m) ? 1 : 0;
    return n;
}

KillMatrix mutation_matrix(const Catalog& catalog, const std::string& sut_id, std::uint64_t trials,
                           std::uint64_t seed) {
    KillMatrix km;
    km.sut_id = sut_id;
    for (const auto* mr : catalog.mrs_for(sut_id))
        if (mr->executable()) km.mr_ids.push_back(mr->mr_id);
    for (const auto* v : suts::variants_for(sut_id)) km.variants.push_back(v->info.variant_id);
    if (km.variants.empty())
        throw PreconditionError(sut_id + " is not executable: its MRs are QUALITATIVE and cannot be run");
    for (const auto& variant : km.variants) {
        CampaignConfig cfg;
        cfg.sut_id = sut_id;
        cfg.variant_id = variant;
        cfg.mr_ids = km.mr_ids;
        cfg.trials = trials;
        cfg.seed = seed;
        km.reports.push_back(run_campaign(catalog, cfg));
    }
    return km;
}

nlohmann::json campaign_to_json(const CampaignConfig& cfg, const std::vector<MtRunReport>& reports) {
    nlohmann::json config{{"sut_id", cfg.sut_id},     {"variant_id", cfg.variant_id},
                          {"mr_ids", cfg.mr_ids},     {"trials", cfg.trials},
                          {"seed", cfg.seed},         {"witness_cap", cfg.witness_cap}};
    config["tolerance_override"] = cfg.tolerance_override ? nlohmann::json(*cfg.tolerance_override) : nlohmann::json(nullptr);
    return {{"config", config}, {"reports", reports}};
}

nlohmann::json kill_matrix_to_json(const KillMatrix& km) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t v = 0; v < km.variants.size(); ++v) {
        nlohmann::json cells = nlohmann::json::object();
        for (std::size_t m = 0; m < km.mr_ids.size(); ++m)
            cells[km.mr_ids[m]] = {{"killed", km.killed(v, m)}, {"violations", km.reports[v][m].violations},
                                   {"trials", km.reports[v][m].trials}};
        rows.push_back({{"variant", km.variants[v]}, {"kills", km.kills(v)}, {"cells", cells}});
    }
    return {{"sut_id", km.sut_id}, {"mr_ids", km.mr_ids}, {"rows", rows}};
}

std::string render_kill_matrix(const KillMatrix& km) {
    std::size_t width = 7;
    for (const auto& v : km.variants) width = std::max(width, v.size());
    std::ostringstream out;
    out << std::string(width, ' ');
    for (std::size_t m = 0; m < km.mr_ids.size(); ++m) out << "  MR" << (m + 1);
    out << "  kills\n";
    for (std::size_t v = 0; v < km.variants.size(); ++v) {
        out << km.variants[v] << std::string(width - km.variants[v].size(), ' ');
        for (std::size_t m = 0; m < km.mr_ids.size(); ++m) {
            const std::string label = "MR" + std::to_string(m + 1);
            out << std::string(label.size() + 1, ' ') << (km.killed(v, m) ? 'X' : '.');
        }
        out << "  " << km.kills(v) << '/' << km.mr_ids.size() << '\n';
    }
    return out.str();
}

}  // namespace mrbench
