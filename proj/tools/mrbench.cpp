// mrbench command-line interface.

#include <unistd.h>

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mrbench/catalog.hpp"
#include "mrbench/engine.hpp"
#include "mrbench/error.hpp"
#include "mrbench/llm.hpp"
#include "mrbench/rubric.hpp"
#include "mrbench/suts.hpp"

namespace fs = std::filesystem;
using namespace mrbench;

namespace {

struct Globals {
    std::string catalog_path;
    std::uint64_t seed = 0;
    std::string out;
    std::string timestamp;
};

void log(const std::string& msg) { std::cerr << msg << '\n'; }

Catalog open_catalog(const Globals& g) {
    return load_catalog(g.catalog_path.empty() ? default_catalog_path() : fs::path(g.catalog_path));
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("cannot write " + path.string());
    log("wrote " + path.string());
}

/// --timestamp, else SOURCE_DATE_EPOCH, else the wall clock (UTC).
std::string creation_time(const Globals& g) {
    if (!g.timestamp.empty()) return g.timestamp;
    std::time_t t = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

llm::GatewayConfig gateway(const std::string& replay) {
    auto cfg = llm::GatewayConfig::from_env();
    if (!replay.empty()) {
        cfg.replay_dir = replay;
        cfg.api_key.clear();
    }
    log(cfg.live() ? "llm: live endpoint " + cfg.base_url + " (model " + cfg.model + ")"
                   : "llm: replaying fixtures from " + cfg.replay_dir.string());
    return cfg;
}

std::string slug(const std::string& s) {
    std::string out;
    for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '-';
    return out;
}

// ---- run ----

struct RunArgs {
    std::string sut;
    std::string variant = suts::kReferenceVariant;
    std::vector<std::string> mrs;
    std::uint64_t trials = 1000;
    std::optional<double> tolerance;
    std::size_t witnesses = 10;
    unsigned threads = 0;
};

int cmd_run(const Globals& g, const RunArgs& a) {
    const auto catalog = open_catalog(g);
    CampaignConfig cfg;
    cfg.sut_id = a.sut;
    cfg.variant_id = a.variant;
    cfg.mr_ids = a.mrs;
    cfg.trials = a.trials;
    cfg.seed = g.seed;
    cfg.tolerance_override = a.tolerance;
    cfg.witness_cap = a.witnesses;
    cfg.threads = a.threads;
    const auto reports = run_campaign(catalog, cfg);

    const bool reference = suts::find_variant(a.sut, a.variant).info.kind == suts::VariantKind::Reference;
    bool failed = false;
    std::ostringstream summary;
    for (const auto& r : reports) {
        summary << r.mr_id << ": " << r.violations << "/" << r.trials << " violations";
        if (r.error) summary << " (error: " << *r.error << ")";
        summary << '\n';
        if (reference && (r.violations > 0 || r.error)) failed = true;
    }
    const std::string doc = campaign_to_json(cfg, reports).dump(2) + "\n";
    if (g.out.empty()) {
        std::cout << doc;
        std::cerr << summary.str();
    } else {
        const std::string stem = slug(a.sut) + "-" + slug(a.variant);
        write_file(fs::path(g.out) / (stem + ".json"), doc);
        write_file(fs::path(g.out) / (stem + ".csv"), reports_to_csv(reports));
        std::cout << summary.str();
    }
    if (failed) log("reference variant violated at least one relation");
    return failed ? 1 : 0;
}

// ---- mutate ----

int cmd_mutate(const Globals& g, const std::string& sut, std::uint64_t trials) {
    const auto catalog = open_catalog(g);
    const auto km = mutation_matrix(catalog, sut, trials, g.seed);
    const std::string doc = kill_matrix_to_json(km).dump(2) + "\n";
    if (g.out.empty()) {
        std::cout << doc;
        std::cerr << render_kill_matrix(km);
    } else {
        write_file(fs::path(g.out) / (slug(sut) + "-kill-matrix.json"), doc);
        std::cout << render_kill_matrix(km);
    }
    bool controls_clean = true;
    for (std::size_t m = 0; m < km.mr_ids.size(); ++m) controls_clean = controls_clean && !km.killed(0, m);
    return controls_clean ? 0 : 1;
}

// ---- score ----

struct ScoreArgs {
    std::string mr;
    std::string mr_file;
    std::string evaluator = "human";
    std::string scheme = "updated";
    std::string answers;
};

int cmd_score(const Globals& g, const ScoreArgs& a) {
    MetamorphicRelation mr;
    if (!a.mr_file.empty()) {
        std::ifstream in(a.mr_file);
        if (!in) throw Error("cannot open " + a.mr_file);
        mr = parse_mr_record(nlohmann::json::parse(in));
    } else if (!a.mr.empty()) {
        const auto catalog = open_catalog(g);
        const auto* found = catalog.find_mr(a.mr);
        if (!found) throw ReferenceError("unknown MR '" + a.mr + "'");
        mr = *found;
    } else {
        throw PreconditionError("score needs --mr or --mr-file");
    }
    const Scheme scheme = scheme_from_string(a.scheme);

    RubricScoreSheet sheet;
    if (!a.answers.empty()) {
        std::ifstream in(a.answers);
        if (!in) throw Error("cannot open " + a.answers);
        sheet = score_interactively(mr, scheme, a.evaluator, in, std::cerr);
    } else {
        if (!::isatty(STDIN_FILENO)) throw PreconditionError("stdin is not a terminal; pass --answers FILE");
        sheet = score_interactively(mr, scheme, a.evaluator, std::cin, std::cerr);
    }
    sheet.created_at = creation_time(g);
    score(sheet);

    const std::string doc = nlohmann::json(sheet).dump(2) + "\n";
    if (g.out.empty()) std::cout << doc;
    else write_file(fs::path(g.out) / (slug(mr.mr_id) + "-" + slug(a.evaluator) + ".json"), doc);
    return 0;
}

// ---- generate / evaluate ----

int cmd_generate(const Globals& g, const std::string& sut_id, int count, const std::string& replay) {
    const auto catalog = open_catalog(g);
    std::vector<const SutDescriptor*> targets;
    if (sut_id == "all") {
        for (const auto& s : catalog.suts) targets.push_back(&s);
    } else {
        const auto* s = catalog.find_sut(sut_id);
        if (!s) throw ReferenceError("unknown SUT '" + sut_id + "'");
        targets.push_back(s);
    }
    llm::Session session(gateway(replay));
    nlohmann::json all = nlohmann::json::array();
    bool shortfall = false;
    for (const auto* sut : targets) {
        const auto result = llm::generate_mrs(*sut, count, session);
        nlohmann::json drafts = nlohmann::json::array();
        for (const auto& d : result.drafts)
            drafts.push_back({{"index", d.index}, {"title", d.title}, {"narrative", d.narrative}});
        all.push_back({{"sut_id", sut->id}, {"requested", count}, {"parsed", result.drafts.size()}, {"drafts", drafts}});
        log(sut->id + ": " + std::to_string(result.drafts.size()) + " of " + std::to_string(count) + " drafts");
        if (result.shortfall()) {
            shortfall = true;
            log(sut->id + ": shortfall, raw reply follows\n" + result.raw_text);
        }
    }
    const std::string doc = all.dump(2) + "\n";
    if (g.out.empty()) std::cout << doc;
    else write_file(fs::path(g.out) / (sut_id == "all" ? "drafts.json" : slug(sut_id) + "-drafts.json"), doc);
    return shortfall ? 3 : 0;
}

int cmd_evaluate(const Globals& g, const std::string& mr_id, const std::string& sut_id, const std::string& replay,
                 const std::string& generator) {
    const auto catalog = open_catalog(g);
    std::vector<const MetamorphicRelation*> targets;
    if (!mr_id.empty()) {
        const auto* mr = catalog.find_mr(mr_id);
        if (!mr) throw ReferenceError("unknown MR '" + mr_id + "'");
        targets.push_back(mr);
    } else if (sut_id == "all") {
        for (const auto& mr : catalog.mrs) targets.push_back(&mr);
    } else if (!sut_id.empty()) {
        targets = catalog.mrs_for(sut_id);
        if (targets.empty()) throw ReferenceError("no MRs for SUT '" + sut_id + "'");
    } else {
        throw PreconditionError("evaluate needs --mr or --sut");
    }
    llm::Session session(gateway(replay));
    const auto persona = llm::EvaluatorPersona::standard();
    llm::EvaluationOptions opts;
    opts.created_at = creation_time(g);
    opts.generator_model = generator;
    std::vector<RubricScoreSheet> sheets;
    for (const auto* mr : targets) {
        sheets.push_back(llm::evaluate_mr(*mr, catalog.find_sut(mr->sut_id), persona, session, opts));
        const auto& s = sheets.back();
        log(s.mr_id + ": " + std::to_string(score(s)) + "/19" +
            (s.flags.empty() ? "" : " [" + s.flags.front() + "]"));
    }
    if (g.out.empty()) {
        std::cout << nlohmann::json(sheets).dump(2) << "\n";
    } else {
        for (const auto& s : sheets) write_file(fs::path(g.out) / (slug(s.mr_id) + ".json"), nlohmann::json(s).dump(2) + "\n");
        write_file(fs::path(g.out) / "sheets.csv", sheets_to_csv(sheets));
    }
    return 0;
}

// ---- report ----

int cmd_report(const Globals& g, const std::vector<std::string>& dirs, const std::string& group_by, bool csv) {
    ScoreCorpus corpus;
    for (const auto& d : dirs) {
        auto part = load_score_dir(d);
        corpus.sheets.insert(corpus.sheets.end(), part.sheets.begin(), part.sheets.end());
        corpus.group_means.insert(corpus.group_means.end(), part.group_means.begin(), part.group_means.end());
    }
    if (corpus.empty()) throw PreconditionError("no score sheets found");
    const GroupBy by = group_by_from_string(group_by);
    std::optional<Catalog> catalog;
    if (by == GroupBy::Category) catalog = open_catalog(g);
    const auto rows = aggregate(corpus, by, catalog ? &*catalog : nullptr);

    std::vector<AggregateRow> human, machine;
    for (const auto& r : rows) (r.evaluator_kind == EvaluatorKind::Human ? human : machine).push_back(r);
    std::string text = render_aggregate(rows);
    if (!human.empty() && !machine.empty()) text += "\n" + render_comparison(compare(human, machine));

    if (csv) std::cout << aggregate_to_csv(rows);
    else std::cout << text;
    if (!g.out.empty()) {
        write_file(fs::path(g.out) / "aggregate.csv", aggregate_to_csv(rows));
        write_file(fs::path(g.out) / "aggregate.txt", text);
        write_file(fs::path(g.out) / "aggregate.json", aggregate_to_json(rows).dump(2) + "\n");
        if (!corpus.sheets.empty()) write_file(fs::path(g.out) / "sheets.csv", sheets_to_csv(corpus.sheets));
    }
    return 0;
}

// ---- validate ----

int cmd_validate(const Globals& g, const std::vector<std::string>& sheets) {
    int problems = 0;
    const auto catalog = open_catalog(g);
    std::size_t bound = 0;
    for (const auto& mr : catalog.mrs) {
        if (!mr.executable()) continue;
        try {
            resolve_binding(mr);
            ++bound;
        } catch (const std::exception& e) {
            ++problems;
            std::cout << mr.mr_id << ": " << e.what() << '\n';
        }
    }
    std::cout << "catalog: " << catalog.suts.size() << " SUTs, " << catalog.mrs.size() << " MRs, " << bound
              << " executable bindings resolved\n";
    for (const auto& path : sheets) {
        ScoreCorpus corpus = load_score_dir(path);
        for (const auto& s : corpus.sheets) {
            const auto v = validate_score_sheet(s);
            for (const auto& x : v.violations) {
                ++problems;
                std::cout << path << " " << s.mr_id << ": " << to_string(x.kind) << ": " << x.message << '\n';
            }
        }
        std::cout << path << ": " << corpus.sheets.size() << " sheets, " << corpus.group_means.size()
                  << " group-means records\n";
    }
    return problems ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metamorphic testing workbench: campaigns, rubric scoring and LLM-assisted MR work"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--catalog", g.catalog_path, "Catalog JSON (default: bundled data/catalog.json)");
    app.add_option("--seed", g.seed, "Seed for every random draw");
    app.add_option("--out", g.out, "Output directory (default: machine-readable output on stdout)");
    app.add_option("--timestamp", g.timestamp, "created_at value for new score sheets");

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run MT campaigns for one SUT variant");
    run_cmd->add_option("--sut", run.sut, "SUT id")->required();
    run_cmd->add_option("--variant", run.variant, "Variant id (reference or a mutant)");
    run_cmd->add_option("--mr", run.mrs, "Restrict to these MR ids");
    run_cmd->add_option("--trials", run.trials, "Trials per MR")->check(CLI::PositiveNumber);
    run_cmd->add_option("--tolerance", run.tolerance, "Override every MR's tolerance");
    run_cmd->add_option("--witnesses", run.witnesses, "Witnesses kept per MR");
    run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");

    std::string mutate_sut;
    std::uint64_t mutate_trials = 100;
    auto* mutate_cmd = app.add_subcommand("mutate", "Kill matrix of every bundled mutant against the SUT's MRs");
    mutate_cmd->add_option("--sut", mutate_sut, "SUT id")->required();
    mutate_cmd->add_option("--trials", mutate_trials, "Trials per MR")->check(CLI::PositiveNumber);

    ScoreArgs sc;
    auto* score_cmd = app.add_subcommand("score", "Score an MR interactively");
    score_cmd->add_option("--mr", sc.mr, "MR id from the catalog");
    score_cmd->add_option("--mr-file", sc.mr_file, "JSON file holding one MR record");
    score_cmd->add_option("--evaluator", sc.evaluator, "Evaluator id");
    score_cmd->add_option("--scheme", sc.scheme, "updated or legacy")->check(CLI::IsMember({"updated", "legacy"}));
    score_cmd->add_option("--answers", sc.answers, "File of answers, one level per prompt");

    std::string gen_sut, gen_replay;
    int gen_count = 8;
    auto* gen_cmd = app.add_subcommand("generate", "Ask the LLM for MR drafts");
    gen_cmd->add_option("--sut", gen_sut, "SUT id or 'all'")->required();
    gen_cmd->add_option("--count", gen_count, "Number of MRs to request");
    gen_cmd->add_option("--replay", gen_replay, "Replay fixture directory (forces offline mode)");

    std::string ev_mr, ev_sut, ev_replay, ev_generator = "GPT-4";
    auto* ev_cmd = app.add_subcommand("evaluate", "Score MRs with the LLM evaluator");
    ev_cmd->add_option("--mr", ev_mr, "MR id");
    ev_cmd->add_option("--sut", ev_sut, "Every MR of this SUT, or 'all'");
    ev_cmd->add_option("--replay", ev_replay, "Replay fixture directory (forces offline mode)");
    ev_cmd->add_option("--generator", ev_generator, "Model that produced the MRs");

    std::vector<std::string> rep_dirs;
    std::string rep_group = "sut";
    bool rep_csv = false;
    auto* rep_cmd = app.add_subcommand("report", "Aggregate score sheets into tables");
    rep_cmd->add_option("--scores", rep_dirs, "Score directories or files")->required();
    rep_cmd->add_option("--group-by", rep_group, "sut, model or category")
        ->check(CLI::IsMember({"sut", "model", "category"}));
    rep_cmd->add_flag("--csv", rep_csv, "Print CSV instead of text tables");

    std::vector<std::string> val_sheets;
    auto* val_cmd = app.add_subcommand("validate", "Check the catalog and optional score sheets");
    val_cmd->add_option("--sheets", val_sheets, "Score directories or files");

    for (auto* sub : {run_cmd, mutate_cmd, score_cmd, gen_cmd, ev_cmd, rep_cmd, val_cmd}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    log("seed: " + std::to_string(g.seed));
    try {
        if (*run_cmd) return cmd_run(g, run);
        if (*mutate_cmd) return cmd_mutate(g, mutate_sut, mutate_trials);
        if (*score_cmd) return cmd_score(g, sc);
        if (*gen_cmd) return cmd_generate(g, gen_sut, gen_count, gen_replay);
        if (*ev_cmd) return cmd_evaluate(g, ev_mr, ev_sut, ev_replay, ev_generator);
        if (*rep_cmd) return cmd_report(g, rep_dirs, rep_group, rep_csv);
        if (*val_cmd) return cmd_validate(g, val_sheets);
    } catch (const std::exception& e) {
        std::cerr << "mrbench: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
