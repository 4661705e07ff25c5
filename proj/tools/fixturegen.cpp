// Regenerates the bundled replay fixtures and score data under data/ (and the
// gate fixture under tests/fixtures/) from the catalog and the published means.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "mrbench/catalog.hpp"
#include "mrbench/error.hpp"
#include "mrbench/llm.hpp"
#include "mrbench/rubric.hpp"

namespace fs = std::filesystem;
using namespace mrbench;

namespace {

constexpr const char* kModel = "gpt-4";
constexpr const char* kRecordedAt = "2024-01-15T00:00:00Z";

using Cells = std::array<double, 7>;  // Updated criteria order

struct PublishedRow {
    const char* sut_id;
    Cells human;
    double human_total;
    Cells llm;
};

struct Group {
    const char* dir;
    std::vector<PublishedRow> rows;
};

const std::vector<Group>& published_groups() {
    static const std::vector<Group> groups = {
        {"basic",
         {{"SIN", {1.0, 2.4, 3.0, 1.0, 2.9, 2.9, 3.0}, 16.3, {1, 3, 3, 3, 3, 3, 3}},
          {"SUM", {1.0, 2.0, 2.9, 1.0, 3.0, 3.0, 3.0}, 15.9, {1, 3, 3, 1, 3, 3, 3}},
          {"SHORTEST-PATH", {1.0, 2.7, 2.5, 1.8, 1.9, 2.0, 2.5}, 14.3, {1, 3, 2, 1.5, 3, 2, 3}}}},
        {"complex-no-ai",
         {{"REGRESSION", {1.0, 1.9, 3.0, 1.9, 2.6, 1.7, 3.0}, 15.1, {1, 3, 3, 2, 3, 3, 3}},
          {"FFT", {1.0, 2.6, 2.6, 2.0, 2.1, 2.0, 2.4}, 14.7, {1, 3, 2, 2, 3, 2, 3}},
          {"WFS", {1.0, 1.6, 2.9, 2.0, 2.0, 2.0, 2.9}, 14.3, {1, 3, 2.9, 2, 3, 2, 2.9}}}},
        {"complex-ai",
         {{"AV-PERCEPTION", {1.0, 2.1, 2.6, 1.9, 2.2, 1.9, 2.6}, 14.4, {1, 3, 2.9, 2.1, 3, 2, 2.9}},
          {"TRAFFICSYS", {1.0, 1.6, 2.5, 2.0, 1.8, 1.9, 2.5}, 13.3, {1, 3, 2.9, 2.1, 3, 2, 2.9}},
          {"AUTOPARKING", {1.0, 2.1, 2.7, 1.8, 2.3, 2.0, 2.9}, 14.6, {1, 3, 2.9, 2.0, 3, 2, 2.9}}}},
    };
    return groups;
}

std::string display(double v) { return format_score(v); }

/// Unrounded means whose cells round to the displayed ones and whose sum
/// rounds to the displayed total.
std::map<std::string, double> reconstruct_means(const Cells& cells, double total) {
    double sum = 0.0;
    for (double c : cells) sum += c;
    std::vector<std::size_t> adjustable;
    for (std::size_t i = 1; i < cells.size(); ++i)
        if (cells[i] > 0.0 && cells[i] < 3.0) adjustable.push_back(i);
    const double gap = total - sum;
    std::map<std::string, double> out;
    double check = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        double v = cells[i];
        if (std::abs(gap) > 1e-9 && std::find(adjustable.begin(), adjustable.end(), i) != adjustable.end())
            v += gap / static_cast<double>(adjustable.size());
        v = std::round(v * 1e6) / 1e6;
        if (display(v) != display(cells[i])) throw Error("reconstructed mean no longer rounds to its cell");
        out[std::string(kUpdatedCriteria[i])] = v;
        check += v;
    }
    if (display(check) != display(total)) throw Error("reconstructed means do not reproduce the total");
    return out;
}

/// Integer levels for 8 MRs whose mean rounds to each displayed cell; higher
/// levels go to the first MRs.
std::vector<std::map<std::string, int>> integer_levels(const Cells& cells, int mrs) {
    std::vector<std::map<std::string, int>> out(static_cast<std::size_t>(mrs));
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const int sum = static_cast<int>(std::lround(cells[c] * mrs));
        const int base = sum / mrs;
        const int extra = sum - base * mrs;
        for (int m = 0; m < mrs; ++m) out[static_cast<std::size_t>(m)][std::string(kUpdatedCriteria[c])] = base + (m < extra ? 1 : 0);
    }
    return out;
}

std::int64_t word_count(const std::string& s) {
    std::istringstream in(s);
    std::int64_t n = 0;
    for (std::string w; in >> w;) ++n;
    return n;
}

llm::ChatResponse reply(const llm::ChatRequest& req, std::string text) {
    std::int64_t prompt = 0;
    for (const auto& m : req.messages) prompt += word_count(m.content);
    llm::ChatResponse r;
    r.model = kModel;
    r.usage = {prompt, word_count(text)};
    r.text = std::move(text);
    return r;
}

std::string evaluation_text(const std::map<std::string, int>& levels) {
    std::ostringstream out;
    out << "```scores\n";
    for (auto name : kUpdatedCriteria) out << criterion_label(name) << ": " << levels.at(std::string(name)) << "\n";
    out << "```\n\n";
    for (auto name : kUpdatedCriteria) {
        const auto& spec = criterion_spec(Scheme::Updated, name);
        const int level = levels.at(std::string(name));
        out << "- " << spec.label << " (" << level << "/" << spec.max_points << "): " << spec.levels[static_cast<std::size_t>(level)]
            << ".\n";
    }
    return out.str();
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << doc.dump(2) << '\n';
    if (!out) throw Error("cannot write " + path.string());
}

std::string two_digits(std::size_t i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02zu", i);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::current_path();
        const auto catalog = load_catalog(root / "data" / "catalog.json");
        const fs::path replay = root / "data" / "replay";
        const fs::path scores = root / "data" / "scores";
        fs::remove_all(replay);
        fs::remove_all(scores);
        const auto persona = llm::EvaluatorPersona::standard();

        // Generation: one exchange per SUT listing its catalog MRs.
        for (const auto& sut : catalog.suts) {
            const auto req = llm::generation_request(sut, 8, kModel);
            std::ostringstream text;
            text << "Here are eight metamorphic relations for " << sut.name << ":\n\n";
            int n = 0;
            for (const auto* mr : catalog.mrs_for(sut.id)) text << ++n << ". " << mr->title << ": " << mr->narrative << "\n";
            llm::write_replay_fixture(replay / "generate", req, reply(req, text.str()), "generate-" + sut.id);
        }

        // Evaluation: per-MR levels consistent with the published LLM means.
        std::map<std::string, std::map<std::string, int>> levels_by_mr;
        for (const auto& group : published_groups())
            for (const auto& row : group.rows) {
                const auto mrs = catalog.mrs_for(row.sut_id);
                const auto levels = integer_levels(row.llm, static_cast<int>(mrs.size()));
                for (std::size_t i = 0; i < mrs.size(); ++i) levels_by_mr[mrs[i]->mr_id] = levels[i];
            }
        for (const auto& mr : catalog.mrs) {
            const auto req = llm::evaluation_request(mr, catalog.find_sut(mr.sut_id), persona, kModel);
            llm::write_replay_fixture(replay / "evaluate", req, reply(req, evaluation_text(levels_by_mr.at(mr.mr_id))),
                                      "evaluate-" + mr.mr_id);
        }

        // Score data: human means plus LLM sheets produced through the replay path.
        llm::Session session(std::make_unique<llm::ReplayTransport>(replay), kModel);
        for (const auto& group : published_groups()) {
            std::size_t ordinal = 0;
            for (const auto& row : group.rows) {
                ++ordinal;
                GroupMeans human;
                human.sut_id = row.sut_id;
                human.evaluator_id = "human-panel";
                human.evaluator_kind = EvaluatorKind::Human;
                human.scheme = Scheme::Updated;
                human.mr_count = static_cast<int>(catalog.mrs_for(row.sut_id).size());
                human.means = reconstruct_means(row.human, row.human_total);
                write_json(scores / group.dir / "human" / (two_digits(ordinal) + "-" + row.sut_id + ".json"), human);
                std::size_t k = 0;
                for (const auto* mr : catalog.mrs_for(row.sut_id)) {
                    llm::EvaluationOptions opts;
                    opts.created_at = kRecordedAt;
                    const auto sheet = llm::evaluate_mr(*mr, catalog.find_sut(mr->sut_id), persona, session, opts);
                    write_json(scores / group.dir / "llm" / (two_digits(ordinal) + "-" + two_digits(++k) + "-" + mr->mr_id + ".json"),
                               sheet);
                }
            }
        }

        // Legacy rubric: model comparison means and the per-MR parking sheets.
        const std::vector<std::string> legacy(kLegacyCriteria.begin(), kLegacyCriteria.end());
        auto legacy_means = [&](const char* model, std::array<double, 7> cells) {
            GroupMeans g;
            g.sut_id = "AUTOPARKING";
            g.generator_model = model;
            g.evaluator_id = "human-panel";
            g.evaluator_kind = EvaluatorKind::Human;
            g.scheme = Scheme::Legacy;
            g.mr_count = 5;
            for (std::size_t i = 0; i < legacy.size(); ++i) g.means[legacy[i]] = cells[i];
            return g;
        };
        write_json(scores / "legacy-models" / "01-gpt-3.5.json", legacy_means("GPT-3.5", {3.2, 4.0, 1.0, 2.8, 3.2, 3.0, 5.0}));
        write_json(scores / "legacy-models" / "02-gpt-4.json", legacy_means("GPT-4", {3.4, 4.0, 1.6, 4.0, 3.0, 3.0, 5.0}));

        const int parking[5][7] = {{3, 4, 3, 4, 2, 3, 5}, {3, 4, 1, 4, 2, 3, 5}, {3, 4, 2, 4, 4, 3, 5},
                                   {4, 4, 1, 4, 3, 3, 5}, {4, 4, 1, 4, 3, 3, 5}};
        for (int m = 0; m < 5; ++m) {
            RubricScoreSheet s;
            s.mr_id = "AUTOPARKING-LEGACY-MR" + std::to_string(m + 1);
            s.sut_id = "AUTOPARKING";
            s.evaluator_id = "human-panel";
            s.evaluator_kind = EvaluatorKind::Human;
            s.scheme = Scheme::Legacy;
            s.created_at = kRecordedAt;
            for (std::size_t i = 0; i < legacy.size(); ++i) s.scores[legacy[i]] = parking[m][i];
            write_json(scores / "legacy-parking" / (two_digits(static_cast<std::size_t>(m + 1)) + ".json"), s);
        }

        // Test fixture: raw evaluator output that breaks the completeness gate.
        MetamorphicRelation probe;
        probe.mr_id = "PROBE-MR1";
        probe.sut_id = "SIN";
        probe.title = "Incomplete Probe";
        probe.narrative = "The output should stay similar.";
        probe.relation_class = RelationClass::qualitative();
        const fs::path gate_dir = root / "tests" / "fixtures" / "replay-gate";
        fs::remove_all(gate_dir);
        std::map<std::string, int> broken;
        for (auto name : kUpdatedCriteria) broken[std::string(name)] = 3;
        broken["completeness"] = 0;
        const auto req = llm::evaluation_request(probe, catalog.find_sut("SIN"), persona, kModel);
        llm::write_replay_fixture(gate_dir, req, reply(req, evaluation_text(broken)), "evaluate-" + probe.mr_id);

        std::cout << "fixtures written under " << (root / "data").string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "fixturegen: " << e.what() << "\n";
        return 1;
    }
}
