#include "mrbench/rubric.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mrbench/error.hpp"

namespace mrbench {

using nlohmann::json;

namespace {

std::vector<CriterionSpec> updated_specs() {
    auto spec = [](std::string name, int max, std::vector<std::string> levels, GateRole gate = GateRole::None) {
        CriterionSpec c;
        c.label = criterion_label(name);
        c.name = std::move(name);
        c.scheme = Scheme::Updated;
        c.max_points = max;
        c.levels = std::move(levels);
        c.gate = gate;
        return c;
    };
    return {
        spec("completeness", 1,
             {"a source input, an input transformation or an output relation is missing",
              "source input, follow-up construction and output relation are all stated"},
             GateRole::CompletenessGate),
        spec("correctness", 3,
             {"the relation does not hold for the system under test",
              "the relation holds only in special cases",
              "the relation holds but leaves edge cases or preconditions unstated",
              "the relation holds for the whole input domain and is stated precisely"},
             GateRole::CorrectnessGate),
        spec("generalizability", 3,
             {"tied to one concrete input", "covers a narrow family of inputs",
              "covers most of the input domain", "applies across the input domain and to similar systems"}),
        spec("novelty", 3,
             {"restates a textbook identity", "minor variation of a common pattern",
              "combines known patterns in a new way", "introduces a relation pattern not seen before"}),
        spec("clarity", 3,
             {"vague or ambiguous wording", "understandable with effort", "clear with small gaps",
              "unambiguous and directly implementable"}),
        spec("computational_feasibility", 3,
             {"cannot be automated", "needs manual judgement for each run",
              "automatable with nontrivial harness work", "fully automatable with simple code"}),
        spec("applicability", 3,
             {"irrelevant to the system's purpose", "touches peripheral behaviour", "exercises a main feature",
              "targets the key functionality of the system"}),
    };
}

std::vector<CriterionSpec> legacy_specs() {
    std::vector<CriterionSpec> out;
    for (auto name : kLegacyCriteria) {
        CriterionSpec c;
        c.name = std::string(name);
        c.label = criterion_label(name);
        c.scheme = Scheme::Legacy;
        c.max_points = 5;
        c.levels = {"absent", "very weak", "weak", "adequate", "strong", "excellent"};
        out.push_back(std::move(c));
    }
    return out;
}

std::string kind_label(EvaluatorKind k) { return k == EvaluatorKind::Human ? "human" : "LLM"; }

std::string group_key(GroupBy by, const std::string& sut_id, const std::string& model, const Catalog* catalog) {
    switch (by) {
        case GroupBy::Sut: return sut_id;
        case GroupBy::Model: return model;
        case GroupBy::Category: {
            if (!catalog) throw PreconditionError("grouping by category needs a catalog");
            const auto* sut = catalog->find_sut(sut_id);
            if (!sut) throw ReferenceError("unknown SUT '" + sut_id + "' in score data");
            return to_string(sut->category);
        }
    }
    return sut_id;
}

struct Accumulator {
    AggregateRow row;
    std::map<std::string, double> sums;
};

void read_records(const json& doc, const std::string& where, ScoreCorpus& out) {
    if (doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i) read_records(doc[i], where + "[" + std::to_string(i) + "]", out);
        return;
    }
    if (!doc.is_object()) throw ParseError(where, "expected a score sheet or group-means object");
    try {
        if (doc.value("kind", std::string{}) == "group_means") out.group_means.push_back(doc.get<GroupMeans>());
        else out.sheets.push_back(doc.get<RubricScoreSheet>());
    } catch (const ParseError& e) {
        throw ParseError(where + (e.context().empty() ? "" : "." + e.context()), e.message());
    } catch (const json::exception& e) {
        throw ParseError(where, e.what());
    }
}

}  // namespace

const std::vector<CriterionSpec>& criterion_specs(Scheme scheme) {
    static const auto updated = updated_specs();
    static const auto legacy = legacy_specs();
    return scheme == Scheme::Updated ? updated : legacy;
}

const CriterionSpec& criterion_spec(Scheme scheme, std::string_view name) {
    for (const auto& c : criterion_specs(scheme))
        if (c.name == name) return c;
    throw PreconditionError("unknown criterion '" + std::string(name) + "' for the " + to_string(scheme) + " scheme");
}

int score(const RubricScoreSheet& sheet) {
    const auto v = validate_score_sheet(sheet);
    if (!v.ok()) {
        std::string msg = "invalid score sheet for " + sheet.mr_id + ":";
        for (const auto& x : v.violations) msg += " " + x.message + ";";
        msg.pop_back();
        throw PreconditionError(msg);
    }
    return sheet.raw_total();
}

void to_json(json& j, const GroupMeans& g) {
    j = json{{"kind", "group_means"},
             {"sut_id", g.sut_id},
             {"generator_model", g.generator_model},
             {"evaluator_id", g.evaluator_id},
             {"evaluator_kind", to_string(g.evaluator_kind)},
             {"scheme", to_string(g.scheme)},
             {"mr_count", g.mr_count},
             {"means", g.means}};
}

void from_json(const json& j, GroupMeans& g) {
    g.sut_id = j.at("sut_id").get<std::string>();
    g.generator_model = j.value("generator_model", std::string("GPT-4"));
    g.evaluator_id = j.value("evaluator_id", std::string{});
    g.evaluator_kind = evaluator_kind_from_string(j.at("evaluator_kind").get<std::string>());
    g.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    g.mr_count = j.at("mr_count").get<int>();
    if (g.mr_count < 1) throw ParseError("mr_count", "must be at least 1");
    g.means = j.at("means").get<std::map<std::string, double>>();
    for (auto name : criteria_for(g.scheme)) {
        auto it = g.means.find(std::string(name));
        if (it == g.means.end()) throw ParseError("means", "no mean for '" + std::string(name) + "'");
        const int max = criterion_max(g.scheme, name);
        if (!(it->second >= 0.0 && it->second <= max))
            throw ParseError("means." + std::string(name), "mean outside 0.." + std::to_string(max));
    }
    for (const auto& [name, _] : g.means)
        if (std::find(criteria_for(g.scheme).begin(), criteria_for(g.scheme).end(), name) ==
            criteria_for(g.scheme).end())
            throw ParseError("means." + name, "not a " + to_string(g.scheme) + " criterion");
}

ScoreCorpus load_score_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string(), e.what());
    }
    ScoreCorpus out;
    read_records(doc, path.string(), out);
    return out;
}

ScoreCorpus load_score_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::exists(dir)) throw Error("no such score directory: " + dir.string());
    if (std::filesystem::is_regular_file(dir)) return load_score_file(dir);
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    ScoreCorpus out;
    for (const auto& f : files) {
        auto part = load_score_file(f);
        out.sheets.insert(out.sheets.end(), part.sheets.begin(), part.sheets.end());
        out.group_means.insert(out.group_means.end(), part.group_means.begin(), part.group_means.end());
    }
    return out;
}

std::string to_string(GroupBy g) {
    switch (g) {
        case GroupBy::Sut: return "sut";
        case GroupBy::Model: return "model";
        case GroupBy::Category: return "category";
    }
    return "sut";
}

GroupBy group_by_from_string(const std::string& s) {
    if (s == "sut") return GroupBy::Sut;
    if (s == "model") return GroupBy::Model;
    if (s == "category") return GroupBy::Category;
    throw PreconditionError("unknown grouping '" + s + "' (expected sut, model or category)");
}

std::vector<AggregateRow> aggregate(const ScoreCorpus& corpus, GroupBy group_by, const Catalog* catalog) {
    std::optional<Scheme> scheme;
    auto check_scheme = [&](Scheme s) {
        if (scheme && *scheme != s) throw PreconditionError("cannot aggregate Updated and Legacy scores together");
        scheme = s;
    };
    std::vector<Accumulator> acc;
    auto slot = [&](const std::string& key, EvaluatorKind kind, Scheme s) -> Accumulator& {
        for (auto& a : acc)
            if (a.row.group == key && a.row.evaluator_kind == kind) return a;
        acc.push_back({});
        acc.back().row.group = key;
        acc.back().row.evaluator_kind = kind;
        acc.back().row.scheme = s;
        return acc.back();
    };

    for (const auto& sheet : corpus.sheets) {
        check_scheme(sheet.scheme);
        score(sheet);
        auto& a = slot(group_key(group_by, sheet.sut_id, sheet.generator_model, catalog), sheet.evaluator_kind,
                       sheet.scheme);
        a.row.weight += 1.0;
        for (const auto& [name, level] : sheet.scores) a.sums[name] += level;
    }
    for (const auto& g : corpus.group_means) {
        check_scheme(g.scheme);
        auto& a = slot(group_key(group_by, g.sut_id, g.generator_model, catalog), g.evaluator_kind, g.scheme);
        a.row.weight += g.mr_count;
        for (const auto& [name, mean] : g.means) a.sums[name] += mean * g.mr_count;
    }

    std::vector<AggregateRow> rows;
    for (auto& a : acc) {
        for (auto name : criteria_for(a.row.scheme)) {
            const double m = a.sums[std::string(name)] / a.row.weight;
            a.row.means[std::string(name)] = m;
            a.row.total += m;
        }
        rows.push_back(std::move(a.row));
    }
    // Groups keep first-appearance order; human rows precede LLM rows.
    std::vector<std::string> order;
    for (const auto& r : rows)
        if (std::find(order.begin(), order.end(), r.group) == order.end()) order.push_back(r.group);
    std::stable_sort(rows.begin(), rows.end(), [&](const AggregateRow& x, const AggregateRow& y) {
        const auto ix = std::find(order.begin(), order.end(), x.group) - order.begin();
        const auto iy = std::find(order.begin(), order.end(), y.group) - order.begin();
        if (ix != iy) return ix < iy;
        return x.evaluator_kind == EvaluatorKind::Human && y.evaluator_kind != EvaluatorKind::Human;
    });
    return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<RubricScoreSheet>& sheets, GroupBy group_by,
                                    const Catalog* catalog) {
    ScoreCorpus corpus;
    corpus.sheets = sheets;
    return aggregate(corpus, group_by, catalog);
}

Comparison compare(const std::vector<AggregateRow>& a, const std::vector<AggregateRow>& b) {
    Comparison out;
    if (!a.empty()) out.scheme = a.front().scheme;
    else if (!b.empty()) out.scheme = b.front().scheme;
    for (const auto* side : {&a, &b})
        for (const auto& r : *side)
            if (r.scheme != out.scheme) throw PreconditionError("cannot compare Updated and Legacy rows");

    auto find = [](const std::vector<AggregateRow>& rows, const std::string& key) -> const AggregateRow* {
        for (const auto& r : rows)
            if (r.group == key) return &r;
        return nullptr;
    };
    for (const auto& ra : a) {
        const AggregateRow* rb = find(b, ra.group);
        if (!rb) {
            out.unmatched.push_back(ra.group);
            continue;
        }
        DeltaRow d;
        d.group = ra.group;
        for (auto name : criteria_for(out.scheme)) {
            const std::string key(name);
            d.deltas[key] = rb->means.at(key) - ra.means.at(key);
        }
        d.total = rb->total - ra.total;
        out.rows.push_back(std::move(d));
    }
    for (const auto& rb : b)
        if (!find(a, rb.group)) out.unmatched.push_back(rb.group);
    return out;
}

std::string format_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    std::string s = buf;
    return s == "-0.0" ? "0.0" : s;
}

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows) {
    std::ostringstream out;
    const Scheme scheme = rows.empty() ? Scheme::Updated : rows.front().scheme;
    out << "Group,Evaluator";
    for (auto name : criteria_for(scheme)) out << ',' << criterion_label(name);
    out << ",Total\n";
    for (const auto& r : rows) {
        out << r.group << ',' << kind_label(r.evaluator_kind);
        for (auto name : criteria_for(scheme)) out << ',' << format_score(r.means.at(std::string(name)));
        out << ',' << format_score(r.total) << '\n';
    }
    return out.str();
}

namespace {

std::string render_grid(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& body) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& row : body) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) out << "  ";
            if (c < 2) out << cells[c] << std::string(width[c] - cells[c].size(), ' ');
            else out << std::string(width[c] - cells[c].size(), ' ') << cells[c];
        }
        out << '\n';
    };
    line(header);
    for (const auto& row : body) line(row);
    return out.str();
}

}  // namespace

std::string render_aggregate(const std::vector<AggregateRow>& rows) {
    const Scheme scheme = rows.empty() ? Scheme::Updated : rows.front().scheme;
    std::vector<std::string> header{"Group", "Evaluator"};
    for (auto name : criteria_for(scheme)) header.push_back(criterion_label(name));
    header.push_back("Total");
    std::vector<std::vector<std::string>> body;
    for (const auto& r : rows) {
        std::vector<std::string> cells{r.group, kind_label(r.evaluator_kind)};
        for (auto name : criteria_for(scheme)) cells.push_back(format_score(r.means.at(std::string(name))));
        cells.push_back(format_score(r.total));
        body.push_back(std::move(cells));
    }
    return render_grid(header, body);
}

std::string render_comparison(const Comparison& cmp) {
    std::vector<std::string> header{"Group", "Delta"};
    for (auto name : criteria_for(cmp.scheme)) header.push_back(criterion_label(name));
    header.push_back("Total");
    std::vector<std::vector<std::string>> body;
    auto signed_score = [](double v) {
        std::string s = format_score(v);
        return s[0] == '-' || s == "0.0" ? s : "+" + s;
    };
    for (const auto& r : cmp.rows) {
        std::vector<std::string> cells{r.group, "b-a"};
        for (auto name : criteria_for(cmp.scheme)) cells.push_back(signed_score(r.deltas.at(std::string(name))));
        cells.push_back(signed_score(r.total));
        body.push_back(std::move(cells));
    }
    std::string out = "# delta = second minus first\n" + render_grid(header, body);
    for (const auto& u : cmp.unmatched) out += "unmatched: " + u + "\n";
    return out;
}

json aggregate_to_json(const std::vector<AggregateRow>& rows) {
    json out = json::array();
    for (const auto& r : rows)
        out.push_back({{"group", r.group},
                       {"evaluator_kind", to_string(r.evaluator_kind)},
                       {"scheme", to_string(r.scheme)},
                       {"weight", r.weight},
                       {"means", r.means},
                       {"total", r.total}});
    return out;
}

std::string sheets_to_csv(const std::vector<RubricScoreSheet>& sheets) {
    std::ostringstream out;
    out << "mr_id,criterion,score\n";
    for (const auto& s : sheets)
        for (auto name : criteria_for(s.scheme)) {
            auto it = s.scores.find(std::string(name));
            if (it != s.scores.end()) out << s.mr_id << ',' << name << ',' << it->second << '\n';
        }
    return out.str();
}

RubricScoreSheet score_interactively(const MetamorphicRelation& mr, Scheme scheme, const std::string& evaluator_id,
                                     std::istream& answers, std::ostream& prompts) {
    RubricScoreSheet sheet;
    sheet.mr_id = mr.mr_id;
    sheet.sut_id = mr.sut_id;
    sheet.evaluator_id = evaluator_id;
    sheet.evaluator_kind = EvaluatorKind::Human;
    sheet.scheme = scheme;
    for (auto name : criteria_for(scheme)) sheet.scores[std::string(name)] = 0;

    prompts << "Scoring " << mr.mr_id << ": " << mr.title << "\n" << mr.narrative << "\n";
    for (const auto& spec : criterion_specs(scheme)) {
        prompts << "\n" << spec.label << " (0-" << spec.max_points << ")\n";
        for (std::size_t i = 0; i < spec.levels.size(); ++i) prompts << "  " << i << ": " << spec.levels[i] << "\n";
        int level = -1;
        while (level < 0) {
            prompts << "> " << std::flush;
            std::string token;
            if (!(answers >> token)) throw PreconditionError("answers ended before " + spec.label + " was scored");
            char* end = nullptr;
            const long v = std::strtol(token.c_str(), &end, 10);
            if (end == token.c_str() || *end != '\0' || v < 0 || v > spec.max_points) {
                prompts << "'" << token << "' is not a level between 0 and " << spec.max_points << "; try again\n";
                continue;
            }
            level = static_cast<int>(v);
        }
        sheet.scores[spec.name] = level;
        if (level == 0 && spec.gate == GateRole::CompletenessGate) {
            prompts << "Completeness is 0, so every other criterion scores 0.\n";
            break;
        }
        if (level == 0 && spec.gate == GateRole::CorrectnessGate) {
            prompts << "Correctness is 0, so the remaining criteria score 0.\n";
            break;
        }
    }
    prompts << "Total: " << score(sheet) << " of " << scheme_max_total(scheme) << "\n";
    return sheet;
}

}  // namespace mrbench
