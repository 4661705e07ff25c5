#include "mrbench/score_sheet.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mrbench/error.hpp"

namespace mrbench {

using nlohmann::json;

const std::array<std::string_view, 7>& criteria_for(Scheme scheme) {
    return scheme == Scheme::Updated ? kUpdatedCriteria : kLegacyCriteria;
}

int criterion_max(Scheme scheme, std::string_view criterion) {
    const auto& names = criteria_for(scheme);
    if (std::find(names.begin(), names.end(), criterion) == names.end())
        throw PreconditionError("unknown criterion '" + std::string(criterion) + "' for scheme " + to_string(scheme));
    if (scheme == Scheme::Legacy) return 5;
    return criterion == "completeness" ? 1 : 3;
}

int scheme_max_total(Scheme scheme) { return scheme == Scheme::Updated ? 19 : 35; }

std::string criterion_label(std::string_view criterion) {
    std::string out;
    bool upper = true;
    for (char c : criterion) {
        if (c == '_') {
            out += ' ';
            upper = true;
        } else {
            out += upper ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
            upper = false;
        }
    }
    return out;
}

int RubricScoreSheet::raw_total() const {
    return std::accumulate(scores.begin(), scores.end(), 0, [](int acc, const auto& kv) { return acc + kv.second; });
}

SheetValidation validate_score_sheet(const RubricScoreSheet& sheet) {
    SheetValidation result;
    auto& v = result.violations;
    const auto& names = criteria_for(sheet.scheme);

    for (const auto& [name, level] : sheet.scores) {
        if (std::find(names.begin(), names.end(), name) == names.end())
            v.push_back({ViolationKind::UnknownCriterion, name, "criterion '" + name + "' is not part of the " + to_string(sheet.scheme) + " scheme"});
    }
    for (auto name : names) {
        const std::string key(name);
        auto it = sheet.scores.find(key);
        if (it == sheet.scores.end()) {
            v.push_back({ViolationKind::MissingCriterion, key, "no score for '" + key + "'"});
            continue;
        }
        const int max = criterion_max(sheet.scheme, name);
        if (it->second < 0 || it->second > max)
            v.push_back({ViolationKind::OutOfRange, key,
                         key + "=" + std::to_string(it->second) + " outside 0.." + std::to_string(max)});
    }

    if (sheet.scheme == Scheme::Updated) {
        auto level = [&](std::string_view n) {
            auto it = sheet.scores.find(std::string(n));
            return it == sheet.scores.end() ? 0 : it->second;
        };
        const bool incomplete = sheet.scores.count("completeness") && level("completeness") == 0;
        const bool incorrect = sheet.scores.count("correctness") && level("correctness") == 0;
        for (auto name : names) {
            if (name == "completeness") continue;
            if (incomplete && level(name) != 0)
                v.push_back({ViolationKind::GateCompleteness, std::string(name),
                             "completeness is 0 so " + std::string(name) + " must be 0"});
            if (name == "correctness") continue;
            if (incorrect && level(name) != 0)
                v.push_back({ViolationKind::GateCorrectness, std::string(name),
                             "correctness is 0 so " + std::string(name) + " must be 0"});
        }
    }
    return result;
}

RubricScoreSheet apply_gates(RubricScoreSheet sheet) {
    if (sheet.scheme != Scheme::Updated) return sheet;
    auto& s = sheet.scores;
    auto zero_all_but = [&](std::initializer_list<std::string_view> keep) {
        for (auto name : kUpdatedCriteria) {
            if (std::find(keep.begin(), keep.end(), name) != keep.end()) continue;
            s[std::string(name)] = 0;
        }
    };
    if (auto it = s.find("completeness"); it != s.end() && it->second == 0) {
        zero_all_but({"completeness"});
    } else if (auto jt = s.find("correctness"); jt != s.end() && jt->second == 0) {
        zero_all_but({"completeness", "correctness"});
    }
    return sheet;
}

std::string to_string(Scheme s) { return s == Scheme::Updated ? "Updated" : "Legacy"; }
std::string to_string(EvaluatorKind k) { return k == EvaluatorKind::Human ? "Human" : "Llm"; }

std::string to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::MissingCriterion: return "missing-criterion";
        case ViolationKind::UnknownCriterion: return "unknown-criterion";
        case ViolationKind::OutOfRange: return "out-of-range";
        case ViolationKind::GateCompleteness: return "completeness-gate";
        case ViolationKind::GateCorrectness: return "correctness-gate";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "Updated" || s == "updated") return Scheme::Updated;
    if (s == "Legacy" || s == "legacy") return Scheme::Legacy;
    throw ParseError("scheme", "unknown scheme '" + s + "'");
}

EvaluatorKind evaluator_kind_from_string(const std::string& s) {
    if (s == "Human" || s == "human") return EvaluatorKind::Human;
    if (s == "Llm" || s == "llm" || s == "LLM") return EvaluatorKind::Llm;
    throw ParseError("evaluator_kind", "unknown evaluator kind '" + s + "'");
}

void to_json(json& j, const RubricScoreSheet& s) {
    json scores = json::object();
    for (const auto& [k, v] : s.scores) scores[k] = v;
    j = json{{"mr_id", s.mr_id},
             {"sut_id", s.sut_id},
             {"evaluator_id", s.evaluator_id},
             {"evaluator_kind", to_string(s.evaluator_kind)},
             {"scheme", to_string(s.scheme)},
             {"scores", scores},
             {"justification", s.justification},
             {"created_at", s.created_at},
             {"generator_model", s.generator_model},
             {"flags", s.flags}};
}

void from_json(const json& j, RubricScoreSheet& s) {
    try {
        s.mr_id = j.at("mr_id").get<std::string>();
        s.sut_id = j.value("sut_id", "");
        s.evaluator_id = j.at("evaluator_id").get<std::string>();
        s.evaluator_kind = evaluator_kind_from_string(j.at("evaluator_kind").get<std::string>());
        s.scheme = scheme_from_string(j.at("scheme").get<std::string>());
        s.scores.clear();
        for (const auto& [k, v] : j.at("scores").items()) {
            if (!v.is_number_integer()) throw ParseError("scores." + k, "expected an integer level");
            s.scores[k] = v.get<int>();
        }
        s.justification = j.value("justification", "");
        s.created_at = j.value("created_at", "");
        s.generator_model = j.value("generator_model", "GPT-4");
        s.flags = j.value("flags", std::vector<std::string>{});
    } catch (const json::exception& e) {
        throw ParseError("score sheet", e.what());
    }
}

RubricScoreSheet load_score_sheet(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), "cannot open score sheet");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string(), e.what());
    }
    try {
        return j.get<RubricScoreSheet>();
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.context(), e.message());
    }
}

void save_score_sheet(const RubricScoreSheet& sheet, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write score sheet to " + path.string());
    out << json(sheet).dump(2) << '\n';
}

}  // namespace mrbench
