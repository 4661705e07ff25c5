#pragma once

// Rubric score sheets, the two scoring schemes and their validation rules.

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace mrbench {

enum class Scheme { Updated, Legacy };
enum class EvaluatorKind { Human, Llm };

/// Criterion keys in display order for each scheme.
inline constexpr std::array<std::string_view, 7> kUpdatedCriteria = {
    "completeness", "correctness", "generalizability", "novelty",
    "clarity", "computational_feasibility", "applicability"};

inline constexpr std::array<std::string_view, 7> kLegacyCriteria = {
    "correctness", "applicability", "novelty", "clarity",
    "relevance_to_safety", "overall_usefulness", "computational_feasibility"};

const std::array<std::string_view, 7>& criteria_for(Scheme scheme);
/// Highest attainable level for a criterion (1 for completeness, 3 otherwise
/// under Updated; 5 under Legacy). Throws PreconditionError for unknown names.
int criterion_max(Scheme scheme, std::string_view criterion);
int scheme_max_total(Scheme scheme);
/// "Computational Feasibility" style label for report headers.
std::string criterion_label(std::string_view criterion);

struct RubricScoreSheet {
    std::string mr_id;
    std::string sut_id;  // optional; empty when unknown
    std::string evaluator_id;
    EvaluatorKind evaluator_kind = EvaluatorKind::Human;
    Scheme scheme = Scheme::Updated;
    std::map<std::string, int> scores;
    std::string justification;
    std::string created_at;
    std::string generator_model = "GPT-4";  // model that produced the MR under review
    std::vector<std::string> flags;  // e.g. "gate-corrected"
    bool operator==(const RubricScoreSheet&) const = default;

    int raw_total() const;
};

enum class ViolationKind { MissingCriterion, UnknownCriterion, OutOfRange, GateCompleteness, GateCorrectness };

struct Violation {
    ViolationKind kind;
    std::string criterion;
    std::string message;
};

struct SheetValidation {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks presence, ranges and the two gates. Violations are data, never thrown.
SheetValidation validate_score_sheet(const RubricScoreSheet& sheet);

/// Returns `sheet` with gate-dependent criteria zeroed; used to correct
/// gate-violating evaluator output. Range problems are left untouched.
RubricScoreSheet apply_gates(RubricScoreSheet sheet);

std::string to_string(Scheme s);
std::string to_string(EvaluatorKind k);
std::string to_string(ViolationKind k);
Scheme scheme_from_string(const std::string& s);
EvaluatorKind evaluator_kind_from_string(const std::string& s);

void to_json(nlohmann::json& j, const RubricScoreSheet& sheet);
void from_json(const nlohmann::json& j, RubricScoreSheet& sheet);

RubricScoreSheet load_score_sheet(const std::filesystem::path& path);
void save_score_sheet(const RubricScoreSheet& sheet, const std::filesystem::path& path);

}  // namespace mrbench
