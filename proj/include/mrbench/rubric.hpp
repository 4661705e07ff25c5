#pragma once

// Scoring, aggregation and comparison of rubric score sheets.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrbench/catalog.hpp"
#include "mrbench/score_sheet.hpp"

namespace mrbench {

enum class GateRole { None, CompletenessGate, CorrectnessGate };

struct CriterionSpec {
    std::string name;
    std::string label;
    Scheme scheme = Scheme::Updated;
    int max_points = 0;
    /// levels[i] describes what earns level i; size max_points + 1.
    std::vector<std::string> levels;
    GateRole gate = GateRole::None;
};

/// Criterion specs in display order.
const std::vector<CriterionSpec>& criterion_specs(Scheme scheme);
const CriterionSpec& criterion_spec(Scheme scheme, std::string_view name);

/// Total points of a valid sheet. Throws PreconditionError listing the
/// violations when the sheet fails validation.
int score(const RubricScoreSheet& sheet);

/// Published per-group means for a set of MRs, used where individual sheets
/// are unavailable. Weighted by `mr_count` during aggregation.
struct GroupMeans {
    std::string sut_id;
    std::string generator_model = "GPT-4";
    std::string evaluator_id;
    EvaluatorKind evaluator_kind = EvaluatorKind::Human;
    Scheme scheme = Scheme::Updated;
    int mr_count = 1;
    std::map<std::string, double> means;
    bool operator==(const GroupMeans&) const = default;
};

void to_json(nlohmann::json& j, const GroupMeans& g);
void from_json(const nlohmann::json& j, GroupMeans& g);

struct ScoreCorpus {
    std::vector<RubricScoreSheet> sheets;
    std::vector<GroupMeans> group_means;

    bool empty() const { return sheets.empty() && group_means.empty(); }
};

/// Reads every *.json file under `dir` (sorted by path). A file holds one
/// sheet, one group-means record (`"kind": "group_means"`) or an array of them.
ScoreCorpus load_score_dir(const std::filesystem::path& dir);
ScoreCorpus load_score_file(const std::filesystem::path& path);

enum class GroupBy { Sut, Model, Category };
std::string to_string(GroupBy g);
GroupBy group_by_from_string(const std::string& s);

struct AggregateRow {
    std::string group;
    EvaluatorKind evaluator_kind = EvaluatorKind::Human;
    Scheme scheme = Scheme::Updated;
    /// Total weight behind the row (sheets count 1, group means count mr_count).
    double weight = 0.0;
    std::map<std::string, double> means;
    double total = 0.0;  // sum of unrounded means
};

/// Weighted per-criterion means per (group, evaluator kind), in order of first
/// appearance. Throws PreconditionError for mixed schemes or invalid sheets.
/// GroupBy::Category needs `catalog` to map SUT ids to categories.
std::vector<AggregateRow> aggregate(const ScoreCorpus& corpus, GroupBy group_by, const Catalog* catalog = nullptr);
std::vector<AggregateRow> aggregate(const std::vector<RubricScoreSheet>& sheets, GroupBy group_by,
                                    const Catalog* catalog = nullptr);

struct DeltaRow {
    std::string group;
    std::map<std::string, double> deltas;  // b - a
    double total = 0.0;
};

struct Comparison {
    Scheme scheme = Scheme::Updated;
    std::vector<DeltaRow> rows;
    std::vector<std::string> unmatched;  // group keys present on one side only
};

/// Per-criterion b - a for groups present in both row sets.
Comparison compare(const std::vector<AggregateRow>& a, const std::vector<AggregateRow>& b);

/// "Group,Evaluator,<criteria labels...>,Total" with one decimal per cell.
std::string aggregate_to_csv(const std::vector<AggregateRow>& rows);
std::string render_aggregate(const std::vector<AggregateRow>& rows);
std::string render_comparison(const Comparison& comparison);
nlohmann::json aggregate_to_json(const std::vector<AggregateRow>& rows);

/// Long-form projection of sheets: mr_id,criterion,score.
std::string sheets_to_csv(const std::vector<RubricScoreSheet>& sheets);

/// Criterion-by-criterion scoring dialogue. Reads one level per prompt from
/// `answers`, re-prompting on anything outside the criterion's range. Under the
/// Updated scheme a 0 for completeness (or correctness) ends the dialogue with
/// the gated criteria set to 0. Throws PreconditionError if answers run out.
RubricScoreSheet score_interactively(const MetamorphicRelation& mr, Scheme scheme, const std::string& evaluator_id,
                                     std::istream& answers, std::ostream& prompts);

/// One-decimal display rounding used by every report.
std::string format_score(double v);

}  // namespace mrbench
