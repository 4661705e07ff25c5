#pragma once

// Metamorphic testing campaigns: source generation, trial execution and
// mutation (kill) matrices.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrbench/catalog.hpp"
#include "mrbench/relations.hpp"
#include "mrbench/run_report.hpp"
#include "mrbench/types.hpp"

namespace mrbench {

struct CampaignConfig {
    std::string sut_id;
    std::string variant_id = "reference";
    /// Empty selects every MR of the SUT, in catalog order.
    std::vector<std::string> mr_ids;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    std::optional<double> tolerance_override;
    std::size_t witness_cap = 10;
    /// 0 uses the hardware concurrency.
    unsigned threads = 0;
};

/// Deterministic source input for trial `index` of a campaign seeded with `seed`.
/// Throws PreconditionError for SUTs without an executable implementation.
TestInput generate_source(const std::string& sut_id, std::uint64_t seed, std::uint64_t index);

/// Seed used for the parameter draws of one trial of one MR.
std::uint64_t trial_seed(std::uint64_t seed, const std::string& mr_id, std::uint64_t index);

/// One report per selected MR. Resolution failures (unknown MR, QUALITATIVE
/// class, bad binding) are reported per MR; a non-executable SUT, unknown
/// variant or zero trial count throws.
std::vector<MtRunReport> run_campaign(const Catalog& catalog, const CampaignConfig& config);

/// Re-executes a stored witness against `variant_id` and returns the verdict.
CheckResult replay_witness(const MetamorphicRelation& mr, const std::string& variant_id, const Witness& witness,
                           std::optional<double> tolerance = std::nullopt);

struct KillMatrix {
    std::string sut_id;
    std::vector<std::string> variants;  // reference first
    std::vector<std::string> mr_ids;
    /// reports[v][m] for variants[v] and mr_ids[m].
    std::vector<std::vector<MtRunReport>> reports;

    bool killed(std::size_t variant, std::size_t mr) const { return reports[variant][mr].violations > 0; }
    std::size_t kills(std::size_t variant) const;
};

KillMatrix mutation_matrix(const Catalog& catalog, const std::string& sut_id, std::uint64_t trials,
                           std::uint64_t seed = 0);

/// Campaign document: the configuration echo plus all reports.
nlohmann::json campaign_to_json(const CampaignConfig& config, const std::vector<MtRunReport>& reports);
nlohmann::json kill_matrix_to_json(const KillMatrix& matrix);
/// Plain-text grid, one row per variant, "X" for a kill.
std::string render_kill_matrix(const KillMatrix& matrix);

}  // namespace mrbench
