#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrbench/types.hpp"

namespace mrbench {

/// Resolved parameter values for one trial. Tunable constants (k, c, ...) and
/// structural choices (edge index, permutation seed) share the map; the latter
/// are stored as whole numbers.
using ParamValues = std::map<std::string, double>;

/// Everything needed to replay a failed trial.
struct Witness {
    std::uint64_t trial_index = 0;
    std::uint64_t trial_seed = 0;
    ParamValues params;
    TestInput source_input;
    TestInput followup_input;
    std::vector<TestInput> companion_inputs;
    SutOutput source_output;
    SutOutput followup_output;
    std::vector<SutOutput> companion_outputs;
    std::string detail;
};

struct MtRunReport {
    std::string mr_id;
    std::string sut_variant;
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    std::vector<Witness> witnesses;
    std::uint64_t seed = 0;
    double tolerance_used = 0.0;
    bool tolerance_overridden = false;
    std::optional<std::string> error;  // per-MR failure (binding resolution etc.)
};

void to_json(nlohmann::json& j, const Witness& w);
void from_json(const nlohmann::json& j, Witness& w);
void to_json(nlohmann::json& j, const MtRunReport& r);
void from_json(const nlohmann::json& j, MtRunReport& r);

/// CSV projection: mr_id,sut_variant,trials,violations,seed,tolerance_used,error
std::string reports_to_csv(const std::vector<MtRunReport>& reports);

}  // namespace mrbench
