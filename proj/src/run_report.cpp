#include "mrbench/run_report.hpp"

#include <cstdio>
#include <sstream>

namespace mrbench {

using nlohmann::json;

void to_json(json& j, const Witness& w) {
    j = json{{"trial_index", w.trial_index},
             {"trial_seed", w.trial_seed},
             {"params", w.params},
             {"source_input", w.source_input},
             {"followup_input", w.followup_input},
             {"source_output", w.source_output},
             {"followup_output", w.followup_output},
             {"detail", w.detail}};
    if (!w.companion_inputs.empty()) {
        j["companion_inputs"] = w.companion_inputs;
        j["companion_outputs"] = w.companion_outputs;
    }
}

void from_json(const json& j, Witness& w) {
    w.trial_index = j.at("trial_index").get<std::uint64_t>();
    w.trial_seed = j.at("trial_seed").get<std::uint64_t>();
    w.params = j.at("params").get<ParamValues>();
    w.source_input = j.at("source_input").get<TestInput>();
    w.followup_input = j.at("followup_input").get<TestInput>();
    w.source_output = j.at("source_output").get<SutOutput>();
    w.followup_output = j.at("followup_output").get<SutOutput>();
    w.companion_inputs = j.value("companion_inputs", std::vector<TestInput>{});
    w.companion_outputs = j.value("companion_outputs", std::vector<SutOutput>{});
    w.detail = j.value("detail", std::string{});
}

void to_json(json& j, const MtRunReport& r) {
    j = json{{"mr_id", r.mr_id},
             {"sut_variant", r.sut_variant},
             {"trials", r.trials},
             {"violations", r.violations},
             {"seed", r.seed},
             {"tolerance_used", r.tolerance_used},
             {"tolerance_overridden", r.tolerance_overridden},
             {"witnesses", r.witnesses}};
    j["error"] = r.error ? json(*r.error) : json(nullptr);
}

void from_json(const json& j, MtRunReport& r) {
    r.mr_id = j.at("mr_id").get<std::string>();
    r.sut_variant = j.at("sut_variant").get<std::string>();
    r.trials = j.at("trials").get<std::uint64_t>();
    r.violations = j.at("violations").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.tolerance_used = j.at("tolerance_used").get<double>();
    r.tolerance_overridden = j.value("tolerance_overridden", false);
    r.witnesses = j.value("witnesses", std::vector<Witness>{});
    if (j.contains("error") && !j["error"].is_null()) r.error = j["error"].get<std::string>();
    else r.error.reset();
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string reports_to_csv(const std::vector<MtRunReport>& reports) {
    std::ostringstream out;
    out << "mr_id,sut_variant,trials,violations,seed,tolerance_used,error\n";
    for (const auto& r : reports) {
        char tol[32];
        std::snprintf(tol, sizeof tol, "%.6g", r.tolerance_used);
        out << csv_field(r.mr_id) << ',' << csv_field(r.sut_variant) << ',' << r.trials << ',' << r.violations << ','
            << r.seed << ',' << tol << ',' << csv_field(r.error.value_or("")) << '\n';
    }
    return out.str();
}

}  // namespace mrbench
