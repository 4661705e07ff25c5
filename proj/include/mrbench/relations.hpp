#pragma once

// Executable bindings for metamorphic relations: how a follow-up input is
// derived from a source input, and what must hold between their outputs.

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mrbench/catalog.hpp"
#include "mrbench/rng.hpp"
#include "mrbench/run_report.hpp"
#include "mrbench/types.hpp"

namespace mrbench {

/// A tunable constant of a transform. `bounds` is the hard validity range;
/// catalogs may narrow it, never widen it.
struct ParamSpec {
    std::string name;
    ParamRange bounds;
};

/// Follow-up input plus any companion inputs the output relation needs
/// (e.g. the second list of a concatenation).
struct FollowUp {
    TestInput input;
    std::vector<TestInput> companions;
};

struct InputTransform {
    std::string binding;
    std::vector<ParamSpec> params;
    /// Effective sampling ranges (catalog ranges after resolution).
    std::map<std::string, ParamRange> ranges;

    /// Draws tunable values from `ranges` and picks any structural choices
    /// (edge, row permutation, ...) from the source input and output.
    std::function<ParamValues(const TestInput& source, const SutOutput& source_output, Rng& rng,
                              const std::map<std::string, ParamRange>& ranges)>
        sample;
    /// Pure construction of the follow-up from the source and parameters.
    std::function<FollowUp(const TestInput& source, const ParamValues& params)> apply;
};

struct CheckResult {
    bool pass = true;
    std::string detail;

    static CheckResult ok() { return {true, {}}; }
    static CheckResult fail(std::string why) { return {false, std::move(why)}; }
};

struct TrialContext {
    const TestInput& source_input;
    const FollowUp& followup;
    const SutOutput& source_output;
    const SutOutput& followup_output;
    std::span<const SutOutput> companion_outputs;
    const ParamValues& params;
    double tolerance;
};

struct OutputPredicate {
    std::string binding;
    std::function<CheckResult(const TrialContext&)> check;
};

struct Binding {
    std::string key;
    std::string sut_id;
    RelationClass relation_class;  // class the binding is designed for
    InputTransform transform;
    OutputPredicate predicate;
    std::string note;
};

/// Immutable after construction; safe to share between threads.
class RelationRegistry {
public:
    static const RelationRegistry& instance();

    const Binding* find(const std::string& key) const;
    std::vector<std::string> keys() const;

    void add(Binding binding);

private:
    std::map<std::string, Binding> bindings_;
};

struct ResolvedRelation {
    InputTransform transform;
    OutputPredicate predicate;
    double tolerance = kExactTolerance;
};

/// Looks up an MR's binding and narrows the parameter ranges to the catalog's.
/// Throws PreconditionError for QUALITATIVE relations and ReferenceError for
/// unknown keys or parameter specs that disagree with the registry.
ResolvedRelation resolve_binding(const MetamorphicRelation& mr);

/// Validates tunable parameters against the transform's ranges, applies it and
/// checks the follow-up keeps the source's input variant.
FollowUp apply_transform(const InputTransform& transform, const TestInput& source, const ParamValues& params);

CheckResult check_predicate(const OutputPredicate& predicate, const TrialContext& ctx);

namespace relations {
void register_sin(RelationRegistry& r);
void register_sum(RelationRegistry& r);
void register_path(RelationRegistry& r);
void register_regression(RelationRegistry& r);
void register_fft(RelationRegistry& r);
}  // namespace relations

}  // namespace mrbench
