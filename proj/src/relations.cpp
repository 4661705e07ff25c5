#include "mrbench/relations.hpp"

#include <algorithm>

#include "mrbench/error.hpp"
#include "relations_common.hpp"

namespace mrbench {

const RelationRegistry& RelationRegistry::instance() {
    static const RelationRegistry registry = [] {
        RelationRegistry r;
        relations::register_sin(r);
        relations::register_sum(r);
        relations::register_path(r);
        relations::register_regression(r);
        relations::register_fft(r);
        return r;
    }();
    return registry;
}

const Binding* RelationRegistry::find(const std::string& key) const {
    auto it = bindings_.find(key);
    return it == bindings_.end() ? nullptr : &it->second;
}

std::vector<std::string> RelationRegistry::keys() const {
    std::vector<std::string> out;
    out.reserve(bindings_.size());
    for (const auto& [key, _] : bindings_) out.push_back(key);
    return out;
}

void RelationRegistry::add(Binding binding) {
    if (!is_valid_binding_key(binding.key)) throw Error("malformed binding key '" + binding.key + "'");
    binding.transform.binding = binding.key;
    binding.predicate.binding = binding.key;
    for (const auto& spec : binding.transform.params) binding.transform.ranges[spec.name] = spec.bounds;
    const std::string key = binding.key;
    if (!bindings_.emplace(key, std::move(binding)).second) throw Error("binding '" + key + "' registered twice");
}

ResolvedRelation resolve_binding(const MetamorphicRelation& mr) {
    if (mr.relation_class.kind == RelationKind::Qualitative)
        throw PreconditionError(mr.mr_id + " is QUALITATIVE and has no executable binding");
    if (!mr.binding) throw ReferenceError(mr.mr_id + " has no binding key");
    const Binding* b = RelationRegistry::instance().find(*mr.binding);
    if (!b) throw ReferenceError(mr.mr_id + ": unknown binding key '" + *mr.binding + "'");
    if (b->sut_id != mr.sut_id)
        throw ReferenceError(mr.mr_id + ": binding '" + b->key + "' belongs to " + b->sut_id + ", not " + mr.sut_id);

    ResolvedRelation out{b->transform, b->predicate, mr.effective_tolerance()};
    for (const auto& [name, range] : mr.params) {
        auto spec = std::find_if(b->transform.params.begin(), b->transform.params.end(),
                                 [&](const ParamSpec& s) { return s.name == name; });
        if (spec == b->transform.params.end())
            throw ReferenceError(mr.mr_id + ": binding '" + b->key + "' has no parameter '" + name + "'");
        if (range.min < spec->bounds.min || range.max > spec->bounds.max)
            throw ReferenceError(mr.mr_id + ": range for '" + name + "' [" + relations::num(range.min) + ", " +
                                 relations::num(range.max) + "] exceeds the binding's bounds [" +
                                 relations::num(spec->bounds.min) + ", " + relations::num(spec->bounds.max) + "]");
        out.transform.ranges[name] = range;
    }
    return out;
}

FollowUp apply_transform(const InputTransform& transform, const TestInput& source, const ParamValues& params) {
    for (const auto& spec : transform.params) {
        auto it = params.find(spec.name);
        if (it == params.end()) throw PreconditionError(transform.binding + ": missing parameter '" + spec.name + "'");
        auto range = transform.ranges.find(spec.name);
        const ParamRange& r = range == transform.ranges.end() ? spec.bounds : range->second;
        if (!r.contains(it->second))
            throw PreconditionError(transform.binding + ": parameter '" + spec.name + "' = " +
                                    relations::num(it->second) + " outside [" + relations::num(r.min) + ", " +
                                    relations::num(r.max) + "]");
    }
    FollowUp out = transform.apply(source, params);
    if (out.input.index() != source.index())
        throw Error(transform.binding + ": transform changed the input kind from " +
                    std::string(input_kind(source)) + " to " + std::string(input_kind(out.input)));
    for (const auto& c : out.companions)
        if (c.index() != source.index()) throw Error(transform.binding + ": companion input has the wrong kind");
    if (auto why = check_input(out.input); !why.empty())
        throw Error(transform.binding + ": follow-up input is invalid: " + why);
    return out;
}

CheckResult check_predicate(const OutputPredicate& predicate, const TrialContext& ctx) {
    return predicate.check(ctx);
}

}  // namespace mrbench
