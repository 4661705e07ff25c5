#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <variant>

#include "mrbench/error.hpp"
#include "mrbench/relations.hpp"

namespace mrbench::relations {

template <class T>
const T& as(const TestInput& in) {
    if (const auto* p = std::get_if<T>(&in)) return *p;
    throw PreconditionError("relation applied to a '" + std::string(input_kind(in)) + "' input");
}

template <class T>
const T& as(const SutOutput& out) {
    if (const auto* p = std::get_if<T>(&out)) return *p;
    throw PreconditionError("unexpected '" + std::string(output_kind(out)) + "' output");
}

inline double param(const ParamValues& p, const std::string& name) {
    auto it = p.find(name);
    if (it == p.end()) throw PreconditionError("missing parameter '" + name + "'");
    return it->second;
}

inline long index_param(const ParamValues& p, const std::string& name) {
    return static_cast<long>(std::llround(param(p, name)));
}

inline double sample_range(Rng& rng, const std::map<std::string, ParamRange>& ranges, const std::string& name) {
    auto it = ranges.find(name);
    if (it == ranges.end()) throw PreconditionError("no range declared for '" + name + "'");
    return rng.uniform(it->second.min, it->second.max);
}

inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline CheckResult near(double actual, double expected, double tol, const std::string& what) {
    const double diff = std::abs(actual - expected);
    if (diff <= tol) return CheckResult::ok();
    return CheckResult::fail(what + ": got " + num(actual) + ", expected " + num(expected) + " (|diff| " +
                             num(diff) + " > " + num(tol) + ")");
}

template <class V, class W>
CheckResult near_all(const V& actual, const W& expected, double tol, const std::string& what) {
    if (actual.size() != expected.size())
        return CheckResult::fail(what + ": length " + std::to_string(actual.size()) + " vs " +
                                 std::to_string(expected.size()));
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double diff = std::abs(actual[i] - expected[i]);
        if (!(diff <= tol))
            return CheckResult::fail(what + "[" + std::to_string(i) + "]: |diff| " + num(diff) + " > " + num(tol));
    }
    return CheckResult::ok();
}

/// Runs checks in order and stops at the first failure.
template <class... Checks>
CheckResult all_of(Checks&&... checks) {
    CheckResult result = CheckResult::ok();
    ((result.pass ? (void)(result = checks()) : void()), ...);
    return result;
}

}  // namespace mrbench::relations
