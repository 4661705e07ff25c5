#pragma once

// Systems under test, metamorphic relations, and the catalog file format.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mrbench {

enum class SutCategory { BasicComputational, ComplexNoAi, ComplexWithAi };

struct SutDescriptor {
    std::string id;
    std::string name;
    std::string description;
    std::string inputs;
    std::string outputs;
    SutCategory category = SutCategory::BasicComputational;
    bool executable = false;
    bool operator==(const SutDescriptor&) const = default;
};

enum class RelationKind { Exact, Approx, Qualitative };

struct RelationClass {
    RelationKind kind = RelationKind::Qualitative;
    double tolerance = 0.0;  // meaningful for Approx only
    bool operator==(const RelationClass&) const = default;

    static RelationClass exact() { return {RelationKind::Exact, 0.0}; }
    static RelationClass approx(double tol) { return {RelationKind::Approx, tol}; }
    static RelationClass qualitative() { return {RelationKind::Qualitative, 0.0}; }
};

/// Absolute tolerance applied to EXACT relations over floating-point outputs.
inline constexpr double kExactTolerance = 1e-9;

/// Closed interval a tunable relation parameter is sampled from.
struct ParamRange {
    double min = 0.0;
    double max = 0.0;
    bool contains(double v) const { return v >= min && v <= max; }
    bool operator==(const ParamRange&) const = default;
};

struct MetamorphicRelation {
    std::string mr_id;
    std::string sut_id;
    std::string title;
    std::string narrative;
    RelationClass relation_class;
    std::optional<std::string> binding;
    std::map<std::string, ParamRange> params;
    std::string provenance;
    bool operator==(const MetamorphicRelation&) const = default;

    bool executable() const { return relation_class.kind != RelationKind::Qualitative; }
    /// Tolerance the predicate should use: declared APPROX tolerance or kExactTolerance.
    double effective_tolerance() const {
        return relation_class.kind == RelationKind::Approx ? relation_class.tolerance : kExactTolerance;
    }
};

struct Catalog {
    std::vector<SutDescriptor> suts;
    std::vector<MetamorphicRelation> mrs;

    const SutDescriptor* find_sut(const std::string& id) const;
    const MetamorphicRelation* find_mr(const std::string& mr_id) const;
    std::vector<const MetamorphicRelation*> mrs_for(const std::string& sut_id) const;
};

std::string to_string(SutCategory c);
SutCategory sut_category_from_string(const std::string& s);
std::string to_string(RelationKind k);

/// Binding keys look like "sin.additive_angle": lowercase dotted identifiers.
bool is_valid_binding_key(const std::string& key);

/// Parses and validates catalog JSON text. Throws ParseError (with the
/// offending record/field as context) or ReferenceError for a dangling sut_id.
/// Empty text or whitespace yields an empty catalog.
Catalog parse_catalog(const std::string& text);
Catalog load_catalog(const std::filesystem::path& path);

/// Parses one MR record with the same rules as a catalog entry (sut_id is not resolved).
MetamorphicRelation parse_mr_record(const nlohmann::json& j);

nlohmann::json catalog_to_json(const Catalog& catalog);
void save_catalog(const Catalog& catalog, const std::filesystem::path& path);

/// Catalog shipped in data/catalog.json (path resolved at build time, overridable
/// with MRBENCH_DATA_DIR).
std::filesystem::path default_data_dir();
std::filesystem::path default_catalog_path();

void to_json(nlohmann::json& j, const MetamorphicRelation& mr);
void to_json(nlohmann::json& j, const SutDescriptor& sut);

}  // namespace mrbench
