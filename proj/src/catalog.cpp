#include "mrbench/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "mrbench/error.hpp"

#ifndef MRBENCH_DATA_DIR_DEFAULT
#define MRBENCH_DATA_DIR_DEFAULT "data"
#endif

namespace mrbench {

using nlohmann::json;

const SutDescriptor* Catalog::find_sut(const std::string& id) const {
    auto it = std::find_if(suts.begin(), suts.end(), [&](const auto& s) { return s.id == id; });
    return it == suts.end() ? nullptr : &*it;
}

const MetamorphicRelation* Catalog::find_mr(const std::string& mr_id) const {
    auto it = std::find_if(mrs.begin(), mrs.end(), [&](const auto& m) { return m.mr_id == mr_id; });
    return it == mrs.end() ? nullptr : &*it;
}

std::vector<const MetamorphicRelation*> Catalog::mrs_for(const std::string& sut_id) const {
    std::vector<const MetamorphicRelation*> out;
    for (const auto& m : mrs)
        if (m.sut_id == sut_id) out.push_back(&m);
    return out;
}

std::string to_string(SutCategory c) {
    switch (c) {
        case SutCategory::BasicComputational: return "BasicComputational";
        case SutCategory::ComplexNoAi: return "ComplexNoAi";
        case SutCategory::ComplexWithAi: return "ComplexWithAi";
    }
    return "?";
}

SutCategory sut_category_from_string(const std::string& s) {
    if (s == "BasicComputational") return SutCategory::BasicComputational;
    if (s == "ComplexNoAi") return SutCategory::ComplexNoAi;
    if (s == "ComplexWithAi") return SutCategory::ComplexWithAi;
    throw ParseError("category", "unknown SUT category '" + s + "'");
}

std::string to_string(RelationKind k) {
    switch (k) {
        case RelationKind::Exact: return "EXACT";
        case RelationKind::Approx: return "APPROX";
        case RelationKind::Qualitative: return "QUALITATIVE";
    }
    return "?";
}

bool is_valid_binding_key(const std::string& key) {
    static const std::regex pattern(R"([a-z][a-z0-9_]*(\.[a-z][a-z0-9_]*)+)");
    return std::regex_match(key, pattern);
}

namespace {

// Turns a parser byte offset into "line N, column M".
std::string position_context(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& field(const json& obj, const char* name, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where, "expected an object");
    auto it = obj.find(name);
    if (it == obj.end()) throw ParseError(where + "." + name, "missing field");
    return *it;
}

std::string string_field(const json& obj, const char* name, const std::string& where) {
    const auto& v = field(obj, name, where);
    if (!v.is_string()) throw ParseError(where + "." + name, "expected a string");
    return v.get<std::string>();
}

SutDescriptor parse_sut(const json& j, const std::string& where) {
    SutDescriptor s;
    s.id = string_field(j, "id", where);
    s.name = string_field(j, "name", where);
    s.description = j.value("description", "");
    s.inputs = j.value("inputs", "");
    s.outputs = j.value("outputs", "");
    try {
        s.category = sut_category_from_string(string_field(j, "category", where));
    } catch (const ParseError& e) {
        throw ParseError(where + ".category", e.what());
    }
    const auto& exec = field(j, "executable", where);
    if (!exec.is_boolean()) throw ParseError(where + ".executable", "expected a boolean");
    s.executable = exec.get<bool>();
    return s;
}

RelationClass parse_relation_class(const json& j, const std::string& where) {
    const auto kind = string_field(j, "kind", where);
    if (kind == "EXACT") return RelationClass::exact();
    if (kind == "QUALITATIVE") return RelationClass::qualitative();
    if (kind == "APPROX") {
        const auto& tol = field(j, "tolerance", where);
        if (!tol.is_number()) throw ParseError(where + ".tolerance", "expected a number");
        const double t = tol.get<double>();
        if (!(t > 0.0)) throw ParseError(where + ".tolerance", "APPROX tolerance must be positive");
        return RelationClass::approx(t);
    }
    throw ParseError(where + ".kind", "unknown relation class '" + kind + "'");
}

MetamorphicRelation parse_mr(const json& j, const std::string& where) {
    MetamorphicRelation m;
    m.mr_id = string_field(j, "mr_id", where);
    m.sut_id = string_field(j, "sut_id", where);
    m.title = string_field(j, "title", where);
    m.narrative = string_field(j, "narrative", where);
    m.relation_class = parse_relation_class(field(j, "relation_class", where), where + ".relation_class");
    if (auto it = j.find("binding"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw ParseError(where + ".binding", "expected a string");
        m.binding = it->get<std::string>();
        if (!is_valid_binding_key(*m.binding))
            throw ParseError(where + ".binding", "malformed binding key '" + *m.binding + "'");
    }
    if (m.relation_class.kind == RelationKind::Qualitative && m.binding)
        throw ParseError(where + ".binding", "QUALITATIVE relations carry no binding");
    if (m.relation_class.kind != RelationKind::Qualitative && !m.binding)
        throw ParseError(where + ".binding", "EXACT/APPROX relations require a binding");
    if (auto it = j.find("params"); it != j.end()) {
        if (!it->is_object()) throw ParseError(where + ".params", "expected an object");
        for (const auto& [name, range] : it->items()) {
            const std::string pw = where + ".params." + name;
            const auto& lo = field(range, "min", pw);
            const auto& hi = field(range, "max", pw);
            if (!lo.is_number() || !hi.is_number()) throw ParseError(pw, "min/max must be numbers");
            ParamRange r{lo.get<double>(), hi.get<double>()};
            if (r.min > r.max) throw ParseError(pw, "min exceeds max");
            m.params.emplace(name, r);
        }
    }
    m.provenance = j.value("provenance", "");
    return m;
}

}  // namespace

MetamorphicRelation parse_mr_record(const json& j) {
    if (!j.is_object()) throw ParseError("", "expected an MR object");
    return parse_mr(j, "mr");
}

Catalog parse_catalog(const std::string& text) {
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) return {};
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(position_context(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    if (!doc.is_object()) throw ParseError("", "catalog must be a JSON object");

    Catalog cat;
    if (auto it = doc.find("suts"); it != doc.end()) {
        if (!it->is_array()) throw ParseError("suts", "expected an array");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < it->size(); ++i) {
            auto s = parse_sut((*it)[i], "suts[" + std::to_string(i) + "]");
            if (!ids.insert(s.id).second) throw ParseError("suts[" + std::to_string(i) + "].id", "duplicate SUT id '" + s.id + "'");
            cat.suts.push_back(std::move(s));
        }
    }
    if (auto it = doc.find("mrs"); it != doc.end()) {
        if (!it->is_array()) throw ParseError("mrs", "expected an array");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string where = "mrs[" + std::to_string(i) + "]";
            auto m = parse_mr((*it)[i], where);
            if (!ids.insert(m.mr_id).second) throw ParseError(where + ".mr_id", "duplicate MR id '" + m.mr_id + "'");
            if (!cat.find_sut(m.sut_id))
                throw ReferenceError(where + ".sut_id: MR '" + m.mr_id + "' references unknown SUT '" + m.sut_id + "'");
            cat.mrs.push_back(std::move(m));
        }
    }
    return cat;
}

Catalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), "cannot open catalog file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_catalog(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(e.context().empty() ? path.string() : path.string() + ": " + e.context(), e.message());
    }
}

void to_json(json& j, const SutDescriptor& s) {
    j = json{{"id", s.id},           {"name", s.name},         {"description", s.description},
             {"inputs", s.inputs},   {"outputs", s.outputs},   {"category", to_string(s.category)},
             {"executable", s.executable}};
}

void to_json(json& j, const MetamorphicRelation& m) {
    json cls{{"kind", to_string(m.relation_class.kind)}};
    if (m.relation_class.kind == RelationKind::Approx) cls["tolerance"] = m.relation_class.tolerance;
    json params = json::object();
    for (const auto& [name, r] : m.params) params[name] = json{{"min", r.min}, {"max", r.max}};
    j = json{{"mr_id", m.mr_id},         {"sut_id", m.sut_id}, {"title", m.title},
             {"narrative", m.narrative}, {"relation_class", cls}, {"params", params},
             {"provenance", m.provenance}};
    if (m.binding) j["binding"] = *m.binding;
}

json catalog_to_json(const Catalog& catalog) {
    json suts = json::array();
    for (const auto& s : catalog.suts) suts.push_back(s);
    json mrs = json::array();
    for (const auto& m : catalog.mrs) mrs.push_back(m);
    return json{{"suts", suts}, {"mrs", mrs}};
}

void save_catalog(const Catalog& catalog, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write catalog to " + path.string());
    out << catalog_to_json(catalog).dump(2) << '\n';
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("MRBENCH_DATA_DIR"); env && *env) return env;
    return MRBENCH_DATA_DIR_DEFAULT;
}

std::filesystem::path default_catalog_path() { return default_data_dir() / "catalog.json"; }

}  // namespace mrbench
