#include "mrbench/types.hpp"

#include <cmath>
#include <set>

#include "mrbench/error.hpp"

namespace mrbench {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json complex_array(const std::vector<std::complex<double>>& values) {
    json out = json::array();
    for (const auto& c : values) out.push_back(json::array({c.real(), c.imag()}));
    return out;
}

std::vector<std::complex<double>> complex_from(const json& j) {
    std::vector<std::complex<double>> out;
    out.reserve(j.size());
    for (const auto& c : j) out.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    return out;
}

}  // namespace

std::string_view input_kind(const TestInput& input) {
    return std::visit(overloaded{[](const Angle&) { return std::string_view{"angle"}; },
                                 [](const NumberList&) { return std::string_view{"number_list"}; },
                                 [](const WeightedGraph&) { return std::string_view{"weighted_graph"}; },
                                 [](const DataMatrix&) { return std::string_view{"data_matrix"}; },
                                 [](const TimeSeries&) { return std::string_view{"time_series"}; }},
                      input);
}

std::string_view output_kind(const SutOutput& output) {
    return std::visit(overloaded{[](const Scalar&) { return std::string_view{"scalar"}; },
                                 [](const Path&) { return std::string_view{"path"}; },
                                 [](const Coefficients&) { return std::string_view{"coefficients"}; },
                                 [](const Spectrum&) { return std::string_view{"spectrum"}; }},
                      output);
}

std::string check_input(const TestInput& input) {
    return std::visit(
        overloaded{
            [](const Angle&) { return std::string{}; },
            [](const NumberList&) { return std::string{}; },
            [](const WeightedGraph& g) -> std::string {
                std::set<std::string> names(g.vertices.begin(), g.vertices.end());
                if (names.size() != g.vertices.size()) return "duplicate vertex name";
                for (const auto& e : g.edges) {
                    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) return "edge " + e.u + "-" + e.v + " has negative or non-finite weight";
                    if (!names.count(e.u) || !names.count(e.v)) return "edge " + e.u + "-" + e.v + " references an unknown vertex";
                }
                if (!names.count(g.source) || !names.count(g.target)) return "query endpoint not in vertex set";
                return {};
            },
            [](const DataMatrix& m) -> std::string {
                const auto p = m.predictor_count();
                for (const auto& row : m.rows)
                    if (row.predictors.size() != p) return "rows do not share a predictor dimension";
                return {};
            },
            [](const TimeSeries& ts) -> std::string {
                if (ts.samples.size() < 2) return "time series needs at least 2 samples";
                if (!(ts.sample_interval > 0.0)) return "sample interval must be positive";
                return {};
            }},
        input);
}

void to_json(json& j, const TestInput& input) {
    j = std::visit(overloaded{[](const Angle& a) { return json{{"kind", "angle"}, {"x", a.x}}; },
                              [](const NumberList& l) { return json{{"kind", "number_list"}, {"values", l.values}}; },
                              [](const WeightedGraph& g) {
                                  json edges = json::array();
                                  for (const auto& e : g.edges) edges.push_back(json::array({e.u, e.v, e.weight}));
                                  return json{{"kind", "weighted_graph"}, {"vertices", g.vertices}, {"edges", edges},
                                              {"directed", g.directed}, {"source", g.source}, {"target", g.target}};
                              },
                              [](const DataMatrix& m) {
                                  json rows = json::array();
                                  for (const auto& r : m.rows)
                                      rows.push_back(json{{"x", r.predictors}, {"y", r.response}});
                                  return json{{"kind", "data_matrix"}, {"rows", rows}};
                              },
                              [](const TimeSeries& ts) {
                                  return json{{"kind", "time_series"}, {"samples", ts.samples},
                                              {"sample_interval", ts.sample_interval}};
                              }},
                   input);
}

void from_json(const json& j, TestInput& input) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "angle") {
        input = Angle{j.at("x").get<double>()};
    } else if (kind == "number_list") {
        input = NumberList{j.at("values").get<std::vector<double>>()};
    } else if (kind == "weighted_graph") {
        WeightedGraph g;
        g.vertices = j.at("vertices").get<std::vector<std::string>>();
        for (const auto& e : j.at("edges"))
            g.edges.push_back(Edge{e.at(0).get<std::string>(), e.at(1).get<std::string>(), e.at(2).get<double>()});
        g.directed = j.value("directed", false);
        g.source = j.at("source").get<std::string>();
        g.target = j.at("target").get<std::string>();
        input = std::move(g);
    } else if (kind == "data_matrix") {
        DataMatrix m;
        for (const auto& r : j.at("rows"))
            m.rows.push_back(DataRow{r.at("x").get<std::vector<double>>(), r.at("y").get<double>()});
        input = std::move(m);
    } else if (kind == "time_series") {
        input = TimeSeries{j.at("samples").get<std::vector<double>>(), j.at("sample_interval").get<double>()};
    } else {
        throw ParseError("kind", "unknown test input kind '" + kind + "'");
    }
}

void to_json(json& j, const SutOutput& output) {
    j = std::visit(overloaded{[](const Scalar& s) { return json{{"kind", "scalar"}, {"value", s.value}}; },
                              [](const Path& p) {
                                  return json{{"kind", "path"}, {"found", p.found}, {"vertices", p.vertices},
                                              {"total_cost", p.total_cost}};
                              },
                              [](const Coefficients& c) {
                                  return json{{"kind", "coefficients"}, {"intercept", c.intercept},
                                              {"weights", c.weights}, {"predictions", c.predictions}};
                              },
                              [](const Spectrum& s) {
                                  return json{{"kind", "spectrum"}, {"frequencies", s.frequencies},
                                              {"bins", complex_array(s.bins)}, {"amplitudes", s.amplitudes}};
                              }},
                   output);
}

void from_json(const json& j, SutOutput& output) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "scalar") {
        output = Scalar{j.at("value").get<double>()};
    } else if (kind == "path") {
        output = Path{j.at("found").get<bool>(), j.at("vertices").get<std::vector<std::string>>(),
                      j.at("total_cost").get<double>()};
    } else if (kind == "coefficients") {
        output = Coefficients{j.at("intercept").get<double>(), j.at("weights").get<std::vector<double>>(),
                              j.at("predictions").get<std::vector<double>>()};
    } else if (kind == "spectrum") {
        output = Spectrum{j.at("frequencies").get<std::vector<double>>(), complex_from(j.at("bins")),
                          j.at("amplitudes").get<std::vector<double>>()};
    } else {
        throw ParseError("kind", "unknown output kind '" + kind + "'");
    }
}

}  // namespace mrbench
