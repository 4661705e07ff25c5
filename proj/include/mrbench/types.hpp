#pragma once

// Inputs and outputs of the executable systems under test.

#include <complex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace mrbench {

struct Angle {
    double x = 0.0;  // radians
    bool operator==(const Angle&) const = default;
};

struct NumberList {
    std::vector<double> values;
    bool operator==(const NumberList&) const = default;
};

struct Edge {
    std::string u;
    std::string v;
    double weight = 0.0;
    bool operator==(const Edge&) const = default;
};

struct WeightedGraph {
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    bool directed = false;
    std::string source;
    std::string target;
    bool operator==(const WeightedGraph&) const = default;
};

struct DataRow {
    std::vector<double> predictors;
    double response = 0.0;
    bool operator==(const DataRow&) const = default;
};

struct DataMatrix {
    std::vector<DataRow> rows;
    std::size_t predictor_count() const { return rows.empty() ? 0 : rows.front().predictors.size(); }
    bool operator==(const DataMatrix&) const = default;
};

struct TimeSeries {
    std::vector<double> samples;
    double sample_interval = 1.0;  // seconds
    bool operator==(const TimeSeries&) const = default;
};

using TestInput = std::variant<Angle, NumberList, WeightedGraph, DataMatrix, TimeSeries>;

struct Scalar {
    double value = 0.0;
    bool operator==(const Scalar&) const = default;
};

/// Result of a shortest-path query. `found == false` is the explicit no-path result.
struct Path {
    bool found = false;
    std::vector<std::string> vertices;
    double total_cost = 0.0;
    bool operator==(const Path&) const = default;
};

struct Coefficients {
    double intercept = 0.0;
    std::vector<double> weights;
    std::vector<double> predictions;
    bool operator==(const Coefficients&) const = default;
};

/// One-sided frequency report plus the full set of complex DFT bins.
struct Spectrum {
    std::vector<double> frequencies;  // Hz, k < N/2
    std::vector<std::complex<double>> bins;  // all N bins
    std::vector<double> amplitudes;  // parallel to frequencies
    bool operator==(const Spectrum&) const = default;
};

using SutOutput = std::variant<Scalar, Path, Coefficients, Spectrum>;

/// Tag names used in serialized form ("angle", "number_list", ...).
std::string_view input_kind(const TestInput& input);
std::string_view output_kind(const SutOutput& output);

/// Checks the structural invariants of an input (nonnegative graph weights,
/// series length >= 2, consistent predictor dimension). Returns an empty string
/// when valid, otherwise a description of the first problem found.
std::string check_input(const TestInput& input);

void to_json(nlohmann::json& j, const TestInput& input);
void from_json(const nlohmann::json& j, TestInput& input);
void to_json(nlohmann::json& j, const SutOutput& output);
void from_json(const nlohmann::json& j, SutOutput& output);

}  // namespace mrbench
