#pragma once

// Reference implementations of the executable systems under test and the
// registry of reference/mutant variants used by campaigns.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mrbench/types.hpp"

namespace mrbench::suts {

Scalar sin_eval(double x);
/// Left-to-right running sum; the empty list sums to 0.
Scalar sum_eval(std::span<const double> values);
/// Minimal-cost path; among equal-cost paths the lexicographically smallest
/// vertex sequence wins. Unreachable targets yield Path{found=false}.
Path shortest_path(const WeightedGraph& graph);
/// Minimum-norm least squares with an intercept column. Identically zero
/// predictor columns get weight exactly 0.
Coefficients ols_fit(const DataMatrix& data);
/// DFT of the series: radix-2 for power-of-two lengths, direct otherwise.
Spectrum fft_eval(const TimeSeries& series);

// ---- numerical building blocks shared with the relation bindings ----

using ComplexVector = std::vector<std::complex<double>>;

bool is_power_of_two(std::size_t n);
/// O(N^2) evaluation of X_k = sum_i x_i exp(-2 pi i k i / N); `inverse` flips the
/// sign and divides by N.
ComplexVector dft_direct(std::span<const std::complex<double>> x, bool inverse = false);
/// Iterative radix-2 transform. Requires a power-of-two length.
ComplexVector fft_radix2(std::span<const std::complex<double>> x, bool inverse = false);
/// Radix-2 when possible, direct otherwise.
ComplexVector dft(std::span<const std::complex<double>> x, bool inverse = false);
ComplexVector to_complex(std::span<const double> samples);
/// Builds the one-sided report: frequencies k/(N dt) for k < N/2 and
/// amplitudes 2|X_k|/N (|X_0|/N for the DC bin).
Spectrum make_spectrum(ComplexVector bins, double sample_interval);

/// Single-source distances (Dijkstra). Unreachable vertices get +infinity.
/// With `reverse` the edge directions are flipped (distances *to* `from`).
std::vector<double> graph_distances(const WeightedGraph& graph, const std::string& from, bool reverse = false);
int vertex_index(const WeightedGraph& graph, const std::string& name);

// ---- variants ----

enum class VariantKind { Reference, Mutant };

struct SutVariant {
    std::string sut_id;
    std::string variant_id;
    VariantKind kind = VariantKind::Reference;
    std::string description;
};

using SutFunction = std::function<SutOutput(const TestInput&)>;

struct RegisteredVariant {
    SutVariant info;
    SutFunction evaluate;
    /// Inputs on which a mutant is known to differ from its reference.
    std::vector<TestInput> witnesses;
};

inline constexpr const char* kReferenceVariant = "reference";

/// Ids of the SUTs that have executable implementations.
const std::vector<std::string>& executable_sut_ids();
bool is_executable(const std::string& sut_id);

/// All registered variants for a SUT, reference first. Empty for unknown SUTs.
std::vector<const RegisteredVariant*> variants_for(const std::string& sut_id);
const RegisteredVariant& find_variant(const std::string& sut_id, const std::string& variant_id);
/// Throws ReferenceError for an unknown (sut_id, variant_id) pair.
SutFunction get_variant(const std::string& sut_id, const std::string& variant_id);

}  // namespace mrbench::suts
