#pragma once

// Internal helpers shared between translation units of the library.

#include <span>

#include "mrbench/suts.hpp"

namespace mrbench::suts::detail {

/// Radix-2 butterflies; `bit_reverse == false` skips the input reordering
/// (used only by the skip-bitreverse mutant).
ComplexVector radix2(std::span<const std::complex<double>> x, bool inverse, bool bit_reverse);

Path greedy_nearest_path(const WeightedGraph& graph);
Path min_hop_path(const WeightedGraph& graph);
Coefficients fit_without_intercept(const DataMatrix& data);
Coefficients fit_ridge(const DataMatrix& data, double lambda);

}  // namespace mrbench::suts::detail
