#pragma once
// Slow, independent reimplementations used as test oracles. None of these
// call into the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "mrbench/types.hpp"

namespace oracle {

/// Range-reduced Taylor series, summed until the term drops below 1e-17.
inline double taylor_sin(double x) {
    const double two_pi = 2.0 * std::numbers::pi;
    x = std::fmod(x, two_pi);
    if (x > std::numbers::pi) x -= two_pi;
    if (x < -std::numbers::pi) x += two_pi;
    double term = x, sum = x;
    for (int n = 1; std::abs(term) > 1e-17; ++n) {
        term *= -x * x / ((2.0 * n) * (2.0 * n + 1.0));
        sum += term;
    }
    return sum;
}

/// Neumaier compensated summation.
inline double compensated_sum(const std::vector<double>& v) {
    double sum = 0.0, c = 0.0;
    for (double x : v) {
        const double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * i) % n) / static_cast<double>(n);
            acc += x[i] * std::polar(1.0, angle);
        }
        out[k] = acc;
    }
    return out;
}

struct BrutePath {
    bool found = false;
    double cost = std::numeric_limits<double>::infinity();
    std::vector<std::string> vertices;
};

/// Enumerates every simple path by DFS. Among paths whose cost is within
/// 1e-12 relative of the optimum the lexicographically smallest vertex
/// sequence is kept; the cost reported for a path is the sum of the cheapest
/// parallel edge at each step.
inline BrutePath brute_force_path(const mrbench::WeightedGraph& g) {
    const auto n = g.vertices.size();
    auto index = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(g.vertices.begin(), g.vertices.end(), name) - g.vertices.begin());
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> w(n, std::vector<double>(n, inf));
    for (const auto& e : g.edges) {
        const auto a = index(e.u), b = index(e.v);
        w[a][b] = std::min(w[a][b], e.weight);
        if (!g.directed) w[b][a] = std::min(w[b][a], e.weight);
    }
    const auto s = index(g.source), t = index(g.target);
    std::vector<std::vector<std::string>> paths;
    std::vector<double> costs;
    std::vector<std::size_t> stack{s};
    std::vector<bool> on(n, false);
    on[s] = true;
    auto dfs = [&](auto&& self, std::size_t at, double cost) -> void {
        if (at == t) {
            std::vector<std::string> names;
            for (auto i : stack) names.push_back(g.vertices[i]);
            paths.push_back(names);
            costs.push_back(cost);
            return;
        }
        for (std::size_t next = 0; next < n; ++next) {
            if (on[next] || w[at][next] == inf) continue;
            on[next] = true;
            stack.push_back(next);
            self(self, next, cost + w[at][next]);
            stack.pop_back();
            on[next] = false;
        }
    };
    dfs(dfs, s, 0.0);
    BrutePath best;
    if (paths.empty()) return best;
    best.found = true;
    best.cost = *std::min_element(costs.begin(), costs.end());
    const double slack = 1e-12 * std::max(1.0, best.cost);
    for (std::size_t i = 0; i < paths.size(); ++i)
        if (costs[i] <= best.cost + slack && (best.vertices.empty() || paths[i] < best.vertices)) best.vertices = paths[i];
    return best;
}

/// Solves the normal equations (A^T A) beta = A^T y by Gaussian elimination
/// with partial pivoting. A has a leading column of ones.
inline std::vector<double> normal_equations(const mrbench::DataMatrix& d) {
    const std::size_t p = d.predictor_count() + 1;
    std::vector<std::vector<double>> m(p, std::vector<double>(p + 1, 0.0));
    for (const auto& row : d.rows) {
        std::vector<double> a{1.0};
        a.insert(a.end(), row.predictors.begin(), row.predictors.end());
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) m[i][j] += a[i] * a[j];
            m[i][p] += a[i] * row.response;
        }
    }
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < p; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        std::swap(m[col], m[pivot]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c <= p; ++c) m[r][c] -= f * m[col][c];
        }
    }
    std::vector<double> beta(p);
    for (std::size_t i = 0; i < p; ++i) beta[i] = m[i][p] / m[i][i];
    return beta;
}

}  // namespace oracle
