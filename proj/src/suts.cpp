#include "mrbench/suts.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "detail.hpp"
#include "mrbench/error.hpp"

namespace mrbench::suts {

Scalar sin_eval(double x) {
    if (!std::isfinite(x)) throw PreconditionError("sin_eval needs a finite angle");
    return Scalar{std::sin(x)};
}

Scalar sum_eval(std::span<const double> values) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return Scalar{acc};
}

namespace {

template <class T>
const T& expect(const TestInput& input, const char* sut) {
    if (const auto* p = std::get_if<T>(&input)) return *p;
    throw PreconditionError(std::string(sut) + " cannot evaluate a '" + std::string(input_kind(input)) + "' input");
}

SutFunction on_angle(std::function<double(double)> f) {
    return [f = std::move(f)](const TestInput& in) -> SutOutput {
        const double x = expect<Angle>(in, "SIN").x;
        if (!std::isfinite(x)) throw PreconditionError("sin_eval needs a finite angle");
        return Scalar{f(x)};
    };
}

SutFunction on_list(std::function<double(std::span<const double>)> f) {
    return [f = std::move(f)](const TestInput& in) -> SutOutput { return Scalar{f(expect<NumberList>(in, "SUM").values)}; };
}

SutFunction on_graph(std::function<Path(const WeightedGraph&)> f) {
    return [f = std::move(f)](const TestInput& in) -> SutOutput { return f(expect<WeightedGraph>(in, "SHORTEST-PATH")); };
}

SutFunction on_data(std::function<Coefficients(const DataMatrix&)> f) {
    return [f = std::move(f)](const TestInput& in) -> SutOutput { return f(expect<DataMatrix>(in, "REGRESSION")); };
}

SutFunction on_series(std::function<Spectrum(const TimeSeries&)> f) {
    return [f = std::move(f)](const TestInput& in) -> SutOutput { return f(expect<TimeSeries>(in, "FFT")); };
}

WeightedGraph witness_graph() {
    // Greedy takes A-B (1) then B-C (5); the optimum is A-C directly (3).
    // Fewest hops also picks A-C, so the diamond below separates min-hop.
    return WeightedGraph{{"A", "B", "C"}, {{"A", "B", 1.0}, {"B", "C", 5.0}, {"A", "C", 3.0}}, false, "A", "C"};
}

WeightedGraph witness_diamond() {
    return WeightedGraph{{"A", "B", "C", "D"},
                         {{"A", "D", 10.0}, {"A", "B", 1.0}, {"B", "C", 1.0}, {"C", "D", 1.0}},
                         false, "A", "D"};
}

DataMatrix witness_data() { return DataMatrix{{{{0.0}, 1.0}, {{1.0}, 3.0}, {{2.0}, 5.0}}}; }

class Registry {
public:
    Registry() {
        add("SIN", kReferenceVariant, VariantKind::Reference, "sine from the C++ runtime",
            on_angle([](double x) { return std::sin(x); }), {});
        add("SIN", "mutant-offset", VariantKind::Mutant, "returns sin(x) + 0.01",
            on_angle([](double x) { return std::sin(x) + 0.01; }), {Angle{0.0}});
        add("SIN", "mutant-cosine", VariantKind::Mutant, "confuses sine with cosine",
            on_angle([](double x) { return std::cos(x); }), {Angle{0.0}});

        add("SUM", kReferenceVariant, VariantKind::Reference, "left-to-right running sum",
            on_list([](std::span<const double> v) { return sum_eval(v).value; }), {});
        add("SUM", "mutant-drop-first", VariantKind::Mutant, "skips the first element",
            on_list([](std::span<const double> v) { return v.empty() ? 0.0 : sum_eval(v.subspan(1)).value; }),
            {NumberList{{1.0, 2.0, 3.0}}});
        add("SUM", "mutant-double-last", VariantKind::Mutant, "counts the last element twice",
            on_list([](std::span<const double> v) { return v.empty() ? 0.0 : sum_eval(v).value + v.back(); }),
            {NumberList{{1.0, 2.0, 3.0}}});

        add("SHORTEST-PATH", kReferenceVariant, VariantKind::Reference,
            "Dijkstra with lexicographic tie-break", on_graph(shortest_path), {});
        add("SHORTEST-PATH", "mutant-greedy", VariantKind::Mutant,
            "always walks to the nearest unvisited neighbour", on_graph(detail::greedy_nearest_path),
            {witness_graph()});
        add("SHORTEST-PATH", "mutant-min-hop", VariantKind::Mutant, "minimises edge count, ignores weights",
            on_graph(detail::min_hop_path), {witness_diamond()});

        add("REGRESSION", kReferenceVariant, VariantKind::Reference, "minimum-norm least squares with intercept",
            on_data(ols_fit), {});
        add("REGRESSION", "mutant-no-intercept", VariantKind::Mutant, "fits through the origin",
            on_data(detail::fit_without_intercept), {witness_data()});
        add("REGRESSION", "mutant-ridge", VariantKind::Mutant, "adds an L2 penalty (lambda = 1) on the weights",
            on_data([](const DataMatrix& d) { return detail::fit_ridge(d, 1.0); }), {witness_data()});

        add("FFT", kReferenceVariant, VariantKind::Reference, "radix-2 FFT, direct DFT for other lengths",
            on_series(fft_eval), {});
        add("FFT", "mutant-unnormalized-reversal", VariantKind::Mutant,
            "reports bins in reversed order and skips amplitude normalisation",
            on_series([](const TimeSeries& ts) {
                auto s = fft_eval(ts);
                std::reverse(s.bins.begin(), s.bins.end());
                for (std::size_t k = 0; k < s.amplitudes.size(); ++k) s.amplitudes[k] = std::abs(s.bins[k]);
                return s;
            }),
            {TimeSeries{{1.0, 0.0, 0.0, 0.0}, 1.0}});
        add("FFT", "mutant-skip-bitreverse", VariantKind::Mutant,
            "radix-2 butterflies without the bit-reversal reordering",
            on_series([](const TimeSeries& ts) {
                if (!is_power_of_two(ts.samples.size())) return fft_eval(ts);
                return make_spectrum(detail::radix2(to_complex(ts.samples), false, false), ts.sample_interval);
            }),
            {TimeSeries{{1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0, 0.0}, 1.0}});
    }

    static const Registry& instance() {
        static const Registry registry;
        return registry;
    }

    std::vector<const RegisteredVariant*> variants(const std::string& sut) const {
        std::vector<const RegisteredVariant*> out;
        for (const auto& v : entries_)
            if (v.info.sut_id == sut) out.push_back(&v);
        return out;
    }

private:
    void add(std::string sut, std::string id, VariantKind kind, std::string description, SutFunction f,
             std::vector<TestInput> witnesses) {
        entries_.push_back(RegisteredVariant{SutVariant{std::move(sut), std::move(id), kind, std::move(description)},
                                             std::move(f), std::move(witnesses)});
    }

    std::vector<RegisteredVariant> entries_;
};

}  // namespace

const std::vector<std::string>& executable_sut_ids() {
    static const std::vector<std::string> ids{"SIN", "SUM", "SHORTEST-PATH", "REGRESSION", "FFT"};
    return ids;
}

bool is_executable(const std::string& sut_id) {
    const auto& ids = executable_sut_ids();
    return std::find(ids.begin(), ids.end(), sut_id) != ids.end();
}

std::vector<const RegisteredVariant*> variants_for(const std::string& sut_id) {
    return Registry::instance().variants(sut_id);
}

const RegisteredVariant& find_variant(const std::string& sut_id, const std::string& variant_id) {
    for (const auto* v : variants_for(sut_id))
        if (v->info.variant_id == variant_id) return *v;
    throw ReferenceError("unknown variant '" + variant_id + "' for SUT '" + sut_id + "'");
}

SutFunction get_variant(const std::string& sut_id, const std::string& variant_id) {
    return find_variant(sut_id, variant_id).evaluate;
}

}  // namespace mrbench::suts
