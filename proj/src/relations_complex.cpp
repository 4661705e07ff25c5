#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "mrbench/suts.hpp"
#include "relations_common.hpp"

namespace mrbench::relations {
namespace {

using std::numbers::pi;

ParamValues no_params(const TestInput&, const SutOutput&, Rng&, const std::map<std::string, ParamRange>&) {
    return {};
}

// ---- REGRESSION ----

const DataMatrix& data(const TestInput& in) { return as<DataMatrix>(in); }
const Coefficients& coef(const SutOutput& out) { return as<Coefficients>(out); }

std::size_t column(const TestInput& in, const ParamValues& p) {
    const long j = index_param(p, "column");
    if (j < 0 || static_cast<std::size_t>(j) >= data(in).predictor_count())
        throw PreconditionError("column " + std::to_string(j) + " out of range");
    return static_cast<std::size_t>(j);
}

ParamValues pick_column(const TestInput& in, Rng& rng) {
    const auto p = data(in).predictor_count();
    if (p == 0) throw PreconditionError("data matrix has no predictors");
    return {{"column", static_cast<double>(rng.index(p))}};
}

Binding regression_binding(const std::string& key, RelationClass cls = RelationClass::exact()) {
    Binding b;
    b.key = key;
    b.sut_id = "REGRESSION";
    b.relation_class = cls;
    b.transform.sample = no_params;
    return b;
}

CheckResult same_fit(const Coefficients& s, const Coefficients& f, double tol) {
    return all_of([&] { return near(f.intercept, s.intercept, tol, "intercept"); },
                  [&] { return near_all(f.weights, s.weights, tol, "weights"); },
                  [&] { return near_all(f.predictions, s.predictions, tol, "predictions"); });
}

std::string order_key(std::size_t i) { return "order." + std::to_string(i); }

std::vector<std::size_t> row_order(const TestInput& in, const ParamValues& p) {
    const auto n = data(in).rows.size();
    std::vector<std::size_t> order(n);
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const long r = index_param(p, order_key(i));
        if (r < 0 || static_cast<std::size_t>(r) >= n || seen[static_cast<std::size_t>(r)])
            throw PreconditionError("row order is not a permutation");
        order[i] = static_cast<std::size_t>(r);
        seen[order[i]] = true;
    }
    return order;
}

// ---- FFT ----

const TimeSeries& series(const TestInput& in) { return as<TimeSeries>(in); }
const Spectrum& spectrum(const SutOutput& out) { return as<Spectrum>(out); }

double peak_magnitude(const std::vector<std::complex<double>>& bins) {
    double m = 0.0;
    for (const auto& b : bins) m = std::max(m, std::abs(b));
    return m;
}

CheckResult near_bins(const std::vector<std::complex<double>>& actual, const std::vector<std::complex<double>>& expected,
                      double tol, const std::string& what) {
    if (actual.size() != expected.size())
        return CheckResult::fail(what + ": " + std::to_string(actual.size()) + " bins vs " +
                                 std::to_string(expected.size()));
    for (std::size_t k = 0; k < actual.size(); ++k) {
        const double diff = std::abs(actual[k] - expected[k]);
        if (!(diff <= tol))
            return CheckResult::fail(what + " bin " + std::to_string(k) + ": |diff| " + num(diff) + " > " + num(tol));
    }
    return CheckResult::ok();
}

/// Index of the largest non-DC one-sided amplitude.
std::size_t dominant_bin(const Spectrum& s) {
    std::size_t best = 1;
    for (std::size_t k = 1; k < s.amplitudes.size(); ++k)
        if (s.amplitudes[k] > s.amplitudes[best]) best = k;
    return best;
}

Binding fft_binding(const std::string& key, RelationClass cls = RelationClass::exact()) {
    Binding b;
    b.key = key;
    b.sut_id = "FFT";
    b.relation_class = cls;
    b.transform.sample = no_params;
    return b;
}

std::size_t lowpass_cutoff(std::size_t n, double c) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(c * static_cast<double>(n) / 2.0)));
}

bool in_passband(std::size_t k, std::size_t n, std::size_t cutoff) { return std::min(k, n - k) <= cutoff; }

}  // namespace

void register_regression(RelationRegistry& r) {
    Binding scale = regression_binding("regression.data_scaling");
    scale.transform.params = {{"c", {1e-6, 1e6}}};
    scale.transform.sample = [](const TestInput& in, const SutOutput&, Rng& rng,
                                const std::map<std::string, ParamRange>& ranges) {
        ParamValues p = pick_column(in, rng);
        p["c"] = sample_range(rng, ranges, "c");
        return p;
    };
    scale.transform.apply = [](const TestInput& in, const ParamValues& p) {
        DataMatrix out = data(in);
        const auto j = column(in, p);
        for (auto& row : out.rows) row.predictors[j] *= param(p, "c");
        return FollowUp{out, {}};
    };
    scale.predicate.check = [](const TrialContext& c) {
        const auto& s = coef(c.source_output);
        const auto& f = coef(c.followup_output);
        std::vector<double> expected = s.weights;
        expected.at(column(c.source_input, c.params)) /= param(c.params, "c");
        return all_of([&] { return near(f.intercept, s.intercept, c.tolerance, "intercept"); },
                      [&] { return near_all(f.weights, expected, c.tolerance, "weights"); },
                      [&] { return near_all(f.predictions, s.predictions, c.tolerance, "predictions"); });
    };
    r.add(std::move(scale));

    Binding shift = regression_binding("regression.data_shifting");
    shift.transform.params = {{"k", {-1e6, 1e6}}};
    shift.transform.sample = [](const TestInput& in, const SutOutput&, Rng& rng,
                                const std::map<std::string, ParamRange>& ranges) {
        ParamValues p = pick_column(in, rng);
        p["k"] = sample_range(rng, ranges, "k");
        return p;
    };
    shift.transform.apply = [](const TestInput& in, const ParamValues& p) {
        DataMatrix out = data(in);
        const auto j = column(in, p);
        for (auto& row : out.rows) row.predictors[j] += param(p, "k");
        return FollowUp{out, {}};
    };
    shift.predicate.check = [](const TrialContext& c) {
        const auto& s = coef(c.source_output);
        const auto& f = coef(c.followup_output);
        const auto j = column(c.source_input, c.params);
        const double intercept = s.intercept - param(c.params, "k") * s.weights.at(j);
        return all_of([&] { return near(f.intercept, intercept, c.tolerance, "intercept"); },
                      [&] { return near_all(f.weights, s.weights, c.tolerance, "weights"); },
                      [&] { return near_all(f.predictions, s.predictions, c.tolerance, "predictions"); });
    };
    r.add(std::move(shift));

    Binding zero = regression_binding("regression.zero_feature_addition");
    zero.transform.apply = [](const TestInput& in, const ParamValues&) {
        DataMatrix out = data(in);
        for (auto& row : out.rows) row.predictors.push_back(0.0);
        return FollowUp{out, {}};
    };
    zero.predicate.check = [](const TrialContext& c) {
        Coefficients expected = coef(c.source_output);
        expected.weights.push_back(0.0);
        return same_fit(expected, coef(c.followup_output), c.tolerance);
    };
    r.add(std::move(zero));

    Binding dup = regression_binding("regression.duplicate_rows");
    dup.transform.apply = [](const TestInput& in, const ParamValues&) {
        DataMatrix out = data(in);
        out.rows.insert(out.rows.end(), data(in).rows.begin(), data(in).rows.end());
        return FollowUp{out, {}};
    };
    dup.predicate.check = [](const TrialContext& c) {
        Coefficients expected = coef(c.source_output);
        expected.predictions.insert(expected.predictions.end(), coef(c.source_output).predictions.begin(),
                                    coef(c.source_output).predictions.end());
        return same_fit(expected, coef(c.followup_output), c.tolerance);
    };
    r.add(std::move(dup));

    Binding one = regression_binding("regression.duplicate_single_row", RelationClass::approx(1e-6));
    one.note = "ambiguous: single-row duplication reweights the fit unless the data are noise-free";
    one.transform.sample = [](const TestInput& in, const SutOutput&, Rng& rng, const std::map<std::string, ParamRange>&) {
        return ParamValues{{"row", static_cast<double>(rng.index(data(in).rows.size()))}};
    };
    one.transform.apply = [](const TestInput& in, const ParamValues& p) {
        DataMatrix out = data(in);
        out.rows.push_back(out.rows.at(static_cast<std::size_t>(index_param(p, "row"))));
        return FollowUp{out, {}};
    };
    one.predicate.check = [](const TrialContext& c) {
        const auto& s = coef(c.source_output);
        const auto& f = coef(c.followup_output);
        return all_of([&] { return near(f.intercept, s.intercept, c.tolerance, "intercept"); },
                      [&] { return near_all(f.weights, s.weights, c.tolerance, "weights"); });
    };
    r.add(std::move(one));

    Binding drop = regression_binding("regression.remove_irrelevant_feature", RelationClass::approx(1e-6));
    drop.transform.sample = [](const TestInput&, const SutOutput& out, Rng&, const std::map<std::string, ParamRange>&) {
        const auto& w = coef(out).weights;
        if (w.empty()) throw PreconditionError("no predictor to remove");
        std::size_t j = 0;
        for (std::size_t i = 1; i < w.size(); ++i)
            if (std::abs(w[i]) < std::abs(w[j])) j = i;
        return ParamValues{{"column", static_cast<double>(j)}};
    };
    drop.transform.apply = [](const TestInput& in, const ParamValues& p) {
        DataMatrix out = data(in);
        const auto j = column(in, p);
        for (auto& row : out.rows) row.predictors.erase(row.predictors.begin() + static_cast<long>(j));
        return FollowUp{out, {}};
    };
    drop.predicate.check = [](const TrialContext& c) {
        const auto& s = coef(c.source_output);
        const auto& f = coef(c.followup_output);
        std::vector<double> expected = s.weights;
        expected.erase(expected.begin() + static_cast<long>(column(c.source_input, c.params)));
        return all_of([&] { return near(f.intercept, s.intercept, c.tolerance, "intercept"); },
                      [&] { return near_all(f.weights, expected, c.tolerance, "remaining weights"); });
    };
    r.add(std::move(drop));

    Binding perm = regression_binding("regression.permute_rows");
    perm.transform.sample = [](const TestInput& in, const SutOutput&, Rng& rng, const std::map<std::string, ParamRange>&) {
        const auto n = data(in).rows.size();
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
        ParamValues p;
        for (std::size_t i = 0; i < n; ++i) p[order_key(i)] = static_cast<double>(order[i]);
        return p;
    };
    perm.transform.apply = [](const TestInput& in, const ParamValues& p) {
        DataMatrix out;
        for (auto i : row_order(in, p)) out.rows.push_back(data(in).rows[i]);
        return FollowUp{out, {}};
    };
    perm.predicate.check = [](const TrialContext& c) {
        Coefficients expected = coef(c.source_output);
        expected.predictions.clear();
        for (auto i : row_order(c.source_input, c.params))
            expected.predictions.push_back(coef(c.source_output).predictions.at(i));
        return same_fit(expected, coef(c.followup_output), c.tolerance);
    };
    r.add(std::move(perm));

    Binding dep = regression_binding("regression.dependent_features");
    dep.transform.params = {{"factor", {-1e6, 1e6}}};
    dep.note = "collinear pair is checked through predictions and the minimum-norm split";
    dep.transform.sample = [](const TestInput& in, const SutOutput&, Rng& rng,
                              const std::map<std::string, ParamRange>& ranges) {
        ParamValues p = pick_column(in, rng);
        p["factor"] = sample_range(rng, ranges, "factor");
        return p;
    };
    dep.transform.apply = [](const TestInput& in, const ParamValues& p) {
        DataMatrix out = data(in);
        const auto j = column(in, p);
        for (auto& row : out.rows) row.predictors.push_back(param(p, "factor") * row.predictors[j]);
        return FollowUp{out, {}};
    };
    dep.predicate.check = [](const TrialContext& c) {
        const auto& s = coef(c.source_output);
        const auto& f = coef(c.followup_output);
        const auto j = column(c.source_input, c.params);
        const double factor = param(c.params, "factor");
        if (f.weights.size() != s.weights.size() + 1)
            return CheckResult::fail("expected " + std::to_string(s.weights.size() + 1) + " weights, got " +
                                     std::to_string(f.weights.size()));
        std::vector<double> others_s = s.weights, others_f(f.weights.begin(), f.weights.end() - 1);
        others_s.erase(others_s.begin() + static_cast<long>(j));
        others_f.erase(others_f.begin() + static_cast<long>(j));
        const double wj = f.weights[j];
        const double wnew = f.weights.back();
        return all_of([&] { return near_all(f.predictions, s.predictions, c.tolerance, "predictions"); },
                      [&] { return near(f.intercept, s.intercept, c.tolerance, "intercept"); },
                      [&] { return near_all(others_f, others_s, c.tolerance, "other weights"); },
                      [&] { return near(wj + factor * wnew, s.weights[j], c.tolerance, "collinear pair sum"); },
                      [&] { return near(wnew, factor * wj, c.tolerance, "minimum-norm split"); });
    };
    r.add(std::move(dep));

    Binding inv = regression_binding("regression.inverse_transformation", RelationClass::approx(1e-8));
    inv.transform.params = {{"c", {1e-6, 1e6}}};
    inv.transform.sample = [](const TestInput&, const SutOutput&, Rng& rng,
                              const std::map<std::string, ParamRange>& ranges) {
        return ParamValues{{"c", sample_range(rng, ranges, "c")}};
    };
    inv.transform.apply = [](const TestInput& in, const ParamValues& p) {
        DataMatrix out = data(in);
        for (auto& row : out.rows) row.response *= param(p, "c");
        return FollowUp{out, {}};
    };
    inv.predicate.check = [](const TrialContext& c) {
        std::vector<double> unscaled = coef(c.followup_output).predictions;
        for (auto& v : unscaled) v /= param(c.params, "c");
        return near_all(unscaled, coef(c.source_output).predictions, c.tolerance, "unscaled predictions");
    };
    r.add(std::move(inv));
}

void register_fft(RelationRegistry& r) {
    Binding time = fft_binding("fft.time_scaling");
    time.transform.params = {{"c", {1e-6, 1e6}}};
    time.note = "samples are kept; only the sample interval shrinks by c";
    const auto sample_c = [](const TestInput&, const SutOutput&, Rng& rng,
                             const std::map<std::string, ParamRange>& ranges) {
        return ParamValues{{"c", sample_range(rng, ranges, "c")}};
    };
    time.transform.sample = sample_c;
    time.transform.apply = [](const TestInput& in, const ParamValues& p) {
        TimeSeries out = series(in);
        out.sample_interval /= param(p, "c");
        return FollowUp{out, {}};
    };
    time.predicate.check = [](const TrialContext& c) {
        const auto& s = spectrum(c.source_output);
        const auto& f = spectrum(c.followup_output);
        std::vector<double> expected = s.frequencies;
        for (auto& v : expected) v *= param(c.params, "c");
        return all_of([&] { return near_all(f.frequencies, expected, c.tolerance, "frequencies"); },
                      [&] { return near_all(f.amplitudes, s.amplitudes, c.tolerance, "amplitudes"); });
    };
    r.add(std::move(time));

    Binding amp = fft_binding("fft.amplitude_scaling");
    amp.transform.params = {{"c", {-1e6, 1e6}}};
    amp.transform.sample = sample_c;
    amp.transform.apply = [](const TestInput& in, const ParamValues& p) {
        TimeSeries out = series(in);
        for (auto& v : out.samples) v *= param(p, "c");
        return FollowUp{out, {}};
    };
    amp.predicate.check = [](const TrialContext& c) {
        auto expected = spectrum(c.source_output).bins;
        for (auto& b : expected) b *= param(c.params, "c");
        return near_bins(spectrum(c.followup_output).bins, expected, c.tolerance, "scaled spectrum");
    };
    r.add(std::move(amp));

    Binding shift = fft_binding("fft.data_shifting");
    shift.transform.params = {{"d", {-1e6, 1e6}}};
    shift.transform.sample = [](const TestInput&, const SutOutput&, Rng& rng,
                                const std::map<std::string, ParamRange>& ranges) {
        return ParamValues{{"d", sample_range(rng, ranges, "d")}};
    };
    shift.transform.apply = [](const TestInput& in, const ParamValues& p) {
        TimeSeries out = series(in);
        for (auto& v : out.samples) v += param(p, "d");
        return FollowUp{out, {}};
    };
    shift.predicate.check = [](const TrialContext& c) {
        auto expected = spectrum(c.source_output).bins;
        if (!expected.empty()) expected[0] += static_cast<double>(expected.size()) * param(c.params, "d");
        return near_bins(spectrum(c.followup_output).bins, expected, c.tolerance, "shifted spectrum");
    };
    r.add(std::move(shift));

    Binding rev = fft_binding("fft.time_reversal");
    rev.transform.apply = [](const TestInput& in, const ParamValues&) {
        TimeSeries out = series(in);
        std::reverse(out.samples.begin(), out.samples.end());
        return FollowUp{out, {}};
    };
    rev.predicate.check = [](const TrialContext& c) {
        const auto& s = spectrum(c.source_output).bins;
        const auto& f = spectrum(c.followup_output).bins;
        if (s.size() != f.size()) return CheckResult::fail("bin count changed");
        std::vector<double> ms, mf;
        for (std::size_t k = 0; k < s.size(); ++k) {
            ms.push_back(std::abs(s[k]));
            mf.push_back(std::abs(f[k]));
        }
        return near_all(mf, ms, c.tolerance, "bin magnitudes");
    };
    r.add(std::move(rev));

    Binding cat = fft_binding("fft.concatenation", RelationClass::approx(1e-6));
    cat.note = "only peak preservation is asserted; the amplitude change is left unquantified";
    cat.transform.apply = [](const TestInput& in, const ParamValues&) {
        TimeSeries out = series(in);
        out.samples.insert(out.samples.end(), series(in).samples.begin(), series(in).samples.end());
        return FollowUp{out, {}};
    };
    cat.predicate.check = [](const TrialContext& c) {
        const auto& s = spectrum(c.source_output).bins;
        const auto& f = spectrum(c.followup_output).bins;
        if (f.size() != 2 * s.size()) return CheckResult::fail("concatenated spectrum has the wrong length");
        const double tol = c.tolerance * std::max(1.0, peak_magnitude(s));
        for (std::size_t k = 0; k < f.size(); ++k) {
            const std::complex<double> expected = k % 2 == 0 ? 2.0 * s[k / 2] : std::complex<double>{};
            const double diff = std::abs(f[k] - expected);
            if (!(diff <= tol))
                return CheckResult::fail("bin " + std::to_string(k) + ": |diff| " + num(diff) + " > " + num(tol));
        }
        return CheckResult::ok();
    };
    r.add(std::move(cat));

    Binding pad = fft_binding("fft.zero_padding", RelationClass::approx(1.0));
    pad.note = "tolerance is measured in original bin widths";
    pad.transform.apply = [](const TestInput& in, const ParamValues&) {
        TimeSeries out = series(in);
        out.samples.resize(2 * out.samples.size(), 0.0);
        return FollowUp{out, {}};
    };
    pad.predicate.check = [](const TrialContext& c) {
        const auto& s = spectrum(c.source_output);
        const auto& f = spectrum(c.followup_output);
        const auto n = s.bins.size();
        if (n < 4 || f.bins.size() != 2 * n) return CheckResult::fail("padded spectrum has the wrong length");
        const double dt = series(c.source_input).sample_interval;
        const double width = 1.0 / (static_cast<double>(n) * dt);
        const double fs = s.frequencies[dominant_bin(s)];
        // The padded DC step leaks into low bins; subtract it before locating the peak.
        std::vector<double> step(2 * n, 0.0);
        std::fill(step.begin(), step.begin() + static_cast<long>(n), 1.0);
        const auto leak = suts::dft(suts::to_complex(step));
        const std::complex<double> mean = s.bins[0] / static_cast<double>(n);
        std::size_t best = 1;
        double best_mag = -1.0;
        for (std::size_t k = 1; k < n; ++k) {
            const double mag = std::abs(f.bins[k] - mean * leak[k]);
            if (mag > best_mag) {
                best_mag = mag;
                best = k;
            }
        }
        const double ff = static_cast<double>(best) / (2.0 * static_cast<double>(n) * dt);
        const double off = std::abs(ff - fs) / width;
        if (off <= c.tolerance) return CheckResult::ok();
        return CheckResult::fail("dominant peak moved from " + num(fs) + " to " + num(ff) + " (" + num(off) +
                                 " bin widths)");
    };
    r.add(std::move(pad));

    Binding low = fft_binding("fft.lowpass_filter", RelationClass::approx(1e-6));
    low.transform.params = {{"cutoff", {0.0, 1.0}}};
    low.transform.sample = [](const TestInput&, const SutOutput&, Rng& rng,
                              const std::map<std::string, ParamRange>& ranges) {
        return ParamValues{{"cutoff", sample_range(rng, ranges, "cutoff")}};
    };
    low.transform.apply = [](const TestInput& in, const ParamValues& p) {
        const auto& src = series(in);
        const auto n = src.samples.size();
        auto bins = suts::dft(suts::to_complex(src.samples));
        const auto cutoff = lowpass_cutoff(n, param(p, "cutoff"));
        for (std::size_t k = 0; k < n; ++k)
            if (!in_passband(k, n, cutoff)) bins[k] = 0.0;
        const auto filtered = suts::dft(bins, true);
        TimeSeries out{{}, src.sample_interval};
        for (const auto& v : filtered) out.samples.push_back(v.real());
        return FollowUp{out, {}};
    };
    low.predicate.check = [](const TrialContext& c) {
        const auto& s = spectrum(c.source_output).bins;
        const auto& f = spectrum(c.followup_output).bins;
        const auto n = s.size();
        if (f.size() != n) return CheckResult::fail("bin count changed");
        const auto cutoff = lowpass_cutoff(n, param(c.params, "cutoff"));
        double total = 0.0, stop = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            total += std::norm(s[k]);
            if (!in_passband(k, n, cutoff)) stop += std::norm(f[k]);
        }
        if (stop > c.tolerance * total)
            return CheckResult::fail("stop-band energy " + num(stop) + " exceeds " + num(c.tolerance) + " of " +
                                     num(total));
        const double tol = c.tolerance * std::max(1.0, peak_magnitude(s));
        for (std::size_t k = 0; k < n; ++k) {
            if (!in_passband(k, n, cutoff)) continue;
            const double diff = std::abs(f[k] - s[k]);
            if (!(diff <= tol))
                return CheckResult::fail("pass-band bin " + std::to_string(k) + ": |diff| " + num(diff) + " > " +
                                         num(tol));
        }
        return CheckResult::ok();
    };
    r.add(std::move(low));

    Binding harm = fft_binding("fft.harmonic_addition", RelationClass::approx(0.05));
    harm.transform.params = {{"amplitude", {0.0, 1e6}}};
    harm.note = "tolerance is relative to the injected amplitude";
    harm.transform.sample = [](const TestInput&, const SutOutput& out, Rng& rng,
                               const std::map<std::string, ParamRange>& ranges) {
        const auto& s = spectrum(out);
        double peak = 0.0;
        for (double a : s.amplitudes) peak = std::max(peak, a);
        std::vector<std::size_t> empty;
        for (std::size_t k = 1; k < s.amplitudes.size(); ++k)
            if (s.amplitudes[k] <= 1e-9 * std::max(1.0, peak)) empty.push_back(k);
        ParamValues p{{"amplitude", sample_range(rng, ranges, "amplitude")}};
        p["bin"] = empty.empty() ? -1.0 : static_cast<double>(empty[rng.index(empty.size())]);
        return p;
    };
    harm.transform.apply = [](const TestInput& in, const ParamValues& p) {
        TimeSeries out = series(in);
        const long k = index_param(p, "bin");
        if (k <= 0) throw PreconditionError("no free bin for the added harmonic");
        const double n = static_cast<double>(out.samples.size());
        for (std::size_t i = 0; i < out.samples.size(); ++i)
            out.samples[i] += param(p, "amplitude") * std::cos(2.0 * pi * static_cast<double>(k) * static_cast<double>(i) / n);
        return FollowUp{out, {}};
    };
    harm.predicate.check = [](const TrialContext& c) {
        const auto& f = spectrum(c.followup_output);
        const auto k = static_cast<std::size_t>(index_param(c.params, "bin"));
        const double injected = param(c.params, "amplitude");
        if (k >= f.amplitudes.size()) return CheckResult::fail("harmonic bin beyond the reported spectrum");
        const double diff = std::abs(f.amplitudes[k] - injected);
        if (diff <= c.tolerance * injected) return CheckResult::ok();
        return CheckResult::fail("amplitude at " + num(f.frequencies[k]) + " is " + num(f.amplitudes[k]) +
                                 ", injected " + num(injected));
    };
    r.add(std::move(harm));
}

}  // namespace mrbench::relations
