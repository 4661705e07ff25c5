#include <cmath>
#include <numbers>

#include "detail.hpp"
#include "mrbench/error.hpp"

namespace mrbench::suts {

namespace {

// exp(sign * 2 pi i m / n) for m in [0, n), evaluated directly per entry.
ComplexVector twiddles(std::size_t n, bool inverse) {
    ComplexVector w(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
        w[m] = {std::cos(angle), sign * std::sin(angle)};
    }
    return w;
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

ComplexVector dft_direct(std::span<const std::complex<double>> x, bool inverse) {
    const std::size_t n = x.size();
    ComplexVector out(n);
    if (n == 0) return out;
    const auto w = twiddles(n, inverse);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) acc += x[i] * w[(k * i) % n];
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

namespace detail {

ComplexVector radix2(std::span<const std::complex<double>> x, bool inverse, bool bit_reverse) {
    const std::size_t n = x.size();
    if (!is_power_of_two(n)) throw PreconditionError("radix-2 transform needs a power-of-two length");
    ComplexVector a(x.begin(), x.end());
    if (bit_reverse) {
        for (std::size_t i = 1, j = 0; i < n; ++i) {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
    }
    const auto w = twiddles(n, inverse);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const auto u = a[start + j];
                const auto v = a[start + j + half] * w[j * stride];
                a[start + j] = u + v;
                a[start + j + half] = u - v;
            }
        }
    }
    if (inverse)
        for (auto& c : a) c /= static_cast<double>(n);
    return a;
}

}  // namespace detail

ComplexVector fft_radix2(std::span<const std::complex<double>> x, bool inverse) {
    return detail::radix2(x, inverse, true);
}

ComplexVector dft(std::span<const std::complex<double>> x, bool inverse) {
    return is_power_of_two(x.size()) ? fft_radix2(x, inverse) : dft_direct(x, inverse);
}

ComplexVector to_complex(std::span<const double> samples) {
    ComplexVector out;
    out.reserve(samples.size());
    for (double s : samples) out.emplace_back(s, 0.0);
    return out;
}

Spectrum make_spectrum(ComplexVector bins, double sample_interval) {
    Spectrum s;
    const std::size_t n = bins.size();
    const double dn = static_cast<double>(n);
    for (std::size_t k = 0; 2 * k < n; ++k) {
        s.frequencies.push_back(static_cast<double>(k) / (dn * sample_interval));
        const double mag = std::abs(bins[k]);
        s.amplitudes.push_back(k == 0 ? mag / dn : 2.0 * mag / dn);
    }
    s.bins = std::move(bins);
    return s;
}

Spectrum fft_eval(const TimeSeries& series) {
    if (series.samples.size() < 2) throw PreconditionError("fft_eval needs at least 2 samples");
    if (!(series.sample_interval > 0.0)) throw PreconditionError("sample interval must be positive");
    for (double v : series.samples)
        if (!std::isfinite(v)) throw PreconditionError("fft_eval input contains a non-finite sample");
    return make_spectrum(dft(to_complex(series.samples)), series.sample_interval);
}

}  // namespace mrbench::suts
